// SPDX-License-Identifier: Apache-2.0
#include <apktriage/agents/json.hpp>
#include <apktriage/error.hpp>
#include <apktriage/harness/report.hpp>
#include <apktriage/ir/bundle.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace apktriage::harness
{

namespace fs = std::filesystem;
using agents::Json;

namespace
{

Json metrics_json(const MetricSet& m)
{
    auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
    return {{"accuracy", m.accuracy}, {"precision", opt(m.precision)}, {"recall", opt(m.recall)}, {"f1", opt(m.f1)}};
}

std::string file_stem(const std::string& app_id)
{
    std::string out = app_id;
    for (auto& c: out)
    {
        auto const ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
        if (!ok)
            c = '_';
    }
    return out;
}

void write_file(const fs::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::Io, "cannot write " + tmp.string());
        out << content;
        if (!out.flush())
            throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
        throw Error(ErrorCode::Io, "cannot replace " + path.string() + ": " + ec.message());
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    if (fs::exists(dir, ec) && !fs::is_directory(dir, ec))
        throw Error(ErrorCode::Io, dir.string() + " exists and is not a directory");
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

std::string fmt_share(double v)
{
    return fmt::format("{:.4f}", v);
}

struct EntryCost
{
    std::int64_t tokens = 0;
    llm::Usd usd;
};

} // namespace

void emit_reports(const BatchResult& batch, const llm::PricingTable& pricing, const fs::path& out_dir)
{
    ensure_dir(out_dir);
    ensure_dir(out_dir / "reports");
    ensure_dir(out_dir / "traces");

    llm::CostLedger combined;
    std::vector<EntryCost> per_apk;
    std::string jsonl;
    Json skipped = Json::array();
    Json tool_errors = Json::array();
    for (const auto& r: batch.entries)
    {
        Json row;
        row["app_id"] = r.entry.app_id;
        row["label"] = to_string(r.entry.label);
        row["year"] = r.entry.year;
        row["status"] = r.evaluated() ? "evaluated" : "skipped";
        if (r.evaluated())
        {
            const auto& p = *r.pipeline;
            auto const cost = llm::cost_of(p.ledger, pricing);
            combined.extend(p.ledger);
            per_apk.push_back({p.ledger.grand_totals().tokens(), cost.total.total()});

            row["verdict"] = to_string(p.verdict.verdict);
            row["threat_category"] = p.verdict.threat_category;
            row["confidence"] = p.verdict.confidence;
            row["candidates"] = p.recon.candidates.size();
            Json tokens;
            for (auto t: llm::kTiers)
                tokens[std::string(llm::to_string(t))] = p.ledger.totals(t).tokens();
            row["tokens"] = std::move(tokens);
            row["cost_usd"] = cost.total.total().str();
            row["skip_reason"] = nullptr;
        }
        else
        {
            row["verdict"] = nullptr;
            row["skip_reason"] = r.skip_reason;
            skipped.push_back({{"app_id", r.entry.app_id}, {"reason", r.skip_reason}});
        }
        row["tool_errors"] = r.tool_errors.size();
        for (const auto& e: r.tool_errors)
        {
            tool_errors.push_back({{"app_id", r.entry.app_id},
                                   {"candidate", e.candidate},
                                   {"tool", e.tool},
                                   {"code", e.code},
                                   {"message", e.message}});
        }
        jsonl += row.dump() + "\n";
    }

    for (const auto& r: batch.entries)
    {
        if (!r.evaluated())
            continue;
        auto const stem = file_stem(r.entry.app_id);
        write_file(out_dir / "reports" / (stem + ".json"), agents::verdict_to_json(r.pipeline->verdict) + "\n");
        Json evidence = Json::array();
        for (const auto& ev: r.pipeline->evidence)
            evidence.push_back(agents::to_json(ev));
        Json trace{{"app_id", r.entry.app_id}, {"recon", agents::to_json(r.pipeline->recon)}, {"evidence", evidence}};
        write_file(out_dir / "traces" / (stem + ".json"), trace.dump(2) + "\n");
    }
    write_file(out_dir / "results.jsonl", jsonl);

    Json summary;
    summary["entries"] = batch.entries.size();
    summary["evaluated"] = batch.evaluated_count();
    summary["skipped"] = batch.skipped_count();
    summary["confusion"] = {{"tp", batch.counts.tp}, {"tn", batch.counts.tn}, {"fp", batch.counts.fp}, {"fn", batch.counts.fn}};
    summary["metrics"] = batch.metrics ? metrics_json(*batch.metrics) : Json(nullptr);

    std::map<int, std::size_t> year_sizes;
    for (const auto& r: batch.entries)
    {
        if (r.evaluated())
            ++year_sizes[r.entry.year];
    }
    Json per_year = Json::array();
    for (const auto& [year, m]: partition_by_year(batch))
        per_year.push_back({{"year", year}, {"evaluated", year_sizes[year]}, {"metrics", metrics_json(m)}});
    summary["per_year"] = std::move(per_year);

    auto const grand = combined.grand_totals();
    if (grand.tokens() > 0)
    {
        auto const shares = llm::tier_shares(combined);
        Json s;
        for (auto t: llm::kTiers)
            s[std::string(llm::to_string(t))] = shares[llm::index_of(t)];
        summary["tier_shares"] = std::move(s);
    }
    else
    {
        summary["tier_shares"] = nullptr;
    }

    Json tokens;
    for (auto t: llm::kTiers)
    {
        auto const tt = combined.totals(t);
        tokens[std::string(llm::to_string(t))] = {
            {"input", tt.input_tokens}, {"output", tt.output_tokens}, {"exchanges", tt.exchanges}};
    }
    auto const total_cost = llm::cost_of(combined, pricing);
    Json cost{{"input", total_cost.total.input.str()},
              {"output", total_cost.total.output.str()},
              {"total", total_cost.total.total().str()}};

    if (!per_apk.empty())
    {
        auto const n = static_cast<std::int64_t>(per_apk.size());
        std::int64_t token_sum = 0;
        std::int64_t pico_sum = 0;
        for (const auto& e: per_apk)
        {
            token_sum += e.tokens;
            pico_sum += e.usd.pico();
        }
        auto by_tokens = per_apk;
        std::sort(by_tokens.begin(), by_tokens.end(), [](const auto& a, const auto& b) { return a.tokens < b.tokens; });
        auto by_cost = per_apk;
        std::sort(by_cost.begin(), by_cost.end(), [](const auto& a, const auto& b) { return a.usd < b.usd; });
        auto const mid = per_apk.size() / 2;
        auto const odd = per_apk.size() % 2 == 1;
        double const median_tokens =
            odd ? static_cast<double>(by_tokens[mid].tokens)
                : (static_cast<double>(by_tokens[mid - 1].tokens) + static_cast<double>(by_tokens[mid].tokens)) / 2.0;
        auto const median_pico = odd ? by_cost[mid].usd.pico() : (by_cost[mid - 1].usd.pico() + by_cost[mid].usd.pico()) / 2;
        tokens["per_apk"] = {{"mean", static_cast<double>(token_sum) / static_cast<double>(n)}, {"median", median_tokens}};
        cost["per_apk"] = {{"mean", llm::Usd::from_pico(pico_sum / n).str()},
                           {"median", llm::Usd::from_pico(median_pico).str()}};
    }
    else
    {
        tokens["per_apk"] = nullptr;
        cost["per_apk"] = nullptr;
    }
    summary["tokens"] = std::move(tokens);
    summary["cost_usd"] = std::move(cost);
    summary["skipped_entries"] = std::move(skipped);
    summary["tool_errors"] = std::move(tool_errors);

    // Plain-text digest.
    std::ostringstream d;
    d << fmt::format("entries {}  evaluated {}  skipped {}\n", batch.entries.size(), batch.evaluated_count(),
                     batch.skipped_count());
    auto show = [](const std::optional<double>& v) { return v ? fmt::format("{:.4f}", *v) : std::string("undefined"); };
    if (batch.metrics)
    {
        const auto& m = *batch.metrics;
        d << fmt::format("tp {} tn {} fp {} fn {}\n", batch.counts.tp, batch.counts.tn, batch.counts.fp, batch.counts.fn);
        d << fmt::format("accuracy {:.4f}  precision {}  recall {}  f1 {}\n", m.accuracy, show(m.precision),
                         show(m.recall), show(m.f1));
    }
    else
    {
        d << "no entries evaluated\n";
    }
    for (const auto& [year, m]: partition_by_year(batch))
        d << fmt::format("  {}  n={}  accuracy {:.4f}  f1 {}\n", year, year_sizes[year], m.accuracy, show(m.f1));
    if (grand.tokens() > 0)
    {
        auto const shares = llm::tier_shares(combined);
        d << fmt::format("tier shares  recon {}  trace {}  verdict {}\n", fmt_share(shares[0]), fmt_share(shares[1]),
                         fmt_share(shares[2]));
    }
    d << fmt::format("cost USD  input {}  output {}  total {}\n", total_cost.total.input.str(),
                     total_cost.total.output.str(), total_cost.total.total().str());
    d << "\n";
    for (const auto& r: batch.entries)
    {
        if (r.evaluated())
        {
            const auto& v = r.pipeline->verdict;
            d << fmt::format("{:<24} {:<9} -> {:<9} {:<20} {:.2f}\n", r.entry.app_id, to_string(r.entry.label),
                             to_string(v.verdict), v.threat_category, v.confidence);
        }
        else
        {
            d << fmt::format("{:<24} {:<9} -> skipped: {}\n", r.entry.app_id, to_string(r.entry.label), r.skip_reason);
        }
    }
    for (const auto& e: summary["tool_errors"])
    {
        d << fmt::format("tool error  {} {} {}: {}\n", e["app_id"].get<std::string>(), e["tool"].get<std::string>(),
                         e["code"].get<std::string>(), e["message"].get<std::string>());
    }

    write_file(out_dir / "digest.txt", d.str());
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");
}

std::vector<ResultRow> read_results(const fs::path& jsonl_path)
{
    std::istringstream in(ir::read_text_file(jsonl_path));
    std::vector<ResultRow> rows;
    std::string line;
    int number = 0;
    while (std::getline(in, line))
    {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        auto fail = [&](const std::string& why) {
            throw Error(ErrorCode::Schema, fmt::format("{} line {}: {}", jsonl_path.string(), number, why));
        };
        auto const j = Json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            fail("not a JSON object");
        try
        {
            ResultRow row;
            row.app_id = j.at("app_id").get<std::string>();
            auto const label = label_from_string(j.at("label").get<std::string>());
            if (!label)
                fail("bad label");
            row.label = *label;
            row.year = j.at("year").get<int>();
            row.evaluated = j.at("status").get<std::string>() == "evaluated";
            if (row.evaluated)
                row.predicted_malicious = j.at("verdict").get<std::string>() == "Malicious";
            rows.push_back(std::move(row));
        }
        catch (const Json::exception& e)
        {
            fail(e.what());
        }
    }
    return rows;
}

} // namespace apktriage::harness
