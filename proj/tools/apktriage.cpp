// SPDX-License-Identifier: Apache-2.0
// Command-line front end: analyze one app, run a labelled batch, summarise
// corpus method sizes, or recompute metrics from a results file.

#include <apktriage/agents/json.hpp>
#include <apktriage/error.hpp>
#include <apktriage/harness/batch.hpp>
#include <apktriage/harness/config.hpp>
#include <apktriage/harness/report.hpp>
#include <apktriage/harness/stats.hpp>
#include <apktriage/ir/bundle.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>
#include <map>

using namespace apktriage;
namespace fs = std::filesystem;

namespace
{

struct Overrides
{
    std::string backend;
    int budget = 0;
    int cap = -1;
    unsigned threads = 0;
    bool threads_set = false;
};

harness::AppConfig resolve(const std::string& config_path, const Overrides& o)
{
    auto config = config_path.empty() ? harness::default_app_config(APKTRIAGE_DATA_DIR)
                                      : harness::load_app_config(config_path, APKTRIAGE_DATA_DIR);
    if (o.backend == "live")
        config.backend.router.mode = llm::BackendMode::Live;
    else if (o.backend == "scripted")
        config.backend.router.mode = llm::BackendMode::Scripted;
    if (o.budget > 0)
        config.budgets.max_iterations = o.budget;
    if (o.cap >= 0)
        config.budgets.candidate_cap = static_cast<std::size_t>(o.cap);
    if (o.threads_set)
        config.threads = o.threads;
    return config;
}

std::string show(const std::optional<double>& v)
{
    return v ? fmt::format("{:.4f}", *v) : std::string("undefined");
}

int analyze(const std::string& config_path, const Overrides& o, const std::string& dir, bool evidence)
{
    auto const config = resolve(config_path, o);
    auto const catalogs = harness::load_catalogs(config);
    auto const router = harness::make_router(config.backend);
    auto const bundle = ir::load_bundle_dir(dir);
    for (const auto& d: bundle.diagnostics)
        std::cerr << fmt::format("{}: {}\n", ir::to_string(d.kind), d.message);
    if (bundle.has_errors())
    {
        std::cerr << "bundle is not well-formed\n";
        return 1;
    }
    auto const result = agents::run_pipeline(bundle, catalogs, router, config.budgets);
    if (evidence)
    {
        agents::Json evidence_list = agents::Json::array();
        for (const auto& ev: result.evidence)
            evidence_list.push_back(agents::to_json(ev));
        agents::Json out{{"report", agents::to_json(result.verdict)},
                         {"recon", agents::to_json(result.recon)},
                         {"evidence", std::move(evidence_list)}};
        std::cout << out.dump(2) << "\n";
    }
    else
    {
        std::cout << agents::verdict_to_json(result.verdict, 2) << "\n";
    }
    auto const cost = llm::cost_of(result.ledger, config.backend.pricing);
    std::cerr << fmt::format("tokens recon {} trace {} verdict {}  cost USD {}\n",
                             result.ledger.totals(llm::Tier::Recon).tokens(),
                             result.ledger.totals(llm::Tier::Trace).tokens(),
                             result.ledger.totals(llm::Tier::Verdict).tokens(), cost.total.total().str());
    return 0;
}

int batch(const std::string& config_path, const Overrides& o, const std::string& index, const std::string& out)
{
    auto const config = resolve(config_path, o);
    auto const dataset = harness::load_dataset(index);
    auto const catalogs = harness::load_catalogs(config);
    auto const router = harness::make_router(config.backend);
    auto const result = harness::run_batch(dataset, catalogs, router, config.budgets, config.threads);
    harness::emit_reports(result, config.backend.pricing, out);
    std::cout << ir::read_text_file(fs::path(out) / "digest.txt");
    return 0;
}

int stats(const std::string& index, int width)
{
    auto const s = harness::corpus_stats(harness::load_dataset(index));
    std::cout << harness::render_stats(s, width);
    return 0;
}

int metrics(const std::string& path)
{
    auto const rows = harness::read_results(path);
    harness::ConfusionCounts all;
    std::map<int, harness::ConfusionCounts> years;
    std::size_t skipped = 0;
    for (const auto& r: rows)
    {
        if (!r.evaluated)
        {
            ++skipped;
            continue;
        }
        auto const truth = r.label == harness::Label::Malicious;
        harness::tally(all, truth, r.predicted_malicious);
        harness::tally(years[r.year], truth, r.predicted_malicious);
    }
    std::cout << fmt::format("entries {}  evaluated {}  skipped {}\n", rows.size(), all.total(), skipped);
    std::cout << fmt::format("tp {} tn {} fp {} fn {}\n", all.tp, all.tn, all.fp, all.fn);
    auto const m = harness::compute_metrics(all);
    std::cout << fmt::format("accuracy {:.4f}\nprecision {}\nrecall {}\nf1 {}\n", m.accuracy, show(m.precision),
                             show(m.recall), show(m.f1));
    for (const auto& [year, counts]: years)
    {
        auto const y = harness::compute_metrics(counts);
        std::cout << fmt::format("year {}  n={}  accuracy {:.4f}  precision {}  recall {}  f1 {}\n", year,
                                 counts.total(), y.accuracy, show(y.precision), show(y.recall), show(y.f1));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Static triage of Android apps with a tiered agent pipeline"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "INI file with router, pricing, catalog and pipeline settings")
        ->check(CLI::ExistingFile);

    Overrides o;
    auto add_pipeline_options = [&](CLI::App* cmd) {
        cmd->add_option("--backend", o.backend, "Model backend")->check(CLI::IsMember({"scripted", "live"}));
        cmd->add_option("--budget", o.budget, "Agent actions per candidate")->check(CLI::PositiveNumber);
        cmd->add_option("--cap", o.cap, "Candidates per app")->check(CLI::NonNegativeNumber);
    };

    std::string bundle_dir;
    bool evidence = false;
    auto* analyze_cmd = app.add_subcommand("analyze", "Analyze one app bundle directory (.mmf + .mir)");
    analyze_cmd->add_option("bundle-dir", bundle_dir)->required()->check(CLI::ExistingDirectory);
    analyze_cmd->add_flag("--evidence", evidence, "Also print the screening report and evidence vectors");
    add_pipeline_options(analyze_cmd);

    std::string index;
    std::string out_dir = "apktriage-out";
    auto* batch_cmd = app.add_subcommand("batch", "Run a labelled dataset index and write reports");
    batch_cmd->add_option("dataset", index, "Dataset index (.idx)")->required()->check(CLI::ExistingFile);
    batch_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    batch_cmd->add_option("--threads", o.threads, "Workers (0 = all cores)")
        ->each([&](const std::string&) { o.threads_set = true; });
    add_pipeline_options(batch_cmd);

    std::string stats_index;
    int width = 10;
    auto* stats_cmd = app.add_subcommand("stats", "Per-method LOC distribution of a dataset");
    stats_cmd->add_option("dataset", stats_index)->required()->check(CLI::ExistingFile);
    stats_cmd->add_option("--width", width, "Histogram bucket width")->check(CLI::PositiveNumber)->capture_default_str();

    std::string results_path;
    auto* metrics_cmd = app.add_subcommand("metrics", "Recompute metrics from a results.jsonl file");
    metrics_cmd->add_option("results", results_path)->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*analyze_cmd)
            return analyze(config_path, o, bundle_dir, evidence);
        if (*batch_cmd)
            return batch(config_path, o, index, out_dir);
        if (*stats_cmd)
            return stats(stats_index, width);
        if (*metrics_cmd)
            return metrics(results_path);
    }
    catch (const Error& e)
    {
        std::cerr << "apktriage: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
