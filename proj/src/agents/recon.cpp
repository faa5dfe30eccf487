// SPDX-License-Identifier: Apache-2.0
#include <apktriage/agents/json.hpp>
#include <apktriage/agents/recon.hpp>
#include <apktriage/error.hpp>

#include "prompts.hpp"

#include <algorithm>
#include <map>

namespace apktriage::agents
{

std::string_view to_string(Severity severity) noexcept
{
    switch (severity)
    {
    case Severity::Low:
        return "Low";
    case Severity::Medium:
        return "Medium";
    case Severity::High:
        return "High";
    }
    return "Low";
}

std::optional<Severity> severity_from_string(std::string_view text) noexcept
{
    if (text == "Low")
        return Severity::Low;
    if (text == "Medium")
        return Severity::Medium;
    if (text == "High")
        return Severity::High;
    return std::nullopt;
}

std::string render_recon_request(const ir::Manifest& manifest)
{
    return "MANIFEST:\n" + ir::render_manifest(manifest);
}

ReconReply parse_recon_reply(std::string_view text)
{
    auto const json = extract_json_object(text);
    if (!json)
        throw Error(ErrorCode::Schema, "screening reply holds no JSON object");

    ReconReply reply;
    auto const intents = json->find("declared_intents");
    if (intents == json->end() || !intents->is_array())
        throw Error(ErrorCode::Schema, "declared_intents must be an array");
    for (const auto& item: *intents)
    {
        if (!item.is_string())
            throw Error(ErrorCode::Schema, "declared_intents must hold strings");
        reply.declared_intents.push_back(item.get<std::string>());
    }

    auto const signals = json->find("risk_signals");
    if (signals == json->end() || !signals->is_array())
        throw Error(ErrorCode::Schema, "risk_signals must be an array");
    for (const auto& item: *signals)
    {
        if (!item.is_object() || !item.contains("permission") || !item["permission"].is_string() ||
            !item.contains("severity") || !item["severity"].is_string())
        {
            throw Error(ErrorCode::Schema, "risk signal needs string permission and severity");
        }
        auto const severity = severity_from_string(item["severity"].get<std::string>());
        if (!severity)
            throw Error(ErrorCode::Schema, "unknown severity " + item["severity"].get<std::string>());
        RiskSignal signal;
        signal.permission = item["permission"].get<std::string>();
        if (signal.permission.rfind("android.permission.", 0) == 0)
            signal.permission.erase(0, 19);
        if (item.contains("reason") && item["reason"].is_string())
            signal.reason = item["reason"].get<std::string>();
        signal.severity = *severity;
        reply.risk_signals.push_back(std::move(signal));
    }
    return reply;
}

std::vector<Candidate> select_candidates(const std::vector<RiskSignal>& signals, const index::ApiIndex& api_index,
                                         const index::ApiCatalog& catalog, std::size_t cap)
{
    auto const indexed = api_index.signatures();
    std::map<std::string, Candidate> by_site;
    for (const auto& signal: signals)
    {
        if (signal.severity == Severity::Low)
            continue;
        for (const auto& pattern: catalog.permission_apis(signal.permission))
        {
            for (const auto& sig: indexed)
            {
                if (!pattern.matches(sig))
                    continue;
                for (const auto& site: api_index.lookup(sig))
                {
                    auto [it, inserted] = by_site.try_emplace(site.id(), Candidate{site, signal.permission, signal.severity});
                    if (!inserted && signal.severity > it->second.severity)
                    {
                        it->second.permission = signal.permission;
                        it->second.severity = signal.severity;
                    }
                }
            }
        }
    }

    std::vector<Candidate> out;
    out.reserve(by_site.size());
    for (auto& [id, candidate]: by_site)
        out.push_back(std::move(candidate));
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.severity != b.severity)
            return a.severity > b.severity;
        return a.site < b.site;
    });
    if (out.size() > cap)
        out.resize(cap);
    return out;
}

ReconReport recon_screen(const ir::Manifest& manifest, const index::ApiIndex& api_index,
                         const index::ApiCatalog& catalog, const llm::ModelRouter& router, llm::CostLedger& ledger,
                         std::size_t cap)
{
    if (manifest.package.empty() && manifest.permissions.empty() && manifest.components.empty())
        throw Error(ErrorCode::EmptyManifest, "manifest declares nothing to screen");

    std::vector<llm::Message> messages{{"system", std::string(prompts::kRecon)},
                                       {"user", render_recon_request(manifest)}};
    std::optional<ReconReply> reply;
    std::string last_problem;
    for (int attempt = 0; attempt < 2 && !reply; ++attempt)
    {
        auto exchange = router.complete(llm::Tier::Recon, messages);
        auto const response = exchange.response;
        ledger.append(std::move(exchange));
        try
        {
            reply = parse_recon_reply(response);
        }
        catch (const Error& e)
        {
            last_problem = e.detail();
            messages.push_back({"assistant", response});
            messages.push_back({"user", "That reply was not usable (" + last_problem +
                                            "). Answer with the JSON object only."});
        }
    }
    if (!reply)
        throw Error(ErrorCode::Backend, "screening reply unusable after retry: " + last_problem);

    ReconReport report;
    report.declared_intents = std::move(reply->declared_intents);
    report.requested_permissions = manifest.permissions;
    for (auto& signal: reply->risk_signals)
    {
        if (!manifest.requests(signal.permission))
            continue;
        auto const seen = std::any_of(report.risk_signals.begin(), report.risk_signals.end(),
                                      [&](const RiskSignal& s) { return s.permission == signal.permission; });
        if (!seen)
            report.risk_signals.push_back(std::move(signal));
    }
    report.candidates = select_candidates(report.risk_signals, api_index, catalog, cap);
    return report;
}

} // namespace apktriage::agents
