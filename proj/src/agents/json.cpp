// SPDX-License-Identifier: Apache-2.0
#include <apktriage/agents/json.hpp>

namespace apktriage::agents
{

Json to_json(const index::CallSite& site)
{
    Json j;
    j["id"] = site.id();
    j["method"] = site.method.str();
    j["line"] = site.line;
    j["callee"] = site.callee.str();
    j["result_var"] = site.result_var ? Json(*site.result_var) : Json(nullptr);
    return j;
}

Json to_json(const analysis::ContextWindow& window)
{
    Json j;
    j["method"] = window.method.str();
    j["site_line"] = window.site_line;
    j["start_line"] = window.start_line;
    j["end_line"] = window.end_line;
    j["truncated_head"] = window.truncated_head;
    j["truncated_tail"] = window.truncated_tail;
    j["lines"] = window.lines;
    return j;
}

Json to_json(const analysis::TriggerChain& chain)
{
    Json path = Json::array();
    for (const auto& sig: chain.path)
        path.push_back(sig.str());
    Json j;
    j["entry_kind"] = analysis::to_string(chain.entry_kind);
    j["depth"] = chain.depth();
    j["path"] = std::move(path);
    return j;
}

Json to_json(const analysis::TaintResult& result)
{
    Json sinks = Json::array();
    for (const auto& hit: result.reached_sinks)
    {
        Json witness = Json::array();
        for (const auto& step: hit.witness)
        {
            witness.push_back(
                {{"kind", analysis::to_string(step.kind)}, {"method", step.method.str()}, {"line", step.line}, {"var", step.var}});
        }
        Json h;
        h["site"] = to_json(hit.site);
        h["category"] = index::to_string(hit.category);
        h["depth"] = hit.depth;
        h["witness"] = std::move(witness);
        sinks.push_back(std::move(h));
    }
    Json j;
    j["source"] = to_json(result.source);
    j["hit"] = result.hit();
    j["searched_depth"] = result.searched_depth;
    j["reached_sinks"] = std::move(sinks);
    return j;
}

Json to_json(const analysis::Slice& slice)
{
    Json j;
    j["method"] = slice.method.str();
    j["target_line"] = slice.target_line;
    j["target_var"] = slice.target_var;
    j["kept_lines"] = slice.kept_lines;
    j["removed_count"] = slice.removed_count;
    return j;
}

Json to_json(const ReconReport& recon)
{
    Json signals = Json::array();
    for (const auto& s: recon.risk_signals)
        signals.push_back({{"permission", s.permission}, {"reason", s.reason}, {"severity", to_string(s.severity)}});
    Json candidates = Json::array();
    for (const auto& c: recon.candidates)
        candidates.push_back({{"site", to_json(c.site)}, {"permission", c.permission}, {"severity", to_string(c.severity)}});
    Json j;
    j["declared_intents"] = recon.declared_intents;
    j["requested_permissions"] = recon.requested_permissions;
    j["risk_signals"] = std::move(signals);
    j["candidates"] = std::move(candidates);
    return j;
}

Json to_json(const EvidenceVector& evidence)
{
    auto optional = [](const auto& value) { return value ? to_json(*value) : Json(nullptr); };

    Json contexts = Json::array();
    for (const auto& w: evidence.contexts)
        contexts.push_back(to_json(w));
    Json hits = Json::array();
    for (const auto& h: evidence.search_hits)
        hits.push_back({{"method", h.method.str()}, {"line", h.line}, {"text", h.text}});
    Json steps = Json::array();
    for (const auto& step: evidence.transcript.steps)
    {
        steps.push_back({{"observation", step.observation},
                         {"thought", step.thought},
                         {"action",
                          {{"tool", step.action.tool},
                           {"arguments", step.action.arguments},
                           {"result_digest", step.action.result_digest}}}});
    }
    Json errors = Json::array();
    for (const auto& e: evidence.tool_errors)
        errors.push_back({{"tool", e.tool}, {"code", to_string(e.code)}, {"message", e.message}});

    Json j;
    j["candidate"] = {{"site", to_json(evidence.candidate.site)},
                      {"permission", evidence.candidate.permission},
                      {"severity", to_string(evidence.candidate.severity)}};
    j["trigger"] = optional(evidence.trigger);
    j["taint"] = optional(evidence.taint);
    j["slice"] = optional(evidence.slice);
    j["contexts"] = std::move(contexts);
    j["search_hits"] = std::move(hits);
    j["agent_summary"] = evidence.agent_summary;
    j["transcript"] = {{"step_count", evidence.transcript.step_count()},
                       {"terminated_by", to_string(evidence.transcript.terminated_by)},
                       {"steps", std::move(steps)}};
    j["tool_errors"] = std::move(errors);
    return j;
}

Json to_json(const VerdictReport& report)
{
    Json chain = Json::array();
    for (const auto& ref: report.evidence_chain)
    {
        chain.push_back(
            {{"candidate", ref.candidate}, {"trigger", ref.trigger}, {"sink", ref.sink}, {"rationale", ref.rationale}});
    }
    Json j;
    j["app_id"] = report.app_id;
    j["verdict"] = to_string(report.verdict);
    j["threat_category"] = report.threat_category;
    j["confidence"] = report.confidence;
    j["evidence_chain"] = std::move(chain);
    j["rationale"] = report.rationale;
    return j;
}

std::optional<Json> extract_json_object(std::string_view text)
{
    auto const open = text.find('{');
    auto const close = text.rfind('}');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        return std::nullopt;
    auto parsed = Json::parse(text.substr(open, close - open + 1), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object())
        return std::nullopt;
    return parsed;
}

} // namespace apktriage::agents
