// SPDX-License-Identifier: Apache-2.0
#include <apktriage/agents/json.hpp>
#include <apktriage/agents/verdict.hpp>

#include "prompts.hpp"

#include <algorithm>
#include <set>

namespace apktriage::agents
{

namespace
{

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw Error(ErrorCode::Schema, what);
}

const Json& member(const Json& object, const char* key)
{
    auto const it = object.find(key);
    require(it != object.end(), std::string("missing field '") + key + "'");
    return *it;
}

std::string string_member(const Json& object, const char* key)
{
    const auto& value = member(object, key);
    require(value.is_string(), std::string("field '") + key + "' must be a string");
    return value.get<std::string>();
}

void exact_keys(const Json& object, std::initializer_list<const char*> keys, const char* where)
{
    for (const auto& [key, value]: object.items())
    {
        auto const known = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; });
        require(known, std::string("unexpected field '") + key + "' in " + where);
    }
    for (const char* key: keys)
        require(object.contains(key), std::string("missing field '") + key + "' in " + where);
}

} // namespace

std::string_view to_string(Verdict verdict) noexcept
{
    return verdict == Verdict::Malicious ? "Malicious" : "Benign";
}

std::optional<Verdict> verdict_from_string(std::string_view text) noexcept
{
    if (text == "Benign")
        return Verdict::Benign;
    if (text == "Malicious")
        return Verdict::Malicious;
    return std::nullopt;
}

std::string render_verdict_request(const std::string& app_id, const ReconReport& recon,
                                   const std::vector<EvidenceVector>& evidence)
{
    Json signals = Json::array();
    for (const auto& s: recon.risk_signals)
        signals.push_back({{"permission", s.permission}, {"severity", to_string(s.severity)}});
    Json vectors = Json::array();
    for (const auto& ev: evidence)
    {
        Json sinks = Json::array();
        if (ev.taint)
        {
            for (const auto& hit: ev.taint->reached_sinks)
                sinks.push_back(index::to_string(hit.category));
        }
        vectors.push_back({{"candidate", ev.candidate.site.id()},
                           {"api", ev.candidate.site.callee.str()},
                           {"permission", ev.candidate.permission},
                           {"severity", to_string(ev.candidate.severity)},
                           {"trigger", analysis::to_string(ev.trigger_kind())},
                           {"sinks", std::move(sinks)},
                           {"exonerated", ev.exonerated()}});
    }
    Json j{{"app_id", app_id}, {"signals", std::move(signals)}, {"vectors", std::move(vectors)}};
    return "EVIDENCE:\n" + j.dump(1);
}

std::string verdict_to_json(const VerdictReport& report, int indent)
{
    return to_json(report).dump(indent);
}

VerdictReport parse_verdict(std::string_view text, const std::string& app_id,
                            const std::vector<EvidenceVector>& evidence)
{
    auto const json = extract_json_object(text);
    require(json.has_value(), "reply holds no JSON object");
    exact_keys(*json, {"app_id", "verdict", "threat_category", "confidence", "evidence_chain", "rationale"}, "report");

    VerdictReport report;
    report.app_id = string_member(*json, "app_id");
    require(report.app_id == app_id, "app_id '" + report.app_id + "' does not match '" + app_id + "'");

    auto const verdict = verdict_from_string(string_member(*json, "verdict"));
    require(verdict.has_value(), "verdict must be Benign or Malicious");
    report.verdict = *verdict;
    report.threat_category = string_member(*json, "threat_category");

    const auto& confidence = member(*json, "confidence");
    require(confidence.is_number(), "confidence must be a number");
    report.confidence = confidence.get<double>();
    require(report.confidence >= 0.0 && report.confidence <= 1.0, "confidence must lie in [0,1]");

    std::set<std::string> ids;
    for (const auto& ev: evidence)
        ids.insert(ev.candidate.site.id());

    const auto& chain = member(*json, "evidence_chain");
    require(chain.is_array(), "evidence_chain must be an array");
    for (const auto& item: chain)
    {
        require(item.is_object(), "evidence_chain entries must be objects");
        exact_keys(item, {"candidate", "trigger", "sink", "rationale"}, "evidence_chain entry");
        EvidenceRef ref{string_member(item, "candidate"), string_member(item, "trigger"), string_member(item, "sink"),
                        string_member(item, "rationale")};
        require(ids.contains(ref.candidate), "evidence_chain names unknown candidate '" + ref.candidate + "'");
        require(analysis::entry_kind_from_string(ref.trigger).has_value(), "unknown trigger kind '" + ref.trigger + "'");
        require(ref.sink == "none" || index::sink_category_from_string(ref.sink).has_value(),
                "unknown sink category '" + ref.sink + "'");
        report.evidence_chain.push_back(std::move(ref));
    }
    require(report.verdict == Verdict::Benign || !report.evidence_chain.empty(),
            "a Malicious verdict needs a non-empty evidence_chain");
    report.rationale = string_member(*json, "rationale");
    return report;
}

VerdictReport adjudicate(const std::string& app_id, const ReconReport& recon,
                         const std::vector<EvidenceVector>& evidence, const llm::ModelRouter& router,
                         llm::CostLedger& ledger)
{
    std::vector<llm::Message> messages{{"system", std::string(prompts::kVerdict)},
                                       {"user", render_verdict_request(app_id, recon, evidence)}};
    std::string problem;
    for (int attempt = 0; attempt < 2; ++attempt)
    {
        auto exchange = router.complete(llm::Tier::Verdict, messages);
        auto const response = exchange.response;
        ledger.append(std::move(exchange));
        try
        {
            return parse_verdict(response, app_id, evidence);
        }
        catch (const Error& e)
        {
            if (e.code() != ErrorCode::Schema)
                throw;
            problem = e.detail();
            messages.push_back({"assistant", response});
            messages.push_back({"user", "Schema violation: " + problem + ". Reply with the corrected JSON object only."});
        }
    }
    throw Error(ErrorCode::SchemaViolation, "verdict reply invalid after retry: " + problem);
}

} // namespace apktriage::agents
