// SPDX-License-Identifier: Apache-2.0
#include <apktriage/agents/json.hpp>
#include <apktriage/agents/scripted.hpp>
#include <apktriage/agents/trace.hpp>
#include <apktriage/agents/verdict.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <set>

namespace apktriage::agents
{

namespace
{

struct PermissionRisk
{
    std::string_view permission;
    Severity severity;
    std::string_view threat;
};

constexpr PermissionRisk kRisk[] = {
    {"READ_SMS", Severity::High, "SMS-exfiltration"},
    {"RECEIVE_SMS", Severity::High, "SMS-exfiltration"},
    {"SEND_SMS", Severity::High, "premium-SMS-fraud"},
    {"READ_CONTACTS", Severity::High, "contact-harvesting"},
    {"READ_CALL_LOG", Severity::High, "call-log-harvesting"},
    {"RECORD_AUDIO", Severity::High, "spyware"},
    {"READ_PHONE_STATE", Severity::Medium, "device-id-leak"},
    {"ACCESS_FINE_LOCATION", Severity::Medium, "location-tracking"},
    {"CAMERA", Severity::Medium, "spyware"},
    {"ACCESS_COARSE_LOCATION", Severity::Low, "location-tracking"},
    {"WRITE_EXTERNAL_STORAGE", Severity::Low, "data-exfiltration"},
    {"RECEIVE_BOOT_COMPLETED", Severity::Low, "persistence"},
};

struct PurposeRule
{
    std::string_view keyword;
    std::initializer_list<std::string_view> permissions;
};

const PurposeRule kPurposes[] = {
    {"flashlight", {"CAMERA"}},
    {"torch", {"CAMERA"}},
    {"camera", {"CAMERA", "WRITE_EXTERNAL_STORAGE"}},
    {"photo", {"CAMERA", "WRITE_EXTERNAL_STORAGE"}},
    {"note", {"WRITE_EXTERNAL_STORAGE"}},
    {"wallpaper", {"WRITE_EXTERNAL_STORAGE"}},
    {"sms", {"READ_SMS", "RECEIVE_SMS", "SEND_SMS"}},
    {"messag", {"READ_SMS", "RECEIVE_SMS", "SEND_SMS", "READ_CONTACTS"}},
    {"navigation", {"ACCESS_FINE_LOCATION", "ACCESS_COARSE_LOCATION"}},
    {"map", {"ACCESS_FINE_LOCATION", "ACCESS_COARSE_LOCATION"}},
    {"weather", {"ACCESS_FINE_LOCATION", "ACCESS_COARSE_LOCATION"}},
    {"social", {"READ_CONTACTS", "CAMERA"}},
    {"contact", {"READ_CONTACTS"}},
    {"phone", {"READ_PHONE_STATE", "READ_CALL_LOG", "READ_CONTACTS"}},
    {"dialer", {"READ_PHONE_STATE", "READ_CALL_LOG", "READ_CONTACTS"}},
    {"recorder", {"RECORD_AUDIO", "WRITE_EXTERNAL_STORAGE"}},
    {"voice", {"RECORD_AUDIO"}},
};

const PermissionRisk* risk_of(std::string_view permission)
{
    for (const auto& r: kRisk)
    {
        if (r.permission == permission)
            return &r;
    }
    return nullptr;
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string_view payload_after(std::string_view text, std::string_view header)
{
    auto const at = text.find(header);
    return at == std::string_view::npos ? std::string_view{} : text.substr(at + header.size());
}

const llm::Message* last_with_role(const std::vector<llm::Message>& messages, std::string_view role)
{
    for (auto it = messages.rbegin(); it != messages.rend(); ++it)
    {
        if (it->role == role)
            return &*it;
    }
    return nullptr;
}

std::string action(std::string_view thought, std::string_view tool, const Json& args)
{
    return fmt::format("Thought: {}\nAction: {}\nArguments: {}", thought, tool, args.dump());
}

Json observation_json(const llm::Message& message)
{
    auto parsed = extract_json_object(message.content);
    return parsed ? *parsed : Json::object();
}

std::string summarise(const std::vector<llm::Message>& messages, const Json& candidate)
{
    std::string trigger = "no trigger established";
    std::string flow = "taint not established";
    for (const auto& m: messages)
    {
        if (m.role != "user" || m.content.rfind("Observation:", 0) != 0)
            continue;
        auto const obs = observation_json(m);
        if (obs.contains("error"))
            continue;
        auto const tool = obs.value("tool", std::string{});
        if (tool == "trigger_paths")
        {
            auto const& chains = obs["chains"];
            std::string kind = "Unknown";
            std::size_t depth = 0;
            for (const auto& c: chains)
            {
                if (c["entry_kind"] != "Unknown")
                {
                    kind = c["entry_kind"];
                    depth = c["depth"];
                    break;
                }
            }
            if (kind == "Unknown" && !chains.empty())
                depth = chains[0]["depth"];
            trigger = fmt::format("reached from a {} entry at depth {}", kind, depth);
        }
        else if (tool == "taint_reachability")
        {
            auto const& sinks = obs["result"]["reached_sinks"];
            if (sinks.empty())
            {
                flow = "its result reaches no sink";
            }
            else
            {
                std::set<std::string> cats;
                for (const auto& s: sinks)
                    cats.insert(s["category"].get<std::string>());
                std::string joined;
                for (const auto& c: cats)
                    joined += (joined.empty() ? "" : "/") + c;
                flow = fmt::format("its result reaches {} {} sink(s)", sinks.size(), joined);
            }
        }
    }
    return fmt::format("{} at {}: {}; {}.", candidate["site"]["callee"].get<std::string>(),
                       candidate["site"]["id"].get<std::string>(), trigger, flow);
}

} // namespace

std::string scripted_recon(const std::vector<llm::Message>& messages)
{
    std::string_view text;
    for (const auto& m: messages)
    {
        if (m.role == "user" && m.content.rfind("MANIFEST:\n", 0) == 0)
            text = m.content;
    }
    auto const manifest = ir::parse_manifest(payload_after(text, "MANIFEST:\n"));

    auto const category = lower(manifest.category);
    std::set<std::string_view> expected;
    for (const auto& rule: kPurposes)
    {
        if (category.find(rule.keyword) != std::string::npos)
            expected.insert(rule.permissions.begin(), rule.permissions.end());
    }

    Json intents = Json::array();
    if (!manifest.category.empty())
        intents.push_back(manifest.category);
    if (!manifest.description.empty())
        intents.push_back(manifest.description);

    Json signals = Json::array();
    for (const auto& permission: manifest.permissions)
    {
        auto const* risk = risk_of(permission);
        if (risk == nullptr || expected.contains(permission))
            continue;
        auto const purpose = manifest.category.empty() ? std::string("an app without a stated purpose")
                                                       : "a " + manifest.category + " app";
        signals.push_back({{"permission", permission},
                           {"reason", fmt::format("{} has no evident need for {}", purpose, permission)},
                           {"severity", to_string(risk->severity)}});
    }
    return Json{{"declared_intents", std::move(intents)}, {"risk_signals", std::move(signals)}}.dump();
}

std::string scripted_trace(const std::vector<llm::Message>& messages)
{
    const llm::Message* first = nullptr;
    for (const auto& m: messages)
    {
        if (m.role == "user")
        {
            first = &m;
            break;
        }
    }
    auto const candidate = first ? extract_json_object(first->content).value_or(Json::object()) : Json::object();

    auto const* previous = last_with_role(messages, "assistant");
    std::string last_tool;
    if (previous != nullptr)
    {
        try
        {
            last_tool = parse_action(previous->content).tool;
        }
        catch (const Error&)
        {
        }
    }

    auto conclude = [&] {
        auto const summary = candidate.contains("site") ? summarise(messages, candidate) : std::string("nothing to trace");
        return action("The evidence is complete.", "conclude", Json{{"summary", summary}});
    };

    if (previous == nullptr)
        return action("Read the code around the call site first.", "extract_context", Json{{"radius", 20}});
    if (last_tool == "extract_context")
        return action("Find out what can trigger this method.", "trigger_paths", Json{{"max_depth", 10}});
    if (last_tool == "trigger_paths")
        return action("Check where the call's result flows.", "taint_reachability", Json{{"depth_limit", 3}});
    if (last_tool == "taint_reachability")
    {
        auto const obs = observation_json(*last_with_role(messages, "user"));
        if (obs.contains("result") && !obs["result"]["reached_sinks"].empty())
        {
            auto const& hit = obs["result"]["reached_sinks"][0];
            Json args{{"method", hit["site"]["method"]},
                      {"line", hit["site"]["line"]},
                      {"var", hit["witness"].back()["var"]}};
            return action("Isolate the statements feeding the sink.", "backward_slice", args);
        }
    }
    return conclude();
}

std::string scripted_verdict(const std::vector<llm::Message>& messages)
{
    std::string_view evidence;
    for (const auto& m: messages)
    {
        if (m.role == "user" && m.content.rfind("EVIDENCE:", 0) == 0)
            evidence = m.content;
    }
    auto const request = extract_json_object(evidence).value_or(Json::object());

    VerdictReport report;
    report.app_id = request.value("app_id", std::string{});
    int supporting = 0;
    int exonerated = 0;
    int traced = 0;
    std::string first_permission;
    for (const auto& v: request.value("vectors", Json::array()))
    {
        ++traced;
        auto const trigger = v["trigger"].get<std::string>();
        auto const& sinks = v["sinks"];
        if (v["exonerated"].get<bool>())
            ++exonerated;
        auto const background = trigger == "SystemEvent" || trigger == "Unknown";
        if (sinks.empty() || !(background || v["severity"] == "High"))
            continue;
        if (supporting++ == 0)
            first_permission = v["permission"].get<std::string>();
        auto const sink = sinks[0].get<std::string>();
        report.evidence_chain.push_back(
            {v["candidate"].get<std::string>(), trigger, sink,
             fmt::format("{} guarded by {} reaches a {} sink from a {} entry", v["api"].get<std::string>(),
                         v["permission"].get<std::string>(), sink, trigger)});
    }

    if (supporting > 0)
    {
        report.verdict = Verdict::Malicious;
        auto const* risk = risk_of(first_permission);
        report.threat_category = risk ? std::string(risk->threat) : "data-exfiltration";
        report.confidence = std::min(99, 50 + 10 * supporting) / 100.0;
        report.rationale = fmt::format("{} of {} traced call site(s) leak sensitive data without user involvement "
                                       "or under a high-risk permission.",
                                       supporting, traced);
    }
    else
    {
        report.verdict = Verdict::Benign;
        report.threat_category = "none";
        report.confidence = std::min(95, 50 + 10 * exonerated) / 100.0;
        report.rationale = traced == 0 ? "No sensitive call sites needed tracing."
                                       : fmt::format("No traced call site supports a malicious flow; {} of {} reach no "
                                                     "sink.",
                                                     exonerated, traced);
    }
    return verdict_to_json(report);
}

std::shared_ptr<llm::ScriptedProvider> make_scripted_provider()
{
    auto provider = std::make_shared<llm::ScriptedProvider>();
    provider->set_policy(llm::Tier::Recon, scripted_recon);
    provider->set_policy(llm::Tier::Trace, scripted_trace);
    provider->set_policy(llm::Tier::Verdict, scripted_verdict);
    return provider;
}

} // namespace apktriage::agents
