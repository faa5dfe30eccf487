// SPDX-License-Identifier: Apache-2.0
#include <apktriage/agents/json.hpp>
#include <apktriage/agents/trace.hpp>

#include "prompts.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace apktriage::agents
{

namespace
{

std::string trim(std::string_view s)
{
    auto const b = s.find_first_not_of(" \t\r\n`*");
    if (b == std::string_view::npos)
        return {};
    auto const e = s.find_last_not_of(" \t\r\n`*");
    return std::string(s.substr(b, e - b + 1));
}

bool starts_with_label(std::string_view line, std::string_view label)
{
    auto const t = line.find_first_not_of(" \t*");
    return t != std::string_view::npos && line.substr(t).rfind(label, 0) == 0;
}

std::string_view after_label(std::string_view line, std::string_view label)
{
    auto const at = line.find(label);
    return line.substr(at + label.size());
}

int int_arg(const Json& args, const char* key, int fallback)
{
    auto const it = args.find(key);
    if (it == args.end())
        return fallback;
    if (!it->is_number_integer())
        throw Error(ErrorCode::Schema, fmt::format("argument '{}' must be an integer", key));
    return it->get<int>();
}

std::optional<std::string> string_arg(const Json& args, const char* key)
{
    auto const it = args.find(key);
    if (it == args.end())
        return std::nullopt;
    if (!it->is_string())
        throw Error(ErrorCode::Schema, fmt::format("argument '{}' must be a string", key));
    return it->get<std::string>();
}

std::string observation_text(const Json& body)
{
    return "Observation: " + body.dump(1);
}

Json context_tool(const Toolbox& box, const Json& args, EvidenceVector& ev, std::string& digest)
{
    auto const& site = ev.candidate.site;
    if (auto pattern = string_arg(args, "pattern"))
    {
        auto hits = index::global_search(box.bundle.program, *pattern);
        Json list = Json::array();
        for (const auto& h: hits)
            list.push_back({{"method", h.method.str()}, {"line", h.line}, {"text", h.text}});
        digest = fmt::format("{} match(es) for '{}'", hits.size(), *pattern);
        ev.search_hits = std::move(hits);
        return {{"tool", "extract_context"}, {"pattern", *pattern}, {"hits", std::move(list)}};
    }

    auto const radius = int_arg(args, "radius", analysis::kDefaultContextRadius);
    auto const method_text = string_arg(args, "method");
    analysis::ContextWindow window;
    if (method_text)
    {
        auto const line = int_arg(args, "line", 1);
        window = analysis::extract_context(box.bundle.program, ir::MethodSig::parse(*method_text), line, radius);
    }
    else
    {
        window = analysis::extract_context(box.bundle.program, site, radius);
    }
    digest = fmt::format("lines {}-{} of {}", window.start_line, window.end_line, window.method.str());
    auto body = Json{{"tool", "extract_context"}, {"window", to_json(window)}};
    ev.contexts.push_back(std::move(window));
    return body;
}

Json trigger_tool(const Toolbox& box, const Json& args, EvidenceVector& ev, std::string& digest)
{
    auto const max_depth = int_arg(args, "max_depth", analysis::kDefaultTriggerDepth);
    if (max_depth < 0)
        throw Error(ErrorCode::Schema, "max_depth must be non-negative");
    auto const chains =
        analysis::trigger_paths(box.graph, ev.candidate.site.method, box.entries, box.bundle.manifest, max_depth);
    ev.trigger = analysis::best_trigger(chains);

    Json list = Json::array();
    for (const auto& c: chains)
        list.push_back(to_json(c));
    if (ev.trigger)
    {
        digest = fmt::format("{} chain(s); best {} at depth {}", chains.size(), analysis::to_string(ev.trigger->entry_kind),
                             ev.trigger->depth());
    }
    else
    {
        digest = "no chains";
    }
    return {{"tool", "trigger_paths"}, {"chains", std::move(list)}};
}

Json taint_tool(const Toolbox& box, const Json& args, EvidenceVector& ev, std::string& digest)
{
    auto const depth = int_arg(args, "depth_limit", analysis::kDefaultTaintDepth);
    if (depth < 0)
        throw Error(ErrorCode::Schema, "depth_limit must be non-negative");
    auto result = analysis::taint_reachability(box.bundle.program, ev.candidate.site, box.catalog, depth);
    if (result.hit())
    {
        std::string cats;
        for (const auto& h: result.reached_sinks)
            cats += (cats.empty() ? "" : ",") + std::string(index::to_string(h.category));
        digest = fmt::format("{} sink(s) reached: {}", result.reached_sinks.size(), cats);
    }
    else
    {
        digest = fmt::format("no sink reached within depth {}", result.searched_depth);
    }
    auto body = Json{{"tool", "taint_reachability"}, {"result", to_json(result)}};
    ev.taint = std::move(result);
    return body;
}

Json slice_tool(const Toolbox& box, const Json& args, EvidenceVector& ev, std::string& digest)
{
    auto const method = string_arg(args, "method");
    auto const var = string_arg(args, "var");
    if (!method || !var || !args.contains("line"))
        throw Error(ErrorCode::Schema, "backward_slice needs method, line and var");
    auto const line = int_arg(args, "line", 0);
    auto slice = analysis::backward_slice(box.bundle.program, ir::MethodSig::parse(*method), line, *var);
    digest = fmt::format("kept {} line(s), removed {}", slice.kept_lines.size(), slice.removed_count);
    auto body = Json{{"tool", "backward_slice"},
                     {"slice", to_json(slice)},
                     {"statements", analysis::render_slice(box.bundle.program, slice)}};
    ev.slice = std::move(slice);
    return body;
}

} // namespace

std::string_view to_string(Termination termination) noexcept
{
    return termination == Termination::AgentConcluded ? "AgentConcluded" : "BudgetExhausted";
}

analysis::EntryKind EvidenceVector::trigger_kind() const noexcept
{
    return trigger ? trigger->entry_kind : analysis::EntryKind::Unknown;
}

ParsedAction parse_action(std::string_view response)
{
    ParsedAction out;
    std::optional<std::string> tool;
    std::optional<std::string_view> args_text;
    enum class Field
    {
        None,
        Thought,
        Other
    } field = Field::None;

    std::size_t pos = 0;
    while (pos <= response.size())
    {
        auto const nl = response.find('\n', pos);
        auto const end = nl == std::string_view::npos ? response.size() : nl;
        auto const line = response.substr(pos, end - pos);
        if (starts_with_label(line, "Thought:"))
        {
            out.thought = trim(after_label(line, "Thought:"));
            field = Field::Thought;
        }
        else if (starts_with_label(line, "Action:"))
        {
            tool = trim(after_label(line, "Action:"));
            field = Field::Other;
        }
        else if (starts_with_label(line, "Arguments:"))
        {
            auto const at = response.find("Arguments:", pos);
            args_text = response.substr(at + 10);
            break;
        }
        else if (field == Field::Thought && !trim(line).empty())
        {
            out.thought += " " + trim(line);
        }
        if (nl == std::string_view::npos)
            break;
        pos = nl + 1;
    }

    if (!tool || tool->empty())
        throw Error(ErrorCode::Schema, "reply names no action");
    out.tool = *tool;
    out.arguments = "{}";
    if (args_text && !trim(*args_text).empty())
    {
        auto const json = extract_json_object(*args_text);
        if (!json)
            throw Error(ErrorCode::Schema, "arguments are not a JSON object");
        out.arguments = json->dump();
    }
    return out;
}

std::string render_candidate(const Candidate& candidate)
{
    Json j{{"site", to_json(candidate.site)},
           {"permission", candidate.permission},
           {"severity", to_string(candidate.severity)}};
    return "CANDIDATE:\n" + j.dump(1);
}

std::string run_tool(const Toolbox& toolbox, const std::string& tool, const std::string& arguments,
                     EvidenceVector& evidence, std::string& digest)
{
    try
    {
        auto const args = Json::parse(arguments, nullptr, false);
        if (args.is_discarded() || !args.is_object())
            throw Error(ErrorCode::Schema, "arguments are not a JSON object");

        Json body;
        if (tool == "extract_context")
            body = context_tool(toolbox, args, evidence, digest);
        else if (tool == "trigger_paths")
            body = trigger_tool(toolbox, args, evidence, digest);
        else if (tool == "taint_reachability")
            body = taint_tool(toolbox, args, evidence, digest);
        else if (tool == "backward_slice")
            body = slice_tool(toolbox, args, evidence, digest);
        else
            throw Error(ErrorCode::Schema, "unknown tool '" + tool + "'");
        return observation_text(body);
    }
    catch (const Error& e)
    {
        evidence.tool_errors.push_back({tool, e.code(), e.detail()});
        digest = fmt::format("error {}: {}", to_string(e.code()), e.detail());
        Json body{{"tool", tool}, {"error", {{"code", to_string(e.code())}, {"message", e.detail()}}}};
        return observation_text(body);
    }
}

EvidenceVector trace_candidate(const Candidate& candidate, const Toolbox& toolbox, const llm::ModelRouter& router,
                               llm::CostLedger& ledger, int max_iterations)
{
    if (max_iterations < 1)
        throw Error(ErrorCode::Config, "max_iterations must be at least 1");

    EvidenceVector ev;
    ev.candidate = candidate;
    std::vector<llm::Message> messages{{"system", std::string(prompts::kTrace)},
                                       {"user", render_candidate(candidate)}};

    for (int iteration = 0; iteration < max_iterations; ++iteration)
    {
        auto exchange = router.complete(llm::Tier::Trace, messages);
        auto const response = exchange.response;
        ledger.append(std::move(exchange));

        std::string observation;
        std::string attempted;
        try
        {
            auto action = parse_action(response);
            attempted = action.tool;
            auto const known = std::find(kToolNames.begin(), kToolNames.end(), action.tool) != kToolNames.end();
            if (!known)
                throw Error(ErrorCode::Schema, "unknown tool '" + action.tool + "'");

            TranscriptStep step;
            step.observation = messages.back().content;
            step.thought = action.thought;
            step.action.tool = action.tool;
            step.action.arguments = action.arguments;

            if (action.tool == "conclude")
            {
                auto const args = Json::parse(action.arguments);
                auto const summary = args.find("summary");
                ev.agent_summary = summary != args.end() && summary->is_string() ? summary->get<std::string>()
                                                                                 : action.thought;
                step.action.result_digest = "concluded";
                ev.transcript.steps.push_back(std::move(step));
                ev.transcript.terminated_by = Termination::AgentConcluded;
                return ev;
            }
            observation = run_tool(toolbox, action.tool, action.arguments, ev, step.action.result_digest);
            ev.transcript.steps.push_back(std::move(step));
        }
        catch (const Error& e)
        {
            // A reply that names no usable action costs an iteration but is
            // not a transcript step.
            ev.tool_errors.push_back({attempted, e.code(), e.detail()});
            Json body{{"tool", attempted.empty() ? Json(nullptr) : Json(attempted)}, {"error", {{"code", to_string(e.code())}, {"message", e.detail()}}}};
            observation = observation_text(body);
        }
        messages.push_back({"assistant", response});
        messages.push_back({"user", std::move(observation)});
    }
    ev.transcript.terminated_by = Termination::BudgetExhausted;
    return ev;
}

} // namespace apktriage::agents
