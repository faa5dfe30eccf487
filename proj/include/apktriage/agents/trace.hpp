// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/agents/recon.hpp>
#include <apktriage/analysis/context.hpp>
#include <apktriage/analysis/slice.hpp>
#include <apktriage/analysis/taint.hpp>
#include <apktriage/analysis/trigger.hpp>
#include <apktriage/error.hpp>
#include <apktriage/index/call_graph.hpp>
#include <apktriage/ir/bundle.hpp>
#include <apktriage/llm/router.hpp>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apktriage::agents
{

inline constexpr std::array<std::string_view, 5> kToolNames{"extract_context", "trigger_paths", "taint_reachability",
                                                            "backward_slice", "conclude"};

struct ActionRecord
{
    std::string tool;
    std::string arguments;     // JSON object text
    std::string result_digest; // one line
};

struct TranscriptStep
{
    std::string observation; // what the agent saw before acting
    std::string thought;
    ActionRecord action;
};

enum class Termination
{
    AgentConcluded,
    BudgetExhausted
};

std::string_view to_string(Termination termination) noexcept;

struct AgentTranscript
{
    std::vector<TranscriptStep> steps;
    Termination terminated_by = Termination::BudgetExhausted;
    [[nodiscard]] std::size_t step_count() const noexcept { return steps.size(); }
};

struct ToolFailure
{
    std::string tool;
    ErrorCode code = ErrorCode::Backend;
    std::string message;
};

/// Everything one trace session established about a candidate. Each tool's
/// latest successful result is kept; tools that never succeeded are absent.
struct EvidenceVector
{
    Candidate candidate;
    std::optional<analysis::TriggerChain> trigger;
    std::optional<analysis::TaintResult> taint;
    std::optional<analysis::Slice> slice;
    std::vector<analysis::ContextWindow> contexts;
    std::vector<index::SearchHit> search_hits;
    std::string agent_summary;
    AgentTranscript transcript;
    std::vector<ToolFailure> tool_errors;

    /// Entry kind of the best trigger chain; Unknown when none was found.
    [[nodiscard]] analysis::EntryKind trigger_kind() const noexcept;
    [[nodiscard]] bool taint_hit() const noexcept { return taint && taint->hit(); }
    /// Taint analysis ran and found no sink.
    [[nodiscard]] bool exonerated() const noexcept { return taint && !taint->hit(); }
};

/// Read-only analysis inputs shared by every trace session of one app.
struct Toolbox
{
    const ir::AppBundle& bundle;
    const index::CallGraph& graph;
    const index::ApiCatalog& catalog;
    const analysis::EntryCatalog& entries;
};

inline constexpr int kDefaultMaxIterations = 8;

struct ParsedAction
{
    std::string thought;
    std::string tool;
    std::string arguments; // JSON object text; "{}" when absent
};

/// Reads `Thought:`, `Action:` and `Arguments:` lines. Throws Error(Schema)
/// when there is no action or the arguments are not a JSON object.
ParsedAction parse_action(std::string_view response);

/// Runs one tool for a candidate and records its result on `evidence`.
/// Returns the observation JSON. Analysis errors are returned as an
/// observation with an "error" member and appended to evidence.tool_errors.
std::string run_tool(const Toolbox& toolbox, const std::string& tool, const std::string& arguments,
                     EvidenceVector& evidence, std::string& digest);

/// The first user message of a trace session.
std::string render_candidate(const Candidate& candidate);

/// Observe-Thought-Action loop for one candidate. Every model exchange is
/// metered into `ledger`. Ends when the agent concludes or after
/// max_iterations actions.
EvidenceVector trace_candidate(const Candidate& candidate, const Toolbox& toolbox, const llm::ModelRouter& router,
                               llm::CostLedger& ledger, int max_iterations = kDefaultMaxIterations);

} // namespace apktriage::agents
