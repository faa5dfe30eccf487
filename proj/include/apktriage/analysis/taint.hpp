// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/index/api_index.hpp>
#include <apktriage/index/catalog.hpp>
#include <apktriage/ir/program.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace apktriage::analysis
{

inline constexpr int kDefaultTaintDepth = 3;

enum class StepKind
{
    Source,     // the source call defines `var`
    Assign,     // `var = <tainted>`
    CallArg,    // tainted `var` passed to an in-program callee at `line`
    Param,      // callee parameter `var` bound at entry (line 0)
    Return,     // `return var` with var tainted
    CallResult, // caller's `var` receives a tainted return value at `line`
    SinkArg,    // tainted `var` passed to a sink at `line`
};

std::string_view to_string(StepKind kind) noexcept;

struct WitnessStep
{
    StepKind kind = StepKind::Source;
    ir::MethodSig method;
    int line = 0;
    std::string var;

    friend bool operator==(const WitnessStep&, const WitnessStep&) = default;
};

struct SinkHit
{
    index::CallSite site;
    index::SinkCategory category = index::SinkCategory::Network;
    /// Starts at the Source step and ends at the SinkArg step.
    std::vector<WitnessStep> witness;
    /// Call depth of the frame containing the sink (source method = 0).
    int depth = 0;
};

struct TaintResult
{
    index::CallSite source;
    /// One entry per sink call site, ordered by (method, line).
    std::vector<SinkHit> reached_sinks;
    /// Deepest call level analysed.
    int searched_depth = 0;

    [[nodiscard]] bool hit() const noexcept { return !reached_sinks.empty(); }
};

/// Forward taint propagation from the result variable of `source`.
///
/// Flow-sensitive within a method; across calls, callees with a tainted
/// argument are analysed under a summary keyed by (callee, tainted parameters,
/// depth) while depth < depth_limit. Assignments copy taint, calls to sinks
/// record hits, and a tainted return value taints the result variable of the
/// descending call site. Calls never propagate taint through external
/// (library) methods, and nothing flows back up to callers of the source method.
///
/// Throws Error(NotAnInvoke), Error(NoResultVariable), or Error(InvalidSite).
TaintResult taint_reachability(const ir::IrProgram& program, const index::CallSite& source,
                               const index::ApiCatalog& catalog, int depth_limit = kDefaultTaintDepth);

} // namespace apktriage::analysis
