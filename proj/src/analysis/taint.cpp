// SPDX-License-Identifier: Apache-2.0
#include <apktriage/analysis/taint.hpp>
#include <apktriage/error.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <set>

namespace apktriage::analysis
{

namespace
{

// Witness chains are shared, persistent singly-linked lists; a variable's chain
// ends at the step that tainted it.
struct Link
{
    WitnessStep step;
    std::shared_ptr<const Link> prev;
};
using Chain = std::shared_ptr<const Link>;

Chain extend(Chain prev, WitnessStep step)
{
    return std::make_shared<const Link>(Link{std::move(step), std::move(prev)});
}

std::vector<WitnessStep> unroll(const Chain& chain)
{
    std::vector<WitnessStep> out;
    for (auto const* link = chain.get(); link; link = link->prev.get())
        out.push_back(link->step);
    std::reverse(out.begin(), out.end());
    return out;
}

Chain roll(const std::vector<WitnessStep>& steps)
{
    Chain chain;
    for (const auto& s: steps)
        chain = extend(chain, s);
    return chain;
}

using TaintState = std::map<std::string, Chain>;

struct LocalHit
{
    index::CallSite site;
    index::SinkCategory category;
    std::vector<WitnessStep> witness; // rooted at a Param step or at the Source step
    int depth;
};

struct Summary
{
    bool returns_tainted = false;
    std::vector<WitnessStep> return_witness;
    std::map<std::string, LocalHit> hits; // by sink site id
};

class Engine
{
public:
    Engine(const ir::IrProgram& program, const index::ApiCatalog& catalog, index::CallSite source, int limit):
        _program(program), _catalog(catalog), _source(std::move(source)), _limit(limit)
    {
    }

    TaintResult run()
    {
        auto const* method = _program.find_method(_source.method);
        auto const summary = analyze(*method, TaintState{}, 0);

        TaintResult result;
        result.source = _source;
        result.searched_depth = _max_depth;
        for (const auto& [_, hit]: summary.hits)
            result.reached_sinks.push_back({hit.site, hit.category, hit.witness, hit.depth});
        std::sort(result.reached_sinks.begin(), result.reached_sinks.end(),
                  [](const SinkHit& a, const SinkHit& b) { return a.site < b.site; });
        return result;
    }

private:
    const Summary& callee_summary(const ir::MethodDef& callee, const std::vector<std::size_t>& tainted_params,
                                  int depth)
    {
        std::string key = callee.sig.str() + "|" + std::to_string(depth) + "|";
        for (auto p: tainted_params)
            key += std::to_string(p) + ",";
        if (auto it = _memo.find(key); it != _memo.end())
            return it->second;

        TaintState entry;
        for (auto p: tainted_params)
            entry[callee.params[p]] = extend(nullptr, {StepKind::Param, callee.sig, 0, callee.params[p]});
        auto summary = analyze(callee, entry, depth);
        return _memo.emplace(std::move(key), std::move(summary)).first->second;
    }

    /// Prefixes a callee-relative witness with the caller-side chain of the
    /// argument that fed its root parameter.
    static std::vector<WitnessStep> splice(const std::vector<WitnessStep>& relative, const ir::MethodDef& callee,
                                           const ir::MethodSig& caller, int line, const ir::Invoke& inv,
                                           const TaintState& state)
    {
        if (relative.empty() || relative.front().kind != StepKind::Param)
            return relative;
        auto const& param = relative.front().var;
        auto const k = static_cast<std::size_t>(
            std::find(callee.params.begin(), callee.params.end(), param) - callee.params.begin());
        auto const& arg = inv.args.at(k).text;
        auto out = unroll(state.at(arg));
        out.push_back({StepKind::CallArg, caller, line, arg});
        out.insert(out.end(), relative.begin(), relative.end());
        return out;
    }

    void transfer_invoke(const ir::MethodDef& method, const ir::Statement& stmt, const ir::Invoke& inv,
                         TaintState& state, Summary& summary, int depth)
    {
        std::vector<std::size_t> tainted;
        for (std::size_t i = 0; i < inv.args.size(); ++i)
            if (inv.args[i].is_var() && state.contains(inv.args[i].text))
                tainted.push_back(i);

        Chain result;
        if (!tainted.empty())
        {
            if (auto const category = _catalog.sink_category(inv.callee))
            {
                auto const& var = inv.args[tainted.front()].text;
                index::CallSite site{method.sig, stmt.line, inv.callee, inv.dst};
                if (!summary.hits.contains(site.id()))
                {
                    auto witness = unroll(state.at(var));
                    witness.push_back({StepKind::SinkArg, method.sig, stmt.line, var});
                    summary.hits.emplace(site.id(), LocalHit{site, *category, std::move(witness), depth});
                }
            }
            else if (auto const* callee = _program.find_method(inv.callee);
                     callee && depth < _limit && callee->params.size() == inv.args.size())
            {
                auto const& sub = callee_summary(*callee, tainted, depth + 1);
                for (const auto& [id, hit]: sub.hits)
                {
                    if (summary.hits.contains(id))
                        continue;
                    summary.hits.emplace(id, LocalHit{hit.site, hit.category,
                                                      splice(hit.witness, *callee, method.sig, stmt.line, inv, state),
                                                      hit.depth});
                }
                if (sub.returns_tainted && inv.dst)
                {
                    auto steps = splice(sub.return_witness, *callee, method.sig, stmt.line, inv, state);
                    steps.push_back({StepKind::CallResult, method.sig, stmt.line, *inv.dst});
                    result = roll(steps);
                }
            }
        }

        if (inv.dst)
        {
            if (result)
                state[*inv.dst] = std::move(result);
            else
                state.erase(*inv.dst);
        }
    }

    Summary analyze(const ir::MethodDef& method, const TaintState& entry, int depth)
    {
        _max_depth = std::max(_max_depth, depth);
        Summary summary;
        auto const n = method.loc();
        if (n == 0)
            return summary;

        auto const is_source_method = method.sig == _source.method;
        std::vector<std::optional<TaintState>> in(static_cast<std::size_t>(n) + 1);
        in[1] = entry;
        std::set<int> work{1};
        while (!work.empty())
        {
            auto const line = *work.begin();
            work.erase(work.begin());
            auto const& stmt = *method.at(line);
            TaintState state = *in[static_cast<std::size_t>(line)];

            if (auto const* a = std::get_if<ir::Assign>(&stmt.kind))
            {
                auto const it = a->src.is_var() ? state.find(a->src.text) : state.end();
                if (it != state.end())
                    state[a->dst] = extend(it->second, {StepKind::Assign, method.sig, line, a->dst});
                else
                    state.erase(a->dst);
            }
            else if (auto const* inv = stmt.as_invoke())
            {
                transfer_invoke(method, stmt, *inv, state, summary, depth);
                if (is_source_method && line == _source.line && inv->dst)
                    state[*inv->dst] = extend(nullptr, {StepKind::Source, method.sig, line, *inv->dst});
            }
            else if (auto const* r = std::get_if<ir::Return>(&stmt.kind))
            {
                if (r->value && !summary.returns_tainted)
                    if (auto const it = state.find(*r->value); it != state.end())
                    {
                        summary.returns_tainted = true;
                        summary.return_witness = unroll(it->second);
                        summary.return_witness.push_back({StepKind::Return, method.sig, line, *r->value});
                    }
            }

            for (auto succ: ir::successors(method, line))
            {
                auto& target = in[static_cast<std::size_t>(succ)];
                bool changed = false;
                if (!target)
                {
                    target = state;
                    changed = true;
                }
                else
                {
                    for (const auto& [var, chain]: state)
                        changed |= target->emplace(var, chain).second;
                }
                if (changed)
                    work.insert(succ);
            }
        }
        return summary;
    }

    const ir::IrProgram& _program;
    const index::ApiCatalog& _catalog;
    index::CallSite _source;
    int _limit;
    int _max_depth = 0;
    std::map<std::string, Summary> _memo;
};

} // namespace

std::string_view to_string(StepKind kind) noexcept
{
    switch (kind)
    {
        case StepKind::Source: return "source";
        case StepKind::Assign: return "assign";
        case StepKind::CallArg: return "call-arg";
        case StepKind::Param: return "param";
        case StepKind::Return: return "return";
        case StepKind::CallResult: return "call-result";
        case StepKind::SinkArg: return "sink-arg";
    }
    return "source";
}

TaintResult taint_reachability(const ir::IrProgram& program, const index::CallSite& source,
                               const index::ApiCatalog& catalog, int depth_limit)
{
    auto const* method = program.find_method(source.method);
    auto const* stmt = method ? method->at(source.line) : nullptr;
    if (!stmt)
        throw Error(ErrorCode::InvalidSite, source.id() + " does not exist");
    auto const* inv = stmt->as_invoke();
    if (!inv)
        throw Error(ErrorCode::NotAnInvoke, source.id() + " is '" + stmt->render() + "'");
    if (!inv->dst)
        throw Error(ErrorCode::NoResultVariable, source.id() + " discards the result of " + inv->callee.str());

    index::CallSite resolved{source.method, source.line, inv->callee, inv->dst};
    return Engine(program, catalog, std::move(resolved), std::max(depth_limit, 0)).run();
}

} // namespace apktriage::analysis
