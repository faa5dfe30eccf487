// SPDX-License-Identifier: Apache-2.0
#include <apktriage/analysis/slice.hpp>
#include <apktriage/error.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace apktriage::analysis
{

namespace
{

// Reaching definitions: for each line, var -> defining lines (0 = parameter).
using Defs = std::map<std::string, std::set<int>>;

std::vector<Defs> reaching_definitions(const ir::MethodDef& method)
{
    auto const n = method.loc();
    std::vector<Defs> in(static_cast<std::size_t>(n) + 1);
    if (n == 0)
        return in;
    for (const auto& p: method.params)
        in[1][p] = {0};
    // Every line is visited at least once so that definitions in unreachable
    // code still reach their uses there.
    std::set<int> work;
    for (int line = 1; line <= n; ++line)
        work.insert(line);
    while (!work.empty())
    {
        auto const line = *work.begin();
        work.erase(work.begin());
        auto out = in[static_cast<std::size_t>(line)];
        if (auto d = method.at(line)->def())
            out[*d] = {line};
        for (auto succ: ir::successors(method, line))
        {
            auto& target = in[static_cast<std::size_t>(succ)];
            bool changed = false;
            for (const auto& [var, lines]: out)
            {
                auto& dst = target[var];
                for (auto l: lines)
                    changed |= dst.insert(l).second;
            }
            if (changed)
                work.insert(succ);
        }
    }
    return in;
}

} // namespace

Slice backward_slice(const ir::IrProgram& program, const ir::MethodSig& method, int target_line,
                     const std::string& target_var)
{
    auto const* m = program.find_method(method);
    auto const* stmt = m ? m->at(target_line) : nullptr;
    if (!stmt)
        throw Error(ErrorCode::InvalidTarget, method.str() + " line " + std::to_string(target_line) + " does not exist");
    auto const uses = stmt->uses();
    if (stmt->def() != target_var && std::find(uses.begin(), uses.end(), target_var) == uses.end())
        throw Error(ErrorCode::InvalidTarget,
                    "'" + target_var + "' is neither defined nor used at line " + std::to_string(target_line));

    auto const rd = reaching_definitions(*m);
    std::set<int> kept{target_line};
    std::vector<int> work{target_line};

    // If statements with their influenced open ranges.
    std::vector<std::pair<int, std::pair<int, int>>> branches;
    for (const auto& s: m->body)
        if (auto const* b = std::get_if<ir::If>(&s.kind))
            branches.push_back({s.line, {std::min(s.line, b->target), std::max(s.line, b->target)}});

    auto keep = [&](int line) {
        if (line > 0 && kept.insert(line).second)
            work.push_back(line);
    };
    while (!work.empty())
    {
        while (!work.empty())
        {
            auto const line = work.back();
            work.pop_back();
            auto const& defs = rd[static_cast<std::size_t>(line)];
            for (const auto& var: m->at(line)->uses())
                if (auto const it = defs.find(var); it != defs.end())
                    for (auto d: it->second)
                        keep(d);
        }
        for (const auto& [line, range]: branches)
        {
            if (kept.contains(line))
                continue;
            auto const it = kept.upper_bound(range.first);
            if (it != kept.end() && *it < range.second)
                keep(line);
        }
    }

    Slice slice;
    slice.method = method;
    slice.target_line = target_line;
    slice.target_var = target_var;
    slice.kept_lines.assign(kept.begin(), kept.end());
    slice.removed_count = m->loc() - static_cast<int>(kept.size());
    return slice;
}

std::vector<std::string> render_slice(const ir::IrProgram& program, const Slice& slice)
{
    std::vector<std::string> out;
    auto const* m = program.find_method(slice.method);
    if (!m)
        return out;
    for (auto line: slice.kept_lines)
        if (auto const* s = m->at(line))
            out.push_back(std::to_string(line) + ": " + s->render());
    return out;
}

} // namespace apktriage::analysis
