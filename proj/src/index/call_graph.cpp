// SPDX-License-Identifier: Apache-2.0
#include <apktriage/index/call_graph.hpp>

#include <algorithm>
#include <map>

namespace apktriage::index
{

std::optional<NodeId> CallGraph::find(const ir::MethodSig& sig) const
{
    auto const it = _ids.find(sig.str());
    if (it == _ids.end())
        return std::nullopt;
    return it->second;
}

std::vector<NodeId> CallGraph::callers(NodeId id) const
{
    std::vector<NodeId> out;
    for (auto e: _in.at(id))
        out.push_back(_edges[e].caller);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CallGraph build_call_graph(const ir::IrProgram& program)
{
    // Sorted by canonical text, which is the node order.
    std::map<std::string, std::pair<ir::MethodSig, bool>> nodes;
    program.for_each_method([&](const ir::ClassDef&, const ir::MethodDef& m) {
        nodes.insert_or_assign(m.sig.str(), std::pair{m.sig, false});
    });
    program.for_each_method([&](const ir::ClassDef&, const ir::MethodDef& m) {
        for (const auto& stmt: m.body)
            if (auto const* inv = stmt.as_invoke())
                nodes.try_emplace(inv->callee.str(), std::pair{inv->callee, true});
    });

    CallGraph g;
    for (auto& [key, value]: nodes)
    {
        g._ids.emplace(key, g._nodes.size());
        g._nodes.push_back(value.first);
        g._external.push_back(value.second);
    }
    g._out.resize(g._nodes.size());
    g._in.resize(g._nodes.size());

    for (NodeId caller = 0; caller < g._nodes.size(); ++caller)
    {
        if (g._external[caller])
            continue;
        auto const* method = program.find_method(g._nodes[caller]);
        for (const auto& stmt: method->body)
            if (auto const* inv = stmt.as_invoke())
                g._edges.push_back({caller, g._ids.at(inv->callee.str()), stmt.line});
    }
    for (std::size_t e = 0; e < g._edges.size(); ++e)
    {
        g._out[g._edges[e].caller].push_back(e);
        g._in[g._edges[e].callee].push_back(e);
    }
    return g;
}

} // namespace apktriage::index
