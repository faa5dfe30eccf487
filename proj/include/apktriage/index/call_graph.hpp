// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/ir/program.hpp>

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace apktriage::index
{

using NodeId = std::size_t;

struct CallEdge
{
    NodeId caller = 0;
    NodeId callee = 0;
    int line = 0; // call-site line in the caller

    friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

/// Method-level invocation graph. Nodes are sorted by canonical signature;
/// edges by (caller signature, line). Duplicate call sites are separate edges.
/// Callees without a body in the program are external leaf nodes.
class CallGraph
{
public:
    CallGraph() = default;

    [[nodiscard]] std::span<const ir::MethodSig> nodes() const noexcept { return _nodes; }
    [[nodiscard]] std::span<const CallEdge> edges() const noexcept { return _edges; }
    [[nodiscard]] std::size_t node_count() const noexcept { return _nodes.size(); }

    [[nodiscard]] std::optional<NodeId> find(const ir::MethodSig& sig) const;
    [[nodiscard]] const ir::MethodSig& sig(NodeId id) const { return _nodes.at(id); }
    [[nodiscard]] bool is_external(NodeId id) const { return _external.at(id); }

    /// Indices into edges() leaving / entering a node, in edge order.
    [[nodiscard]] std::span<const std::size_t> out_edges(NodeId id) const { return _out.at(id); }
    [[nodiscard]] std::span<const std::size_t> in_edges(NodeId id) const { return _in.at(id); }

    /// Distinct callers of a node, ascending by id (= by signature).
    [[nodiscard]] std::vector<NodeId> callers(NodeId id) const;

    friend CallGraph build_call_graph(const ir::IrProgram& program);

private:
    std::vector<ir::MethodSig> _nodes;
    std::vector<bool> _external;
    std::unordered_map<std::string, NodeId> _ids;
    std::vector<CallEdge> _edges;
    std::vector<std::vector<std::size_t>> _out;
    std::vector<std::vector<std::size_t>> _in;
};

CallGraph build_call_graph(const ir::IrProgram& program);

} // namespace apktriage::index
