// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/index/call_graph.hpp>
#include <apktriage/ir/manifest.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apktriage::analysis
{

enum class EntryKind
{
    UserInteraction,
    SystemEvent,
    Lifecycle,
    Unknown
};

std::string_view to_string(EntryKind kind) noexcept;
std::optional<EntryKind> entry_kind_from_string(std::string_view text) noexcept;

/// Entry-point rules loaded from an `.epc` file:
///   user:<method-name>
///   system:<method-name>@<component-kind>
///   lifecycle:<method-name>
class EntryCatalog
{
public:
    static EntryCatalog parse(std::string_view text);
    static EntryCatalog load(const std::filesystem::path& path);

    void add_user(std::string method_name);
    void add_system(std::string method_name, ir::ComponentKind kind);
    void add_lifecycle(std::string method_name);

    /// Classifies a method as an entry point. System-event rules take precedence,
    /// then user interaction, then lifecycle. A system rule only matches when the
    /// method's class is a manifest component of the named kind.
    [[nodiscard]] std::optional<EntryKind> classify(const ir::MethodSig& sig, const ir::Manifest& manifest) const;

private:
    std::vector<std::string> _user;
    std::vector<std::pair<std::string, ir::ComponentKind>> _system;
    std::vector<std::string> _lifecycle;
};

struct TriggerChain
{
    /// Entry method first, target method last; consecutive elements are
    /// connected by call-graph edges.
    std::vector<ir::MethodSig> path;
    EntryKind entry_kind = EntryKind::Unknown;

    [[nodiscard]] std::size_t depth() const noexcept { return path.empty() ? 0 : path.size() - 1; }
    friend bool operator==(const TriggerChain&, const TriggerChain&) = default;
};

inline constexpr int kDefaultTriggerDepth = 10;

/// Backward reachability from `target` over at most `max_depth` call edges.
///
/// One chain (a shortest path, ties broken lexicographically) is emitted for
/// every reached entry point, and one Unknown chain for every reached non-entry
/// method whose callers are not explored: methods with no callers, and methods
/// at exactly max_depth that still have callers. Chains are ordered by length,
/// then lexicographically by path.
///
/// Throws Error(UnknownMethod) if target is not a defined node of the graph.
std::vector<TriggerChain> trigger_paths(const index::CallGraph& graph, const ir::MethodSig& target,
                                        const EntryCatalog& entries, const ir::Manifest& manifest,
                                        int max_depth = kDefaultTriggerDepth);

/// First entry-point chain, else the first Unknown chain.
std::optional<TriggerChain> best_trigger(const std::vector<TriggerChain>& chains);

} // namespace apktriage::analysis
