// SPDX-License-Identifier: Apache-2.0
#include <apktriage/analysis/trigger.hpp>
#include <apktriage/error.hpp>
#include <apktriage/ir/bundle.hpp>

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>

namespace apktriage::analysis
{

namespace
{

std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool path_less(const std::vector<ir::MethodSig>& a, const std::vector<ir::MethodSig>& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace

std::string_view to_string(EntryKind kind) noexcept
{
    switch (kind)
    {
        case EntryKind::UserInteraction: return "UserInteraction";
        case EntryKind::SystemEvent: return "SystemEvent";
        case EntryKind::Lifecycle: return "Lifecycle";
        case EntryKind::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::optional<EntryKind> entry_kind_from_string(std::string_view text) noexcept
{
    for (auto k: {EntryKind::UserInteraction, EntryKind::SystemEvent, EntryKind::Lifecycle, EntryKind::Unknown})
        if (to_string(k) == text)
            return k;
    return std::nullopt;
}

void EntryCatalog::add_user(std::string method_name)
{
    _user.push_back(std::move(method_name));
}

void EntryCatalog::add_system(std::string method_name, ir::ComponentKind kind)
{
    _system.emplace_back(std::move(method_name), kind);
}

void EntryCatalog::add_lifecycle(std::string method_name)
{
    _lifecycle.push_back(std::move(method_name));
}

std::optional<EntryKind> EntryCatalog::classify(const ir::MethodSig& sig, const ir::Manifest& manifest) const
{
    auto const* component = manifest.find_component(sig.class_name);
    for (const auto& [name, kind]: _system)
        if (name == sig.method_name && component && component->kind == kind)
            return EntryKind::SystemEvent;
    if (std::find(_user.begin(), _user.end(), sig.method_name) != _user.end())
        return EntryKind::UserInteraction;
    if (std::find(_lifecycle.begin(), _lifecycle.end(), sig.method_name) != _lifecycle.end())
        return EntryKind::Lifecycle;
    return std::nullopt;
}

EntryCatalog EntryCatalog::parse(std::string_view text)
{
    EntryCatalog catalog;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        auto const nl = text.find('\n', pos);
        auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        ++lineno;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (line.empty() || line.starts_with('#'))
            continue;
        auto const colon = line.find(':');
        if (colon == std::string_view::npos)
            throw SyntaxError(lineno, "expected '<kind>:<method-name>'");
        auto const kind = line.substr(0, colon);
        auto const rest = trim(line.substr(colon + 1));
        if (rest.empty())
            throw SyntaxError(lineno, "missing method name");
        if (kind == "user")
            catalog.add_user(std::string(rest));
        else if (kind == "lifecycle")
            catalog.add_lifecycle(std::string(rest));
        else if (kind == "system")
        {
            auto const at = rest.find('@');
            auto const component = at == std::string_view::npos
                                       ? std::nullopt
                                       : ir::component_kind_from_string(trim(rest.substr(at + 1)));
            if (!component)
                throw SyntaxError(lineno, "system entry needs '<method-name>@<component-kind>'");
            catalog.add_system(std::string(trim(rest.substr(0, at))), *component);
        }
        else
            throw SyntaxError(lineno, "unknown entry kind '" + std::string(kind) + "'");
    }
    return catalog;
}

EntryCatalog EntryCatalog::load(const std::filesystem::path& path)
{
    return parse(ir::read_text_file(path));
}

std::vector<TriggerChain> trigger_paths(const index::CallGraph& graph, const ir::MethodSig& target,
                                        const EntryCatalog& entries, const ir::Manifest& manifest, int max_depth)
{
    auto const start = graph.find(target);
    if (!start || graph.is_external(*start))
        throw Error(ErrorCode::UnknownMethod, target.str());
    max_depth = std::max(max_depth, 0);

    // Backward BFS; best[n] is the lexicographically least shortest path n -> target.
    // Every level is final before the next one is expanded.
    std::map<index::NodeId, int> dist;
    std::map<index::NodeId, std::vector<ir::MethodSig>> best;
    std::deque<index::NodeId> queue{*start};
    dist[*start] = 0;
    best[*start] = {target};
    while (!queue.empty())
    {
        auto const node = queue.front();
        queue.pop_front();
        if (dist[node] == max_depth)
            continue;
        for (auto caller: graph.callers(node))
        {
            std::vector<ir::MethodSig> candidate{graph.sig(caller)};
            candidate.insert(candidate.end(), best[node].begin(), best[node].end());
            auto const it = dist.find(caller);
            if (it == dist.end())
            {
                dist[caller] = dist[node] + 1;
                best[caller] = std::move(candidate);
                queue.push_back(caller);
            }
            else if (it->second == dist[node] + 1 && candidate < best[caller])
            {
                best[caller] = std::move(candidate);
            }
        }
    }

    std::vector<TriggerChain> chains;
    for (const auto& [node, d]: dist)
    {
        auto const& sig = graph.sig(node);
        if (auto kind = entries.classify(sig, manifest))
        {
            chains.push_back({best[node], *kind});
            continue;
        }
        auto const has_callers = !graph.in_edges(node).empty();
        if (!has_callers || d == max_depth)
            chains.push_back({best[node], EntryKind::Unknown});
    }
    std::sort(chains.begin(), chains.end(),
              [](const TriggerChain& a, const TriggerChain& b) { return path_less(a.path, b.path); });
    return chains;
}

std::optional<TriggerChain> best_trigger(const std::vector<TriggerChain>& chains)
{
    for (const auto& c: chains)
        if (c.entry_kind != EntryKind::Unknown)
            return c;
    if (!chains.empty())
        return chains.front();
    return std::nullopt;
}

} // namespace apktriage::analysis
