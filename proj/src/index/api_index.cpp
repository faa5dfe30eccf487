// SPDX-License-Identifier: Apache-2.0
#include <apktriage/index/api_index.hpp>

#include <algorithm>

namespace apktriage::index
{

std::string CallSite::id() const
{
    return method.str() + "@" + std::to_string(line);
}

bool operator<(const CallSite& lhs, const CallSite& rhs)
{
    if (lhs.method != rhs.method)
        return lhs.method < rhs.method;
    return lhs.line < rhs.line;
}

ApiSet extract_api_set(const ir::IrProgram& program, const ApiCatalog& catalog)
{
    ApiSet out;
    program.for_each_method([&](const ir::ClassDef&, const ir::MethodDef& m) {
        for (const auto& stmt: m.body)
        {
            auto const* inv = stmt.as_invoke();
            if (!inv || program.find_method(inv->callee))
                continue;
            if (catalog.is_system(inv->callee))
                out.system.insert(inv->callee);
            else
                out.non_system.insert(inv->callee);
        }
    });
    return out;
}

std::span<const CallSite> ApiIndex::lookup(const ir::MethodSig& sig) const
{
    return lookup(sig.str());
}

std::span<const CallSite> ApiIndex::lookup(const std::string& canonical_sig) const
{
    auto const it = _sites.find(canonical_sig);
    if (it == _sites.end())
        return {};
    return it->second;
}

std::vector<ir::MethodSig> ApiIndex::signatures() const
{
    std::vector<ir::MethodSig> out;
    out.reserve(_sigs.size());
    for (const auto& [_, sig]: _sigs)
        out.push_back(sig);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t ApiIndex::site_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& [_, sites]: _sites)
        n += sites.size();
    return n;
}

ApiIndex build_api_index(const ir::IrProgram& program, const ApiCatalog& catalog)
{
    ApiIndex index;
    auto const api = extract_api_set(program, catalog);
    for (const auto& sig: api.system)
        index._sigs.emplace(sig.str(), sig);

    program.for_each_method([&](const ir::ClassDef&, const ir::MethodDef& m) {
        for (const auto& stmt: m.body)
        {
            auto const* inv = stmt.as_invoke();
            if (!inv)
                continue;
            auto key = inv->callee.str();
            if (!index._sigs.contains(key))
                continue;
            index._sites[key].push_back({m.sig, stmt.line, inv->callee, inv->dst});
        }
    });
    for (auto& [_, sites]: index._sites)
        std::sort(sites.begin(), sites.end());
    return index;
}

std::span<const CallSite> lookup(const ApiIndex& index, const ir::MethodSig& sig)
{
    return index.lookup(sig);
}

std::optional<CallSite> call_site_at(const ir::IrProgram& program, const ir::MethodSig& method, int line)
{
    auto const* m = program.find_method(method);
    if (!m)
        return std::nullopt;
    auto const* stmt = m->at(line);
    if (!stmt || !stmt->as_invoke())
        return std::nullopt;
    auto const* inv = stmt->as_invoke();
    return CallSite{method, line, inv->callee, inv->dst};
}

std::vector<SearchHit> global_search(const ir::IrProgram& program, std::string_view pattern)
{
    std::vector<SearchHit> hits;
    if (pattern.empty())
        return hits;
    program.for_each_method([&](const ir::ClassDef&, const ir::MethodDef& m) {
        for (const auto& stmt: m.body)
        {
            auto text = stmt.render();
            if (text.find(pattern) != std::string::npos)
                hits.push_back({m.sig, stmt.line, std::move(text)});
        }
    });
    std::stable_sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.method != b.method)
            return a.method < b.method;
        return a.line < b.line;
    });
    return hits;
}

} // namespace apktriage::index
