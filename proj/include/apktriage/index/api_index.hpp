// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/index/catalog.hpp>
#include <apktriage/ir/program.hpp>

#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace apktriage::index
{

struct CallSite
{
    ir::MethodSig method;
    int line = 0;
    ir::MethodSig callee;
    std::optional<std::string> result_var;

    /// `<method signature>@<line>`; unique within a program.
    [[nodiscard]] std::string id() const;

    friend bool operator==(const CallSite&, const CallSite&) = default;
};

/// Orders by (method signature, line).
bool operator<(const CallSite& lhs, const CallSite& rhs);

/// Distinct external callees of a program, split by catalog membership.
struct ApiSet
{
    std::set<ir::MethodSig> system;
    std::set<ir::MethodSig> non_system;
};

ApiSet extract_api_set(const ir::IrProgram& program, const ApiCatalog& catalog);

/// Inverted index from system-API signature to its call sites.
class ApiIndex
{
public:
    /// Call sites of sig ordered by (method, line); empty when never called or
    /// not a system API.
    [[nodiscard]] std::span<const CallSite> lookup(const ir::MethodSig& sig) const;
    [[nodiscard]] std::span<const CallSite> lookup(const std::string& canonical_sig) const;

    /// Indexed signatures, sorted.
    [[nodiscard]] std::vector<ir::MethodSig> signatures() const;
    [[nodiscard]] std::size_t size() const noexcept { return _sites.size(); }
    [[nodiscard]] std::size_t site_count() const noexcept;

    friend ApiIndex build_api_index(const ir::IrProgram& program, const ApiCatalog& catalog);

private:
    std::unordered_map<std::string, std::vector<CallSite>> _sites;
    std::unordered_map<std::string, ir::MethodSig> _sigs;
};

ApiIndex build_api_index(const ir::IrProgram& program, const ApiCatalog& catalog);

/// Convenience wrapper for index.lookup(sig).
std::span<const CallSite> lookup(const ApiIndex& index, const ir::MethodSig& sig);

/// Resolves (method, line) to the call site of the Invoke statement there.
std::optional<CallSite> call_site_at(const ir::IrProgram& program, const ir::MethodSig& method, int line);

struct SearchHit
{
    ir::MethodSig method;
    int line = 0;
    std::string text;

    friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Case-sensitive substring search over canonical statement renderings,
/// ordered by (method, line). An empty pattern matches nothing.
std::vector<SearchHit> global_search(const ir::IrProgram& program, std::string_view pattern);

} // namespace apktriage::index
