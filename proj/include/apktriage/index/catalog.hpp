// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/ir/signature.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace apktriage::index
{

enum class SinkCategory
{
    Network,
    Storage,
    Telephony
};

std::string_view to_string(SinkCategory category) noexcept;
std::optional<SinkCategory> sink_category_from_string(std::string_view text) noexcept;

/// An exact canonical signature, or a `<prefix>*` wildcard matched against
/// `class.method` (the prefix may not contain '(').
class ApiPattern
{
public:
    static ApiPattern parse(std::string_view text);

    [[nodiscard]] bool matches(const ir::MethodSig& sig) const;
    [[nodiscard]] bool is_wildcard() const noexcept { return _wildcard; }
    [[nodiscard]] const std::string& text() const noexcept { return _text; }

    friend bool operator==(const ApiPattern&, const ApiPattern&) = default;

private:
    std::string _text; // exact signature, or prefix without the '*'
    bool _wildcard = false;
};

/// Pattern set with hashed exact lookups and a linear scan over wildcards.
class PatternSet
{
public:
    void add(const ApiPattern& pattern);
    [[nodiscard]] bool matches(const ir::MethodSig& sig) const;
    [[nodiscard]] const std::vector<ApiPattern>& patterns() const noexcept { return _all; }
    [[nodiscard]] bool empty() const noexcept { return _all.empty(); }

private:
    std::unordered_set<std::string> _exact;
    std::vector<std::string> _prefixes;
    std::vector<ApiPattern> _all;
};

/// The system-API catalog: which callees count as platform APIs, which are
/// taint sources and sinks, and which APIs each permission guards.
class ApiCatalog
{
public:
    /// `.cat` format: `api:<sig>`, `source:<sig>`, `sink:<category>:<sig>`,
    /// `perm:<PERMISSION>-><sig-or-prefix>`; `#` comments. Sources, sinks and
    /// permission-guarded APIs are implicitly system APIs.
    static ApiCatalog parse(std::string_view text);
    static ApiCatalog load(const std::filesystem::path& path);

    void add_api(const ApiPattern& pattern);
    void add_source(const ApiPattern& pattern);
    void add_sink(SinkCategory category, const ApiPattern& pattern);
    void add_permission_api(const std::string& permission, const ApiPattern& pattern);

    [[nodiscard]] bool is_system(const ir::MethodSig& sig) const;
    [[nodiscard]] bool is_source(const ir::MethodSig& sig) const;
    [[nodiscard]] std::optional<SinkCategory> sink_category(const ir::MethodSig& sig) const;

    /// Patterns guarded by a permission (empty when unknown).
    [[nodiscard]] const std::vector<ApiPattern>& permission_apis(std::string_view permission) const;
    [[nodiscard]] std::vector<std::string> permissions() const;
    /// Permissions whose guarded APIs include sig.
    [[nodiscard]] std::vector<std::string> permissions_for(const ir::MethodSig& sig) const;

private:
    PatternSet _system;
    PatternSet _sources;
    std::vector<std::pair<SinkCategory, PatternSet>> _sinks;
    std::map<std::string, std::vector<ApiPattern>, std::less<>> _permissions;
};

} // namespace apktriage::index
