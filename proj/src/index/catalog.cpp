// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>
#include <apktriage/index/catalog.hpp>
#include <apktriage/ir/bundle.hpp>

#include <cctype>

namespace apktriage::index
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

} // namespace

std::string_view to_string(SinkCategory category) noexcept
{
    switch (category)
    {
        case SinkCategory::Network: return "network";
        case SinkCategory::Storage: return "storage";
        case SinkCategory::Telephony: return "telephony";
    }
    return "network";
}

std::optional<SinkCategory> sink_category_from_string(std::string_view text) noexcept
{
    if (text == "network")
        return SinkCategory::Network;
    if (text == "storage")
        return SinkCategory::Storage;
    if (text == "telephony")
        return SinkCategory::Telephony;
    return std::nullopt;
}

ApiPattern ApiPattern::parse(std::string_view text)
{
    text = trim(text);
    ApiPattern p;
    if (text.ends_with('*'))
    {
        auto const prefix = text.substr(0, text.size() - 1);
        if (prefix.empty() || prefix.find_first_of("(*") != std::string_view::npos)
            throw SyntaxError(0, "bad wildcard pattern '" + std::string(text) + "'");
        p._text = std::string(prefix);
        p._wildcard = true;
    }
    else
    {
        p._text = ir::MethodSig::parse(text).str();
    }
    return p;
}

bool ApiPattern::matches(const ir::MethodSig& sig) const
{
    if (_wildcard)
        return sig.qualified_name().starts_with(_text);
    return sig.str() == _text;
}

void PatternSet::add(const ApiPattern& pattern)
{
    for (const auto& existing: _all)
        if (existing == pattern)
            return;
    _all.push_back(pattern);
    if (pattern.is_wildcard())
        _prefixes.push_back(pattern.text());
    else
        _exact.insert(pattern.text());
}

bool PatternSet::matches(const ir::MethodSig& sig) const
{
    if (!_exact.empty() && _exact.contains(sig.str()))
        return true;
    if (_prefixes.empty())
        return false;
    auto const qualified = sig.qualified_name();
    for (const auto& prefix: _prefixes)
        if (qualified.starts_with(prefix))
            return true;
    return false;
}

void ApiCatalog::add_api(const ApiPattern& pattern)
{
    _system.add(pattern);
}

void ApiCatalog::add_source(const ApiPattern& pattern)
{
    _sources.add(pattern);
    _system.add(pattern);
}

void ApiCatalog::add_sink(SinkCategory category, const ApiPattern& pattern)
{
    for (auto& [cat, set]: _sinks)
        if (cat == category)
        {
            set.add(pattern);
            _system.add(pattern);
            return;
        }
    _sinks.emplace_back(category, PatternSet{});
    _sinks.back().second.add(pattern);
    _system.add(pattern);
}

void ApiCatalog::add_permission_api(const std::string& permission, const ApiPattern& pattern)
{
    auto& list = _permissions[permission];
    for (const auto& p: list)
        if (p == pattern)
            return;
    list.push_back(pattern);
    _system.add(pattern);
}

bool ApiCatalog::is_system(const ir::MethodSig& sig) const
{
    return _system.matches(sig);
}

bool ApiCatalog::is_source(const ir::MethodSig& sig) const
{
    return _sources.matches(sig);
}

std::optional<SinkCategory> ApiCatalog::sink_category(const ir::MethodSig& sig) const
{
    for (const auto& [cat, set]: _sinks)
        if (set.matches(sig))
            return cat;
    return std::nullopt;
}

const std::vector<ApiPattern>& ApiCatalog::permission_apis(std::string_view permission) const
{
    static const std::vector<ApiPattern> kEmpty;
    auto const it = _permissions.find(permission);
    return it == _permissions.end() ? kEmpty : it->second;
}

std::vector<std::string> ApiCatalog::permissions() const
{
    std::vector<std::string> out;
    for (const auto& [perm, _]: _permissions)
        out.push_back(perm);
    return out;
}

std::vector<std::string> ApiCatalog::permissions_for(const ir::MethodSig& sig) const
{
    std::vector<std::string> out;
    for (const auto& [perm, patterns]: _permissions)
        for (const auto& p: patterns)
            if (p.matches(sig))
            {
                out.push_back(perm);
                break;
            }
    return out;
}

ApiCatalog ApiCatalog::parse(std::string_view text)
{
    ApiCatalog catalog;
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
            throw SyntaxError(lineno, "expected '<kind>:<value>'");
        auto const kind = line.substr(0, colon);
        auto const rest = trim(line.substr(colon + 1));
        try
        {
            if (kind == "api")
                catalog.add_api(ApiPattern::parse(rest));
            else if (kind == "source")
                catalog.add_source(ApiPattern::parse(rest));
            else if (kind == "sink")
            {
                auto const c2 = rest.find(':');
                auto const cat = c2 == std::string_view::npos ? std::nullopt
                                                              : sink_category_from_string(rest.substr(0, c2));
                if (!cat)
                    throw SyntaxError(lineno, "sink needs '<network|storage|telephony>:<sig>'");
                catalog.add_sink(*cat, ApiPattern::parse(rest.substr(c2 + 1)));
            }
            else if (kind == "perm")
            {
                auto const arrow = rest.find("->");
                if (arrow == std::string_view::npos || arrow == 0)
                    throw SyntaxError(lineno, "perm needs '<PERMISSION>-><sig-or-prefix>'");
                catalog.add_permission_api(std::string(trim(rest.substr(0, arrow))),
                                           ApiPattern::parse(rest.substr(arrow + 2)));
            }
            else
                throw SyntaxError(lineno, "unknown catalog entry kind '" + std::string(kind) + "'");
        }
        catch (const SyntaxError& e)
        {
            if (e.line() != 0)
                throw;
            throw SyntaxError(lineno, e.reason());
        }
    }
    return catalog;
}

ApiCatalog ApiCatalog::load(const std::filesystem::path& path)
{
    return parse(ir::read_text_file(path));
}

} // namespace apktriage::index
