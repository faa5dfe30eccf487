// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>
#include <apktriage/ir/manifest.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace apktriage::ir
{

namespace
{

constexpr std::array kKindNames = {std::pair{ComponentKind::Activity, std::string_view("Activity")},
                                   std::pair{ComponentKind::Service, std::string_view("Service")},
                                   std::pair{ComponentKind::Receiver, std::string_view("Receiver")},
                                   std::pair{ComponentKind::Provider, std::string_view("Provider")}};

constexpr std::string_view kPermissionPrefix = "android.permission.";

std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    while (true)
    {
        auto const at = s.find(sep);
        parts.push_back(trim(s.substr(0, at)));
        if (at == std::string_view::npos)
            break;
        s = s.substr(at + 1);
    }
    return parts;
}

Component parse_component(std::string_view spec, int line)
{
    auto const parts = split(spec, ':');
    if (parts.size() < 2)
        throw SyntaxError(line, "component needs '<kind>:<class>'");
    auto const kind = component_kind_from_string(parts[0]);
    if (!kind)
        throw SyntaxError(line, "unknown component kind '" + std::string(parts[0]) + "'");
    Component c;
    c.kind = *kind;
    c.name = std::string(parts[1]);
    if (c.name.empty())
        throw SyntaxError(line, "component class name is empty");
    for (std::size_t i = 2; i < parts.size(); ++i)
    {
        auto const p = parts[i];
        if (p == "exported")
            c.exported = true;
        else if (p.starts_with("action="))
        {
            for (auto action: split(p.substr(7), ','))
            {
                if (action.empty())
                    throw SyntaxError(line, "empty intent action");
                c.intent_actions.emplace_back(action);
            }
        }
        else
            throw SyntaxError(line, "unknown component attribute '" + std::string(p) + "'");
    }
    return c;
}

} // namespace

std::string_view to_string(ComponentKind kind) noexcept
{
    for (auto const& [k, name]: kKindNames)
        if (k == kind)
            return name;
    return "Activity";
}

std::optional<ComponentKind> component_kind_from_string(std::string_view text) noexcept
{
    for (auto const& [k, name]: kKindNames)
        if (name == text)
            return k;
    return std::nullopt;
}

const Component* Manifest::find_component(std::string_view class_name) const noexcept
{
    for (const auto& c: components)
        if (c.name == class_name)
            return &c;
    return nullptr;
}

bool Manifest::requests(std::string_view permission) const noexcept
{
    return std::find(permissions.begin(), permissions.end(), permission) != permissions.end();
}

Manifest parse_manifest(std::string_view text)
{
    Manifest m;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        auto const nl = text.find('\n', pos);
        auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++lineno;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        auto line = trim(raw);
        if (line.empty() || line.starts_with('#'))
            continue;
        auto const colon = line.find(':');
        if (colon == std::string_view::npos)
            throw SyntaxError(lineno, "expected '<key>:<value>'");
        auto const key = trim(line.substr(0, colon));
        auto const value = trim(line.substr(colon + 1));
        if (key == "package")
            m.package = std::string(value);
        else if (key == "category")
            m.category = std::string(value);
        else if (key == "description")
            m.description = std::string(value);
        else if (key == "permission")
        {
            auto name = value;
            if (name.starts_with(kPermissionPrefix))
                name.remove_prefix(kPermissionPrefix.size());
            if (name.empty())
                throw SyntaxError(lineno, "empty permission name");
            m.permissions.emplace_back(name);
        }
        else if (key == "component")
            m.components.push_back(parse_component(value, lineno));
        else
            throw SyntaxError(lineno, "unknown manifest key '" + std::string(key) + "'");
    }
    return m;
}

std::string render_manifest(const Manifest& manifest)
{
    std::ostringstream out;
    out << "package: " << manifest.package << '\n';
    out << "category: " << manifest.category << '\n';
    out << "description: " << manifest.description << '\n';
    for (const auto& p: manifest.permissions)
        out << "permission:" << p << '\n';
    for (const auto& c: manifest.components)
    {
        out << "component:" << to_string(c.kind) << ':' << c.name;
        if (!c.intent_actions.empty())
        {
            out << ":action=";
            for (std::size_t i = 0; i < c.intent_actions.size(); ++i)
                out << (i ? "," : "") << c.intent_actions[i];
        }
        if (c.exported)
            out << ":exported";
        out << '\n';
    }
    return out.str();
}

} // namespace apktriage::ir
