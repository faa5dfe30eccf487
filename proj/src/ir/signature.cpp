// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>
#include <apktriage/ir/signature.hpp>

#include <cctype>

namespace apktriage::ir
{

namespace
{

bool is_ident_start(char c) noexcept
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) noexcept
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool valid_class_name(std::string_view name) noexcept
{
    if (name.empty() || name.front() == '.' || name.back() == '.')
        return false;
    char prev = 0;
    for (char c: name)
    {
        if (c == '.' && prev == '.')
            return false;
        if (c != '.' && !is_ident_char(c))
            return false;
        prev = c;
    }
    return true;
}

bool valid_method_name(std::string_view name) noexcept
{
    if (name == "<init>" || name == "<clinit>")
        return true;
    return is_identifier(name);
}

bool valid_type_name(std::string_view name) noexcept
{
    if (name.empty())
        return false;
    for (char c: name)
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '(' || c == ')')
            return false;
    return true;
}

std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad(std::string_view text, const std::string& why)
{
    throw SyntaxError(0, "bad signature '" + std::string(text) + "': " + why);
}

} // namespace

bool is_identifier(std::string_view text) noexcept
{
    if (text.empty() || !is_ident_start(text.front()))
        return false;
    for (char c: text)
        if (!is_ident_char(c))
            return false;
    return true;
}

std::string MethodSig::qualified_name() const
{
    return class_name + "." + method_name;
}

std::string MethodSig::str() const
{
    std::string out = qualified_name();
    out += '(';
    for (std::size_t i = 0; i < param_types.size(); ++i)
    {
        if (i)
            out += ',';
        out += param_types[i];
    }
    out += ")->";
    out += return_type;
    return out;
}

MethodSig MethodSig::parse_prefix(std::string_view text, std::size_t& pos)
{
    auto const start = pos;
    auto const open = text.find('(', pos);
    if (open == std::string_view::npos)
        bad(text.substr(start), "missing '('");
    auto const head = text.substr(pos, open - pos);
    auto const dot = head.rfind('.');
    if (dot == std::string_view::npos)
        bad(text.substr(start), "missing class qualifier");

    MethodSig sig;
    sig.class_name = std::string(head.substr(0, dot));
    sig.method_name = std::string(head.substr(dot + 1));
    if (!valid_class_name(sig.class_name))
        bad(text.substr(start), "invalid class name");
    if (!valid_method_name(sig.method_name))
        bad(text.substr(start), "invalid method name");

    auto const close = text.find(')', open);
    if (close == std::string_view::npos)
        bad(text.substr(start), "missing ')'");
    auto params = trim(text.substr(open + 1, close - open - 1));
    while (!params.empty())
    {
        auto const comma = params.find(',');
        auto const type = trim(params.substr(0, comma));
        if (!valid_type_name(type))
            bad(text.substr(start), "invalid parameter type");
        sig.param_types.emplace_back(type);
        if (comma == std::string_view::npos)
            break;
        params = params.substr(comma + 1);
        if (trim(params).empty())
            bad(text.substr(start), "trailing ','");
    }

    pos = close + 1;
    if (text.substr(pos, 2) != "->")
        bad(text.substr(start), "missing '->'");
    pos += 2;
    auto const ret_start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '('
           && text[pos] != ')' && text[pos] != ',')
        ++pos;
    sig.return_type = std::string(text.substr(ret_start, pos - ret_start));
    if (!valid_type_name(sig.return_type))
        bad(text.substr(start), "missing return type");
    return sig;
}

MethodSig MethodSig::parse(std::string_view text)
{
    auto const trimmed = trim(text);
    std::size_t pos = 0;
    auto sig = parse_prefix(trimmed, pos);
    if (pos != trimmed.size())
        bad(text, "trailing characters");
    return sig;
}

bool operator<(const MethodSig& lhs, const MethodSig& rhs)
{
    return lhs.str() < rhs.str();
}

} // namespace apktriage::ir
