// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace apktriage::ir
{

/// Fully qualified method signature. Canonical text form is
/// `class.method(t1,t2)->ret`; parse(str()) is the identity.
struct MethodSig
{
    std::string class_name;
    std::string method_name;
    std::vector<std::string> param_types;
    std::string return_type;

    [[nodiscard]] std::string str() const;

    /// `class.method` without the parameter list.
    [[nodiscard]] std::string qualified_name() const;

    /// Parses a complete signature; throws SyntaxError (line 0) on malformed text.
    static MethodSig parse(std::string_view text);

    /// Parses a signature at the start of `text` and advances `pos` past it. The
    /// return type ends at whitespace or at '(' so a call's argument list may
    /// follow immediately.
    static MethodSig parse_prefix(std::string_view text, std::size_t& pos);

    friend bool operator==(const MethodSig&, const MethodSig&) = default;
};

/// Lexicographic by canonical rendering.
bool operator<(const MethodSig& lhs, const MethodSig& rhs);

bool is_identifier(std::string_view text) noexcept;

} // namespace apktriage::ir

template <>
struct std::hash<apktriage::ir::MethodSig>
{
    std::size_t operator()(const apktriage::ir::MethodSig& sig) const noexcept
    {
        return std::hash<std::string>{}(sig.str());
    }
};
