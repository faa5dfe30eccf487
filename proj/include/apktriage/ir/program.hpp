// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/ir/signature.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace apktriage::ir
{

/// A statement operand: either a local variable or a literal constant
/// (string, number, null, true, false).
struct Operand
{
    enum class Kind
    {
        Var,
        Literal
    };

    Kind kind = Kind::Var;
    std::string text;

    static Operand var(std::string name) { return {Kind::Var, std::move(name)}; }
    static Operand literal(std::string value) { return {Kind::Literal, std::move(value)}; }

    [[nodiscard]] bool is_var() const noexcept { return kind == Kind::Var; }

    friend bool operator==(const Operand&, const Operand&) = default;
};

struct Assign
{
    std::string dst;
    Operand src; // Literal renders as `dst = const <lit>`
    friend bool operator==(const Assign&, const Assign&) = default;
};

struct Invoke
{
    std::optional<std::string> dst;
    MethodSig callee;
    std::vector<Operand> args;
    friend bool operator==(const Invoke&, const Invoke&) = default;
};

struct If
{
    std::string cond;
    int target = 0;
    friend bool operator==(const If&, const If&) = default;
};

struct Goto
{
    int target = 0;
    friend bool operator==(const Goto&, const Goto&) = default;
};

struct Return
{
    std::optional<std::string> value;
    friend bool operator==(const Return&, const Return&) = default;
};

struct Nop
{
    friend bool operator==(const Nop&, const Nop&) = default;
};

using StatementKind = std::variant<Assign, Invoke, If, Goto, Return, Nop>;

struct Statement
{
    int line = 0; // 1-based, local to the method
    StatementKind kind;

    /// Variables read by this statement, in operand order, without duplicates.
    [[nodiscard]] std::vector<std::string> uses() const;
    /// Variable written by this statement, if any.
    [[nodiscard]] std::optional<std::string> def() const;
    /// Canonical text without the line number.
    [[nodiscard]] std::string render() const;

    [[nodiscard]] const Invoke* as_invoke() const noexcept { return std::get_if<Invoke>(&kind); }

    friend bool operator==(const Statement&, const Statement&) = default;
};

struct MethodDef
{
    MethodSig sig;
    std::vector<std::string> params;
    std::vector<Statement> body;

    [[nodiscard]] int loc() const noexcept { return static_cast<int>(body.size()); }
    /// Statement at a 1-based line, or nullptr when out of range.
    [[nodiscard]] const Statement* at(int line) const noexcept;

    friend bool operator==(const MethodDef&, const MethodDef&) = default;
};

struct ClassDef
{
    std::string name;
    std::optional<std::string> superclass;
    std::vector<MethodDef> methods;

    friend bool operator==(const ClassDef&, const ClassDef&) = default;
};

struct IrProgram
{
    std::vector<ClassDef> classes;

    [[nodiscard]] const MethodDef* find_method(const MethodSig& sig) const noexcept;
    [[nodiscard]] const ClassDef* find_class(std::string_view name) const noexcept;
    [[nodiscard]] std::size_t method_count() const noexcept;
    [[nodiscard]] std::size_t statement_count() const noexcept;

    /// Visits every method in declaration order.
    template <typename Fn>
    void for_each_method(Fn&& fn) const
    {
        for (const auto& cls: classes)
            for (const auto& method: cls.methods)
                fn(cls, method);
    }

    friend bool operator==(const IrProgram&, const IrProgram&) = default;
};

/// Parses `.mir` text. Throws SyntaxError, or Error with DuplicateSignature /
/// BadBranchTarget.
IrProgram parse_program(std::string_view text);

/// Canonical `.mir` rendering; parse_program(render_program(p)) == p.
std::string render_program(const IrProgram& program);

/// render_program(parse_program(text)).
std::string normalize_program_text(std::string_view text);

/// Intra-method successors of a statement (fall-through and branch targets).
std::vector<int> successors(const MethodDef& method, int line);

} // namespace apktriage::ir
