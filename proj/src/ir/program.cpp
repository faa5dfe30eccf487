// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>
#include <apktriage/ir/program.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace apktriage::ir
{

namespace
{

template <typename... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};

std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool starts_with_word(std::string_view s, std::string_view word) noexcept
{
    return s.starts_with(word)
           && (s.size() == word.size() || std::isspace(static_cast<unsigned char>(s[word.size()])));
}

const std::set<std::string, std::less<>> kReserved = {"const", "call", "if", "goto", "return", "nop",
                                                      "null", "true", "false", "class", "method", "extends"};

bool is_variable_name(std::string_view s)
{
    return is_identifier(s) && !kReserved.contains(s);
}

bool is_string_literal(std::string_view s) noexcept
{
    if (s.size() < 2 || s.front() != '"' || s.back() != '"')
        return false;
    for (std::size_t i = 1; i + 1 < s.size(); ++i)
    {
        if (s[i] == '\\')
        {
            if (i + 2 >= s.size())
                return false;
            ++i;
        }
        else if (s[i] == '"')
            return false;
    }
    return true;
}

bool is_number_literal(std::string_view s) noexcept
{
    if (s.starts_with('-'))
        s.remove_prefix(1);
    if (s.empty() || !std::isdigit(static_cast<unsigned char>(s.front())))
        return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '.'; });
}

bool is_literal(std::string_view s) noexcept
{
    return s == "null" || s == "true" || s == "false" || is_string_literal(s) || is_number_literal(s);
}

/// Strips a trailing `#` comment that is not inside a string literal.
std::string_view strip_comment(std::string_view line) noexcept
{
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i)
    {
        char const c = line[i];
        if (in_string)
        {
            if (c == '\\')
                ++i;
            else if (c == '"')
                in_string = false;
        }
        else if (c == '"')
            in_string = true;
        else if (c == '#')
            return line.substr(0, i);
    }
    return line;
}

class Parser
{
public:
    explicit Parser(std::string_view text): _text(text) {}

    IrProgram run()
    {
        std::size_t pos = 0;
        int lineno = 0;
        while (pos <= _text.size())
        {
            auto const nl = _text.find('\n', pos);
            auto const raw = _text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            ++lineno;
            _line = lineno;
            handle(trim(strip_comment(raw)));
            if (nl == std::string_view::npos)
                break;
            pos = nl + 1;
        }
        if (_method)
            throw SyntaxError(_line, "unterminated method " + _method->sig.str());
        if (_class)
            throw SyntaxError(_line, "unterminated class " + _class->name);
        return std::move(_program);
    }

private:
    void handle(std::string_view line)
    {
        if (line.empty())
            return;
        if (_method)
        {
            if (line == "}")
                return close_method();
            parse_statement(line);
        }
        else if (_class)
        {
            if (line == "}")
                return close_class();
            if (!starts_with_word(line, "method"))
                throw SyntaxError(_line, "expected 'method' or '}'");
            parse_method_header(trim(line.substr(6)));
        }
        else
        {
            if (!starts_with_word(line, "class"))
                throw SyntaxError(_line, "expected 'class'");
            parse_class_header(trim(line.substr(5)));
        }
    }

    /// Consumes a trailing `{` (open) or `{}` (open and close). Returns true if the
    /// block is closed on the same line.
    std::string_view take_open_brace(std::string_view rest, bool& closed)
    {
        rest = trim(rest);
        closed = false;
        if (rest.ends_with("}"))
        {
            rest = trim(rest.substr(0, rest.size() - 1));
            closed = true;
        }
        if (!rest.ends_with("{"))
            throw SyntaxError(_line, "expected '{'");
        return trim(rest.substr(0, rest.size() - 1));
    }

    void parse_class_header(std::string_view rest)
    {
        bool closed = false;
        rest = take_open_brace(rest, closed);
        ClassDef cls;
        auto const sp = rest.find_first_of(" \t");
        cls.name = std::string(rest.substr(0, sp));
        if (sp != std::string_view::npos)
        {
            auto tail = trim(rest.substr(sp));
            if (!starts_with_word(tail, "extends"))
                throw SyntaxError(_line, "expected 'extends' after class name");
            auto super = trim(tail.substr(7));
            if (super.empty() || super.find_first_of(" \t") != std::string_view::npos)
                throw SyntaxError(_line, "bad superclass name");
            cls.superclass = std::string(super);
        }
        if (cls.name.empty())
            throw SyntaxError(_line, "missing class name");
        try
        {
            (void) MethodSig::parse(cls.name + ".m()->void");
        }
        catch (const SyntaxError&)
        {
            throw SyntaxError(_line, "invalid class name '" + cls.name + "'");
        }
        if (_program.find_class(cls.name))
            throw SyntaxError(_line, "duplicate class " + cls.name);
        _class = std::move(cls);
        if (closed)
            close_class();
    }

    void parse_method_header(std::string_view rest)
    {
        bool closed = false;
        rest = take_open_brace(rest, closed);
        MethodDef method;
        std::size_t pos = 0;
        try
        {
            method.sig = MethodSig::parse_prefix(rest, pos);
        }
        catch (const SyntaxError& e)
        {
            throw SyntaxError(_line, e.reason());
        }
        if (method.sig.class_name != _class->name)
            throw SyntaxError(_line, "method " + method.sig.str() + " declared in class " + _class->name);
        auto params = trim(rest.substr(pos));
        if (!params.starts_with('(') || !params.ends_with(')'))
            throw SyntaxError(_line, "expected '(<params>)' after signature");
        params = trim(params.substr(1, params.size() - 2));
        while (!params.empty())
        {
            auto const comma = params.find(',');
            auto const name = trim(params.substr(0, comma));
            if (!is_variable_name(name))
                throw SyntaxError(_line, "bad parameter name '" + std::string(name) + "'");
            if (std::find(method.params.begin(), method.params.end(), name) != method.params.end())
                throw SyntaxError(_line, "duplicate parameter '" + std::string(name) + "'");
            method.params.emplace_back(name);
            if (comma == std::string_view::npos)
                break;
            params = params.substr(comma + 1);
        }
        if (method.params.size() != method.sig.param_types.size())
            throw SyntaxError(_line, "parameter count does not match signature " + method.sig.str());
        if (!_signatures.insert(method.sig.str()).second)
            throw Error(ErrorCode::DuplicateSignature, method.sig.str());
        _method = std::move(method);
        if (closed)
            close_method();
    }

    std::vector<Operand> parse_args(std::string_view text)
    {
        std::vector<Operand> args;
        text = trim(text);
        if (text.empty())
            return args;
        std::size_t start = 0;
        bool in_string = false;
        auto flush = [&](std::size_t end) {
            auto const token = trim(text.substr(start, end - start));
            args.push_back(parse_operand(token));
            start = end + 1;
        };
        for (std::size_t i = 0; i < text.size(); ++i)
        {
            char const c = text[i];
            if (in_string)
            {
                if (c == '\\')
                    ++i;
                else if (c == '"')
                    in_string = false;
            }
            else if (c == '"')
                in_string = true;
            else if (c == ',')
                flush(i);
        }
        flush(text.size());
        return args;
    }

    Operand parse_operand(std::string_view token)
    {
        if (is_variable_name(token))
            return Operand::var(std::string(token));
        if (is_literal(token))
            return Operand::literal(std::string(token));
        throw SyntaxError(_line, "bad operand '" + std::string(token) + "'");
    }

    int parse_line_number(std::string_view token)
    {
        token = trim(token);
        int value = 0;
        auto const [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size())
            throw SyntaxError(_line, "bad line number '" + std::string(token) + "'");
        return value;
    }

    Invoke parse_call(std::string_view rest)
    {
        Invoke inv;
        rest = trim(rest);
        std::size_t pos = 0;
        try
        {
            inv.callee = MethodSig::parse_prefix(rest, pos);
        }
        catch (const SyntaxError& e)
        {
            throw SyntaxError(_line, e.reason());
        }
        auto args = trim(rest.substr(pos));
        if (!args.starts_with('(') || !args.ends_with(')'))
            throw SyntaxError(_line, "expected '(<args>)' after callee");
        inv.args = parse_args(args.substr(1, args.size() - 2));
        return inv;
    }

    void parse_statement(std::string_view line)
    {
        Statement stmt;
        stmt.line = static_cast<int>(_method->body.size()) + 1;
        if (line == "nop")
            stmt.kind = Nop{};
        else if (line == "return")
            stmt.kind = Return{};
        else if (starts_with_word(line, "return"))
        {
            auto const var = trim(line.substr(6));
            if (!is_variable_name(var))
                throw SyntaxError(_line, "return operand must be a variable");
            stmt.kind = Return{std::string(var)};
        }
        else if (starts_with_word(line, "goto"))
            stmt.kind = Goto{parse_line_number(line.substr(4))};
        else if (starts_with_word(line, "if"))
        {
            auto rest = trim(line.substr(2));
            auto const sp = rest.find_first_of(" \t");
            auto const cond = rest.substr(0, sp);
            if (sp == std::string_view::npos || !is_variable_name(cond))
                throw SyntaxError(_line, "expected 'if <var> goto <line>'");
            rest = trim(rest.substr(sp));
            if (!starts_with_word(rest, "goto"))
                throw SyntaxError(_line, "expected 'goto' in if statement");
            stmt.kind = If{std::string(cond), parse_line_number(rest.substr(4))};
        }
        else if (starts_with_word(line, "call"))
            stmt.kind = parse_call(line.substr(4));
        else
        {
            auto const eq = line.find('=');
            if (eq == std::string_view::npos)
                throw SyntaxError(_line, "unrecognized statement");
            auto const dst = trim(line.substr(0, eq));
            auto const rhs = trim(line.substr(eq + 1));
            if (!is_variable_name(dst))
                throw SyntaxError(_line, "bad assignment target '" + std::string(dst) + "'");
            if (starts_with_word(rhs, "call"))
            {
                auto inv = parse_call(rhs.substr(4));
                inv.dst = std::string(dst);
                stmt.kind = std::move(inv);
            }
            else if (starts_with_word(rhs, "const"))
            {
                auto const lit = trim(rhs.substr(5));
                if (!is_literal(lit))
                    throw SyntaxError(_line, "bad literal '" + std::string(lit) + "'");
                stmt.kind = Assign{std::string(dst), Operand::literal(std::string(lit))};
            }
            else if (is_variable_name(rhs))
                stmt.kind = Assign{std::string(dst), Operand::var(std::string(rhs))};
            else
                throw SyntaxError(_line, "bad assignment source '" + std::string(rhs) + "'");
        }
        _method->body.push_back(std::move(stmt));
    }

    void close_method()
    {
        auto const n = static_cast<int>(_method->body.size());
        for (const auto& stmt: _method->body)
        {
            int target = 0;
            if (auto const* i = std::get_if<If>(&stmt.kind))
                target = i->target;
            else if (auto const* g = std::get_if<Goto>(&stmt.kind))
                target = g->target;
            else
                continue;
            if (target < 1 || target > n)
                throw Error(ErrorCode::BadBranchTarget, _method->sig.str() + " line " + std::to_string(stmt.line)
                                                            + " -> " + std::to_string(target));
        }
        _class->methods.push_back(std::move(*_method));
        _method.reset();
    }

    void close_class()
    {
        _program.classes.push_back(std::move(*_class));
        _class.reset();
    }

    std::string_view _text;
    int _line = 0;
    IrProgram _program;
    std::optional<ClassDef> _class;
    std::optional<MethodDef> _method;
    std::set<std::string> _signatures;
};

std::string render_operand(const Operand& op)
{
    return op.text;
}

} // namespace

std::vector<std::string> Statement::uses() const
{
    std::vector<std::string> out;
    auto add = [&](const std::string& v) {
        if (std::find(out.begin(), out.end(), v) == out.end())
            out.push_back(v);
    };
    std::visit(Overloaded{
                   [&](const Assign& a) {
                       if (a.src.is_var())
                           add(a.src.text);
                   },
                   [&](const Invoke& inv) {
                       for (const auto& arg: inv.args)
                           if (arg.is_var())
                               add(arg.text);
                   },
                   [&](const If& i) { add(i.cond); },
                   [&](const Return& r) {
                       if (r.value)
                           add(*r.value);
                   },
                   [](const auto&) {},
               },
               kind);
    return out;
}

std::optional<std::string> Statement::def() const
{
    if (auto const* a = std::get_if<Assign>(&kind))
        return a->dst;
    if (auto const* inv = std::get_if<Invoke>(&kind))
        return inv->dst;
    return std::nullopt;
}

std::string Statement::render() const
{
    return std::visit(Overloaded{
                          [](const Assign& a) {
                              return a.src.is_var() ? a.dst + " = " + a.src.text
                                                    : a.dst + " = const " + a.src.text;
                          },
                          [](const Invoke& inv) {
                              std::string out = inv.dst ? *inv.dst + " = call " : std::string("call ");
                              out += inv.callee.str();
                              out += '(';
                              for (std::size_t i = 0; i < inv.args.size(); ++i)
                              {
                                  if (i)
                                      out += ", ";
                                  out += render_operand(inv.args[i]);
                              }
                              out += ')';
                              return out;
                          },
                          [](const If& i) { return "if " + i.cond + " goto " + std::to_string(i.target); },
                          [](const Goto& g) { return "goto " + std::to_string(g.target); },
                          [](const Return& r) { return r.value ? "return " + *r.value : std::string("return"); },
                          [](const Nop&) { return std::string("nop"); },
                      },
                      kind);
}

const Statement* MethodDef::at(int line) const noexcept
{
    if (line < 1 || line > loc())
        return nullptr;
    return &body[static_cast<std::size_t>(line - 1)];
}

const MethodDef* IrProgram::find_method(const MethodSig& sig) const noexcept
{
    for (const auto& cls: classes)
    {
        if (cls.name != sig.class_name)
            continue;
        for (const auto& method: cls.methods)
            if (method.sig == sig)
                return &method;
    }
    return nullptr;
}

const ClassDef* IrProgram::find_class(std::string_view name) const noexcept
{
    for (const auto& cls: classes)
        if (cls.name == name)
            return &cls;
    return nullptr;
}

std::size_t IrProgram::method_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& cls: classes)
        n += cls.methods.size();
    return n;
}

std::size_t IrProgram::statement_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& cls: classes)
        for (const auto& m: cls.methods)
            n += m.body.size();
    return n;
}

IrProgram parse_program(std::string_view text)
{
    return Parser(text).run();
}

std::string render_program(const IrProgram& program)
{
    std::ostringstream out;
    for (const auto& cls: program.classes)
    {
        out << "class " << cls.name;
        if (cls.superclass)
            out << " extends " << *cls.superclass;
        out << " {\n";
        for (const auto& method: cls.methods)
        {
            out << "    method " << method.sig.str() << " (";
            for (std::size_t i = 0; i < method.params.size(); ++i)
                out << (i ? ", " : "") << method.params[i];
            out << ") {\n";
            for (const auto& stmt: method.body)
                out << "        " << stmt.render() << '\n';
            out << "    }\n";
        }
        out << "}\n";
    }
    return out.str();
}

std::string normalize_program_text(std::string_view text)
{
    return render_program(parse_program(text));
}

std::vector<int> successors(const MethodDef& method, int line)
{
    std::vector<int> out;
    auto const* stmt = method.at(line);
    if (!stmt)
        return out;
    auto const n = method.loc();
    auto fallthrough = [&] {
        if (line + 1 <= n)
            out.push_back(line + 1);
    };
    std::visit(Overloaded{
                   [&](const If& i) {
                       fallthrough();
                       if (std::find(out.begin(), out.end(), i.target) == out.end())
                           out.push_back(i.target);
                   },
                   [&](const Goto& g) { out.push_back(g.target); },
                   [](const Return&) {},
                   [&](const auto&) { fallthrough(); },
               },
               stmt->kind);
    return out;
}

} // namespace apktriage::ir
