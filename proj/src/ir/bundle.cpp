// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>
#include <apktriage/ir/bundle.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace apktriage::ir
{

namespace
{

using Severity = Diagnostic::Severity;

Diagnostic make(DiagnosticKind kind, Severity severity, std::string message, const MethodSig* method = nullptr,
                int line = 0)
{
    Diagnostic d{kind, severity, std::move(message), std::nullopt, line};
    if (method)
        d.method = *method;
    return d;
}

void check_method(const ClassDef& cls, const MethodDef& method, const IrProgram& program,
                  std::vector<Diagnostic>& out)
{
    auto const* sig = &method.sig;
    if (method.sig.class_name != cls.name)
        out.push_back(make(DiagnosticKind::ClassMismatch, Severity::Error,
                           sig->str() + " declared in class " + cls.name, sig));
    if (method.params.size() != method.sig.param_types.size())
        out.push_back(make(DiagnosticKind::ParamCountMismatch, Severity::Error,
                           sig->str() + " has " + std::to_string(method.params.size()) + " parameter names", sig));

    auto const n = method.loc();
    std::set<std::string> defined(method.params.begin(), method.params.end());
    for (std::size_t i = 0; i < method.body.size(); ++i)
    {
        const auto& stmt = method.body[i];
        auto const expected = static_cast<int>(i) + 1;
        if (stmt.line != expected)
            out.push_back(make(DiagnosticKind::NonContiguousLines, Severity::Error,
                               "statement " + std::to_string(expected) + " numbered " + std::to_string(stmt.line),
                               sig, expected));

        int target = 0;
        if (auto const* b = std::get_if<If>(&stmt.kind))
            target = b->target;
        else if (auto const* g = std::get_if<Goto>(&stmt.kind))
            target = g->target;
        if ((std::holds_alternative<If>(stmt.kind) || std::holds_alternative<Goto>(stmt.kind))
            && (target < 1 || target > n))
            out.push_back(make(DiagnosticKind::BadBranchTarget, Severity::Error,
                               "branch to missing line " + std::to_string(target), sig, expected));

        for (const auto& used: stmt.uses())
            if (!defined.contains(used))
                out.push_back(make(DiagnosticKind::UseBeforeDef, Severity::Error,
                                   "variable '" + used + "' used before assignment", sig, expected));

        if (auto const* inv = stmt.as_invoke())
        {
            if (auto const* callee = program.find_method(inv->callee);
                callee && callee->params.size() != inv->args.size())
                out.push_back(make(DiagnosticKind::ArgCountMismatch, Severity::Error,
                                   "call to " + inv->callee.str() + " passes " + std::to_string(inv->args.size())
                                       + " argument(s)",
                                   sig, expected));
        }
        if (auto d = stmt.def())
            defined.insert(*d);
    }
}

} // namespace

std::string_view to_string(DiagnosticKind kind) noexcept
{
    switch (kind)
    {
        case DiagnosticKind::UnresolvedComponent: return "UnresolvedComponent";
        case DiagnosticKind::DuplicatePermission: return "DuplicatePermission";
        case DiagnosticKind::DuplicateSignature: return "DuplicateSignature";
        case DiagnosticKind::ClassMismatch: return "ClassMismatch";
        case DiagnosticKind::ParamCountMismatch: return "ParamCountMismatch";
        case DiagnosticKind::NonContiguousLines: return "NonContiguousLines";
        case DiagnosticKind::BadBranchTarget: return "BadBranchTarget";
        case DiagnosticKind::UseBeforeDef: return "UseBeforeDef";
        case DiagnosticKind::ArgCountMismatch: return "ArgCountMismatch";
    }
    return "Unknown";
}

bool AppBundle::has_errors() const noexcept
{
    return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) { return d.is_error(); });
}

std::vector<Diagnostic> validate_program(const IrProgram& program)
{
    std::vector<Diagnostic> out;
    std::set<std::string> seen;
    for (const auto& cls: program.classes)
        for (const auto& method: cls.methods)
        {
            if (!seen.insert(method.sig.str()).second)
                out.push_back(make(DiagnosticKind::DuplicateSignature, Severity::Error,
                                   "duplicate signature " + method.sig.str(), &method.sig));
            check_method(cls, method, program, out);
        }
    return out;
}

std::vector<Diagnostic> validate(const AppBundle& bundle)
{
    std::vector<Diagnostic> out;
    std::set<std::string> perms;
    for (const auto& p: bundle.manifest.permissions)
        if (!perms.insert(p).second)
            out.push_back(make(DiagnosticKind::DuplicatePermission, Severity::Warning, "permission " + p
                                                                                           + " listed twice"));
    for (const auto& c: bundle.manifest.components)
        if (!bundle.program.find_class(c.name))
            out.push_back(make(DiagnosticKind::UnresolvedComponent, Severity::Warning,
                               std::string(to_string(c.kind)) + " " + c.name + " has no class in the program"));
    auto program_diags = validate_program(bundle.program);
    out.insert(out.end(), std::make_move_iterator(program_diags.begin()),
               std::make_move_iterator(program_diags.end()));
    return out;
}

AppBundle parse_bundle(std::string_view manifest_text, std::string_view ir_text, std::string app_id)
{
    AppBundle bundle;
    bundle.manifest = parse_manifest(manifest_text);
    bundle.program = parse_program(ir_text);
    bundle.app_id = app_id.empty() ? bundle.manifest.package : std::move(app_id);
    bundle.diagnostics = validate(bundle);
    return bundle;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AppBundle load_bundle_files(const std::filesystem::path& manifest_path, const std::filesystem::path& ir_path,
                            std::string app_id)
{
    return parse_bundle(read_text_file(manifest_path), read_text_file(ir_path), std::move(app_id));
}

AppBundle load_bundle_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        throw Error(ErrorCode::Io, dir.string() + " is not a directory");
    std::vector<std::filesystem::path> manifests, programs;
    for (const auto& entry: std::filesystem::directory_iterator(dir))
    {
        if (entry.path().extension() == ".mmf")
            manifests.push_back(entry.path());
        else if (entry.path().extension() == ".mir")
            programs.push_back(entry.path());
    }
    if (manifests.size() != 1 || programs.size() != 1)
        throw Error(ErrorCode::Io, dir.string() + " must contain exactly one .mmf and one .mir file");
    auto name = std::filesystem::absolute(dir).lexically_normal().filename().string();
    if (name.empty())
        name = std::filesystem::absolute(dir).lexically_normal().parent_path().filename().string();
    return load_bundle_files(manifests.front(), programs.front(), name);
}

} // namespace apktriage::ir
