// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/ir/manifest.hpp>
#include <apktriage/ir/program.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apktriage::ir
{

enum class DiagnosticKind
{
    UnresolvedComponent,
    DuplicatePermission,
    DuplicateSignature,
    ClassMismatch,
    ParamCountMismatch,
    NonContiguousLines,
    BadBranchTarget,
    UseBeforeDef,
    ArgCountMismatch,
};

std::string_view to_string(DiagnosticKind kind) noexcept;

struct Diagnostic
{
    enum class Severity
    {
        Warning,
        Error
    };

    DiagnosticKind kind;
    Severity severity = Severity::Error;
    std::string message;
    std::optional<MethodSig> method;
    int line = 0;

    [[nodiscard]] bool is_error() const noexcept { return severity == Severity::Error; }
};

struct AppBundle
{
    std::string app_id;
    Manifest manifest;
    IrProgram program;
    /// validate() output captured at parse time.
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] bool has_errors() const noexcept;
};

/// Parses both documents, then records validate() output on the bundle. The
/// app id defaults to the manifest package.
AppBundle parse_bundle(std::string_view manifest_text, std::string_view ir_text, std::string app_id = {});

/// Loads `<dir>/*.mmf` and `<dir>/*.mir` (exactly one of each); app id is the
/// directory name.
AppBundle load_bundle_dir(const std::filesystem::path& dir);

AppBundle load_bundle_files(const std::filesystem::path& manifest_path, const std::filesystem::path& ir_path,
                            std::string app_id);

/// All invariant violations of the bundle; empty iff well-formed.
std::vector<Diagnostic> validate(const AppBundle& bundle);

/// Program-only subset of validate().
std::vector<Diagnostic> validate_program(const IrProgram& program);

std::string read_text_file(const std::filesystem::path& path);

} // namespace apktriage::ir
