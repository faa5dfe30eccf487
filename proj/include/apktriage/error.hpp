// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apktriage
{

enum class ErrorCode
{
    Syntax,
    DuplicateSignature,
    BadBranchTarget,
    EmptyProgram,
    InvalidSite,
    UnknownMethod,
    NotAnInvoke,
    NoResultVariable,
    InvalidTarget,
    Backend,
    Timeout,
    Http,
    Schema,
    SchemaViolation,
    UnpricedModel,
    EmptyLedger,
    EmptyManifest,
    EmptyEvaluation,
    Config,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base of every error raised by the library. The code is stable and is what
/// callers (and the Python bindings) dispatch on.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return _code; }
    /// The message without the code prefix.
    [[nodiscard]] const std::string& detail() const noexcept { return _detail; }

private:
    ErrorCode _code;
    std::string _detail;
};

class SyntaxError : public Error
{
public:
    SyntaxError(int line, const std::string& reason);

    [[nodiscard]] int line() const noexcept { return _line; }
    [[nodiscard]] const std::string& reason() const noexcept { return _reason; }

private:
    int _line;
    std::string _reason;
};

class HttpError : public Error
{
public:
    /// status 0 means the request never produced a response (connect/read failure).
    HttpError(int status, const std::string& message);

    [[nodiscard]] int status() const noexcept { return _status; }

private:
    int _status;
};

} // namespace apktriage
