// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>

namespace apktriage
{

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code)
    {
        case ErrorCode::Syntax: return "SyntaxError";
        case ErrorCode::DuplicateSignature: return "DuplicateSignature";
        case ErrorCode::BadBranchTarget: return "BadBranchTarget";
        case ErrorCode::EmptyProgram: return "EmptyProgram";
        case ErrorCode::InvalidSite: return "InvalidSite";
        case ErrorCode::UnknownMethod: return "UnknownMethod";
        case ErrorCode::NotAnInvoke: return "NotAnInvoke";
        case ErrorCode::NoResultVariable: return "NoResultVariable";
        case ErrorCode::InvalidTarget: return "InvalidTarget";
        case ErrorCode::Backend: return "BackendError";
        case ErrorCode::Timeout: return "Timeout";
        case ErrorCode::Http: return "HttpError";
        case ErrorCode::Schema: return "SchemaError";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::UnpricedModel: return "UnpricedModel";
        case ErrorCode::EmptyLedger: return "EmptyLedger";
        case ErrorCode::EmptyManifest: return "EmptyManifest";
        case ErrorCode::EmptyEvaluation: return "EmptyEvaluation";
        case ErrorCode::Config: return "ConfigError";
        case ErrorCode::Io: return "IoError";
    }
    return "Error";
}

Error::Error(ErrorCode code, const std::string& message):
    std::runtime_error(std::string(to_string(code)) + ": " + message), _code(code), _detail(message)
{
}

SyntaxError::SyntaxError(int line, const std::string& reason):
    Error(ErrorCode::Syntax, "line " + std::to_string(line) + ": " + reason), _line(line), _reason(reason)
{
}

HttpError::HttpError(int status, const std::string& message):
    Error(ErrorCode::Http, "status " + std::to_string(status) + ": " + message), _status(status)
{
}

} // namespace apktriage
