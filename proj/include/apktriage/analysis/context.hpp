// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/index/api_index.hpp>
#include <apktriage/ir/program.hpp>

#include <string>
#include <vector>

namespace apktriage::analysis
{

inline constexpr int kDefaultContextRadius = 20;

/// A slice of one method's body centred on a call site.
struct ContextWindow
{
    ir::MethodSig method;
    int site_line = 0;
    int start_line = 0;
    int end_line = 0;
    /// `<line>: <statement>` for every line in [start_line, end_line].
    std::vector<std::string> lines;
    /// True when the method has lines above start_line that the window hides.
    bool truncated_head = false;
    /// True when the method has lines below end_line that the window hides.
    bool truncated_tail = false;

    [[nodiscard]] int width() const noexcept { return end_line - start_line + 1; }
};

/// Lines [max(1, line - radius), min(loc, line + radius)] of `method`.
/// Throws Error(InvalidSite) when the method or line does not exist or radius < 0.
ContextWindow extract_context(const ir::IrProgram& program, const ir::MethodSig& method, int line,
                              int radius = kDefaultContextRadius);

/// As above, and additionally requires the site to be an Invoke of site.callee.
ContextWindow extract_context(const ir::IrProgram& program, const index::CallSite& site,
                              int radius = kDefaultContextRadius);

} // namespace apktriage::analysis
