// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/ir/program.hpp>

#include <string>
#include <vector>

namespace apktriage::analysis
{

struct Slice
{
    ir::MethodSig method;
    int target_line = 0;
    std::string target_var;
    /// Ascending; always contains target_line.
    std::vector<int> kept_lines;
    int removed_count = 0;
};

/// Intra-method backward slice over reaching-definition data dependences and
/// If-range control dependences: an `if` at line i targeting t is kept when a
/// kept statement lies strictly between i and t.
///
/// Throws Error(InvalidTarget) unless target_var is defined or used at target_line.
Slice backward_slice(const ir::IrProgram& program, const ir::MethodSig& method, int target_line,
                     const std::string& target_var);

/// `<line>: <statement>` for each kept line.
std::vector<std::string> render_slice(const ir::IrProgram& program, const Slice& slice);

} // namespace apktriage::analysis
