// SPDX-License-Identifier: Apache-2.0
#include <apktriage/analysis/context.hpp>
#include <apktriage/error.hpp>

#include <algorithm>

namespace apktriage::analysis
{

ContextWindow extract_context(const ir::IrProgram& program, const ir::MethodSig& method, int line, int radius)
{
    auto const* m = program.find_method(method);
    if (!m)
        throw Error(ErrorCode::InvalidSite, "no method " + method.str());
    if (!m->at(line))
        throw Error(ErrorCode::InvalidSite, method.str() + " has no line " + std::to_string(line));
    if (radius < 0)
        throw Error(ErrorCode::InvalidSite, "negative context radius");

    ContextWindow w;
    w.method = method;
    w.site_line = line;
    w.start_line = std::max(1, line - radius);
    w.end_line = std::min(m->loc(), line + radius);
    w.truncated_head = w.start_line > 1;
    w.truncated_tail = w.end_line < m->loc();
    for (int l = w.start_line; l <= w.end_line; ++l)
        w.lines.push_back(std::to_string(l) + ": " + m->at(l)->render());
    return w;
}

ContextWindow extract_context(const ir::IrProgram& program, const index::CallSite& site, int radius)
{
    auto const* m = program.find_method(site.method);
    auto const* stmt = m ? m->at(site.line) : nullptr;
    auto const* inv = stmt ? stmt->as_invoke() : nullptr;
    if (!inv || inv->callee != site.callee)
        throw Error(ErrorCode::InvalidSite, site.id() + " is not a call to " + site.callee.str());
    return extract_context(program, site.method, site.line, radius);
}

} // namespace apktriage::analysis
