// SPDX-License-Identifier: Apache-2.0
#include <apktriage/harness/stats.hpp>
#include <apktriage/ir/bundle.hpp>

#include <fmt/format.h>

namespace apktriage::harness
{

CorpusStats corpus_stats(const Dataset& dataset)
{
    CorpusStats stats;
    std::vector<int> locs;
    for (const auto& entry: dataset.entries)
    {
        try
        {
            auto const bundle = ir::load_bundle_files(entry.manifest_path, entry.ir_path, entry.app_id);
            bundle.program.for_each_method(
                [&](const ir::ClassDef&, const ir::MethodDef& m) { locs.push_back(m.loc()); });
            ++stats.apps;
        }
        catch (const std::exception& e)
        {
            stats.skipped.emplace_back(entry.app_id, e.what());
        }
    }
    if (!locs.empty())
        stats.locs.emplace(std::move(locs));
    return stats;
}

std::string render_stats(const CorpusStats& stats, int bucket_width)
{
    std::string out = fmt::format("apps {}\nskipped {}\n", stats.apps, stats.skipped.size());
    if (!stats.locs)
        return out + "methods 0\n";
    const auto& d = *stats.locs;
    out += fmt::format("methods {}\nmean {:.2f}\np50 {}\np80 {}\np90 {}\nmax {}\n", d.count(), d.mean(),
                       d.percentile(50), d.percentile(80), d.percentile(90), d.max());
    out += fmt::format("histogram width {}\n", bucket_width);
    for (const auto& b: d.histogram(bucket_width))
        out += fmt::format("  {:>4}-{:<4} {}\n", b.lo, b.hi, b.count);
    for (const auto& [id, why]: stats.skipped)
        out += fmt::format("skipped {}: {}\n", id, why);
    return out;
}

} // namespace apktriage::harness
