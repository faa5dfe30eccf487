// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>
#include <apktriage/ir/loc_stats.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace apktriage::ir
{

LocDistribution::LocDistribution(std::vector<int> locs): _sorted(std::move(locs))
{
    if (_sorted.empty())
        throw Error(ErrorCode::EmptyProgram, "no methods to measure");
    std::sort(_sorted.begin(), _sorted.end());
}

int LocDistribution::percentile(double p) const
{
    p = std::clamp(p, 0.0, 100.0);
    auto const n = _sorted.size();
    // Smallest k with 100*k >= p*n; the epsilon absorbs representation error in p.
    auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) / 100.0 - 1e-9));
    k = std::clamp<std::size_t>(k, 1, n);
    return _sorted[k - 1];
}

double LocDistribution::mean() const noexcept
{
    auto const sum = std::accumulate(_sorted.begin(), _sorted.end(), 0.0);
    return sum / static_cast<double>(_sorted.size());
}

std::vector<HistogramBucket> LocDistribution::histogram(int bucket_width) const
{
    bucket_width = std::max(bucket_width, 1);
    std::vector<HistogramBucket> buckets;
    for (int lo = 1; lo <= std::max(max(), 1); lo += bucket_width)
        buckets.push_back({lo, lo + bucket_width - 1, 0});
    for (int v: _sorted)
    {
        auto const idx = v <= 0 ? 0 : static_cast<std::size_t>((v - 1) / bucket_width);
        ++buckets[idx].count;
    }
    return buckets;
}

LocDistribution loc_stats(const IrProgram& program)
{
    std::vector<int> locs;
    program.for_each_method([&](const ClassDef&, const MethodDef& m) { locs.push_back(m.loc()); });
    return LocDistribution(std::move(locs));
}

LocDistribution loc_stats(std::span<const IrProgram* const> programs)
{
    std::vector<int> locs;
    for (auto const* program: programs)
        program->for_each_method([&](const ClassDef&, const MethodDef& m) { locs.push_back(m.loc()); });
    return LocDistribution(std::move(locs));
}

} // namespace apktriage::ir
