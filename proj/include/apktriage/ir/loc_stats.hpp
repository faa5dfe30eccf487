// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/ir/program.hpp>

#include <span>
#include <vector>

namespace apktriage::ir
{

struct HistogramBucket
{
    int lo = 0; // inclusive
    int hi = 0; // inclusive
    std::size_t count = 0;
};

/// Distribution of per-method line counts.
class LocDistribution
{
public:
    /// Throws Error(EmptyProgram) when `locs` is empty.
    explicit LocDistribution(std::vector<int> locs);

    /// Smallest LOC value v such that at least p% of methods have LOC <= v.
    /// p is clamped to [0, 100]; percentile(0) is the minimum.
    [[nodiscard]] int percentile(double p) const;

    [[nodiscard]] int min() const noexcept { return _sorted.front(); }
    [[nodiscard]] int max() const noexcept { return _sorted.back(); }
    [[nodiscard]] double mean() const noexcept;
    [[nodiscard]] std::size_t count() const noexcept { return _sorted.size(); }
    [[nodiscard]] std::span<const int> sorted() const noexcept { return _sorted; }

    /// Fixed-width buckets starting at 1 that cover [1, max].
    [[nodiscard]] std::vector<HistogramBucket> histogram(int bucket_width) const;

private:
    std::vector<int> _sorted;
};

LocDistribution loc_stats(const IrProgram& program);
LocDistribution loc_stats(std::span<const IrProgram* const> programs);

} // namespace apktriage::ir
