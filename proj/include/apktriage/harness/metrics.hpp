// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>

namespace apktriage::harness
{

struct ConfusionCounts
{
    std::int64_t tp = 0;
    std::int64_t tn = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    [[nodiscard]] std::int64_t total() const noexcept { return tp + tn + fp + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Undefined ratios (zero denominator) are nullopt, never NaN or 0.
struct MetricSet
{
    double accuracy = 0.0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    friend bool operator==(const MetricSet&, const MetricSet&) = default;
};

/// Throws Error(EmptyEvaluation) when total() == 0, Error(Config) for a
/// negative count.
MetricSet compute_metrics(const ConfusionCounts& counts);

/// Records one (truth, prediction) pair; true means Malicious.
void tally(ConfusionCounts& counts, bool truth_malicious, bool predicted_malicious) noexcept;

} // namespace apktriage::harness
