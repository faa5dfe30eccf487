// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>
#include <apktriage/harness/metrics.hpp>

namespace apktriage::harness
{

MetricSet compute_metrics(const ConfusionCounts& c)
{
    if (c.tp < 0 || c.tn < 0 || c.fp < 0 || c.fn < 0)
        throw Error(ErrorCode::Config, "confusion counts must be non-negative");
    if (c.total() == 0)
        throw Error(ErrorCode::EmptyEvaluation, "no evaluated entries");

    auto ratio = [](std::int64_t num, std::int64_t den) -> std::optional<double> {
        if (den == 0)
            return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };

    MetricSet m;
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.recall = ratio(c.tp, c.tp + c.fn);
    if (m.precision && m.recall)
    {
        auto const sum = *m.precision + *m.recall;
        m.f1 = sum == 0.0 ? std::optional<double>{} : 2.0 * *m.precision * *m.recall / sum;
    }
    return m;
}

void tally(ConfusionCounts& counts, bool truth_malicious, bool predicted_malicious) noexcept
{
    if (truth_malicious)
        ++(predicted_malicious ? counts.tp : counts.fn);
    else
        ++(predicted_malicious ? counts.fp : counts.tn);
}

} // namespace apktriage::harness
