// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/agents/pipeline.hpp>
#include <apktriage/harness/dataset.hpp>
#include <apktriage/harness/metrics.hpp>
#include <apktriage/llm/cost.hpp>
#include <apktriage/llm/router.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace apktriage::harness
{

struct ToolErrorRecord
{
    std::string candidate; // call-site id
    std::string tool;
    std::string code;
    std::string message;
    friend bool operator==(const ToolErrorRecord&, const ToolErrorRecord&) = default;
};

struct EntryResult
{
    DatasetEntry entry;
    /// Absent when the entry was skipped.
    std::optional<agents::PipelineResult> pipeline;
    std::string skip_reason;
    std::vector<ToolErrorRecord> tool_errors;

    [[nodiscard]] bool evaluated() const noexcept { return pipeline.has_value(); }
    [[nodiscard]] bool predicted_malicious() const noexcept;
};

struct BatchResult
{
    /// Ordered by app id.
    std::vector<EntryResult> entries;
    ConfusionCounts counts;
    /// Absent when no entry was evaluated.
    std::optional<MetricSet> metrics;
    [[nodiscard]] std::size_t evaluated_count() const noexcept;
    [[nodiscard]] std::size_t skipped_count() const noexcept;
};

/// Runs the pipeline for every entry on `threads` workers (0 = hardware
/// concurrency). Entries that fail to load, fail validation or fail inside
/// the pipeline are skipped with a reason; they never abort the batch.
BatchResult run_batch(const Dataset& dataset, const agents::Catalogs& catalogs, const llm::ModelRouter& router,
                      const agents::Budgets& budgets = {}, unsigned threads = 0);

/// Metrics per entry year over evaluated entries, ascending by year.
std::map<int, MetricSet> partition_by_year(const BatchResult& batch);

/// Confusion counts over evaluated entries.
ConfusionCounts confusion_of(const std::vector<EntryResult>& entries);

} // namespace apktriage::harness
