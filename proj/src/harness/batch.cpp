// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>
#include <apktriage/harness/batch.hpp>
#include <apktriage/ir/bundle.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <thread>

namespace apktriage::harness
{

namespace
{

EntryResult evaluate(const DatasetEntry& entry, const agents::Catalogs& catalogs, const llm::ModelRouter& router,
                     const agents::Budgets& budgets)
{
    EntryResult result;
    result.entry = entry;
    ir::AppBundle bundle;
    try
    {
        bundle = ir::load_bundle_files(entry.manifest_path, entry.ir_path, entry.app_id);
    }
    catch (const std::exception& e)
    {
        result.skip_reason = fmt::format("load failed: {}", e.what());
        return result;
    }

    auto const bad = std::find_if(bundle.diagnostics.begin(), bundle.diagnostics.end(),
                                  [](const ir::Diagnostic& d) { return d.is_error(); });
    if (bad != bundle.diagnostics.end())
    {
        result.skip_reason = fmt::format("invalid bundle: {}: {}", ir::to_string(bad->kind), bad->message);
        return result;
    }

    try
    {
        result.pipeline = agents::run_pipeline(bundle, catalogs, router, budgets);
    }
    catch (const agents::PipelineError& e)
    {
        result.skip_reason = fmt::format("pipeline failed in {} tier: {}", llm::to_string(e.tier()), e.what());
        return result;
    }
    catch (const std::exception& e)
    {
        result.skip_reason = fmt::format("pipeline failed: {}", e.what());
        return result;
    }

    for (const auto& ev: result.pipeline->evidence)
    {
        for (const auto& failure: ev.tool_errors)
        {
            result.tool_errors.push_back(
                {ev.candidate.site.id(), failure.tool, std::string(to_string(failure.code)), failure.message});
        }
    }
    return result;
}

} // namespace

bool EntryResult::predicted_malicious() const noexcept
{
    return pipeline && pipeline->verdict.verdict == agents::Verdict::Malicious;
}

std::size_t BatchResult::evaluated_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const EntryResult& r) { return r.evaluated(); }));
}

std::size_t BatchResult::skipped_count() const noexcept
{
    return entries.size() - evaluated_count();
}

ConfusionCounts confusion_of(const std::vector<EntryResult>& entries)
{
    ConfusionCounts counts;
    for (const auto& r: entries)
    {
        if (r.evaluated())
            tally(counts, r.entry.label == Label::Malicious, r.predicted_malicious());
    }
    return counts;
}

BatchResult run_batch(const Dataset& dataset, const agents::Catalogs& catalogs, const llm::ModelRouter& router,
                      const agents::Budgets& budgets, unsigned threads)
{
    auto const n = dataset.entries.size();
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));

    std::vector<EntryResult> results(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next++; i < n; i = next++)
            results[i] = evaluate(dataset.entries[i], catalogs, router, budgets);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t: pool)
        t.join();

    std::sort(results.begin(), results.end(),
              [](const EntryResult& a, const EntryResult& b) { return a.entry.app_id < b.entry.app_id; });

    BatchResult batch;
    batch.entries = std::move(results);
    batch.counts = confusion_of(batch.entries);
    if (batch.counts.total() > 0)
        batch.metrics = compute_metrics(batch.counts);
    return batch;
}

std::map<int, MetricSet> partition_by_year(const BatchResult& batch)
{
    std::map<int, ConfusionCounts> groups;
    for (const auto& r: batch.entries)
    {
        if (r.evaluated())
            tally(groups[r.entry.year], r.entry.label == Label::Malicious, r.predicted_malicious());
    }
    std::map<int, MetricSet> out;
    for (const auto& [year, counts]: groups)
        out.emplace(year, compute_metrics(counts));
    return out;
}

} // namespace apktriage::harness
