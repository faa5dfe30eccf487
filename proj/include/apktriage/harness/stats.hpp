// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/harness/dataset.hpp>
#include <apktriage/ir/loc_stats.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace apktriage::harness
{

struct CorpusStats
{
    std::size_t apps = 0; // entries that loaded
    /// Absent when no loaded entry has a method.
    std::optional<ir::LocDistribution> locs;
    /// (app id, reason) for entries that failed to load.
    std::vector<std::pair<std::string, std::string>> skipped;
};

/// Per-method LOC over every entry that parses.
CorpusStats corpus_stats(const Dataset& dataset);

/// `key value` lines (apps, skipped, methods, mean, p50, p80, p90, max)
/// followed by the histogram.
std::string render_stats(const CorpusStats& stats, int bucket_width = 10);

} // namespace apktriage::harness
