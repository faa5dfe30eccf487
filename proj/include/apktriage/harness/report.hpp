// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/harness/batch.hpp>
#include <apktriage/llm/cost.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace apktriage::harness
{

/// Writes into out_dir (created if missing):
///   results.jsonl        one line per entry
///   reports/<app>.json   verdict report per evaluated entry
///   traces/<app>.json    screening report and evidence vectors
///   summary.json         metrics, per-year metrics, tier shares, per-app
///                        token and cost statistics, skipped entries
///   digest.txt           the summary as plain text
/// Output depends only on the batch, never on timing. Throws Error(Io)
/// before writing anything when out_dir is unusable; summary.json is
/// replaced atomically.
void emit_reports(const BatchResult& batch, const llm::PricingTable& pricing, const std::filesystem::path& out_dir);

/// One results.jsonl row as read back by `metrics`.
struct ResultRow
{
    std::string app_id;
    Label label = Label::Benign;
    int year = 0;
    bool evaluated = false;
    bool predicted_malicious = false;
};

/// Throws Error(Io) or Error(Schema).
std::vector<ResultRow> read_results(const std::filesystem::path& jsonl_path);

} // namespace apktriage::harness
