// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/agents/pipeline.hpp>
#include <apktriage/llm/router.hpp>

#include <filesystem>
#include <memory>
#include <string_view>

namespace apktriage::harness
{

struct AppConfig
{
    llm::BackendConfig backend;
    std::filesystem::path api_catalog;
    std::filesystem::path entry_catalog;
    agents::Budgets budgets;
    /// 0 means one worker per hardware thread.
    unsigned threads = 0;
};

/// Defaults: scripted backend and the catalogs under data_dir.
AppConfig default_app_config(const std::filesystem::path& data_dir);

/// INI document with `[catalogs]` (apis, entries) and `[pipeline]`
/// (max_iterations, candidate_cap, threads) on top of the backend sections.
/// Relative catalog paths resolve against base_dir. Throws Error(Config).
AppConfig parse_app_config(std::string_view text, const std::filesystem::path& base_dir,
                           const std::filesystem::path& data_dir);
AppConfig load_app_config(const std::filesystem::path& path, const std::filesystem::path& data_dir);

/// Throws Error(Io) or Error(Config).
agents::Catalogs load_catalogs(const AppConfig& config);

/// Scripted policies or live HTTP providers, per the configured mode.
/// Throws Error(Config) when a tier's model has no price.
llm::ModelRouter make_router(const llm::BackendConfig& backend);

} // namespace apktriage::harness
