// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apktriage::harness
{

enum class Label
{
    Benign,
    Malicious
};

std::string_view to_string(Label label) noexcept;
std::optional<Label> label_from_string(std::string_view text) noexcept;

struct DatasetEntry
{
    std::string app_id;
    std::filesystem::path manifest_path;
    std::filesystem::path ir_path;
    Label label = Label::Benign;
    int year = 0;
    friend bool operator==(const DatasetEntry&, const DatasetEntry&) = default;
};

struct Dataset
{
    std::vector<DatasetEntry> entries;
};

/// Index file: one `app_id,manifest,ir,label,year` row per app; `#` starts a
/// comment; a header row beginning with `app_id` is skipped. Relative paths
/// resolve against base_dir. Throws Error(Config) on a malformed row or a
/// duplicate app id.
Dataset parse_dataset(std::string_view text, const std::filesystem::path& base_dir);
/// Reads an index file; paths resolve against its directory. Throws Error(Io)
/// or Error(Config).
Dataset load_dataset(const std::filesystem::path& path);

} // namespace apktriage::harness
