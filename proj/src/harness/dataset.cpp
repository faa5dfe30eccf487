// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>
#include <apktriage/harness/dataset.hpp>
#include <apktriage/ir/bundle.hpp>

#include <boost/algorithm/string.hpp>

#include <charconv>
#include <set>

namespace apktriage::harness
{

std::string_view to_string(Label label) noexcept
{
    return label == Label::Malicious ? "Malicious" : "Benign";
}

std::optional<Label> label_from_string(std::string_view text) noexcept
{
    if (boost::iequals(text, "malicious"))
        return Label::Malicious;
    if (boost::iequals(text, "benign"))
        return Label::Benign;
    return std::nullopt;
}

Dataset parse_dataset(std::string_view text, const std::filesystem::path& base_dir)
{
    Dataset dataset;
    std::set<std::string> ids;
    std::vector<std::string> lines;
    boost::split(lines, text, boost::is_any_of("\n"));
    int number = 0;
    for (auto& raw: lines)
    {
        ++number;
        auto line = raw.substr(0, raw.find('#'));
        boost::trim(line);
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        boost::split(fields, line, boost::is_any_of(","));
        for (auto& f: fields)
            boost::trim(f);
        auto fail = [&](const std::string& why) {
            throw Error(ErrorCode::Config, "dataset line " + std::to_string(number) + ": " + why);
        };
        if (fields.size() != 5)
            fail("expected app_id,manifest,ir,label,year");
        if (fields[0] == "app_id")
            continue;

        DatasetEntry entry;
        entry.app_id = fields[0];
        if (entry.app_id.empty() || fields[1].empty() || fields[2].empty())
            fail("empty field");
        entry.manifest_path = base_dir / fields[1];
        entry.ir_path = base_dir / fields[2];
        auto const label = label_from_string(fields[3]);
        if (!label)
            fail("label must be Benign or Malicious");
        entry.label = *label;
        auto const& y = fields[4];
        auto const [end, ec] = std::from_chars(y.data(), y.data() + y.size(), entry.year);
        if (ec != std::errc{} || end != y.data() + y.size())
            fail("year must be an integer");
        if (!ids.insert(entry.app_id).second)
            fail("duplicate app id '" + entry.app_id + "'");
        dataset.entries.push_back(std::move(entry));
    }
    return dataset;
}

Dataset load_dataset(const std::filesystem::path& path)
{
    return parse_dataset(ir::read_text_file(path), path.parent_path());
}

} // namespace apktriage::harness
