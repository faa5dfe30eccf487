// SPDX-License-Identifier: Apache-2.0
#include <apktriage/agents/scripted.hpp>
#include <apktriage/error.hpp>
#include <apktriage/harness/config.hpp>
#include <apktriage/ir/bundle.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <sstream>

namespace apktriage::harness
{

namespace pt = boost::property_tree;

namespace
{

int to_int(const std::string& section, const std::string& key, const std::string& value, int min)
{
    int v = 0;
    auto const [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || end != value.data() + value.size() || v < min)
    {
        throw Error(ErrorCode::Config,
                    "[" + section + "] " + key + " must be an integer >= " + std::to_string(min) + ", got '" + value + "'");
    }
    return v;
}

} // namespace

AppConfig default_app_config(const std::filesystem::path& data_dir)
{
    AppConfig config;
    config.backend = llm::default_backend_config();
    config.api_catalog = data_dir / "system_apis.cat";
    config.entry_catalog = data_dir / "entry_points.epc";
    return config;
}

AppConfig parse_app_config(std::string_view text, const std::filesystem::path& base_dir,
                           const std::filesystem::path& data_dir)
{
    auto config = default_app_config(data_dir);
    config.backend = llm::parse_backend_config(text);

    pt::ptree tree;
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree); // already validated by parse_backend_config

    for (const auto& [section, body]: tree)
    {
        if (section == "catalogs")
        {
            for (const auto& [key, node]: body)
            {
                auto const path = base_dir / node.data();
                if (key == "apis")
                    config.api_catalog = path;
                else if (key == "entries")
                    config.entry_catalog = path;
                else
                    throw Error(ErrorCode::Config, "unknown key [catalogs] " + key);
            }
        }
        else if (section == "pipeline")
        {
            for (const auto& [key, node]: body)
            {
                if (key == "max_iterations")
                    config.budgets.max_iterations = to_int(section, key, node.data(), 1);
                else if (key == "candidate_cap")
                    config.budgets.candidate_cap = static_cast<std::size_t>(to_int(section, key, node.data(), 0));
                else if (key == "threads")
                    config.threads = static_cast<unsigned>(to_int(section, key, node.data(), 0));
                else
                    throw Error(ErrorCode::Config, "unknown key [pipeline] " + key);
            }
        }
        else if (section != "router" && section != "tiers" && section != "models" && section != "pricing" &&
                 !section.starts_with("provider:"))
        {
            throw Error(ErrorCode::Config, "unknown section [" + section + "]");
        }
    }
    return config;
}

AppConfig load_app_config(const std::filesystem::path& path, const std::filesystem::path& data_dir)
{
    std::string text;
    try
    {
        text = ir::read_text_file(path);
    }
    catch (const Error& e)
    {
        throw Error(ErrorCode::Config, "cannot read config: " + e.detail());
    }
    return parse_app_config(text, path.parent_path(), data_dir);
}

agents::Catalogs load_catalogs(const AppConfig& config)
{
    return {index::ApiCatalog::load(config.api_catalog), analysis::EntryCatalog::load(config.entry_catalog)};
}

llm::ModelRouter make_router(const llm::BackendConfig& backend)
{
    for (auto tier: llm::kTiers)
    {
        auto const& model = backend.router.model_for(tier);
        if (backend.pricing.find(model) == nullptr)
            throw Error(ErrorCode::Config, "model '" + model + "' has no price");
    }
    if (backend.router.mode == llm::BackendMode::Live)
        return llm::ModelRouter::live(backend.router);
    return llm::ModelRouter(backend.router, agents::make_scripted_provider());
}

} // namespace apktriage::harness
