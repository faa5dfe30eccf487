// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>
#include <apktriage/llm/router.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdlib>
#include <sstream>

namespace apktriage::llm
{

namespace pt = boost::property_tree;

std::string_view to_string(BackendMode mode) noexcept
{
    return mode == BackendMode::Live ? "live" : "scripted";
}

void RouterConfig::validate() const
{
    for (auto t: kTiers)
        if (model_for(t).empty())
            throw Error(ErrorCode::Config, "no model mapped for tier " + std::string(to_string(t)));
    if (retries < 0 || backoff_ms < 0 || timeout_ms <= 0)
        throw Error(ErrorCode::Config, "retries and backoff must be >= 0 and timeout > 0");
    if (mode != BackendMode::Live)
        return;
    for (auto t: kTiers)
    {
        auto const& model = model_for(t);
        auto const p = model_provider.find(model);
        if (p == model_provider.end())
            throw Error(ErrorCode::Config, "model '" + model + "' has no provider in [models]");
        if (!providers.contains(p->second))
            throw Error(ErrorCode::Config, "provider '" + p->second + "' has no [provider:" + p->second + "] section");
    }
}

BackendConfig default_backend_config()
{
    BackendConfig c;
    c.router.tier_models = {"code-small", "code-small", "reasoner-large"};
    c.pricing.set("code-small", {Usd::parse("0.07"), Usd::parse("0.28")});
    c.pricing.set("reasoner-large", {Usd::parse("2.00"), Usd::parse("8.00")});
    return c;
}

namespace
{

int to_int(const std::string& section, const std::string& key, const std::string& value)
{
    try
    {
        std::size_t used = 0;
        auto const v = std::stoi(value, &used);
        if (used == value.size())
            return v;
    }
    catch (const std::exception&)
    {
    }
    throw Error(ErrorCode::Config, "[" + section + "] " + key + " must be an integer, got '" + value + "'");
}

} // namespace

BackendConfig parse_backend_config(std::string_view ini_text)
{
    pt::ptree tree;
    try
    {
        std::istringstream in{std::string(ini_text)};
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e)
    {
        throw Error(ErrorCode::Config, "line " + std::to_string(e.line()) + ": " + e.message());
    }

    auto config = default_backend_config();
    auto& router = config.router;
    for (const auto& [section, body]: tree)
    {
        // Keys are read by iteration: model ids may contain '.', which the
        // ptree path syntax would treat as a separator.
        if (section == "router")
        {
            for (const auto& [key, node]: body)
            {
                auto const value = node.data();
                if (key == "mode")
                {
                    if (value == "scripted")
                        router.mode = BackendMode::Scripted;
                    else if (value == "live")
                        router.mode = BackendMode::Live;
                    else
                        throw Error(ErrorCode::Config, "[router] mode must be scripted or live");
                }
                else if (key == "retries")
                    router.retries = to_int(section, key, value);
                else if (key == "backoff_ms")
                    router.backoff_ms = to_int(section, key, value);
                else if (key == "timeout_ms")
                    router.timeout_ms = to_int(section, key, value);
                else
                    throw Error(ErrorCode::Config, "unknown key [router] " + key);
            }
        }
        else if (section == "tiers")
        {
            for (const auto& [key, node]: body)
            {
                auto const tier = tier_from_string(key);
                if (!tier)
                    throw Error(ErrorCode::Config, "unknown tier '" + key + "'");
                router.tier_models[index_of(*tier)] = node.data();
            }
        }
        else if (section == "models")
        {
            for (const auto& [key, node]: body)
                router.model_provider[key] = node.data();
        }
        else if (section == "pricing")
        {
            for (const auto& [key, node]: body)
            {
                std::istringstream fields(node.data());
                std::string in, out, extra;
                if (!(fields >> in >> out) || (fields >> extra))
                    throw Error(ErrorCode::Config, "[pricing] " + key + " needs '<input> <output>' USD per million");
                config.pricing.set(key, {Usd::parse(in), Usd::parse(out)});
            }
        }
        else if (section.starts_with("provider:"))
        {
            ProviderEndpoint endpoint;
            for (const auto& [key, node]: body)
            {
                if (key == "base_url")
                    endpoint.base_url = node.data();
                else if (key == "base_url_env")
                    endpoint.base_url_env = node.data();
                else if (key == "api_key_env")
                    endpoint.api_key_env = node.data();
                else
                    throw Error(ErrorCode::Config, "unknown key [" + section + "] " + key);
            }
            router.providers[section.substr(9)] = endpoint;
        }
    }
    router.validate();
    return config;
}

ModelRouter::ModelRouter(RouterConfig config, std::shared_ptr<ChatProvider> provider):
    _config(std::move(config)), _default(std::move(provider))
{
    _config.validate();
    if (!_default)
        throw Error(ErrorCode::Config, "router needs a provider");
}

ModelRouter::ModelRouter(RouterConfig config, std::map<std::string, std::shared_ptr<ChatProvider>> by_model):
    _config(std::move(config)), _by_model(std::move(by_model))
{
}

ModelRouter ModelRouter::live(RouterConfig config)
{
    config.mode = BackendMode::Live;
    config.validate();
    auto const env = [](const std::string& name) -> std::string
    {
        if (name.empty())
            return {};
        auto const* v = std::getenv(name.c_str());
        return v ? v : "";
    };
    std::map<std::string, std::shared_ptr<ChatProvider>> by_provider;
    std::map<std::string, std::shared_ptr<ChatProvider>> by_model;
    for (auto t: kTiers)
    {
        auto const& model = config.model_for(t);
        auto const& provider = config.model_provider.at(model);
        auto& slot = by_provider[provider];
        if (!slot)
        {
            auto const& endpoint = config.providers.at(provider);
            HttpOptions options;
            options.base_url = env(endpoint.base_url_env);
            if (options.base_url.empty())
                options.base_url = endpoint.base_url;
            if (options.base_url.empty())
                throw Error(ErrorCode::Config, "provider '" + provider + "' has no base URL");
            options.api_key = env(endpoint.api_key_env);
            options.retries = config.retries;
            options.backoff = std::chrono::milliseconds(config.backoff_ms);
            options.timeout = std::chrono::milliseconds(config.timeout_ms);
            slot = std::make_shared<HttpChatProvider>(std::move(options));
        }
        by_model[model] = slot;
    }
    return ModelRouter(std::move(config), std::move(by_model));
}

Exchange ModelRouter::complete(Tier tier, std::vector<Message> messages) const
{
    if (messages.empty())
        throw Error(ErrorCode::Backend, "empty conversation for tier " + std::string(to_string(tier)));
    Exchange exchange;
    exchange.tier = tier;
    exchange.model_id = _config.model_for(tier);
    auto provider = _default;
    if (auto const it = _by_model.find(exchange.model_id); it != _by_model.end())
        provider = it->second;
    auto const started = std::chrono::steady_clock::now();
    auto reply = provider->chat(exchange.model_id, tier, messages);
    exchange.latency = std::chrono::steady_clock::now() - started;
    exchange.messages = std::move(messages);
    exchange.response = std::move(reply.text);
    exchange.usage = reply.usage;
    return exchange;
}

} // namespace apktriage::llm
