// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/llm/cost.hpp>
#include <apktriage/llm/exchange.hpp>
#include <apktriage/llm/provider.hpp>

#include <array>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace apktriage::llm
{

enum class BackendMode
{
    Scripted,
    Live
};

std::string_view to_string(BackendMode mode) noexcept;

struct ProviderEndpoint
{
    std::string base_url;
    /// Environment variable that overrides base_url when set.
    std::string base_url_env;
    /// Environment variable holding the API key.
    std::string api_key_env;
};

struct RouterConfig
{
    BackendMode mode = BackendMode::Scripted;
    std::array<std::string, 3> tier_models; // indexed by Tier
    std::map<std::string, std::string> model_provider;
    std::map<std::string, ProviderEndpoint> providers;
    int retries = 2;
    int backoff_ms = 250;
    int timeout_ms = 30000;

    [[nodiscard]] const std::string& model_for(Tier tier) const { return tier_models.at(index_of(tier)); }
    /// Throws Error(Config) unless every tier is mapped and, in live mode,
    /// every mapped model has a provider endpoint.
    void validate() const;
};

struct BackendConfig
{
    RouterConfig router;
    PricingTable pricing;
};

/// Placeholder models and rates; scripted mode.
BackendConfig default_backend_config();

/// Reads the `[router]`, `[tiers]`, `[models]`, `[pricing]` and
/// `[provider:<name>]` sections of an INI document on top of the defaults.
/// Throws Error(Config).
BackendConfig parse_backend_config(std::string_view ini_text);

/// Sends each tier's conversations to the model configured for it.
class ModelRouter
{
public:
    /// All models are served by one provider (typically a ScriptedProvider).
    ModelRouter(RouterConfig config, std::shared_ptr<ChatProvider> provider);

    /// One HttpChatProvider per configured endpoint; keys and base URL
    /// overrides are read from the environment.
    static ModelRouter live(RouterConfig config);

    /// Throws Error(Backend) for an empty conversation, plus whatever the
    /// provider raises.
    Exchange complete(Tier tier, std::vector<Message> messages) const;

    [[nodiscard]] const RouterConfig& config() const noexcept { return _config; }

private:
    ModelRouter(RouterConfig config, std::map<std::string, std::shared_ptr<ChatProvider>> by_model);

    RouterConfig _config;
    std::shared_ptr<ChatProvider> _default;
    std::map<std::string, std::shared_ptr<ChatProvider>> _by_model;
};

} // namespace apktriage::llm
