// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apktriage::llm
{

/// Pipeline stage that issued a model exchange.
enum class Tier
{
    Recon,
    Trace,
    Verdict
};

inline constexpr std::array<Tier, 3> kTiers{Tier::Recon, Tier::Trace, Tier::Verdict};

std::string_view to_string(Tier tier) noexcept;
std::optional<Tier> tier_from_string(std::string_view text) noexcept;
constexpr std::size_t index_of(Tier tier) noexcept { return static_cast<std::size_t>(tier); }

struct Message
{
    std::string role; // system | user | assistant
    std::string content;
    friend bool operator==(const Message&, const Message&) = default;
};

struct Usage
{
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    friend bool operator==(const Usage&, const Usage&) = default;
};

struct Exchange
{
    Tier tier = Tier::Recon;
    std::vector<Message> messages;
    std::string response;
    Usage usage;
    std::string model_id;
    std::chrono::nanoseconds latency{0};
};

/// Reference tokenizer: the number of maximal runs of non-whitespace bytes.
std::int64_t count_tokens(std::string_view text) noexcept;
std::int64_t count_tokens(const std::vector<Message>& messages) noexcept;

} // namespace apktriage::llm
