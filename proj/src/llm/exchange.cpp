// SPDX-License-Identifier: Apache-2.0
#include <apktriage/llm/exchange.hpp>

#include <cctype>

namespace apktriage::llm
{

std::string_view to_string(Tier tier) noexcept
{
    switch (tier)
    {
        case Tier::Recon: return "recon";
        case Tier::Trace: return "trace";
        case Tier::Verdict: return "verdict";
    }
    return "recon";
}

std::optional<Tier> tier_from_string(std::string_view text) noexcept
{
    for (auto t: kTiers)
        if (to_string(t) == text)
            return t;
    return std::nullopt;
}

std::int64_t count_tokens(std::string_view text) noexcept
{
    std::int64_t n = 0;
    bool in_token = false;
    for (unsigned char c: text)
    {
        bool const space = std::isspace(c) != 0;
        if (!space && !in_token)
            ++n;
        in_token = !space;
    }
    return n;
}

std::int64_t count_tokens(const std::vector<Message>& messages) noexcept
{
    std::int64_t n = 0;
    for (const auto& m: messages)
        n += count_tokens(m.content);
    return n;
}

} // namespace apktriage::llm
