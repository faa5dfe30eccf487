// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/llm/exchange.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace apktriage::llm
{

/// Exact US-dollar amount held as an integer number of pico-dollars.
class Usd
{
public:
    constexpr Usd() = default;
    static constexpr Usd from_pico(std::int64_t pico) noexcept { return Usd(pico); }
    /// Parses a non-negative decimal such as "0.07" or "2"; at most 12 decimals.
    /// Throws Error(Config) on malformed text.
    static Usd parse(std::string_view text);

    [[nodiscard]] constexpr std::int64_t pico() const noexcept { return _pico; }
    [[nodiscard]] double value() const noexcept { return static_cast<double>(_pico) / 1e12; }
    /// Fixed-point rendering rounded half away from zero, e.g. "0.075000".
    [[nodiscard]] std::string str(int places = 6) const;

    friend constexpr Usd operator+(Usd a, Usd b) noexcept { return Usd(a._pico + b._pico); }
    constexpr Usd& operator+=(Usd other) noexcept
    {
        _pico += other._pico;
        return *this;
    }
    friend constexpr auto operator<=>(Usd, Usd) = default;

private:
    constexpr explicit Usd(std::int64_t pico) noexcept: _pico(pico) {}
    std::int64_t _pico = 0;
};

struct ModelPrice
{
    Usd per_million_input;
    Usd per_million_output;
};

class PricingTable
{
public:
    /// Throws Error(Config) when a price is negative or not a multiple of
    /// 10^-6 USD per million tokens.
    void set(const std::string& model_id, ModelPrice price);
    [[nodiscard]] const ModelPrice* find(std::string_view model_id) const;
    [[nodiscard]] const std::map<std::string, ModelPrice, std::less<>>& models() const noexcept { return _prices; }

private:
    std::map<std::string, ModelPrice, std::less<>> _prices;
};

/// Cost of a token count at a per-million price; exact.
Usd token_cost(std::int64_t tokens, Usd per_million);

struct TierTotals
{
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    std::size_t exchanges = 0;
    [[nodiscard]] std::int64_t tokens() const noexcept { return input_tokens + output_tokens; }
    friend bool operator==(const TierTotals&, const TierTotals&) = default;
};

/// Append-only record of model exchanges with running per-tier totals.
/// append() is safe to call from several threads.
class CostLedger
{
public:
    CostLedger() = default;
    CostLedger(const CostLedger& other);
    CostLedger& operator=(const CostLedger& other);

    void append(Exchange exchange);
    /// Appends every exchange of other, in its order.
    void extend(const CostLedger& other);

    [[nodiscard]] std::vector<Exchange> exchanges() const;
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] TierTotals totals(Tier tier) const;
    [[nodiscard]] TierTotals grand_totals() const;
    /// Totals summed from the exchange list rather than the running counters.
    [[nodiscard]] TierTotals recompute(Tier tier) const;

private:
    mutable std::mutex _mutex;
    std::vector<Exchange> _exchanges;
    std::array<TierTotals, 3> _totals{};
};

struct TierCost
{
    Usd input;
    Usd output;
    [[nodiscard]] Usd total() const noexcept { return input + output; }
};

struct CostReport
{
    std::array<TierCost, 3> tiers{};
    TierCost total;
};

/// Per-tier and total USD of every exchange. Throws Error(UnpricedModel) when
/// an exchange's model has no price.
CostReport cost_of(const CostLedger& ledger, const PricingTable& pricing);

/// Fraction of all tokens (input + output) spent by each tier. Throws
/// Error(EmptyLedger) when the ledger holds no tokens.
std::array<double, 3> tier_shares(const CostLedger& ledger);

} // namespace apktriage::llm
