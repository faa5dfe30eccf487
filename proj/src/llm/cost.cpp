// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>
#include <apktriage/llm/cost.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <limits>

namespace apktriage::llm
{

namespace
{

constexpr std::int64_t kPicoPerUsd = 1'000'000'000'000;
constexpr std::int64_t kPicoPerMicro = 1'000'000;

} // namespace

Usd Usd::parse(std::string_view text)
{
    auto const bad = [&] { return Error(ErrorCode::Config, "bad USD amount '" + std::string(text) + "'"); };
    auto const dot = text.find('.');
    auto const whole = text.substr(0, dot);
    auto const frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() || frac.size() > 12 || (dot != std::string_view::npos && frac.empty()))
        throw bad();

    std::int64_t units = 0;
    auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), units);
    if (ec != std::errc{} || p != whole.data() + whole.size() || units < 0 || units > 9'000'000)
        throw bad();
    std::int64_t pico = units * kPicoPerUsd;
    std::int64_t scale = kPicoPerUsd;
    for (char c: frac)
    {
        if (c < '0' || c > '9')
            throw bad();
        scale /= 10;
        pico += (c - '0') * scale;
    }
    return Usd(pico);
}

std::string Usd::str(int places) const
{
    places = std::clamp(places, 0, 12);
    std::int64_t unit = kPicoPerUsd;
    for (int i = 0; i < places; ++i)
        unit /= 10;
    auto const negative = _pico < 0;
    auto const magnitude = negative ? -_pico : _pico;
    auto const scaled = (magnitude + unit / 2) / unit;
    std::int64_t pow10 = 1;
    for (int i = 0; i < places; ++i)
        pow10 *= 10;
    auto out = fmt::format("{}{}", negative ? "-" : "", scaled / pow10);
    if (places > 0)
        out += fmt::format(".{:0{}}", scaled % pow10, places);
    return out;
}

void PricingTable::set(const std::string& model_id, ModelPrice price)
{
    for (auto usd: {price.per_million_input, price.per_million_output})
        if (usd.pico() < 0 || usd.pico() % kPicoPerMicro != 0)
            throw Error(ErrorCode::Config, "price for " + model_id
                                               + " must be non-negative with at most 6 decimals per million tokens");
    _prices[model_id] = price;
}

const ModelPrice* PricingTable::find(std::string_view model_id) const
{
    auto const it = _prices.find(model_id);
    return it == _prices.end() ? nullptr : &it->second;
}

Usd token_cost(std::int64_t tokens, Usd per_million)
{
    // per_million is a whole number of micro-dollars, so the cost is a whole
    // number of pico-dollars.
    return Usd::from_pico(tokens * (per_million.pico() / kPicoPerMicro));
}

CostLedger::CostLedger(const CostLedger& other)
{
    std::lock_guard lock(other._mutex);
    _exchanges = other._exchanges;
    _totals = other._totals;
}

CostLedger& CostLedger::operator=(const CostLedger& other)
{
    if (this == &other)
        return *this;
    std::scoped_lock lock(_mutex, other._mutex);
    _exchanges = other._exchanges;
    _totals = other._totals;
    return *this;
}

void CostLedger::append(Exchange exchange)
{
    if (exchange.usage.input_tokens < 0 || exchange.usage.output_tokens < 0)
        throw Error(ErrorCode::Backend, "negative token usage from " + exchange.model_id);
    std::lock_guard lock(_mutex);
    auto& t = _totals[index_of(exchange.tier)];
    t.input_tokens += exchange.usage.input_tokens;
    t.output_tokens += exchange.usage.output_tokens;
    ++t.exchanges;
    _exchanges.push_back(std::move(exchange));
}

void CostLedger::extend(const CostLedger& other)
{
    for (auto& e: other.exchanges())
        append(std::move(e));
}

std::vector<Exchange> CostLedger::exchanges() const
{
    std::lock_guard lock(_mutex);
    return _exchanges;
}

std::size_t CostLedger::size() const
{
    std::lock_guard lock(_mutex);
    return _exchanges.size();
}

TierTotals CostLedger::totals(Tier tier) const
{
    std::lock_guard lock(_mutex);
    return _totals[index_of(tier)];
}

TierTotals CostLedger::grand_totals() const
{
    std::lock_guard lock(_mutex);
    TierTotals out;
    for (const auto& t: _totals)
    {
        out.input_tokens += t.input_tokens;
        out.output_tokens += t.output_tokens;
        out.exchanges += t.exchanges;
    }
    return out;
}

TierTotals CostLedger::recompute(Tier tier) const
{
    std::lock_guard lock(_mutex);
    TierTotals out;
    for (const auto& e: _exchanges)
        if (e.tier == tier)
        {
            out.input_tokens += e.usage.input_tokens;
            out.output_tokens += e.usage.output_tokens;
            ++out.exchanges;
        }
    return out;
}

CostReport cost_of(const CostLedger& ledger, const PricingTable& pricing)
{
    CostReport report;
    for (const auto& e: ledger.exchanges())
    {
        auto const* price = pricing.find(e.model_id);
        if (!price)
            throw Error(ErrorCode::UnpricedModel, "no price for model '" + e.model_id + "'");
        auto& tier = report.tiers[index_of(e.tier)];
        auto const in = token_cost(e.usage.input_tokens, price->per_million_input);
        auto const out = token_cost(e.usage.output_tokens, price->per_million_output);
        tier.input += in;
        tier.output += out;
        report.total.input += in;
        report.total.output += out;
    }
    return report;
}

std::array<double, 3> tier_shares(const CostLedger& ledger)
{
    auto const all = ledger.grand_totals().tokens();
    if (all <= 0)
        throw Error(ErrorCode::EmptyLedger, "ledger has no tokens");
    std::array<double, 3> shares{};
    for (auto t: kTiers)
        shares[index_of(t)] = static_cast<double>(ledger.totals(t).tokens()) / static_cast<double>(all);
    return shares;
}

} // namespace apktriage::llm
