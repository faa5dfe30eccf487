// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/index/api_index.hpp>
#include <apktriage/index/catalog.hpp>
#include <apktriage/ir/manifest.hpp>
#include <apktriage/llm/router.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apktriage::agents
{

enum class Severity
{
    Low,
    Medium,
    High
};

std::string_view to_string(Severity severity) noexcept;
std::optional<Severity> severity_from_string(std::string_view text) noexcept;

struct RiskSignal
{
    std::string permission;
    std::string reason;
    Severity severity = Severity::Low;
    friend bool operator==(const RiskSignal&, const RiskSignal&) = default;
};

/// A call site selected for tracing, with the permission that put it there.
struct Candidate
{
    index::CallSite site;
    std::string permission;
    Severity severity = Severity::Low;
    friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct ReconReport
{
    std::vector<std::string> declared_intents;
    std::vector<std::string> requested_permissions;
    std::vector<RiskSignal> risk_signals;
    std::vector<Candidate> candidates;
};

inline constexpr std::size_t kDefaultCandidateCap = 15;

/// The user message of the screening exchange.
std::string render_recon_request(const ir::Manifest& manifest);

/// Parses the screening reply. Throws Error(Schema).
struct ReconReply
{
    std::vector<std::string> declared_intents;
    std::vector<RiskSignal> risk_signals;
};
ReconReply parse_recon_reply(std::string_view text);

/// Call sites of every API guarded by a High or Medium signal's permission,
/// de-duplicated (highest severity wins) and ordered by severity, then method
/// signature, then line; at most `cap` of them.
std::vector<Candidate> select_candidates(const std::vector<RiskSignal>& signals, const index::ApiIndex& api_index,
                                         const index::ApiCatalog& catalog, std::size_t cap);

/// One model exchange over the manifest, metered into `ledger`. Signals naming
/// a permission the app does not request are dropped. A reply that does not
/// parse is retried once.
///
/// Throws Error(EmptyManifest) for a manifest without package, permissions and
/// components, and Error(Backend) when the reply cannot be used.
ReconReport recon_screen(const ir::Manifest& manifest, const index::ApiIndex& api_index,
                         const index::ApiCatalog& catalog, const llm::ModelRouter& router, llm::CostLedger& ledger,
                         std::size_t cap = kDefaultCandidateCap);

} // namespace apktriage::agents
