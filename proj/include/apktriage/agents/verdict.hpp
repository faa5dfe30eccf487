// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/agents/recon.hpp>
#include <apktriage/agents/trace.hpp>
#include <apktriage/llm/router.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apktriage::agents
{

enum class Verdict
{
    Benign,
    Malicious
};

std::string_view to_string(Verdict verdict) noexcept;
std::optional<Verdict> verdict_from_string(std::string_view text) noexcept;

struct EvidenceRef
{
    std::string candidate; // call-site id of the supporting vector
    std::string trigger;   // entry kind
    std::string sink;      // sink category, or "none"
    std::string rationale;
    friend bool operator==(const EvidenceRef&, const EvidenceRef&) = default;
};

struct VerdictReport
{
    std::string app_id;
    Verdict verdict = Verdict::Benign;
    std::string threat_category;
    double confidence = 0.0;
    std::vector<EvidenceRef> evidence_chain;
    std::string rationale;
    friend bool operator==(const VerdictReport&, const VerdictReport&) = default;
};

/// The user message of the adjudication exchange: screening signals plus a
/// condensed line per evidence vector.
std::string render_verdict_request(const std::string& app_id, const ReconReport& recon,
                                   const std::vector<EvidenceVector>& evidence);

/// Serialises with the report schema's field names and order. indent < 0
/// gives a single line.
std::string verdict_to_json(const VerdictReport& report, int indent = -1);

/// Parses a reply against the report schema and checks it against the
/// evidence: every field present with the right type and no others, verdict
/// is Benign or Malicious, confidence in [0,1], every chain entry names a
/// supplied candidate, and a Malicious verdict has a non-empty chain.
/// Throws Error(Schema) describing the first violation.
VerdictReport parse_verdict(std::string_view text, const std::string& app_id,
                            const std::vector<EvidenceVector>& evidence);

/// One model exchange (plus one retry on a schema violation), metered into
/// `ledger`. Throws Error(SchemaViolation) when the retry fails too.
VerdictReport adjudicate(const std::string& app_id, const ReconReport& recon,
                         const std::vector<EvidenceVector>& evidence, const llm::ModelRouter& router,
                         llm::CostLedger& ledger);

} // namespace apktriage::agents
