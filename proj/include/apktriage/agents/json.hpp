// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/agents/pipeline.hpp>

#include <json.hpp>

#include <optional>
#include <string_view>

namespace apktriage::agents
{

using Json = nlohmann::ordered_json;

Json to_json(const index::CallSite& site);
Json to_json(const analysis::ContextWindow& window);
Json to_json(const analysis::TriggerChain& chain);
Json to_json(const analysis::TaintResult& result);
Json to_json(const analysis::Slice& slice);
Json to_json(const ReconReport& recon);
Json to_json(const EvidenceVector& evidence);
Json to_json(const VerdictReport& report);

/// The outermost `{...}` of a reply that may wrap the object in prose or a
/// code fence; nullopt when there is none or it does not parse.
std::optional<Json> extract_json_object(std::string_view text);

} // namespace apktriage::agents
