// SPDX-License-Identifier: Apache-2.0
#pragma once

// Deterministic stand-ins for the three model roles. Each is a pure function
// of the conversation it is shown.

#include <apktriage/llm/provider.hpp>

#include <memory>
#include <string>
#include <vector>

namespace apktriage::agents
{

/// Category keywords to the permissions that purpose plausibly needs, and a
/// fixed severity per sensitive permission.
std::string scripted_recon(const std::vector<llm::Message>& messages);

/// context, then trigger paths, then taint, then a slice at the first sink
/// hit if there is one, then conclude.
std::string scripted_trace(const std::vector<llm::Message>& messages);

/// Malicious iff some vector has a sink hit and either a background
/// (SystemEvent or Unknown) trigger or a High-severity permission.
std::string scripted_verdict(const std::vector<llm::Message>& messages);

std::shared_ptr<llm::ScriptedProvider> make_scripted_provider();

} // namespace apktriage::agents
