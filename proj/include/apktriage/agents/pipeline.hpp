// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/agents/recon.hpp>
#include <apktriage/agents/trace.hpp>
#include <apktriage/agents/verdict.hpp>
#include <apktriage/analysis/trigger.hpp>
#include <apktriage/index/catalog.hpp>
#include <apktriage/ir/bundle.hpp>
#include <apktriage/llm/cost.hpp>
#include <apktriage/llm/router.hpp>

#include <vector>

namespace apktriage::agents
{

struct Catalogs
{
    index::ApiCatalog apis;
    analysis::EntryCatalog entries;
};

struct Budgets
{
    int max_iterations = kDefaultMaxIterations;
    std::size_t candidate_cap = kDefaultCandidateCap;
};

struct PipelineResult
{
    ReconReport recon;
    std::vector<EvidenceVector> evidence; // one per candidate, same order
    VerdictReport verdict;
    llm::CostLedger ledger;
};

/// An error raised inside one tier, tagged with that tier.
class PipelineError : public Error
{
public:
    PipelineError(llm::Tier tier, const Error& cause);
    [[nodiscard]] llm::Tier tier() const noexcept { return _tier; }

private:
    llm::Tier _tier;
};

/// Screening, a trace session per candidate, then adjudication. Throws
/// PipelineError.
PipelineResult run_pipeline(const ir::AppBundle& bundle, const Catalogs& catalogs, const llm::ModelRouter& router,
                            const Budgets& budgets = {});

} // namespace apktriage::agents
