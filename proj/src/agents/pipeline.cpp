// SPDX-License-Identifier: Apache-2.0
#include <apktriage/agents/pipeline.hpp>
#include <apktriage/index/api_index.hpp>
#include <apktriage/index/call_graph.hpp>

namespace apktriage::agents
{

PipelineError::PipelineError(llm::Tier tier, const Error& cause)
    : Error(cause.code(), std::string(llm::to_string(tier)) + " tier: " + cause.detail())
    , _tier(tier)
{
}

PipelineResult run_pipeline(const ir::AppBundle& bundle, const Catalogs& catalogs, const llm::ModelRouter& router,
                            const Budgets& budgets)
{
    PipelineResult result;
    auto const app_id = bundle.app_id.empty() ? bundle.manifest.package : bundle.app_id;

    index::CallGraph graph;
    try
    {
        graph = index::build_call_graph(bundle.program);
        auto const api_index = index::build_api_index(bundle.program, catalogs.apis);
        result.recon = recon_screen(bundle.manifest, api_index, catalogs.apis, router, result.ledger,
                                    budgets.candidate_cap);
    }
    catch (const PipelineError&)
    {
        throw;
    }
    catch (const Error& e)
    {
        throw PipelineError(llm::Tier::Recon, e);
    }

    Toolbox const toolbox{bundle, graph, catalogs.apis, catalogs.entries};
    try
    {
        result.evidence.reserve(result.recon.candidates.size());
        for (const auto& candidate: result.recon.candidates)
        {
            result.evidence.push_back(
                trace_candidate(candidate, toolbox, router, result.ledger, budgets.max_iterations));
        }
    }
    catch (const Error& e)
    {
        throw PipelineError(llm::Tier::Trace, e);
    }

    try
    {
        result.verdict = adjudicate(app_id, result.recon, result.evidence, router, result.ledger);
    }
    catch (const Error& e)
    {
        throw PipelineError(llm::Tier::Verdict, e);
    }
    return result;
}

} // namespace apktriage::agents
