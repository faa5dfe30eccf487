// SPDX-License-Identifier: Apache-2.0
// Python extension `apktriage._core`. Structured results cross the boundary
// as JSON text; the package's __init__ decodes them.

#include <apktriage/agents/json.hpp>
#include <apktriage/error.hpp>
#include <apktriage/harness/batch.hpp>
#include <apktriage/harness/config.hpp>
#include <apktriage/harness/report.hpp>
#include <apktriage/harness/stats.hpp>
#include <apktriage/ir/bundle.hpp>
#include <apktriage/ir/loc_stats.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace apktriage;

namespace
{

harness::AppConfig resolve(const std::string& data_dir, const std::string& config_path)
{
    return config_path.empty() ? harness::default_app_config(data_dir)
                               : harness::load_app_config(config_path, data_dir);
}

py::object optional_float(const std::optional<double>& v)
{
    return v ? py::object(py::float_(*v)) : py::object(py::none());
}

py::dict bundle_summary(const ir::AppBundle& bundle)
{
    py::list diags;
    for (const auto& d: bundle.diagnostics)
    {
        py::dict entry;
        entry["kind"] = std::string(ir::to_string(d.kind));
        entry["error"] = d.is_error();
        entry["message"] = d.message;
        entry["method"] = d.method ? py::object(py::str(d.method->str())) : py::object(py::none());
        entry["line"] = d.line;
        diags.append(entry);
    }
    py::dict out;
    out["app_id"] = bundle.app_id;
    out["classes"] = bundle.program.classes.size();
    out["methods"] = bundle.program.method_count();
    out["permissions"] = bundle.manifest.permissions;
    out["diagnostics"] = diags;
    return out;
}

std::string analyze(const std::string& bundle_dir, const std::string& data_dir, const std::string& config_path,
                    bool evidence)
{
    auto const config = resolve(data_dir, config_path);
    auto const catalogs = harness::load_catalogs(config);
    auto const router = harness::make_router(config.backend);
    auto const bundle = ir::load_bundle_dir(bundle_dir);
    if (bundle.has_errors())
        throw Error(ErrorCode::Config, "bundle is not well-formed: " + bundle.diagnostics.front().message);

    auto result = [&] {
        py::gil_scoped_release release;
        return agents::run_pipeline(bundle, catalogs, router, config.budgets);
    }();
    auto const cost = llm::cost_of(result.ledger, config.backend.pricing);
    agents::Json tokens = agents::Json::object();
    for (auto tier: llm::kTiers)
        tokens[std::string(llm::to_string(tier))] = result.ledger.totals(tier).tokens();
    agents::Json out{{"report", agents::to_json(result.verdict)},
                     {"tokens", tokens},
                     {"cost_usd", cost.total.total().str()}};
    if (evidence)
    {
        agents::Json list = agents::Json::array();
        for (const auto& ev: result.evidence)
            list.push_back(agents::to_json(ev));
        out["recon"] = agents::to_json(result.recon);
        out["evidence"] = std::move(list);
    }
    return out.dump();
}

py::dict batch(const std::string& index, const std::string& out_dir, const std::string& data_dir,
               const std::string& config_path, int threads)
{
    auto config = resolve(data_dir, config_path);
    if (threads >= 0)
        config.threads = static_cast<unsigned>(threads);
    auto const dataset = harness::load_dataset(index);
    auto const catalogs = harness::load_catalogs(config);
    auto const router = harness::make_router(config.backend);
    harness::BatchResult result;
    {
        py::gil_scoped_release release;
        result = harness::run_batch(dataset, catalogs, router, config.budgets, config.threads);
        harness::emit_reports(result, config.backend.pricing, out_dir);
    }
    py::dict out;
    out["entries"] = result.entries.size();
    out["evaluated"] = result.evaluated_count();
    out["skipped"] = result.skipped_count();
    out["tp"] = result.counts.tp;
    out["tn"] = result.counts.tn;
    out["fp"] = result.counts.fp;
    out["fn"] = result.counts.fn;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Static triage of Android apps with a tiered agent pipeline";
    m.attr("DEFAULT_DATA_DIR") = std::string(APKTRIAGE_DATA_DIR);

    static py::exception<Error> error_type(m, "ApktriageError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const Error& e)
        {
            py::object instance = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
            instance.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type.ptr(), instance.ptr());
        }
    });

    m.def(
        "parse_bundle",
        [](const std::string& manifest, const std::string& program) {
            return bundle_summary(ir::parse_bundle(manifest, program));
        },
        py::arg("manifest_text"), py::arg("ir_text"), "Parse and validate a manifest and IR program.");
    m.def(
        "load_bundle", [](const std::string& dir) { return bundle_summary(ir::load_bundle_dir(dir)); },
        py::arg("bundle_dir"));
    m.def("normalize_program", &ir::normalize_program_text, py::arg("ir_text"),
          "Canonical rendering of an IR program.");
    m.def(
        "method_locs",
        [](const std::string& program) {
            std::vector<int> locs;
            ir::parse_program(program).for_each_method(
                [&](const ir::ClassDef&, const ir::MethodDef& md) { locs.push_back(md.loc()); });
            return locs;
        },
        py::arg("ir_text"), "Line count of every method in declaration order.");
    m.def(
        "percentile", [](const std::vector<int>& values, double p) { return ir::LocDistribution(values).percentile(p); },
        py::arg("values"), py::arg("p"));
    m.def(
        "compute_metrics",
        [](std::int64_t tp, std::int64_t tn, std::int64_t fp, std::int64_t fn) {
            auto const r = harness::compute_metrics({tp, tn, fp, fn});
            py::dict out;
            out["accuracy"] = r.accuracy;
            out["precision"] = optional_float(r.precision);
            out["recall"] = optional_float(r.recall);
            out["f1"] = optional_float(r.f1);
            return out;
        },
        py::arg("tp"), py::arg("tn"), py::arg("fp"), py::arg("fn"));
    m.def(
        "corpus_stats",
        [](const std::string& index, int width) {
            return harness::render_stats(harness::corpus_stats(harness::load_dataset(index)), width);
        },
        py::arg("dataset"), py::arg("width") = 10);
    m.def("analyze", &analyze, py::arg("bundle_dir"), py::arg("data_dir"), py::arg("config") = "",
          py::arg("evidence") = false, "Run the pipeline on one bundle; returns JSON text.");
    m.def("run_batch", &batch, py::arg("dataset"), py::arg("out_dir"), py::arg("data_dir"), py::arg("config") = "",
          py::arg("threads") = -1, "Run a dataset index and write reports under out_dir.");
}
