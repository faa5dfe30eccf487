// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "../support/generators.hpp"

#include <apktriage/agents/scripted.hpp>
#include <apktriage/error.hpp>
#include <apktriage/harness/batch.hpp>
#include <apktriage/harness/config.hpp>
#include <apktriage/harness/report.hpp>
#include <apktriage/ir/bundle.hpp>

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace apktriage;
using namespace apktriage::harness;
namespace fs = std::filesystem;

namespace
{

const fs::path kFixtures = APKTRIAGE_FIXTURE_DIR;
const fs::path kData = APKTRIAGE_DATA_DIR;
const fs::path kTestData = APKTRIAGE_TEST_DATA_DIR;

ErrorCode code_of(const std::function<void()>& fn)
{
    try
    {
        fn();
    }
    catch (const Error& e)
    {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

const AppConfig& config()
{
    static const AppConfig c = default_app_config(kData);
    return c;
}

const agents::Catalogs& catalogs()
{
    static const agents::Catalogs c = load_catalogs(config());
    return c;
}

const llm::ModelRouter& router()
{
    static const llm::ModelRouter r = make_router(config().backend);
    return r;
}

fs::path scratch(const std::string& name)
{
    auto const dir = fs::temp_directory_path() / ("apktriage_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    return ir::read_text_file(p);
}

/// Every regular file under dir, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> files;
    for (const auto& e: fs::recursive_directory_iterator(dir))
    {
        if (e.is_regular_file())
            files[fs::relative(e.path(), dir).string()] = slurp(e.path());
    }
    return files;
}

// Independent oracle: the four ratios computed with long double from the
// raw counts, with undefined marked by a negative value.
std::array<long double, 4> metric_oracle(long double tp, long double tn, long double fp, long double fn)
{
    long double const acc = (tp + tn) / (tp + tn + fp + fn);
    long double const pre = tp + fp > 0 ? tp / (tp + fp) : -1;
    long double const rec = tp + fn > 0 ? tp / (tp + fn) : -1;
    long double const f1 = (pre < 0 || rec < 0 || tp == 0) ? -1 : 2 * tp / (2 * tp + fp + fn);
    return {acc, pre, rec, f1};
}

} // namespace

TEST_CASE("reference row: derived counts reproduce all four percentages, the stated counts do not")
{
    // Derivation in docs/metric_derivation.md.
    auto const m = compute_metrics({50, 67, 6, 1});
    CHECK(std::abs(m.accuracy - 0.9435) <= 0.005);
    CHECK(std::abs(*m.precision - 0.8929) <= 0.005);
    CHECK(std::abs(*m.recall - 0.9804) <= 0.005);
    CHECK(std::abs(*m.f1 - 0.9346) <= 0.005);

    auto const stated = compute_metrics({51, 66, 7, 0});
    CHECK(std::abs(stated.accuracy - 0.9435) <= 0.005);
    CHECK(*stated.recall == 1.0);
    CHECK(std::abs(*stated.precision - 0.8929) > 0.005);
    CHECK(std::abs(*stated.recall - 0.9804) > 0.005);
}

TEST_CASE("metric edge cases")
{
    auto const perfect = compute_metrics({5, 5, 0, 0});
    CHECK(perfect.accuracy == 1.0);
    CHECK(*perfect.precision == 1.0);
    CHECK(*perfect.recall == 1.0);
    CHECK(*perfect.f1 == 1.0);

    auto const none = compute_metrics({0, 7, 0, 3});
    CHECK_FALSE(none.precision.has_value());
    CHECK(*none.recall == 0.0);
    CHECK_FALSE(none.f1.has_value());
    CHECK(none.accuracy == doctest::Approx(0.7));

    auto const wrong = compute_metrics({0, 0, 2, 2});
    CHECK(*wrong.precision == 0.0);
    CHECK(*wrong.recall == 0.0);
    CHECK_FALSE(wrong.f1.has_value());

    CHECK(code_of([] { compute_metrics({}); }) == ErrorCode::EmptyEvaluation);
    CHECK(code_of([] { compute_metrics({-1, 2, 0, 0}); }) == ErrorCode::Config);
}

TEST_CASE("property: metrics equal the direct formulas on 1000 random confusion matrices")
{
    testing::Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial)
    {
        ConfusionCounts c{testing::uniform(rng, 0, 60), testing::uniform(rng, 0, 60), testing::uniform(rng, 0, 60),
                          testing::uniform(rng, 0, 60)};
        if (trial % 10 == 0)
            c.tp = 0;
        if (trial % 13 == 0)
            c.fp = 0;
        if (c.total() == 0)
            c.tn = 1;
        auto const m = compute_metrics(c);
        auto const o = metric_oracle(c.tp, c.tn, c.fp, c.fn);
        CHECK(m.accuracy == doctest::Approx(static_cast<double>(o[0])).epsilon(1e-12));
        auto check = [](const std::optional<double>& got, long double want) {
            if (want < 0)
                CHECK_FALSE(got.has_value());
            else
            {
                REQUIRE(got.has_value());
                CHECK(*got == doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
                CHECK(*got >= 0.0);
                CHECK(*got <= 1.0);
            }
        };
        check(m.precision, o[1]);
        check(m.recall, o[2]);
        check(m.f1, o[3]);
        if (m.f1)
            CHECK(*m.f1 == doctest::Approx(2 * *m.precision * *m.recall / (*m.precision + *m.recall)).epsilon(1e-12));
    }
}

TEST_CASE("dataset index parsing")
{
    auto const ds = parse_dataset("# comment\napp_id,manifest,ir,label,year\n"
                                  " a , m/a.mmf , i/a.mir , malicious , 2019 # trailing\n"
                                  "b,/abs/b.mmf,b.mir,Benign,2020\n\n",
                                  "/base");
    REQUIRE(ds.entries.size() == 2);
    CHECK(ds.entries[0].app_id == "a");
    CHECK(ds.entries[0].manifest_path == fs::path("/base/m/a.mmf"));
    CHECK(ds.entries[0].label == Label::Malicious);
    CHECK(ds.entries[0].year == 2019);
    CHECK(ds.entries[1].manifest_path == fs::path("/abs/b.mmf"));

    CHECK(code_of([] { parse_dataset("a,m,i,Benign\n", "."); }) == ErrorCode::Config);
    CHECK(code_of([] { parse_dataset("a,m,i,Maybe,2019\n", "."); }) == ErrorCode::Config);
    CHECK(code_of([] { parse_dataset("a,m,i,Benign,20x9\n", "."); }) == ErrorCode::Config);
    CHECK(code_of([] { parse_dataset("a,m,i,Benign,2019\na,m,i,Benign,2019\n", "."); }) == ErrorCode::Config);
    CHECK(code_of([] { parse_dataset(",m,i,Benign,2019\n", "."); }) == ErrorCode::Config);
    CHECK(code_of([] { load_dataset("/nonexistent/x.idx"); }) == ErrorCode::Io);
}

TEST_CASE("configuration file")
{
    auto const shipped = load_app_config(kData / "apktriage.ini", kData);
    CHECK(shipped.api_catalog == kData / "system_apis.cat");
    CHECK(shipped.budgets.max_iterations == 8);
    CHECK(shipped.budgets.candidate_cap == 15);
    CHECK(shipped.backend.router.mode == llm::BackendMode::Scripted);
    CHECK(shipped.backend.router.providers.at("gateway").api_key_env == "APKTRIAGE_GATEWAY_KEY");
    CHECK(shipped.backend.router.tier_models == config().backend.router.tier_models);

    auto const custom = parse_app_config("[catalogs]\napis = cats/x.cat\n[pipeline]\ncandidate_cap = 3\nthreads = 2\n",
                                         "/etc/at", kData);
    CHECK(custom.api_catalog == fs::path("/etc/at/cats/x.cat"));
    CHECK(custom.entry_catalog == kData / "entry_points.epc");
    CHECK(custom.budgets.candidate_cap == 3);
    CHECK(custom.threads == 2);

    CHECK(code_of([] { parse_app_config("[pipeline]\nmax_iterations = 0\n", ".", "."); }) == ErrorCode::Config);
    CHECK(code_of([] { parse_app_config("[pipeline]\nspeed = 11\n", ".", "."); }) == ErrorCode::Config);
    CHECK(code_of([] { parse_app_config("[catalog]\napis = x\n", ".", "."); }) == ErrorCode::Config);
    CHECK(code_of([] { load_app_config("/nonexistent.ini", "."); }) == ErrorCode::Config);

    auto unpriced = config().backend;
    unpriced.router.tier_models[2] = "mystery";
    CHECK(code_of([&] { make_router(unpriced); }) == ErrorCode::Config);
}

TEST_CASE("fixture corpus: every app classified correctly, byte-identical outputs")
{
    auto const ds = load_dataset(kFixtures / "corpus.idx");
    REQUIRE(ds.entries.size() == 6);
    auto const batch = run_batch(ds, catalogs(), router(), config().budgets, 4);
    CHECK(batch.evaluated_count() == 6);
    REQUIRE(batch.metrics.has_value());
    CHECK(batch.counts == ConfusionCounts{3, 3, 0, 0});
    CHECK(*batch.metrics->f1 == 1.0);

    auto const a = scratch("det_a");
    auto const b = scratch("det_b");
    emit_reports(batch, config().backend.pricing, a);
    emit_reports(run_batch(ds, catalogs(), router(), config().budgets, 1), config().backend.pricing, b);
    auto const sa = snapshot(a);
    CHECK(sa == snapshot(b));
    CHECK(sa.size() == 6 + 6 + 3);

    auto const summary = nlohmann::json::parse(sa.at("summary.json"));
    CHECK(summary["metrics"]["f1"] == 1.0);
    CHECK(summary["tier_shares"]["trace"].get<double>() >= 0.80);
    CHECK(summary["per_year"].size() == 3);
    CHECK(summary["skipped"] == 0);

    auto const rows = read_results(a / "results.jsonl");
    REQUIRE(rows.size() == 6);
    ConfusionCounts from_rows;
    for (const auto& r: rows)
        tally(from_rows, r.label == Label::Malicious, r.predicted_malicious);
    CHECK(from_rows == batch.counts);
}

TEST_CASE("batch results do not depend on entry order")
{
    auto const ds = load_dataset(kTestData / "robust" / "robust.idx");
    auto const base = run_batch(ds, catalogs(), router());
    auto const base_dir = scratch("perm_base");
    emit_reports(base, config().backend.pricing, base_dir);
    auto const expected = snapshot(base_dir);

    testing::Rng rng(3);
    for (int trial = 0; trial < 5; ++trial)
    {
        auto shuffled = ds;
        std::shuffle(shuffled.entries.begin(), shuffled.entries.end(), rng);
        auto const batch = run_batch(shuffled, catalogs(), router(), {}, static_cast<unsigned>(trial + 1));
        CHECK(batch.counts == base.counts);
        CHECK(batch.metrics == base.metrics);
        auto const dir = scratch("perm_" + std::to_string(trial));
        emit_reports(batch, config().backend.pricing, dir);
        CHECK(snapshot(dir) == expected);
    }
}

TEST_CASE("an unparseable bundle and a tool error are recorded; everything else is evaluated")
{
    auto const ds = load_dataset(kTestData / "robust" / "robust.idx");
    auto const batch = run_batch(ds, catalogs(), router());
    CHECK(batch.entries.size() == 8);
    CHECK(batch.evaluated_count() == 7);
    CHECK(batch.skipped_count() == 1);

    auto const broken = std::find_if(batch.entries.begin(), batch.entries.end(),
                                     [](const EntryResult& r) { return r.entry.app_id == "broken"; });
    REQUIRE(broken != batch.entries.end());
    CHECK_FALSE(broken->evaluated());
    CHECK(broken->skip_reason.find("Syntax") != std::string::npos);

    auto const bomb = std::find_if(batch.entries.begin(), batch.entries.end(),
                                   [](const EntryResult& r) { return r.entry.app_id == "smsbomb"; });
    REQUIRE(bomb != batch.entries.end());
    REQUIRE(bomb->evaluated());
    REQUIRE(bomb->tool_errors.size() == 1);
    CHECK(bomb->tool_errors[0].code == "NoResultVariable");
    CHECK(bomb->tool_errors[0].tool == "taint_reachability");
    CHECK(bomb->pipeline->verdict.verdict == agents::Verdict::Malicious);

    auto const dir = scratch("robust");
    emit_reports(batch, config().backend.pricing, dir);
    auto const summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["skipped"] == 1);
    CHECK(summary["skipped_entries"][0]["app_id"] == "broken");
    CHECK(summary["tool_errors"].size() == 1);
    CHECK(*batch.metrics->f1 == 1.0);
}

TEST_CASE("a dataset of one unparseable entry evaluates nothing")
{
    Dataset ds;
    ds.entries.push_back({"broken", kTestData / "robust/broken/manifest.mmf", kTestData / "robust/broken/program.mir",
                          Label::Benign, 2020});
    ds.entries.push_back({"missing", kTestData / "nope.mmf", kTestData / "nope.mir", Label::Benign, 2020});
    auto const batch = run_batch(ds, catalogs(), router());
    CHECK(batch.evaluated_count() == 0);
    CHECK(batch.skipped_count() == 2);
    CHECK_FALSE(batch.metrics.has_value());
    CHECK(partition_by_year(batch).empty());

    auto const dir = scratch("none");
    emit_reports(batch, config().backend.pricing, dir);
    auto const summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["evaluated"] == 0);
    CHECK(summary["skipped"] == 2);
    CHECK(summary["metrics"].is_null());
    CHECK(summary["tier_shares"].is_null());
}

TEST_CASE("a single benign app yields one Benign report with an empty chain")
{
    Dataset ds;
    ds.entries.push_back({"fx_clean", kFixtures / "fx_clean/manifest.mmf", kFixtures / "fx_clean/program.mir",
                          Label::Benign, 2019});
    auto const batch = run_batch(ds, catalogs(), router());
    auto const dir = scratch("single");
    emit_reports(batch, config().backend.pricing, dir);
    std::vector<fs::path> reports;
    for (const auto& e: fs::directory_iterator(dir / "reports"))
        reports.push_back(e.path());
    REQUIRE(reports.size() == 1);
    auto const text = slurp(reports[0]);
    CHECK(text.find(R"("verdict":"Benign")") != std::string::npos);
    CHECK(text.find(R"("evidence_chain":[])") != std::string::npos);
    auto const summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["metrics"]["precision"].is_null());
    CHECK(summary["tier_shares"]["trace"] == 0.0);
}

TEST_CASE("an unusable output directory fails before anything is written")
{
    auto const ds = load_dataset(kFixtures / "corpus.idx");
    auto const batch = run_batch(ds, catalogs(), router());
    auto const dir = scratch("blocked");
    fs::create_directories(dir);
    std::ofstream(dir / "out") << "a file, not a directory";
    CHECK(code_of([&] { emit_reports(batch, config().backend.pricing, dir / "out"); }) == ErrorCode::Io);
    CHECK(code_of([&] { emit_reports(batch, config().backend.pricing, dir / "out" / "deeper"); }) == ErrorCode::Io);
    CHECK_FALSE(fs::exists(dir / "out" / "deeper" / "summary.json"));

    fs::create_directories(dir / "ro");
    std::ofstream(dir / "ro" / "reports") << "blocks the reports directory";
    CHECK(code_of([&] { emit_reports(batch, config().backend.pricing, dir / "ro"); }) == ErrorCode::Io);
    CHECK_FALSE(fs::exists(dir / "ro" / "summary.json"));
}

TEST_CASE("per-year partition")
{
    auto const ds = load_dataset(kFixtures / "corpus.idx");
    auto one_year = ds;
    for (auto& e: one_year.entries)
        e.year = 2022;
    auto const batch = run_batch(one_year, catalogs(), router());
    auto const years = partition_by_year(batch);
    REQUIRE(years.size() == 1);
    CHECK(years.at(2022) == *batch.metrics);

    // Hand-built results: 2019 all correct, 2020 all wrong.
    BatchResult synthetic;
    auto add = [&](int year, Label label, agents::Verdict verdict) {
        EntryResult r;
        r.entry.app_id = "e" + std::to_string(synthetic.entries.size());
        r.entry.year = year;
        r.entry.label = label;
        r.pipeline.emplace();
        r.pipeline->verdict.verdict = verdict;
        synthetic.entries.push_back(std::move(r));
    };
    add(2019, Label::Malicious, agents::Verdict::Malicious);
    add(2019, Label::Benign, agents::Verdict::Benign);
    add(2020, Label::Malicious, agents::Verdict::Benign);
    add(2020, Label::Benign, agents::Verdict::Malicious);
    auto const split = partition_by_year(synthetic);
    CHECK(*split.at(2019).f1 == 1.0);
    CHECK_FALSE(split.at(2020).f1.has_value());
    CHECK(split.at(2020).accuracy == 0.0);
}

TEST_CASE("property: per-year metrics equal an independent per-group recomputation")
{
    testing::Rng rng(17);
    for (int trial = 0; trial < 200; ++trial)
    {
        BatchResult batch;
        auto const n = testing::uniform(rng, 1, 40);
        std::map<int, std::array<int, 4>> oracle; // tp tn fp fn
        for (int i = 0; i < n; ++i)
        {
            EntryResult r;
            r.entry.app_id = std::to_string(i);
            r.entry.year = testing::uniform(rng, 2015, 2019);
            auto const truth = testing::uniform(rng, 0, 1) == 1;
            auto const pred = testing::uniform(rng, 0, 1) == 1;
            r.entry.label = truth ? Label::Malicious : Label::Benign;
            if (testing::uniform(rng, 0, 9) > 0)
            {
                r.pipeline.emplace();
                r.pipeline->verdict.verdict = pred ? agents::Verdict::Malicious : agents::Verdict::Benign;
                auto& o = oracle[r.entry.year];
                ++o[truth ? (pred ? 0 : 3) : (pred ? 2 : 1)];
            }
            batch.entries.push_back(std::move(r));
        }
        auto const got = partition_by_year(batch);
        REQUIRE(got.size() == oracle.size());
        for (const auto& [year, o]: oracle)
        {
            auto const want = metric_oracle(o[0], o[1], o[2], o[3]);
            auto const& m = got.at(year);
            CHECK(m.accuracy == doctest::Approx(static_cast<double>(want[0])));
            CHECK(m.f1.has_value() == (want[3] >= 0));
            if (m.f1)
                CHECK(*m.f1 == doctest::Approx(static_cast<double>(want[3])));
        }
    }
}
