// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include <apktriage/analysis/context.hpp>
#include <apktriage/analysis/slice.hpp>
#include <apktriage/analysis/taint.hpp>
#include <apktriage/analysis/trigger.hpp>
#include <apktriage/error.hpp>
#include <apktriage/index/call_graph.hpp>
#include <apktriage/ir/bundle.hpp>

#include <filesystem>

using namespace apktriage;

namespace
{

const std::filesystem::path kFixtures = APKTRIAGE_FIXTURE_DIR;
const std::filesystem::path kData = APKTRIAGE_DATA_DIR;

ir::IrProgram nop_method(int lines)
{
    std::string text = "class A {\n  method A.f()->void () {\n";
    for (int i = 1; i < lines; ++i)
        text += "    nop\n";
    text += "    return\n  }\n}\n";
    return ir::parse_program(text);
}

const ir::MethodSig kF = ir::MethodSig::parse("A.f()->void");

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

index::CallSite site(const ir::IrProgram& p, const std::string& method, int line)
{
    auto s = index::call_site_at(p, ir::MethodSig::parse(method), line);
    REQUIRE(s);
    return *s;
}

std::set<std::string> sink_ids(const analysis::TaintResult& r)
{
    std::set<std::string> out;
    for (const auto& h: r.reached_sinks)
        out.insert(h.site.id());
    return out;
}

} // namespace

TEST_CASE("context window examples")
{
    auto const small = analysis::extract_context(nop_method(5), kF, 3);
    CHECK(small.start_line == 1);
    CHECK(small.end_line == 5);
    CHECK_FALSE(small.truncated_head);
    CHECK_FALSE(small.truncated_tail);
    CHECK(small.lines.front() == "1: nop");
    CHECK(small.lines.back() == "5: return");

    auto const big = nop_method(100);
    auto const mid = analysis::extract_context(big, kF, 50);
    CHECK(mid.start_line == 30);
    CHECK(mid.end_line == 70);
    CHECK(mid.width() == 41);
    CHECK(mid.lines.size() == 41);
    CHECK(mid.truncated_head);
    CHECK(mid.truncated_tail);

    auto const top = analysis::extract_context(big, kF, 5);
    CHECK(top.start_line == 1);
    CHECK(top.end_line == 25);
    CHECK_FALSE(top.truncated_head); // nothing above line 1 is hidden
    CHECK(top.truncated_tail);

    CHECK(code_of([&] { analysis::extract_context(big, kF, 0); }) == ErrorCode::InvalidSite);
    CHECK(code_of([&] { analysis::extract_context(big, kF, 101); }) == ErrorCode::InvalidSite);
    CHECK(code_of([&] { analysis::extract_context(big, ir::MethodSig::parse("A.g()->void"), 1); })
          == ErrorCode::InvalidSite);
}

TEST_CASE("context for a call site checks the callee")
{
    auto const p = ir::load_bundle_dir(kFixtures / "fx_smsleak").program;
    auto s = site(p, "com.brightlight.torch.SyncReceiver.relay(byte[])->void", 2);
    auto const w = analysis::extract_context(p, s);
    CHECK(w.site_line == 2);
    // The whole 19-line method fits inside the default radius.
    CHECK(w.width() == 19);
    CHECK_FALSE(w.truncated_head);
    CHECK_FALSE(w.truncated_tail);
    s.callee = ir::MethodSig::parse("x.Y.z()->void");
    CHECK(code_of([&] { analysis::extract_context(p, s); }) == ErrorCode::InvalidSite);
}

TEST_CASE("property: window width, containment and flags")
{
    for (int loc = 1; loc <= 60; ++loc)
    {
        auto const p = nop_method(loc);
        for (int line = 1; line <= loc; ++line)
            for (int radius: {0, 1, 5, 20})
            {
                auto const w = analysis::extract_context(p, kF, line, radius);
                REQUIRE(w.width() <= 2 * radius + 1);
                REQUIRE(w.start_line <= line);
                REQUIRE(line <= w.end_line);
                REQUIRE(w.start_line == std::max(1, line - radius));
                REQUIRE(w.end_line == std::min(loc, line + radius));
                REQUIRE(w.truncated_head == (w.start_line > 1));
                REQUIRE(w.truncated_tail == (w.end_line < loc));
            }
    }
}

TEST_CASE("entry catalog classification")
{
    auto const entries = analysis::EntryCatalog::load(kData / "entry_points.epc");
    ir::Manifest m;
    m.components.push_back({"a.Boot", ir::ComponentKind::Receiver, {"BOOT_COMPLETED"}, false});
    CHECK(entries.classify(ir::MethodSig::parse("a.Boot.onReceive()->void"), m) == analysis::EntryKind::SystemEvent);
    CHECK_FALSE(entries.classify(ir::MethodSig::parse("a.Other.onReceive()->void"), m));
    CHECK(entries.classify(ir::MethodSig::parse("a.Ui.onClick(android.view.View)->void"), m)
          == analysis::EntryKind::UserInteraction);
    CHECK(entries.classify(ir::MethodSig::parse("a.Ui.onCreate()->void"), m) == analysis::EntryKind::Lifecycle);
    CHECK_FALSE(entries.classify(ir::MethodSig::parse("a.Ui.helper()->void"), m));
    CHECK_THROWS_AS(analysis::EntryCatalog::parse("system:onReceive\n"), SyntaxError);
}

TEST_CASE("trigger chain from onClick itself")
{
    auto const p = ir::parse_program("class a.Ui {\n"
                                     "  method a.Ui.onClick(android.view.View)->void (v) {\n"
                                     "    x = call t.Src.read()->java.lang.String()\n    return\n  }\n}\n");
    auto const entries = analysis::EntryCatalog::load(kData / "entry_points.epc");
    auto const chains = analysis::trigger_paths(index::build_call_graph(p),
                                                ir::MethodSig::parse("a.Ui.onClick(android.view.View)->void"),
                                                entries, ir::Manifest{});
    REQUIRE(chains.size() == 1);
    CHECK(chains[0].path.size() == 1);
    CHECK(chains[0].entry_kind == analysis::EntryKind::UserInteraction);
}

TEST_CASE("boot receiver chain of length 3")
{
    auto const p = ir::parse_program("class a.BootReceiver {\n"
                                     "  method a.BootReceiver.onReceive()->void () {\n"
                                     "    call a.BootReceiver.helper()->void()\n    return\n  }\n"
                                     "  method a.BootReceiver.helper()->void () {\n"
                                     "    call a.BootReceiver.site()->void()\n    return\n  }\n"
                                     "  method a.BootReceiver.site()->void () {\n    return\n  }\n}\n");
    ir::Manifest m;
    m.components.push_back({"a.BootReceiver", ir::ComponentKind::Receiver, {"BOOT_COMPLETED"}, false});
    auto const entries = analysis::EntryCatalog::load(kData / "entry_points.epc");
    auto const g = index::build_call_graph(p);
    auto const chains = analysis::trigger_paths(g, ir::MethodSig::parse("a.BootReceiver.site()->void"), entries, m);
    REQUIRE(chains.size() == 1);
    CHECK(chains[0].path.size() == 3);
    CHECK(chains[0].entry_kind == analysis::EntryKind::SystemEvent);
    CHECK(chains[0].path.front().method_name == "onReceive");

    // Capped search leaves an Unknown chain at the depth frontier.
    auto const capped = analysis::trigger_paths(g, ir::MethodSig::parse("a.BootReceiver.site()->void"), entries, m, 1);
    REQUIRE(capped.size() == 1);
    CHECK(capped[0].entry_kind == analysis::EntryKind::Unknown);
    CHECK(capped[0].path.size() == 2);

    CHECK(code_of([&] { analysis::trigger_paths(g, ir::MethodSig::parse("a.X.y()->void"), entries, m); })
          == ErrorCode::UnknownMethod);
}

TEST_CASE("unreachable method yields an Unknown chain")
{
    auto const p = ir::parse_program("class a.Z {\n  method a.Z.orphan()->void () {\n    return\n  }\n}\n");
    auto const entries = analysis::EntryCatalog::load(kData / "entry_points.epc");
    auto const chains = analysis::trigger_paths(index::build_call_graph(p), ir::MethodSig::parse("a.Z.orphan()->void"),
                                                entries, ir::Manifest{});
    REQUIRE(chains.size() == 1);
    CHECK(chains[0].entry_kind == analysis::EntryKind::Unknown);
    auto const best = analysis::best_trigger(chains);
    REQUIRE(best);
    CHECK(best->entry_kind == analysis::EntryKind::Unknown);
}

TEST_CASE("property: trigger chains equal reverse path enumeration on random DAGs")
{
    testing::Rng rng(31);
    auto const entries = analysis::EntryCatalog::load(kData / "entry_points.epc");
    for (int trial = 0; trial < 60; ++trial)
    {
        auto const dag = testing::random_dag(rng, testing::uniform(rng, 1, 30));
        auto const g = index::build_call_graph(dag.program);
        auto const depth = testing::uniform(rng, 1, 10);
        dag.program.for_each_method(
            [&](const ir::ClassDef&, const ir::MethodDef& m)
            {
                auto const got = analysis::trigger_paths(g, m.sig, entries, dag.manifest, depth);
                auto const want = testing::trigger_oracle(dag.program, dag.manifest, entries, m.sig, depth);
                REQUIRE(got == want);
                for (const auto& chain: got)
                {
                    REQUIRE(chain.path.back() == m.sig);
                    REQUIRE(static_cast<int>(chain.depth()) <= depth);
                }
            });
    }
}

TEST_CASE("taint: unused source result")
{
    auto const p = ir::parse_program("class A {\n  method A.f()->void () {\n"
                                     "    x = call t.Src.read()->java.lang.String()\n"
                                     "    call t.Net.send(java.lang.String)->void(\"const\")\n"
                                     "    return\n  }\n}\n");
    auto const r = analysis::taint_reachability(p, site(p, "A.f()->void", 1), testing::gen_catalog());
    CHECK(r.reached_sinks.empty());
    CHECK_FALSE(r.hit());
}

TEST_CASE("taint: three-step witness through a copy")
{
    auto const p = ir::parse_program("class A {\n  method A.f()->void () {\n"
                                     "    x = call t.Src.read()->java.lang.String()\n"
                                     "    y = x\n"
                                     "    call t.Net.send(java.lang.String)->void(y)\n"
                                     "    return\n  }\n}\n");
    auto const src = site(p, "A.f()->void", 1);
    auto const r = analysis::taint_reachability(p, src, testing::gen_catalog());
    REQUIRE(r.reached_sinks.size() == 1);
    auto const& hit = r.reached_sinks[0];
    CHECK(hit.category == index::SinkCategory::Network);
    CHECK(hit.witness.size() == 3);
    CHECK(hit.depth == 0);
    CHECK(testing::replay_witness(p, testing::gen_catalog(), src, hit, 3).empty());
}

TEST_CASE("taint: cross-method flow into a storage sink at depth 1")
{
    auto const p = ir::parse_program("class A {\n"
                                     "  method A.a()->void () {\n"
                                     "    x = call t.Src.read()->java.lang.String()\n"
                                     "    call A.b(java.lang.String)->void(x)\n"
                                     "    return\n  }\n"
                                     "  method A.b(java.lang.String)->void (s) {\n"
                                     "    k = const \"key\"\n"
                                     "    call t.Disk.write(java.lang.String,java.lang.String)->void(k, s)\n"
                                     "    return\n  }\n}\n");
    auto const src = site(p, "A.a()->void", 1);
    auto const cat = testing::gen_catalog();
    auto const r = analysis::taint_reachability(p, src, cat);
    REQUIRE(r.reached_sinks.size() == 1);
    CHECK(r.reached_sinks[0].depth == 1);
    CHECK(r.reached_sinks[0].category == index::SinkCategory::Storage);
    CHECK(r.searched_depth == 1);
    CHECK(testing::replay_witness(p, cat, src, r.reached_sinks[0], 3).empty());
    CHECK(sink_ids(r) == testing::taint_oracle(p, cat, src.method, src.line, 3));

    // With no depth budget the callee is not entered.
    CHECK(analysis::taint_reachability(p, src, cat, 0).reached_sinks.empty());
}

TEST_CASE("taint: return values flow back to the calling site")
{
    auto const p = ir::parse_program("class A {\n"
                                     "  method A.a()->void () {\n"
                                     "    x = call t.Src.read()->java.lang.String()\n"
                                     "    y = call A.id(java.lang.String)->java.lang.String(x)\n"
                                     "    call t.Tel.sms(java.lang.String)->void(y)\n"
                                     "    return\n  }\n"
                                     "  method A.id(java.lang.String)->java.lang.String (s) {\n"
                                     "    return s\n  }\n}\n");
    auto const src = site(p, "A.a()->void", 1);
    auto const cat = testing::gen_catalog();
    auto const r = analysis::taint_reachability(p, src, cat);
    REQUIRE(r.reached_sinks.size() == 1);
    using analysis::StepKind;
    std::vector<StepKind> kinds;
    for (const auto& s: r.reached_sinks[0].witness)
        kinds.push_back(s.kind);
    CHECK(kinds == std::vector<StepKind>{StepKind::Source, StepKind::CallArg, StepKind::Param, StepKind::Return,
                                         StepKind::CallResult, StepKind::SinkArg});
    CHECK(testing::replay_witness(p, cat, src, r.reached_sinks[0], 3).empty());
}

TEST_CASE("taint: reassignment kills and library calls do not propagate")
{
    auto const p = ir::parse_program("class A {\n  method A.f()->void () {\n"
                                     "    x = call t.Src.read()->java.lang.String()\n"
                                     "    h = call t.Util.hash(java.lang.String)->java.lang.String(x)\n"
                                     "    call t.Net.send(java.lang.String)->void(h)\n"
                                     "    x = const \"clean\"\n"
                                     "    call t.Net.send(java.lang.String)->void(x)\n"
                                     "    return\n  }\n}\n");
    auto const r = analysis::taint_reachability(p, site(p, "A.f()->void", 1), testing::gen_catalog());
    CHECK(r.reached_sinks.empty());
}

TEST_CASE("taint: branches join")
{
    auto const p = ir::parse_program("class A {\n  method A.f(java.lang.String)->void (c) {\n"
                                     "    x = call t.Src.read()->java.lang.String()\n"
                                     "    if c goto 4\n"
                                     "    x = const \"clean\"\n"
                                     "    call t.Net.send(java.lang.String)->void(x)\n"
                                     "    return\n  }\n}\n");
    auto const r = analysis::taint_reachability(p, site(p, "A.f(java.lang.String)->void", 1), testing::gen_catalog());
    CHECK(r.reached_sinks.size() == 1);
}

TEST_CASE("taint: invalid sources")
{
    auto const p = ir::parse_program("class A {\n  method A.f()->void () {\n"
                                     "    call t.Src.read()->java.lang.String()\n"
                                     "    nop\n    return\n  }\n}\n");
    auto const cat = testing::gen_catalog();
    auto s = site(p, "A.f()->void", 1);
    CHECK(code_of([&] { analysis::taint_reachability(p, s, cat); }) == ErrorCode::NoResultVariable);
    s.line = 2;
    CHECK(code_of([&] { analysis::taint_reachability(p, s, cat); }) == ErrorCode::NotAnInvoke);
    s.line = 9;
    CHECK(code_of([&] { analysis::taint_reachability(p, s, cat); }) == ErrorCode::InvalidSite);
}

TEST_CASE("taint on fx_smsleak reaches the network sink through the uploader")
{
    auto const p = ir::load_bundle_dir(kFixtures / "fx_smsleak").program;
    auto const cat = index::ApiCatalog::load(kData / "system_apis.cat");
    auto const relay = "com.brightlight.torch.SyncReceiver.relay(byte[])->void";
    auto const body = analysis::taint_reachability(p, site(p, relay, 2), cat);
    REQUIRE(body.reached_sinks.size() == 1);
    CHECK(body.reached_sinks[0].category == index::SinkCategory::Network);
    CHECK(body.reached_sinks[0].site.method.method_name == "push");
    CHECK(body.reached_sinks[0].witness.size() == 5);
    CHECK(testing::replay_witness(p, cat, site(p, relay, 2), body.reached_sinks[0], 3).empty());

    CHECK(analysis::taint_reachability(p, site(p, relay, 1), cat).reached_sinks.empty());
    CHECK(analysis::taint_reachability(p, site(p, relay, 3), cat).reached_sinks.empty());
}

TEST_CASE("property: taint equals the exhaustive oracle and witnesses replay")
{
    testing::Rng rng(47);
    auto const cat = testing::gen_catalog();
    int checked = 0;
    for (int trial = 0; trial < 80; ++trial)
    {
        auto const p = testing::random_program(rng, {.max_classes = 3, .max_methods = 10, .max_lines = 25,
                                                     .max_statements = 200, .call_percent = 45});
        for (const auto& [method, line]: testing::source_sites(p, cat))
        {
            auto const depth = testing::uniform(rng, 0, 3);
            auto const src = *index::call_site_at(p, method, line);
            auto const r = analysis::taint_reachability(p, src, cat, depth);
            REQUIRE(sink_ids(r) == testing::taint_oracle(p, cat, method, line, depth));
            for (const auto& hit: r.reached_sinks)
            {
                auto const why = testing::replay_witness(p, cat, src, hit, depth);
                INFO(ir::render_program(p));
                REQUIRE_MESSAGE(why.empty(), why);
            }
            ++checked;
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("slice examples")
{
    auto const p = ir::parse_program("class A {\n  method A.f()->java.lang.String () {\n"
                                     "    a = const 1\n    b = const 2\n    c = a\n    return c\n  }\n}\n");
    auto const f = ir::MethodSig::parse("A.f()->java.lang.String");
    auto const s = analysis::backward_slice(p, f, 3, "c");
    CHECK(s.kept_lines == std::vector<int>{1, 3});
    CHECK(s.removed_count == 2);

    auto const own = analysis::backward_slice(p, f, 1, "a");
    CHECK(own.kept_lines == std::vector<int>{1});

    CHECK(code_of([&] { analysis::backward_slice(p, f, 2, "c"); }) == ErrorCode::InvalidTarget);
    CHECK(code_of([&] { analysis::backward_slice(p, f, 40, "c"); }) == ErrorCode::InvalidTarget);
    CHECK(analysis::render_slice(p, s) == std::vector<std::string>{"1: a = const 1", "3: c = a"});
}

TEST_CASE("slice keeps governing branches and all reaching definitions")
{
    auto const p = ir::parse_program("class A {\n  method A.f(java.lang.String)->java.lang.String (p) {\n"
                                     "    x = const 1\n"     // 1
                                     "    if p goto 4\n"     // 2
                                     "    x = const 2\n"     // 3
                                     "    y = x\n"           // 4
                                     "    z = const 9\n"     // 5
                                     "    return y\n  }\n}\n");
    auto const s = analysis::backward_slice(p, ir::MethodSig::parse("A.f(java.lang.String)->java.lang.String"), 6, "y");
    CHECK(s.kept_lines == std::vector<int>{1, 2, 3, 4, 6});
    CHECK(s.removed_count == 1);
}

TEST_CASE("property: straight-line slices equal the def-use closure")
{
    testing::Rng rng(59);
    auto const sig = ir::MethodSig::parse("gen.Line.run(java.lang.String,java.lang.String)->java.lang.String");
    for (int trial = 0; trial < 100; ++trial)
    {
        auto const p = testing::random_straight_line(rng, testing::uniform(rng, 1, 100));
        auto const& m = *p.find_method(sig);
        auto const line = testing::uniform(rng, 1, m.loc());
        auto const* stmt = m.at(line);
        std::vector<std::string> vars = stmt->uses();
        if (auto d = stmt->def())
            vars.push_back(*d);
        if (vars.empty())
            continue;
        auto const s = analysis::backward_slice(p, sig, line, vars.front());
        REQUIRE(s.kept_lines == testing::straight_line_slice(m, line));
        CHECK(s.removed_count == m.loc() - static_cast<int>(s.kept_lines.size()));
    }
}

TEST_CASE("property: slice closure holds on generated programs with branches")
{
    testing::Rng rng(61);
    for (int trial = 0; trial < 100; ++trial)
    {
        auto const p = testing::random_program(rng, {.max_classes = 1, .max_methods = 3, .max_lines = 40,
                                                     .branch_percent = 20});
        p.for_each_method(
            [&](const ir::ClassDef&, const ir::MethodDef& m)
            {
                for (const auto& stmt: m.body)
                {
                    auto const uses = stmt.uses();
                    if (uses.empty())
                        continue;
                    auto const s = analysis::backward_slice(p, m.sig, stmt.line, uses.front());
                    std::set<int> kept(s.kept_lines.begin(), s.kept_lines.end());
                    REQUIRE(kept.count(stmt.line));
                    // Every definition that can reach a kept use along a CFG path is kept.
                    for (auto k: s.kept_lines)
                        for (const auto& var: m.at(k)->uses())
                            for (const auto& d: m.body)
                            {
                                if (d.def() != var || kept.count(d.line))
                                    continue;
                                // d must not reach k without an intervening redefinition.
                                std::set<int> seen;
                                std::vector<int> work = ir::successors(m, d.line);
                                bool reaches = false;
                                while (!work.empty() && !reaches)
                                {
                                    auto const l = work.back();
                                    work.pop_back();
                                    if (!seen.insert(l).second)
                                        continue;
                                    if (l == k)
                                        reaches = true;
                                    else if (m.at(l)->def() != var)
                                        for (auto n: ir::successors(m, l))
                                            work.push_back(n);
                                }
                                REQUIRE_FALSE(reaches);
                            }
                }
            });
    }
}
