// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include <apktriage/error.hpp>
#include <apktriage/ir/bundle.hpp>
#include <apktriage/ir/loc_stats.hpp>

#include <filesystem>

using namespace apktriage;

namespace
{

const std::filesystem::path kFixtures = APKTRIAGE_FIXTURE_DIR;

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

bool has_kind(const std::vector<ir::Diagnostic>& diags, ir::DiagnosticKind kind)
{
    return std::any_of(diags.begin(), diags.end(), [&](const ir::Diagnostic& d) { return d.kind == kind; });
}

} // namespace

TEST_CASE("signatures render canonically and round-trip")
{
    auto const sig = ir::MethodSig::parse("  a.b.C.run( int , java.lang.String )->void");
    CHECK(sig.class_name == "a.b.C");
    CHECK(sig.method_name == "run");
    CHECK(sig.param_types == std::vector<std::string>{"int", "java.lang.String"});
    CHECK(sig.str() == "a.b.C.run(int,java.lang.String)->void");
    CHECK(ir::MethodSig::parse(sig.str()) == sig);
    CHECK(ir::MethodSig::parse("a.B.<init>()->void").method_name == "<init>");
    CHECK(ir::MethodSig::parse("p.Q$Inner.f(byte[])->byte[]").return_type == "byte[]");

    CHECK_THROWS_AS(ir::MethodSig::parse("noclass()->void"), SyntaxError);
    CHECK_THROWS_AS(ir::MethodSig::parse("a.B.f(int"), SyntaxError);
    CHECK_THROWS_AS(ir::MethodSig::parse("a.B.f(int)"), SyntaxError);
}

TEST_CASE("empty program with a one-line manifest")
{
    auto const bundle = ir::parse_bundle("package: a\n", "");
    CHECK(bundle.app_id == "a");
    CHECK(bundle.program.classes.empty());
    CHECK(bundle.diagnostics.empty());
}

TEST_CASE("fx_smsleak fixture has 3 classes and 7 methods")
{
    auto const bundle = ir::load_bundle_dir(kFixtures / "fx_smsleak");
    CHECK(bundle.app_id == "fx_smsleak");
    CHECK(bundle.program.classes.size() == 3);
    CHECK(bundle.program.method_count() == 7);
    CHECK(bundle.diagnostics.empty());
}

TEST_CASE("every committed fixture is well-formed")
{
    for (auto const* name: {"fx_smsleak", "fx_spyloc", "fx_contacts", "fx_clean", "fx_notes", "fx_photo"})
    {
        CAPTURE(name);
        auto const bundle = ir::load_bundle_dir(kFixtures / name);
        CHECK(ir::validate(bundle).empty());
    }
}

TEST_CASE("branch target past the end of the method")
{
    auto const text = "class A {\n"
                      "  method A.f()->void () {\n"
                      "    nop\n    nop\n    goto 99\n    nop\n    return\n"
                      "  }\n}\n";
    CHECK(code_of([&] { ir::parse_program(text); }) == ErrorCode::BadBranchTarget);
}

TEST_CASE("duplicate signatures are rejected")
{
    auto const text = "class A {\n"
                      "  method A.f()->void () {\n    return\n  }\n"
                      "  method A.f()->void () {\n    return\n  }\n}\n";
    CHECK(code_of([&] { ir::parse_program(text); }) == ErrorCode::DuplicateSignature);
}

TEST_CASE("syntax errors carry the offending line")
{
    try
    {
        ir::parse_program("class A {\n  method A.f()->void () {\n    x = = y\n  }\n}\n");
        FAIL("expected SyntaxError");
    }
    catch (const SyntaxError& e)
    {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(ir::parse_program("class A {\n  method B.f()->void () {\n    return\n  }\n}\n"), SyntaxError);
    CHECK_THROWS_AS(ir::parse_program("class A {\n  method A.f(int)->void () {\n    return\n  }\n}\n"),
                    SyntaxError);
    CHECK_THROWS_AS(ir::parse_program("class A {\n"), SyntaxError);
    CHECK_THROWS_AS(ir::parse_manifest("package: a\nflavour: sweet\n"), SyntaxError);
    CHECK_THROWS_AS(ir::parse_manifest("component:Widget:a.B\n"), SyntaxError);
}

TEST_CASE("comments and string literals")
{
    auto const p = ir::parse_program("# header\nclass A { # trailing\n"
                                     "  method A.f()->void () {\n"
                                     "    s = const \"a # not a comment\"  # but this is\n"
                                     "    return\n  }\n}\n");
    auto const& stmt = p.classes.at(0).methods.at(0).body.at(0);
    CHECK(stmt.render() == "s = const \"a # not a comment\"");
}

TEST_CASE("manifest parsing")
{
    auto const m = ir::parse_manifest("package: com.x\n"
                                      "category: flashlight tool\n"
                                      "description: bright\n"
                                      "permission:android.permission.READ_SMS\n"
                                      "permission:INTERNET\n"
                                      "component:Receiver:com.x.R:action=BOOT_COMPLETED,SMS_RECEIVED:exported\n"
                                      "component:Activity:com.x.Main\n");
    CHECK(m.package == "com.x");
    CHECK(m.category == "flashlight tool");
    CHECK(m.permissions == std::vector<std::string>{"READ_SMS", "INTERNET"});
    REQUIRE(m.components.size() == 2);
    CHECK(m.components[0].kind == ir::ComponentKind::Receiver);
    CHECK(m.components[0].intent_actions == std::vector<std::string>{"BOOT_COMPLETED", "SMS_RECEIVED"});
    CHECK(m.components[0].exported);
    CHECK_FALSE(m.components[1].exported);
    CHECK(ir::parse_manifest(ir::render_manifest(m)) == m);
}

TEST_CASE("validate reports unresolved components and use-before-def")
{
    auto const ir_text = "class com.x.Main {\n"
                         "  method com.x.Main.onCreate(android.os.Bundle)->void (state) {\n"
                         "    y = x\n"
                         "    return\n  }\n}\n";
    auto const bundle = ir::parse_bundle("package: com.x\ncomponent:Service:com.x.Missing\n"
                                         "component:Activity:com.x.Main\n",
                                         ir_text);
    CHECK(has_kind(bundle.diagnostics, ir::DiagnosticKind::UnresolvedComponent));
    CHECK(has_kind(bundle.diagnostics, ir::DiagnosticKind::UseBeforeDef));
    CHECK(bundle.diagnostics.size() == 2);
    CHECK(bundle.has_errors());

    auto const dup = ir::parse_bundle("package: q\npermission:CAMERA\npermission:CAMERA\n", "");
    CHECK(has_kind(dup.diagnostics, ir::DiagnosticKind::DuplicatePermission));
}

TEST_CASE("validate flags in-program calls with the wrong argument count")
{
    auto const p = ir::parse_program("class A {\n"
                                     "  method A.f(int)->void (n) {\n    return\n  }\n"
                                     "  method A.g()->void () {\n    call A.f(int)->void()\n    return\n  }\n}\n");
    auto const diags = ir::validate_program(p);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].kind == ir::DiagnosticKind::ArgCountMismatch);
    CHECK(diags[0].line == 1);
}

TEST_CASE("validate does not mutate its input")
{
    auto const bundle = ir::parse_bundle("package: a\ncomponent:Service:a.Gone\n", "");
    auto const copy = bundle;
    (void)ir::validate(bundle);
    CHECK(copy.program == bundle.program);
    CHECK(copy.manifest == bundle.manifest);
}

TEST_CASE("percentile definition examples")
{
    ir::LocDistribution d({10, 20, 30, 40, 50, 60, 70, 80, 90, 100});
    CHECK(d.percentile(80) == 80);
    CHECK(d.percentile(100) == 100);
    CHECK(d.percentile(0) == 10);

    ir::LocDistribution single({7});
    CHECK(single.percentile(50) == 7);
    CHECK(single.percentile(100) == 7);

    CHECK_THROWS_AS(ir::LocDistribution({}), Error);
    CHECK(code_of([] { ir::loc_stats(ir::IrProgram{}); }) == ErrorCode::EmptyProgram);
}

TEST_CASE("histogram buckets cover every method")
{
    ir::LocDistribution d({1, 2, 5, 10, 11, 31});
    auto const buckets = d.histogram(10);
    REQUIRE(buckets.size() == 4);
    CHECK(buckets[0].lo == 1);
    CHECK(buckets[0].hi == 10);
    CHECK(buckets[0].count == 4);
    CHECK(buckets[3].count == 1);
    std::size_t total = 0;
    for (const auto& b: buckets)
        total += b.count;
    CHECK(total == d.count());
}

TEST_CASE("fixture corpus percentiles match the sort-and-index oracle")
{
    std::vector<ir::IrProgram> programs;
    for (auto const* name: {"fx_smsleak", "fx_spyloc", "fx_contacts", "fx_clean", "fx_notes", "fx_photo"})
        programs.push_back(ir::load_bundle_dir(kFixtures / name).program);
    std::vector<const ir::IrProgram*> ptrs;
    std::vector<int> locs;
    for (const auto& p: programs)
    {
        ptrs.push_back(&p);
        p.for_each_method([&](const ir::ClassDef&, const ir::MethodDef& m) { locs.push_back(m.loc()); });
    }
    auto const d = ir::loc_stats(ptrs);
    CHECK(d.count() == locs.size());
    for (int p = 0; p <= 100; ++p)
        CHECK(d.percentile(p) == testing::percentile_oracle(locs, p));
}

TEST_CASE("property: percentile equals the oracle and is monotone")
{
    testing::Rng rng(11);
    for (int trial = 0; trial < 60; ++trial)
    {
        auto const n = testing::uniform(rng, 1, trial < 50 ? 300 : 10000);
        std::vector<int> values(static_cast<std::size_t>(n));
        for (auto& v: values)
            v = testing::uniform(rng, 1, 400);
        ir::LocDistribution d(values);
        int prev = 0;
        for (int p = 0; p <= 100; ++p)
        {
            auto const got = d.percentile(p);
            REQUIRE(got == testing::percentile_oracle(values, p));
            REQUIRE(got >= prev);
            prev = got;
        }
        CHECK(d.percentile(100) == *std::max_element(values.begin(), values.end()));
    }
}

TEST_CASE("property: render(parse(x)) is canonical and generated programs validate")
{
    testing::Rng rng(5);
    for (int trial = 0; trial < 200; ++trial)
    {
        auto const program = testing::random_program(rng, {});
        CHECK(ir::validate_program(program).empty());
        auto const text = ir::render_program(program);
        auto const parsed = ir::parse_program(text);
        REQUIRE(parsed == program);
        CHECK(ir::render_program(parsed) == text);
        CHECK(ir::normalize_program_text(text) == text);
    }
}

TEST_CASE("normalization canonicalises whitespace and signatures")
{
    auto const messy = "class   A   extends B{\n"
                       "method A.f( int ,java.lang.String)->void (n,s){\n"
                       "x=const  5\n"
                       "call  A.f(int, java.lang.String)->void( x ,  s )\n"
                       "return\n"
                       "}\n"
                       "}\n";
    auto const canonical = "class A extends B {\n"
                           "    method A.f(int,java.lang.String)->void (n, s) {\n"
                           "        x = const 5\n"
                           "        call A.f(int,java.lang.String)->void(x, s)\n"
                           "        return\n"
                           "    }\n"
                           "}\n";
    CHECK(ir::normalize_program_text(messy) == canonical);
    CHECK(ir::normalize_program_text(canonical) == canonical);
}
