#include <string>
#include <vector>

#include "doctest.h"
#include "hlsdiff/input.hpp"
#include "hlsdiff/interp.hpp"
#include "hlsdiff/parser.hpp"
#include "hlsdiff/printer.hpp"
#include "hlsdiff/rng.hpp"
#include "hlsdiff/slicer.hpp"
#include "hlsdiff/spectra.hpp"

using namespace hlsdiff;

namespace {

TestInput random_input(const FormatConstraints& fmt, Rng& rng) {
    TestInput in;
    for (auto& slot : fmt.slots) {
        InputEntry e;
        e.rank = slot.rank;
        int64_t count = 1;
        if (slot.rank == 1) count = slot.len;
        if (slot.rank == 2) {
            e.rows = slot.rows;
            e.cols = slot.cols;
            count = slot.rows * slot.cols;
        }
        for (int64_t i = 0; i < count; ++i) {
            if (slot.real)
                e.values.push_back(Num::of_real(rng.range(-4000, 4000) / 16.0));
            else {
                auto [lo, hi] = integer_bounds(slot);
                e.values.push_back(Num::of_int(rng.range(lo, hi)));
            }
        }
        in.entries.push_back(e);
    }
    return in;
}

}  // namespace

TEST_CASE("instrumentation never changes behavior") {
    const char* sources[] = {
        "fn main(data: int[8]): int {\n"
        "    let sum: int = 0;\n"
        "    @width(sum, 9, unsigned)\n"
        "    acc: for (let i: int = 0; i < len(data); i = i + 1) {\n"
        "        sum = sum + data[i];\n    }\n    return sum;\n}\n",
        "fn main(a: int[4], k: int): int {\n"
        "    @unroll(go, 2)\n"
        "    go: for (let i: int = 1; i < 4; i = i + 1) {\n"
        "        a[i] = a[i] + a[i - 1] * k;\n    }\n    return a[3];\n}\n",
    };
    Rng rng(424242);
    for (auto* src : sources) {
        Program plain = parse_program(src);
        SliceResult slice = backward_slice(plain, "main.return");
        Program probed = instrument(plain, slice.members);
        CHECK(probed.instrumented);

        FormatConstraints fmt = constraints_for(plain);
        HardwareConfig hc = derive_hw_config(plain);
        for (int t = 0; t < 50; ++t) {
            TestInput in = random_input(fmt, rng);
            ExecTrace sw_a = run_software(plain, in);
            ExecTrace sw_b = run_software(probed, in);
            CHECK(sw_a.status == sw_b.status);
            CHECK(sw_a.outputs_equal(sw_b));

            ExecTrace hw_a = run_hardware(plain, hc, in);
            ExecTrace hw_b = run_hardware(probed, hc, in);
            CHECK(hw_a.status == hw_b.status);
            CHECK(hw_a.outputs_equal(hw_b));
        }
    }
}

TEST_CASE("instrument rejects unknown key variables") {
    Program p = parse_program("fn main(x: int): int {\n    return x;\n}\n");
    CHECK_THROWS_AS(instrument(p, {"main.ghost"}), UnknownVariable);
}

TEST_CASE("value spectra collapse writes into an interval") {
    Program p = parse_program(
        "fn main(a: int, b: int, c: int): int {\n"
        "    let x: int = a;\n"
        "    x = b;\n"
        "    x = c;\n"
        "    return x;\n}\n");
    Program probed = instrument(p, {"main.x"});
    SymbolTable syms = build_symbols(p);

    TestInput in;
    for (int64_t v : {14, 2, 20}) {
        InputEntry e;
        e.rank = 0;
        e.values = {Num::of_int(v)};
        in.entries.push_back(e);
    }
    ExecTrace t = run_software(probed, in);
    SpectraRecord rec = collect_spectra(t, {"main.x"}, syms);
    REQUIRE(rec.val.count("main.x") == 1);
    CHECK(rec.val.at("main.x").lo.i == 2);
    CHECK(rec.val.at("main.x").hi.i == 20);
}

TEST_CASE("offset, loop, stack and fifo spectra are recorded") {
    Program p = parse_program(
        "chan q;\n"
        "@stack_limit(echo, 16)\n"
        "fn echo(v: int): int {\n"
        "    if (v <= 0) {\n        return 0;\n    }\n"
        "    return echo(v - 1);\n}\n"
        "fn main(data: int[4]): int {\n"
        "    let s: int = 0;\n"
        "    walk: for (let i: int = 0; i < 4; i = i + 1) {\n"
        "        s = s + data[i];\n"
        "        push(q, data[i]);\n    }\n"
        "    s = s + echo(3) + pop(q);\n"
        "    return s;\n}\n");
    SliceResult slice = backward_slice(p, "main.return");
    Program probed = instrument(p, slice.members);
    SymbolTable syms = build_symbols(p);
    FormatConstraints fmt = constraints_for(p);

    ExecTrace t = run_software(probed, synthesize_seed(fmt));
    SpectraRecord rec = collect_spectra(t, slice.members, syms);

    REQUIRE(rec.offset.count("main.data") == 1);
    CHECK(rec.offset.at("main.data").lo.i == 0);
    CHECK(rec.offset.at("main.data").hi.i == 3);
    REQUIRE(rec.loop.count("main.walk") == 1);
    CHECK(rec.loop.at("main.walk") == 4);
    REQUIRE(rec.stack.count("echo") == 1);
    CHECK(rec.stack.at("echo") == 4);
    REQUIRE(rec.fifo.count("q") == 1);
    CHECK(rec.fifo.at("q") == 4);
}

TEST_CASE("spectra categories can be disabled one by one") {
    Program p = parse_program(
        "fn main(data: int[4]): int {\n"
        "    let s: int = 0;\n"
        "    walk: for (let i: int = 0; i < 4; i = i + 1) {\n"
        "        s = s + data[i];\n    }\n    return s;\n}\n");
    SliceResult slice = backward_slice(p, "main.return");
    Program probed = instrument(p, slice.members);
    SymbolTable syms = build_symbols(p);
    ExecTrace t = run_software(probed, synthesize_seed(constraints_for(p)));

    SpectraConfig cfg;
    cfg.val = false;
    cfg.loop = false;
    SpectraRecord rec = collect_spectra(t, slice.members, syms, cfg);
    CHECK(rec.val.empty());
    CHECK(rec.loop.empty());
    CHECK(!rec.offset.empty());
}

TEST_CASE("merge unions intervals and maxes counters") {
    SpectraRecord a, b;
    a.val["x"].include(Num::of_int(5));
    a.loop["l"] = 3;
    b.val["x"].include(Num::of_int(-2));
    b.val["y"].include(Num::of_int(9));
    b.loop["l"] = 7;
    b.stack["f"] = 2;

    merge_spectra(a, b);
    CHECK(a.val.at("x").lo.i == -2);
    CHECK(a.val.at("x").hi.i == 5);
    CHECK(a.val.at("y").hi.i == 9);
    CHECK(a.loop.at("l") == 7);
    CHECK(a.stack.at("f") == 2);
}

TEST_CASE("feedback rows are name-sorted and carry bounds") {
    SpectraRecord rec;
    rec.val["main.z"].include(Num::of_int(4));
    rec.val["main.z"].include(Num::of_int(-1));
    rec.val["main.a"].include(Num::of_int(10));
    rec.types["main.z"] = TypeSpec::integer(32, true);
    rec.types["main.a"] = TypeSpec::integer(32, true);

    FeedbackArray rows = feedback_array(rec);
    REQUIRE(rows.size() >= 2);
    CHECK(rows[0].name == "main.a");
    CHECK(rows[1].name == "main.z");
    CHECK(rows[1].lo.i == -1);
    CHECK(rows[1].hi.i == 4);
    CHECK(!feedback_to_text(rows).empty());
}

TEST_CASE("comparing a trace against itself reports nothing") {
    Program p = parse_program(
        "fn main(x: int): int {\n    let y: int = x * 2;\n    return y;\n}\n");
    Program probed = instrument(p, {"main.y"});
    SymbolTable syms = build_symbols(p);
    TestInput in = synthesize_seed(constraints_for(p));

    ExecTrace t = run_software(probed, in);
    SpectraRecord rec = collect_spectra(t, {"main.y"}, syms);
    DiscrepancyReport dr =
        compare_spectra(t, rec, t, rec, derive_hw_config(p));
    CHECK(!dr.discrepant());
    CHECK(dr.classes().empty());
}

TEST_CASE("traces from different inputs refuse to compare") {
    Program p = parse_program("fn main(x: int): int {\n    return x;\n}\n");
    SymbolTable syms = build_symbols(p);
    FormatConstraints fmt = constraints_for(p);

    TestInput a, b;
    InputEntry e;
    e.rank = 0;
    e.values = {Num::of_int(1)};
    a.entries.push_back(e);
    e.values = {Num::of_int(2)};
    b.entries.push_back(e);

    ExecTrace ta = run_software(p, a);
    ExecTrace tb = run_software(p, b);
    SpectraRecord ra = collect_spectra(ta, {}, syms);
    SpectraRecord rb = collect_spectra(tb, {}, syms);
    CHECK_THROWS_AS(compare_spectra(ta, ra, tb, rb, HardwareConfig{}),
                    InputMismatch);
}

TEST_CASE("equivalent out-of-bounds faults on both sides stay silent") {
    Program p = parse_program(
        "@static_array(main.buf, 4)\n"
        "fn main(k: int): int {\n"
        "    let buf: int[];\n"
        "    buf[k] = 1;\n    return buf[0];\n}\n");
    SliceResult slice = backward_slice(p, "main.return");
    Program probed = instrument(p, slice.members);
    SymbolTable syms = build_symbols(p);
    HardwareConfig hc = derive_hw_config(p);

    TestInput in;
    InputEntry e;
    e.rank = 0;
    e.values = {Num::of_int(-3)};
    in.entries.push_back(e);

    ExecTrace sw = run_software(probed, in);
    ExecTrace hw = run_hardware(probed, hc, in);
    REQUIRE(sw.status == RunStatus::Faulted);
    REQUIRE(hw.status == RunStatus::Faulted);

    SpectraRecord rs = collect_spectra(sw, slice.members, syms);
    SpectraRecord rh = collect_spectra(hw, slice.members, syms);
    DiscrepancyReport dr = compare_spectra(sw, rs, hw, rh, hc);
    CHECK(!dr.discrepant());
}

TEST_CASE("classic divergences classify by priority") {
    SUBCASE("narrow accumulator reports overflow, not output mismatch") {
        Program p = parse_program(
            "fn main(data: int[2]): int {\n"
            "    let sum: int = 0;\n"
            "    @width(sum, 9, unsigned)\n"
            "    acc: for (let i: int = 0; i < len(data); i = i + 1) {\n"
            "        sum = sum + data[i];\n    }\n    return sum;\n}\n");
        SliceResult slice = backward_slice(p, "main.return");
        Program probed = instrument(p, slice.members);
        SymbolTable syms = build_symbols(p);
        HardwareConfig hc = derive_hw_config(p);

        TestInput in;
        InputEntry e;
        e.rank = 1;
        e.values = {Num::of_int(400), Num::of_int(300)};
        in.entries.push_back(e);

        ExecTrace sw = run_software(probed, in);
        ExecTrace hw = run_hardware(probed, hc, in);
        SpectraRecord rs = collect_spectra(sw, slice.members, syms);
        SpectraRecord rh = collect_spectra(hw, slice.members, syms);
        DiscrepancyReport dr = compare_spectra(sw, rs, hw, rh, hc);
        REQUIRE(dr.discrepant());
        CHECK(dr.has(Symptom::Overflow));
        CHECK(!dr.has(Symptom::OutputMismatch));
    }
    SUBCASE("hardware stack fault reports stack overflow") {
        Program p = parse_program(
            "@stack_limit(count, 4)\n"
            "fn count(v: int): int {\n"
            "    if (v <= 0) {\n        return 0;\n    }\n"
            "    return 1 + count(v - 1);\n}\n"
            "fn main(n: int): int {\n    return count(n);\n}\n");
        SliceResult slice = backward_slice(p, "main.return");
        Program probed = instrument(p, slice.members);
        SymbolTable syms = build_symbols(p);
        HardwareConfig hc = derive_hw_config(p);

        TestInput in;
        InputEntry e;
        e.rank = 0;
        e.values = {Num::of_int(30)};
        in.entries.push_back(e);

        ExecTrace sw = run_software(probed, in);
        ExecTrace hw = run_hardware(probed, hc, in);
        SpectraRecord rs = collect_spectra(sw, slice.members, syms);
        SpectraRecord rh = collect_spectra(hw, slice.members, syms);
        DiscrepancyReport dr = compare_spectra(sw, rs, hw, rh, hc);
        REQUIRE(dr.discrepant());
        CHECK(dr.has(Symptom::StackOverflow));
    }
}
