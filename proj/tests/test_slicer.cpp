#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "hlsdiff/parser.hpp"
#include "hlsdiff/rng.hpp"
#include "hlsdiff/slicer.hpp"

using namespace hlsdiff;

namespace {

// independent oracle: breadth-first reachability over reversed edges
std::set<std::string> reversed_reach(const DepGraph& g, const std::string& start) {
    std::set<std::string> seen{start};
    std::deque<std::string> work{start};
    while (!work.empty()) {
        std::string cur = work.front();
        work.pop_front();
        auto it = g.preds.find(cur);
        if (it == g.preds.end()) continue;
        for (auto& src : it->second)
            if (seen.insert(src).second) work.push_back(src);
    }
    return seen;
}

DepGraph random_graph(Rng& rng, int max_nodes) {
    DepGraph g;
    int n = static_cast<int>(rng.range(1, max_nodes));
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
        names.push_back("v" + std::to_string(i));
        g.nodes.insert(names.back());
    }
    int edges = static_cast<int>(rng.range(0, 3 * n));
    for (int e = 0; e < edges; ++e) {
        // self-loops and cycles are allowed on purpose
        std::string src = names[rng.below(static_cast<uint64_t>(n))];
        std::string dst = names[rng.below(static_cast<uint64_t>(n))];
        g.preds[dst].insert(src);
        g.succs[src].insert(dst);
    }
    return g;
}

const Program& dummy_program() {
    static Program p = parse_program("fn main(): int {\n    return 0;\n}\n");
    return p;
}

}  // namespace

TEST_CASE("slice equals brute-force reversed reachability on 100 random graphs") {
    Rng rng(811);
    for (int t = 0; t < 100; ++t) {
        DepGraph g = random_graph(rng, 12);
        std::string target =
            "v" + std::to_string(rng.below(static_cast<uint64_t>(g.nodes.size())));

        SliceResult s = backward_slice(g, dummy_program(), target);
        std::set<std::string> expect = reversed_reach(g, target);

        std::set<std::string> got(s.members.begin(), s.members.end());
        REQUIRE(got == expect);

        // frontier = members with no in-slice feeders
        for (auto& m : s.members) {
            auto it = g.preds.find(m);
            bool fed = it != g.preds.end() && !it->second.empty();
            bool in_frontier =
                std::find(s.frontier.begin(), s.frontier.end(), m) != s.frontier.end();
            CHECK(in_frontier == !fed);
        }
        CHECK(std::is_sorted(s.members.begin(), s.members.end()));
        CHECK(std::is_sorted(s.frontier.begin(), s.frontier.end()));
    }
}

TEST_CASE("slice of a missing node throws") {
    DepGraph g;
    g.nodes.insert("v0");
    CHECK_THROWS_AS(backward_slice(g, dummy_program(), "ghost"), SliceError);
}

TEST_CASE("temp/o1 fixture: the slice pulls locals and globals through a call") {
    Program p = parse_program(
        "let a: int = 3;\n"
        "let c: int = 4;\n\n"
        "fn temp(): int {\n"
        "    let o1: int = a + c;\n"
        "    return o1;\n"
        "}\n\n"
        "fn main(): int {\n"
        "    let x: int = temp();\n"
        "    return x;\n"
        "}\n");
    SliceResult s = backward_slice(p, "x");
    std::set<std::string> got(s.members.begin(), s.members.end());
    CHECK(got.count("main.x") == 1);
    CHECK(got.count("temp.o1") == 1);
    CHECK(got.count("c") == 1);
    CHECK(got.count("a") == 1);

    std::set<std::string> frontier(s.frontier.begin(), s.frontier.end());
    CHECK(frontier.count("a") == 1);
    CHECK(frontier.count("c") == 1);
    CHECK(frontier.count("main.x") == 0);
}

TEST_CASE("data edges only: an unrelated branch variable stays out") {
    Program p = parse_program(
        "fn main(k: int, d: int): int {\n"
        "    let y: int = 0;\n"
        "    if (k > 0) {\n        y = d;\n    }\n"
        "    return y;\n"
        "}\n");
    SliceResult s = backward_slice(p, "main.return");
    std::set<std::string> got(s.members.begin(), s.members.end());
    CHECK(got.count("main.y") == 1);
    CHECK(got.count("main.d") == 1);
    // k only controls the branch; control dependence is not tracked
    CHECK(got.count("main.k") == 0);
}

TEST_CASE("channels link pushes to pops") {
    Program p = parse_program(
        "chan q;\n"
        "fn main(n: int): int {\n"
        "    push(q, n * 2);\n"
        "    let r: int = pop(q);\n"
        "    return r;\n"
        "}\n");
    SliceResult s = backward_slice(p, "main.r");
    std::set<std::string> got(s.members.begin(), s.members.end());
    CHECK(got.count("q") == 1);
    CHECK(got.count("main.n") == 1);
}

TEST_CASE("the default campaign target resolves through return") {
    Program p = parse_program(
        "fn main(data: int[8]): int {\n"
        "    let sum: int = 0;\n"
        "    acc: for (let i: int = 0; i < len(data); i = i + 1) {\n"
        "        sum = sum + data[i];\n    }\n"
        "    return sum;\n}\n");
    SliceResult s = backward_slice(p, "main.return");
    std::set<std::string> got(s.members.begin(), s.members.end());
    CHECK(got.count("main.sum") == 1);
    CHECK(got.count("main.data") == 1);
    CHECK(got.count("main.i") == 1);  // loop bound feeds the subscript read

    std::set<std::string> frontier(s.frontier.begin(), s.frontier.end());
    CHECK(frontier.count("main.data") == 1);
}
