#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hlsdiff/input.hpp"
#include "hlsdiff/inputgen.hpp"
#include "hlsdiff/llm.hpp"
#include "hlsdiff/mutation.hpp"
#include "hlsdiff/parser.hpp"

using namespace hlsdiff;

namespace {

const char* kWidthProgram =
    "fn main(data: int[4]): int {\n"
    "    let sum: int = 0;\n"
    "    @width(sum, 9, unsigned)\n"
    "    acc: for (let i: int = 0; i < len(data); i = i + 1) {\n"
    "        sum = sum + data[i];\n    }\n    return sum;\n}\n";

// serves scripted stage responses in call order
class ScriptedClient : public LLMClient {
  public:
    explicit ScriptedClient(std::vector<std::string> responses)
        : responses_(std::move(responses)) {}
    std::string complete(const std::string& prompt, const LLMParams&) override {
        prompts.push_back(prompt);
        if (calls >= responses_.size()) return "";
        return responses_[calls++];
    }
    std::string name() const override { return "mock:scripted"; }

    std::vector<std::string> prompts;
    size_t calls = 0;

  private:
    std::vector<std::string> responses_;
};

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("hlsdiff_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("the reasoning chain names directives in stage three") {
    Program p = parse_program(kWidthProgram);
    PromptChain chain = build_reasoning_chain(p, "image filter");

    CHECK(chain.stage3.find("width directive on main.sum: 9 bits, unsigned") !=
          std::string::npos);
    CHECK(chain.scenario == "image filter");
    CHECK(chain.stage1.find("image filter") != std::string::npos);
    CHECK(chain.format_rules.find("one test input per line") != std::string::npos);
    CHECK(chain.format_rules.find("triple backticks") != std::string::npos);
}

TEST_CASE("a directive-free program says so in stage three") {
    Program p = parse_program("fn main(x: int): int {\n    return x;\n}\n");
    PromptChain chain = build_reasoning_chain(p, "");
    CHECK(chain.stage3.find("no directives present") != std::string::npos);
}

TEST_CASE("directive descriptions cover every kind") {
    Program p = parse_program(
        "chan q;\n"
        "@dataflow(flow, 4)\n"
        "fn flow(n: int): int {\n    push(q, n);\n    return pop(q);\n}\n"
        "@stack_limit(rec, 8)\n"
        "fn rec(v: int): int {\n"
        "    if (v <= 0) {\n        return 0;\n    }\n"
        "    return rec(v - 1);\n}\n"
        "@static_array(main.buf, 16)\n"
        "fn main(x: float, n: int, data: int[4]): float {\n"
        "    let buf: int[];\n"
        "    @fixed(y, 8, 4)\n"
        "    let y: float = 0.0;\n"
        "    y = x;\n"
        "    @width(s, 12, signed)\n"
        "    let s: int = flow(n) + rec(n);\n"
        "    @pipeline(go, 2)\n"
        "    go: for (let i: int = 0; i < 4; i = i + 1) {\n"
        "        s = s + data[i];\n    }\n"
        "    @unroll(spin, 2)\n"
        "    spin: for (let j: int = 0; j < 4; j = j + 1) {\n"
        "        buf[j] = s;\n    }\n"
        "    return y;\n}\n");
    std::vector<std::string> lines;
    for (auto& d : p.directives) lines.push_back(describe_directive(d));

    auto any_contains = [&](const std::string& needle) {
        for (auto& l : lines)
            if (l.find(needle) != std::string::npos) return true;
        return false;
    };
    CHECK(any_contains("fixed-point directive on main.y: total width 8, integer bits 4"));
    CHECK(any_contains("width directive on main.s: 12 bits, signed"));
    CHECK(any_contains("static_array directive on main.buf: capacity 16"));
    CHECK(any_contains("pipeline directive on loop main.go: latency 2"));
    CHECK(any_contains("unroll directive on loop main.spin: factor 2"));
    CHECK(any_contains("dataflow directive on flow: fifo depth 4"));
    CHECK(any_contains("stack_limit directive on rec: max depth 8"));
}

TEST_CASE("stage prompts chain the prior responses forward") {
    Program p = parse_program(kWidthProgram);
    PromptChain chain = build_reasoning_chain(p, "");

    std::string s1 = stage_prompt(chain, 1, {});
    std::string s2 = stage_prompt(chain, 2, {"first answer"});
    std::string s3 = stage_prompt(chain, 3, {"first answer", "second answer"});

    CHECK(s1 == chain.stage1);
    CHECK(s2.find(chain.stage2) == 0);
    CHECK(s2.find("Stage 1 analysis:\nfirst answer") != std::string::npos);
    CHECK(s3.find("Stage 2 analysis:\nsecond answer") != std::string::npos);
    CHECK(stage_prompt(chain, 1, {}) == s1);  // deterministic
}

TEST_CASE("llm inputs parse from the final fenced block") {
    Program p = parse_program(kWidthProgram);
    PromptChain chain = build_reasoning_chain(p, "");
    FormatConstraints fmt = constraints_for(p);

    ScriptedClient client({"the loop accumulates",
                           "sum grows monotonically",
                           "reasoning...\n```\n100 200 300 400\n1 2 3 4\nbad line x\n"
                           "7 7 7 7\n```\n"});
    std::vector<TestInput> got = llm_generate_inputs(client, chain, 10, fmt);
    REQUIRE(got.size() == 3);  // the malformed line is dropped
    CHECK(got[0].entries[0].values[0].i == 100);
    CHECK(got[2].entries[0].values[3].i == 7);
    CHECK(client.calls == 3);
    CHECK(client.prompts.size() == 3);
    CHECK(client.prompts[1].find("the loop accumulates") != std::string::npos);
    CHECK(client.prompts[2].find("sum grows monotonically") != std::string::npos);
}

TEST_CASE("llm inputs truncate at k") {
    Program p = parse_program("fn main(x: int): int {\n    return x;\n}\n");
    PromptChain chain = build_reasoning_chain(p, "");
    FormatConstraints fmt = constraints_for(p);

    ScriptedClient client({"a", "b", "```\n1\n2\n3\n4\n5\n6\n```\n"});
    CHECK(llm_generate_inputs(client, chain, 4, fmt).size() == 4);
}

TEST_CASE("no fenced block or nothing parsable raises") {
    Program p = parse_program("fn main(x: int): int {\n    return x;\n}\n");
    PromptChain chain = build_reasoning_chain(p, "");
    FormatConstraints fmt = constraints_for(p);

    ScriptedClient none({"a", "b", "no code fence here"});
    CHECK_THROWS_AS(llm_generate_inputs(none, chain, 4, fmt), NoParsableInputs);

    ScriptedClient junk({"a", "b", "```\nnot numbers\nalso bad\n```\n"});
    CHECK_THROWS_AS(llm_generate_inputs(junk, chain, 4, fmt), NoParsableInputs);
}

TEST_CASE("client failures propagate from the chain") {
    Program p = parse_program("fn main(x: int): int {\n    return x;\n}\n");
    PromptChain chain = build_reasoning_chain(p, "");
    FormatConstraints fmt = constraints_for(p);
    FailingClient client;
    CHECK_THROWS_AS(llm_generate_inputs(client, chain, 4, fmt), ClientError);
}

TEST_CASE("directory mock serves canned responses by prompt hash") {
    TempDir dir;
    std::string prompt = "what stresses a 9-bit accumulator?";
    {
        std::ofstream f(dir.path / (prompt_hash(prompt) + ".txt"));
        f << "canned analysis";
    }
    DirectoryMockClient client(dir.path.string(), "fallback text");
    CHECK(client.complete(prompt, {}) == "canned analysis");
    CHECK(client.complete("unknown prompt", {}) == "fallback text");
}

TEST_CASE("a full scripted chain drives next_batch at the llm share") {
    Program p = parse_program(kWidthProgram);
    PromptChain chain = build_reasoning_chain(p, "");
    FormatConstraints fmt = constraints_for(p);

    MutationScheduler sched = MutationScheduler::make(11);
    std::vector<TestInput> corpus{synthesize_seed(fmt)};

    ScriptedClient client(
        {"s1", "s2", "```\n100 200 300 400\n5 6 7 8\n9 9 9 9\n```\n"});
    std::vector<std::string> warnings;
    auto batch = next_batch(sched, corpus, chain, &client, 10, fmt,
                            MutationContext{}, 0.3, &warnings);
    REQUIRE(batch.size() == 10);
    CHECK(warnings.empty());

    int llm = 0, mut = 0;
    for (auto& g : batch) {
        if (g.source == "llm") {
            ++llm;
            CHECK(!g.op.has_value());
        } else {
            REQUIRE(g.source == "mutation");
            ++mut;
            CHECK(g.op.has_value());
        }
        CHECK(validate_input(g.input, fmt));
    }
    CHECK(llm == 3);  // ceil(0.3 * 10)
    CHECK(mut == 7);
}

TEST_CASE("next_batch degrades to pure mutation on client failure") {
    Program p = parse_program(kWidthProgram);
    PromptChain chain = build_reasoning_chain(p, "");
    FormatConstraints fmt = constraints_for(p);

    MutationScheduler sched = MutationScheduler::make(12);
    std::vector<TestInput> corpus{synthesize_seed(fmt)};

    FailingClient client;
    std::vector<std::string> warnings;
    auto batch = next_batch(sched, corpus, chain, &client, 8, fmt,
                            MutationContext{}, 0.3, &warnings);
    REQUIRE(batch.size() == 8);
    CHECK(!warnings.empty());
    for (auto& g : batch) CHECK(g.source == "mutation");
}

TEST_CASE("an unparsable llm response also degrades with a warning") {
    Program p = parse_program(kWidthProgram);
    PromptChain chain = build_reasoning_chain(p, "");
    FormatConstraints fmt = constraints_for(p);

    MutationScheduler sched = MutationScheduler::make(13);
    std::vector<TestInput> corpus{synthesize_seed(fmt)};

    EchoMockClient client;  // echoes prompts; no fenced block to parse
    std::vector<std::string> warnings;
    auto batch = next_batch(sched, corpus, chain, &client, 6, fmt,
                            MutationContext{}, 0.3, &warnings);
    REQUIRE(batch.size() == 6);
    CHECK(!warnings.empty());
    for (auto& g : batch) CHECK(g.source == "mutation");
}

TEST_CASE("next_batch without a client is pure mutation") {
    Program p = parse_program(kWidthProgram);
    PromptChain chain = build_reasoning_chain(p, "");
    FormatConstraints fmt = constraints_for(p);

    MutationScheduler sched = MutationScheduler::make(14);
    std::vector<TestInput> corpus{synthesize_seed(fmt)};

    auto batch = next_batch(sched, corpus, chain, nullptr, 5, fmt,
                            MutationContext{}, 0.3, nullptr);
    REQUIRE(batch.size() == 5);
    for (auto& g : batch) CHECK(g.source == "mutation");
}

TEST_CASE("a batch of one with a client is the llm's") {
    Program p = parse_program("fn main(x: int): int {\n    return x;\n}\n");
    PromptChain chain = build_reasoning_chain(p, "");
    FormatConstraints fmt = constraints_for(p);

    MutationScheduler sched = MutationScheduler::make(15);
    std::vector<TestInput> corpus{synthesize_seed(fmt)};

    ScriptedClient client({"s1", "s2", "```\n42\n```\n"});
    auto batch = next_batch(sched, corpus, chain, &client, 1, fmt,
                            MutationContext{}, 0.3, nullptr);
    REQUIRE(batch.size() == 1);
    CHECK(batch[0].source == "llm");
    CHECK(batch[0].input.entries[0].values[0].i == 42);
}

TEST_CASE("an empty corpus cannot seed a batch") {
    Program p = parse_program("fn main(x: int): int {\n    return x;\n}\n");
    PromptChain chain = build_reasoning_chain(p, "");
    FormatConstraints fmt = constraints_for(p);
    MutationScheduler sched = MutationScheduler::make(16);
    std::vector<TestInput> corpus;
    CHECK_THROWS_AS(next_batch(sched, corpus, chain, nullptr, 4, fmt,
                               MutationContext{}, 0.3, nullptr),
                    EmptyInput);
}

TEST_CASE("batch interleaving is deterministic for a fixed seed") {
    Program p = parse_program(kWidthProgram);
    PromptChain chain = build_reasoning_chain(p, "");
    FormatConstraints fmt = constraints_for(p);

    auto run = [&]() {
        MutationScheduler sched = MutationScheduler::make(77);
        std::vector<TestInput> corpus{synthesize_seed(fmt)};
        ScriptedClient client(
            {"s1", "s2", "```\n100 200 300 400\n5 6 7 8\n```\n"});
        auto batch = next_batch(sched, corpus, chain, &client, 7, fmt,
                                MutationContext{}, 0.3, nullptr);
        std::string sig;
        for (auto& g : batch) sig += g.source + ":" + input_to_line(g.input) + ";";
        return sig;
    };
    CHECK(run() == run());
}

TEST_CASE("prompt hashes are stable hex keys") {
    std::string h = prompt_hash("hello");
    CHECK(h.size() == 16);
    CHECK(h == prompt_hash("hello"));
    CHECK(h != prompt_hash("hello "));
    for (char c : h) CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
}

TEST_CASE("extract_fenced_block takes the last fence and skips info strings") {
    std::string text =
        "intro\n```\nfirst block\n```\nmiddle\n```text\nsecond\nblock\n```\ntail";
    auto got = extract_fenced_block(text);
    REQUIRE(got.has_value());
    CHECK(*got == "second\nblock\n");
    CHECK(!extract_fenced_block("no fences").has_value());
}
