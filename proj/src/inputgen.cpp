#include "hlsdiff/inputgen.hpp"

#include <cmath>
#include <sstream>

#include "hlsdiff/printer.hpp"

namespace hlsdiff {

namespace {

std::string unsigned_word(bool is_signed) { return is_signed ? "signed" : "unsigned"; }

}  // namespace

std::string describe_directive(const DirectiveBinding& d) {
    switch (d.kind) {
        case DirectiveKind::Width:
            return "width directive on " + d.qualified + ": " + std::to_string(d.a) +
                   " bits, " + unsigned_word(d.is_signed);
        case DirectiveKind::Fixed:
            return "fixed-point directive on " + d.qualified + ": total width " +
                   std::to_string(d.a) + ", integer bits " + std::to_string(d.b);
        case DirectiveKind::StaticArray:
            return "static_array directive on " + d.qualified + ": capacity " +
                   std::to_string(d.a);
        case DirectiveKind::Pipeline:
            return "pipeline directive on loop " + d.qualified + ": latency " +
                   std::to_string(d.a);
        case DirectiveKind::Unroll:
            return "unroll directive on loop " + d.qualified + ": factor " +
                   std::to_string(d.a);
        case DirectiveKind::Dataflow:
            return "dataflow directive on " + d.qualified + ": fifo depth " +
                   std::to_string(d.a);
        case DirectiveKind::StackLimit:
            return "stack_limit directive on " + d.qualified + ": max depth " +
                   std::to_string(d.a);
    }
    return "directive on " + d.qualified;
}

PromptChain build_reasoning_chain(const Program& p, const std::string& scenario) {
    PromptChain c;
    c.scenario = scenario;

    FormatConstraints fmt = constraints_for(p);
    c.format_rules =
        "Output format rules: generate one test input per line, separating "
        "values with spaces, and place all lines between triple backticks. " +
        fmt.describe();

    std::string source = print_program(p);
    std::string context = "Task scenario: " +
                          (scenario.empty() ? std::string("general numeric kernel")
                                            : scenario) +
                          "\n\n" + c.format_rules + "\n\nProgram under test:\n" +
                          source + "\n";

    c.stage1 =
        "Stage 1 of 3: overall code analysis. Describe the structure of the "
        "program below: its entry point, the data it consumes and produces, "
        "and the overall computation.\n\n" +
        context;

    c.stage2 =
        "Stage 2 of 3: statement-level analysis. Walk the statements of the "
        "program below and identify operations that can behave differently "
        "in hardware: accumulations that may overflow narrow widths, array "
        "index arithmetic, divisions, recursion, and loop-carried "
        "dependences.\n\n" +
        context;

    std::string directives;
    if (p.directives.empty()) {
        directives = "no directives present";
    } else {
        for (size_t i = 0; i < p.directives.size(); ++i) {
            if (i) directives += "; ";
            directives += describe_directive(p.directives[i]);
        }
    }
    c.stage3 =
        "Stage 3 of 3: directive analysis. Hardware directives for this "
        "program: " +
        directives +
        ". Reason about inputs that stress exactly these hardware behaviors, "
        "then answer ONLY with the test inputs, following the output format "
        "rules.\n\n" +
        context;
    return c;
}

std::string stage_prompt(const PromptChain& chain, int stage,
                         const std::vector<std::string>& prior) {
    std::string base = stage == 1 ? chain.stage1
                       : stage == 2 ? chain.stage2
                                    : chain.stage3;
    for (size_t i = 0; i < prior.size(); ++i) {
        base += "\nStage " + std::to_string(i + 1) + " analysis:\n" + prior[i];
        if (base.back() != '\n') base += "\n";
    }
    return base;
}

std::vector<TestInput> llm_generate_inputs(LLMClient& client,
                                           const PromptChain& chain, int64_t k,
                                           const FormatConstraints& fmt) {
    std::vector<std::string> responses;
    for (int stage = 1; stage <= 3; ++stage) {
        std::string prompt = stage_prompt(chain, stage, responses);
        responses.push_back(client.complete(prompt, {}));
    }

    auto block = extract_fenced_block(responses.back());
    if (!block)
        throw NoParsableInputs{"final stage response has no triple-backtick block"};

    std::vector<TestInput> out;
    std::istringstream is(*block);
    std::string line;
    while (std::getline(is, line) && static_cast<int64_t>(out.size()) < k) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (auto in = input_from_line(line, fmt)) out.push_back(std::move(*in));
    }
    if (out.empty())
        throw NoParsableInputs{"no line of the fenced block parses as a test input"};
    return out;
}

std::vector<GeneratedInput> next_batch(MutationScheduler& sched,
                                       const std::vector<TestInput>& corpus,
                                       const PromptChain& chain,
                                       LLMClient* client, int64_t batch,
                                       const FormatConstraints& fmt,
                                       const MutationContext& ctx,
                                       double llm_ratio,
                                       std::vector<std::string>* warnings) {
    if (corpus.empty()) throw EmptyInput{"next_batch needs a nonempty seed corpus"};

    auto warn = [&](const std::string& w) {
        if (warnings) warnings->push_back(w);
    };

    std::vector<GeneratedInput> llm_items;
    int64_t want_llm =
        client ? static_cast<int64_t>(std::ceil(llm_ratio * static_cast<double>(batch)))
               : 0;
    if (want_llm > batch) want_llm = batch;
    if (want_llm > 0) {
        try {
            for (auto& in : llm_generate_inputs(*client, chain, want_llm, fmt))
                llm_items.push_back({std::move(in), "llm", std::nullopt});
        } catch (const ClientError& e) {
            warn("llm client failed, batch degrades to mutation only: " + e.message);
        } catch (const NoParsableInputs& e) {
            warn("llm produced no parsable inputs: " + e.message);
        }
    }

    std::vector<GeneratedInput> mut_items;
    int64_t want_mut = batch - static_cast<int64_t>(llm_items.size());
    int failures = 0;
    while (static_cast<int64_t>(mut_items.size()) < want_mut) {
        const TestInput& seed = corpus[sched.rng.below(corpus.size())];
        MutationType m = select_mutation(sched);
        try {
            mut_items.push_back({apply_mutation(seed, m, fmt, sched.rng, ctx),
                                 "mutation", m});
        } catch (const EmptyInput&) {
            if (++failures >= 64) {
                // nothing in the corpus is mutable; replay seeds verbatim
                mut_items.push_back({seed, "mutation", m});
            }
        }
    }

    // deterministic interleave weighted by the remaining pool sizes
    std::vector<GeneratedInput> out;
    size_t li = 0, mi = 0;
    while (li < llm_items.size() || mi < mut_items.size()) {
        bool take_llm;
        if (li >= llm_items.size()) {
            take_llm = false;
        } else if (mi >= mut_items.size()) {
            take_llm = true;
        } else {
            double lrem = static_cast<double>(llm_items.size() - li);
            double mrem = static_cast<double>(mut_items.size() - mi);
            take_llm = sched.rng.real01() < lrem / (lrem + mrem);
        }
        out.push_back(take_llm ? std::move(llm_items[li++])
                               : std::move(mut_items[mi++]));
    }

    for (auto& g : out)
        if (!validate_input(g.input, fmt))
            throw NoParsableInputs{"generated input violates format constraints"};
    return out;
}

}  // namespace hlsdiff
