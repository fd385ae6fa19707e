#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hlsdiff/ast.hpp"
#include "hlsdiff/input.hpp"
#include "hlsdiff/llm.hpp"
#include "hlsdiff/mutation.hpp"

namespace hlsdiff {

struct NoParsableInputs {
    std::string message;
};

// Three-stage progressive reasoning chain. Each stage text already embeds
// the program, the task scenario and the output-format rules; responses are
// chained into the following stage at completion time.
struct PromptChain {
    std::string stage1;  // overall code analysis
    std::string stage2;  // statement-level analysis
    std::string stage3;  // directive analysis + input request
    std::string scenario;
    std::string format_rules;
};

std::string describe_directive(const DirectiveBinding& d);

PromptChain build_reasoning_chain(const Program& p, const std::string& scenario);

// stage is 1-based; prior holds the responses of the earlier stages
std::string stage_prompt(const PromptChain& chain, int stage,
                         const std::vector<std::string>& prior);

// Runs the three stages in order, parses the final triple-backtick block
// line-by-line, drops malformed lines and returns at most k inputs.
// Throws ClientError (propagated) and NoParsableInputs.
std::vector<TestInput> llm_generate_inputs(LLMClient& client,
                                           const PromptChain& chain, int64_t k,
                                           const FormatConstraints& fmt);

struct GeneratedInput {
    TestInput input;
    std::string source;             // "llm" or "mutation"
    std::optional<MutationType> op;  // which operator produced a mutation
};

// ceil(ratio*B) inputs requested from the LLM (fewer when the client fails
// or under-delivers), the remainder mutated from corpus seeds, interleaved
// deterministically by the scheduler's rng. client == nullptr disables the
// LLM share entirely.
std::vector<GeneratedInput> next_batch(MutationScheduler& sched,
                                       const std::vector<TestInput>& corpus,
                                       const PromptChain& chain,
                                       LLMClient* client, int64_t batch,
                                       const FormatConstraints& fmt,
                                       const MutationContext& ctx,
                                       double llm_ratio = 0.3,
                                       std::vector<std::string>* warnings = nullptr);

}  // namespace hlsdiff
