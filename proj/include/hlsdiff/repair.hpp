#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hlsdiff/llm.hpp"
#include "hlsdiff/rules.hpp"

namespace hlsdiff {

enum class RepairStatus { Repaired, Exhausted };

struct RepairStep {
    std::string error_log;
    std::string rule_id;
    double similarity;
    bool parsed;  // the client's answer contained a parseable program
};

struct RepairOutcome {
    std::string final_source;
    int iterations = 0;  // client calls used
    std::vector<RepairStep> steps;
    RepairStatus status = RepairStatus::Exhausted;
    std::optional<std::string> client_error;  // set when the client aborted the loop

    bool repaired() const { return status == RepairStatus::Repaired; }
};

std::string build_repair_prompt(const std::string& source,
                                const std::string& error_log,
                                const RuleTemplate& rule);

// Iterates check -> retrieve -> prompt -> rewrite until the harness passes
// the hardware compatibility check or max_iter client calls are spent.
// Unparseable client answers consume an iteration and keep the last good
// source; a ClientError stops the loop with a partial outcome.
RepairOutcome repair_loop(const std::string& harness_source,
                          const RuleLibrary& lib, LLMClient& client,
                          int max_iter = 5);

std::string repair_outcome_to_text(const RepairOutcome& o);

}  // namespace hlsdiff
