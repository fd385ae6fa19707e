#include "hlsdiff/repair.hpp"

#include "hlsdiff/compat.hpp"
#include "hlsdiff/parser.hpp"

namespace hlsdiff {

std::string build_repair_prompt(const std::string& source,
                                const std::string& error_log,
                                const RuleTemplate& rule) {
    std::string p;
    p += "You are repairing a test harness so it satisfies hardware synthesis "
         "constraints.\n";
    p += "The toolchain rejected the harness with this error log:\n";
    p += error_log + "\n\n";
    p += "Relevant rule (" + rule.id + "): " + rule.rule + "\n\n";
    p += "Example before:\n" + rule.before + "\n\n";
    p += "Example after:\n" + rule.after + "\n\n";
    p += "Current harness:\n```\n" + source;
    if (source.empty() || source.back() != '\n') p += "\n";
    p += "```\n\n";
    p += "Respond with the complete revised harness in one triple-backtick "
         "block.\n";
    return p;
}

RepairOutcome repair_loop(const std::string& harness_source,
                          const RuleLibrary& lib, LLMClient& client,
                          int max_iter) {
    RepairOutcome out;
    out.final_source = harness_source;

    while (true) {
        CompatReport report;
        try {
            report = check_hw_compat(parse_program(out.final_source));
        } catch (const ParseError& e) {
            // only reachable when the initial harness itself is broken;
            // client answers are vetted before acceptance below
            report.issues.push_back({"E_PARSE", e.message, e.loc});
        }
        if (report.ok()) {
            out.status = RepairStatus::Repaired;
            return out;
        }
        if (out.iterations >= max_iter) {
            out.status = RepairStatus::Exhausted;
            return out;
        }

        std::string log = format_issue(report.issues.front());
        auto hit = retrieve(log, lib);
        std::string prompt = build_repair_prompt(out.final_source, log, *hit.tmpl);

        std::string answer;
        try {
            answer = client.complete(prompt, {});
        } catch (const ClientError& e) {
            out.client_error = e.message;
            out.status = RepairStatus::Exhausted;
            return out;
        }
        ++out.iterations;

        RepairStep step{log, hit.tmpl->id, hit.similarity, false};
        if (auto block = extract_fenced_block(answer)) {
            try {
                parse_program(*block);
                step.parsed = true;
                out.final_source = *block;
            } catch (const ParseError&) {
                // failed iteration, keep the previous source
            }
        }
        out.steps.push_back(step);
    }
}

std::string repair_outcome_to_text(const RepairOutcome& o) {
    std::string t;
    t += "status " + std::string(o.repaired() ? "repaired" : "exhausted") + "\n";
    t += "iterations " + std::to_string(o.iterations) + "\n";
    for (auto& s : o.steps) {
        t += "step rule=" + s.rule_id + " parsed=" + (s.parsed ? "yes" : "no") +
             " log=" + s.error_log + "\n";
    }
    if (o.client_error) t += "client_error " + *o.client_error + "\n";
    return t;
}

}  // namespace hlsdiff
