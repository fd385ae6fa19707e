#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hlsdiff/campaign.hpp"
#include "hlsdiff/compat.hpp"
#include "hlsdiff/inputgen.hpp"
#include "hlsdiff/interp.hpp"
#include "hlsdiff/parser.hpp"
#include "hlsdiff/printer.hpp"
#include "hlsdiff/slicer.hpp"

using namespace hlsdiff;

namespace {

std::string read_file_or_die(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError{"cannot read file: " + path};
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CampaignVars {
    std::string program, config, harness, target, client, mock_dir, library,
        report_dir, seeds, scenario;
    int64_t budget = 0, batch = 0, seed = 0, delay = 0, step_budget = 0;
    double max_seconds = 0, llm_ratio = 0, alpha = 0, eps = 0;
    bool uniform = false, no_llm = false, no_filter = false, stop_on = false;
};

void add_campaign_flags(CLI::App* cmd, CampaignVars& v) {
    cmd->add_option("program", v.program, "MiniC program under test")->required();
    cmd->add_option("--config", v.config, "key=value config file, flags override");
    cmd->add_option("--harness", v.harness, "test harness to prepend (repaired first)");
    cmd->add_option("--target", v.target, "slice target (default <entry>.return)");
    cmd->add_option("--budget", v.budget, "max executions");
    cmd->add_option("--max-seconds", v.max_seconds, "wall-clock limit");
    cmd->add_option("--batch", v.batch, "generation batch size");
    cmd->add_option("--llm-ratio", v.llm_ratio, "LLM share of each batch");
    cmd->add_option("--alpha", v.alpha, "scheduler reward step");
    cmd->add_option("--eps", v.eps, "scheduler probability floor");
    cmd->add_option("--seed", v.seed, "rng seed");
    cmd->add_option("--client", v.client, "llm client: mock | remote | none");
    cmd->add_option("--mock-dir", v.mock_dir, "canned mock responses directory");
    cmd->add_option("--library", v.library, "rule template directory");
    cmd->add_option("--report-dir", v.report_dir, "where report files go");
    cmd->add_option("--seeds", v.seeds, "seed inputs file, one per line");
    cmd->add_option("--scenario", v.scenario, "task scenario for the prompt chain");
    cmd->add_option("--exec-delay-ms", v.delay, "artificial per-execution delay");
    cmd->add_option("--step-budget", v.step_budget, "interpreter step budget");
    cmd->add_flag("--uniform-mutation", v.uniform, "disable probability adaptation");
    cmd->add_flag("--no-llm", v.no_llm, "mutation-only generation");
    cmd->add_flag("--no-filter", v.no_filter, "execute every generated input");
    cmd->add_flag("--stop-on-discrepancy", v.stop_on, "stop at the first finding");
}

CampaignConfig build_config(CLI::App* cmd, const CampaignVars& v) {
    CampaignConfig cfg;
    if (cmd->count("--config")) cfg = parse_config_file(v.config);
    cfg.program_path = v.program;
    if (cmd->count("--harness")) cfg.harness_path = v.harness;
    if (cmd->count("--target")) cfg.target = v.target;
    if (cmd->count("--budget")) cfg.max_executions = v.budget;
    if (cmd->count("--max-seconds")) cfg.max_seconds = v.max_seconds;
    if (cmd->count("--batch")) cfg.batch = v.batch;
    if (cmd->count("--llm-ratio")) cfg.llm_ratio = v.llm_ratio;
    if (cmd->count("--alpha")) cfg.alpha = v.alpha;
    if (cmd->count("--eps")) cfg.eps = v.eps;
    if (cmd->count("--seed")) cfg.seed = static_cast<uint64_t>(v.seed);
    if (cmd->count("--client")) cfg.client_mode = v.client;
    if (cmd->count("--mock-dir")) cfg.mock_dir = v.mock_dir;
    if (cmd->count("--library")) cfg.library_path = v.library;
    if (cmd->count("--report-dir")) cfg.report_dir = v.report_dir;
    if (cmd->count("--seeds")) cfg.seeds_path = v.seeds;
    if (cmd->count("--scenario")) cfg.scenario = v.scenario;
    if (cmd->count("--exec-delay-ms")) cfg.exec_delay_ms = v.delay;
    if (cmd->count("--step-budget")) cfg.step_budget = v.step_budget;
    if (v.uniform) cfg.uniform_mutation = true;
    if (v.no_llm) cfg.no_llm = true;
    if (v.no_filter) cfg.no_filter = true;
    if (v.stop_on) cfg.stop_on_discrepancy = true;
    return cfg;
}

int run_check(const std::string& path) {
    CompatReport report = check_hw_compat(parse_program(read_file_or_die(path)));
    if (report.ok()) {
        std::cout << "compatible\n";
        return 0;
    }
    std::cout << format_report(report);
    return 2;
}

int run_repair(const std::string& path, const std::string& library,
               const std::string& client_mode, int max_iter,
               const std::string& out_path) {
    RuleLibrary lib = load_rule_library(library);
    std::unique_ptr<LLMClient> client;
    if (client_mode == "remote")
        client = RemoteClient::from_env();
    else
        client = std::make_unique<RuleApplyingMockClient>();
    RepairOutcome o = repair_loop(read_file_or_die(path), lib, *client, max_iter);
    std::cout << repair_outcome_to_text(o);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << o.final_source;
    } else if (o.repaired()) {
        std::cout << "--- repaired harness ---\n" << o.final_source;
    }
    return o.repaired() ? 0 : 2;
}

int run_slice(const std::string& path, std::string target) {
    Program p = parse_program(read_file_or_die(path));
    if (target.empty()) target = qualify(p.entry, "return");
    SliceResult s = backward_slice(p, target);
    std::cout << "target " << s.target << "\n";
    std::cout << "members";
    for (auto& m : s.members) std::cout << " " << m;
    std::cout << "\nfrontier";
    for (auto& m : s.frontier) std::cout << " " << m;
    std::cout << "\n";
    return 0;
}

int run_instrument(const std::string& path, std::string target,
                   const std::string& kv_list) {
    Program p = parse_program(read_file_or_die(path));
    KeyVariableSet kv;
    if (!kv_list.empty()) {
        std::istringstream is(kv_list);
        std::string name;
        while (std::getline(is, name, ',')) kv.push_back(name);
    } else {
        if (target.empty()) target = qualify(p.entry, "return");
        kv = backward_slice(p, target).members;
    }
    std::cout << print_program(instrument(p, kv));
    return 0;
}

int run_report(const std::string& path) {
    CampaignConfig cfg;
    auto r = parse_machine_report(read_file_or_die(path), &cfg);
    if (!r) throw ConfigError{"not a machine campaign report: " + path};
    std::cout << report_human_text(*r, cfg);
    return r->exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"differential tester for software vs hardware semantics of "
                 "directive-annotated MiniC programs"};
    app.require_subcommand(1);

    auto* check = app.add_subcommand("check", "hardware-compatibility check");
    std::string check_path;
    check->add_option("program", check_path, "MiniC source file")->required();

    auto* repair = app.add_subcommand("repair", "LLM-guided harness repair");
    std::string repair_path, repair_lib, repair_client = "mock", repair_out;
    int repair_iters = 5;
    repair->add_option("harness", repair_path, "harness source file")->required();
    repair->add_option("--library", repair_lib, "rule template directory")->required();
    repair->add_option("--client", repair_client, "mock | remote");
    repair->add_option("--max-iter", repair_iters, "repair iteration bound");
    repair->add_option("--out", repair_out, "write the repaired harness here");

    auto* slice = app.add_subcommand("slice", "backward slice of a target variable");
    std::string slice_path, slice_target;
    slice->add_option("program", slice_path, "MiniC source file")->required();
    slice->add_option("--target", slice_target, "slice target");

    auto* instr = app.add_subcommand("instrument", "insert spectra probes");
    std::string instr_path, instr_target, instr_kv;
    instr->add_option("program", instr_path, "MiniC source file")->required();
    instr->add_option("--target", instr_target, "slice target");
    instr->add_option("--kv", instr_kv, "explicit key variables, comma separated");

    auto* fuzz = app.add_subcommand("fuzz", "mutation-only campaign");
    CampaignVars fuzz_vars;
    add_campaign_flags(fuzz, fuzz_vars);

    auto* camp = app.add_subcommand("campaign", "full differential campaign");
    CampaignVars camp_vars;
    add_campaign_flags(camp, camp_vars);

    auto* rep = app.add_subcommand("report", "re-render a machine report");
    std::string report_path;
    rep->add_option("report", report_path, "machine report file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(check_path);
        if (repair->parsed())
            return run_repair(repair_path, repair_lib, repair_client, repair_iters,
                              repair_out);
        if (slice->parsed()) return run_slice(slice_path, slice_target);
        if (instr->parsed()) return run_instrument(instr_path, instr_target, instr_kv);
        if (rep->parsed()) return run_report(report_path);

        CLI::App* cmd = fuzz->parsed() ? fuzz : camp;
        CampaignConfig cfg = build_config(cmd, fuzz->parsed() ? fuzz_vars : camp_vars);
        if (fuzz->parsed()) cfg.no_llm = true;
        CampaignReport r = run_campaign(cfg);
        std::cout << report_human_text(r, cfg);
        return r.exit_code();
    } catch (const ParseError& e) {
        std::cerr << "error: parse failed at " << e.loc.line << ":" << e.loc.col
                  << ": " << e.message << "\n";
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const SliceError& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const UnknownVariable& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const InputMismatch& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const ClientError& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const RuleLoadError& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const EmptyLibrary& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const EmptyText& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const EmptyInput& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const InvalidCounts& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const NoParsableInputs& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
}
