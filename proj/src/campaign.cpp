#include "hlsdiff/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "hlsdiff/compat.hpp"
#include "hlsdiff/inputgen.hpp"
#include "hlsdiff/interp.hpp"
#include "hlsdiff/parser.hpp"
#include "hlsdiff/slicer.hpp"

namespace hlsdiff {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError{"cannot read file: " + path};
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError{"not a boolean: " + v};
}

int64_t parse_int(const std::string& v) {
    try {
        size_t used = 0;
        int64_t x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError{"not an integer: " + v};
    }
}

double parse_real(const std::string& v) {
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError{"not a number: " + v};
    }
}

std::string join_classes(const std::vector<Symptom>& classes) {
    std::string out;
    for (size_t i = 0; i < classes.size(); ++i) {
        if (i) out += ",";
        out += symptom_name(classes[i]);
    }
    return out.empty() ? "-" : out;
}

std::optional<Symptom> symptom_from_name(const std::string& name) {
    static const Symptom all[] = {
        Symptom::Overflow,      Symptom::Truncation,      Symptom::OutOfBounds,
        Symptom::StackOverflow, Symptom::FifoFault,       Symptom::DivByZero,
        Symptom::OrderDependence, Symptom::OutputMismatch,
    };
    for (Symptom s : all)
        if (name == symptom_name(s)) return s;
    return std::nullopt;
}

}  // namespace

void apply_config_entry(CampaignConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "program") cfg.program_path = value;
    else if (key == "harness") cfg.harness_path = value;
    else if (key == "target") cfg.target = value;
    else if (key == "max_executions") cfg.max_executions = parse_int(value);
    else if (key == "max_seconds") cfg.max_seconds = parse_real(value);
    else if (key == "batch") cfg.batch = parse_int(value);
    else if (key == "llm_ratio") cfg.llm_ratio = parse_real(value);
    else if (key == "alpha") cfg.alpha = parse_real(value);
    else if (key == "eps") cfg.eps = parse_real(value);
    else if (key == "seed") {
        int64_t s = parse_int(value);
        if (s < 0) throw ConfigError{"seed must be nonnegative: " + value};
        cfg.seed = static_cast<uint64_t>(s);
    } else if (key == "client") {
        if (value != "mock" && value != "remote" && value != "none")
            throw ConfigError{"unknown client mode: " + value};
        cfg.client_mode = value;
    }
    else if (key == "mock_dir") cfg.mock_dir = value;
    else if (key == "library") cfg.library_path = value;
    else if (key == "report_dir") cfg.report_dir = value;
    else if (key == "seeds") cfg.seeds_path = value;
    else if (key == "scenario") cfg.scenario = value;
    else if (key == "uniform_mutation") cfg.uniform_mutation = parse_bool(value);
    else if (key == "no_llm") cfg.no_llm = parse_bool(value);
    else if (key == "no_filter") cfg.no_filter = parse_bool(value);
    else if (key == "stop_on_discrepancy") cfg.stop_on_discrepancy = parse_bool(value);
    else if (key == "exec_delay_ms") cfg.exec_delay_ms = parse_int(value);
    else if (key == "step_budget") cfg.step_budget = parse_int(value);
    else if (key == "spectra") {
        SpectraConfig sc{false, false, false, false, false};
        std::istringstream is(value);
        std::string cat;
        while (std::getline(is, cat, ',')) {
            if (cat == "val") sc.val = true;
            else if (cat == "offset") sc.offset = true;
            else if (cat == "loop") sc.loop = true;
            else if (cat == "stack") sc.stack = true;
            else if (cat == "fifo") sc.fifo = true;
            else throw ConfigError{"unknown spectra category: " + cat};
        }
        cfg.spectra = sc;
    } else {
        throw ConfigError{"unknown config key: " + key};
    }
}

CampaignConfig parse_config_file(const std::string& path) {
    CampaignConfig cfg;
    std::istringstream is(read_file(path));
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError{"line " + std::to_string(lineno) +
                              ": expected key=value"};
        std::string key = line.substr(first, eq - first);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t'))
            key.pop_back();
        std::string value = line.substr(eq + 1);
        size_t vs = value.find_first_not_of(" \t");
        value = vs == std::string::npos ? "" : value.substr(vs);
        apply_config_entry(cfg, key, value);
    }
    return cfg;
}

double pass_rate(int64_t m, int64_t n) {
    if (n < 1 || m < 0 || m > n)
        throw InvalidCounts{"pass_rate needs 0 <= m <= n, n >= 1 (got m=" +
                            std::to_string(m) + ", n=" + std::to_string(n) + ")"};
    return 100.0 * static_cast<double>(m) / static_cast<double>(n);
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();

    CampaignReport report;
    report.status = "budget_exhausted";

    if (cfg.program_path.empty()) throw ConfigError{"program path is required"};
    std::string unit_source = read_file(cfg.program_path);

    if (!cfg.harness_path.empty()) {
        std::string harness = read_file(cfg.harness_path);
        CompatReport compat = check_hw_compat(parse_program(harness));
        if (!compat.ok()) {
            if (cfg.library_path.empty())
                throw ConfigError{"harness is incompatible and no rule library "
                                  "is configured"};
            RuleLibrary lib = load_rule_library(cfg.library_path);
            std::unique_ptr<LLMClient> rc;
            if (cfg.client_mode == "remote")
                rc = RemoteClient::from_env();
            else
                rc = std::make_unique<RuleApplyingMockClient>();
            RepairOutcome outcome = repair_loop(harness, lib, *rc, 5);
            report.n = 1;
            report.m = outcome.repaired() ? 1 : 0;
            report.repair = outcome;
            if (!outcome.repaired())
                throw ConfigError{"harness repair exhausted after " +
                                  std::to_string(outcome.iterations) +
                                  " iterations"};
            harness = outcome.final_source;
        }
        unit_source = harness + "\n" + unit_source;
    }

    Program p = parse_program(unit_source);
    std::string target =
        cfg.target.empty() ? qualify(p.entry, "return") : cfg.target;

    SliceResult slice = backward_slice(p, target);
    Program q = instrument(p, slice.members);
    SymbolTable syms = build_symbols(q);
    HardwareConfig hw = derive_hw_config(q);
    FormatConstraints fmt = constraints_for(q);

    std::vector<TestInput> corpus;
    if (!cfg.seeds_path.empty()) {
        std::istringstream is(read_file(cfg.seeds_path));
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            auto in = input_from_line(line, fmt);
            if (!in)
                throw ConfigError{"seed line " + std::to_string(lineno) +
                                  " does not match the input format"};
            corpus.push_back(std::move(*in));
        }
    }
    if (corpus.empty()) corpus.push_back(synthesize_seed(fmt));

    MutationScheduler sched = MutationScheduler::make(cfg.seed);
    sched.alpha = cfg.alpha;
    sched.eps = cfg.eps;

    PromptChain chain = build_reasoning_chain(p, cfg.scenario);
    std::unique_ptr<LLMClient> client;
    if (!cfg.no_llm) {
        if (cfg.client_mode == "mock")
            client = std::make_unique<DirectoryMockClient>(cfg.mock_dir);
        else if (cfg.client_mode == "remote")
            client = RemoteClient::from_env();
        else if (cfg.client_mode != "none")
            throw ConfigError{"unknown client mode: " + cfg.client_mode};
    }

    RecordTable table;
    FilterAudit audit(table);
    struct SkipInfo {
        TestInput input;
        int64_t version;
    };
    std::vector<SkipInfo> skipped;

    SpectraRecord cumulative;
    MutationContext ctx;
    int64_t discrepancies = 0;
    // generators stuck on subsumed inputs stop at this many total rows
    int64_t row_cap = std::max<int64_t>(cfg.max_executions * 10, 1000);
    bool stop = false;

    while (!stop && report.executions < cfg.max_executions &&
           static_cast<int64_t>(report.rows.size()) < row_cap) {
        double elapsed =
            std::chrono::duration<double>(clock::now() - t0).count();
        if (elapsed > cfg.max_seconds) break;

        auto batch = next_batch(sched, corpus, chain, client.get(), cfg.batch,
                                fmt, ctx, cfg.llm_ratio, &report.warnings);
        for (auto& item : batch) {
            if (report.executions >= cfg.max_executions) break;
            if (static_cast<int64_t>(report.rows.size()) >= row_cap) break;

            CampaignRow row;
            row.index = static_cast<int64_t>(report.rows.size());
            row.input_line = input_to_line(item.input);
            row.source = item.source;
            row.table_version = table.version;

            Decision d = cfg.no_filter ? Decision::Execute
                                       : should_execute(table, item.input);
            if (d == Decision::Skip) {
                row.decision = "skipped";
                row.verdict = "none";
                ++table.skips;
                ++report.skips;
                skipped.push_back({item.input, table.version});
            } else {
                row.decision = "executed";
                ExecTrace sw = run_software(q, item.input, cfg.step_budget);
                ExecTrace hwt = run_hardware(q, hw, item.input, cfg.step_budget);
                SpectraRecord sw_rec =
                    collect_spectra(sw, slice.members, syms, cfg.spectra);
                SpectraRecord hw_rec =
                    collect_spectra(hwt, slice.members, syms, cfg.spectra);
                DiscrepancyReport dr = compare_spectra(sw, sw_rec, hwt, hw_rec, hw);

                row.verdict = dr.discrepant() ? "discrepant" : "clean";
                for (auto& e : dr.symptoms)
                    if (std::find(row.classes.begin(), row.classes.end(), e.cls) ==
                        row.classes.end())
                        row.classes.push_back(e.cls);
                if (dr.discrepant()) {
                    ++discrepancies;
                    for (Symptom s : row.classes) report.distinct_classes.insert(s);
                    if (report.first_detection < 0) report.first_detection = row.index;
                    corpus.push_back(item.input);
                }

                merge_spectra(cumulative, sw_rec);
                ctx = context_from_feedback(feedback_array(cumulative));
                if (!cfg.uniform_mutation && item.op)
                    update_probabilities(sched, *item.op, dr.discrepant());

                update_record(table, item.input);
                audit.on_update(table);
                ++report.executions;

                if (cfg.exec_delay_ms > 0)
                    std::this_thread::sleep_for(
                        std::chrono::milliseconds(cfg.exec_delay_ms));
                if (cfg.stop_on_discrepancy && dr.discrepant()) {
                    report.status = "discrepancy_found";
                    stop = true;
                }
            }

            report.rows.push_back(std::move(row));
            report.series.push_back(discrepancies);
            if (stop) break;
        }
    }

    for (auto& s : skipped)
        if (!audit.skip_justified(s.version, s.input)) {
            report.skips_justified = false;
            break;
        }

    report.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    if (!cfg.report_dir.empty()) write_report_files(report, cfg);
    return report;
}

std::string report_machine_text(const CampaignReport& r, const CampaignConfig& cfg) {
    std::ostringstream out;
    out << "campaign_report v1\n";
    out << "program " << cfg.program_path << "\n";
    if (!cfg.harness_path.empty()) out << "harness " << cfg.harness_path << "\n";
    out << "target " << (cfg.target.empty() ? "<entry>.return" : cfg.target) << "\n";
    out << "seed " << cfg.seed << "\n";
    out << "batch " << cfg.batch << "\n";
    out << "flags uniform_mutation=" << cfg.uniform_mutation
        << " no_llm=" << cfg.no_llm << " no_filter=" << cfg.no_filter << "\n";
    out << "rows " << r.rows.size() << "\n";
    for (auto& row : r.rows) {
        out << "row " << row.index << " source=" << row.source
            << " decision=" << row.decision << " version=" << row.table_version
            << " verdict=" << row.verdict << " classes=" << join_classes(row.classes)
            << " input=" << row.input_line << "\n";
    }
    out << "series";
    for (int64_t c : r.series) out << " " << c;
    out << "\n";
    out << "executions " << r.executions << "\n";
    out << "skips " << r.skips << "\n";
    out << "distinct_classes ";
    bool first = true;
    for (Symptom s : r.distinct_classes) {
        if (!first) out << ",";
        out << symptom_name(s);
        first = false;
    }
    if (first) out << "-";
    out << "\n";
    out << "first_detection " << r.first_detection << "\n";
    out << "skips_justified " << (r.skips_justified ? "yes" : "no") << "\n";
    out << "m " << r.m << "\n";
    out << "n " << r.n << "\n";
    out << "status " << r.status << "\n";
    return out.str();
}

std::string report_human_text(const CampaignReport& r, const CampaignConfig& cfg) {
    std::ostringstream out;
    out << "Campaign over " << cfg.program_path;
    if (!cfg.harness_path.empty()) out << " (harness " << cfg.harness_path << ")";
    out << "\n";
    out << "  executed " << r.executions << " inputs, skipped " << r.skips
        << " as redundant\n";
    out << "  verdict: "
        << (r.discrepant() ? "DISCREPANCIES FOUND" : "no discrepancies") << "\n";
    if (r.discrepant()) {
        out << "  classes:";
        for (Symptom s : r.distinct_classes) out << " " << symptom_name(s);
        out << "\n";
        out << "  first detection at row " << r.first_detection << "\n";
    }
    if (r.repair) {
        out << "  harness repair: "
            << (r.repair->repaired() ? "repaired" : "exhausted") << " after "
            << r.repair->iterations << " iterations\n";
    }
    if (r.n > 0)
        out << "  pass rate: " << pass_rate(r.m, r.n) << "% (" << r.m << "/"
            << r.n << ")\n";
    for (auto& w : r.warnings) out << "  warning: " << w << "\n";
    out << "  status: " << r.status << "\n";
    out << "  wall time: " << r.wall_seconds << " s\n";
    return out.str();
}

std::optional<CampaignReport> parse_machine_report(const std::string& text,
                                                   CampaignConfig* cfg) {
    CampaignReport r;
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "campaign_report v1") return std::nullopt;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "row") {
            CampaignRow row;
            ls >> row.index;
            std::string tok;
            while (ls >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) return std::nullopt;
                std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
                if (k == "source") row.source = v;
                else if (k == "decision") row.decision = v;
                else if (k == "version") row.table_version = parse_int(v);
                else if (k == "verdict") row.verdict = v;
                else if (k == "classes") {
                    if (v != "-") {
                        std::istringstream cs(v);
                        std::string c;
                        while (std::getline(cs, c, ',')) {
                            auto s = symptom_from_name(c);
                            if (!s) return std::nullopt;
                            row.classes.push_back(*s);
                        }
                    }
                } else if (k == "input") {
                    std::string rest;
                    std::getline(ls, rest);
                    row.input_line = v + rest;
                }
            }
            r.rows.push_back(std::move(row));
        } else if (key == "series") {
            int64_t c;
            while (ls >> c) r.series.push_back(c);
        } else if (key == "executions") {
            ls >> r.executions;
        } else if (key == "skips") {
            ls >> r.skips;
        } else if (key == "distinct_classes") {
            std::string v;
            ls >> v;
            if (v != "-" && !v.empty()) {
                std::istringstream cs(v);
                std::string c;
                while (std::getline(cs, c, ',')) {
                    auto s = symptom_from_name(c);
                    if (!s) return std::nullopt;
                    r.distinct_classes.insert(*s);
                }
            }
        } else if (key == "first_detection") {
            ls >> r.first_detection;
        } else if (key == "skips_justified") {
            std::string v;
            ls >> v;
            r.skips_justified = v == "yes";
        } else if (key == "m") {
            ls >> r.m;
        } else if (key == "n") {
            ls >> r.n;
        } else if (key == "status") {
            ls >> r.status;
        } else if (cfg && key == "program") {
            ls >> cfg->program_path;
        } else if (cfg && key == "harness") {
            ls >> cfg->harness_path;
        } else if (cfg && key == "target") {
            std::string v;
            ls >> v;
            if (v != "<entry>.return") cfg->target = v;
        } else if (cfg && key == "seed") {
            ls >> cfg->seed;
        } else if (cfg && key == "batch") {
            ls >> cfg->batch;
        }
    }
    return r;
}

void write_report_files(const CampaignReport& r, const CampaignConfig& cfg) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.report_dir, ec);
    if (ec) throw ConfigError{"cannot create report dir: " + cfg.report_dir};
    {
        std::ofstream out(cfg.report_dir + "/report.txt");
        if (!out) throw ConfigError{"cannot write report.txt"};
        out << report_machine_text(r, cfg);
    }
    {
        std::ofstream out(cfg.report_dir + "/report_human.txt");
        out << report_human_text(r, cfg);
    }
    if (r.repair) {
        std::ofstream out(cfg.report_dir + "/repair.txt");
        out << repair_outcome_to_text(*r.repair);
    }
}

}  // namespace hlsdiff
