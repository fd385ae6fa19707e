#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hlsdiff/filter.hpp"
#include "hlsdiff/repair.hpp"
#include "hlsdiff/spectra.hpp"

namespace hlsdiff {

struct ConfigError {
    std::string message;
};
struct InvalidCounts {
    std::string message;
};

struct CampaignConfig {
    std::string program_path;
    std::string harness_path;  // optional second unit, prepended to the program
    std::string target;        // empty = "<entry>.return"
    int64_t max_executions = 10000;
    double max_seconds = 120.0;
    int64_t batch = 16;
    double llm_ratio = 0.3;
    double alpha = 0.04;
    double eps = 0.01;
    uint64_t seed = 1;
    std::string client_mode = "mock";  // mock | remote | none
    std::string mock_dir;
    std::string library_path;
    std::string report_dir;
    std::string seeds_path;
    std::string scenario;
    SpectraConfig spectra;
    bool uniform_mutation = false;  // freeze operator probabilities
    bool no_llm = false;            // mutation-only generation
    bool no_filter = false;         // execute every generated input
    bool stop_on_discrepancy = false;
    int64_t exec_delay_ms = 0;  // artificial per-execution latency
    int64_t step_budget = 1000000;
};

// one "key=value" assignment; throws ConfigError on unknown keys/bad values
void apply_config_entry(CampaignConfig& cfg, const std::string& key,
                        const std::string& value);
CampaignConfig parse_config_file(const std::string& path);

struct CampaignRow {
    int64_t index;
    std::string input_line;
    std::string source;    // llm | mutation
    std::string decision;  // executed | skipped
    int64_t table_version;  // record-table version justifying the decision
    std::string verdict;   // discrepant | clean | none (skipped)
    std::vector<Symptom> classes;
};

struct CampaignReport {
    std::vector<CampaignRow> rows;
    std::vector<int64_t> series;  // cumulative discrepancy count per row
    int64_t executions = 0;
    int64_t skips = 0;
    std::set<Symptom> distinct_classes;
    bool skips_justified = true;  // every skip replays as Skip at its version
    int64_t first_detection = -1;  // row index of the first discrepancy
    int64_t m = 0, n = 0;          // repair pass-rate numerator/denominator
    std::string status;  // budget_exhausted | discrepancy_found
    double wall_seconds = 0;  // human report only, never serialized
    std::vector<std::string> warnings;
    std::optional<RepairOutcome> repair;

    bool discrepant() const { return !distinct_classes.empty(); }
    int exit_code() const { return discrepant() ? 2 : 0; }
};

double pass_rate(int64_t m, int64_t n);  // 100*m/n, throws InvalidCounts

CampaignReport run_campaign(const CampaignConfig& cfg);

// byte-stable structured text (no timing); identical config + seed give an
// identical string
std::string report_machine_text(const CampaignReport& r, const CampaignConfig& cfg);
std::string report_human_text(const CampaignReport& r, const CampaignConfig& cfg);

// writes report.txt / report_human.txt (+ repair.txt) under cfg.report_dir
void write_report_files(const CampaignReport& r, const CampaignConfig& cfg);

// reads a machine report back; config fields found in the text are restored
// into cfg when given. Returns nullopt on malformed input.
std::optional<CampaignReport> parse_machine_report(const std::string& text,
                                                   CampaignConfig* cfg = nullptr);

}  // namespace hlsdiff
