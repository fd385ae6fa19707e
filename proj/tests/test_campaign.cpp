#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hlsdiff/campaign.hpp"

using namespace hlsdiff;

namespace {

std::string corpus_path(const std::string& name) {
    return std::string(HLSDIFF_SOURCE_DIR) + "/corpus/" + name;
}

CampaignConfig quick_config(const std::string& program, uint64_t seed = 7) {
    CampaignConfig cfg;
    cfg.program_path = corpus_path(program);
    cfg.max_executions = 120;
    cfg.batch = 8;
    cfg.seed = seed;
    cfg.client_mode = "none";
    return cfg;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("hlsdiff_campaign_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config entries parse into their typed fields") {
    CampaignConfig cfg;
    apply_config_entry(cfg, "program", "a.mc");
    apply_config_entry(cfg, "harness", "h.mc");
    apply_config_entry(cfg, "target", "main.x");
    apply_config_entry(cfg, "max_executions", "500");
    apply_config_entry(cfg, "max_seconds", "12.5");
    apply_config_entry(cfg, "batch", "4");
    apply_config_entry(cfg, "llm_ratio", "0.5");
    apply_config_entry(cfg, "alpha", "0.08");
    apply_config_entry(cfg, "eps", "0.02");
    apply_config_entry(cfg, "seed", "99");
    apply_config_entry(cfg, "client", "none");
    apply_config_entry(cfg, "uniform_mutation", "true");
    apply_config_entry(cfg, "no_llm", "true");
    apply_config_entry(cfg, "no_filter", "true");
    apply_config_entry(cfg, "stop_on_discrepancy", "true");
    apply_config_entry(cfg, "step_budget", "5000");

    CHECK(cfg.program_path == "a.mc");
    CHECK(cfg.harness_path == "h.mc");
    CHECK(cfg.target == "main.x");
    CHECK(cfg.max_executions == 500);
    CHECK(cfg.max_seconds == doctest::Approx(12.5));
    CHECK(cfg.batch == 4);
    CHECK(cfg.llm_ratio == doctest::Approx(0.5));
    CHECK(cfg.alpha == doctest::Approx(0.08));
    CHECK(cfg.eps == doctest::Approx(0.02));
    CHECK(cfg.seed == 99);
    CHECK(cfg.client_mode == "none");
    CHECK(cfg.uniform_mutation);
    CHECK(cfg.no_llm);
    CHECK(cfg.no_filter);
    CHECK(cfg.stop_on_discrepancy);
    CHECK(cfg.step_budget == 5000);
}

TEST_CASE("unknown keys and malformed values are config errors") {
    CampaignConfig cfg;
    CHECK_THROWS_AS(apply_config_entry(cfg, "no_such_key", "1"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "max_executions", "soon"),
                    ConfigError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "seed", "-3"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "client", "oracle"), ConfigError);
}

TEST_CASE("config files are key=value lines with comments") {
    TempDir dir;
    auto path = dir.path / "cfg.txt";
    {
        std::ofstream f(path);
        f << "# campaign settings\n"
          << "program = a.mc\n"
          << "seed=42\n"
          << "\n"
          << "batch = 4\n";
    }
    CampaignConfig cfg = parse_config_file(path.string());
    CHECK(cfg.program_path == "a.mc");
    CHECK(cfg.seed == 42);
    CHECK(cfg.batch == 4);
}

TEST_CASE("spectra toggles parse as a comma list") {
    CampaignConfig cfg;
    apply_config_entry(cfg, "spectra", "val,offset");
    CHECK(cfg.spectra.val);
    CHECK(cfg.spectra.offset);
    CHECK(!cfg.spectra.loop);
    CHECK(!cfg.spectra.stack);
    CHECK(!cfg.spectra.fifo);
    CHECK_THROWS_AS(apply_config_entry(cfg, "spectra", "val,bogus"),
                    ConfigError);
}

TEST_CASE("a zero budget yields an empty exhausted report") {
    CampaignConfig cfg = quick_config("p01_overflow_accum.mc");
    cfg.max_executions = 0;
    CampaignReport r = run_campaign(cfg);
    CHECK(r.rows.empty());
    CHECK(r.executions == 0);
    CHECK(r.status == "budget_exhausted");
    CHECK(!r.discrepant());
    CHECK(r.exit_code() == 0);
}

TEST_CASE("a planted overflow is found and classified") {
    CampaignConfig cfg = quick_config("p01_overflow_accum.mc");
    CampaignReport r = run_campaign(cfg);
    CHECK(r.discrepant());
    CHECK(r.distinct_classes.count(Symptom::Overflow) == 1);
    CHECK(r.exit_code() == 2);
    CHECK(r.first_detection >= 0);
    CHECK(r.skips_justified);
    REQUIRE(!r.series.empty());
    CHECK(r.series.size() == r.rows.size());
    for (size_t i = 1; i < r.series.size(); ++i)
        CHECK(r.series[i] >= r.series[i - 1]);  // cumulative counts rise
}

TEST_CASE("stop_on_discrepancy halts at the first find") {
    CampaignConfig cfg = quick_config("p01_overflow_accum.mc");
    cfg.stop_on_discrepancy = true;
    CampaignReport r = run_campaign(cfg);
    CHECK(r.status == "discrepancy_found");
    CHECK(r.first_detection == static_cast<int64_t>(r.rows.size()) - 1);
    CHECK(r.rows.back().verdict == "discrepant");
}

TEST_CASE("rows carry the filter decision and its table version") {
    CampaignConfig cfg = quick_config("p01_overflow_accum.mc");
    CampaignReport r = run_campaign(cfg);
    int64_t executed = 0, skipped = 0;
    for (const auto& row : r.rows) {
        if (row.decision == "executed") {
            ++executed;
            CHECK(row.verdict != "none");
        } else {
            REQUIRE(row.decision == "skipped");
            ++skipped;
            CHECK(row.verdict == "none");
            CHECK(row.classes.empty());
        }
        CHECK(row.table_version >= 0);
        CHECK(row.source == "mutation");  // client none
        CHECK(!row.input_line.empty());
    }
    CHECK(executed == r.executions);
    CHECK(skipped == r.skips);
    CHECK(executed <= cfg.max_executions);
}

TEST_CASE("no_filter executes every generated row") {
    CampaignConfig cfg = quick_config("p01_overflow_accum.mc");
    cfg.no_filter = true;
    cfg.max_executions = 40;
    CampaignReport r = run_campaign(cfg);
    CHECK(r.skips == 0);
    for (const auto& row : r.rows) CHECK(row.decision == "executed");
    CHECK(r.executions == static_cast<int64_t>(r.rows.size()));
}

TEST_CASE("identical configs and seeds give byte-identical machine reports") {
    CampaignConfig cfg = quick_config("p03_oob_bins.mc", 123);
    CampaignReport a = run_campaign(cfg);
    CampaignReport b = run_campaign(cfg);
    CHECK(report_machine_text(a, cfg) == report_machine_text(b, cfg));
}

TEST_CASE("different seeds explore different rows") {
    CampaignConfig one = quick_config("p03_oob_bins.mc", 5);
    CampaignConfig two = quick_config("p03_oob_bins.mc", 6);
    std::string a = report_machine_text(run_campaign(one), one);
    std::string b = report_machine_text(run_campaign(two), two);
    CHECK(a != b);
}

TEST_CASE("machine reports round-trip through the parser") {
    CampaignConfig cfg = quick_config("p01_overflow_accum.mc");
    CampaignReport r = run_campaign(cfg);
    std::string text = report_machine_text(r, cfg);

    CampaignConfig cfg2;
    auto back = parse_machine_report(text, &cfg2);
    REQUIRE(back.has_value());
    CHECK(back->executions == r.executions);
    CHECK(back->skips == r.skips);
    CHECK(back->distinct_classes == r.distinct_classes);
    CHECK(back->first_detection == r.first_detection);
    CHECK(back->status == r.status);
    CHECK(back->rows.size() == r.rows.size());
    CHECK(cfg2.seed == cfg.seed);

    // re-rendering the parsed report reproduces the text
    CHECK(report_machine_text(*back, cfg2) == text);
}

TEST_CASE("malformed report text parses to nothing") {
    CHECK(!parse_machine_report("").has_value());
    CHECK(!parse_machine_report("not a report\nat all\n").has_value());
}

TEST_CASE("the machine report never carries wall-clock text") {
    CampaignConfig cfg = quick_config("p01_overflow_accum.mc");
    CampaignReport r = run_campaign(cfg);
    std::string text = report_machine_text(r, cfg);
    CHECK(text.find("wall") == std::string::npos);
    CHECK(text.find("seconds") == std::string::npos);
    std::string human = report_human_text(r, cfg);
    CHECK(human.find("wall") != std::string::npos);
}

TEST_CASE("report files land under the report directory") {
    TempDir dir;
    CampaignConfig cfg = quick_config("p01_overflow_accum.mc");
    cfg.report_dir = dir.path.string();
    CampaignReport r = run_campaign(cfg);
    write_report_files(r, cfg);
    CHECK(std::filesystem::exists(dir.path / "report.txt"));
    CHECK(std::filesystem::exists(dir.path / "report_human.txt"));

    std::ifstream f(dir.path / "report.txt");
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == report_machine_text(r, cfg));
}

TEST_CASE("a missing program path is a config error") {
    CampaignConfig cfg;
    cfg.program_path = "/no/such/file.mc";
    cfg.client_mode = "none";
    CHECK_THROWS_AS(run_campaign(cfg), ConfigError);
}

TEST_CASE("uniform mutation freezes the operator distribution") {
    CampaignConfig cfg = quick_config("p01_overflow_accum.mc", 9);
    cfg.uniform_mutation = true;
    CampaignReport r = run_campaign(cfg);
    CHECK(r.discrepant());  // detection cannot depend on adaptation
}

TEST_CASE("a directive-free program comes back clean") {
    CampaignConfig cfg;
    cfg.program_path =
        std::string(HLSDIFF_SOURCE_DIR) + "/corpus/neutral/n1_sum_max.mc";
    cfg.max_executions = 60;
    cfg.batch = 8;
    cfg.seed = 3;
    cfg.client_mode = "none";
    CampaignReport r = run_campaign(cfg);
    CHECK(!r.discrepant());
    CHECK(r.status == "budget_exhausted");
    CHECK(r.exit_code() == 0);
}
