#include "hlsdiff/rules.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace hlsdiff {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

const RuleTemplate* RuleLibrary::find(const std::string& id) const {
    for (auto& t : templates)
        if (t.id == id) return &t;
    return nullptr;
}

RuleTemplate parse_rule_template(const std::string& id, const std::string& text) {
    static const char* kSections[] = {"SAMPLE_LOG", "RULE", "BEFORE", "AFTER"};
    std::map<std::string, std::string> sections;
    std::string current;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::string stripped = trim(line);
        bool is_header = false;
        for (auto* s : kSections)
            if (stripped == s) {
                current = s;
                is_header = true;
                break;
            }
        if (is_header) continue;
        if (!current.empty()) sections[current] += line + "\n";
    }
    RuleTemplate t;
    t.id = id;
    t.sample_log = trim(sections["SAMPLE_LOG"]);
    t.rule = trim(sections["RULE"]);
    t.before = trim(sections["BEFORE"]);
    t.after = trim(sections["AFTER"]);
    if (t.sample_log.empty())
        throw RuleLoadError{"rule " + id + ": missing SAMPLE_LOG section"};
    if (t.rule.empty()) throw RuleLoadError{"rule " + id + ": missing RULE section"};
    if (t.before.empty() || t.after.empty())
        throw RuleLoadError{"rule " + id + ": missing BEFORE/AFTER example"};
    return t;
}

RuleLibrary build_rule_library(std::vector<RuleTemplate> templates) {
    if (templates.empty()) throw EmptyLibrary{"rule library has no templates"};
    std::sort(templates.begin(), templates.end(),
              [](const RuleTemplate& a, const RuleTemplate& b) { return a.id < b.id; });
    RuleLibrary lib;
    lib.templates = std::move(templates);
    std::vector<std::string> logs;
    for (auto& t : lib.templates) logs.push_back(t.sample_log);
    lib.embedder.fit(logs);
    for (auto& t : lib.templates) t.embedding = lib.embedder.embed(t.sample_log);
    return lib;
}

RuleLibrary load_rule_library(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw RuleLoadError{"rule library directory not found: " + dir};
    std::vector<RuleTemplate> templates;
    std::vector<fs::path> files;
    for (auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (auto& f : files) {
        std::ifstream in(f);
        std::stringstream buf;
        buf << in.rdbuf();
        templates.push_back(parse_rule_template(f.stem().string(), buf.str()));
    }
    return build_rule_library(std::move(templates));
}

Retrieval retrieve(const std::string& error_log, const RuleLibrary& lib) {
    if (lib.templates.empty()) throw EmptyLibrary{"rule library has no templates"};
    auto q = lib.embedder.embed(error_log);
    const RuleTemplate* best = nullptr;
    double best_sim = 0;
    for (auto& t : lib.templates) {
        double s = cosine(q, t.embedding);
        if (!best || s > best_sim) {
            best = &t;
            best_sim = s;
        }
        // equal scores fall through: templates are id-sorted, first wins
    }
    return {best, best_sim};
}

}  // namespace hlsdiff
