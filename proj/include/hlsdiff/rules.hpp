#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hlsdiff/embed.hpp"

namespace hlsdiff {

struct RuleTemplate {
    std::string id;          // filename stem
    std::string sample_log;  // error log this rule answers
    std::string rule;        // summary of the constraint
    std::string before;      // offending snippet
    std::string after;       // repaired snippet
    std::vector<double> embedding;
};

struct RuleLoadError {
    std::string message;
};
struct EmptyLibrary {
    std::string message;
};

struct RuleLibrary {
    std::vector<RuleTemplate> templates;  // sorted by id
    Embedder embedder;

    const RuleTemplate* find(const std::string& id) const;
};

// Parses one template from SAMPLE_LOG / RULE / BEFORE / AFTER sections.
// Throws RuleLoadError when a required section is missing or empty.
RuleTemplate parse_rule_template(const std::string& id, const std::string& text);

// Loads every regular file in the directory as a template (id = stem), fits
// the embedder on the sample logs and embeds each template.
RuleLibrary load_rule_library(const std::string& dir);

RuleLibrary build_rule_library(std::vector<RuleTemplate> templates);

struct Retrieval {
    const RuleTemplate* tmpl;
    double similarity;
};

// argmax cosine similarity against the sample-log embeddings; ties go to the
// lowest id. Throws EmptyLibrary / EmptyText.
Retrieval retrieve(const std::string& error_log, const RuleLibrary& lib);

}  // namespace hlsdiff
