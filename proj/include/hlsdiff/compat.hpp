#pragma once

#include <string>
#include <vector>

#include "hlsdiff/ast.hpp"

namespace hlsdiff {

struct CompatIssue {
    std::string code;
    std::string message;
    SourceLoc loc;
};

struct CompatReport {
    std::vector<CompatIssue> issues;  // sorted by (line, col, code)
    bool ok() const { return issues.empty(); }
};

// Flags constructs a hardware toolchain rejects: dynamic allocation,
// recursion without a stack limit, unsized arrays without a static bound,
// and unsupported builtins.
CompatReport check_hw_compat(const Program& p);

// "ERROR <code> <line>:<col> <message>"
std::string format_issue(const CompatIssue& issue);
std::string format_report(const CompatReport& report);

}  // namespace hlsdiff
