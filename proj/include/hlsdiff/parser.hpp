#pragma once

#include <map>
#include <set>
#include <string>

#include "hlsdiff/ast.hpp"

namespace hlsdiff {

// Parses MiniC source into a bound Program: directives resolved to
// qualified targets, all variable/function references checked.
// Throws ParseError on malformed input.
Program parse_program(const std::string& source);

struct VarInfo {
    std::string qualified;
    std::string func;  // empty for globals
    TypeSpec type;
    int rank = 0;
    std::vector<int64_t> dims;  // 0 entries mean unsized
    bool is_param = false;
    SourceLoc loc;
};

struct SymbolTable {
    std::map<std::string, VarInfo> vars;  // keyed by qualified name
    std::set<std::string> labels;         // "fn.label"

    // Resolve an unqualified (or dotted) name seen in function fn.
    const VarInfo* resolve(const std::string& fn, const std::string& name) const;
};

// Collects every declared variable with its type and shape. The parser has
// already rejected duplicates, so this never fails on a parsed Program.
SymbolTable build_symbols(const Program& p);

}  // namespace hlsdiff
