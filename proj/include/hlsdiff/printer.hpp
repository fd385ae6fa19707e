#pragma once

#include <string>

#include "hlsdiff/ast.hpp"

namespace hlsdiff {

// Canonical source form: directives first (qualified targets), then channels,
// globals and functions. print_program(parse_program(s)) is a fixed point
// under reparsing.
std::string print_program(const Program& p);

std::string print_expr(const Expr& e);

}  // namespace hlsdiff
