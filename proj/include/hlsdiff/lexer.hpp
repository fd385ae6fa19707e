#pragma once

#include <string>
#include <vector>

#include "hlsdiff/ast.hpp"

namespace hlsdiff {

enum class Tok {
    Ident,
    Int,
    Float,
    Punct,  // single/double char operators and delimiters
    End
};

struct Token {
    Tok kind;
    std::string text;
    SourceLoc loc;
};

// Tokenizes MiniC source. Throws ParseError{E_SYNTAX} on bad characters
// or malformed numeric literals. '//' starts a line comment.
std::vector<Token> lex(const std::string& source);

}  // namespace hlsdiff
