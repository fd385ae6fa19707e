#include "hlsdiff/lexer.hpp"

#include <cctype>

namespace hlsdiff {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    const size_t n = src.size();

    auto advance = [&](size_t k) {
        for (size_t j = 0; j < k; ++j) {
            if (src[i + j] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += k;
    };

    while (i < n) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') advance(1);
            continue;
        }
        SourceLoc loc{line, col};
        if (ident_start(c)) {
            size_t j = i;
            while (j < n && ident_char(src[j])) ++j;
            out.push_back({Tok::Ident, src.substr(i, j - i), loc});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            bool is_float = false;
            while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < n && src[j] == '.' && j + 1 < n &&
                std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                is_float = true;
                ++j;
                while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < n && (src[j] == 'e' || src[j] == 'E')) {
                size_t k = j + 1;
                if (k < n && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < n && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    is_float = true;
                    j = k;
                    while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                }
            }
            out.push_back({is_float ? Tok::Float : Tok::Int, src.substr(i, j - i), loc});
            advance(j - i);
            continue;
        }
        // two-char operators first
        if (i + 1 < n) {
            std::string two = src.substr(i, 2);
            if (two == "<=" || two == ">=" || two == "==" || two == "!=") {
                out.push_back({Tok::Punct, two, loc});
                advance(2);
                continue;
            }
        }
        static const std::string singles = "+-*/%<>=(){}[],:;@.!";
        if (singles.find(c) != std::string::npos) {
            out.push_back({Tok::Punct, std::string(1, c), loc});
            advance(1);
            continue;
        }
        throw ParseError{"E_SYNTAX", std::string("unexpected character '") + c + "'", loc};
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

}  // namespace hlsdiff
