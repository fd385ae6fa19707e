#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "hlsdiff/ast.hpp"
#include "hlsdiff/compat.hpp"
#include "hlsdiff/parser.hpp"
#include "hlsdiff/printer.hpp"

using namespace hlsdiff;

namespace {

const char* kAccum = R"(fn main(data: int[8]): int {
    let sum: int = 0;
    @width(sum, 9, unsigned)
    acc: for (let i: int = 0; i < len(data); i = i + 1) {
        sum = sum + data[i];
    }
    return sum;
}
)";

}  // namespace

TEST_CASE("parser binds directives to qualified names") {
    Program p = parse_program(kAccum);
    REQUIRE(p.directives.size() == 1);
    CHECK(p.directives[0].kind == DirectiveKind::Width);
    CHECK(p.directives[0].qualified == "main.sum");
    CHECK(p.directives[0].a == 9);
    CHECK(p.directives[0].is_signed == false);
    CHECK(p.entry == "main");
}

TEST_CASE("print_program is a fixed point of parse_program") {
    std::string sources[] = {
        kAccum,
        "chan q;\n@dataflow(f, 2)\nfn f(n: int): int {\n    push(q, n);\n"
        "    return pop(q);\n}\nfn main(n: int): int {\n    return f(n);\n}\n",
        "let g: int = 5;\nfn main(m: float[2][2]): float {\n"
        "    return m[0][1] * 2.5;\n}\n",
    };
    for (auto& src : sources) {
        std::string once = print_program(parse_program(src));
        std::string twice = print_program(parse_program(once));
        CHECK(once == twice);
    }
}

TEST_CASE("parser rejects malformed programs") {
    auto code_of = [](const std::string& src) -> std::string {
        try {
            parse_program(src);
        } catch (const ParseError& e) {
            return e.code;
        }
        return "";
    };

    SUBCASE("entry function is required") {
        CHECK(code_of("fn helper(): int {\n    return 1;\n}\n") == "E_SYNTAX");
    }
    SUBCASE("duplicate width directives on one variable") {
        CHECK(code_of("@width(main.x, 8, signed)\n@width(main.x, 9, signed)\n"
                      "fn main(x: int): int {\n    return x;\n}\n") ==
              "E_DUPLICATE_SYMBOL");
    }
    SUBCASE("pipeline and unroll cannot share a label") {
        CHECK(code_of("@pipeline(main.l, 2)\n@unroll(main.l, 2)\n"
                      "fn main(n: int): int {\n"
                      "    let s: int = 0;\n"
                      "    l: for (let i: int = 0; i < n; i = i + 1) {\n"
                      "        s = s + i;\n    }\n    return s;\n}\n") ==
              "E_BAD_PARAM");
    }
    SUBCASE("width beyond 64 bits") {
        CHECK(code_of("@width(main.x, 96, unsigned)\n"
                      "fn main(x: int): int {\n    return x;\n}\n") == "E_BAD_PARAM");
    }
    SUBCASE("fixed integer bits above total width") {
        CHECK(code_of("@fixed(main.x, 8, 12)\n"
                      "fn main(x: float): float {\n    return x;\n}\n") ==
              "E_BAD_PARAM");
    }
    SUBCASE("unknown directive name") {
        CHECK(code_of("@vectorize(main.x, 4)\n"
                      "fn main(x: int): int {\n    return x;\n}\n") ==
              "E_UNKNOWN_DIRECTIVE");
    }
    SUBCASE("static_array needs a one-dimensional target") {
        CHECK(code_of("@static_array(main.m, 8)\n"
                      "fn main(m: int[2][2]): int {\n    return m[0][0];\n}\n") ==
              "E_BAD_PARAM");
    }
    SUBCASE("directive naming nothing") {
        CHECK(code_of("@width(main.ghost, 8, signed)\n"
                      "fn main(x: int): int {\n    return x;\n}\n") != "");
    }
}

TEST_CASE("symbol table resolves locals, globals and dotted names") {
    Program p = parse_program(
        "let g: int = 1;\n"
        "fn main(x: int): int {\n    let y: int = x + g;\n    return y;\n}\n");
    SymbolTable syms = build_symbols(p);
    REQUIRE(syms.resolve("main", "y") != nullptr);
    CHECK(syms.resolve("main", "y")->qualified == "main.y");
    REQUIRE(syms.resolve("main", "g") != nullptr);
    CHECK(syms.resolve("main", "g")->qualified == "g");
    REQUIRE(syms.resolve("", "main.x") != nullptr);
    CHECK(syms.resolve("", "main.x")->is_param);
    CHECK(syms.resolve("main", "ghost") == nullptr);
}

TEST_CASE("compatibility checker flags hardware-hostile constructs") {
    Program p = parse_program(
        "fn walk(n: int): int {\n"
        "    if (n <= 0) {\n        return 0;\n    }\n"
        "    return 1 + walk(n - 1);\n"
        "}\n\n"
        "fn main(data: int[], n: int): int {\n"
        "    let buf: int[];\n"
        "    buf[0] = walk(n);\n"
        "    print(buf[0]);\n"
        "    return buf[0] + data[0];\n"
        "}\n");
    CompatReport rep = check_hw_compat(p);
    REQUIRE(!rep.ok());

    std::vector<std::string> codes;
    for (auto& i : rep.issues) codes.push_back(i.code);
    CHECK(std::count(codes.begin(), codes.end(), "E_UNSIZED_ARRAY") == 2);
    CHECK(std::count(codes.begin(), codes.end(), "E_UNSUPPORTED_BUILTIN") == 1);
    CHECK(std::count(codes.begin(), codes.end(), "E_RECURSION_NO_LIMIT") == 1);

    for (size_t i = 1; i < rep.issues.size(); ++i) {
        auto& a = rep.issues[i - 1];
        auto& b = rep.issues[i];
        CHECK(std::tie(a.loc.line, a.loc.col, a.code) <=
              std::tie(b.loc.line, b.loc.col, b.code));
    }
}

TEST_CASE("compat messages carry the offending names") {
    Program p = parse_program(
        "fn kernel(data: int[]): int {\n    return data[0];\n}\n"
        "fn main(data: int[4]): int {\n    return kernel(data);\n}\n");
    CompatReport rep = check_hw_compat(p);
    REQUIRE(rep.issues.size() == 1);
    CHECK(rep.issues[0].message ==
          "parameter 'data' of 'kernel' has no static size; declare dimensions "
          "or add @static_array");
    std::string line = format_issue(rep.issues[0]);
    CHECK(line.rfind("ERROR E_UNSIZED_ARRAY ", 0) == 0);
}

TEST_CASE("static_array blesses an unsized local and parameter") {
    Program p = parse_program(
        "@static_array(kernel.data, 16)\n"
        "fn kernel(data: int[]): int {\n    return data[0];\n}\n"
        "@static_array(main.acc, 8)\n"
        "fn main(data: int[4]): int {\n"
        "    let acc: int[];\n"
        "    acc[0] = kernel(data);\n"
        "    return acc[0];\n}\n");
    CHECK(check_hw_compat(p).ok());
}

TEST_CASE("alloc and rank-2 holes are rejected regardless of directives") {
    Program p = parse_program(
        "@static_array(main.buf, 8)\n"
        "fn main(n: int): int {\n"
        "    let buf: int[] = alloc(n);\n    return buf[0];\n}\n");
    CompatReport rep = check_hw_compat(p);
    REQUIRE(rep.issues.size() == 1);
    CHECK(rep.issues[0].code == "E_DYNAMIC_ALLOC");
    CHECK(rep.issues[0].message ==
          "alloc() is dynamic allocation; use a statically sized array");
}
