#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hlsdiff/num.hpp"

namespace hlsdiff {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

enum class BaseType { Int, Uint, Fixed, Float };

const char* base_type_name(BaseType t);

// Numeric shape of a variable. Width/int_bits only matter for the integer
// and fixed kinds; Float is always binary64.
struct TypeSpec {
    BaseType kind = BaseType::Int;
    int width = 32;
    int int_bits = 16;  // fixed only: integer bits I; fraction bits = width - I
    bool is_signed = true;

    static TypeSpec of(BaseType k);
    static TypeSpec integer(int w, bool sgn) {
        TypeSpec t;
        t.kind = sgn ? BaseType::Int : BaseType::Uint;
        t.width = w;
        t.is_signed = sgn;
        return t;
    }
    static TypeSpec fixed(int w, int i) {
        TypeSpec t;
        t.kind = BaseType::Fixed;
        t.width = w;
        t.int_bits = i;
        t.is_signed = true;
        return t;
    }
    bool is_integer() const { return kind == BaseType::Int || kind == BaseType::Uint; }
    bool operator==(const TypeSpec& o) const;
};

// ---- Expressions ----

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ExprKind {
    IntLit,
    FloatLit,
    VarRef,   // name
    Index,    // name [args[0]] ([args[1]])
    Binary,   // op, args[0], args[1]
    Unary,    // op ("-" or "!"), args[0]
    Call,     // name(args...)
    Pop,      // pop(channel)    -> name = channel
    Alloc,    // alloc(args[0])  -> dynamic 1-D array
    Len       // len(array)      -> name = array
};

struct Expr {
    ExprKind kind;
    SourceLoc loc;
    Num lit;                    // IntLit / FloatLit
    std::string name;           // VarRef/Index/Call/Pop/Len
    std::string op;             // Binary/Unary
    std::vector<ExprPtr> args;

    ExprPtr clone() const;
};

// ---- Statements ----

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

enum class StmtKind {
    Let,     // let name: type dims = init;
    Assign,  // lvalue = expr;
    If,
    For,     // label: for (init; cond; step) body
    While,   // label: while (cond) body
    Return,
    ExprStmt,  // bare call
    Push,      // push(channel, value);
    Print,     // print(expr);  host-side debug output, not synthesizable
    Probe      // probe(name);  runtime monitoring marker, semantically inert
};

struct Stmt {
    StmtKind kind;
    SourceLoc loc;

    // Let / Assign target
    std::string name;
    TypeSpec type;               // Let
    std::vector<int64_t> dims;   // Let: {} scalar, {0} unsized, {n}, {r,c}
    std::vector<ExprPtr> index;  // Assign: lvalue indices (0..2)
    ExprPtr value;               // Let init / Assign rhs / Return / ExprStmt / Push value / Print

    // If / While / For
    ExprPtr cond;
    std::vector<StmtPtr> body;
    std::vector<StmtPtr> else_body;
    StmtPtr init_stmt;  // For
    StmtPtr step_stmt;  // For
    std::string label;  // For / While (may be empty)

    std::string channel;  // Push

    StmtPtr clone() const;
};

// ---- Declarations ----

struct Param {
    std::string name;
    TypeSpec type;
    int rank = 0;                // 0 scalar, 1 array, 2 matrix
    std::vector<int64_t> dims;   // 0 entries mean unsized
    SourceLoc loc;
};

struct VarDecl {  // global
    std::string name;
    TypeSpec type;
    std::vector<int64_t> dims;
    std::optional<Num> init;  // literal initializer
    SourceLoc loc;
};

struct Function {
    std::string name;
    std::vector<Param> params;
    std::optional<TypeSpec> return_type;  // nullopt = void
    std::vector<StmtPtr> body;
    SourceLoc loc;

    Function clone() const;
    std::set<std::string> local_names() const;  // params + lets, plain names
};

enum class DirectiveKind {
    Width,        // @width(var, W, signed|unsigned)
    Fixed,        // @fixed(var, W, I)
    StaticArray,  // @static_array(var, N)
    Pipeline,     // @pipeline(label, L)
    Unroll,       // @unroll(label, F)
    Dataflow,     // @dataflow(fn, D)
    StackLimit    // @stack_limit(fn, depth)
};

const char* directive_name(DirectiveKind k);

struct DirectiveBinding {
    DirectiveKind kind;
    std::string target;     // as written in source
    std::string qualified;  // resolved: "fn.var", "fn.label", global or fn name
    int64_t a = 0;          // W / N / L / F / D / depth
    int64_t b = 0;          // fixed: I
    bool is_signed = true;  // width
    SourceLoc loc;
};

struct ChannelDecl {
    std::string name;
    SourceLoc loc;
};

struct Program {
    std::vector<VarDecl> globals;
    std::vector<ChannelDecl> channels;
    std::vector<Function> functions;
    std::vector<DirectiveBinding> directives;
    std::string entry;  // function named "main"

    // When true the interpreter emits loop/call/fifo/array-access events
    // and write events for variables named by probe statements. Set by
    // instrument() whenever it monitors at least one key variable.
    bool instrumented = false;

    Program clone() const;

    const Function* find_function(const std::string& name) const;
    const VarDecl* find_global(const std::string& name) const;
    bool has_channel(const std::string& name) const;
    // count of width/fixed directives targeting qualified name q
    const DirectiveBinding* find_directive(DirectiveKind k, const std::string& q) const;
    std::vector<std::string> probed_vars() const;  // sorted qualified names
};

inline std::string qualify(const std::string& fn, const std::string& var) {
    return fn + "." + var;
}

// Thrown by the parser/binder. code is one of E_SYNTAX,
// E_UNKNOWN_DIRECTIVE, E_DUPLICATE_SYMBOL, E_BAD_PARAM.
struct ParseError {
    std::string code;
    std::string message;
    SourceLoc loc;
};

}  // namespace hlsdiff
