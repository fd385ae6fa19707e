#include "hlsdiff/parser.hpp"

#include <charconv>
#include <functional>

#include "hlsdiff/lexer.hpp"

namespace hlsdiff {

namespace {

const std::set<std::string> kKeywords = {
    "fn",  "let",   "chan",  "if",    "else",  "for",    "while",    "return",
    "push", "pop",  "alloc", "len",   "print", "probe",  "int",      "uint",
    "fixed", "float", "signed", "unsigned"};

struct RawDirective {
    std::string name;
    std::vector<Token> args;  // comma-separated atoms (idents / ints)
    std::string enclosing_fn;
    SourceLoc loc;
};

class Parser {
  public:
    explicit Parser(const std::string& src) : toks_(lex(src)) {}

    Program run() {
        Program p;
        while (!at_end()) {
            if (peek_punct("@")) {
                raw_directives_.push_back(parse_raw_directive(""));
            } else if (peek_ident("chan")) {
                auto loc = cur().loc;
                next();
                std::string name = expect_ident("channel name");
                expect_punct(";");
                p.channels.push_back({name, loc});
            } else if (peek_ident("let")) {
                p.globals.push_back(parse_global());
            } else if (peek_ident("fn")) {
                p.functions.push_back(parse_function());
            } else {
                fail("expected 'fn', 'let', 'chan' or directive");
            }
        }
        bind(p);
        return p;
    }

  private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::vector<RawDirective> raw_directives_;
    std::string current_fn_;

    const Token& cur() const { return toks_[pos_]; }
    bool at_end() const { return cur().kind == Tok::End; }
    void next() { ++pos_; }

    [[noreturn]] void fail(const std::string& msg, const char* code = "E_SYNTAX") const {
        throw ParseError{code, msg, cur().loc};
    }
    [[noreturn]] void fail_at(SourceLoc loc, const std::string& msg,
                              const char* code = "E_SYNTAX") const {
        throw ParseError{code, msg, loc};
    }

    bool peek_punct(const std::string& s) const {
        return cur().kind == Tok::Punct && cur().text == s;
    }
    bool peek_ident(const std::string& s) const {
        return cur().kind == Tok::Ident && cur().text == s;
    }
    bool accept_punct(const std::string& s) {
        if (!peek_punct(s)) return false;
        next();
        return true;
    }
    void expect_punct(const std::string& s) {
        if (!accept_punct(s)) fail("expected '" + s + "'");
    }
    std::string expect_ident(const std::string& what) {
        if (cur().kind != Tok::Ident) fail("expected " + what);
        std::string s = cur().text;
        if (kKeywords.count(s)) fail("keyword '" + s + "' cannot be used as " + what);
        next();
        return s;
    }
    int64_t expect_int(const std::string& what) {
        bool neg = accept_punct("-");
        if (cur().kind != Tok::Int) fail("expected " + what);
        int64_t v = 0;
        auto& t = cur().text;
        auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc()) fail("integer literal out of range");
        next();
        return neg ? -v : v;
    }

    // ---- declarations ----

    TypeSpec parse_base_type() {
        if (cur().kind != Tok::Ident) fail("expected type name");
        std::string s = cur().text;
        next();
        if (s == "int") return TypeSpec::of(BaseType::Int);
        if (s == "uint") return TypeSpec::of(BaseType::Uint);
        if (s == "fixed") return TypeSpec::of(BaseType::Fixed);
        if (s == "float") return TypeSpec::of(BaseType::Float);
        fail("unknown type '" + s + "'");
    }

    // '[' INT? ']' groups; at most two
    std::vector<int64_t> parse_dims() {
        std::vector<int64_t> dims;
        while (peek_punct("[") && dims.size() < 2) {
            next();
            if (accept_punct("]")) {
                dims.push_back(0);
            } else {
                auto loc = cur().loc;
                int64_t n = expect_int("array size");
                if (n <= 0) fail_at(loc, "array size must be positive", "E_BAD_PARAM");
                dims.push_back(n);
                expect_punct("]");
            }
        }
        if (peek_punct("[")) fail("arrays have at most two dimensions");
        return dims;
    }

    VarDecl parse_global() {
        VarDecl g;
        g.loc = cur().loc;
        next();  // let
        g.name = expect_ident("variable name");
        expect_punct(":");
        g.type = parse_base_type();
        g.dims = parse_dims();
        if (g.dims.size() == 2 && (g.dims[0] == 0 || g.dims[1] == 0))
            fail_at(g.loc, "matrix declarations need explicit dimensions", "E_BAD_PARAM");
        if (accept_punct("=")) {
            if (!g.dims.empty()) fail("array globals cannot have initializers");
            bool neg = accept_punct("-");
            Num v;
            if (cur().kind == Tok::Int) {
                int64_t x = 0;
                std::from_chars(cur().text.data(), cur().text.data() + cur().text.size(), x);
                v = Num::of_int(neg ? -x : x);
            } else if (cur().kind == Tok::Float) {
                double x = 0;
                std::from_chars(cur().text.data(), cur().text.data() + cur().text.size(), x);
                v = Num::of_real(neg ? -x : x);
            } else {
                fail("global initializer must be a literal");
            }
            next();
            g.init = v;
        }
        expect_punct(";");
        return g;
    }

    Function parse_function() {
        Function f;
        f.loc = cur().loc;
        next();  // fn
        f.name = expect_ident("function name");
        current_fn_ = f.name;
        expect_punct("(");
        if (!peek_punct(")")) {
            do {
                Param prm;
                prm.loc = cur().loc;
                prm.name = expect_ident("parameter name");
                expect_punct(":");
                prm.type = parse_base_type();
                prm.dims = parse_dims();
                prm.rank = static_cast<int>(prm.dims.size());
                f.params.push_back(std::move(prm));
            } while (accept_punct(","));
        }
        expect_punct(")");
        if (accept_punct(":")) f.return_type = parse_base_type();
        f.body = parse_block();
        current_fn_.clear();
        return f;
    }

    std::vector<StmtPtr> parse_block() {
        expect_punct("{");
        std::vector<StmtPtr> stmts;
        while (!peek_punct("}")) {
            if (at_end()) fail("unterminated block");
            if (peek_punct("@")) {
                raw_directives_.push_back(parse_raw_directive(current_fn_));
                continue;
            }
            stmts.push_back(parse_stmt());
        }
        next();  // }
        return stmts;
    }

    RawDirective parse_raw_directive(const std::string& enclosing) {
        RawDirective d;
        d.loc = cur().loc;
        next();  // @
        if (cur().kind != Tok::Ident) fail("expected directive name after '@'");
        d.name = cur().text;
        d.enclosing_fn = enclosing;
        next();
        expect_punct("(");
        if (!peek_punct(")")) {
            do {
                // an argument is an identifier (possibly dotted) or an integer
                if (cur().kind == Tok::Ident) {
                    Token t = cur();
                    next();
                    while (peek_punct(".")) {
                        next();
                        if (cur().kind != Tok::Ident) fail("expected name after '.'");
                        t.text += "." + cur().text;
                        next();
                    }
                    d.args.push_back(t);
                } else if (cur().kind == Tok::Int) {
                    d.args.push_back(cur());
                    next();
                } else if (peek_punct("-")) {
                    Token t = cur();
                    next();
                    if (cur().kind != Tok::Int) fail("expected integer");
                    t.text = "-" + cur().text;
                    t.kind = Tok::Int;
                    next();
                    d.args.push_back(t);
                } else {
                    fail("bad directive argument");
                }
            } while (accept_punct(","));
        }
        expect_punct(")");
        return d;
    }

    // ---- statements ----

    StmtPtr parse_stmt() {
        if (peek_ident("let")) return parse_let();
        if (peek_ident("if")) return parse_if();
        if (peek_ident("for")) return parse_for("");
        if (peek_ident("while")) return parse_while("");
        if (peek_ident("return")) {
            auto s = std::make_unique<Stmt>();
            s->kind = StmtKind::Return;
            s->loc = cur().loc;
            next();
            if (!peek_punct(";")) s->value = parse_expr();
            expect_punct(";");
            return s;
        }
        if (peek_ident("push")) {
            auto s = std::make_unique<Stmt>();
            s->kind = StmtKind::Push;
            s->loc = cur().loc;
            next();
            expect_punct("(");
            s->channel = expect_ident("channel name");
            expect_punct(",");
            s->value = parse_expr();
            expect_punct(")");
            expect_punct(";");
            return s;
        }
        if (peek_ident("print")) {
            auto s = std::make_unique<Stmt>();
            s->kind = StmtKind::Print;
            s->loc = cur().loc;
            next();
            expect_punct("(");
            s->value = parse_expr();
            expect_punct(")");
            expect_punct(";");
            return s;
        }
        if (peek_ident("probe")) {
            auto s = std::make_unique<Stmt>();
            s->kind = StmtKind::Probe;
            s->loc = cur().loc;
            next();
            expect_punct("(");
            s->name = expect_ident("variable name");
            expect_punct(")");
            expect_punct(";");
            return s;
        }
        // label?
        if (cur().kind == Tok::Ident && !kKeywords.count(cur().text) &&
            pos_ + 1 < toks_.size() && toks_[pos_ + 1].kind == Tok::Punct &&
            toks_[pos_ + 1].text == ":") {
            std::string label = cur().text;
            next();
            next();
            if (peek_ident("for")) return parse_for(label);
            if (peek_ident("while")) return parse_while(label);
            fail("label must precede 'for' or 'while'");
        }
        auto s = parse_simple_stmt();
        expect_punct(";");
        return s;
    }

    StmtPtr parse_let() {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::Let;
        s->loc = cur().loc;
        next();
        s->name = expect_ident("variable name");
        expect_punct(":");
        s->type = parse_base_type();
        s->dims = parse_dims();
        if (s->dims.size() == 2 && (s->dims[0] == 0 || s->dims[1] == 0))
            fail_at(s->loc, "matrix declarations need explicit dimensions", "E_BAD_PARAM");
        if (accept_punct("=")) s->value = parse_expr();
        expect_punct(";");
        if (!s->dims.empty() && s->value && s->value->kind != ExprKind::Alloc)
            fail_at(s->loc, "array initializer must be alloc()");
        return s;
    }

    StmtPtr parse_if() {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::If;
        s->loc = cur().loc;
        next();
        expect_punct("(");
        s->cond = parse_expr();
        expect_punct(")");
        s->body = parse_block();
        if (peek_ident("else")) {
            next();
            s->else_body = parse_block();
        }
        return s;
    }

    StmtPtr parse_for(const std::string& label) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::For;
        s->loc = cur().loc;
        s->label = label;
        next();
        expect_punct("(");
        if (peek_ident("let"))
            s->init_stmt = parse_let();  // consumes ';'
        else {
            s->init_stmt = parse_simple_stmt();
            expect_punct(";");
        }
        s->cond = parse_expr();
        expect_punct(";");
        s->step_stmt = parse_simple_stmt();
        expect_punct(")");
        s->body = parse_block();
        return s;
    }

    StmtPtr parse_while(const std::string& label) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::While;
        s->loc = cur().loc;
        s->label = label;
        next();
        expect_punct("(");
        s->cond = parse_expr();
        expect_punct(")");
        s->body = parse_block();
        return s;
    }

    // assignment or call statement (no trailing ';')
    StmtPtr parse_simple_stmt() {
        auto s = std::make_unique<Stmt>();
        s->loc = cur().loc;
        std::string name = expect_ident("statement");
        if (peek_punct("(")) {
            auto call = std::make_unique<Expr>();
            call->kind = ExprKind::Call;
            call->loc = s->loc;
            call->name = name;
            next();
            if (!peek_punct(")")) {
                do {
                    call->args.push_back(parse_expr());
                } while (accept_punct(","));
            }
            expect_punct(")");
            s->kind = StmtKind::ExprStmt;
            s->value = std::move(call);
            return s;
        }
        s->kind = StmtKind::Assign;
        s->name = name;
        while (peek_punct("[") && s->index.size() < 2) {
            next();
            s->index.push_back(parse_expr());
            expect_punct("]");
        }
        expect_punct("=");
        s->value = parse_expr();
        return s;
    }

    // ---- expressions ----

    ExprPtr parse_expr() { return parse_cmp(); }

    ExprPtr make_binary(const std::string& op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::Binary;
        e->op = op;
        e->loc = loc;
        e->args.push_back(std::move(lhs));
        e->args.push_back(std::move(rhs));
        return e;
    }

    ExprPtr parse_cmp() {
        auto lhs = parse_add();
        while (cur().kind == Tok::Punct &&
               (cur().text == "<" || cur().text == "<=" || cur().text == ">" ||
                cur().text == ">=" || cur().text == "==" || cur().text == "!=")) {
            std::string op = cur().text;
            auto loc = cur().loc;
            next();
            lhs = make_binary(op, std::move(lhs), parse_add(), loc);
        }
        return lhs;
    }

    ExprPtr parse_add() {
        auto lhs = parse_mul();
        while (peek_punct("+") || peek_punct("-")) {
            std::string op = cur().text;
            auto loc = cur().loc;
            next();
            lhs = make_binary(op, std::move(lhs), parse_mul(), loc);
        }
        return lhs;
    }

    ExprPtr parse_mul() {
        auto lhs = parse_unary();
        while (peek_punct("*") || peek_punct("/") || peek_punct("%")) {
            std::string op = cur().text;
            auto loc = cur().loc;
            next();
            lhs = make_binary(op, std::move(lhs), parse_unary(), loc);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (peek_punct("-") || peek_punct("!")) {
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Unary;
            e->op = cur().text;
            e->loc = cur().loc;
            next();
            e->args.push_back(parse_unary());
            return e;
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        auto e = std::make_unique<Expr>();
        e->loc = cur().loc;
        if (cur().kind == Tok::Int) {
            int64_t v = 0;
            auto res = std::from_chars(cur().text.data(),
                                       cur().text.data() + cur().text.size(), v);
            if (res.ec != std::errc()) fail("integer literal out of range");
            e->kind = ExprKind::IntLit;
            e->lit = Num::of_int(v);
            next();
            return e;
        }
        if (cur().kind == Tok::Float) {
            double v = 0;
            std::from_chars(cur().text.data(), cur().text.data() + cur().text.size(), v);
            e->kind = ExprKind::FloatLit;
            e->lit = Num::of_real(v);
            next();
            return e;
        }
        if (accept_punct("(")) {
            auto inner = parse_expr();
            expect_punct(")");
            return inner;
        }
        if (peek_ident("pop")) {
            next();
            expect_punct("(");
            e->kind = ExprKind::Pop;
            e->name = expect_ident("channel name");
            expect_punct(")");
            return e;
        }
        if (peek_ident("alloc")) {
            next();
            expect_punct("(");
            e->kind = ExprKind::Alloc;
            e->args.push_back(parse_expr());
            expect_punct(")");
            return e;
        }
        if (peek_ident("len")) {
            next();
            expect_punct("(");
            e->kind = ExprKind::Len;
            e->name = expect_ident("array name");
            expect_punct(")");
            return e;
        }
        if (cur().kind == Tok::Ident) {
            std::string name = expect_ident("expression");
            if (peek_punct("(")) {
                e->kind = ExprKind::Call;
                e->name = name;
                next();
                if (!peek_punct(")")) {
                    do {
                        e->args.push_back(parse_expr());
                    } while (accept_punct(","));
                }
                expect_punct(")");
                return e;
            }
            if (peek_punct("[")) {
                e->kind = ExprKind::Index;
                e->name = name;
                while (peek_punct("[") && e->args.size() < 2) {
                    next();
                    e->args.push_back(parse_expr());
                    expect_punct("]");
                }
                return e;
            }
            e->kind = ExprKind::VarRef;
            e->name = name;
            return e;
        }
        fail("expected expression");
    }

    // ---- binding ----

    void bind(Program& p);
    void bind_directive(Program& p, const SymbolTable& syms, const RawDirective& rd);
    void check_body(const Program& p, const SymbolTable& syms, const Function& f,
                    const std::vector<StmtPtr>& body);
    void check_stmt(const Program& p, const SymbolTable& syms, const Function& f,
                    const Stmt& s);
    void check_expr(const Program& p, const SymbolTable& syms, const Function& f,
                    const Expr& e);
};

void Parser::bind(Program& p) {
    // unique function names
    for (size_t i = 0; i < p.functions.size(); ++i)
        for (size_t j = i + 1; j < p.functions.size(); ++j)
            if (p.functions[i].name == p.functions[j].name)
                fail_at(p.functions[j].loc,
                        "duplicate function '" + p.functions[j].name + "'",
                        "E_DUPLICATE_SYMBOL");
    for (size_t i = 0; i < p.channels.size(); ++i)
        for (size_t j = i + 1; j < p.channels.size(); ++j)
            if (p.channels[i].name == p.channels[j].name)
                fail_at(p.channels[j].loc,
                        "duplicate channel '" + p.channels[j].name + "'",
                        "E_DUPLICATE_SYMBOL");
    if (!p.find_function("main"))
        throw ParseError{"E_SYNTAX", "entry function 'main' not found", {1, 1}};
    p.entry = "main";

    SymbolTable syms = build_symbols(p);  // throws on duplicate variables

    for (auto& f : p.functions) check_body(p, syms, f, f.body);
    p.instrumented = !p.probed_vars().empty();

    for (auto& rd : raw_directives_) bind_directive(p, syms, rd);

    // at most one width/fixed directive per variable
    for (size_t i = 0; i < p.directives.size(); ++i) {
        auto k = p.directives[i].kind;
        if (k != DirectiveKind::Width && k != DirectiveKind::Fixed) continue;
        for (size_t j = i + 1; j < p.directives.size(); ++j) {
            auto k2 = p.directives[j].kind;
            if (k2 != DirectiveKind::Width && k2 != DirectiveKind::Fixed) continue;
            if (p.directives[i].qualified == p.directives[j].qualified)
                fail_at(p.directives[j].loc,
                        "variable '" + p.directives[j].qualified +
                            "' already has a width/fixed directive",
                        "E_DUPLICATE_SYMBOL");
        }
    }
    // a loop is either pipelined or unrolled, not both
    for (auto& d : p.directives) {
        if (d.kind != DirectiveKind::Pipeline) continue;
        for (auto& d2 : p.directives)
            if (d2.kind == DirectiveKind::Unroll && d2.qualified == d.qualified)
                fail_at(d2.loc,
                        "label '" + d.qualified + "' has both pipeline and unroll",
                        "E_BAD_PARAM");
    }
}

void Parser::bind_directive(Program& p, const SymbolTable& syms, const RawDirective& rd) {
    DirectiveBinding d;
    d.loc = rd.loc;
    d.target = rd.args.empty() ? "" : rd.args[0].text;

    auto need_args = [&](size_t n) {
        if (rd.args.size() != n)
            fail_at(rd.loc, "directive '" + rd.name + "' takes " + std::to_string(n) +
                                " arguments",
                    "E_BAD_PARAM");
    };
    auto arg_int = [&](size_t idx) -> int64_t {
        if (rd.args[idx].kind != Tok::Int)
            fail_at(rd.args[idx].loc, "expected integer argument", "E_BAD_PARAM");
        int64_t v = 0;
        auto& t = rd.args[idx].text;
        std::from_chars(t.data(), t.data() + t.size(), v);
        return v;
    };
    auto positive = [&](int64_t v, const char* what) {
        if (v <= 0)
            fail_at(rd.loc, std::string(what) + " must be strictly positive",
                    "E_BAD_PARAM");
        return v;
    };

    // a top-level directive naming a local must use the dotted "fn.var" form
    auto resolve_var = [&]() {
        const VarInfo* vi = syms.resolve(rd.enclosing_fn, d.target);
        if (!vi)
            fail_at(rd.loc, "directive target '" + d.target + "' is not a declared variable",
                    "E_UNKNOWN_DIRECTIVE");
        d.qualified = vi->qualified;
        return vi;
    };
    auto resolve_label = [&]() {
        std::string q = d.target;
        if (q.find('.') == std::string::npos && !rd.enclosing_fn.empty())
            q = qualify(rd.enclosing_fn, q);
        if (!syms.labels.count(q))
            fail_at(rd.loc, "directive target '" + d.target + "' is not a loop label",
                    "E_UNKNOWN_DIRECTIVE");
        d.qualified = q;
    };
    auto resolve_fn = [&]() {
        if (!p.find_function(d.target))
            fail_at(rd.loc, "directive target '" + d.target + "' is not a function",
                    "E_UNKNOWN_DIRECTIVE");
        d.qualified = d.target;
    };

    if (rd.name == "width") {
        need_args(3);
        d.kind = DirectiveKind::Width;
        if (!resolve_var()->type.is_integer())
            fail_at(rd.loc, "width targets an int/uint variable", "E_BAD_PARAM");
        d.a = positive(arg_int(1), "width");
        if (d.a > 64) fail_at(rd.loc, "width must be at most 64", "E_BAD_PARAM");
        auto& sgn = rd.args[2].text;
        if (sgn == "signed")
            d.is_signed = true;
        else if (sgn == "unsigned")
            d.is_signed = false;
        else
            fail_at(rd.loc, "width signedness must be 'signed' or 'unsigned'",
                    "E_BAD_PARAM");
    } else if (rd.name == "fixed") {
        need_args(3);
        d.kind = DirectiveKind::Fixed;
        auto vk = resolve_var()->type.kind;
        if (vk != BaseType::Fixed && vk != BaseType::Float)
            fail_at(rd.loc, "fixed targets a fixed/float variable", "E_BAD_PARAM");
        d.a = positive(arg_int(1), "width");
        d.b = positive(arg_int(2), "integer bits");
        if (d.a > 64) fail_at(rd.loc, "width must be at most 64", "E_BAD_PARAM");
        if (d.b > d.a)
            fail_at(rd.loc, "integer bits cannot exceed width", "E_BAD_PARAM");
    } else if (rd.name == "static_array") {
        need_args(2);
        d.kind = DirectiveKind::StaticArray;
        auto vi = resolve_var();
        if (vi->rank != 1)
            fail_at(rd.loc, "static_array target must be a one-dimensional array",
                    "E_BAD_PARAM");
        d.a = positive(arg_int(1), "array size");
    } else if (rd.name == "pipeline") {
        need_args(2);
        d.kind = DirectiveKind::Pipeline;
        resolve_label();
        d.a = positive(arg_int(1), "latency");
    } else if (rd.name == "unroll") {
        need_args(2);
        d.kind = DirectiveKind::Unroll;
        resolve_label();
        d.a = positive(arg_int(1), "factor");
    } else if (rd.name == "dataflow") {
        need_args(2);
        d.kind = DirectiveKind::Dataflow;
        resolve_fn();
        d.a = positive(arg_int(1), "fifo depth");
    } else if (rd.name == "stack_limit") {
        need_args(2);
        d.kind = DirectiveKind::StackLimit;
        resolve_fn();
        d.a = positive(arg_int(1), "stack depth");
    } else {
        fail_at(rd.loc, "unknown directive '@" + rd.name + "'", "E_UNKNOWN_DIRECTIVE");
    }
    p.directives.push_back(std::move(d));
}

void Parser::check_expr(const Program& p, const SymbolTable& syms, const Function& f,
                        const Expr& e) {
    switch (e.kind) {
        case ExprKind::IntLit:
        case ExprKind::FloatLit:
            break;
        case ExprKind::VarRef:
        case ExprKind::Index:
        case ExprKind::Len: {
            const VarInfo* vi = syms.resolve(f.name, e.name);
            if (!vi)
                fail_at(e.loc, "unknown variable '" + e.name + "'");
            if (e.kind == ExprKind::VarRef && vi->rank != 0)
                fail_at(e.loc, "array '" + e.name + "' used as a scalar value");
            if (e.kind == ExprKind::Index && vi->rank == 0)
                fail_at(e.loc, "'" + e.name + "' is not an array");
            if (e.kind == ExprKind::Index &&
                static_cast<int>(e.args.size()) != vi->rank)
                fail_at(e.loc, "'" + e.name + "' needs " + std::to_string(vi->rank) +
                                   " indices");
            if (e.kind == ExprKind::Len && vi->rank == 0)
                fail_at(e.loc, "len() needs an array");
            break;
        }
        case ExprKind::Pop:
            if (!p.has_channel(e.name))
                fail_at(e.loc, "unknown channel '" + e.name + "'");
            break;
        case ExprKind::Call: {
            const Function* callee = p.find_function(e.name);
            if (!callee) fail_at(e.loc, "unknown function '" + e.name + "'");
            if (callee->params.size() != e.args.size())
                fail_at(e.loc, "call to '" + e.name + "' expects " +
                                   std::to_string(callee->params.size()) + " arguments");
            for (size_t i = 0; i < e.args.size(); ++i) {
                auto& prm = callee->params[i];
                auto& arg = *e.args[i];
                if (prm.rank > 0) {
                    if (arg.kind != ExprKind::VarRef)
                        fail_at(arg.loc, "array parameter '" + prm.name +
                                             "' needs an array variable argument");
                    const VarInfo* vi = syms.resolve(f.name, arg.name);
                    if (!vi || vi->rank != prm.rank)
                        fail_at(arg.loc, "array argument rank mismatch for '" +
                                             prm.name + "'");
                } else {
                    check_expr(p, syms, f, arg);
                }
            }
            return;  // arguments already checked
        }
        default:
            break;
    }
    for (auto& a : e.args) check_expr(p, syms, f, *a);
}

void Parser::check_stmt(const Program& p, const SymbolTable& syms, const Function& f,
                        const Stmt& s) {
    switch (s.kind) {
        case StmtKind::Let:
            if (s.value) check_expr(p, syms, f, *s.value);
            break;
        case StmtKind::Assign: {
            const VarInfo* vi = syms.resolve(f.name, s.name);
            if (!vi) fail_at(s.loc, "unknown variable '" + s.name + "'");
            if (!s.index.empty() && vi->rank == 0)
                fail_at(s.loc, "'" + s.name + "' is not an array");
            if (s.index.empty() && vi->rank != 0)
                fail_at(s.loc, "cannot assign a whole array");
            if (!s.index.empty() && static_cast<int>(s.index.size()) != vi->rank)
                fail_at(s.loc, "'" + s.name + "' needs " + std::to_string(vi->rank) +
                                   " indices");
            for (auto& ix : s.index) check_expr(p, syms, f, *ix);
            check_expr(p, syms, f, *s.value);
            break;
        }
        case StmtKind::If:
            check_expr(p, syms, f, *s.cond);
            check_body(p, syms, f, s.body);
            check_body(p, syms, f, s.else_body);
            break;
        case StmtKind::For:
            check_stmt(p, syms, f, *s.init_stmt);
            check_expr(p, syms, f, *s.cond);
            check_stmt(p, syms, f, *s.step_stmt);
            check_body(p, syms, f, s.body);
            break;
        case StmtKind::While:
            check_expr(p, syms, f, *s.cond);
            check_body(p, syms, f, s.body);
            break;
        case StmtKind::Return:
            if (s.value) check_expr(p, syms, f, *s.value);
            break;
        case StmtKind::ExprStmt:
        case StmtKind::Print:
            check_expr(p, syms, f, *s.value);
            break;
        case StmtKind::Push:
            if (!p.has_channel(s.channel))
                fail_at(s.loc, "unknown channel '" + s.channel + "'");
            check_expr(p, syms, f, *s.value);
            break;
        case StmtKind::Probe:
            if (!syms.resolve(f.name, s.name))
                fail_at(s.loc, "unknown variable '" + s.name + "'");
            break;
    }
}

void Parser::check_body(const Program& p, const SymbolTable& syms, const Function& f,
                        const std::vector<StmtPtr>& body) {
    for (auto& sp : body) check_stmt(p, syms, f, *sp);
}

}  // namespace

Program parse_program(const std::string& source) {
    Parser parser(source);
    return parser.run();
}

const VarInfo* SymbolTable::resolve(const std::string& fn, const std::string& name) const {
    if (!fn.empty()) {
        auto it = vars.find(qualify(fn, name));
        if (it != vars.end()) return &it->second;
    }
    auto it = vars.find(name);  // global or already-qualified dotted name
    if (it != vars.end()) return &it->second;
    return nullptr;
}

SymbolTable build_symbols(const Program& p) {
    SymbolTable t;
    for (auto& g : p.globals) {
        if (t.vars.count(g.name) || p.has_channel(g.name))
            throw ParseError{"E_DUPLICATE_SYMBOL", "duplicate global '" + g.name + "'",
                             g.loc};
        VarInfo vi;
        vi.qualified = g.name;
        vi.type = g.type;
        vi.rank = static_cast<int>(g.dims.size());
        vi.dims = g.dims;
        vi.loc = g.loc;
        t.vars[vi.qualified] = vi;
    }
    for (auto& f : p.functions) {
        auto add = [&](const std::string& name, const TypeSpec& ty,
                       const std::vector<int64_t>& dims, bool is_param, SourceLoc loc) {
            std::string q = qualify(f.name, name);
            if (t.vars.count(q))
                throw ParseError{"E_DUPLICATE_SYMBOL",
                                 "duplicate variable '" + name + "' in '" + f.name + "'",
                                 loc};
            if (t.vars.count(name))
                throw ParseError{"E_DUPLICATE_SYMBOL",
                                 "local '" + name + "' shadows a global", loc};
            if (p.has_channel(name))
                throw ParseError{"E_DUPLICATE_SYMBOL",
                                 "local '" + name + "' shadows a channel", loc};
            VarInfo vi;
            vi.qualified = q;
            vi.func = f.name;
            vi.type = ty;
            vi.rank = static_cast<int>(dims.size());
            vi.dims = dims;
            vi.is_param = is_param;
            vi.loc = loc;
            t.vars[q] = vi;
        };
        for (auto& prm : f.params) add(prm.name, prm.type, prm.dims, true, prm.loc);

        std::function<void(const std::vector<StmtPtr>&)> walk =
            [&](const std::vector<StmtPtr>& body) {
                for (auto& sp : body) {
                    auto& s = *sp;
                    if (s.kind == StmtKind::Let) add(s.name, s.type, s.dims, false, s.loc);
                    if (s.kind == StmtKind::For) {
                        if (s.init_stmt && s.init_stmt->kind == StmtKind::Let)
                            add(s.init_stmt->name, s.init_stmt->type, s.init_stmt->dims,
                                false, s.init_stmt->loc);
                        walk(s.body);
                    }
                    if (s.kind == StmtKind::While) walk(s.body);
                    if (s.kind == StmtKind::If) {
                        walk(s.body);
                        walk(s.else_body);
                    }
                    if ((s.kind == StmtKind::For || s.kind == StmtKind::While) &&
                        !s.label.empty()) {
                        std::string q = qualify(f.name, s.label);
                        if (t.labels.count(q))
                            throw ParseError{"E_DUPLICATE_SYMBOL",
                                             "duplicate label '" + s.label + "'", s.loc};
                        t.labels.insert(q);
                    }
                }
            };
        walk(f.body);
    }
    return t;
}

}  // namespace hlsdiff
