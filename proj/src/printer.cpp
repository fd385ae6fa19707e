#include "hlsdiff/printer.hpp"

#include <sstream>

namespace hlsdiff {

namespace {

int binary_prec(const std::string& op) {
    if (op == "*" || op == "/" || op == "%") return 3;
    if (op == "+" || op == "-") return 2;
    return 1;  // comparisons
}

void emit_expr(std::ostream& out, const Expr& e, int parent_prec, bool right_side) {
    switch (e.kind) {
        case ExprKind::IntLit:
        case ExprKind::FloatLit:
            out << num_to_string(e.lit);
            break;
        case ExprKind::VarRef:
            out << e.name;
            break;
        case ExprKind::Index:
            out << e.name;
            for (auto& ix : e.args) {
                out << "[";
                emit_expr(out, *ix, 0, false);
                out << "]";
            }
            break;
        case ExprKind::Binary: {
            int prec = binary_prec(e.op);
            bool parens = prec < parent_prec || (prec == parent_prec && right_side);
            if (parens) out << "(";
            emit_expr(out, *e.args[0], prec, false);
            out << " " << e.op << " ";
            emit_expr(out, *e.args[1], prec, true);
            if (parens) out << ")";
            break;
        }
        case ExprKind::Unary: {
            bool parens = 4 < parent_prec;
            if (parens) out << "(";
            out << e.op;
            emit_expr(out, *e.args[0], 4, false);
            if (parens) out << ")";
            break;
        }
        case ExprKind::Call:
            out << e.name << "(";
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) out << ", ";
                emit_expr(out, *e.args[i], 0, false);
            }
            out << ")";
            break;
        case ExprKind::Pop:
            out << "pop(" << e.name << ")";
            break;
        case ExprKind::Alloc:
            out << "alloc(";
            emit_expr(out, *e.args[0], 0, false);
            out << ")";
            break;
        case ExprKind::Len:
            out << "len(" << e.name << ")";
            break;
    }
}

void emit_dims(std::ostream& out, const std::vector<int64_t>& dims) {
    for (auto d : dims) {
        if (d == 0)
            out << "[]";
        else
            out << "[" << d << "]";
    }
}

void emit_indent(std::ostream& out, int depth) {
    for (int i = 0; i < depth; ++i) out << "    ";
}

// let / assign / call without trailing ';' (shared with for-headers)
void emit_simple_stmt(std::ostream& out, const Stmt& s) {
    switch (s.kind) {
        case StmtKind::Let:
            out << "let " << s.name << ": " << base_type_name(s.type.kind);
            emit_dims(out, s.dims);
            if (s.value) {
                out << " = ";
                emit_expr(out, *s.value, 0, false);
            }
            break;
        case StmtKind::Assign:
            out << s.name;
            for (auto& ix : s.index) {
                out << "[";
                emit_expr(out, *ix, 0, false);
                out << "]";
            }
            out << " = ";
            emit_expr(out, *s.value, 0, false);
            break;
        case StmtKind::ExprStmt:
            emit_expr(out, *s.value, 0, false);
            break;
        default:
            break;
    }
}

void emit_block(std::ostream& out, const std::vector<StmtPtr>& body, int depth);

void emit_stmt(std::ostream& out, const Stmt& s, int depth) {
    emit_indent(out, depth);
    switch (s.kind) {
        case StmtKind::Let:
        case StmtKind::Assign:
        case StmtKind::ExprStmt:
            emit_simple_stmt(out, s);
            out << ";\n";
            break;
        case StmtKind::If:
            out << "if (";
            emit_expr(out, *s.cond, 0, false);
            out << ") {\n";
            emit_block(out, s.body, depth + 1);
            emit_indent(out, depth);
            if (!s.else_body.empty()) {
                out << "} else {\n";
                emit_block(out, s.else_body, depth + 1);
                emit_indent(out, depth);
            }
            out << "}\n";
            break;
        case StmtKind::For:
            if (!s.label.empty()) out << s.label << ": ";
            out << "for (";
            emit_simple_stmt(out, *s.init_stmt);
            out << "; ";
            emit_expr(out, *s.cond, 0, false);
            out << "; ";
            emit_simple_stmt(out, *s.step_stmt);
            out << ") {\n";
            emit_block(out, s.body, depth + 1);
            emit_indent(out, depth);
            out << "}\n";
            break;
        case StmtKind::While:
            if (!s.label.empty()) out << s.label << ": ";
            out << "while (";
            emit_expr(out, *s.cond, 0, false);
            out << ") {\n";
            emit_block(out, s.body, depth + 1);
            emit_indent(out, depth);
            out << "}\n";
            break;
        case StmtKind::Return:
            out << "return";
            if (s.value) {
                out << " ";
                emit_expr(out, *s.value, 0, false);
            }
            out << ";\n";
            break;
        case StmtKind::Push:
            out << "push(" << s.channel << ", ";
            emit_expr(out, *s.value, 0, false);
            out << ");\n";
            break;
        case StmtKind::Print:
            out << "print(";
            emit_expr(out, *s.value, 0, false);
            out << ");\n";
            break;
        case StmtKind::Probe:
            out << "probe(" << s.name << ");\n";
            break;
    }
}

void emit_block(std::ostream& out, const std::vector<StmtPtr>& body, int depth) {
    for (auto& s : body) emit_stmt(out, *s, depth);
}

void emit_directive(std::ostream& out, const DirectiveBinding& d) {
    out << "@" << directive_name(d.kind) << "(" << d.qualified;
    switch (d.kind) {
        case DirectiveKind::Width:
            out << ", " << d.a << ", " << (d.is_signed ? "signed" : "unsigned");
            break;
        case DirectiveKind::Fixed:
            out << ", " << d.a << ", " << d.b;
            break;
        case DirectiveKind::StaticArray:
        case DirectiveKind::Pipeline:
        case DirectiveKind::Unroll:
        case DirectiveKind::Dataflow:
        case DirectiveKind::StackLimit:
            out << ", " << d.a;
            break;
    }
    out << ")\n";
}

}  // namespace

std::string print_expr(const Expr& e) {
    std::ostringstream out;
    emit_expr(out, e, 0, false);
    return out.str();
}

std::string print_program(const Program& p) {
    std::ostringstream out;
    for (auto& d : p.directives) emit_directive(out, d);
    if (!p.directives.empty()) out << "\n";
    for (auto& c : p.channels) out << "chan " << c.name << ";\n";
    if (!p.channels.empty()) out << "\n";
    for (auto& g : p.globals) {
        out << "let " << g.name << ": " << base_type_name(g.type.kind);
        emit_dims(out, g.dims);
        if (g.init) out << " = " << num_to_string(*g.init);
        out << ";\n";
    }
    if (!p.globals.empty()) out << "\n";
    for (size_t i = 0; i < p.functions.size(); ++i) {
        auto& f = p.functions[i];
        if (i) out << "\n";
        out << "fn " << f.name << "(";
        for (size_t j = 0; j < f.params.size(); ++j) {
            if (j) out << ", ";
            out << f.params[j].name << ": " << base_type_name(f.params[j].type.kind);
            emit_dims(out, f.params[j].dims);
        }
        out << ")";
        if (f.return_type) out << ": " << base_type_name(f.return_type->kind);
        out << " {\n";
        emit_block(out, f.body, 1);
        out << "}\n";
    }
    return out.str();
}

}  // namespace hlsdiff
