#include "hlsdiff/ast.hpp"

#include <algorithm>

namespace hlsdiff {

const char* base_type_name(BaseType t) {
    switch (t) {
        case BaseType::Int: return "int";
        case BaseType::Uint: return "uint";
        case BaseType::Fixed: return "fixed";
        case BaseType::Float: return "float";
    }
    return "?";
}

TypeSpec TypeSpec::of(BaseType k) {
    TypeSpec t;
    t.kind = k;
    switch (k) {
        case BaseType::Int:
            t.width = 32;
            t.is_signed = true;
            break;
        case BaseType::Uint:
            t.width = 32;
            t.is_signed = false;
            break;
        case BaseType::Fixed:
            t.width = 32;
            t.int_bits = 16;
            t.is_signed = true;
            break;
        case BaseType::Float:
            t.width = 64;
            t.is_signed = true;
            break;
    }
    return t;
}

bool TypeSpec::operator==(const TypeSpec& o) const {
    if (kind != o.kind) return false;
    if (kind == BaseType::Float) return true;
    if (kind == BaseType::Fixed) return width == o.width && int_bits == o.int_bits;
    return width == o.width && is_signed == o.is_signed;
}

const char* directive_name(DirectiveKind k) {
    switch (k) {
        case DirectiveKind::Width: return "width";
        case DirectiveKind::Fixed: return "fixed";
        case DirectiveKind::StaticArray: return "static_array";
        case DirectiveKind::Pipeline: return "pipeline";
        case DirectiveKind::Unroll: return "unroll";
        case DirectiveKind::Dataflow: return "dataflow";
        case DirectiveKind::StackLimit: return "stack_limit";
    }
    return "?";
}

ExprPtr Expr::clone() const {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->loc = loc;
    e->lit = lit;
    e->name = name;
    e->op = op;
    e->args.reserve(args.size());
    for (auto& a : args) e->args.push_back(a->clone());
    return e;
}

StmtPtr Stmt::clone() const {
    auto s = std::make_unique<Stmt>();
    s->kind = kind;
    s->loc = loc;
    s->name = name;
    s->type = type;
    s->dims = dims;
    for (auto& ix : index) s->index.push_back(ix->clone());
    if (value) s->value = value->clone();
    if (cond) s->cond = cond->clone();
    for (auto& st : body) s->body.push_back(st->clone());
    for (auto& st : else_body) s->else_body.push_back(st->clone());
    if (init_stmt) s->init_stmt = init_stmt->clone();
    if (step_stmt) s->step_stmt = step_stmt->clone();
    s->label = label;
    s->channel = channel;
    return s;
}

Function Function::clone() const {
    Function f;
    f.name = name;
    f.params = params;
    f.return_type = return_type;
    for (auto& s : body) f.body.push_back(s->clone());
    f.loc = loc;
    return f;
}

Program Program::clone() const {
    Program p;
    p.globals = globals;
    p.channels = channels;
    for (auto& f : functions) p.functions.push_back(f.clone());
    p.directives = directives;
    p.entry = entry;
    p.instrumented = instrumented;
    return p;
}

const Function* Program::find_function(const std::string& name) const {
    for (auto& f : functions)
        if (f.name == name) return &f;
    return nullptr;
}

const VarDecl* Program::find_global(const std::string& name) const {
    for (auto& g : globals)
        if (g.name == name) return &g;
    return nullptr;
}

bool Program::has_channel(const std::string& name) const {
    for (auto& c : channels)
        if (c.name == name) return true;
    return false;
}

const DirectiveBinding* Program::find_directive(DirectiveKind k, const std::string& q) const {
    for (auto& d : directives)
        if (d.kind == k && d.qualified == q) return &d;
    return nullptr;
}

namespace {

void collect_probes(const Function& f, const std::set<std::string>& locals,
                    const std::vector<StmtPtr>& body, std::vector<std::string>& out) {
    for (auto& sp : body) {
        auto& s = *sp;
        if (s.kind == StmtKind::Probe)
            out.push_back(locals.count(s.name) ? qualify(f.name, s.name) : s.name);
        if (s.init_stmt && s.init_stmt->kind == StmtKind::Probe)
            out.push_back(locals.count(s.init_stmt->name)
                              ? qualify(f.name, s.init_stmt->name)
                              : s.init_stmt->name);
        collect_probes(f, locals, s.body, out);
        collect_probes(f, locals, s.else_body, out);
    }
}

void collect_locals(const std::vector<StmtPtr>& body, std::set<std::string>& names) {
    for (auto& sp : body) {
        auto& s = *sp;
        if (s.kind == StmtKind::Let) names.insert(s.name);
        if (s.init_stmt && s.init_stmt->kind == StmtKind::Let)
            names.insert(s.init_stmt->name);
        collect_locals(s.body, names);
        collect_locals(s.else_body, names);
    }
}

}  // namespace

std::set<std::string> Function::local_names() const {
    std::set<std::string> names;
    for (auto& prm : params) names.insert(prm.name);
    collect_locals(body, names);
    return names;
}

std::vector<std::string> Program::probed_vars() const {
    std::vector<std::string> out;
    for (auto& f : functions) collect_probes(f, f.local_names(), f.body, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace hlsdiff
