#include "hlsdiff/compat.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace hlsdiff {

namespace {

void walk_exprs(const Stmt& s, const std::function<void(const Expr&)>& fn);

void walk_expr_tree(const Expr& e, const std::function<void(const Expr&)>& fn) {
    fn(e);
    for (auto& a : e.args) walk_expr_tree(*a, fn);
}

void walk_exprs(const Stmt& s, const std::function<void(const Expr&)>& fn) {
    if (s.value) walk_expr_tree(*s.value, fn);
    if (s.cond) walk_expr_tree(*s.cond, fn);
    for (auto& ix : s.index) walk_expr_tree(*ix, fn);
    if (s.init_stmt) walk_exprs(*s.init_stmt, fn);
    if (s.step_stmt) walk_exprs(*s.step_stmt, fn);
    for (auto& b : s.body) walk_exprs(*b, fn);
    for (auto& b : s.else_body) walk_exprs(*b, fn);
}

void walk_stmts(const std::vector<StmtPtr>& body,
                const std::function<void(const Stmt&)>& fn) {
    for (auto& sp : body) {
        fn(*sp);
        if (sp->init_stmt) fn(*sp->init_stmt);
        if (sp->step_stmt) fn(*sp->step_stmt);
        walk_stmts(sp->body, fn);
        walk_stmts(sp->else_body, fn);
    }
}

// functions that sit on a call-graph cycle (self calls included)
std::set<std::string> recursive_functions(const Program& p) {
    std::map<std::string, std::set<std::string>> calls;
    for (auto& f : p.functions) {
        auto& out = calls[f.name];
        walk_stmts(f.body, [&](const Stmt& s) {
            walk_exprs(s, [&](const Expr& e) {
                if (e.kind == ExprKind::Call) out.insert(e.name);
            });
        });
    }
    std::set<std::string> result;
    for (auto& f : p.functions) {
        // can f.name reach itself?
        std::set<std::string> seen;
        std::vector<std::string> stack(calls[f.name].begin(), calls[f.name].end());
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            if (cur == f.name) {
                result.insert(f.name);
                break;
            }
            if (!seen.insert(cur).second) continue;
            for (auto& n : calls[cur]) stack.push_back(n);
        }
        if (calls[f.name].count(f.name)) result.insert(f.name);
    }
    return result;
}

bool has_static_bound(const Program& p, const std::string& qualified) {
    return p.find_directive(DirectiveKind::StaticArray, qualified) != nullptr;
}

}  // namespace

CompatReport check_hw_compat(const Program& p) {
    CompatReport rep;
    auto add = [&](const char* code, const std::string& msg, SourceLoc loc) {
        rep.issues.push_back({code, msg, loc});
    };

    for (auto& f : p.functions) {
        for (auto& prm : f.params) {
            bool unsized =
                std::any_of(prm.dims.begin(), prm.dims.end(), [](int64_t d) { return d == 0; });
            if (!unsized) continue;
            if (prm.rank == 1 && has_static_bound(p, qualify(f.name, prm.name))) continue;
            add("E_UNSIZED_ARRAY",
                "parameter '" + prm.name + "' of '" + f.name +
                    "' has no static size; declare dimensions or add @static_array",
                prm.loc);
        }
        walk_stmts(f.body, [&](const Stmt& s) {
            if (s.kind == StmtKind::Let) {
                bool unsized = std::any_of(s.dims.begin(), s.dims.end(),
                                           [](int64_t d) { return d == 0; });
                if (unsized && !(s.dims.size() == 1 &&
                                 has_static_bound(p, qualify(f.name, s.name))))
                    add("E_UNSIZED_ARRAY",
                        "local array '" + s.name +
                            "' has no static size; declare dimensions or add @static_array",
                        s.loc);
            }
            if (s.kind == StmtKind::Print)
                add("E_UNSUPPORTED_BUILTIN",
                    "print() has no hardware equivalent; remove it", s.loc);
            walk_exprs(s, [&](const Expr& e) {
                if (e.kind == ExprKind::Alloc)
                    add("E_DYNAMIC_ALLOC",
                        "alloc() is dynamic allocation; use a statically sized array",
                        e.loc);
            });
        });
    }

    for (auto& name : recursive_functions(p)) {
        if (p.find_directive(DirectiveKind::StackLimit, name)) continue;
        const Function* f = p.find_function(name);
        add("E_RECURSION_NO_LIMIT",
            "function '" + name +
                "' is recursive with no bound; add @stack_limit or rewrite as a loop",
            f ? f->loc : SourceLoc{1, 1});
    }

    std::sort(rep.issues.begin(), rep.issues.end(),
              [](const CompatIssue& a, const CompatIssue& b) {
                  return std::tie(a.loc.line, a.loc.col, a.code) <
                         std::tie(b.loc.line, b.loc.col, b.code);
              });
    return rep;
}

std::string format_issue(const CompatIssue& issue) {
    std::ostringstream out;
    out << "ERROR " << issue.code << " " << issue.loc.line << ":" << issue.loc.col << " "
        << issue.message;
    return out.str();
}

std::string format_report(const CompatReport& report) {
    std::string out;
    for (auto& issue : report.issues) {
        out += format_issue(issue);
        out += "\n";
    }
    return out;
}

}  // namespace hlsdiff
