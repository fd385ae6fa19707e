#include "hlsdiff/slicer.hpp"

#include <algorithm>
#include <deque>

namespace hlsdiff {

bool DepGraph::has_edge(const std::string& src, const std::string& dst) const {
    auto it = succs.find(src);
    return it != succs.end() && it->second.count(dst) > 0;
}

size_t DepGraph::edge_count() const {
    size_t n = 0;
    for (auto& [src, dsts] : succs) n += dsts.size();
    return n;
}

namespace {

class GraphBuilder {
  public:
    explicit GraphBuilder(const Program& p) : p_(p) {}

    DepGraph build() {
        for (auto& g : p_.globals) graph_.nodes.insert(g.name);
        for (auto& c : p_.channels) graph_.nodes.insert(c.name);
        for (auto& f : p_.functions) {
            for (auto& prm : f.params) graph_.nodes.insert(qualify(f.name, prm.name));
            for (auto& n : f.local_names()) graph_.nodes.insert(qualify(f.name, n));
            if (f.return_type) graph_.nodes.insert(qualify(f.name, "return"));
        }
        for (auto& f : p_.functions) {
            locals_ = f.local_names();
            fn_ = &f;
            walk_block(f.body);
        }
        return std::move(graph_);
    }

  private:
    const Program& p_;
    DepGraph graph_;
    const Function* fn_ = nullptr;
    std::set<std::string> locals_;

    std::string resolve(const std::string& name) const {
        if (locals_.count(name)) return qualify(fn_->name, name);
        return name;
    }

    void add_edge(const std::string& src, const std::string& dst) {
        graph_.nodes.insert(src);
        graph_.nodes.insert(dst);
        graph_.preds[dst].insert(src);
        graph_.succs[src].insert(dst);
    }

    void flow_into(const std::set<std::string>& srcs, const std::string& dst) {
        for (auto& s : srcs) add_edge(s, dst);
    }

    // collects the value sources of e; call arguments create their
    // arg -> param edges as a side effect
    void expr_deps(const Expr& e, std::set<std::string>& out) {
        switch (e.kind) {
            case ExprKind::IntLit:
            case ExprKind::FloatLit:
                break;
            case ExprKind::VarRef:
                out.insert(resolve(e.name));
                break;
            case ExprKind::Index:
                out.insert(resolve(e.name));
                for (auto& a : e.args) expr_deps(*a, out);
                break;
            case ExprKind::Binary:
            case ExprKind::Unary:
                for (auto& a : e.args) expr_deps(*a, out);
                break;
            case ExprKind::Call: {
                const Function* callee = p_.find_function(e.name);
                for (size_t i = 0; i < e.args.size(); ++i) {
                    std::set<std::string> arg_srcs;
                    expr_deps(*e.args[i], arg_srcs);
                    flow_into(arg_srcs, qualify(callee->name, callee->params[i].name));
                }
                if (callee->return_type)
                    out.insert(qualify(callee->name, "return"));
                break;
            }
            case ExprKind::Pop:
                out.insert(e.name);  // channel
                break;
            case ExprKind::Alloc:
                for (auto& a : e.args) expr_deps(*a, out);
                break;
            case ExprKind::Len:
                out.insert(resolve(e.name));
                break;
        }
    }

    // conditions and discarded expressions still get walked so calls
    // inside them contribute their arg -> param edges
    void visit_discard(const Expr& e) {
        std::set<std::string> ignored;
        expr_deps(e, ignored);
    }

    void walk_block(const std::vector<StmtPtr>& body) {
        for (auto& s : body) walk_stmt(*s);
    }

    void walk_stmt(const Stmt& s) {
        switch (s.kind) {
            case StmtKind::Let:
                if (s.value) {
                    std::set<std::string> srcs;
                    expr_deps(*s.value, srcs);
                    flow_into(srcs, resolve(s.name));
                }
                break;
            case StmtKind::Assign: {
                std::set<std::string> srcs;
                expr_deps(*s.value, srcs);
                for (auto& ix : s.index) expr_deps(*ix, srcs);
                flow_into(srcs, resolve(s.name));
                break;
            }
            case StmtKind::If:
                visit_discard(*s.cond);
                walk_block(s.body);
                walk_block(s.else_body);
                break;
            case StmtKind::For:
                walk_stmt(*s.init_stmt);
                if (s.cond) visit_discard(*s.cond);
                walk_block(s.body);
                walk_stmt(*s.step_stmt);
                break;
            case StmtKind::While:
                if (s.cond) visit_discard(*s.cond);
                walk_block(s.body);
                break;
            case StmtKind::Return:
                if (s.value && fn_->return_type) {
                    std::set<std::string> srcs;
                    expr_deps(*s.value, srcs);
                    flow_into(srcs, qualify(fn_->name, "return"));
                }
                break;
            case StmtKind::ExprStmt:
                visit_discard(*s.value);
                break;
            case StmtKind::Push: {
                std::set<std::string> srcs;
                expr_deps(*s.value, srcs);
                flow_into(srcs, s.channel);
                break;
            }
            case StmtKind::Print:
                visit_discard(*s.value);
                break;
            case StmtKind::Probe:
                break;
        }
    }
};

}  // namespace

DepGraph build_dep_graph(const Program& p) { return GraphBuilder(p).build(); }

SliceResult backward_slice(const DepGraph& g, const Program& p,
                           const std::string& target) {
    std::string resolved;
    if (g.nodes.count(target)) {
        resolved = target;
    } else if (g.nodes.count(qualify(p.entry, target))) {
        resolved = qualify(p.entry, target);
    } else {
        throw SliceError{"unknown slice target: " + target};
    }

    std::set<std::string> members{resolved};
    std::deque<std::string> work{resolved};
    while (!work.empty()) {
        std::string v = work.front();
        work.pop_front();
        auto it = g.preds.find(v);
        if (it == g.preds.end()) continue;
        for (auto& u : it->second)
            if (members.insert(u).second) work.push_back(u);
    }

    SliceResult r;
    r.target = resolved;
    r.members.assign(members.begin(), members.end());
    for (auto& m : r.members) {
        auto it = g.preds.find(m);
        if (it == g.preds.end() || it->second.empty()) r.frontier.push_back(m);
    }
    return r;
}

SliceResult backward_slice(const Program& p, const std::string& target) {
    DepGraph g = build_dep_graph(p);
    return backward_slice(g, p, target);
}

}  // namespace hlsdiff
