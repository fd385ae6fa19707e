#include "hlsdiff/interp.hpp"

#include <cmath>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace hlsdiff {

HardwareConfig derive_hw_config(const Program& p) {
    HardwareConfig cfg;
    for (auto& d : p.directives) {
        switch (d.kind) {
            case DirectiveKind::Width:
                cfg.type_overrides[d.qualified] =
                    TypeSpec::integer(static_cast<int>(d.a), d.is_signed);
                break;
            case DirectiveKind::Fixed:
                cfg.type_overrides[d.qualified] =
                    TypeSpec::fixed(static_cast<int>(d.a), static_cast<int>(d.b));
                break;
            case DirectiveKind::StaticArray:
                cfg.static_sizes[d.qualified] = d.a;
                break;
            case DirectiveKind::Pipeline:
                cfg.pipeline[d.qualified] = d.a;
                break;
            case DirectiveKind::Unroll:
                cfg.unroll[d.qualified] = d.a;
                break;
            case DirectiveKind::Dataflow:
                cfg.dataflow[d.qualified] = d.a;
                break;
            case DirectiveKind::StackLimit:
                cfg.stack_limit[d.qualified] = d.a;
                break;
        }
    }
    return cfg;
}

int64_t wrap_to_width(int64_t v, const TypeSpec& t) {
    int w = t.width;
    bool sgn = t.is_signed;
    if (t.kind == BaseType::Fixed) {
        w = t.int_bits;  // integer part only
        sgn = true;
    }
    if (w >= 64) return v;
    uint64_t mask = (uint64_t(1) << w) - 1;
    uint64_t x = static_cast<uint64_t>(v) & mask;
    if (sgn && ((x >> (w - 1)) & 1)) x |= ~mask;
    return static_cast<int64_t>(x);
}

double quantize_fixed(double v, const TypeSpec& t, bool* dropped) {
    if (dropped) *dropped = false;
    if (!std::isfinite(v)) {
        if (dropped) *dropped = true;
        return 0.0;
    }
    int frac = t.width - t.int_bits;
    double scaled = std::trunc(std::ldexp(v, frac));
    double span = std::ldexp(1.0, t.width);
    scaled = std::fmod(scaled, span);  // keep the raw value inside W bits
    int64_t bits = static_cast<int64_t>(scaled);
    bits = wrap_to_width(bits, TypeSpec::integer(t.width, true));
    double out = std::ldexp(static_cast<double>(bits), -frac);
    if (dropped && out != v) *dropped = true;
    return out;
}

namespace {

// dynamic arrays grow on write, but a runaway index is a fault, not an OOM
constexpr int64_t kGrowthCap = int64_t{1} << 20;

// the tree walker spends host stack per interpreted call, so runaway
// recursion must fault before the process stack does
constexpr int64_t kCallDepthCap = 2000;

struct FaultSignal {
    std::string reason;
};
struct BudgetSignal {};
struct ReturnSignal {
    std::optional<Num> value;
};
struct TaskAbort {};

struct ArrayVal {
    int rank = 1;
    int64_t rows = 0, cols = 0;  // rank 2 shape
    std::vector<Num> data;
    int64_t bound = -1;  // rank 1 hardware element bound, -1 = dynamic
    int64_t id = 0;
    Num last_write;
    bool wrote = false;
};
using ArrayRef = std::shared_ptr<ArrayVal>;

struct Value {
    bool is_array = false;
    Num num;
    ArrayRef arr;
    TypeSpec declared;
};

struct Frame {
    const Function* fn = nullptr;
    int64_t id = 0;
    std::map<std::string, Value> vars;
};
using FramePtr = std::shared_ptr<Frame>;

// innermost pipelined or unrolled loop the execution sits in
struct LoopCtx {
    bool is_unroll = false;
    int64_t factor = 0;  // pipeline latency L or unroll factor F
    int64_t iter = 0;
    std::string induction;  // qualified for-step variable, unroll only

    // pipeline: full write history per array element
    struct WriteRec {
        int64_t iter;
        Num before;
        Num after;
    };
    std::map<std::pair<int64_t, int64_t>, std::vector<WriteRec>> elem_hist;

    // unroll: value at block start plus the last iteration that wrote
    struct OldRec {
        Num block_start;
        int64_t last_write_iter = 0;
    };
    std::map<std::pair<int64_t, std::string>, OldRec> scalar_old;
    std::map<std::pair<int64_t, int64_t>, OldRec> elem_old;
};

// one sequential strand of execution (main, or one dataflow task)
struct ExecCtx {
    std::vector<FramePtr> frames;
    std::map<std::string, int64_t> call_depth;
    std::vector<LoopCtx*> loops;
};

class Interp {
  public:
    Interp(const Program& p, const TestInput& in, const ExecOptions& opt)
        : p_(p), in_(in), opt_(opt), hw_(opt.mode == ExecMode::Hardware) {
        for (auto& q : p.probed_vars()) probed_.insert(q);
        instrumented_ = p.instrumented;
        ctx_ = &main_ctx_;
    }

    ExecTrace run() {
        trace_.input_key = input_to_line(in_);
        try {
            setup_globals();
            auto args = build_entry_args();
            auto ret = call_function(*p_.find_function(p_.entry), std::move(args));
            trace_.ret = ret;
            trace_.status = RunStatus::Completed;
        } catch (const FaultSignal& f) {
            trace_.status = RunStatus::Faulted;
            trace_.fault_reason = f.reason;
        } catch (const BudgetSignal&) {
            trace_.status = RunStatus::BudgetExhausted;
        }
        collect_array_outputs();
        return std::move(trace_);
    }

  private:
    const Program& p_;
    const TestInput& in_;
    ExecOptions opt_;
    bool hw_;
    bool instrumented_ = false;
    std::set<std::string> probed_;

    ExecTrace trace_;
    int64_t steps_ = 0;
    int64_t next_array_id_ = 1;
    int64_t next_frame_id_ = 1;

    std::map<std::string, Value> globals_;
    ExecCtx main_ctx_;
    ExecCtx* ctx_ = nullptr;

    std::map<std::string, std::deque<Num>> fifos_;
    int64_t fifo_depth_ = -1;  // bound inside a dataflow region, -1 unbounded
    bool in_dataflow_ = false;

    std::vector<ArrayRef> entry_arrays_;
    std::vector<std::string> entry_array_names_;

    // ---- plumbing ----

    void tick() {
        if (++steps_ > opt_.step_budget) throw BudgetSignal{};
    }

    void record(EventKind kind, const std::string& symbol, std::vector<Num> values,
                const std::string& detail = "") {
        Event e;
        e.kind = kind;
        e.symbol = symbol;
        e.values = std::move(values);
        e.step = ++steps_;
        e.detail = detail;
        trace_.events.push_back(std::move(e));
    }

    [[noreturn]] void fault(const std::string& reason, const std::string& symbol) {
        record(EventKind::Fault, symbol, {}, reason);
        throw FaultSignal{reason};
    }

    Frame& frame() { return *ctx_->frames.back(); }

    bool is_local(const std::string& name) {
        return !ctx_->frames.empty() && frame().vars.count(name) > 0;
    }

    std::string qualify_here(const std::string& name) {
        if (is_local(name)) return qualify(frame().fn->name, name);
        return name;
    }

    Value* find_var(const std::string& name) {
        if (!ctx_->frames.empty()) {
            auto it = frame().vars.find(name);
            if (it != frame().vars.end()) return &it->second;
        }
        auto it = globals_.find(name);
        if (it != globals_.end()) return &it->second;
        throw std::logic_error("unbound variable " + name);
    }

    int64_t owner_frame_id(const std::string& name) {
        if (is_local(name)) return frame().id;
        return 0;  // globals
    }

    TypeSpec effective_type(const std::string& qualified, const TypeSpec& declared) {
        if (hw_) {
            auto it = opt_.hw.type_overrides.find(qualified);
            if (it != opt_.hw.type_overrides.end()) return it->second;
        }
        return declared;
    }

    // assignment-time narrowing; records truncation evidence in hardware mode
    Num coerce_store(const Num& v, const TypeSpec& eff, const std::string& qualified) {
        switch (eff.kind) {
            case BaseType::Int:
            case BaseType::Uint:
                return Num::of_int(wrap_to_width(v.as_int(), eff));
            case BaseType::Fixed: {
                if (!hw_) return Num::of_real(v.as_double());
                double x = v.as_double();
                double q = quantize_fixed(x, eff, nullptr);
                // truncation means fraction bits were dropped; pure
                // integer-part wrap shows up in value ranges instead
                double scaled = std::ldexp(x, eff.width - eff.int_bits);
                if (std::isfinite(scaled) && std::trunc(scaled) != scaled)
                    record(EventKind::Write, qualified,
                           {Num::of_real(q), Num::of_real(x)}, "trunc");
                return Num::of_real(q);
            }
            case BaseType::Float:
                return Num::of_real(v.as_double());
        }
        return v;
    }

    // ---- setup ----

    ArrayRef make_array(int rank, int64_t rows, int64_t cols, int64_t n,
                        int64_t hw_bound) {
        auto a = std::make_shared<ArrayVal>();
        a->rank = rank;
        a->rows = rows;
        a->cols = cols;
        a->data.assign(static_cast<size_t>(n), Num::of_int(0));
        a->bound = hw_ ? hw_bound : -1;
        a->id = next_array_id_++;
        return a;
    }

    int64_t static_bound(const std::string& qualified, int64_t declared) {
        int64_t b = declared > 0 ? declared : -1;
        auto it = opt_.hw.static_sizes.find(qualified);
        if (it != opt_.hw.static_sizes.end()) b = it->second;
        return b;
    }

    void setup_globals() {
        for (auto& g : p_.globals) {
            Value v;
            v.declared = g.type;
            if (g.dims.empty()) {
                Num init = g.init.value_or(Num::of_int(0));
                v.num = coerce_store(init, effective_type(g.name, g.type), g.name);
            } else {
                v.is_array = true;
                if (g.dims.size() == 1) {
                    int64_t bound = static_bound(g.name, g.dims[0]);
                    int64_t n = g.dims[0];
                    if (hw_ && n == 0 && bound > 0) n = bound;
                    v.arr = make_array(1, 0, 0, n, bound);
                } else {
                    v.arr = make_array(2, g.dims[0], g.dims[1], g.dims[0] * g.dims[1],
                                       -1);
                }
            }
            globals_[g.name] = std::move(v);
        }
    }

    std::vector<Value> build_entry_args() {
        const Function* entry = p_.find_function(p_.entry);
        if (in_.entries.size() != entry->params.size())
            throw std::invalid_argument("input has wrong entry count");
        std::vector<Value> args;
        for (size_t i = 0; i < entry->params.size(); ++i) {
            auto& prm = entry->params[i];
            auto& e = in_.entries[i];
            if (e.rank != prm.rank)
                throw std::invalid_argument("input entry rank mismatch");
            std::string q = qualify(entry->name, prm.name);
            TypeSpec eff = effective_type(q, prm.type);
            Value v;
            v.declared = prm.type;
            if (prm.rank == 0) {
                v.num = coerce_store(e.values[0], eff, q);
            } else {
                v.is_array = true;
                int64_t bound = -1;
                if (prm.rank == 1) bound = static_bound(q, prm.dims[0]);
                v.arr = make_array(prm.rank, e.rows, e.cols,
                                   static_cast<int64_t>(e.values.size()), bound);
                for (size_t j = 0; j < e.values.size(); ++j)
                    v.arr->data[j] = coerce_store(e.values[j], eff, q);
                entry_arrays_.push_back(v.arr);
                entry_array_names_.push_back(prm.name);
            }
            args.push_back(std::move(v));
        }
        return args;
    }

    void collect_array_outputs() {
        for (size_t i = 0; i < entry_arrays_.size(); ++i)
            trace_.array_outputs.emplace_back(entry_array_names_[i],
                                              entry_arrays_[i]->data);
    }

    // ---- calls ----

    std::optional<Num> call_function(const Function& f, std::vector<Value> args) {
        int64_t depth = ++ctx_->call_depth[f.name];
        if (depth > kCallDepthCap) {
            --ctx_->call_depth[f.name];
            fault("stack_overflow", f.name);
        }
        if (hw_) {
            auto it = opt_.hw.stack_limit.find(f.name);
            if (it != opt_.hw.stack_limit.end() && depth > it->second) {
                --ctx_->call_depth[f.name];
                fault("stack_overflow", f.name);
            }
        }
        if (instrumented_) record(EventKind::Call, f.name, {Num::of_int(depth)});

        auto fr = std::make_shared<Frame>();
        fr->fn = &f;
        fr->id = next_frame_id_++;
        for (size_t i = 0; i < f.params.size(); ++i)
            fr->vars[f.params[i].name] = std::move(args[i]);
        ctx_->frames.push_back(std::move(fr));

        std::optional<Num> result;
        try {
            if (hw_ && !in_dataflow_ && opt_.hw.dataflow.count(f.name))
                exec_dataflow(f);
            else
                exec_block(f.body);
        } catch (const ReturnSignal& rs) {
            result = rs.value;
        } catch (...) {
            ctx_->frames.pop_back();
            --ctx_->call_depth[f.name];
            throw;
        }
        ctx_->frames.pop_back();
        --ctx_->call_depth[f.name];

        if (!f.return_type) return std::nullopt;
        if (!result) result = Num::of_int(0);  // fell off the end
        std::string rq = qualify(f.name, "return");
        return coerce_store(*result, effective_type(rq, *f.return_type), rq);
    }

    // ---- statements ----

    void exec_block(const std::vector<StmtPtr>& body) {
        for (auto& s : body) exec_stmt(*s);
    }

    void exec_stmt(const Stmt& s) {
        tick();
        switch (s.kind) {
            case StmtKind::Let:
                exec_let(s);
                break;
            case StmtKind::Assign:
                exec_assign(s);
                break;
            case StmtKind::If:
                if (!eval_num(*s.cond).is_zero())
                    exec_block(s.body);
                else
                    exec_block(s.else_body);
                break;
            case StmtKind::For:
            case StmtKind::While:
                exec_loop(s);
                break;
            case StmtKind::Return: {
                ReturnSignal rs;
                if (s.value) rs.value = eval_num(*s.value);
                throw rs;
            }
            case StmtKind::ExprStmt:
                eval(*s.value);
                break;
            case StmtKind::Push:
                fifo_push(s.channel, eval_num(*s.value));
                break;
            case StmtKind::Print:
                trace_.prints.push_back(eval_num(*s.value));
                break;
            case StmtKind::Probe:
                exec_probe(s.name);
                break;
        }
    }

    void exec_let(const Stmt& s) {
        std::string q = qualify(frame().fn->name, s.name);
        Value v;
        v.declared = s.type;
        if (s.dims.empty()) {
            Num init = s.value ? eval_num(*s.value) : Num::of_int(0);
            v.num = coerce_store(init, effective_type(q, s.type), q);
        } else if (s.value) {
            v = eval(*s.value);  // alloc initializer
            v.declared = s.type;
        } else {
            v.is_array = true;
            if (s.dims.size() == 1) {
                int64_t bound = static_bound(q, s.dims[0]);
                int64_t n = s.dims[0];
                if (hw_ && n == 0 && bound > 0) n = bound;
                v.arr = make_array(1, 0, 0, n, bound);
            } else {
                v.arr = make_array(2, s.dims[0], s.dims[1], s.dims[0] * s.dims[1], -1);
            }
        }
        frame().vars[s.name] = std::move(v);
    }

    void exec_probe(const std::string& name) {
        if (!instrumented_) return;
        Value* v = find_var(name);
        std::string q = qualify_here(name);
        if (!v->is_array) {
            record(EventKind::Write, q, {v->num});
        } else if (v->arr->wrote) {
            record(EventKind::Write, q, {v->arr->last_write});
        }
    }

    void exec_assign(const Stmt& s) {
        Value* slot = find_var(s.name);
        std::string q = qualify_here(s.name);
        TypeSpec eff = effective_type(q, slot->declared);
        if (s.index.empty()) {
            Num v = coerce_store(eval_num(*s.value), eff, q);
            LoopCtx* lc = cur_loop();
            if (lc && lc->is_unroll) {
                auto key = std::make_pair(owner_frame_id(s.name), s.name);
                auto it = lc->scalar_old.find(key);
                if (it == lc->scalar_old.end())
                    lc->scalar_old[key] = {slot->num, lc->iter};
                else
                    it->second.last_write_iter = lc->iter;
            }
            slot->num = v;
        } else {
            std::vector<int64_t> idx;
            for (auto& ix : s.index) idx.push_back(eval_num(*ix).as_int());
            Num v = coerce_store(eval_num(*s.value), eff, q);
            write_element(*slot->arr, q, idx, v);
        }
    }

    LoopCtx* cur_loop() { return ctx_->loops.empty() ? nullptr : ctx_->loops.back(); }

    void exec_loop(const Stmt& s) {
        if (s.kind == StmtKind::For) exec_stmt(*s.init_stmt);

        LoopCtx lc;
        bool has_ctx = false;
        std::string qlabel;
        if (!s.label.empty()) {
            qlabel = qualify(frame().fn->name, s.label);
            if (hw_) {
                auto uit = opt_.hw.unroll.find(qlabel);
                auto pit = opt_.hw.pipeline.find(qlabel);
                if (uit != opt_.hw.unroll.end()) {
                    lc.is_unroll = true;
                    lc.factor = uit->second;
                    has_ctx = true;
                    if (s.kind == StmtKind::For &&
                        s.step_stmt->kind == StmtKind::Assign &&
                        s.step_stmt->index.empty())
                        lc.induction = qualify_here(s.step_stmt->name);
                } else if (pit != opt_.hw.pipeline.end()) {
                    lc.factor = pit->second;
                    has_ctx = true;
                }
            }
        }
        if (has_ctx) ctx_->loops.push_back(&lc);

        try {
            int64_t iter = 0;
            while (true) {
                tick();
                lc.iter = iter;
                if (s.cond && eval_num(*s.cond).is_zero()) break;
                exec_block(s.body);
                if (s.kind == StmtKind::For) exec_stmt(*s.step_stmt);
                ++iter;
                if (instrumented_ && !s.label.empty())
                    record(EventKind::LoopIter, qlabel, {Num::of_int(iter)});
                // an unroll block commits once all its copies have run
                if (has_ctx && lc.is_unroll && iter % lc.factor == 0) {
                    lc.scalar_old.clear();
                    lc.elem_old.clear();
                }
            }
        } catch (...) {
            if (has_ctx) ctx_->loops.pop_back();
            throw;
        }
        if (has_ctx) ctx_->loops.pop_back();
    }

    // ---- arrays ----

    int64_t flat_index(ArrayVal& a, const std::string& q,
                       const std::vector<int64_t>& idx) {
        for (auto v : idx)
            if (v < 0) fault(hw_ ? "oob_static" : "oob", q);
        if (hw_) {
            if (a.rank == 1) {
                if (a.bound >= 0 && idx[0] >= a.bound) fault("oob_static", q);
            } else {
                if (idx[0] >= a.rows || idx[1] >= a.cols) fault("oob_static", q);
            }
        }
        return a.rank == 1 ? idx[0] : idx[0] * a.cols + idx[1];
    }

    Num live_element(ArrayVal& a, int64_t flat) {
        if (flat < static_cast<int64_t>(a.data.size()))
            return a.data[static_cast<size_t>(flat)];
        return Num::of_int(0);
    }

    Num read_element(ArrayVal& a, const std::string& q,
                     const std::vector<int64_t>& idx) {
        int64_t flat = flat_index(a, q, idx);
        if (instrumented_)
            record(EventKind::ArrayAccess, q, {Num::of_int(flat)}, "read");
        LoopCtx* lc = cur_loop();
        if (lc) {
            auto key = std::make_pair(a.id, flat);
            if (lc->is_unroll) {
                auto it = lc->elem_old.find(key);
                if (it != lc->elem_old.end() && it->second.last_write_iter != lc->iter)
                    return it->second.block_start;
            } else {
                auto it = lc->elem_hist.find(key);
                if (it != lc->elem_hist.end() && !it->second.empty()) {
                    // a write becomes visible once the pipeline has drained
                    // it; the current iteration forwards its own writes
                    Num fallback = live_element(a, flat);
                    auto& hist = it->second;
                    for (auto rec = hist.rbegin(); rec != hist.rend(); ++rec) {
                        if (rec->iter == lc->iter ||
                            rec->iter <= lc->iter - lc->factor - 1)
                            return rec->after;
                        fallback = rec->before;
                    }
                    return fallback;
                }
            }
        }
        return live_element(a, flat);
    }

    void write_element(ArrayVal& a, const std::string& q,
                       const std::vector<int64_t>& idx, const Num& v) {
        int64_t flat = flat_index(a, q, idx);
        if (flat >= kGrowthCap) fault(hw_ ? "oob_static" : "oob", q);
        if (instrumented_)
            record(EventKind::ArrayAccess, q, {Num::of_int(flat)}, "write");
        LoopCtx* lc = cur_loop();
        if (lc) {
            auto key = std::make_pair(a.id, flat);
            if (lc->is_unroll) {
                auto it = lc->elem_old.find(key);
                if (it == lc->elem_old.end())
                    lc->elem_old[key] = {live_element(a, flat), lc->iter};
                else
                    it->second.last_write_iter = lc->iter;
            } else {
                lc->elem_hist[key].push_back({lc->iter, live_element(a, flat), v});
            }
        }
        if (flat >= static_cast<int64_t>(a.data.size()))
            a.data.resize(static_cast<size_t>(flat) + 1, Num::of_int(0));
        a.data[static_cast<size_t>(flat)] = v;
        a.last_write = v;
        a.wrote = true;
    }

    // ---- expressions ----

    Num eval_num(const Expr& e) { return eval(e).num; }

    Value eval(const Expr& e) {
        tick();
        Value out;
        switch (e.kind) {
            case ExprKind::IntLit:
            case ExprKind::FloatLit:
                out.num = e.lit;
                return out;
            case ExprKind::VarRef: {
                Value* slot = find_var(e.name);
                if (slot->is_array) return *slot;
                LoopCtx* lc = cur_loop();
                if (lc && lc->is_unroll) {
                    std::string q = qualify_here(e.name);
                    if (q != lc->induction) {
                        auto key = std::make_pair(owner_frame_id(e.name), e.name);
                        auto it = lc->scalar_old.find(key);
                        if (it != lc->scalar_old.end() &&
                            it->second.last_write_iter != lc->iter) {
                            out.num = it->second.block_start;
                            return out;
                        }
                    }
                }
                out.num = slot->num;
                return out;
            }
            case ExprKind::Index: {
                Value* slot = find_var(e.name);
                std::vector<int64_t> idx;
                for (auto& a : e.args) idx.push_back(eval_num(*a).as_int());
                out.num = read_element(*slot->arr, qualify_here(e.name), idx);
                return out;
            }
            case ExprKind::Binary: {
                Num lhs = eval_num(*e.args[0]);
                Num rhs = eval_num(*e.args[1]);
                out.num = apply_binary(e.op, lhs, rhs);
                return out;
            }
            case ExprKind::Unary: {
                Num v = eval_num(*e.args[0]);
                if (e.op == "!")
                    out.num = Num::of_int(v.is_zero() ? 1 : 0);
                else if (v.real)
                    out.num = Num::of_real(-v.r);
                else
                    out.num =
                        Num::of_int(static_cast<int64_t>(-static_cast<uint64_t>(v.i)));
                return out;
            }
            case ExprKind::Call: {
                const Function* callee = p_.find_function(e.name);
                std::vector<Value> args;
                for (size_t i = 0; i < e.args.size(); ++i) {
                    auto& prm = callee->params[i];
                    if (prm.rank > 0) {
                        args.push_back(*find_var(e.args[i]->name));
                    } else {
                        Value a;
                        a.declared = prm.type;
                        std::string q = qualify(callee->name, prm.name);
                        a.num = coerce_store(eval_num(*e.args[i]),
                                             effective_type(q, prm.type), q);
                        args.push_back(std::move(a));
                    }
                }
                auto r = call_function(*callee, std::move(args));
                out.num = r.value_or(Num::of_int(0));
                return out;
            }
            case ExprKind::Pop:
                out.num = fifo_pop(e.name);
                return out;
            case ExprKind::Alloc: {
                int64_t n = eval_num(*e.args[0]).as_int();
                if (n < 0 || n >= kGrowthCap)
                    fault(hw_ ? "oob_static" : "oob", "alloc");
                out.is_array = true;
                out.arr = make_array(1, 0, 0, n, hw_ ? n : -1);
                return out;
            }
            case ExprKind::Len: {
                ArrayVal& a = *find_var(e.name)->arr;
                int64_t n;
                if (a.rank == 2)
                    n = a.rows * a.cols;
                else if (hw_ && a.bound >= 0)
                    n = a.bound;
                else
                    n = static_cast<int64_t>(a.data.size());
                out.num = Num::of_int(n);
                return out;
            }
        }
        return out;
    }

    Num apply_binary(const std::string& op, const Num& a, const Num& b) {
        if (op == "<") return Num::of_int(num_cmp(a, b) < 0 ? 1 : 0);
        if (op == "<=") return Num::of_int(num_cmp(a, b) <= 0 ? 1 : 0);
        if (op == ">") return Num::of_int(num_cmp(a, b) > 0 ? 1 : 0);
        if (op == ">=") return Num::of_int(num_cmp(a, b) >= 0 ? 1 : 0);
        if (op == "==") return Num::of_int(num_cmp(a, b) == 0 ? 1 : 0);
        if (op == "!=") return Num::of_int(num_cmp(a, b) != 0 ? 1 : 0);

        if (a.real || b.real) {
            double x = a.as_double(), y = b.as_double();
            if (op == "+") return Num::of_real(x + y);
            if (op == "-") return Num::of_real(x - y);
            if (op == "*") return Num::of_real(x * y);
            if (op == "/") {
                if (y == 0.0) return div_by_zero_result(true);
                return Num::of_real(x / y);
            }
            if (op == "%") {
                if (y == 0.0) return div_by_zero_result(true);
                return Num::of_real(std::fmod(x, y));
            }
        } else {
            uint64_t x = static_cast<uint64_t>(a.i);
            uint64_t y = static_cast<uint64_t>(b.i);
            if (op == "+") return Num::of_int(static_cast<int64_t>(x + y));
            if (op == "-") return Num::of_int(static_cast<int64_t>(x - y));
            if (op == "*") return Num::of_int(static_cast<int64_t>(x * y));
            if (op == "/") {
                if (b.i == 0) return div_by_zero_result(false);
                if (a.i == INT64_MIN && b.i == -1) return Num::of_int(INT64_MIN);
                return Num::of_int(a.i / b.i);
            }
            if (op == "%") {
                if (b.i == 0) return div_by_zero_result(false);
                if (a.i == INT64_MIN && b.i == -1) return Num::of_int(0);
                return Num::of_int(a.i % b.i);
            }
        }
        throw std::logic_error("bad operator " + op);
    }

    Num div_by_zero_result(bool real) {
        if (!hw_) fault("div_by_zero", "");
        // a hardware divider produces a defined value and keeps running
        record(EventKind::Fault, "", {}, "div_by_zero");
        return real ? Num::of_real(0.0) : Num::of_int(0);
    }

    // ---- FIFOs ----

    void fifo_push(const std::string& ch, const Num& v) {
        auto& q = fifos_[ch];
        if (fifo_depth_ > 0 && static_cast<int64_t>(q.size()) >= fifo_depth_) {
            if (df_active_task_ >= 0)
                df_block_until(
                    [&] { return static_cast<int64_t>(q.size()) < fifo_depth_; });
            else
                fault("fifo_deadlock", ch);
        }
        q.push_back(v);
        if (instrumented_)
            record(EventKind::FifoOp, ch, {Num::of_int(static_cast<int64_t>(q.size()))},
                   "push");
    }

    Num fifo_pop(const std::string& ch) {
        auto& q = fifos_[ch];
        if (fifo_depth_ > 0 && q.empty()) {
            if (df_active_task_ >= 0)
                df_block_until([&] { return !q.empty(); });
            else
                fault("fifo_deadlock", ch);
        }
        if (q.empty()) {
            record(EventKind::FifoOp, ch, {Num::of_int(0)}, "pop_empty");
            return Num::of_int(0);
        }
        Num v = q.front();
        q.pop_front();
        if (instrumented_)
            record(EventKind::FifoOp, ch, {Num::of_int(static_cast<int64_t>(q.size()))},
                   "pop");
        return v;
    }

    // ---- dataflow ----
    //
    // Tasks are the calls in the first run of two or more consecutive call
    // statements in the function body. Each runs on its own thread with its
    // own frame stack, but a single token serializes them: exactly one task
    // executes at any time, handing the token back when it finishes or
    // blocks on a FIFO. The scheduler grants the token round-robin; a full
    // round in which every live task stays blocked and no step executes is
    // a deadlock.

    struct DfTask {
        const Stmt* stmt = nullptr;
        ExecCtx ctx;
        std::thread th;
        enum class St { Idle, Running, Blocked, Done } st = St::Idle;
        std::exception_ptr err;
    };

    std::mutex df_mutex_;
    std::condition_variable df_cv_;
    std::vector<DfTask>* df_tasks_ = nullptr;
    int df_current_ = -1;      // task granted the token, -1 = scheduler
    int df_active_task_ = -1;  // task currently executing
    bool df_abort_ = false;

    // called by the running task; it effectively holds df_mutex_ already
    void df_block_until(const std::function<bool()>& ready) {
        auto& tasks = *df_tasks_;
        int me = df_active_task_;
        std::unique_lock<std::mutex> lk(df_mutex_, std::adopt_lock);
        while (!ready()) {
            tasks[static_cast<size_t>(me)].st = DfTask::St::Blocked;
            df_current_ = -1;
            df_active_task_ = -1;
            df_cv_.notify_all();
            df_cv_.wait(lk, [&] { return df_current_ == me || df_abort_; });
            if (df_abort_) {
                lk.release();
                throw TaskAbort{};
            }
            tasks[static_cast<size_t>(me)].st = DfTask::St::Running;
            df_active_task_ = me;
            ctx_ = &tasks[static_cast<size_t>(me)].ctx;
        }
        lk.release();
    }

    void exec_dataflow(const Function& f) {
        // statements before and after the parallel section run sequentially
        size_t first = f.body.size(), last = f.body.size();
        for (size_t i = 0; i < f.body.size(); ++i) {
            if (f.body[i]->kind != StmtKind::ExprStmt ||
                f.body[i]->value->kind != ExprKind::Call)
                continue;
            size_t j = i;
            while (j + 1 < f.body.size() && f.body[j + 1]->kind == StmtKind::ExprStmt &&
                   f.body[j + 1]->value->kind == ExprKind::Call)
                ++j;
            if (j > i) {
                first = i;
                last = j;
                break;
            }
            i = j;
        }

        in_dataflow_ = true;
        fifo_depth_ = opt_.hw.dataflow.at(f.name);
        try {
            if (first == f.body.size()) {
                exec_block(f.body);  // no parallel section to speak of
            } else {
                for (size_t i = 0; i < first; ++i) exec_stmt(*f.body[i]);
                run_df_tasks(f, first, last);
                for (size_t i = last + 1; i < f.body.size(); ++i)
                    exec_stmt(*f.body[i]);
            }
        } catch (...) {
            in_dataflow_ = false;
            fifo_depth_ = -1;
            throw;
        }
        in_dataflow_ = false;
        fifo_depth_ = -1;
    }

    void run_df_tasks(const Function& f, size_t first, size_t last) {
        std::vector<DfTask> tasks(last - first + 1);
        ExecCtx* parent_ctx = ctx_;
        df_tasks_ = &tasks;
        df_abort_ = false;
        df_current_ = -1;
        df_active_task_ = -1;

        for (size_t k = 0; k < tasks.size(); ++k) {
            tasks[k].stmt = f.body[first + k].get();
            tasks[k].ctx.frames.push_back(parent_ctx->frames.back());
            tasks[k].ctx.call_depth = parent_ctx->call_depth;
            int idx = static_cast<int>(k);
            tasks[k].th = std::thread([this, &tasks, idx] {
                std::unique_lock<std::mutex> lk(df_mutex_);
                df_cv_.wait(lk, [&] { return df_current_ == idx || df_abort_; });
                if (!df_abort_) {
                    auto& me = tasks[static_cast<size_t>(idx)];
                    me.st = DfTask::St::Running;
                    df_active_task_ = idx;
                    ctx_ = &me.ctx;
                    try {
                        lk.release();  // keep holding the mutex while running
                        exec_stmt(*me.stmt);
                        lk = std::unique_lock<std::mutex>(df_mutex_, std::adopt_lock);
                    } catch (const TaskAbort&) {
                        lk = std::unique_lock<std::mutex>(df_mutex_, std::adopt_lock);
                    } catch (...) {
                        me.err = std::current_exception();
                        lk = std::unique_lock<std::mutex>(df_mutex_, std::adopt_lock);
                    }
                }
                tasks[static_cast<size_t>(idx)].st = DfTask::St::Done;
                df_current_ = -1;
                df_active_task_ = -1;
                df_cv_.notify_all();
            });
        }

        bool deadlocked = false;
        std::exception_ptr err;
        {
            std::unique_lock<std::mutex> lk(df_mutex_);
            size_t live = tasks.size();
            while (live > 0 && !err) {
                bool progress = false;
                for (size_t k = 0; k < tasks.size(); ++k) {
                    if (tasks[k].st == DfTask::St::Done) continue;
                    int64_t before = steps_;
                    df_current_ = static_cast<int>(k);
                    df_cv_.notify_all();
                    df_cv_.wait(lk, [&] { return df_current_ == -1; });
                    if (tasks[k].st == DfTask::St::Done) {
                        --live;
                        progress = true;
                        if (tasks[k].err && !err) err = tasks[k].err;
                    } else if (steps_ != before) {
                        progress = true;
                    }
                }
                if (live > 0 && !progress && !err) {
                    deadlocked = true;
                    break;
                }
            }
            if (live > 0) {  // deadlock or error: wind the rest down
                df_abort_ = true;
                df_cv_.notify_all();
                df_cv_.wait(lk, [&] {
                    for (auto& t : tasks)
                        if (t.st != DfTask::St::Done) return false;
                    return true;
                });
            }
        }
        for (auto& t : tasks) t.th.join();
        df_tasks_ = nullptr;
        df_active_task_ = -1;
        ctx_ = parent_ctx;
        if (deadlocked) fault("fifo_deadlock", f.name);
        if (err) std::rethrow_exception(err);
    }
};

}  // namespace

ExecTrace run_program(const Program& p, const TestInput& in, const ExecOptions& opt) {
    Interp interp(p, in, opt);
    return interp.run();
}

ExecTrace run_software(const Program& p, const TestInput& in, int64_t budget) {
    ExecOptions opt;
    opt.mode = ExecMode::Software;
    opt.step_budget = budget;
    return run_program(p, in, opt);
}

ExecTrace run_hardware(const Program& p, const HardwareConfig& cfg, const TestInput& in,
                       int64_t budget) {
    ExecOptions opt;
    opt.mode = ExecMode::Hardware;
    opt.hw = cfg;
    opt.step_budget = budget;
    return run_program(p, in, opt);
}

}  // namespace hlsdiff
