#include "hlsdiff/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hlsdiff {

// ---- instrumentation ----

namespace {

StmtPtr make_probe(const std::string& name, SourceLoc loc) {
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::Probe;
    s->loc = loc;
    s->name = name;
    return s;
}

void instrument_block(std::vector<StmtPtr>& body, const Function& fn,
                      const std::set<std::string>& locals,
                      const std::set<std::string>& kv) {
    std::vector<StmtPtr> out;
    out.reserve(body.size());
    for (auto& sp : body) {
        Stmt& s = *sp;
        switch (s.kind) {
            case StmtKind::If:
                instrument_block(s.body, fn, locals, kv);
                instrument_block(s.else_body, fn, locals, kv);
                break;
            case StmtKind::For:
            case StmtKind::While:
                instrument_block(s.body, fn, locals, kv);
                break;
            default:
                break;
        }
        bool is_write = s.kind == StmtKind::Let || s.kind == StmtKind::Assign;
        std::string target;
        if (is_write) {
            target = locals.count(s.name) ? qualify(fn.name, s.name) : s.name;
        }
        SourceLoc loc = s.loc;
        std::string src_name = s.name;
        out.push_back(std::move(sp));
        if (is_write && kv.count(target)) out.push_back(make_probe(src_name, loc));
    }
    body = std::move(out);
}

}  // namespace

Program instrument(const Program& p, const KeyVariableSet& kv) {
    SymbolTable syms = build_symbols(p);
    std::set<std::string> keys;
    for (auto& k : kv) {
        bool known = syms.vars.count(k) > 0 || p.has_channel(k);
        if (!known) {
            // synthetic return node of an existing function
            auto dot = k.rfind('.');
            if (dot != std::string::npos && k.substr(dot + 1) == "return" &&
                p.find_function(k.substr(0, dot)))
                known = true;
        }
        if (!known) throw UnknownVariable{"unknown key variable: " + k};
        keys.insert(k);
    }

    Program q = p.clone();
    if (keys.empty()) return q;
    for (auto& f : q.functions) {
        auto locals = f.local_names();
        instrument_block(f.body, f, locals, keys);
    }
    q.instrumented = true;
    return q;
}

// ---- collection ----

void Interval::include(const Num& v) {
    if (!seen) {
        lo = v;
        hi = v;
        seen = true;
        return;
    }
    if (num_cmp(v, lo) < 0) lo = v;
    if (num_cmp(v, hi) > 0) hi = v;
}

bool Interval::same_as(const Interval& o) const {
    if (seen != o.seen) return false;
    if (!seen) return true;
    return num_cmp(lo, o.lo) == 0 && num_cmp(hi, o.hi) == 0;
}

SpectraRecord collect_spectra(const ExecTrace& t, const KeyVariableSet& kv,
                              const SymbolTable& syms, const SpectraConfig& cfg) {
    SpectraRecord r;
    std::set<std::string> keys(kv.begin(), kv.end());

    for (auto& k : kv) {
        auto it = syms.vars.find(k);
        if (it == syms.vars.end()) continue;
        r.types[k] = it->second.type;
        if (cfg.val) r.val[k];  // empty-marked until a write shows up
        if (cfg.offset && it->second.rank > 0) r.offset[k];
    }

    for (auto& e : t.events) {
        switch (e.kind) {
            case EventKind::Write:
                if (cfg.val && keys.count(e.symbol) && !e.values.empty())
                    r.val[e.symbol].include(e.values[0]);
                break;
            case EventKind::ArrayAccess:
                if (cfg.offset && keys.count(e.symbol) && !e.values.empty())
                    r.offset[e.symbol].include(e.values[0]);
                break;
            case EventKind::LoopIter:
                if (cfg.loop && !e.values.empty()) {
                    auto& c = r.loop[e.symbol];
                    c = std::max(c, e.values[0].as_int());
                }
                break;
            case EventKind::Call:
                if (cfg.stack && !e.values.empty()) {
                    auto& c = r.stack[e.symbol];
                    c = std::max(c, e.values[0].as_int());
                }
                break;
            case EventKind::FifoOp:
                if (cfg.fifo && !e.values.empty()) {
                    auto& c = r.fifo[e.symbol];
                    c = std::max(c, e.values[0].as_int());
                }
                break;
            case EventKind::Fault:
                break;
        }
    }
    return r;
}

void merge_spectra(SpectraRecord& a, const SpectraRecord& b) {
    for (auto& [k, iv] : b.val) {
        if (!iv.seen) {
            a.val[k];
            continue;
        }
        a.val[k].include(iv.lo);
        a.val[k].include(iv.hi);
    }
    for (auto& [k, iv] : b.offset) {
        if (!iv.seen) {
            a.offset[k];
            continue;
        }
        a.offset[k].include(iv.lo);
        a.offset[k].include(iv.hi);
    }
    for (auto& [k, c] : b.loop) a.loop[k] = std::max(a.loop[k], c);
    for (auto& [k, c] : b.stack) a.stack[k] = std::max(a.stack[k], c);
    for (auto& [k, c] : b.fifo) a.fifo[k] = std::max(a.fifo[k], c);
    for (auto& [k, ty] : b.types) a.types.emplace(k, ty);
}

namespace {

std::string interval_text(const Interval& iv) {
    if (!iv.seen) return "[]";
    return "[" + num_to_string(iv.lo) + ", " + num_to_string(iv.hi) + "]";
}

}  // namespace

std::string SpectraRecord::to_text() const {
    std::string out;
    for (auto& [k, iv] : val) out += "val " + k + " " + interval_text(iv) + "\n";
    for (auto& [k, iv] : offset) out += "offset " + k + " " + interval_text(iv) + "\n";
    for (auto& [k, c] : loop) out += "loop " + k + " " + std::to_string(c) + "\n";
    for (auto& [k, c] : stack) out += "stack " + k + " " + std::to_string(c) + "\n";
    for (auto& [k, c] : fifo) out += "fifo " + k + " " + std::to_string(c) + "\n";
    return out;
}

// ---- comparison ----

const char* symptom_name(Symptom s) {
    switch (s) {
        case Symptom::Overflow: return "Overflow";
        case Symptom::Truncation: return "Truncation";
        case Symptom::OutOfBounds: return "OutOfBounds";
        case Symptom::StackOverflow: return "StackOverflow";
        case Symptom::FifoFault: return "FifoFault";
        case Symptom::DivByZero: return "DivByZero";
        case Symptom::OrderDependence: return "OrderDependence";
        case Symptom::OutputMismatch: return "OutputMismatch";
    }
    return "?";
}

bool DiscrepancyReport::has(Symptom s) const {
    for (auto& e : symptoms)
        if (e.cls == s) return true;
    return false;
}

std::vector<std::string> DiscrepancyReport::classes() const {
    std::vector<std::string> out;
    for (auto& e : symptoms) {
        std::string n = symptom_name(e.cls);
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
    return out;
}

std::string DiscrepancyReport::to_text() const {
    std::string out = discrepant() ? "verdict discrepant\n" : "verdict clean\n";
    for (auto& e : symptoms)
        out += std::string("symptom ") + symptom_name(e.cls) + " " + e.variable +
               " | sw: " + e.sw_evidence + " | hw: " + e.hw_evidence + "\n";
    return out;
}

namespace {

// representable value range of a hardware type; false if unbounded
bool type_range(const TypeSpec& t, Num& lo, Num& hi) {
    if (t.kind == BaseType::Float) return false;
    if (t.is_integer()) {
        if (t.width >= 63) return false;
        if (t.kind == BaseType::Uint) {
            lo = Num::of_int(0);
            hi = Num::of_int((int64_t(1) << t.width) - 1);
        } else {
            lo = Num::of_int(-(int64_t(1) << (t.width - 1)));
            hi = Num::of_int((int64_t(1) << (t.width - 1)) - 1);
        }
        return true;
    }
    // fixed(W, I): [-2^(I-1), 2^(I-1) - 2^(I-W)]
    double top = std::ldexp(1.0, t.int_bits - 1);
    lo = Num::of_real(-top);
    hi = Num::of_real(top - std::ldexp(1.0, t.int_bits - t.width));
    return true;
}

bool exits_range(const Interval& iv, const Num& lo, const Num& hi) {
    if (!iv.seen) return false;
    return num_cmp(iv.lo, lo) < 0 || num_cmp(iv.hi, hi) > 0;
}

Symptom fault_class(const std::string& reason) {
    if (reason == "oob_static" || reason == "oob") return Symptom::OutOfBounds;
    if (reason == "stack_overflow") return Symptom::StackOverflow;
    if (reason == "fifo_deadlock") return Symptom::FifoFault;
    return Symptom::DivByZero;  // div_by_zero
}

bool equivalent_fault(const std::string& sw, const std::string& hw) {
    if (sw == hw) return true;
    return sw == "oob" && hw == "oob_static";
}

std::string status_text(const ExecTrace& t) {
    std::string s = status_name(t.status);
    if (!t.fault_reason.empty()) s += "(" + t.fault_reason + ")";
    return s;
}

std::string output_text(const ExecTrace& t) {
    std::string s = status_text(t);
    if (t.ret) s += " ret=" + num_to_string(*t.ret);
    return s;
}

}  // namespace

DiscrepancyReport compare_spectra(const ExecTrace& sw_trace,
                                  const SpectraRecord& sw_rec,
                                  const ExecTrace& hw_trace,
                                  const SpectraRecord& hw_rec,
                                  const HardwareConfig& cfg) {
    if (sw_trace.input_key != hw_trace.input_key)
        throw InputMismatch{"traces record different inputs: '" +
                            sw_trace.input_key + "' vs '" + hw_trace.input_key + "'"};

    DiscrepancyReport rep;
    bool diverged = !sw_trace.outputs_equal(hw_trace) ||
                    sw_trace.status != hw_trace.status ||
                    !equivalent_fault(sw_trace.fault_reason, hw_trace.fault_reason);

    // 1. overflow: the software range of a variable does not fit the type
    //    the hardware will give it, and behavior actually moved
    for (auto& [name, iv] : sw_rec.val) {
        TypeSpec hw_type;
        auto ov = cfg.type_overrides.find(name);
        if (ov != cfg.type_overrides.end()) {
            hw_type = ov->second;
        } else {
            auto ty = sw_rec.types.find(name);
            if (ty == sw_rec.types.end()) continue;
            hw_type = ty->second;
        }
        Num lo, hi;
        if (!type_range(hw_type, lo, hi)) continue;
        if (!exits_range(iv, lo, hi)) continue;
        bool val_moved = true;
        auto hv = hw_rec.val.find(name);
        if (hv != hw_rec.val.end()) val_moved = !iv.same_as(hv->second);
        if (!diverged && !val_moved) continue;
        std::string hw_ev = hv != hw_rec.val.end() ? "val " + interval_text(hv->second)
                                                   : "no record";
        rep.symptoms.push_back({Symptom::Overflow, name,
                                "val " + interval_text(iv) + " exceeds [" +
                                    num_to_string(lo) + ", " + num_to_string(hi) + "]",
                                hw_ev});
    }

    // 2. truncation: fixed-point coercions dropped fraction bits
    {
        std::set<std::string> done;
        for (auto& e : hw_trace.events) {
            if (e.kind != EventKind::Write || e.detail != "trunc") continue;
            if (!done.insert(e.symbol).second) continue;
            std::string sw_ev = "exact value";
            auto sv = sw_rec.val.find(e.symbol);
            if (sv != sw_rec.val.end() && sv->second.seen)
                sw_ev = "val " + interval_text(sv->second);
            rep.symptoms.push_back({Symptom::Truncation, e.symbol, sw_ev,
                                    "kept " + num_to_string(e.values[0]) +
                                        " of " + num_to_string(e.values[1])});
        }
    }

    // 3. hardware fault classes; a software fault of the same kind means
    //    both modes failed identically, which is agreement, not divergence
    {
        std::set<std::string> done;
        for (auto& e : hw_trace.events) {
            if (e.kind != EventKind::Fault) continue;
            if (!done.insert(e.detail + "|" + e.symbol).second) continue;
            if (sw_trace.status == RunStatus::Faulted &&
                hw_trace.status == RunStatus::Faulted &&
                equivalent_fault(sw_trace.fault_reason, e.detail))
                continue;
            rep.symptoms.push_back({fault_class(e.detail), e.symbol,
                                    status_text(sw_trace),
                                    "fault " + e.detail});
        }
    }

    // 4. order dependence: behavior moved under an ordering directive and
    //    nothing width-related explains it
    bool width_symptom =
        rep.has(Symptom::Overflow) || rep.has(Symptom::Truncation);
    bool ordered = !cfg.pipeline.empty() || !cfg.unroll.empty() ||
                   !cfg.dataflow.empty();
    if (diverged && ordered && !width_symptom) {
        std::string var;
        if (!cfg.pipeline.empty())
            var = cfg.pipeline.begin()->first;
        else if (!cfg.unroll.empty())
            var = cfg.unroll.begin()->first;
        else
            var = cfg.dataflow.begin()->first;
        rep.symptoms.push_back({Symptom::OrderDependence, var,
                                output_text(sw_trace), output_text(hw_trace)});
    }

    // 5. residual: behavior moved and no class above claimed it
    if (diverged && rep.symptoms.empty())
        rep.symptoms.push_back({Symptom::OutputMismatch, "output",
                                output_text(sw_trace), output_text(hw_trace)});

    return rep;
}

// ---- feedback ----

FeedbackArray feedback_array(const SpectraRecord& s) {
    FeedbackArray rows;
    for (auto& [name, iv] : s.val) {
        FeedbackRow row;
        auto ty = s.types.find(name);
        row.type = ty != s.types.end() ? base_type_name(ty->second.kind) : "int";
        row.name = name;
        row.lo = iv.seen ? iv.lo : Num::of_int(0);
        row.hi = iv.seen ? iv.hi : Num::of_int(0);
        rows.push_back(std::move(row));
    }
    // std::map iteration is already name-sorted
    return rows;
}

std::string feedback_to_text(const FeedbackArray& rows) {
    std::string out;
    for (auto& r : rows)
        out += r.type + " " + r.name + " " + num_to_string(r.lo) + " " +
               num_to_string(r.hi) + "\n";
    return out;
}

}  // namespace hlsdiff
