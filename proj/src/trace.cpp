#include "hlsdiff/trace.hpp"

#include <sstream>

namespace hlsdiff {

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Write: return "write";
        case EventKind::ArrayAccess: return "array_access";
        case EventKind::LoopIter: return "loop_iter";
        case EventKind::Call: return "call";
        case EventKind::FifoOp: return "fifo_op";
        case EventKind::Fault: return "fault";
    }
    return "?";
}

const char* status_name(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "completed";
        case RunStatus::Faulted: return "faulted";
        case RunStatus::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

bool num_value_equal(const Num& a, const Num& b) {
    if (!a.real && !b.real) return a.i == b.i;
    return a.as_double() == b.as_double();
}

bool ExecTrace::outputs_equal(const ExecTrace& o) const {
    if (ret.has_value() != o.ret.has_value()) return false;
    if (ret && !num_value_equal(*ret, *o.ret)) return false;
    if (array_outputs.size() != o.array_outputs.size()) return false;
    for (size_t i = 0; i < array_outputs.size(); ++i) {
        if (array_outputs[i].first != o.array_outputs[i].first) return false;
        auto& a = array_outputs[i].second;
        auto& b = o.array_outputs[i].second;
        if (a.size() != b.size()) return false;
        for (size_t j = 0; j < a.size(); ++j)
            if (!num_value_equal(a[j], b[j])) return false;
    }
    if (prints.size() != o.prints.size()) return false;
    for (size_t i = 0; i < prints.size(); ++i)
        if (!num_value_equal(prints[i], o.prints[i])) return false;
    return true;
}

bool ExecTrace::has_fault(const std::string& reason) const {
    for (auto& e : events)
        if (e.kind == EventKind::Fault && e.detail == reason) return true;
    return false;
}

std::string trace_to_text(const ExecTrace& t) {
    std::ostringstream out;
    if (!t.input_key.empty()) out << "input " << t.input_key << "\n";
    out << "status " << status_name(t.status);
    if (t.status == RunStatus::Faulted) out << " " << t.fault_reason;
    out << "\n";
    if (t.ret) out << "output return = " << num_to_string(*t.ret) << "\n";
    for (auto& [name, vals] : t.array_outputs) {
        out << "output " << name << " =";
        for (auto& v : vals) out << " " << num_to_string(v);
        out << "\n";
    }
    for (auto& v : t.prints) out << "print " << num_to_string(v) << "\n";
    for (auto& e : t.events) {
        out << "event " << e.step << " " << event_kind_name(e.kind) << " " << e.symbol
            << " " << (e.detail.empty() ? "-" : e.detail);
        for (auto& v : e.values) out << " " << num_to_string(v);
        out << "\n";
    }
    return out.str();
}

}  // namespace hlsdiff
