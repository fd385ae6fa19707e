#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hlsdiff/num.hpp"

namespace hlsdiff {

enum class EventKind { Write, ArrayAccess, LoopIter, Call, FifoOp, Fault };

const char* event_kind_name(EventKind k);

struct Event {
    EventKind kind;
    std::string symbol;       // qualified variable, label, function or channel
    std::vector<Num> values;  // written value / index / count / depth / occupancy
    int64_t step = 0;
    std::string detail;  // fault reason, "read"/"write", "push"/"pop"/"pop_empty", "trunc"
};

enum class RunStatus { Completed, Faulted, BudgetExhausted };

const char* status_name(RunStatus s);

struct ExecTrace {
    RunStatus status = RunStatus::Completed;
    std::string fault_reason;  // set when status == Faulted
    std::string input_key;     // wire-format line of the input that was run
    std::optional<Num> ret;
    // final contents of array-typed entry parameters, in signature order
    std::vector<std::pair<std::string, std::vector<Num>>> array_outputs;
    std::vector<Num> prints;
    std::vector<Event> events;

    bool outputs_equal(const ExecTrace& o) const;
    bool has_fault(const std::string& reason) const;
};

// exact-value comparison that ignores integer/real representation
bool num_value_equal(const Num& a, const Num& b);

// Canonical text form, one line per field/event, stable order.
std::string trace_to_text(const ExecTrace& t);

}  // namespace hlsdiff
