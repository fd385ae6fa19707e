#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hlsdiff/input.hpp"

namespace hlsdiff {

enum class Decision { Execute, Skip };

struct SlotRecord {
    bool any_values = false;  // a nonempty slot has been recorded
    Num lo;
    Num hi;
    std::set<std::string> shapes;  // "len:N" or "dim:RxC" or "scalar"
};

// Global record table of observed per-slot value ranges and shapes. An input
// earns execution only when it widens some slot's range or shows a new shape.
struct RecordTable {
    std::vector<SlotRecord> slots;
    int64_t executions = 0;
    int64_t skips = 0;
    int64_t version = 0;  // bumps on every update_record

    bool empty() const { return slots.empty(); }
};

std::string shape_key(const InputEntry& e);

Decision should_execute(const RecordTable& t, const TestInput& in);

// pre: the decision for `in` was Execute (callers may force-record)
void update_record(RecordTable& t, const TestInput& in);

std::string record_table_to_text(const RecordTable& t);

// Keeps every table version so skip decisions can be re-justified later.
struct FilterAudit {
    std::vector<RecordTable> snapshots;  // snapshots[v] = state at version v

    explicit FilterAudit(const RecordTable& initial) { snapshots.push_back(initial); }
    void on_update(const RecordTable& after) { snapshots.push_back(after); }

    // true when replaying `in` against the recorded version still says Skip
    bool skip_justified(int64_t version, const TestInput& in) const;
};

}  // namespace hlsdiff
