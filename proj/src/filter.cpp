#include "hlsdiff/filter.hpp"

namespace hlsdiff {

std::string shape_key(const InputEntry& e) {
    if (e.rank == 0) return "scalar";
    if (e.rank == 1) return "len:" + std::to_string(e.values.size());
    return "dim:" + std::to_string(e.rows) + "x" + std::to_string(e.cols);
}

Decision should_execute(const RecordTable& t, const TestInput& in) {
    if (t.empty()) return Decision::Execute;
    if (in.entries.size() != t.slots.size()) return Decision::Execute;
    for (size_t i = 0; i < in.entries.size(); ++i) {
        const auto& e = in.entries[i];
        const auto& rec = t.slots[i];
        if (!rec.shapes.count(shape_key(e))) return Decision::Execute;
        if (e.values.empty()) continue;
        if (!rec.any_values) return Decision::Execute;
        for (const auto& v : e.values) {
            if (num_cmp(v, rec.lo) < 0) return Decision::Execute;
            if (num_cmp(v, rec.hi) > 0) return Decision::Execute;
        }
    }
    return Decision::Skip;
}

void update_record(RecordTable& t, const TestInput& in) {
    if (t.slots.size() < in.entries.size()) t.slots.resize(in.entries.size());
    for (size_t i = 0; i < in.entries.size(); ++i) {
        const auto& e = in.entries[i];
        auto& rec = t.slots[i];
        rec.shapes.insert(shape_key(e));
        for (const auto& v : e.values) {
            if (!rec.any_values) {
                rec.any_values = true;
                rec.lo = v;
                rec.hi = v;
            } else {
                if (num_cmp(v, rec.lo) < 0) rec.lo = v;
                if (num_cmp(v, rec.hi) > 0) rec.hi = v;
            }
        }
    }
    ++t.executions;
    ++t.version;
}

std::string record_table_to_text(const RecordTable& t) {
    std::string out;
    out += "version " + std::to_string(t.version) + "\n";
    out += "executions " + std::to_string(t.executions) + "\n";
    out += "skips " + std::to_string(t.skips) + "\n";
    for (size_t i = 0; i < t.slots.size(); ++i) {
        const auto& rec = t.slots[i];
        out += "slot " + std::to_string(i);
        if (rec.any_values)
            out += " range [" + num_to_string(rec.lo) + ", " +
                   num_to_string(rec.hi) + "]";
        else
            out += " range empty";
        out += " shapes {";
        bool first = true;
        for (const auto& s : rec.shapes) {
            if (!first) out += ", ";
            out += s;
            first = false;
        }
        out += "}\n";
    }
    return out;
}

bool FilterAudit::skip_justified(int64_t version, const TestInput& in) const {
    if (version < 0 || version >= static_cast<int64_t>(snapshots.size()))
        return false;
    return should_execute(snapshots[static_cast<size_t>(version)], in) ==
           Decision::Skip;
}

}  // namespace hlsdiff
