#include "hlsdiff/input.hpp"

#include <cmath>
#include <sstream>

namespace hlsdiff {

bool TestInput::operator==(const TestInput& o) const {
    if (entries.size() != o.entries.size()) return false;
    for (size_t i = 0; i < entries.size(); ++i) {
        auto& a = entries[i];
        auto& b = o.entries[i];
        if (a.rank != b.rank || a.rows != b.rows || a.cols != b.cols) return false;
        if (a.values.size() != b.values.size()) return false;
        for (size_t j = 0; j < a.values.size(); ++j)
            if (!(a.values[j] == b.values[j])) return false;
    }
    return true;
}

std::pair<int64_t, int64_t> integer_bounds(const SlotFormat& slot) {
    if (slot.type.kind == BaseType::Uint) return {0, 4294967295LL};
    return {-2147483648LL, 2147483647LL};
}

FormatConstraints constraints_for(const Program& p) {
    FormatConstraints fmt;
    const Function* entry = p.find_function(p.entry);
    if (!entry) return fmt;
    for (auto& prm : entry->params) {
        SlotFormat s;
        s.name = prm.name;
        s.type = prm.type;
        s.rank = prm.rank;
        s.real = prm.type.kind == BaseType::Fixed || prm.type.kind == BaseType::Float;
        if (prm.rank == 1) {
            if (prm.dims[0] == 0) {
                s.variable = true;
                s.len = 4;
                if (auto* d = p.find_directive(DirectiveKind::StaticArray,
                                               qualify(entry->name, prm.name)))
                    s.len = d->a;
            } else {
                s.len = prm.dims[0];
            }
        } else if (prm.rank == 2) {
            if (prm.dims[0] == 0 || prm.dims[1] == 0) {
                s.variable = true;
                s.rows = 2;
                s.cols = 2;
            } else {
                s.rows = prm.dims[0];
                s.cols = prm.dims[1];
            }
        }
        fmt.slots.push_back(std::move(s));
    }
    return fmt;
}

std::string FormatConstraints::describe() const {
    std::ostringstream out;
    for (auto& s : slots) {
        out << s.name << ": ";
        const char* elem = s.real ? "real" : "integer";
        if (s.rank == 0) {
            out << "one " << elem;
        } else if (s.rank == 1) {
            if (s.variable)
                out << "1 to " << max_len << " " << elem << "s";
            else
                out << "exactly " << s.len << " " << elem << "s";
        } else {
            if (s.variable)
                out << "a matrix of " << elem << "s, written RxC : values (row-major), "
                    << "R*C at most " << max_len;
            else
                out << "a " << s.rows << "x" << s.cols << " matrix of " << elem
                    << "s, written " << s.rows << "x" << s.cols
                    << " : values (row-major)";
        }
        if (s.real) {
            out << ", each with absolute value at most " << static_cast<int64_t>(real_bound);
        } else {
            auto [lo, hi] = integer_bounds(s);
            out << ", each in [" << lo << ", " << hi << "]";
        }
        out << "\n";
    }
    return out.str();
}

namespace {

bool check_element(const Num& v, const SlotFormat& s, const FormatConstraints& fmt,
                   std::string* why) {
    if (v.real && !std::isfinite(v.r)) {
        if (why) *why = "non-finite value in '" + s.name + "'";
        return false;
    }
    if (s.real) {
        if (std::fabs(v.as_double()) > fmt.real_bound) {
            if (why) *why = "value out of range in '" + s.name + "'";
            return false;
        }
        return true;
    }
    if (v.real) {
        if (why) *why = "non-integer value in integer slot '" + s.name + "'";
        return false;
    }
    auto [lo, hi] = integer_bounds(s);
    if (v.i < lo || v.i > hi) {
        if (why) *why = "value out of range in '" + s.name + "'";
        return false;
    }
    return true;
}

}  // namespace

bool validate_input(const TestInput& in, const FormatConstraints& fmt, std::string* why) {
    if (in.entries.size() != fmt.slots.size()) {
        if (why) *why = "entry count mismatch";
        return false;
    }
    for (size_t i = 0; i < fmt.slots.size(); ++i) {
        auto& s = fmt.slots[i];
        auto& e = in.entries[i];
        if (e.rank != s.rank) {
            if (why) *why = "rank mismatch in '" + s.name + "'";
            return false;
        }
        if (s.rank == 0) {
            if (e.values.size() != 1) {
                if (why) *why = "scalar slot '" + s.name + "' needs one value";
                return false;
            }
        } else if (s.rank == 1) {
            if (s.variable) {
                if (e.size() < 1 || e.size() > fmt.max_len) {
                    if (why) *why = "length out of range in '" + s.name + "'";
                    return false;
                }
            } else if (e.size() != s.len) {
                if (why) *why = "length mismatch in '" + s.name + "'";
                return false;
            }
        } else {
            if (e.rows < 1 || e.cols < 1 || e.rows * e.cols != e.size()) {
                if (why) *why = "bad matrix shape in '" + s.name + "'";
                return false;
            }
            if (s.variable) {
                if (e.size() > fmt.max_len) {
                    if (why) *why = "matrix too large in '" + s.name + "'";
                    return false;
                }
            } else if (e.rows != s.rows || e.cols != s.cols) {
                if (why) *why = "matrix shape mismatch in '" + s.name + "'";
                return false;
            }
        }
        for (auto& v : e.values)
            if (!check_element(v, s, fmt, why)) return false;
    }
    return true;
}

std::string input_to_line(const TestInput& in) {
    std::ostringstream out;
    for (size_t i = 0; i < in.entries.size(); ++i) {
        if (i) out << " | ";
        auto& e = in.entries[i];
        if (e.rank == 2) out << e.rows << "x" << e.cols << " : ";
        for (size_t j = 0; j < e.values.size(); ++j) {
            if (j) out << " ";
            out << num_to_string(e.values[j]);
        }
    }
    return out.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::optional<InputEntry> parse_chunk(const std::vector<std::string>& toks,
                                      const SlotFormat& s) {
    InputEntry e;
    e.rank = s.rank;
    size_t start = 0;
    if (s.rank == 2) {
        if (toks.size() < 3 || toks[1] != ":") return std::nullopt;
        int64_t r = 0, c = 0;
        char x = 0;
        std::istringstream hdr(toks[0]);
        if (!(hdr >> r >> x >> c) || x != 'x' || !hdr.eof()) return std::nullopt;
        if (r < 1 || c < 1) return std::nullopt;
        e.rows = r;
        e.cols = c;
        start = 2;
        if (static_cast<int64_t>(toks.size()) - 2 != r * c) return std::nullopt;
    } else if (s.rank == 0) {
        if (toks.size() != 1) return std::nullopt;
    }
    for (size_t i = start; i < toks.size(); ++i) {
        auto v = num_from_string(toks[i]);
        if (!v) return std::nullopt;
        e.values.push_back(*v);
    }
    if (e.values.empty()) return std::nullopt;
    return e;
}

}  // namespace

std::optional<TestInput> input_from_line(const std::string& line,
                                         const FormatConstraints& fmt) {
    auto toks = split_ws(line);
    if (toks.empty() || fmt.slots.empty()) return std::nullopt;

    TestInput in;
    bool has_sep = false;
    for (auto& t : toks)
        if (t == "|") has_sep = true;

    if (has_sep) {
        std::vector<std::vector<std::string>> chunks(1);
        for (auto& t : toks) {
            if (t == "|")
                chunks.emplace_back();
            else
                chunks.back().push_back(t);
        }
        if (chunks.size() != fmt.slots.size()) return std::nullopt;
        for (size_t i = 0; i < chunks.size(); ++i) {
            auto e = parse_chunk(chunks[i], fmt.slots[i]);
            if (!e) return std::nullopt;
            in.entries.push_back(std::move(*e));
        }
    } else {
        // flat token list; at most one slot may absorb a variable count
        int64_t fixed_demand = 0;
        int variable_at = -1;
        for (size_t i = 0; i < fmt.slots.size(); ++i) {
            auto& s = fmt.slots[i];
            if (s.variable) {
                if (s.rank == 2 || variable_at >= 0) return std::nullopt;
                variable_at = static_cast<int>(i);
            } else {
                fixed_demand += s.rank == 0 ? 1 : (s.rank == 1 ? s.len : s.rows * s.cols);
                if (s.rank == 2) fixed_demand += 2;  // "RxC :" header
            }
        }
        int64_t total = static_cast<int64_t>(toks.size());
        int64_t var_take = total - fixed_demand;
        if (variable_at < 0 && var_take != 0) return std::nullopt;
        if (variable_at >= 0 && var_take < 1) return std::nullopt;

        size_t pos = 0;
        for (size_t i = 0; i < fmt.slots.size(); ++i) {
            auto& s = fmt.slots[i];
            size_t take;
            if (static_cast<int>(i) == variable_at)
                take = static_cast<size_t>(var_take);
            else if (s.rank == 0)
                take = 1;
            else if (s.rank == 1)
                take = static_cast<size_t>(s.len);
            else
                take = static_cast<size_t>(s.rows * s.cols) + 2;
            if (pos + take > toks.size()) return std::nullopt;
            std::vector<std::string> chunk(toks.begin() + pos, toks.begin() + pos + take);
            pos += take;
            auto e = parse_chunk(chunk, s);
            if (!e) return std::nullopt;
            in.entries.push_back(std::move(*e));
        }
        if (pos != toks.size()) return std::nullopt;
    }
    if (!validate_input(in, fmt)) return std::nullopt;
    return in;
}

TestInput synthesize_seed(const FormatConstraints& fmt) {
    static const int64_t cycle[4] = {1, 1, 7, 5};
    TestInput in;
    for (auto& s : fmt.slots) {
        InputEntry e;
        e.rank = s.rank;
        int64_t n = 1;
        if (s.rank == 1) n = s.len;
        if (s.rank == 2) {
            e.rows = s.rows;
            e.cols = s.cols;
            n = s.rows * s.cols;
        }
        for (int64_t i = 0; i < n; ++i) {
            int64_t v = cycle[i % 4];
            e.values.push_back(s.real ? Num::of_real(static_cast<double>(v))
                                      : Num::of_int(v));
        }
        in.entries.push_back(std::move(e));
    }
    return in;
}

}  // namespace hlsdiff
