#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hlsdiff/ast.hpp"
#include "hlsdiff/num.hpp"

namespace hlsdiff {

// One value bundle per entry-function parameter.
struct InputEntry {
    int rank = 0;  // 0 scalar, 1 vector, 2 matrix
    int64_t rows = 0, cols = 0;
    std::vector<Num> values;  // row-major; scalars hold one value
    int64_t size() const { return static_cast<int64_t>(values.size()); }
};

struct TestInput {
    std::vector<InputEntry> entries;
    bool operator==(const TestInput& o) const;
};

// Shape and bounds the entry signature imposes on each input slot.
struct SlotFormat {
    std::string name;
    TypeSpec type;
    int rank = 0;
    bool real = false;      // fixed/float element type
    bool variable = false;  // unsized: length may vary
    // rank 1: required length when fixed, seed length when variable.
    int64_t len = 0;
    // rank 2: required shape when fixed, seed shape when variable.
    int64_t rows = 0, cols = 0;
};

// [lo, hi] for integer-typed slots.
std::pair<int64_t, int64_t> integer_bounds(const SlotFormat& slot);

struct FormatConstraints {
    std::vector<SlotFormat> slots;
    int64_t max_len = 64;        // variable 1-D lengths sit in [1, max_len]
    double real_bound = 1e9;     // |v| bound for real elements
    std::string describe() const;  // human/prompt summary, one line per slot
};

FormatConstraints constraints_for(const Program& p);

bool validate_input(const TestInput& in, const FormatConstraints& fmt,
                    std::string* why = nullptr);

// Wire format, one input per line. Entries are joined with " | "; a matrix
// entry reads "RxC : v v ...". A line with no separators is taken as a flat
// token list when at most one slot has variable length.
std::string input_to_line(const TestInput& in);
std::optional<TestInput> input_from_line(const std::string& line,
                                         const FormatConstraints& fmt);

// Deterministic starter input: arrays at their declared/static size (or 4
// when unsized), elements cycling 1, 1, 7, 5.
TestInput synthesize_seed(const FormatConstraints& fmt);

}  // namespace hlsdiff
