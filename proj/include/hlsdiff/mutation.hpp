#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hlsdiff/input.hpp"
#include "hlsdiff/rng.hpp"
#include "hlsdiff/spectra.hpp"

namespace hlsdiff {

enum class MutationType {
    DataSize = 1,   // insert or delete an element of a variable-length slot
    DataDimension,  // reshape a variable rank-2 slot
    ZeroValue,      // set one element to zero
    Order,          // swap two elements within one array slot
    DataElement,    // replace one element, biased toward observed extremes
    DataType,       // toggle integer/real representation of one element
    BitFlip,        // flip one bit of one element
    ByteFlip        // invert one byte lane of one element
};

constexpr int kMutationCount = 8;

const char* mutation_name(MutationType m);
int mutation_id(MutationType m);  // 1..8

struct EmptyInput {
    std::string message;
};

// value window for DataElement sampling, derived from spectra feedback
struct MutationContext {
    bool has_hint = false;
    double hint_lo = 0.0;
    double hint_hi = 0.0;
};

MutationContext context_from_feedback(const FeedbackArray& rows);

// Applies exactly one operator. Position/value choices that break the
// format constraints or leave the input unchanged are redrawn a bounded
// number of times; operators inapplicable to this input shape fall back to
// DataElement. Throws EmptyInput when the input has no elements at all.
TestInput apply_mutation(const TestInput& in, MutationType m,
                         const FormatConstraints& fmt, Rng& rng,
                         const MutationContext& ctx = {});

struct MutationScheduler {
    std::array<double, kMutationCount> p{};
    double alpha = 0.04;
    double eps = 0.01;
    Rng rng;
    int64_t iteration = 0;

    struct HistEntry {
        int64_t t;
        int m;
        bool triggered;
    };
    std::vector<HistEntry> history;

    static MutationScheduler make(uint64_t seed);

    double sum() const;
    std::string serialize() const;
    static std::optional<MutationScheduler> deserialize(const std::string& text);
};

// samples an operator according to the activation probabilities
MutationType select_mutation(MutationScheduler& s);

// Triggered updates reward the winner by alpha and tax the others by
// alpha/(l-1), then clamp to the floor and renormalize; untriggered
// updates leave the probabilities alone. Both are recorded in history.
void update_probabilities(MutationScheduler& s, MutationType winner, bool triggered);

}  // namespace hlsdiff
