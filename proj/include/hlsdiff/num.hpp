#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace hlsdiff {

// A single numeric value as it flows through inputs, traces and spectra.
// Integer and real payloads are kept distinct so that serialization is
// exact and int64 values survive without a round trip through double.
struct Num {
    bool real = false;
    int64_t i = 0;
    double r = 0.0;

    Num() = default;
    static Num of_int(int64_t v) {
        Num n;
        n.real = false;
        n.i = v;
        return n;
    }
    static Num of_real(double v) {
        Num n;
        n.real = true;
        n.r = v;
        return n;
    }

    double as_double() const { return real ? r : static_cast<double>(i); }
    int64_t as_int() const;  // reals truncate toward zero, saturating at int64
    bool is_zero() const { return real ? r == 0.0 : i == 0; }

    bool operator==(const Num& o) const {
        if (real != o.real) return false;
        return real ? r == o.r : i == o.i;
    }
};

// Numeric ordering; mixed comparisons promote to double.
int num_cmp(const Num& a, const Num& b);
Num num_min(const Num& a, const Num& b);
Num num_max(const Num& a, const Num& b);

// Exact text form: integers as decimal, reals via shortest round-trip
// (to_chars), with a trailing ".0" forced on integral reals so the
// representation kind survives a parse.
std::string num_to_string(const Num& n);

// Parses either form. Empty on malformed or non-finite input.
std::optional<Num> num_from_string(const std::string& s);

}  // namespace hlsdiff
