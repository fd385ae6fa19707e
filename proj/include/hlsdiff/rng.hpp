#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace hlsdiff {

// Deterministic random source. mt19937_64 output is pinned by the standard;
// the distribution helpers here are hand-rolled because the <random>
// distribution classes are implementation-defined and would break
// byte-identical reports across toolchains.
class Rng {
  public:
    explicit Rng(uint64_t seed = 1) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // uniform in [0, n), n > 0
    uint64_t below(uint64_t n) {
        // rejection sampling to avoid modulo bias
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // uniform in [lo, hi] inclusive
    int64_t range(int64_t lo, int64_t hi) {
        if (lo >= hi) return lo;
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int64_t>(below(span));
    }

    // uniform in [0, 1)
    double real01() { return (eng_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return real01() < p; }

    std::string serialize() const {
        std::ostringstream os;
        os << eng_;
        return os.str();
    }
    bool deserialize(const std::string& s) {
        std::istringstream is(s);
        is >> eng_;
        return !is.fail();
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace hlsdiff
