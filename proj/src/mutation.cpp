#include "hlsdiff/mutation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hlsdiff {

const char* mutation_name(MutationType m) {
    switch (m) {
        case MutationType::DataSize: return "DataSize";
        case MutationType::DataDimension: return "DataDimension";
        case MutationType::ZeroValue: return "ZeroValue";
        case MutationType::Order: return "Order";
        case MutationType::DataElement: return "DataElement";
        case MutationType::DataType: return "DataType";
        case MutationType::BitFlip: return "BitFlip";
        case MutationType::ByteFlip: return "ByteFlip";
    }
    return "?";
}

int mutation_id(MutationType m) { return static_cast<int>(m); }

MutationContext context_from_feedback(const FeedbackArray& rows) {
    MutationContext ctx;
    bool any = false;
    double lo = 0, hi = 0;
    for (auto& r : rows) {
        double a = r.lo.as_double(), b = r.hi.as_double();
        if (!any) {
            lo = a;
            hi = b;
            any = true;
        } else {
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
    }
    if (!any) return ctx;
    double margin = hi - lo;
    ctx.has_hint = true;
    ctx.hint_lo = lo - margin;
    ctx.hint_hi = hi + margin;
    return ctx;
}

namespace {

struct ElemPos {
    size_t entry;
    size_t index;
};

std::vector<ElemPos> all_elements(const TestInput& in) {
    std::vector<ElemPos> out;
    for (size_t e = 0; e < in.entries.size(); ++e)
        for (size_t i = 0; i < in.entries[e].values.size(); ++i)
            out.push_back({e, i});
    return out;
}

std::vector<size_t> slots_where(const FormatConstraints& fmt, const TestInput& in,
                                bool (*pred)(const SlotFormat&, const InputEntry&)) {
    std::vector<size_t> out;
    size_t n = std::min(fmt.slots.size(), in.entries.size());
    for (size_t i = 0; i < n; ++i)
        if (pred(fmt.slots[i], in.entries[i])) out.push_back(i);
    return out;
}

Num zero_for(const SlotFormat& slot) {
    return slot.real ? Num::of_real(0.0) : Num::of_int(0);
}

int64_t wrap32(const SlotFormat& slot, int64_t x) {
    if (slot.type.kind == BaseType::Uint)
        return static_cast<int64_t>(static_cast<uint64_t>(x) & 0xFFFFFFFFu);
    return static_cast<int32_t>(static_cast<uint32_t>(x));
}

Num sample_element(const SlotFormat& slot, const FormatConstraints& fmt, Rng& rng,
                   const MutationContext& ctx, const Num& old, bool force_change) {
    if (slot.real) {
        double lo = -fmt.real_bound, hi = fmt.real_bound;
        if (ctx.has_hint) {
            lo = std::max(lo, ctx.hint_lo);
            hi = std::min(hi, ctx.hint_hi);
            if (lo > hi) {
                lo = -fmt.real_bound;
                hi = fmt.real_bound;
            }
        }
        double v = lo + rng.real01() * (hi - lo);
        if (force_change && num_cmp(Num::of_real(v), old) == 0) {
            v = old.as_double() + 1.0;
            if (v > fmt.real_bound) v = old.as_double() - 1.0;
        }
        return Num::of_real(v);
    }
    auto [blo, bhi] = integer_bounds(slot);
    int64_t lo = blo, hi = bhi;
    if (ctx.has_hint) {
        lo = std::max(blo, static_cast<int64_t>(std::floor(ctx.hint_lo)));
        hi = std::min(bhi, static_cast<int64_t>(std::ceil(ctx.hint_hi)));
        if (lo > hi) {
            lo = blo;
            hi = bhi;
        }
    }
    int64_t v = rng.range(lo, hi);
    if (force_change && !old.real && v == old.i) v = old.i < bhi ? old.i + 1 : blo;
    return Num::of_int(v);
}

bool pred_var_rank1(const SlotFormat& s, const InputEntry&) {
    return s.variable && s.rank == 1;
}
bool pred_var_rank2(const SlotFormat& s, const InputEntry&) {
    return s.variable && s.rank == 2;
}
bool pred_swappable(const SlotFormat& s, const InputEntry& e) {
    return s.rank >= 1 && e.values.size() >= 2;
}
bool pred_real_slot(const SlotFormat& s, const InputEntry& e) {
    return s.real && !e.values.empty();
}

std::optional<TestInput> try_once(const TestInput& in, MutationType m,
                                  const FormatConstraints& fmt, Rng& rng,
                                  const MutationContext& ctx, bool force) {
    TestInput out = in;
    switch (m) {
        case MutationType::DataSize: {
            auto slots = slots_where(fmt, in, pred_var_rank1);
            if (slots.empty()) return std::nullopt;
            size_t si = slots[rng.below(slots.size())];
            auto& e = out.entries[si];
            int64_t n = e.size();
            bool grow = n <= 1 ? true : (n >= fmt.max_len ? false : rng.chance(0.5));
            if (grow) {
                size_t pos = static_cast<size_t>(rng.below(n + 1));
                Num v = e.values[rng.below(n)];
                e.values.insert(e.values.begin() + pos, v);
            } else {
                size_t pos = static_cast<size_t>(rng.below(n));
                e.values.erase(e.values.begin() + pos);
            }
            return out;
        }
        case MutationType::DataDimension: {
            auto slots = slots_where(fmt, in, pred_var_rank2);
            if (slots.empty()) return std::nullopt;
            size_t si = slots[rng.below(slots.size())];
            auto& e = out.entries[si];
            int64_t max_r = std::min<int64_t>(8, fmt.max_len);
            int64_t rows = rng.range(1, max_r);
            int64_t cols = rng.range(1, std::min<int64_t>(8, fmt.max_len / rows));
            if (rows == e.rows && cols == e.cols) return std::nullopt;
            std::vector<Num> fresh;
            fresh.reserve(static_cast<size_t>(rows * cols));
            for (int64_t i = 0; i < rows * cols; ++i)
                fresh.push_back(e.values[static_cast<size_t>(i) % e.values.size()]);
            e.rows = rows;
            e.cols = cols;
            e.values = std::move(fresh);
            return out;
        }
        case MutationType::ZeroValue: {
            auto elems = all_elements(in);
            if (elems.empty()) return std::nullopt;
            auto pos = elems[rng.below(elems.size())];
            out.entries[pos.entry].values[pos.index] = zero_for(fmt.slots[pos.entry]);
            return out;
        }
        case MutationType::Order: {
            auto slots = slots_where(fmt, in, pred_swappable);
            if (slots.empty()) return std::nullopt;
            size_t si = slots[rng.below(slots.size())];
            auto& vals = out.entries[si].values;
            size_t i = static_cast<size_t>(rng.below(vals.size()));
            size_t j = static_cast<size_t>(rng.below(vals.size() - 1));
            if (j >= i) ++j;
            std::swap(vals[i], vals[j]);
            return out;
        }
        case MutationType::DataElement: {
            auto elems = all_elements(in);
            if (elems.empty()) return std::nullopt;
            auto pos = elems[rng.below(elems.size())];
            auto& slot = fmt.slots[pos.entry];
            Num& v = out.entries[pos.entry].values[pos.index];
            v = sample_element(slot, fmt, rng, ctx, v, force);
            return out;
        }
        case MutationType::DataType: {
            auto slots = slots_where(fmt, in, pred_real_slot);
            if (slots.empty()) return std::nullopt;
            size_t si = slots[rng.below(slots.size())];
            auto& vals = out.entries[si].values;
            Num& v = vals[rng.below(vals.size())];
            v = v.real ? Num::of_int(v.as_int()) : Num::of_real(v.as_double());
            return out;
        }
        case MutationType::BitFlip:
        case MutationType::ByteFlip: {
            auto elems = all_elements(in);
            if (elems.empty()) return std::nullopt;
            auto pos = elems[rng.below(elems.size())];
            auto& slot = fmt.slots[pos.entry];
            Num& v = out.entries[pos.entry].values[pos.index];
            // flips stay inside the slot's representable width
            uint64_t bits = slot.real
                                ? 21
                                : static_cast<uint64_t>(std::max(1, slot.type.width));
            uint64_t lanes = slot.real ? 2 : (bits + 7) / 8;
            int64_t mask;
            if (m == MutationType::BitFlip)
                mask = int64_t(1) << rng.below(bits);
            else
                mask = int64_t(0xFF) << (8 * rng.below(lanes));
            if (v.real) {
                double whole = std::trunc(v.r);
                double frac = v.r - whole;
                double flipped =
                    static_cast<double>(static_cast<int64_t>(whole) ^ mask);
                v = Num::of_real(flipped + frac);
            } else {
                v = Num::of_int(wrap32(slot, v.i ^ mask));
            }
            return out;
        }
    }
    return std::nullopt;
}

}  // namespace

TestInput apply_mutation(const TestInput& in, MutationType m,
                         const FormatConstraints& fmt, Rng& rng,
                         const MutationContext& ctx) {
    bool empty = true;
    for (auto& e : in.entries)
        if (!e.values.empty()) empty = false;
    if (empty) throw EmptyInput{"input has no elements to mutate"};

    auto attempt = [&](MutationType op) -> std::optional<TestInput> {
        for (int t = 0; t < 8; ++t) {
            auto out = try_once(in, op, fmt, rng, ctx, t == 7);
            if (out && validate_input(*out, fmt) && !(*out == in)) return out;
        }
        return std::nullopt;
    };

    if (auto out = attempt(m)) return *out;
    // the requested operator cannot move this input; element replacement can
    if (m != MutationType::DataElement)
        if (auto out = attempt(MutationType::DataElement)) return *out;
    throw EmptyInput{"no applicable mutation for this input"};
}

MutationScheduler MutationScheduler::make(uint64_t seed) {
    MutationScheduler s;
    s.p.fill(1.0 / kMutationCount);
    s.rng = Rng(seed);
    return s;
}

double MutationScheduler::sum() const {
    double t = 0;
    for (double v : p) t += v;
    return t;
}

MutationType select_mutation(MutationScheduler& s) {
    double u = s.rng.real01();
    double acc = 0;
    for (int i = 0; i < kMutationCount; ++i) {
        acc += s.p[static_cast<size_t>(i)];
        if (u < acc) return static_cast<MutationType>(i + 1);
    }
    return MutationType::ByteFlip;
}

void update_probabilities(MutationScheduler& s, MutationType winner, bool triggered) {
    s.history.push_back({++s.iteration, mutation_id(winner), triggered});
    if (!triggered) return;

    size_t w = static_cast<size_t>(mutation_id(winner) - 1);
    double tax = s.alpha / (kMutationCount - 1);
    for (size_t i = 0; i < s.p.size(); ++i)
        s.p[i] += i == w ? s.alpha : -tax;

    bool below = false;
    for (double v : s.p)
        if (v < s.eps) below = true;
    if (!below) return;  // untouched sums preserve Eq. 4-5 exactly

    // pin the violators at the floor and give the rest the remaining mass,
    // repeating in case the rescale pushes someone else under
    std::array<bool, kMutationCount> pinned{};
    for (int pass = 0; pass < kMutationCount; ++pass) {
        bool newly = false;
        for (size_t i = 0; i < s.p.size(); ++i)
            if (!pinned[i] && s.p[i] < s.eps) {
                pinned[i] = true;
                newly = true;
            }
        if (!newly) break;
        double pinned_mass = 0;
        double rest = 0;
        for (size_t i = 0; i < s.p.size(); ++i) {
            if (pinned[i])
                pinned_mass += s.eps;
            else
                rest += s.p[i];
        }
        for (size_t i = 0; i < s.p.size(); ++i) {
            if (pinned[i])
                s.p[i] = s.eps;
            else
                s.p[i] *= (1.0 - pinned_mass) / rest;
        }
    }
}

std::string MutationScheduler::serialize() const {
    std::string out = "p";
    for (double v : p) out += " " + num_to_string(Num::of_real(v));
    out += "\n";
    out += "alpha " + num_to_string(Num::of_real(alpha)) + "\n";
    out += "eps " + num_to_string(Num::of_real(eps)) + "\n";
    out += "iter " + std::to_string(iteration) + "\n";
    out += "hist " + std::to_string(history.size()) + "\n";
    out += "rng " + rng.serialize() + "\n";
    return out;
}

std::optional<MutationScheduler> MutationScheduler::deserialize(
    const std::string& text) {
    MutationScheduler s;
    std::istringstream is(text);
    std::string line;
    bool got_p = false, got_rng = false;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "p") {
            for (auto& v : s.p) {
                std::string tok;
                if (!(ls >> tok)) return std::nullopt;
                auto n = num_from_string(tok);
                if (!n) return std::nullopt;
                v = n->as_double();
            }
            got_p = true;
        } else if (key == "alpha" || key == "eps") {
            std::string tok;
            if (!(ls >> tok)) return std::nullopt;
            auto n = num_from_string(tok);
            if (!n) return std::nullopt;
            (key == "alpha" ? s.alpha : s.eps) = n->as_double();
        } else if (key == "iter") {
            ls >> s.iteration;
        } else if (key == "hist") {
            size_t n = 0;
            ls >> n;
            s.history.assign(n, {0, 0, false});
        } else if (key == "rng") {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
            if (!s.rng.deserialize(rest)) return std::nullopt;
            got_rng = true;
        }
    }
    if (!got_p || !got_rng) return std::nullopt;
    return s;
}

}  // namespace hlsdiff
