#include "hlsdiff/num.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace hlsdiff {

int64_t Num::as_int() const {
    if (!real) return i;
    if (std::isnan(r)) return 0;
    if (r >= 9223372036854775808.0) return INT64_MAX;  // 2^63
    if (r <= -9223372036854775808.0) return INT64_MIN;
    return static_cast<int64_t>(r);
}

int num_cmp(const Num& a, const Num& b) {
    if (!a.real && !b.real) {
        if (a.i < b.i) return -1;
        if (a.i > b.i) return 1;
        return 0;
    }
    double x = a.as_double(), y = b.as_double();
    if (x < y) return -1;
    if (x > y) return 1;
    return 0;
}

Num num_min(const Num& a, const Num& b) { return num_cmp(a, b) <= 0 ? a : b; }
Num num_max(const Num& a, const Num& b) { return num_cmp(a, b) >= 0 ? a : b; }

std::string num_to_string(const Num& n) {
    char buf[64];
    if (!n.real) {
        auto res = std::to_chars(buf, buf + sizeof(buf), n.i);
        return std::string(buf, res.ptr);
    }
    auto res = std::to_chars(buf, buf + sizeof(buf), n.r);
    std::string s(buf, res.ptr);
    // force a marker so "2.0" stays real after reparse
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

std::optional<Num> num_from_string(const std::string& s) {
    if (s.empty()) return std::nullopt;
    bool looks_real = s.find('.') != std::string::npos ||
                      s.find('e') != std::string::npos ||
                      s.find('E') != std::string::npos;
    const char* b = s.c_str();
    const char* e = b + s.size();
    if (!looks_real) {
        int64_t v = 0;
        auto res = std::from_chars(b, e, v);
        if (res.ec == std::errc() && res.ptr == e) return Num::of_int(v);
        return std::nullopt;
    }
    double v = 0;
    auto res = std::from_chars(b, e, v);
    if (res.ec == std::errc() && res.ptr == e && std::isfinite(v))
        return Num::of_real(v);
    return std::nullopt;
}

}  // namespace hlsdiff
