#include "hlsdiff/embed.hpp"

#include <cmath>
#include <map>

namespace hlsdiff {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void Embedder::fit(const std::vector<std::string>& corpus) {
    std::vector<int64_t> df(dim_, 0);
    int64_t n = 0;
    for (auto& doc : corpus) {
        auto toks = tokenize(doc);
        if (toks.empty()) continue;
        ++n;
        std::vector<bool> hit(dim_, false);
        for (auto& t : toks) hit[fnv1a64(t) % dim_] = true;
        for (size_t i = 0; i < dim_; ++i)
            if (hit[i]) ++df[i];
    }
    idf_.assign(dim_, 1.0);
    if (n == 0) return;
    for (size_t i = 0; i < dim_; ++i)
        idf_[i] = std::log(static_cast<double>(1 + n) /
                           static_cast<double>(1 + df[i])) +
                  1.0;
}

std::vector<double> Embedder::embed(const std::string& text) const {
    auto toks = tokenize(text);
    if (toks.empty()) throw EmptyText{"cannot embed text with no tokens"};
    std::vector<double> v(dim_, 0.0);
    for (auto& t : toks) v[fnv1a64(t) % dim_] += 1.0;
    if (!idf_.empty())
        for (size_t i = 0; i < dim_; ++i) v[i] *= idf_[i];
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0)
        for (double& x : v) x /= norm;
    return v;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0, na = 0, nb = 0;
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    for (size_t i = n; i < a.size(); ++i) na += a[i] * a[i];
    for (size_t i = n; i < b.size(); ++i) nb += b[i] * b[i];
    if (na == 0 || nb == 0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace hlsdiff
