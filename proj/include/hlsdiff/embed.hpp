#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hlsdiff {

constexpr size_t kEmbedDim = 256;

struct EmptyText {
    std::string message;
};

// lowercase alphanumeric runs (underscores included); everything else splits
std::vector<std::string> tokenize(const std::string& text);

uint64_t fnv1a64(const std::string& s);

// Token-hashed TF-IDF embedder. Without a fitted document-frequency table it
// degrades to plain hashed TF. Vectors are unit L2-normalized.
class Embedder {
public:
    explicit Embedder(size_t dim = kEmbedDim) : dim_(dim) {}

    void fit(const std::vector<std::string>& corpus);
    std::vector<double> embed(const std::string& text) const;  // throws EmptyText
    size_t dim() const { return dim_; }

private:
    size_t dim_;
    std::vector<double> idf_;  // empty until fit
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace hlsdiff
