#pragma once
// Embedding providers. The engine only assumes determinism and a fixed
// dimension; production providers plug in behind this interface. The
// shipped default is a hashed bag-of-words so every test runs offline.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace cogmem {

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual int dimension() const = 0;
    // Deterministic for a fixed provider and text.
    virtual std::vector<float> embed(const std::string& text) = 0;
};

// Term-frequency weighted hashed bag-of-words, L2-normalized. Tokens are
// hashed with FNV-1a into `dimension` buckets, so vectors are non-negative
// and cosine similarity lands in [0, 1].
class HashedBagProvider final : public EmbeddingProvider {
public:
    explicit HashedBagProvider(int dimension = 256);

    int dimension() const override { return dimension_; }
    std::vector<float> embed(const std::string& text) override;

private:
    int dimension_;
};

double cosine_similarity(const std::vector<float>& a, const std::vector<float>& b);

// Lowercase, split on non-alphanumerics. Shared by the fulltext index,
// the hashed provider and the search-text oracles in tests.
std::vector<std::string> tokenize(const std::string& text);

} // namespace cogmem
