#include "cogmem/embedding.hpp"

#include <cctype>
#include <cmath>

namespace cogmem {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        unsigned char uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            current.push_back(static_cast<char>(std::tolower(uc)));
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

HashedBagProvider::HashedBagProvider(int dimension) : dimension_(dimension) {}

std::vector<float> HashedBagProvider::embed(const std::string& text) {
    std::vector<float> v(static_cast<std::size_t>(dimension_), 0.0f);
    for (const std::string& tok : tokenize(text))
        v[fnv1a(tok) % static_cast<std::uint64_t>(dimension_)] += 1.0f;
    double norm = 0.0;
    for (float f : v) norm += static_cast<double>(f) * f;
    if (norm > 0.0) {
        float inv = static_cast<float>(1.0 / std::sqrt(norm));
        for (float& f : v) f *= inv;
    }
    return v;
}

double cosine_similarity(const std::vector<float>& a, const std::vector<float>& b) {
    if (a.empty() || b.empty() || a.size() != b.size()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace cogmem
