#pragma once
// retrieval: two-branch hybrid search over tag-bound revisions.
//
// Fulltext branch: Okapi BM25 (k1=1.2, b=0.75) over the composite search
// text plus artifact names, with query-time fuzzy expansion (Levenshtein
// distance <= 1 for query terms longer than 2 characters). Vector branch:
// calibrated cosine (beta = 0.85) against revision embeddings. Fusion is
// max-based per candidate, weighted by match type (item 1.0, revision 0.9,
// artifact 0.8); deprecated items never surface without the explicit flag.

#include "cogmem/embedding.hpp"
#include "cogmem/store.hpp"

#include <map>
#include <set>
#include <shared_mutex>

namespace cogmem {

inline constexpr double kBm25K1 = 1.2;
inline constexpr double kBm25B = 0.75;
inline constexpr double kVectorCalibration = 0.85;
inline constexpr double kSiblingCosineThreshold = 0.30;

enum class MatchType { Item, Revision, Artifact };
enum class Branch { Fulltext, Vector };
enum class SearchMode { Fulltext, Hybrid };

const char* match_type_name(MatchType m);
const char* branch_name(Branch b);
const char* search_mode_name(SearchMode m);

inline double match_type_weight(MatchType m) {
    switch (m) {
        case MatchType::Item: return 1.0;
        case MatchType::Revision: return 0.9;
        case MatchType::Artifact: return 0.8;
    }
    return 0.9;
}

struct SearchResult {
    Kref target; // revision-pinned
    double score = 0.0;
    MatchType match_type = MatchType::Revision;
    Branch branch = Branch::Fulltext;
    SearchMode search_mode = SearchMode::Fulltext;
};

struct SearchOptions {
    std::int64_t k = 10;
    bool include_deprecated = false;
    std::optional<Timestamp> at;
};

class SearchIndex {
public:
    explicit SearchIndex(std::shared_ptr<EmbeddingProvider> provider = nullptr);

    // Incremental catch-up with the graph: appends documents for revisions
    // indexed since the last sync, picks up embeddings that landed
    // asynchronously, and rebuilds if artifact names changed. Revisions are
    // append-only, so the index never removes documents; deprecation and
    // tag state are query-time filters.
    void sync(const Graph& g);

    std::vector<SearchResult> search(const Graph& g, const std::string& query,
                                     SearchOptions opts = {}) const;
    // The unbounded (pre-cutoff) candidate set: every result with a
    // positive merged score, fully ordered.
    std::vector<SearchResult> search_all(const Graph& g, const std::string& query,
                                         bool include_deprecated = false,
                                         std::optional<Timestamp> at = std::nullopt) const;

    // Branch scores for a single revision, exposed for oracles and tools.
    double fulltext_score(const std::string& query, const RevisionRef& ref) const;
    double vector_score(const std::string& query, const Revision& rev) const;

    // Keeps siblings whose embedding cosine against the query clears the
    // threshold, preserving input order; the latest-tagged (primary)
    // revision is always kept.
    std::vector<Revision> sibling_filter(const Graph& g, const std::string& query,
                                         const std::vector<Revision>& siblings,
                                         double threshold = kSiblingCosineThreshold) const;

    bool has_provider() const { return provider_ != nullptr; }
    SearchMode mode() const { return provider_ ? SearchMode::Hybrid : SearchMode::Fulltext; }
    std::size_t doc_count() const;

private:
    struct Doc {
        RevisionRef target;
        std::string ref_key;  // canonical pinned kref, precomputed
        std::string item_key; // canonical base kref, precomputed
        int length = 0;
        std::vector<int> item_terms;     // sorted term ids
        std::vector<int> content_terms;  // sorted term ids
        std::vector<int> artifact_terms; // sorted term ids
        std::optional<std::vector<float>> embedding;
        double embedding_norm = 0.0; // cached L2 norm
    };
    struct Term {
        std::string text;
        std::vector<std::pair<std::int32_t, std::int32_t>> postings; // (doc, tf), doc ascending
    };

    void add_document(const Revision& rev, const std::vector<ArtifactPointer>& artifacts);
    void rebuild(const Graph& g);
    int intern(const std::string& term);
    std::vector<int> expand_query_term(const std::string& term) const;
    bool candidate_visible(const Graph& g, const Doc& doc, bool include_deprecated,
                           std::optional<Timestamp> at) const;
    std::vector<SearchResult> run_query(const Graph& g, const std::string& query,
                                        std::int64_t k, bool include_deprecated,
                                        std::optional<Timestamp> at) const;

    std::shared_ptr<EmbeddingProvider> provider_;
    std::vector<Doc> docs_;
    std::map<std::string, std::int32_t> doc_by_ref_;
    std::map<std::string, std::int64_t> synced_seq_; // per item base kref
    std::unordered_map<std::string, int> term_ids_;
    std::vector<Term> terms_;
    std::map<int, std::vector<int>> terms_by_length_;
    std::int64_t total_length_ = 0;
    std::size_t synced_artifacts_ = 0;
    std::vector<std::int32_t> pending_embedding_;
    std::uint64_t synced_mutations_ = 0;

    mutable std::shared_mutex mx_;
};

// Levenshtein distance <= 1, with early exit. Exposed for the fuzzy oracle.
bool within_edit_distance_one(const std::string& a, const std::string& b);

} // namespace cogmem
