#include "cogmem/retrieval.hpp"

#include <algorithm>
#include <cmath>

namespace cogmem {

const char* match_type_name(MatchType m) {
    switch (m) {
        case MatchType::Item: return "item";
        case MatchType::Revision: return "revision";
        case MatchType::Artifact: return "artifact";
    }
    return "revision";
}

const char* branch_name(Branch b) { return b == Branch::Fulltext ? "fulltext" : "vector"; }

const char* search_mode_name(SearchMode m) {
    return m == SearchMode::Fulltext ? "fulltext" : "hybrid";
}

bool within_edit_distance_one(const std::string& a, const std::string& b) {
    const std::size_t la = a.size(), lb = b.size();
    if (la == lb) {
        int diff = 0;
        for (std::size_t i = 0; i < la; ++i)
            if (a[i] != b[i] && ++diff > 1) return false;
        return true;
    }
    const std::string& shorter = la < lb ? a : b;
    const std::string& longer = la < lb ? b : a;
    if (longer.size() - shorter.size() != 1) return false;
    // One insertion: advance both, allow a single skip in the longer string.
    std::size_t i = 0, j = 0;
    bool skipped = false;
    while (i < shorter.size() && j < longer.size()) {
        if (shorter[i] == longer[j]) {
            ++i;
            ++j;
        } else {
            if (skipped) return false;
            skipped = true;
            ++j;
        }
    }
    return true;
}

SearchIndex::SearchIndex(std::shared_ptr<EmbeddingProvider> provider)
    : provider_(std::move(provider)) {}

int SearchIndex::intern(const std::string& term) {
    auto it = term_ids_.find(term);
    if (it != term_ids_.end()) return it->second;
    int id = static_cast<int>(terms_.size());
    term_ids_.emplace(term, id);
    terms_.push_back({term, {}});
    terms_by_length_[static_cast<int>(term.size())].push_back(id);
    return id;
}

namespace {

double l2_norm(const std::vector<float>& v) {
    double out = 0.0;
    for (float f : v) out += static_cast<double>(f) * f;
    return std::sqrt(out);
}

} // namespace

void SearchIndex::add_document(const Revision& rev,
                               const std::vector<ArtifactPointer>& artifacts) {
    Doc doc;
    doc.target = rev.ref();
    doc.ref_key = doc.target.format();
    doc.item_key = doc.target.item.format();
    doc.embedding = rev.embedding;
    if (doc.embedding) doc.embedding_norm = l2_norm(*doc.embedding);

    std::vector<std::string> item_toks = tokenize(rev.item.item_name + " " + rev.item.kind);
    std::vector<std::string> content_toks = tokenize(
        rev.summary + " " +
        (rev.metadata.count("keywords") ? rev.metadata.at("keywords") : std::string()) + " " +
        (rev.metadata.count("topics") ? rev.metadata.at("topics") : std::string()) + " " +
        rev.embedding_text_override.value_or(""));
    std::vector<std::string> artifact_toks;
    for (const ArtifactPointer& ap : artifacts)
        for (const std::string& t : tokenize(ap.name)) artifact_toks.push_back(t);

    std::map<int, std::int32_t> tf;
    auto ingest = [&](const std::vector<std::string>& toks, std::vector<int>& class_ids) {
        for (const std::string& t : toks) {
            int id = intern(t);
            tf[id]++;
            class_ids.push_back(id);
        }
        std::sort(class_ids.begin(), class_ids.end());
        class_ids.erase(std::unique(class_ids.begin(), class_ids.end()), class_ids.end());
    };
    ingest(item_toks, doc.item_terms);
    ingest(content_toks, doc.content_terms);
    ingest(artifact_toks, doc.artifact_terms);

    std::int32_t doc_idx = static_cast<std::int32_t>(docs_.size());
    std::int64_t length = 0;
    for (const auto& [id, count] : tf) {
        terms_[static_cast<std::size_t>(id)].postings.emplace_back(doc_idx, count);
        length += count;
    }
    doc.length = static_cast<int>(length);
    total_length_ += length;
    if (!doc.embedding) pending_embedding_.push_back(doc_idx);
    doc_by_ref_[doc.ref_key] = doc_idx;
    docs_.push_back(std::move(doc));
}

void SearchIndex::rebuild(const Graph& g) {
    docs_.clear();
    doc_by_ref_.clear();
    synced_seq_.clear();
    term_ids_.clear();
    terms_.clear();
    terms_by_length_.clear();
    total_length_ = 0;
    pending_embedding_.clear();
    synced_artifacts_ = 0;
    for (const Item& item : g.items()) {
        std::vector<Revision> revs = g.revisions(item.kref_base);
        for (const Revision& rev : revs) {
            auto artifacts = g.artifacts(rev.ref());
            synced_artifacts_ += artifacts.size();
            add_document(rev, artifacts);
        }
        synced_seq_[item.kref_base.format()] = static_cast<std::int64_t>(revs.size());
    }
}

void SearchIndex::sync(const Graph& g) {
    std::unique_lock lock(mx_);
    std::uint64_t mutations = g.mutation_count();
    if (mutations == synced_mutations_ && synced_mutations_ != 0) return;

    std::size_t artifact_total = g.all_artifacts().size();
    if (artifact_total != synced_artifacts_) {
        // Artifact names extend existing documents; rebuilding keeps the
        // corpus statistics exact.
        rebuild(g);
    } else {
        for (const Item& item : g.items()) {
            std::string key = item.kref_base.format();
            std::int64_t have = 0;
            if (auto it = synced_seq_.find(key); it != synced_seq_.end()) have = it->second;
            std::vector<Revision> revs = g.revisions(item.kref_base);
            for (std::int64_t seq = have + 1; seq <= static_cast<std::int64_t>(revs.size());
                 ++seq) {
                const Revision& rev = revs[static_cast<std::size_t>(seq - 1)];
                add_document(rev, g.artifacts(rev.ref()));
            }
            synced_seq_[key] = static_cast<std::int64_t>(revs.size());
        }
    }

    // Embeddings are set once, asynchronously; pull in any that landed.
    std::vector<std::int32_t> still_pending;
    for (std::int32_t idx : pending_embedding_) {
        auto rev = g.maybe_revision(docs_[static_cast<std::size_t>(idx)].target);
        if (rev && rev->embedding) {
            Doc& doc = docs_[static_cast<std::size_t>(idx)];
            doc.embedding = rev->embedding;
            doc.embedding_norm = l2_norm(*doc.embedding);
        } else {
            still_pending.push_back(idx);
        }
    }
    pending_embedding_ = std::move(still_pending);
    synced_mutations_ = mutations;
}

std::vector<int> SearchIndex::expand_query_term(const std::string& term) const {
    std::vector<int> out;
    if (auto it = term_ids_.find(term); it != term_ids_.end()) out.push_back(it->second);
    if (term.size() > 2) {
        int len = static_cast<int>(term.size());
        for (int l = len - 1; l <= len + 1; ++l) {
            auto bucket = terms_by_length_.find(l);
            if (bucket == terms_by_length_.end()) continue;
            for (int id : bucket->second) {
                const std::string& candidate = terms_[static_cast<std::size_t>(id)].text;
                if (candidate == term) continue; // exact already handled
                if (within_edit_distance_one(term, candidate)) out.push_back(id);
            }
        }
    }
    return out;
}

bool SearchIndex::candidate_visible(const Graph& g, const Doc& doc, bool include_deprecated,
                                    std::optional<Timestamp> at) const {
    if (at) {
        if (!g.revision_tag_bound(doc.target, at)) return false;
    } else if (!g.revision_tag_bound_key(doc.ref_key)) {
        return false;
    }
    if (!include_deprecated && g.is_deprecated_key(doc.item_key)) return false;
    return true;
}

std::vector<SearchResult> SearchIndex::run_query(const Graph& g, const std::string& query,
                                                 std::int64_t k, bool include_deprecated,
                                                 std::optional<Timestamp> at) const {
    std::shared_lock lock(mx_);
    const std::size_t n = docs_.size();
    if (n == 0) return {};
    const double n_docs = static_cast<double>(n);
    const double avgdl = static_cast<double>(total_length_) / n_docs;

    auto idf = [&](const Term& t) {
        double df = static_cast<double>(t.postings.size());
        return std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
    };

    // Branch accumulators, indexed by document. class: -1 unset, then
    // 0 item / 1 content / 2 artifact with lower values taking precedence.
    std::vector<double> fulltext(n, 0.0);
    std::vector<double> vector_scores(n, 0.0);
    std::vector<signed char> match_class(n, -1);
    std::vector<double> best(n, 0.0);
    std::vector<std::int32_t> touched;

    for (const std::string& qterm : tokenize(query)) {
        touched.clear();
        for (int term_id : expand_query_term(qterm)) {
            const Term& t = terms_[static_cast<std::size_t>(term_id)];
            const double t_idf = idf(t);
            for (const auto& [doc_idx, tf] : t.postings) {
                const Doc& d = docs_[static_cast<std::size_t>(doc_idx)];
                double norm =
                    tf + kBm25K1 * (1.0 - kBm25B + kBm25B * d.length / avgdl);
                double s = t_idf * (tf * (kBm25K1 + 1.0)) / norm;
                auto ux = static_cast<std::size_t>(doc_idx);
                if (best[ux] == 0.0) touched.push_back(doc_idx);
                if (s > best[ux]) best[ux] = s;
                signed char cls = 2;
                if (std::binary_search(d.item_terms.begin(), d.item_terms.end(), term_id))
                    cls = 0;
                else if (std::binary_search(d.content_terms.begin(), d.content_terms.end(),
                                            term_id))
                    cls = 1;
                if (match_class[ux] < 0 || cls < match_class[ux]) match_class[ux] = cls;
            }
        }
        for (std::int32_t doc_idx : touched) {
            auto ux = static_cast<std::size_t>(doc_idx);
            fulltext[ux] += best[ux];
            best[ux] = 0.0;
        }
    }

    if (provider_) {
        std::vector<float> q = provider_->embed(query);
        double q_norm = l2_norm(q);
        if (q_norm > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                const Doc& d = docs_[i];
                if (!d.embedding || d.embedding_norm == 0.0 ||
                    d.embedding->size() != q.size())
                    continue;
                double dot = 0.0;
                const float* a = q.data();
                const float* b = d.embedding->data();
                for (std::size_t j = 0; j < q.size(); ++j)
                    dot += static_cast<double>(a[j]) * b[j];
                double s = kVectorCalibration * (dot / (q_norm * d.embedding_norm));
                if (s > 0.0) vector_scores[i] = s;
            }
        }
    }

    SearchMode mode = provider_ ? SearchMode::Hybrid : SearchMode::Fulltext;
    struct Hit {
        std::int32_t doc;
        double score;
        MatchType mt;
        Branch branch;
    };
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < n; ++i) {
        double sl = fulltext[i], sv = vector_scores[i];
        double strongest = std::max(sl, sv);
        if (strongest <= 0.0) continue;
        const Doc& doc = docs_[i];
        if (!candidate_visible(g, doc, include_deprecated, at)) continue;
        MatchType mt = MatchType::Revision;
        if (match_class[i] == 0)
            mt = MatchType::Item;
        else if (match_class[i] == 2)
            mt = MatchType::Artifact;
        hits.push_back({static_cast<std::int32_t>(i),
                        match_type_weight(mt) * strongest, mt,
                        sl >= sv ? Branch::Fulltext : Branch::Vector});
    }

    // Descending score; ties by canonical kref then seq. Documents are not
    // stored in kref order under incremental sync, so ties compare the
    // precomputed keys.
    std::sort(hits.begin(), hits.end(), [this](const Hit& a, const Hit& b) {
        if (a.score != b.score) return a.score > b.score;
        const Doc& da = docs_[static_cast<std::size_t>(a.doc)];
        const Doc& db = docs_[static_cast<std::size_t>(b.doc)];
        if (da.item_key != db.item_key) return da.item_key < db.item_key;
        return da.target.seq < db.target.seq;
    });
    if (k >= 0 && static_cast<std::int64_t>(hits.size()) > k)
        hits.resize(static_cast<std::size_t>(k));

    std::vector<SearchResult> results;
    results.reserve(hits.size());
    for (const Hit& h : hits) {
        const Doc& doc = docs_[static_cast<std::size_t>(h.doc)];
        SearchResult r;
        r.target = doc.target.item.with_pin(doc.target.seq);
        r.score = h.score;
        r.match_type = h.mt;
        r.branch = h.branch;
        r.search_mode = mode;
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<SearchResult> SearchIndex::search(const Graph& g, const std::string& query,
                                              SearchOptions opts) const {
    if (opts.k < 1) raise(Errc::InvalidOption, "k must be >= 1");
    return run_query(g, query, opts.k, opts.include_deprecated, opts.at);
}

std::vector<SearchResult> SearchIndex::search_all(const Graph& g, const std::string& query,
                                                  bool include_deprecated,
                                                  std::optional<Timestamp> at) const {
    return run_query(g, query, -1, include_deprecated, at);
}

double SearchIndex::fulltext_score(const std::string& query, const RevisionRef& ref) const {
    std::shared_lock lock(mx_);
    auto it = doc_by_ref_.find(ref.format());
    if (it == doc_by_ref_.end()) return 0.0;
    std::int32_t doc_idx = it->second;
    if (docs_.empty()) return 0.0;
    const double n_docs = static_cast<double>(docs_.size());
    const double avgdl = static_cast<double>(total_length_) / n_docs;

    double score = 0.0;
    for (const std::string& qterm : tokenize(query)) {
        double best = 0.0;
        for (int term_id : expand_query_term(qterm)) {
            const Term& t = terms_[static_cast<std::size_t>(term_id)];
            auto posting = std::lower_bound(
                t.postings.begin(), t.postings.end(), std::make_pair(doc_idx, INT32_MIN));
            if (posting == t.postings.end() || posting->first != doc_idx) continue;
            double df = static_cast<double>(t.postings.size());
            double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
            double dl = static_cast<double>(docs_[static_cast<std::size_t>(doc_idx)].length);
            double tf = static_cast<double>(posting->second);
            double s = idf * (tf * (kBm25K1 + 1.0)) /
                       (tf + kBm25K1 * (1.0 - kBm25B + kBm25B * dl / avgdl));
            best = std::max(best, s);
        }
        score += best;
    }
    return score;
}

double SearchIndex::vector_score(const std::string& query, const Revision& rev) const {
    if (!provider_) raise(Errc::NoProvider, "no embedding provider configured");
    if (!rev.embedding) return 0.0;
    return kVectorCalibration * cosine_similarity(provider_->embed(query), *rev.embedding);
}

std::vector<Revision> SearchIndex::sibling_filter(const Graph& g, const std::string& query,
                                                  const std::vector<Revision>& siblings,
                                                  double threshold) const {
    if (!provider_) raise(Errc::NoProvider, "sibling filter requires an embedding provider");
    std::vector<float> q = provider_->embed(query);
    std::vector<Revision> kept;
    for (const Revision& rev : siblings) {
        bool primary = false;
        if (auto binding = g.open_binding(rev.item, kLatestTag))
            primary = binding->revision_seq == rev.seq;
        if (primary) {
            kept.push_back(rev);
            continue;
        }
        double cos = rev.embedding ? cosine_similarity(q, *rev.embedding) : 0.0;
        if (cos >= threshold) kept.push_back(rev);
    }
    return kept;
}

std::size_t SearchIndex::doc_count() const {
    std::shared_lock lock(mx_);
    return docs_.size();
}

} // namespace cogmem
