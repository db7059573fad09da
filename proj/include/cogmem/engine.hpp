#pragma once
// engine: composition helpers binding the store, belief and retrieval
// modules into the ingest flow the CLI exposes. One ingest call creates
// the complete memory unit: space and item ensured, revision with derived
// atoms, tags, provenance edges, optional artifact pointer; embeddings
// are filled in afterwards by flush_embeddings.

#include "cogmem/belief.hpp"
#include "cogmem/embedding.hpp"
#include "cogmem/store.hpp"

namespace cogmem {

struct IngestRequest {
    std::string project = "memory";
    std::vector<std::string> space{"user"};
    std::string title; // slugified into the item name
    std::string summary;
    std::string kind = "conversation";
    std::vector<std::string> topics;
    std::vector<std::string> keywords;
    std::vector<std::string> tags; // bound to the new revision besides "latest"
    std::vector<Kref> derived_from;
    std::optional<std::pair<std::string, std::string>> artifact; // name, location
    std::optional<std::string> embedding_text;
    std::optional<std::string> session;
    std::string author = "cli";
};

struct IngestResult {
    Kref kref; // pinned to the created revision
    RevisionRef revision;
    bool revised_existing = false;
};

// Lowercases and maps runs of non-token characters to single hyphens.
std::string slugify(const std::string& title);

// Ground atoms for an ingested unit: the summary triple plus one atom per
// topic and keyword.
AtomSet derive_atoms(const Kref& item, const std::string& summary,
                     const std::vector<std::string>& topics,
                     const std::vector<std::string>& keywords);

// Repeated ingest of the same title takes the revision path (SUPERSEDES +
// tag move) instead of duplicating the item.
IngestResult ingest(Graph& g, const IngestRequest& request);

// Computes and sets embeddings for every revision still lacking one,
// embedding the override text when present, else the search text. Returns
// the number of embeddings written.
int flush_embeddings(Graph& g, EmbeddingProvider& provider);

} // namespace cogmem
