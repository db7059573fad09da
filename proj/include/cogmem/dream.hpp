#pragma once
// dream: event-driven consolidation pipeline.
//
// Nine stages: ensure the internal _dream_state item, load the cursor,
// collect events past it (grouped by item, deduplicated to the latest
// revision), fetch episodic candidates, attach bundle context, assess in
// batches, apply actions under guards, persist the cursor, and attach a
// Markdown audit report.
//
// Guards: dry-run (zero mutations), published-item protection, a circuit
// breaker capping deprecations at floor(ratio x assessed) in ascending
// relevance order, and per-action error isolation.
//
// All graph mutations of one run (actions, cursor checkpoint, report
// artifact) commit together after stage 8; an interruption at any stage
// boundary therefore leaves either nothing applied or a cursor covering
// everything applied, which is what makes interrupt/resume exactly-once.
// The persisted cursor also covers the events the commit itself emits, so
// a resume directly after a completed run finds an empty work set.

#include "cogmem/store.hpp"

#include <functional>
#include <memory>

namespace cogmem::dream {

struct Assessment {
    RevisionRef revision_ref;
    double relevance_score = 0.0; // [0, 1]
    bool should_deprecate = false;
    std::string deprecation_reason; // required when should_deprecate
    std::vector<std::string> suggested_tags;
    Metadata metadata_updates;
    std::vector<std::pair<RevisionRef, EdgeType>> related_memories;
};

struct AssessmentInput {
    RevisionRef revision_ref;
    std::string summary;
    Metadata metadata;
    std::vector<std::string> bundle_context; // names of containing bundles
};

// Contract: one assessment per input, conservative (when in doubt, keep).
class Assessor {
public:
    virtual ~Assessor() = default;
    virtual std::vector<Assessment> assess(const std::vector<AssessmentInput>& batch) = 0;
};

struct DreamOptions {
    bool dry_run = false;
    double max_deprecation_ratio = 0.5; // valid range 0.1..0.9
    bool allow_published_deprecation = false;
    int batch_size = 20;
    std::vector<std::string> episodic_kinds{"conversation"};
    std::string project = "memory"; // hosts the _dream_state space/item
    std::string report_dir = ".";
    // Fault-injection point: called with the stage number (1..9) after the
    // stage completes; throwing simulates an interruption at that boundary.
    std::function<void(int)> stage_hook;

    void validate() const;
};

struct ReportEntry {
    std::string kref;
    std::string note;
};

struct RelationshipEntry {
    std::string source;
    std::string target;
    EdgeType type = EdgeType::Referenced;
};

struct DreamReport {
    std::int64_t events_processed = 0;
    std::int64_t memories_assessed = 0;
    std::int64_t duration_ms = 0;
    std::vector<ReportEntry> deprecated;
    std::vector<ReportEntry> metadata_updated;
    std::vector<ReportEntry> tags_added;
    std::vector<RelationshipEntry> relationships_created;
    std::vector<ReportEntry> skipped; // with reasons (incl. circuit-breaker caps)
    std::vector<ReportEntry> failed;  // with errors
    bool circuit_breaker_tripped = false;
    std::int64_t prior_cursor = 0;
    std::int64_t new_cursor = 0;
    bool committed = false; // false for dry runs and empty work sets
    std::string markdown;
    std::string report_path;      // file written on commit
    std::string dream_state_kref; // pinned checkpoint revision on commit
};

inline constexpr char kDreamSpace[] = "_dream_state";
inline constexpr char kDreamItem[] = "_dream_state";
inline constexpr char kDreamKind[] = "state";
inline constexpr char kPublishedTag[] = "published";

Kref dream_state_kref(const std::string& project);

DreamReport run(Graph& g, Assessor& assessor, const DreamOptions& options);
// Same pipeline, but requires that a prior run persisted a cursor.
DreamReport resume(Graph& g, Assessor& assessor, const DreamOptions& options);

// Stored cursor of the last committed run, if any. Throws CursorCorrupt on
// a non-numeric cursor value.
std::optional<std::int64_t> load_cursor(const Graph& g, const std::string& project);

// Offline rule-based assessor: deprecates a memory iff another memory in
// the batch carries an identical normalized summary with a higher seq;
// relevance = min(1, distinct tokens / 32); suggests topic tokens as tags.
std::unique_ptr<Assessor> default_assessor();

// HTTP completion-endpoint adapter: POSTs the batch as JSON to
// {base_url}/assess with an optional bearer token, expecting
// {"assessments": [...]} back. Batch failures raise AssessorFailure.
std::unique_ptr<Assessor> http_assessor(const std::string& base_url, const std::string& token);
// Reads DREAM_ASSESSOR_URL / DREAM_ASSESSOR_TOKEN; null when unset.
std::unique_ptr<Assessor> http_assessor_from_env();

std::string base64_encode(const std::string& bytes);

} // namespace cogmem::dream
