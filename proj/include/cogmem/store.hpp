#pragma once
// store: in-engine property graph. Items own immutable, append-only
// revision chains; tags are the sole mutable layer and keep their full
// time-indexed history; typed edges link revisions; every structural
// change lands in an append-only event log whose seq numbers form the
// cursor space.
//
// Concurrency: reads take a shared lock and return copies. Mutations are
// serialized through a recursive writer mutex; multi-op sequences (the
// belief operators, the consolidation commit) hold write_lock() across
// the whole sequence so the belief state is never partially updated.

#include "cogmem/atoms.hpp"
#include "cogmem/clock.hpp"
#include "cogmem/errors.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace cogmem {

using Metadata = std::map<std::string, std::string>;

struct Item {
    Kref kref_base; // unique per graph; kind mirrored below
    std::string kind;
    bool deprecated = false;
    Timestamp created_at;
    Metadata metadata;
};

struct Revision {
    Kref item;
    std::int64_t seq = 0; // contiguous 1..k per item
    AtomSet content;
    std::string summary;
    Metadata metadata;
    std::string search_text;
    std::optional<std::vector<float>> embedding; // set at most once, later
    std::optional<std::string> embedding_text_override;
    Timestamp created_at;
    std::string author;

    RevisionRef ref() const { return {item, seq}; }
};

struct Edge {
    RevisionRef source;
    EdgeType edge_type = EdgeType::Referenced;
    RevisionRef target;
    Metadata metadata;
    Timestamp created_at;
};

struct TagHistoryEntry {
    Kref item;
    std::string tag;
    std::int64_t revision_seq = 0;
    Timestamp assigned_at;
    std::optional<Timestamp> removed_at; // open while absent

    // Half-open validity interval [assigned_at, removed_at).
    bool open_at(Timestamp t) const {
        return assigned_at <= t && (!removed_at || t < *removed_at);
    }
    bool open() const { return !removed_at.has_value(); }
};

struct ArtifactPointer {
    Kref item;
    std::int64_t revision_seq = 0;
    std::string name;
    std::string location; // opaque; never dereferenced by the engine
    std::optional<std::string> media_hint;
};

enum class EventKind { RevisionCreated, EdgeCreated, RevisionDeprecated };

const char* event_kind_name(EventKind k);

struct Event {
    std::int64_t seq = 0; // contiguous 1..N, the cursor space
    EventKind kind = EventKind::RevisionCreated;
    RevisionRef subject;       // the revision (or edge source for edge.created)
    std::optional<Edge> edge;  // full payload for edge.created
    Timestamp at;
};

inline constexpr char kLatestTag[] = "latest";

struct RevisionOptions {
    bool bind_latest = true;
    std::optional<std::string> embedding_text_override;
    std::string author = "engine";
};

class Graph {
public:
    explicit Graph(std::shared_ptr<Clock> clock);

    Graph(Graph&&) noexcept;
    Graph& operator=(Graph&&) noexcept;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    // -- items ------------------------------------------------------------
    Item create_item(const Kref& kref_base, Metadata metadata = {});
    Item ensure_item(const Kref& kref_base, Metadata metadata = {});
    bool has_item(const Kref& kref_base) const;
    Item item(const Kref& kref_base) const;
    std::vector<Item> items() const; // ordered by canonical kref
    void update_item_metadata(const Kref& kref_base, const Metadata& updates);
    void set_deprecated(const Kref& kref_base, bool value,
                        std::optional<Timestamp> at = std::nullopt);
    bool is_deprecated(const Kref& kref_base) const;

    // -- revisions ----------------------------------------------------------
    Revision create_revision(const Kref& item, AtomSet content, std::string summary,
                             Metadata metadata = {}, RevisionOptions opts = RevisionOptions());
    Revision revision(const RevisionRef& ref) const;
    std::optional<Revision> maybe_revision(const RevisionRef& ref) const;
    std::vector<Revision> revisions(const Kref& kref_base) const;
    std::int64_t latest_seq(const Kref& kref_base) const; // 0 when none
    void set_embedding(const RevisionRef& ref, std::vector<float> embedding);

    // -- edges -------------------------------------------------------------
    Edge add_edge(const RevisionRef& source, EdgeType type, const RevisionRef& target,
                  Metadata metadata = {});
    std::vector<Edge> edges() const;
    std::vector<Edge> edges_from(const RevisionRef& ref) const;
    std::vector<Edge> edges_to(const RevisionRef& ref) const;

    // -- tags --------------------------------------------------------------
    TagHistoryEntry bind_tag(const Kref& item, const std::string& tag, std::int64_t seq,
                             std::optional<Timestamp> at = std::nullopt);
    void remove_tag(const Kref& item, const std::string& tag,
                    std::optional<Timestamp> at = std::nullopt);
    std::optional<TagHistoryEntry> open_binding(const Kref& item, const std::string& tag,
                                                std::optional<Timestamp> at = std::nullopt) const;
    // Every binding open at `at` (default: now), across all items and tags.
    std::vector<TagHistoryEntry> open_bindings(std::optional<Timestamp> at = std::nullopt) const;
    std::vector<TagHistoryEntry> tag_history(const Kref& item) const;
    bool revision_tag_bound(const RevisionRef& ref,
                            std::optional<Timestamp> at = std::nullopt) const;
    bool item_has_open_tag(const Kref& kref_base, const std::string& tag) const;

    // Hot-path variants keyed by canonical kref text (the documented
    // external form): "kref://.../item.kind?r=N" and the item base form.
    bool revision_tag_bound_key(const std::string& pinned_kref) const;
    bool is_deprecated_key(const std::string& base_kref) const;

    // Every open binding at `at` together with its revision content and
    // the item's deprecation flag, captured under one lock so belief-state
    // reads see a consistent point-in-time view.
    struct BoundRevision {
        TagHistoryEntry binding;
        Revision revision;
        bool item_deprecated = false;
    };
    std::vector<BoundRevision> bound_revisions(
        std::optional<Timestamp> at = std::nullopt) const;

    // -- resolution ----------------------------------------------------------
    Revision resolve(const Kref& k, std::optional<Timestamp> at = std::nullopt,
                     bool include_deprecated = false) const;

    // -- artifacts -----------------------------------------------------------
    ArtifactPointer attach_artifact(const RevisionRef& ref, const std::string& name,
                                    const std::string& location,
                                    std::optional<std::string> media_hint = std::nullopt);
    std::vector<ArtifactPointer> artifacts(const RevisionRef& ref) const;
    std::vector<ArtifactPointer> all_artifacts() const;

    // -- events ----------------------------------------------------------------
    std::vector<Event> read_events(std::optional<std::int64_t> from_cursor,
                                   std::int64_t limit) const;
    std::int64_t last_event_seq() const;

    // -- persistence ---------------------------------------------------------
    std::string snapshot_bytes() const;
    void save_snapshot(const std::string& path) const;
    static Graph load_snapshot(const std::string& path, std::shared_ptr<Clock> clock);
    static Graph from_snapshot_bytes(const std::string& bytes, std::shared_ptr<Clock> clock);

    // Serializes a multi-operation write sequence against other writers.
    std::unique_lock<std::recursive_mutex> write_lock();

    Clock& clock() { return *clock_; }
    std::uint64_t mutation_count() const;

private:
    friend struct SnapshotCodec;
    friend struct JsonlCodec;

    struct ItemRec {
        Item item;
        std::vector<Revision> revisions;
    };

    static std::string key(const Kref& base) { return base.base().format(); }
    static std::string ref_key(const RevisionRef& ref) { return ref.format(); }

    Timestamp stamp(std::optional<Timestamp> at);
    const ItemRec& item_rec(const Kref& base) const;
    ItemRec& item_rec_mut(const Kref& base);
    const Revision& revision_internal(const RevisionRef& ref) const;
    TagHistoryEntry bind_tag_internal(const Kref& item, const std::string& tag, std::int64_t seq,
                                      Timestamp at);
    void push_event(EventKind kind, const RevisionRef& subject, std::optional<Edge> edge,
                    Timestamp at);

    std::shared_ptr<Clock> clock_;
    std::map<std::string, ItemRec> items_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, std::vector<std::size_t>> edges_out_;
    std::unordered_map<std::string, std::vector<std::size_t>> edges_in_;
    // (item key, tag) -> append-only history
    std::map<std::pair<std::string, std::string>, std::vector<TagHistoryEntry>> tags_;
    std::unordered_map<std::string, int> open_tag_count_; // per revision ref key
    std::map<std::string, std::vector<ArtifactPointer>> artifacts_;
    std::vector<Event> events_;
    std::uint64_t mutations_ = 0;

    mutable std::shared_mutex state_mx_;
    std::recursive_mutex write_mx_;
};

// Composite searchable text: item name + kind + summary + keywords +
// topics + optional embedding-text override, joined in that order.
std::string compose_search_text(const std::string& item_name, const std::string& kind,
                                const std::string& summary, const Metadata& metadata,
                                const std::optional<std::string>& embedding_text_override);

} // namespace cogmem
