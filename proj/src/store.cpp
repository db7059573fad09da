#include "cogmem/store.hpp"

#include <algorithm>

namespace cogmem {

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::RevisionCreated: return "revision.created";
        case EventKind::EdgeCreated: return "edge.created";
        case EventKind::RevisionDeprecated: return "revision.deprecated";
    }
    return "revision.created";
}

std::string compose_search_text(const std::string& item_name, const std::string& kind,
                                const std::string& summary, const Metadata& metadata,
                                const std::optional<std::string>& embedding_text_override) {
    std::string out;
    auto append = [&out](const std::string& part) {
        if (part.empty()) return;
        if (!out.empty()) out += ' ';
        out += part;
    };
    append(item_name);
    append(kind);
    append(summary);
    if (auto it = metadata.find("keywords"); it != metadata.end()) append(it->second);
    if (auto it = metadata.find("topics"); it != metadata.end()) append(it->second);
    if (embedding_text_override) append(*embedding_text_override);
    return out;
}

Graph::Graph(std::shared_ptr<Clock> clock) : clock_(std::move(clock)) {}

Graph::Graph(Graph&& other) noexcept
    : clock_(std::move(other.clock_)),
      items_(std::move(other.items_)),
      edges_(std::move(other.edges_)),
      edges_out_(std::move(other.edges_out_)),
      edges_in_(std::move(other.edges_in_)),
      tags_(std::move(other.tags_)),
      open_tag_count_(std::move(other.open_tag_count_)),
      artifacts_(std::move(other.artifacts_)),
      events_(std::move(other.events_)),
      mutations_(other.mutations_) {}

Graph& Graph::operator=(Graph&& other) noexcept {
    if (this != &other) {
        clock_ = std::move(other.clock_);
        items_ = std::move(other.items_);
        edges_ = std::move(other.edges_);
        edges_out_ = std::move(other.edges_out_);
        edges_in_ = std::move(other.edges_in_);
        tags_ = std::move(other.tags_);
        open_tag_count_ = std::move(other.open_tag_count_);
        artifacts_ = std::move(other.artifacts_);
        events_ = std::move(other.events_);
        mutations_ = other.mutations_;
    }
    return *this;
}

Timestamp Graph::stamp(std::optional<Timestamp> at) { return at ? *at : clock_->now(); }

const Graph::ItemRec& Graph::item_rec(const Kref& base) const {
    auto it = items_.find(key(base));
    if (it == items_.end()) raise(Errc::UnknownItem, key(base));
    return it->second;
}

Graph::ItemRec& Graph::item_rec_mut(const Kref& base) {
    auto it = items_.find(key(base));
    if (it == items_.end()) raise(Errc::UnknownItem, key(base));
    return it->second;
}

const Revision& Graph::revision_internal(const RevisionRef& ref) const {
    const ItemRec& rec = item_rec(ref.item);
    if (ref.seq < 1 || ref.seq > static_cast<std::int64_t>(rec.revisions.size()))
        raise(Errc::UnknownRevision, ref.format());
    return rec.revisions[static_cast<std::size_t>(ref.seq - 1)];
}

void Graph::push_event(EventKind kind, const RevisionRef& subject, std::optional<Edge> edge,
                       Timestamp at) {
    Event ev;
    ev.seq = static_cast<std::int64_t>(events_.size()) + 1;
    ev.kind = kind;
    ev.subject = subject;
    ev.edge = std::move(edge);
    ev.at = at;
    events_.push_back(std::move(ev));
}

Item Graph::create_item(const Kref& kref_base, Metadata metadata) {
    std::lock_guard wl(write_mx_);
    std::unique_lock sl(state_mx_);
    std::string k = key(kref_base);
    if (items_.count(k)) raise(Errc::DuplicateItem, k);
    Item item;
    item.kref_base = kref_base.base();
    item.kind = kref_base.kind;
    item.created_at = stamp(std::nullopt);
    item.metadata = std::move(metadata);
    items_[k].item = item;
    ++mutations_;
    return item;
}

Item Graph::ensure_item(const Kref& kref_base, Metadata metadata) {
    std::lock_guard wl(write_mx_);
    {
        std::shared_lock sl(state_mx_);
        auto it = items_.find(key(kref_base));
        if (it != items_.end()) return it->second.item;
    }
    return create_item(kref_base, std::move(metadata));
}

bool Graph::has_item(const Kref& kref_base) const {
    std::shared_lock sl(state_mx_);
    return items_.count(key(kref_base)) > 0;
}

Item Graph::item(const Kref& kref_base) const {
    std::shared_lock sl(state_mx_);
    return item_rec(kref_base).item;
}

std::vector<Item> Graph::items() const {
    std::shared_lock sl(state_mx_);
    std::vector<Item> out;
    out.reserve(items_.size());
    for (const auto& [_, rec] : items_) out.push_back(rec.item);
    return out;
}

void Graph::update_item_metadata(const Kref& kref_base, const Metadata& updates) {
    std::lock_guard wl(write_mx_);
    std::unique_lock sl(state_mx_);
    ItemRec& rec = item_rec_mut(kref_base);
    for (const auto& [k, v] : updates) rec.item.metadata[k] = v;
    ++mutations_;
}

void Graph::set_deprecated(const Kref& kref_base, bool value, std::optional<Timestamp> at) {
    std::lock_guard wl(write_mx_);
    std::unique_lock sl(state_mx_);
    ItemRec& rec = item_rec_mut(kref_base);
    if (rec.item.deprecated == value) return; // idempotent, no extra event
    rec.item.deprecated = value;
    ++mutations_;
    if (value && !rec.revisions.empty()) {
        RevisionRef latest{rec.item.kref_base,
                           static_cast<std::int64_t>(rec.revisions.size())};
        push_event(EventKind::RevisionDeprecated, latest, std::nullopt, stamp(at));
    }
}

bool Graph::is_deprecated(const Kref& kref_base) const {
    std::shared_lock sl(state_mx_);
    return item_rec(kref_base).item.deprecated;
}

Revision Graph::create_revision(const Kref& item, AtomSet content, std::string summary,
                                Metadata metadata, RevisionOptions opts) {
    std::lock_guard wl(write_mx_);
    std::unique_lock sl(state_mx_);
    ItemRec& rec = item_rec_mut(item);
    Timestamp now = stamp(std::nullopt);

    Revision rev;
    rev.item = rec.item.kref_base;
    rev.seq = static_cast<std::int64_t>(rec.revisions.size()) + 1;
    normalize(content);
    rev.content = std::move(content);
    rev.summary = std::move(summary);
    rev.metadata = std::move(metadata);
    rev.embedding_text_override = std::move(opts.embedding_text_override);
    rev.search_text = compose_search_text(rec.item.kref_base.item_name, rec.item.kind,
                                          rev.summary, rev.metadata,
                                          rev.embedding_text_override);
    rev.created_at = now;
    rev.author = std::move(opts.author);
    rec.revisions.push_back(rev);
    ++mutations_;
    push_event(EventKind::RevisionCreated, rev.ref(), std::nullopt, now);
    if (opts.bind_latest) bind_tag_internal(rev.item, kLatestTag, rev.seq, now);
    return rev;
}

Revision Graph::revision(const RevisionRef& ref) const {
    std::shared_lock sl(state_mx_);
    return revision_internal(ref);
}

std::optional<Revision> Graph::maybe_revision(const RevisionRef& ref) const {
    std::shared_lock sl(state_mx_);
    auto it = items_.find(key(ref.item));
    if (it == items_.end()) return std::nullopt;
    if (ref.seq < 1 || ref.seq > static_cast<std::int64_t>(it->second.revisions.size()))
        return std::nullopt;
    return it->second.revisions[static_cast<std::size_t>(ref.seq - 1)];
}

std::vector<Revision> Graph::revisions(const Kref& kref_base) const {
    std::shared_lock sl(state_mx_);
    return item_rec(kref_base).revisions;
}

std::int64_t Graph::latest_seq(const Kref& kref_base) const {
    std::shared_lock sl(state_mx_);
    auto it = items_.find(key(kref_base));
    if (it == items_.end()) return 0;
    return static_cast<std::int64_t>(it->second.revisions.size());
}

void Graph::set_embedding(const RevisionRef& ref, std::vector<float> embedding) {
    std::lock_guard wl(write_mx_);
    std::unique_lock sl(state_mx_);
    ItemRec& rec = item_rec_mut(ref.item);
    if (ref.seq < 1 || ref.seq > static_cast<std::int64_t>(rec.revisions.size()))
        raise(Errc::UnknownRevision, ref.format());
    Revision& rev = rec.revisions[static_cast<std::size_t>(ref.seq - 1)];
    if (rev.embedding) raise(Errc::InvalidOption, "embedding already set on " + ref.format());
    rev.embedding = std::move(embedding);
    ++mutations_;
}

Edge Graph::add_edge(const RevisionRef& source, EdgeType type, const RevisionRef& target,
                     Metadata metadata) {
    std::lock_guard wl(write_mx_);
    std::unique_lock sl(state_mx_);
    const Revision& src = revision_internal(source);
    const Revision& dst = revision_internal(target);
    if (src.ref() == dst.ref()) raise(Errc::InvalidOption, "edge source equals target");
    if (type == EdgeType::Supersedes) {
        if (!(src.item == dst.item))
            raise(Errc::IllegalSupersedes, "SUPERSEDES must stay within one item");
        if (src.seq <= dst.seq)
            raise(Errc::IllegalSupersedes, "SUPERSEDES source seq must exceed target seq");
    }

    Edge edge;
    edge.source = src.ref();
    edge.edge_type = type;
    edge.target = dst.ref();
    edge.metadata = std::move(metadata);
    edge.created_at = stamp(std::nullopt);

    std::size_t idx = edges_.size();
    edges_.push_back(edge);
    edges_out_[ref_key(edge.source)].push_back(idx);
    edges_in_[ref_key(edge.target)].push_back(idx);
    ++mutations_;
    push_event(EventKind::EdgeCreated, edge.source, edge, edge.created_at);
    return edge;
}

std::vector<Edge> Graph::edges() const {
    std::shared_lock sl(state_mx_);
    return edges_;
}

std::vector<Edge> Graph::edges_from(const RevisionRef& ref) const {
    std::shared_lock sl(state_mx_);
    std::vector<Edge> out;
    auto it = edges_out_.find(ref_key(ref));
    if (it == edges_out_.end()) return out;
    out.reserve(it->second.size());
    for (std::size_t idx : it->second) out.push_back(edges_[idx]);
    return out;
}

std::vector<Edge> Graph::edges_to(const RevisionRef& ref) const {
    std::shared_lock sl(state_mx_);
    std::vector<Edge> out;
    auto it = edges_in_.find(ref_key(ref));
    if (it == edges_in_.end()) return out;
    out.reserve(it->second.size());
    for (std::size_t idx : it->second) out.push_back(edges_[idx]);
    return out;
}

TagHistoryEntry Graph::bind_tag_internal(const Kref& item, const std::string& tag,
                                         std::int64_t seq, Timestamp at) {
    ItemRec& rec = item_rec_mut(item);
    if (seq < 1 || seq > static_cast<std::int64_t>(rec.revisions.size()))
        raise(Errc::UnknownRevision, item.with_pin(seq).format());

    auto& history = tags_[{key(item), tag}];
    if (!history.empty() && history.back().open()) {
        if (history.back().revision_seq == seq) return history.back(); // idempotent re-bind
        history.back().removed_at = at;
        open_tag_count_[ref_key({rec.item.kref_base, history.back().revision_seq})]--;
    }
    TagHistoryEntry entry;
    entry.item = rec.item.kref_base;
    entry.tag = tag;
    entry.revision_seq = seq;
    entry.assigned_at = at;
    history.push_back(entry);
    open_tag_count_[ref_key({rec.item.kref_base, seq})]++;
    ++mutations_;
    return entry;
}

TagHistoryEntry Graph::bind_tag(const Kref& item, const std::string& tag, std::int64_t seq,
                                std::optional<Timestamp> at) {
    std::lock_guard wl(write_mx_);
    std::unique_lock sl(state_mx_);
    return bind_tag_internal(item, tag, seq, stamp(at));
}

void Graph::remove_tag(const Kref& item, const std::string& tag, std::optional<Timestamp> at) {
    std::lock_guard wl(write_mx_);
    std::unique_lock sl(state_mx_);
    item_rec(item); // UnknownItem check
    auto it = tags_.find({key(item), tag});
    if (it == tags_.end() || it->second.empty() || !it->second.back().open())
        raise(Errc::NoSuchBinding, key(item) + " tag \"" + tag + "\"");
    TagHistoryEntry& entry = it->second.back();
    entry.removed_at = stamp(at);
    open_tag_count_[ref_key({entry.item, entry.revision_seq})]--;
    ++mutations_;
}

std::optional<TagHistoryEntry> Graph::open_binding(const Kref& item, const std::string& tag,
                                                   std::optional<Timestamp> at) const {
    std::shared_lock sl(state_mx_);
    auto it = tags_.find({key(item), tag});
    if (it == tags_.end()) return std::nullopt;
    if (!at) {
        if (!it->second.empty() && it->second.back().open()) return it->second.back();
        return std::nullopt;
    }
    // Walk newest-to-oldest for the binding covering `at`.
    for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit)
        if (rit->open_at(*at)) return *rit;
    return std::nullopt;
}

std::vector<TagHistoryEntry> Graph::open_bindings(std::optional<Timestamp> at) const {
    std::shared_lock sl(state_mx_);
    std::vector<TagHistoryEntry> out;
    for (const auto& [_, history] : tags_) {
        if (!at) {
            if (!history.empty() && history.back().open()) out.push_back(history.back());
            continue;
        }
        for (auto rit = history.rbegin(); rit != history.rend(); ++rit) {
            if (rit->open_at(*at)) {
                out.push_back(*rit);
                break;
            }
        }
    }
    return out;
}

std::vector<TagHistoryEntry> Graph::tag_history(const Kref& item) const {
    std::shared_lock sl(state_mx_);
    std::vector<TagHistoryEntry> out;
    std::string k = key(item);
    for (const auto& [pair, history] : tags_) {
        if (pair.first != k) continue;
        out.insert(out.end(), history.begin(), history.end());
    }
    return out;
}

bool Graph::revision_tag_bound(const RevisionRef& ref, std::optional<Timestamp> at) const {
    if (!at) {
        std::shared_lock sl(state_mx_);
        auto it = open_tag_count_.find(ref_key(ref));
        return it != open_tag_count_.end() && it->second > 0;
    }
    for (const auto& entry : open_bindings(at))
        if (entry.item == ref.item && entry.revision_seq == ref.seq) return true;
    return false;
}

bool Graph::item_has_open_tag(const Kref& kref_base, const std::string& tag) const {
    return open_binding(kref_base, tag).has_value();
}

bool Graph::revision_tag_bound_key(const std::string& pinned_kref) const {
    std::shared_lock sl(state_mx_);
    auto it = open_tag_count_.find(pinned_kref);
    return it != open_tag_count_.end() && it->second > 0;
}

bool Graph::is_deprecated_key(const std::string& base_kref) const {
    std::shared_lock sl(state_mx_);
    auto it = items_.find(base_kref);
    if (it == items_.end()) raise(Errc::UnknownItem, base_kref);
    return it->second.item.deprecated;
}

std::vector<Graph::BoundRevision> Graph::bound_revisions(std::optional<Timestamp> at) const {
    std::shared_lock sl(state_mx_);
    std::vector<BoundRevision> out;
    for (const auto& [key_pair, history] : tags_) {
        const TagHistoryEntry* entry = nullptr;
        if (!at) {
            if (!history.empty() && history.back().open()) entry = &history.back();
        } else {
            for (auto rit = history.rbegin(); rit != history.rend(); ++rit) {
                if (rit->open_at(*at)) {
                    entry = &*rit;
                    break;
                }
            }
        }
        if (!entry) continue;
        auto it = items_.find(key_pair.first);
        if (it == items_.end()) continue;
        const ItemRec& rec = it->second;
        if (entry->revision_seq < 1 ||
            entry->revision_seq > static_cast<std::int64_t>(rec.revisions.size()))
            continue;
        BoundRevision bound;
        bound.binding = *entry;
        bound.revision = rec.revisions[static_cast<std::size_t>(entry->revision_seq - 1)];
        bound.item_deprecated = rec.item.deprecated;
        out.push_back(std::move(bound));
    }
    return out;
}

Revision Graph::resolve(const Kref& k, std::optional<Timestamp> at,
                        bool include_deprecated) const {
    std::shared_lock sl(state_mx_);
    const ItemRec& rec = item_rec(k);
    if (rec.item.deprecated && !include_deprecated)
        raise(Errc::DeprecatedExcluded, key(k));
    if (k.revision_pin) {
        std::int64_t seq = *k.revision_pin;
        if (seq < 1 || seq > static_cast<std::int64_t>(rec.revisions.size()))
            raise(Errc::NoRevision, k.format());
        return rec.revisions[static_cast<std::size_t>(seq - 1)];
    }
    std::int64_t seq = 0;
    if (auto it = tags_.find({key(k), kLatestTag}); it != tags_.end()) {
        if (!at) {
            if (!it->second.empty() && it->second.back().open())
                seq = it->second.back().revision_seq;
        } else {
            for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit) {
                if (rit->open_at(*at)) {
                    seq = rit->revision_seq;
                    break;
                }
            }
        }
    }
    if (seq == 0) raise(Errc::NoRevision, key(k) + " has no \"latest\" binding");
    return rec.revisions[static_cast<std::size_t>(seq - 1)];
}

ArtifactPointer Graph::attach_artifact(const RevisionRef& ref, const std::string& name,
                                       const std::string& location,
                                       std::optional<std::string> media_hint) {
    std::lock_guard wl(write_mx_);
    std::unique_lock sl(state_mx_);
    revision_internal(ref); // existence check
    if (!is_valid_token(name)) raise(Errc::InvalidOption, "bad artifact name token");
    ArtifactPointer ap;
    ap.item = ref.item;
    ap.revision_seq = ref.seq;
    ap.name = name;
    ap.location = location;
    ap.media_hint = std::move(media_hint);
    artifacts_[ref_key(ref)].push_back(ap);
    ++mutations_;
    return ap;
}

std::vector<ArtifactPointer> Graph::artifacts(const RevisionRef& ref) const {
    std::shared_lock sl(state_mx_);
    auto it = artifacts_.find(ref_key(ref));
    return it == artifacts_.end() ? std::vector<ArtifactPointer>{} : it->second;
}

std::vector<ArtifactPointer> Graph::all_artifacts() const {
    std::shared_lock sl(state_mx_);
    std::vector<ArtifactPointer> out;
    for (const auto& [_, list] : artifacts_) out.insert(out.end(), list.begin(), list.end());
    return out;
}

std::vector<Event> Graph::read_events(std::optional<std::int64_t> from_cursor,
                                      std::int64_t limit) const {
    if (limit < 1) raise(Errc::InvalidOption, "limit must be >= 1");
    std::shared_lock sl(state_mx_);
    std::vector<Event> out;
    std::int64_t start = from_cursor.value_or(0); // absent cursor: from the beginning
    for (const Event& ev : events_) {
        if (ev.seq <= start) continue;
        out.push_back(ev);
        if (static_cast<std::int64_t>(out.size()) >= limit) break;
    }
    return out;
}

std::int64_t Graph::last_event_seq() const {
    std::shared_lock sl(state_mx_);
    return static_cast<std::int64_t>(events_.size());
}

std::unique_lock<std::recursive_mutex> Graph::write_lock() {
    return std::unique_lock<std::recursive_mutex>(write_mx_);
}

std::uint64_t Graph::mutation_count() const {
    std::shared_lock sl(state_mx_);
    return mutations_;
}

} // namespace cogmem
