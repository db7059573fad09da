// Snapshot file layout: magic "KMHO1", u32 format version, then
// length-prefixed sections (items, revisions, edges, tag history, events,
// artifacts, counters), each trailed by a CRC32 of its payload. All
// integers little-endian; assumes a little-endian host.

#include "cogmem/store.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

namespace cogmem {

namespace {

constexpr char kMagic[5] = {'K', 'M', 'H', 'O', '1'};
constexpr std::uint32_t kVersion = 1;

enum SectionId : std::uint32_t {
    kItems = 1,
    kRevisions = 2,
    kEdges = 3,
    kTags = 4,
    kEvents = 5,
    kArtifacts = 6,
    kCounters = 7,
};

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    void i64(std::int64_t v) { raw(&v, sizeof v); }
    void f32(float v) { raw(&v, sizeof v); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.append(s);
    }
    void opt_str(const std::optional<std::string>& s) {
        u8(s ? 1 : 0);
        if (s) str(*s);
    }
    void opt_i64(const std::optional<std::int64_t>& v) {
        u8(v ? 1 : 0);
        if (v) i64(*v);
    }
    void metadata(const Metadata& m) {
        u32(static_cast<std::uint32_t>(m.size()));
        for (const auto& [k, v] : m) {
            str(k);
            str(v);
        }
    }

    std::string take() { return std::move(buf_); }

private:
    void raw(const void* p, std::size_t n) {
        buf_.append(static_cast<const char*>(p), n);
    }
    std::string buf_;
};

class Reader {
public:
    Reader(const char* data, std::size_t size) : data_(data), size_(size) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(byte()); }
    std::uint32_t u32() { return fixed<std::uint32_t>(); }
    std::uint64_t u64() { return fixed<std::uint64_t>(); }
    std::int64_t i64() { return fixed<std::int64_t>(); }
    float f32() { return fixed<float>(); }
    std::string str() {
        std::uint32_t n = u32();
        need(n);
        std::string out(data_ + pos_, n);
        pos_ += n;
        return out;
    }
    std::optional<std::string> opt_str() {
        if (u8() == 0) return std::nullopt;
        return str();
    }
    std::optional<std::int64_t> opt_i64() {
        if (u8() == 0) return std::nullopt;
        return i64();
    }
    Metadata metadata() {
        Metadata m;
        std::uint32_t n = u32();
        for (std::uint32_t i = 0; i < n; ++i) {
            std::string k = str();
            m[k] = str();
        }
        return m;
    }
    bool at_end() const { return pos_ == size_; }

private:
    char byte() {
        need(1);
        return data_[pos_++];
    }
    template <typename T>
    T fixed() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, data_ + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    void need(std::size_t n) {
        if (pos_ + n > size_) raise(Errc::CorruptSnapshot, "truncated snapshot");
    }

    const char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

std::uint32_t checksum(const std::string& payload) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(payload.data()),
                static_cast<uInt>(payload.size())));
}

void write_ref(Writer& w, const RevisionRef& ref) {
    w.str(ref.item.format());
    w.i64(ref.seq);
}

RevisionRef read_ref(Reader& r) {
    std::string base = r.str();
    RevisionRef ref;
    ref.item = parse_kref(base);
    ref.seq = r.i64();
    return ref;
}

void write_atom(Writer& w, const BeliefAtom& a) {
    w.str(a.subject.format());
    w.u8(static_cast<std::uint8_t>(a.predicate));
    w.str(a.value);
}

BeliefAtom read_atom(Reader& r) {
    BeliefAtom a;
    a.subject = parse_kref(r.str());
    a.predicate = static_cast<Predicate>(r.u8());
    a.value = r.str();
    return a;
}

void write_edge(Writer& w, const Edge& e) {
    write_ref(w, e.source);
    w.u8(static_cast<std::uint8_t>(e.edge_type));
    write_ref(w, e.target);
    w.metadata(e.metadata);
    w.i64(e.created_at.ms);
}

Edge read_edge(Reader& r) {
    Edge e;
    e.source = read_ref(r);
    e.edge_type = static_cast<EdgeType>(r.u8());
    e.target = read_ref(r);
    e.metadata = r.metadata();
    e.created_at = {r.i64()};
    return e;
}

} // namespace

struct SnapshotCodec {
    static std::string encode(const Graph& g) {
        std::shared_lock sl(g.state_mx_);
        std::string out(kMagic, sizeof kMagic);
        {
            std::uint32_t v = kVersion;
            out.append(reinterpret_cast<const char*>(&v), sizeof v);
        }

        auto emit = [&out](std::uint32_t id, Writer& w) {
            std::string payload = w.take();
            std::uint64_t len = payload.size();
            std::uint32_t crc = checksum(payload);
            out.append(reinterpret_cast<const char*>(&id), sizeof id);
            out.append(reinterpret_cast<const char*>(&len), sizeof len);
            out.append(payload);
            out.append(reinterpret_cast<const char*>(&crc), sizeof crc);
        };

        Writer items;
        items.u64(g.items_.size());
        for (const auto& [_, rec] : g.items_) {
            items.str(rec.item.kref_base.format());
            items.u8(rec.item.deprecated ? 1 : 0);
            items.i64(rec.item.created_at.ms);
            items.metadata(rec.item.metadata);
        }
        emit(kItems, items);

        Writer revs;
        std::uint64_t rev_count = 0;
        for (const auto& [_, rec] : g.items_) rev_count += rec.revisions.size();
        revs.u64(rev_count);
        for (const auto& [_, rec] : g.items_) {
            for (const Revision& rev : rec.revisions) {
                revs.str(rev.item.format());
                revs.i64(rev.seq);
                revs.u32(static_cast<std::uint32_t>(rev.content.size()));
                for (const BeliefAtom& a : rev.content) write_atom(revs, a);
                revs.str(rev.summary);
                revs.metadata(rev.metadata);
                revs.str(rev.search_text);
                revs.u8(rev.embedding ? 1 : 0);
                if (rev.embedding) {
                    revs.u32(static_cast<std::uint32_t>(rev.embedding->size()));
                    for (float f : *rev.embedding) revs.f32(f);
                }
                revs.opt_str(rev.embedding_text_override);
                revs.i64(rev.created_at.ms);
                revs.str(rev.author);
            }
        }
        emit(kRevisions, revs);

        Writer edges;
        edges.u64(g.edges_.size());
        for (const Edge& e : g.edges_) write_edge(edges, e);
        emit(kEdges, edges);

        Writer tags;
        std::uint64_t tag_count = 0;
        for (const auto& [_, history] : g.tags_) tag_count += history.size();
        tags.u64(tag_count);
        for (const auto& [_, history] : g.tags_) {
            for (const TagHistoryEntry& e : history) {
                tags.str(e.item.format());
                tags.str(e.tag);
                tags.i64(e.revision_seq);
                tags.i64(e.assigned_at.ms);
                tags.u8(e.removed_at ? 1 : 0);
                if (e.removed_at) tags.i64(e.removed_at->ms);
            }
        }
        emit(kTags, tags);

        Writer events;
        events.u64(g.events_.size());
        for (const Event& ev : g.events_) {
            events.i64(ev.seq);
            events.u8(static_cast<std::uint8_t>(ev.kind));
            write_ref(events, ev.subject);
            events.u8(ev.edge ? 1 : 0);
            if (ev.edge) write_edge(events, *ev.edge);
            events.i64(ev.at.ms);
        }
        emit(kEvents, events);

        Writer artifacts;
        std::uint64_t art_count = 0;
        for (const auto& [_, list] : g.artifacts_) art_count += list.size();
        artifacts.u64(art_count);
        for (const auto& [_, list] : g.artifacts_) {
            for (const ArtifactPointer& ap : list) {
                artifacts.str(ap.item.format());
                artifacts.i64(ap.revision_seq);
                artifacts.str(ap.name);
                artifacts.str(ap.location);
                artifacts.opt_str(ap.media_hint);
            }
        }
        emit(kArtifacts, artifacts);

        Writer counters;
        counters.u64(g.mutations_);
        emit(kCounters, counters);
        return out;
    }

    static Graph decode(const std::string& bytes, std::shared_ptr<Clock> clock) {
        if (bytes.size() < sizeof kMagic + sizeof(std::uint32_t) ||
            std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
            raise(Errc::CorruptSnapshot, "bad magic");
        std::uint32_t version;
        std::memcpy(&version, bytes.data() + sizeof kMagic, sizeof version);
        if (version != kVersion) raise(Errc::CorruptSnapshot, "unsupported format version");

        Graph g(std::move(clock));
        std::size_t pos = sizeof kMagic + sizeof version;
        while (pos < bytes.size()) {
            if (pos + sizeof(std::uint32_t) + sizeof(std::uint64_t) > bytes.size())
                raise(Errc::CorruptSnapshot, "truncated section header");
            std::uint32_t id;
            std::uint64_t len;
            std::memcpy(&id, bytes.data() + pos, sizeof id);
            pos += sizeof id;
            std::memcpy(&len, bytes.data() + pos, sizeof len);
            pos += sizeof len;
            if (pos + len + sizeof(std::uint32_t) > bytes.size())
                raise(Errc::CorruptSnapshot, "truncated section payload");
            std::string payload(bytes.data() + pos, len);
            pos += len;
            std::uint32_t crc;
            std::memcpy(&crc, bytes.data() + pos, sizeof crc);
            pos += sizeof crc;
            if (crc != checksum(payload)) raise(Errc::CorruptSnapshot, "checksum mismatch");

            Reader r(payload.data(), payload.size());
            switch (id) {
                case kItems: {
                    std::uint64_t n = r.u64();
                    for (std::uint64_t i = 0; i < n; ++i) {
                        Item item;
                        item.kref_base = parse_kref(r.str());
                        item.kind = item.kref_base.kind;
                        item.deprecated = r.u8() != 0;
                        item.created_at = {r.i64()};
                        item.metadata = r.metadata();
                        g.items_[Graph::key(item.kref_base)].item = item;
                    }
                    break;
                }
                case kRevisions: {
                    std::uint64_t n = r.u64();
                    for (std::uint64_t i = 0; i < n; ++i) {
                        Revision rev;
                        rev.item = parse_kref(r.str());
                        rev.seq = r.i64();
                        std::uint32_t atoms = r.u32();
                        for (std::uint32_t a = 0; a < atoms; ++a)
                            rev.content.push_back(read_atom(r));
                        rev.summary = r.str();
                        rev.metadata = r.metadata();
                        rev.search_text = r.str();
                        if (r.u8()) {
                            std::uint32_t dim = r.u32();
                            std::vector<float> emb(dim);
                            for (std::uint32_t d = 0; d < dim; ++d) emb[d] = r.f32();
                            rev.embedding = std::move(emb);
                        }
                        rev.embedding_text_override = r.opt_str();
                        rev.created_at = {r.i64()};
                        rev.author = r.str();
                        auto it = g.items_.find(Graph::key(rev.item));
                        if (it == g.items_.end())
                            raise(Errc::CorruptSnapshot, "revision for unknown item");
                        it->second.revisions.push_back(std::move(rev));
                    }
                    break;
                }
                case kEdges: {
                    std::uint64_t n = r.u64();
                    for (std::uint64_t i = 0; i < n; ++i) {
                        Edge e = read_edge(r);
                        std::size_t idx = g.edges_.size();
                        g.edges_.push_back(e);
                        g.edges_out_[Graph::ref_key(e.source)].push_back(idx);
                        g.edges_in_[Graph::ref_key(e.target)].push_back(idx);
                    }
                    break;
                }
                case kTags: {
                    std::uint64_t n = r.u64();
                    for (std::uint64_t i = 0; i < n; ++i) {
                        TagHistoryEntry e;
                        e.item = parse_kref(r.str());
                        e.tag = r.str();
                        e.revision_seq = r.i64();
                        e.assigned_at = {r.i64()};
                        if (r.u8()) e.removed_at = Timestamp{r.i64()};
                        if (e.open())
                            g.open_tag_count_[Graph::ref_key({e.item, e.revision_seq})]++;
                        g.tags_[{Graph::key(e.item), e.tag}].push_back(std::move(e));
                    }
                    break;
                }
                case kEvents: {
                    std::uint64_t n = r.u64();
                    for (std::uint64_t i = 0; i < n; ++i) {
                        Event ev;
                        ev.seq = r.i64();
                        ev.kind = static_cast<EventKind>(r.u8());
                        ev.subject = read_ref(r);
                        if (r.u8()) ev.edge = read_edge(r);
                        ev.at = {r.i64()};
                        g.events_.push_back(std::move(ev));
                    }
                    break;
                }
                case kArtifacts: {
                    std::uint64_t n = r.u64();
                    for (std::uint64_t i = 0; i < n; ++i) {
                        ArtifactPointer ap;
                        ap.item = parse_kref(r.str());
                        ap.revision_seq = r.i64();
                        ap.name = r.str();
                        ap.location = r.str();
                        ap.media_hint = r.opt_str();
                        g.artifacts_[Graph::ref_key({ap.item, ap.revision_seq})]
                            .push_back(std::move(ap));
                    }
                    break;
                }
                case kCounters: {
                    g.mutations_ = r.u64();
                    break;
                }
                default:
                    raise(Errc::CorruptSnapshot, "unknown section id");
            }
            if (!r.at_end()) raise(Errc::CorruptSnapshot, "trailing bytes in section");
        }
        return g;
    }
};

std::string Graph::snapshot_bytes() const { return SnapshotCodec::encode(*this); }

void Graph::save_snapshot(const std::string& path) const {
    std::string bytes = snapshot_bytes();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::IoError, "cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) raise(Errc::IoError, "failed writing " + path);
}

Graph Graph::load_snapshot(const std::string& path, std::shared_ptr<Clock> clock) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::IoError, "cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return SnapshotCodec::decode(bytes, std::move(clock));
}

Graph Graph::from_snapshot_bytes(const std::string& bytes, std::shared_ptr<Clock> clock) {
    return SnapshotCodec::decode(bytes, std::move(clock));
}

} // namespace cogmem
