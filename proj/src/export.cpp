#include "cogmem/export.hpp"

#include "json.hpp"

#include <cctype>
#include <limits>
#include <sstream>

namespace cogmem {

using nlohmann::ordered_json;

namespace {

ordered_json ref_json(const RevisionRef& ref) {
    return ordered_json{{"item", ref.item.format()}, {"seq", ref.seq}};
}

RevisionRef ref_from_json(const ordered_json& j) {
    return {parse_kref(j.at("item").get<std::string>()), j.at("seq").get<std::int64_t>()};
}

ordered_json edge_json(const Edge& e) {
    ordered_json j;
    j["source"] = ref_json(e.source);
    j["type"] = edge_type_name(e.edge_type);
    j["target"] = ref_json(e.target);
    j["metadata"] = e.metadata;
    j["created_at"] = e.created_at.ms;
    return j;
}

Edge edge_from_json(const ordered_json& j) {
    Edge e;
    e.source = ref_from_json(j.at("source"));
    e.edge_type = edge_type_from_name(j.at("type").get<std::string>());
    e.target = ref_from_json(j.at("target"));
    e.metadata = j.at("metadata").get<Metadata>();
    e.created_at = {j.at("created_at").get<std::int64_t>()};
    return e;
}

ordered_json event_json(const Event& ev) {
    ordered_json j;
    j["seq"] = ev.seq;
    j["kind"] = event_kind_name(ev.kind);
    j["subject"] = ref_json(ev.subject);
    if (ev.edge) j["edge"] = edge_json(*ev.edge);
    j["at"] = ev.at.ms;
    return j;
}

} // namespace

std::string export_events_jsonl(const Graph& g) {
    std::ostringstream out;
    for (const Event& ev :
         g.read_events(std::nullopt, std::numeric_limits<std::int64_t>::max())) {
        ordered_json j;
        j["seq"] = ev.seq;
        j["kind"] = event_kind_name(ev.kind);
        j["subject"] = ev.subject.format();
        j["at"] = ev.at.ms;
        out << j.dump() << "\n";
    }
    return out.str();
}

struct JsonlCodec {
    static std::string encode(const Graph& g) {
        std::ostringstream out;
        std::shared_lock sl(g.state_mx_);
        for (const auto& [_, rec] : g.items_) {
            ordered_json j;
            j["record"] = "item";
            j["kref"] = rec.item.kref_base.format();
            j["deprecated"] = rec.item.deprecated;
            j["created_at"] = rec.item.created_at.ms;
            j["metadata"] = rec.item.metadata;
            out << j.dump() << "\n";
        }
        for (const auto& [_, rec] : g.items_) {
            for (const Revision& rev : rec.revisions) {
                ordered_json j;
                j["record"] = "revision";
                j["item"] = rev.item.format();
                j["seq"] = rev.seq;
                ordered_json content = ordered_json::array();
                for (const BeliefAtom& a : rev.content) {
                    content.push_back(ordered_json{{"subject", a.subject.format()},
                                                   {"predicate", predicate_name(a.predicate)},
                                                   {"value", a.value}});
                }
                j["content"] = content;
                j["summary"] = rev.summary;
                j["metadata"] = rev.metadata;
                j["search_text"] = rev.search_text;
                if (rev.embedding)
                    j["embedding"] = *rev.embedding;
                else
                    j["embedding"] = nullptr;
                if (rev.embedding_text_override)
                    j["embedding_text"] = *rev.embedding_text_override;
                else
                    j["embedding_text"] = nullptr;
                j["created_at"] = rev.created_at.ms;
                j["author"] = rev.author;
                out << j.dump() << "\n";
            }
        }
        for (const Edge& e : g.edges_) {
            ordered_json j;
            j["record"] = "edge";
            ordered_json body = edge_json(e);
            for (auto& [k, v] : body.items()) j[k] = v;
            out << j.dump() << "\n";
        }
        for (const auto& [_, history] : g.tags_) {
            for (const TagHistoryEntry& t : history) {
                ordered_json j;
                j["record"] = "tag";
                j["item"] = t.item.format();
                j["tag"] = t.tag;
                j["seq"] = t.revision_seq;
                j["assigned_at"] = t.assigned_at.ms;
                if (t.removed_at)
                    j["removed_at"] = t.removed_at->ms;
                else
                    j["removed_at"] = nullptr;
                out << j.dump() << "\n";
            }
        }
        for (const auto& [_, list] : g.artifacts_) {
            for (const ArtifactPointer& ap : list) {
                ordered_json j;
                j["record"] = "artifact";
                j["item"] = ap.item.format();
                j["seq"] = ap.revision_seq;
                j["name"] = ap.name;
                j["location"] = ap.location;
                if (ap.media_hint)
                    j["media_hint"] = *ap.media_hint;
                else
                    j["media_hint"] = nullptr;
                out << j.dump() << "\n";
            }
        }
        for (const Event& ev : g.events_) {
            ordered_json j;
            j["record"] = "event";
            ordered_json body = event_json(ev);
            for (auto& [k, v] : body.items()) j[k] = v;
            out << j.dump() << "\n";
        }
        ordered_json counters;
        counters["record"] = "counters";
        counters["mutations"] = g.mutations_;
        out << counters.dump() << "\n";
        return out.str();
    }

    static Graph decode(const std::string& text, std::shared_ptr<Clock> clock) {
        Graph g(std::move(clock));
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            ordered_json j = ordered_json::parse(line);
            std::string record = j.at("record").get<std::string>();
            if (record == "item") {
                Item item;
                item.kref_base = parse_kref(j.at("kref").get<std::string>());
                item.kind = item.kref_base.kind;
                item.deprecated = j.at("deprecated").get<bool>();
                item.created_at = {j.at("created_at").get<std::int64_t>()};
                item.metadata = j.at("metadata").get<Metadata>();
                g.items_[Graph::key(item.kref_base)].item = item;
            } else if (record == "revision") {
                Revision rev;
                rev.item = parse_kref(j.at("item").get<std::string>());
                rev.seq = j.at("seq").get<std::int64_t>();
                for (const auto& a : j.at("content")) {
                    BeliefAtom atom;
                    atom.subject = parse_kref(a.at("subject").get<std::string>());
                    atom.predicate = predicate_from_name(a.at("predicate").get<std::string>());
                    atom.value = a.at("value").get<std::string>();
                    rev.content.push_back(std::move(atom));
                }
                rev.summary = j.at("summary").get<std::string>();
                rev.metadata = j.at("metadata").get<Metadata>();
                rev.search_text = j.at("search_text").get<std::string>();
                if (!j.at("embedding").is_null())
                    rev.embedding = j.at("embedding").get<std::vector<float>>();
                if (!j.at("embedding_text").is_null())
                    rev.embedding_text_override = j.at("embedding_text").get<std::string>();
                rev.created_at = {j.at("created_at").get<std::int64_t>()};
                rev.author = j.at("author").get<std::string>();
                auto it = g.items_.find(Graph::key(rev.item));
                if (it == g.items_.end())
                    raise(Errc::CorruptSnapshot, "revision for unknown item in JSONL");
                it->second.revisions.push_back(std::move(rev));
            } else if (record == "edge") {
                Edge e = edge_from_json(j);
                std::size_t idx = g.edges_.size();
                g.edges_.push_back(e);
                g.edges_out_[Graph::ref_key(e.source)].push_back(idx);
                g.edges_in_[Graph::ref_key(e.target)].push_back(idx);
            } else if (record == "tag") {
                TagHistoryEntry t;
                t.item = parse_kref(j.at("item").get<std::string>());
                t.tag = j.at("tag").get<std::string>();
                t.revision_seq = j.at("seq").get<std::int64_t>();
                t.assigned_at = {j.at("assigned_at").get<std::int64_t>()};
                if (!j.at("removed_at").is_null())
                    t.removed_at = Timestamp{j.at("removed_at").get<std::int64_t>()};
                if (t.open()) g.open_tag_count_[Graph::ref_key({t.item, t.revision_seq})]++;
                g.tags_[{Graph::key(t.item), t.tag}].push_back(std::move(t));
            } else if (record == "artifact") {
                ArtifactPointer ap;
                ap.item = parse_kref(j.at("item").get<std::string>());
                ap.revision_seq = j.at("seq").get<std::int64_t>();
                ap.name = j.at("name").get<std::string>();
                ap.location = j.at("location").get<std::string>();
                if (!j.at("media_hint").is_null())
                    ap.media_hint = j.at("media_hint").get<std::string>();
                g.artifacts_[Graph::ref_key({ap.item, ap.revision_seq})].push_back(
                    std::move(ap));
            } else if (record == "event") {
                Event ev;
                ev.seq = j.at("seq").get<std::int64_t>();
                std::string kind = j.at("kind").get<std::string>();
                if (kind == "revision.created")
                    ev.kind = EventKind::RevisionCreated;
                else if (kind == "edge.created")
                    ev.kind = EventKind::EdgeCreated;
                else if (kind == "revision.deprecated")
                    ev.kind = EventKind::RevisionDeprecated;
                else
                    raise(Errc::CorruptSnapshot, "unknown event kind in JSONL");
                ev.subject = ref_from_json(j.at("subject"));
                if (j.contains("edge")) ev.edge = edge_from_json(j.at("edge"));
                ev.at = {j.at("at").get<std::int64_t>()};
                g.events_.push_back(std::move(ev));
            } else if (record == "counters") {
                g.mutations_ = j.at("mutations").get<std::uint64_t>();
            } else {
                raise(Errc::CorruptSnapshot, "unknown JSONL record \"" + record + "\"");
            }
        }
        return g;
    }
};

std::string export_graph_jsonl(const Graph& g) { return JsonlCodec::encode(g); }

Graph import_graph_jsonl(const std::string& text, std::shared_ptr<Clock> clock) {
    return JsonlCodec::decode(text, std::move(clock));
}

namespace {

const char* kind_color(const std::string& kind) {
    // Fixed palette keyed by the common kinds; anything else hashes in.
    if (kind == "conversation") return "lightblue";
    if (kind == "decision") return "gold";
    if (kind == "fact") return "palegreen";
    if (kind == "reflection") return "plum";
    if (kind == "error") return "salmon";
    if (kind == "bundle") return "lightgray";
    if (kind == "state") return "white";
    static const char* extras[] = {"khaki", "lightcyan", "mistyrose", "wheat"};
    std::size_t h = std::hash<std::string>{}(kind);
    return extras[h % 4];
}

const char* edge_color(EdgeType t) {
    switch (t) {
        case EdgeType::DependsOn: return "red";
        case EdgeType::DerivedFrom: return "blue";
        case EdgeType::Supersedes: return "darkorange";
        case EdgeType::Referenced: return "gray";
        case EdgeType::Contains: return "green";
        case EdgeType::CreatedFrom: return "purple";
    }
    return "black";
}

} // namespace

std::string export_graph_dot(const Graph& g) {
    std::ostringstream out;
    out << "digraph memory {\n  rankdir=LR;\n  node [style=filled];\n";
    auto node_id = [](const RevisionRef& ref) {
        std::string id = ref.format();
        for (char& c : id)
            if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
        return id;
    };
    for (const Item& item : g.items()) {
        for (const Revision& rev : g.revisions(item.kref_base)) {
            out << "  \"" << node_id(rev.ref()) << "\" [label=\"" << item.kref_base.item_name
                << "." << item.kind << " r" << rev.seq << "\", fillcolor="
                << kind_color(item.kind) << "];\n";
        }
    }
    for (const Edge& e : g.edges()) {
        out << "  \"" << node_id(e.source) << "\" -> \"" << node_id(e.target) << "\" [label=\""
            << edge_type_name(e.edge_type) << "\", color=" << edge_color(e.edge_type)
            << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace cogmem
