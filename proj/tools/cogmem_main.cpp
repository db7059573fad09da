// cogmem: command-line frontend for the graph-native memory engine.
//
// The graph lives in a single snapshot file (--graph). Mutating commands
// take an advisory file lock, apply exactly one module operation
// sequence, flush pending embeddings and save the snapshot back.
//
// Exit codes: 0 success, 2 validation error, 3 not found,
// 4 guards tripped with warnings.

#include "cogmem/agm_suite.hpp"
#include "cogmem/belief.hpp"
#include "cogmem/dream.hpp"
#include "cogmem/engine.hpp"
#include "cogmem/export.hpp"
#include "cogmem/retrieval.hpp"
#include "cogmem/session.hpp"
#include "cogmem/traversal.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <sys/file.h>
#include <sys/stat.h>
#include <fcntl.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace cogmem;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNotFound = 3;
constexpr int kExitGuardWarnings = 4;

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::UnknownItem:
        case Errc::UnknownRevision:
        case Errc::NoRevision:
        case Errc::NoSuchBinding:
        case Errc::DeprecatedExcluded:
        case Errc::NoCursor:
            return kExitNotFound;
        default:
            return kExitValidation;
    }
}

struct CliConfig {
    std::string graph_path = "memory.graph";
    std::string project = "memory";
    std::string clock = "real";
    std::string provider = "hashed";
    std::string output = "text";
};

std::shared_ptr<Clock> make_clock(const CliConfig& cfg) {
    if (cfg.clock == "logical") return std::make_shared<LogicalClock>(1);
    return std::make_shared<SystemClock>();
}

std::shared_ptr<EmbeddingProvider> make_provider(const CliConfig& cfg);

Graph load_graph(const CliConfig& cfg) {
    if (std::filesystem::exists(cfg.graph_path))
        return Graph::load_snapshot(cfg.graph_path, make_clock(cfg));
    return Graph(make_clock(cfg));
}

// Advisory lock held for the lifetime of a mutating command.
struct GraphLock {
    int fd = -1;
    explicit GraphLock(const std::string& graph_path) {
        std::string lock_path = graph_path + ".lock";
        fd = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd >= 0) ::flock(fd, LOCK_EX);
    }
    ~GraphLock() {
        if (fd >= 0) {
            ::flock(fd, LOCK_UN);
            ::close(fd);
        }
    }
};

std::vector<std::string> split_list(const std::string& csv, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// HTTP embedding provider: POST {"text": ...} to $EMBEDDING_PROVIDER_URL
// /embed, expecting {"embedding": [...]}.
class HttpEmbeddingProvider final : public EmbeddingProvider {
public:
    HttpEmbeddingProvider(std::string base_url, int dimension)
        : base_url_(std::move(base_url)), dimension_(dimension) {}
    int dimension() const override { return dimension_; }
    std::vector<float> embed(const std::string& text) override;

private:
    std::string base_url_;
    int dimension_;
};

BeliefAtom atom_from_args(const std::string& subject, const std::string& predicate,
                          const std::string& value) {
    return {parse_kref(subject).base(), predicate_from_name(predicate), value};
}

void emit_result_line(const CliConfig& cfg, const SearchResult& r) {
    if (cfg.output == "jsonl") {
        ordered_json j;
        j["kref"] = r.target.format();
        j["score"] = r.score;
        j["match_type"] = match_type_name(r.match_type);
        j["branch"] = branch_name(r.branch);
        j["search_mode"] = search_mode_name(r.search_mode);
        std::cout << j.dump() << "\n";
    } else {
        std::cout << r.target.format() << "  score=" << r.score << "  "
                  << match_type_name(r.match_type) << "/" << branch_name(r.branch) << " ("
                  << search_mode_name(r.search_mode) << ")\n";
    }
}

void print_traversal(const CliConfig& cfg, const TraversalResult& result) {
    if (cfg.output == "jsonl") {
        for (const auto& v : result.visited) {
            ordered_json j;
            j["kref"] = v.ref.format();
            j["depth"] = v.depth;
            j["via"] = edge_type_name(v.via);
            std::cout << j.dump() << "\n";
        }
    } else {
        std::cout << "origin " << result.origin.format() << "\n";
        for (const auto& v : result.visited)
            std::cout << "  depth " << v.depth << "  " << v.ref.format() << "  via "
                      << edge_type_name(v.via) << "\n";
    }
}

} // namespace

#include "httplib.h"

namespace {

std::vector<float> HttpEmbeddingProvider::embed(const std::string& text) {
    httplib::Client client(base_url_);
    client.set_connection_timeout(5, 0);
    nlohmann::json body{{"text", text}};
    auto res = client.Post("/embed", body.dump(), "application/json");
    if (!res || res->status != 200)
        raise(Errc::NoProvider, "embedding endpoint unavailable");
    return nlohmann::json::parse(res->body).at("embedding").get<std::vector<float>>();
}

std::shared_ptr<EmbeddingProvider> make_provider(const CliConfig& cfg) {
    if (cfg.provider == "none") return nullptr;
    if (cfg.provider == "external") {
        const char* url = std::getenv("EMBEDDING_PROVIDER_URL");
        if (!url || !*url)
            raise(Errc::InvalidOption, "external provider requires EMBEDDING_PROVIDER_URL");
        const char* dim = std::getenv("EMBEDDING_PROVIDER_DIM");
        return std::make_shared<HttpEmbeddingProvider>(url, dim ? std::atoi(dim) : 256);
    }
    return std::make_shared<HashedBagProvider>(256);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph-native cognitive memory engine"};
    app.require_subcommand(1);

    CliConfig cfg;
    app.add_option("--graph", cfg.graph_path, "snapshot file path");
    app.add_option("--project", cfg.project, "default project");
    app.add_option("--clock", cfg.clock, "real|logical")
        ->check(CLI::IsMember({"real", "logical"}));
    app.add_option("--provider", cfg.provider, "hashed|external|none")
        ->check(CLI::IsMember({"hashed", "external", "none"}));
    app.add_option("--output", cfg.output, "text|jsonl")
        ->check(CLI::IsMember({"text", "jsonl"}));

    // ---- ingest ---------------------------------------------------------
    auto* ingest_cmd = app.add_subcommand("ingest", "store a complete memory unit");
    IngestRequest ingest_req;
    std::string ingest_space = "user", ingest_topics, ingest_keywords, ingest_artifact;
    std::vector<std::string> ingest_sources, ingest_tags;
    std::string ingest_session, ingest_embed_text;
    ingest_cmd->add_option("--title", ingest_req.title, "memory title")->required();
    ingest_cmd->add_option("--summary", ingest_req.summary, "memory summary")->required();
    ingest_cmd->add_option("--kind", ingest_req.kind, "memory kind (default conversation)");
    ingest_cmd->add_option("--space", ingest_space, "space path, '/'-separated");
    ingest_cmd->add_option("--topics", ingest_topics, "comma-separated topics");
    ingest_cmd->add_option("--keywords", ingest_keywords, "comma-separated keywords");
    ingest_cmd->add_option("--tag", ingest_tags, "extra tag for the new revision");
    ingest_cmd->add_option("--derived-from", ingest_sources, "source kref (repeatable)");
    ingest_cmd->add_option("--artifact", ingest_artifact, "artifact as name=location");
    ingest_cmd->add_option("--embedding-text", ingest_embed_text, "embedding text override");
    ingest_cmd->add_option("--session", ingest_session, "session id to associate");

    // ---- recall -----------------------------------------------------------
    auto* recall_cmd = app.add_subcommand("recall", "hybrid search over the memory graph");
    std::string recall_query;
    std::int64_t recall_k = 10;
    bool recall_deprecated = false;
    std::int64_t recall_at = -1;
    recall_cmd->add_option("query", recall_query, "search query")->required();
    recall_cmd->add_option("-k,--top", recall_k, "result count");
    recall_cmd->add_flag("--include-deprecated", recall_deprecated,
                         "include deprecated items");
    recall_cmd->add_option("--at", recall_at, "tag bindings as of this timestamp (ms)");

    // ---- belief operators ---------------------------------------------------
    auto* revise_cmd =
        app.add_subcommand("revise", "replace an item's current belief content");
    std::string revise_item, revise_summary, revise_topics, revise_keywords;
    revise_cmd->add_option("--item", revise_item, "item kref")->required();
    revise_cmd->add_option("--summary", revise_summary, "new summary")->required();
    revise_cmd->add_option("--topics", revise_topics, "comma-separated topics");
    revise_cmd->add_option("--keywords", revise_keywords, "comma-separated keywords");

    auto* expand_cmd = app.add_subcommand("expand", "add one belief atom without removals");
    std::string expand_item, expand_predicate = "summary", expand_value;
    expand_cmd->add_option("--item", expand_item, "item kref")->required();
    expand_cmd->add_option("--predicate", expand_predicate, "atom predicate");
    expand_cmd->add_option("--value", expand_value, "atom value")->required();

    auto* contract_cmd = app.add_subcommand("contract", "retract a belief atom");
    std::string contract_subject, contract_predicate = "summary", contract_value;
    contract_cmd->add_option("--subject", contract_subject, "atom subject kref")->required();
    contract_cmd->add_option("--predicate", contract_predicate, "atom predicate");
    contract_cmd->add_option("--value", contract_value, "atom value")->required();

    auto* rollback_cmd = app.add_subcommand("rollback", "re-bind a tag to a prior revision");
    std::string rollback_item, rollback_tag = "latest";
    std::int64_t rollback_seq = 0;
    rollback_cmd->add_option("--item", rollback_item, "item kref")->required();
    rollback_cmd->add_option("--tag", rollback_tag, "tag name");
    rollback_cmd->add_option("--seq", rollback_seq, "target revision seq")->required();

    // ---- tags / deprecation --------------------------------------------------
    auto* tag_cmd = app.add_subcommand("tag", "bind a tag to a revision");
    std::string tag_item, tag_name;
    std::int64_t tag_seq = 0;
    tag_cmd->add_option("--item", tag_item)->required();
    tag_cmd->add_option("--name", tag_name)->required();
    tag_cmd->add_option("--seq", tag_seq)->required();

    auto* untag_cmd = app.add_subcommand("untag", "remove an open tag binding");
    std::string untag_item, untag_name;
    untag_cmd->add_option("--item", untag_item)->required();
    untag_cmd->add_option("--name", untag_name)->required();

    auto* deprecate_cmd = app.add_subcommand("deprecate", "hide an item from retrieval");
    std::string deprecate_item;
    bool deprecate_restore = false;
    deprecate_cmd->add_option("--item", deprecate_item)->required();
    deprecate_cmd->add_flag("--restore", deprecate_restore, "clear the flag instead");

    // ---- resolve ---------------------------------------------------------------
    auto* resolve_cmd = app.add_subcommand("resolve", "resolve a kref to a revision");
    std::string resolve_ref;
    std::int64_t resolve_at = -1;
    bool resolve_deprecated = false;
    resolve_cmd->add_option("kref", resolve_ref)->required();
    resolve_cmd->add_option("--at", resolve_at, "resolve as of this timestamp (ms)");
    resolve_cmd->add_flag("--include-deprecated", resolve_deprecated);

    // ---- inspect ------------------------------------------------------------
    auto* inspect_cmd = app.add_subcommand("inspect", "traversal, impact and provenance");
    std::string inspect_impact, inspect_provenance, inspect_traverse, inspect_dot;
    std::vector<std::string> inspect_path;
    std::string inspect_direction = "outgoing", inspect_types;
    int inspect_depth = kDefaultTraversalDepth;
    inspect_cmd->add_option("--impact", inspect_impact, "impact analysis origin kref");
    inspect_cmd->add_option("--provenance", inspect_provenance, "provenance origin kref");
    inspect_cmd->add_option("--traverse", inspect_traverse, "traversal origin kref");
    inspect_cmd->add_option("--path", inspect_path, "two krefs for shortest path")
        ->expected(2);
    inspect_cmd->add_option("--depth", inspect_depth, "depth limit (1-20)");
    inspect_cmd->add_option("--direction", inspect_direction, "outgoing|incoming|both")
        ->check(CLI::IsMember({"outgoing", "incoming", "both"}));
    inspect_cmd->add_option("--types", inspect_types, "comma-separated edge types");
    inspect_cmd->add_option("--dot", inspect_dot, "write the result as DOT to this file");

    // ---- dream -------------------------------------------------------------
    auto* dream_cmd = app.add_subcommand("dream", "run the consolidation pipeline");
    bool dream_dry = false, dream_allow_published = false, dream_resume = false;
    double dream_ratio = 0.5;
    int dream_batch = 20;
    std::string dream_report_dir = ".", dream_assessor = "default";
    dream_cmd->add_flag("--dry-run", dream_dry, "assess only, mutate nothing");
    dream_cmd->add_option("--ratio", dream_ratio, "max deprecation ratio (0.1-0.9)");
    dream_cmd->add_option("--batch", dream_batch, "assessment batch size");
    dream_cmd->add_flag("--allow-published", dream_allow_published,
                        "allow deprecating published items");
    dream_cmd->add_flag("--resume", dream_resume, "require a prior cursor");
    dream_cmd->add_option("--report-dir", dream_report_dir, "directory for audit reports");
    dream_cmd->add_option("--assessor", dream_assessor, "default|http")
        ->check(CLI::IsMember({"default", "http"}));

    // ---- agm-check ---------------------------------------------------------
    auto* agm_cmd = app.add_subcommand("agm-check", "run the 49-scenario compliance suite");
    std::string agm_only;
    bool agm_json = false, agm_shuffle = false;
    agm_cmd->add_option("--only", agm_only, "restrict to POSTULATE/CATEGORY, e.g. K2/simple");
    agm_cmd->add_flag("--json", agm_json, "emit the JSON report");
    agm_cmd->add_flag("--shuffle", agm_shuffle, "randomize scenario order");

    // ---- export / import ------------------------------------------------------
    auto* export_cmd = app.add_subcommand("export", "export the graph");
    std::string export_dot, export_jsonl, export_events;
    export_cmd->add_option("--dot", export_dot, "DOT file");
    export_cmd->add_option("--jsonl", export_jsonl, "JSONL file");
    export_cmd->add_option("--events", export_events, "events JSONL file");

    auto* import_cmd = app.add_subcommand("import", "rebuild the graph from a JSONL export");
    std::string import_jsonl;
    import_cmd->add_option("--jsonl", import_jsonl, "JSONL file")->required();

    // ---- events ----------------------------------------------------------------
    auto* events_cmd = app.add_subcommand("events", "read the event log");
    std::int64_t events_from = -1, events_limit = 100;
    events_cmd->add_option("--from", events_from, "cursor (exclusive)");
    events_cmd->add_option("--limit", events_limit, "maximum events");

    // ---- session -----------------------------------------------------------------
    auto* session_cmd = app.add_subcommand(
        "session", "working-memory buffer operations (volatile, in-process)");
    std::string session_op, session_sid, session_role = "user", session_text;
    session_cmd->add_option("op", session_op, "append|get|clear")->required();
    session_cmd->add_option("--sid", session_sid, "session id ctx:user:YYYYMMDD:seq")
        ->required();
    session_cmd->add_option("--role", session_role);
    session_cmd->add_option("--text", session_text);

    CLI11_PARSE(app, argc, argv);

    try {
        // ---- commands that do not touch the graph -----------------------
        if (agm_cmd->parsed()) {
            agm::RunOptions opts;
            opts.shuffle = agm_shuffle;
            if (!agm_only.empty()) {
                auto slash = agm_only.find('/');
                if (slash == std::string::npos)
                    raise(Errc::InvalidOption, "--only expects POSTULATE/CATEGORY");
                opts.only = {{agm::postulate_from_name(agm_only.substr(0, slash)),
                              agm::category_from_name(agm_only.substr(slash + 1))}};
            }
            agm::ComplianceReport report = agm::run_all(opts);
            std::cout << (agm_json ? report.to_json() + "\n" : report.render_table());
            return report.all_passed() ? kExitOk : 1;
        }

        if (session_cmd->parsed()) {
            // Buffers are volatile by design; this exercises the in-process API.
            SessionStore sessions(make_clock(cfg));
            SessionId sid = SessionId::parse(session_sid);
            if (session_op == "append") {
                std::size_t n =
                    sessions.append(cfg.project, sid, {session_role, session_text, {}});
                std::cout << n << "\n";
            } else if (session_op == "get") {
                for (const SessionMessage& m : sessions.get(cfg.project, sid))
                    std::cout << m.role << ": " << m.text << "\n";
            } else if (session_op == "clear") {
                sessions.clear(cfg.project, sid);
            } else {
                raise(Errc::InvalidOption, "session op must be append|get|clear");
            }
            return kExitOk;
        }

        if (import_cmd->parsed()) {
            GraphLock lock(cfg.graph_path);
            std::ifstream in(import_jsonl);
            if (!in) raise(Errc::IoError, "cannot open " + import_jsonl);
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            Graph imported = import_graph_jsonl(text, make_clock(cfg));
            imported.save_snapshot(cfg.graph_path);
            std::cout << "imported " << imported.items().size() << " items\n";
            return kExitOk;
        }

        // ---- read-only graph commands -----------------------------------------
        if (recall_cmd->parsed()) {
            Graph g = load_graph(cfg);
            SearchIndex index(make_provider(cfg));
            index.sync(g);
            SearchOptions opts;
            opts.k = recall_k;
            opts.include_deprecated = recall_deprecated;
            if (recall_at >= 0) opts.at = Timestamp{recall_at};
            for (const SearchResult& r : index.search(g, recall_query, opts))
                emit_result_line(cfg, r);
            return kExitOk;
        }

        if (resolve_cmd->parsed()) {
            Graph g = load_graph(cfg);
            std::optional<Timestamp> at;
            if (resolve_at >= 0) at = Timestamp{resolve_at};
            Revision rev = g.resolve(parse_kref(resolve_ref), at, resolve_deprecated);
            if (cfg.output == "jsonl") {
                ordered_json j;
                j["kref"] = rev.ref().format();
                j["summary"] = rev.summary;
                j["created_at"] = rev.created_at.ms;
                j["author"] = rev.author;
                std::cout << j.dump() << "\n";
            } else {
                std::cout << rev.ref().format() << "\n" << rev.summary << "\n";
            }
            return kExitOk;
        }

        if (inspect_cmd->parsed()) {
            Graph g = load_graph(cfg);
            auto pin = [&g](const std::string& text) {
                Kref k = parse_kref(text);
                std::int64_t seq =
                    k.revision_pin ? *k.revision_pin : g.resolve(k, std::nullopt, true).seq;
                return RevisionRef{k.base(), seq};
            };
            TraversalResult result;
            if (!inspect_impact.empty()) {
                result = analyze_impact(g, pin(inspect_impact), inspect_depth);
            } else if (!inspect_provenance.empty()) {
                result = provenance_summary(g, pin(inspect_provenance), inspect_depth);
            } else if (!inspect_traverse.empty()) {
                Direction dir = inspect_direction == "incoming" ? Direction::Incoming
                                : inspect_direction == "both"   ? Direction::Both
                                                                : Direction::Outgoing;
                std::set<EdgeType> types;
                for (const std::string& t : split_list(inspect_types))
                    types.insert(edge_type_from_name(t));
                result = traverse(g, pin(inspect_traverse), dir, types, inspect_depth);
            } else if (inspect_path.size() == 2) {
                auto path = shortest_path(g, pin(inspect_path[0]), pin(inspect_path[1]));
                if (!path) {
                    std::cout << "no path\n";
                    return kExitNotFound;
                }
                for (const PathHop& hop : *path)
                    std::cout << edge_type_name(hop.via) << " -> " << hop.ref.format()
                              << "\n";
                return kExitOk;
            } else {
                raise(Errc::InvalidOption,
                      "inspect needs one of --impact, --provenance, --traverse, --path");
            }
            print_traversal(cfg, result);
            if (!inspect_dot.empty()) {
                std::ofstream out(inspect_dot);
                out << to_dot(g, result);
            }
            return kExitOk;
        }

        if (events_cmd->parsed()) {
            Graph g = load_graph(cfg);
            std::optional<std::int64_t> from;
            if (events_from >= 0) from = events_from;
            for (const Event& ev : g.read_events(from, events_limit)) {
                ordered_json j;
                j["seq"] = ev.seq;
                j["kind"] = event_kind_name(ev.kind);
                j["subject"] = ev.subject.format();
                j["at"] = ev.at.ms;
                std::cout << j.dump() << "\n";
            }
            return kExitOk;
        }

        if (export_cmd->parsed()) {
            Graph g = load_graph(cfg);
            if (!export_dot.empty()) {
                std::ofstream out(export_dot);
                out << export_graph_dot(g);
            }
            if (!export_jsonl.empty()) {
                std::ofstream out(export_jsonl);
                out << export_graph_jsonl(g);
            }
            if (!export_events.empty()) {
                std::ofstream out(export_events);
                out << export_events_jsonl(g);
            }
            if (export_dot.empty() && export_jsonl.empty() && export_events.empty())
                raise(Errc::InvalidOption, "export needs --dot, --jsonl or --events");
            return kExitOk;
        }

        // ---- mutating commands ------------------------------------------
        GraphLock lock(cfg.graph_path);
        Graph g = load_graph(cfg);
        std::shared_ptr<EmbeddingProvider> provider = make_provider(cfg);
        auto finish = [&](int code) {
            if (provider) flush_embeddings(g, *provider);
            g.save_snapshot(cfg.graph_path);
            return code;
        };

        if (ingest_cmd->parsed()) {
            ingest_req.project = cfg.project;
            ingest_req.space = split_list(ingest_space, '/');
            if (ingest_req.space.empty()) ingest_req.space = {"user"};
            ingest_req.topics = split_list(ingest_topics);
            ingest_req.keywords = split_list(ingest_keywords);
            ingest_req.tags = ingest_tags;
            for (const std::string& s : ingest_sources)
                ingest_req.derived_from.push_back(parse_kref(s));
            if (!ingest_artifact.empty()) {
                auto eq = ingest_artifact.find('=');
                if (eq == std::string::npos)
                    raise(Errc::InvalidOption, "--artifact expects name=location");
                ingest_req.artifact = {
                    {ingest_artifact.substr(0, eq), ingest_artifact.substr(eq + 1)}};
            }
            if (!ingest_embed_text.empty()) ingest_req.embedding_text = ingest_embed_text;
            if (!ingest_session.empty()) ingest_req.session = ingest_session;
            IngestResult result = ingest(g, ingest_req);
            std::cout << result.kref.format() << "\n";
            return finish(kExitOk);
        }

        if (revise_cmd->parsed()) {
            Kref item = parse_kref(revise_item).base();
            Metadata md;
            if (!revise_topics.empty()) md["topics"] = revise_topics;
            if (!revise_keywords.empty()) md["keywords"] = revise_keywords;
            AtomSet atoms = derive_atoms(item, revise_summary, split_list(revise_topics),
                                         split_list(revise_keywords));
            Revision rev = revise(g, item, std::move(atoms), revise_summary, std::move(md));
            std::cout << rev.ref().format() << "\n";
            return finish(kExitOk);
        }

        if (expand_cmd->parsed()) {
            Kref item = parse_kref(expand_item).base();
            Revision rev =
                expand(g, item, atom_from_args(expand_item, expand_predicate, expand_value));
            std::cout << rev.ref().format() << "\n";
            return finish(kExitOk);
        }

        if (contract_cmd->parsed()) {
            BeliefAtom atom =
                atom_from_args(contract_subject, contract_predicate, contract_value);
            ContractionOutcome outcome = contract(g, atom);
            std::cout << "removed_tags=" << outcome.removed_tags.size()
                      << " deprecated_items=" << outcome.deprecated_items.size() << "\n";
            return finish(kExitOk);
        }

        if (rollback_cmd->parsed()) {
            Kref item = parse_kref(rollback_item).base();
            TagHistoryEntry entry = rollback(g, item, rollback_tag, rollback_seq);
            std::cout << entry.item.with_pin(entry.revision_seq).format() << " tag "
                      << entry.tag << "\n";
            return finish(kExitOk);
        }

        if (tag_cmd->parsed()) {
            g.bind_tag(parse_kref(tag_item).base(), tag_name, tag_seq);
            return finish(kExitOk);
        }
        if (untag_cmd->parsed()) {
            g.remove_tag(parse_kref(untag_item).base(), untag_name);
            return finish(kExitOk);
        }
        if (deprecate_cmd->parsed()) {
            g.set_deprecated(parse_kref(deprecate_item).base(), !deprecate_restore);
            return finish(kExitOk);
        }

        if (dream_cmd->parsed()) {
            dream::DreamOptions opts;
            opts.dry_run = dream_dry;
            opts.max_deprecation_ratio = dream_ratio;
            opts.batch_size = dream_batch;
            opts.allow_published_deprecation = dream_allow_published;
            opts.project = cfg.project;
            opts.report_dir = dream_report_dir;

            std::unique_ptr<dream::Assessor> assessor;
            if (dream_assessor == "http") {
                assessor = dream::http_assessor_from_env();
                if (!assessor)
                    raise(Errc::InvalidOption, "http assessor requires DREAM_ASSESSOR_URL");
            } else {
                assessor = dream::default_assessor();
            }

            dream::DreamReport report = dream_resume ? dream::resume(g, *assessor, opts)
                                                     : dream::run(g, *assessor, opts);
            if (opts.dry_run) {
                std::cout << report.markdown;
            } else if (report.committed) {
                std::cout << report.dream_state_kref << "\n";
                if (!report.report_path.empty())
                    std::cout << "report: " << report.report_path << "\n";
            } else {
                std::cout << "no new events (cursor " << report.new_cursor << ")\n";
            }
            int code = kExitOk;
            if (report.circuit_breaker_tripped || !report.failed.empty())
                code = kExitGuardWarnings;
            if (opts.dry_run) return code; // nothing to persist
            return finish(code);
        }

        raise(Errc::InvalidOption, "no command given");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
