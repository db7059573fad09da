#include "cogmem/dream.hpp"

#include "cogmem/embedding.hpp" // tokenize, for the rule-based assessor

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace cogmem::dream {

using nlohmann::json;

void DreamOptions::validate() const {
    if (max_deprecation_ratio < 0.1 || max_deprecation_ratio > 0.9)
        raise(Errc::InvalidOption, "max_deprecation_ratio must be in [0.1, 0.9]");
    if (batch_size < 1) raise(Errc::InvalidOption, "batch_size must be >= 1");
    if (project.empty()) raise(Errc::InvalidOption, "project must be set");
}

Kref dream_state_kref(const std::string& project) {
    return Kref::make(project, {kDreamSpace}, kDreamItem, kDreamKind);
}

std::optional<std::int64_t> load_cursor(const Graph& g, const std::string& project) {
    Kref state = dream_state_kref(project);
    if (!g.has_item(state)) return std::nullopt;
    std::int64_t seq = g.latest_seq(state);
    if (seq == 0) return std::nullopt;
    Revision rev = g.revision({state, seq});
    auto it = rev.metadata.find("cursor");
    if (it == rev.metadata.end()) return std::nullopt;
    try {
        std::size_t used = 0;
        std::int64_t cursor = std::stoll(it->second, &used);
        if (used != it->second.size() || cursor < 0)
            raise(Errc::CursorCorrupt, "cursor value \"" + it->second + "\"");
        return cursor;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        raise(Errc::CursorCorrupt, "cursor value \"" + it->second + "\"");
    }
}

std::string base64_encode(const std::string& bytes) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 2 < bytes.size()) {
        std::uint32_t chunk = (static_cast<unsigned char>(bytes[i]) << 16) |
                              (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                              static_cast<unsigned char>(bytes[i + 2]);
        out += alphabet[(chunk >> 18) & 0x3F];
        out += alphabet[(chunk >> 12) & 0x3F];
        out += alphabet[(chunk >> 6) & 0x3F];
        out += alphabet[chunk & 0x3F];
        i += 3;
    }
    if (i + 1 == bytes.size()) {
        std::uint32_t chunk = static_cast<unsigned char>(bytes[i]) << 16;
        out += alphabet[(chunk >> 18) & 0x3F];
        out += alphabet[(chunk >> 12) & 0x3F];
        out += "==";
    } else if (i + 2 == bytes.size()) {
        std::uint32_t chunk = (static_cast<unsigned char>(bytes[i]) << 16) |
                              (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out += alphabet[(chunk >> 18) & 0x3F];
        out += alphabet[(chunk >> 12) & 0x3F];
        out += alphabet[(chunk >> 6) & 0x3F];
        out += '=';
    }
    return out;
}

namespace {

struct Plan {
    struct Deprecation {
        Assessment assessment;
        bool published_override = false;
    };
    std::vector<Deprecation> deprecations;
    std::vector<Assessment> enrichments; // metadata/tags/relationships
};

std::string render_markdown(const DreamReport& report, Timestamp at) {
    std::ostringstream md;
    md << "# Dream State Report -- " << to_iso_minutes(at) << "\n";
    md << "**Events:** " << report.events_processed << " | **Assessed:** "
       << report.memories_assessed << "\n";
    md << "**Duration:** " << report.duration_ms << "ms\n\n";
    md << "## Actions Taken\n";
    md << "### Deprecated (" << report.deprecated.size() << ")\n";
    for (const auto& e : report.deprecated) md << "- " << e.kref << "\n  -- " << e.note << "\n";
    md << "### Metadata Updated (" << report.metadata_updated.size() << ")\n";
    for (const auto& e : report.metadata_updated)
        md << "- " << e.kref << "\n  -- " << e.note << "\n";
    md << "### Tags Added (" << report.tags_added.size() << ")\n";
    for (const auto& e : report.tags_added) md << "- " << e.kref << "\n  -- " << e.note << "\n";
    md << "### Relationships Created (" << report.relationships_created.size() << ")\n";
    for (const auto& e : report.relationships_created)
        md << "- " << e.source << " -> " << e.target << " (" << edge_type_name(e.type) << ")\n";
    if (!report.skipped.empty()) {
        md << "\n## Skipped (" << report.skipped.size() << ")\n";
        for (const auto& e : report.skipped) md << "- " << e.kref << " -- " << e.note << "\n";
    }
    if (!report.failed.empty()) {
        md << "\n## Failed (" << report.failed.size() << ")\n";
        for (const auto& e : report.failed) md << "- " << e.kref << " -- " << e.note << "\n";
    }
    if (report.circuit_breaker_tripped) md << "\n**Circuit breaker tripped.**\n";
    md << "\n## Cursor\n";
    md << base64_encode("{\"cursor\":\"" + std::to_string(report.new_cursor) + "\"}") << "\n";
    return md.str();
}

DreamReport run_pipeline(Graph& g, Assessor& assessor, const DreamOptions& options,
                         bool require_cursor) {
    options.validate();
    // Single-flight: one pipeline run at a time per graph. Serializing the
    // whole run keeps concurrent invocations from reading the same cursor
    // and double-applying the same events.
    auto single_flight = g.write_lock();
    auto started = std::chrono::steady_clock::now();
    auto hook = [&options](int stage) {
        if (options.stage_hook) options.stage_hook(stage);
    };

    DreamReport report;
    Kref state = dream_state_kref(options.project);

    if (require_cursor && !load_cursor(g, options.project))
        raise(Errc::NoCursor, "no prior consolidation cursor for project " + options.project);

    // Stage 1: ensure the internal space and item exist (idempotent).
    // Dry runs must not mutate anything, including this bootstrap.
    if (!options.dry_run) g.ensure_item(state);
    hook(1);

    // Stage 2: load the cursor; absent means replay from the beginning.
    // A corrupt cursor aborts here, before any mutation.
    std::optional<std::int64_t> cursor = load_cursor(g, options.project);
    report.prior_cursor = cursor.value_or(0);
    hook(2);

    // Stage 3: collect events past the cursor; group by item keeping the
    // latest revision per item.
    std::vector<Event> events =
        g.read_events(cursor, std::numeric_limits<std::int64_t>::max());
    report.events_processed = static_cast<std::int64_t>(events.size());
    std::int64_t max_consumed = cursor.value_or(0);
    std::map<std::string, RevisionRef> latest_per_item;
    for (const Event& ev : events) {
        max_consumed = std::max(max_consumed, ev.seq);
        RevisionRef subject = ev.subject;
        auto key = subject.item.format();
        auto it = latest_per_item.find(key);
        if (it == latest_per_item.end() || it->second.seq < subject.seq)
            latest_per_item[key] = subject;
    }
    hook(3);

    // Stage 4: fetch revisions, filtering to episodic kinds on
    // non-deprecated items; the internal item never assesses itself.
    std::vector<Revision> candidates;
    std::string state_key = state.format();
    for (const auto& [item_key, ref] : latest_per_item) {
        if (item_key == state_key) continue;
        auto rev = g.maybe_revision(ref);
        if (!rev) continue;
        if (g.is_deprecated(ref.item)) continue;
        const Item item = g.item(ref.item);
        if (std::find(options.episodic_kinds.begin(), options.episodic_kinds.end(),
                      item.kind) == options.episodic_kinds.end())
            continue;
        candidates.push_back(std::move(*rev));
    }
    hook(4);

    // Stage 5: attach bundle membership context via CONTAINS edges.
    std::vector<AssessmentInput> inputs;
    inputs.reserve(candidates.size());
    for (const Revision& rev : candidates) {
        AssessmentInput in;
        in.revision_ref = rev.ref();
        in.summary = rev.summary;
        in.metadata = rev.metadata;
        for (const Edge& e : g.edges_to(rev.ref())) {
            if (e.edge_type != EdgeType::Contains) continue;
            in.bundle_context.push_back(e.source.item.item_name);
        }
        inputs.push_back(std::move(in));
    }
    hook(5);

    // Stage 6: assess in batches; a failing batch is skipped, the run
    // continues.
    std::vector<Assessment> assessments;
    for (std::size_t ofs = 0; ofs < inputs.size();
         ofs += static_cast<std::size_t>(options.batch_size)) {
        std::size_t end = std::min(inputs.size(), ofs + static_cast<std::size_t>(options.batch_size));
        std::vector<AssessmentInput> batch(inputs.begin() + static_cast<std::ptrdiff_t>(ofs),
                                           inputs.begin() + static_cast<std::ptrdiff_t>(end));
        try {
            std::vector<Assessment> out = assessor.assess(batch);
            if (out.size() != batch.size())
                raise(Errc::AssessorFailure, "assessor returned " + std::to_string(out.size()) +
                                                 " assessments for " +
                                                 std::to_string(batch.size()) + " inputs");
            for (auto& a : out) assessments.push_back(std::move(a));
        } catch (const std::exception& e) {
            for (const AssessmentInput& in : batch)
                report.skipped.push_back({in.revision_ref.format(),
                                          std::string("assessor failure: ") + e.what()});
        }
    }
    report.memories_assessed = static_cast<std::int64_t>(assessments.size());
    hook(6);

    // Stage 7: plan actions under guards. Nothing mutates yet; the plan is
    // committed together with the cursor after stage 8.
    Plan plan;
    std::vector<const Assessment*> requested;
    for (const Assessment& a : assessments) {
        if (a.relevance_score < 0.0 || a.relevance_score > 1.0) {
            report.failed.push_back({a.revision_ref.format(), "relevance_score out of [0,1]"});
            continue;
        }
        if (a.should_deprecate && a.deprecation_reason.empty()) {
            report.failed.push_back(
                {a.revision_ref.format(), "deprecation recommended without a reason"});
            continue;
        }
        if (a.should_deprecate) requested.push_back(&a);
        plan.enrichments.push_back(a);
    }

    std::vector<const Assessment*> applicable;
    for (const Assessment* a : requested) {
        bool published = g.item_has_open_tag(a->revision_ref.item, kPublishedTag);
        if (published && !options.allow_published_deprecation) {
            report.skipped.push_back({a->revision_ref.format(), "published-protected"});
            continue;
        }
        applicable.push_back(a);
    }

    std::int64_t cap = static_cast<std::int64_t>(
        options.max_deprecation_ratio * static_cast<double>(report.memories_assessed));
    if (report.memories_assessed > 0 &&
        static_cast<double>(requested.size()) / static_cast<double>(report.memories_assessed) >
            options.max_deprecation_ratio)
        report.circuit_breaker_tripped = true;

    // Lowest-relevance memories are pruned first when capped.
    std::stable_sort(applicable.begin(), applicable.end(),
                     [](const Assessment* a, const Assessment* b) {
                         if (a->relevance_score != b->relevance_score)
                             return a->relevance_score < b->relevance_score;
                         return a->revision_ref < b->revision_ref;
                     });
    for (std::size_t i = 0; i < applicable.size(); ++i) {
        const Assessment* a = applicable[i];
        if (static_cast<std::int64_t>(i) >= cap) {
            report.skipped.push_back({a->revision_ref.format(), "circuit-breaker-capped"});
            continue;
        }
        bool overridden = options.allow_published_deprecation &&
                          g.item_has_open_tag(a->revision_ref.item, kPublishedTag);
        plan.deprecations.push_back({*a, overridden});
    }
    hook(7);

    // Stage 8: the cursor that a commit will persist. It must also cover
    // the events the commit itself appends, so the final value is fixed at
    // commit time; this is the pre-commit floor.
    report.new_cursor = max_consumed;
    hook(8);

    bool commit = !options.dry_run && report.events_processed > 0;
    if (commit) {
        auto wl = g.write_lock();
        for (const Plan::Deprecation& d : plan.deprecations) {
            const Assessment& a = d.assessment;
            try {
                g.set_deprecated(a.revision_ref.item, true);
                std::string note = a.deprecation_reason;
                if (d.published_override) note += " (published override)";
                report.deprecated.push_back({a.revision_ref.format(), note});
            } catch (const std::exception& e) {
                report.failed.push_back({a.revision_ref.format(), e.what()});
            }
        }
        for (const Assessment& a : plan.enrichments) {
            if (!a.metadata_updates.empty()) {
                try {
                    g.update_item_metadata(a.revision_ref.item, a.metadata_updates);
                    std::string keys;
                    for (const auto& [k, _] : a.metadata_updates) {
                        if (!keys.empty()) keys += ", ";
                        keys += k;
                    }
                    report.metadata_updated.push_back({a.revision_ref.format(), keys + " set"});
                } catch (const std::exception& e) {
                    report.failed.push_back({a.revision_ref.format(), e.what()});
                }
            }
            if (!a.suggested_tags.empty()) {
                std::string added;
                for (const std::string& tag : a.suggested_tags) {
                    try {
                        g.bind_tag(a.revision_ref.item, tag, a.revision_ref.seq);
                        if (!added.empty()) added += ", ";
                        added += tag;
                    } catch (const std::exception& e) {
                        report.failed.push_back({a.revision_ref.format(), e.what()});
                    }
                }
                if (!added.empty())
                    report.tags_added.push_back({a.revision_ref.format(), added});
            }
            for (const auto& [target, type] : a.related_memories) {
                try {
                    g.add_edge(a.revision_ref, type, target);
                    report.relationships_created.push_back(
                        {a.revision_ref.format(), target.format(), type});
                } catch (const std::exception& e) {
                    report.failed.push_back({a.revision_ref.format(), e.what()});
                }
            }
        }

        // The checkpoint revision's own event must fall under the cursor it
        // records: the next event seq is deterministic under the write lock.
        report.new_cursor = g.last_event_seq() + 1;
        report.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
        Timestamp now = g.clock().now();
        report.markdown = render_markdown(report, now);

        Metadata meta;
        meta["cursor"] = std::to_string(report.new_cursor);
        meta["timestamp"] = to_iso_millis(now);
        RevisionOptions ropts;
        ropts.author = "dream";
        Revision checkpoint = g.create_revision(state, {}, "consolidation checkpoint",
                                                std::move(meta), std::move(ropts));
        report.dream_state_kref = checkpoint.ref().format();

        std::filesystem::path dir(options.report_dir.empty() ? "." : options.report_dir);
        std::filesystem::create_directories(dir);
        std::filesystem::path path =
            dir / ("dream-" + std::to_string(report.new_cursor) + ".md");
        std::ofstream out(path);
        if (out) {
            out << report.markdown;
            out.close();
            report.report_path = path.string();
            g.attach_artifact(checkpoint.ref(), "report", report.report_path, "text/markdown");
        } else {
            report.failed.push_back({state.format(), "could not write report file"});
        }
        report.committed = true;
    } else {
        report.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
        // Proposal-only rendering for dry runs and empty work sets.
        for (const Plan::Deprecation& d : plan.deprecations) {
            std::string note = d.assessment.deprecation_reason;
            if (d.published_override) note += " (published override)";
            report.deprecated.push_back({d.assessment.revision_ref.format(), note});
        }
        for (const Assessment& a : plan.enrichments) {
            if (!a.metadata_updates.empty()) {
                std::string keys;
                for (const auto& [k, _] : a.metadata_updates) {
                    if (!keys.empty()) keys += ", ";
                    keys += k;
                }
                report.metadata_updated.push_back({a.revision_ref.format(), keys});
            }
            if (!a.suggested_tags.empty()) {
                std::string tags;
                for (const std::string& t : a.suggested_tags) {
                    if (!tags.empty()) tags += ", ";
                    tags += t;
                }
                report.tags_added.push_back({a.revision_ref.format(), tags});
            }
            for (const auto& [target, type] : a.related_memories)
                report.relationships_created.push_back(
                    {a.revision_ref.format(), target.format(), type});
        }
        report.markdown = render_markdown(report, g.clock().now());
    }
    hook(9);
    return report;
}

} // namespace

DreamReport run(Graph& g, Assessor& assessor, const DreamOptions& options) {
    return run_pipeline(g, assessor, options, /*require_cursor=*/false);
}

DreamReport resume(Graph& g, Assessor& assessor, const DreamOptions& options) {
    return run_pipeline(g, assessor, options, /*require_cursor=*/true);
}

// ---- rule-based default assessor ------------------------------------------

namespace {

std::string normalize_summary(const std::string& s) {
    std::string out;
    bool pending_space = false;
    for (char c : s) {
        unsigned char uc = static_cast<unsigned char>(c);
        if (std::isspace(uc)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(uc));
    }
    return out;
}

class RuleBasedAssessor final : public Assessor {
public:
    std::vector<Assessment> assess(const std::vector<AssessmentInput>& batch) override {
        std::vector<Assessment> out;
        out.reserve(batch.size());
        for (const AssessmentInput& in : batch) {
            Assessment a;
            a.revision_ref = in.revision_ref;

            std::set<std::string> distinct;
            for (const std::string& tok : tokenize(in.summary)) distinct.insert(tok);
            a.relevance_score =
                std::min(1.0, static_cast<double>(distinct.size()) / 32.0);

            // Duplicate rule: another batch member with the same normalized
            // summary and a higher seq supersedes this one.
            std::string norm = normalize_summary(in.summary);
            for (const AssessmentInput& other : batch) {
                if (&other == &in) continue;
                if (other.revision_ref.seq > in.revision_ref.seq &&
                    normalize_summary(other.summary) == norm) {
                    a.should_deprecate = true;
                    a.deprecation_reason =
                        "duplicate of " + other.revision_ref.format();
                    break;
                }
            }

            if (auto it = in.metadata.find("topics"); it != in.metadata.end())
                for (const std::string& tok : tokenize(it->second))
                    a.suggested_tags.push_back(tok);
            out.push_back(std::move(a));
        }
        return out;
    }
};

} // namespace

std::unique_ptr<Assessor> default_assessor() { return std::make_unique<RuleBasedAssessor>(); }

// ---- HTTP completion-endpoint adapter -----------------------------------

namespace {

json assessment_input_to_json(const AssessmentInput& in) {
    json j;
    j["revision_ref"] = in.revision_ref.format();
    j["summary"] = in.summary;
    j["metadata"] = in.metadata;
    j["bundle_context"] = in.bundle_context;
    return j;
}

Assessment assessment_from_json(const json& j) {
    Assessment a;
    Kref pinned = parse_kref(j.at("revision_ref").get<std::string>());
    if (!pinned.revision_pin) raise(Errc::AssessorFailure, "revision_ref without pin");
    a.revision_ref = {pinned.base(), *pinned.revision_pin};
    a.relevance_score = j.at("relevance_score").get<double>();
    a.should_deprecate = j.value("should_deprecate", false);
    a.deprecation_reason = j.value("deprecation_reason", std::string());
    if (j.contains("suggested_tags"))
        a.suggested_tags = j.at("suggested_tags").get<std::vector<std::string>>();
    if (j.contains("metadata_updates"))
        a.metadata_updates = j.at("metadata_updates").get<Metadata>();
    if (j.contains("related_memories")) {
        for (const json& rel : j.at("related_memories")) {
            Kref target = parse_kref(rel.at("ref").get<std::string>());
            if (!target.revision_pin)
                raise(Errc::AssessorFailure, "related memory ref without pin");
            a.related_memories.emplace_back(RevisionRef{target.base(), *target.revision_pin},
                                            edge_type_from_name(rel.at("type").get<std::string>()));
        }
    }
    return a;
}

} // namespace

} // namespace cogmem::dream

// httplib pulls in enough of the platform that it stays out of the main
// translation path above.
#include "httplib.h"

namespace cogmem::dream {

namespace {

class HttpAssessor final : public Assessor {
public:
    HttpAssessor(std::string base_url, std::string token)
        : base_url_(std::move(base_url)), token_(std::move(token)) {}

    std::vector<Assessment> assess(const std::vector<AssessmentInput>& batch) override {
        json body;
        body["memories"] = json::array();
        for (const AssessmentInput& in : batch)
            body["memories"].push_back(assessment_input_to_json(in));

        httplib::Client client(base_url_);
        client.set_connection_timeout(5, 0);
        client.set_read_timeout(30, 0);
        httplib::Headers headers;
        if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

        auto res = client.Post("/assess", headers, body.dump(), "application/json");
        if (!res || res->status != 200)
            raise(Errc::AssessorFailure,
                  "assessor endpoint returned " +
                      (res ? std::to_string(res->status) : std::string("no response")));
        try {
            json parsed = json::parse(res->body);
            std::vector<Assessment> out;
            for (const json& j : parsed.at("assessments"))
                out.push_back(assessment_from_json(j));
            return out;
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            raise(Errc::AssessorFailure, std::string("bad assessor response: ") + e.what());
        }
    }

private:
    std::string base_url_;
    std::string token_;
};

} // namespace

std::unique_ptr<Assessor> http_assessor(const std::string& base_url, const std::string& token) {
    return std::make_unique<HttpAssessor>(base_url, token);
}

std::unique_ptr<Assessor> http_assessor_from_env() {
    const char* url = std::getenv("DREAM_ASSESSOR_URL");
    if (!url || !*url) return nullptr;
    const char* token = std::getenv("DREAM_ASSESSOR_TOKEN");
    return http_assessor(url, token ? token : "");
}

} // namespace cogmem::dream
