#include "cogmem/engine.hpp"

#include <cctype>

namespace cogmem {

std::string slugify(const std::string& title) {
    std::string out;
    bool pending_hyphen = false;
    for (char c : title) {
        unsigned char uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc) || c == '.' || c == '_' || c == '-') {
            if (pending_hyphen && !out.empty()) out += '-';
            pending_hyphen = false;
            out += static_cast<char>(std::tolower(uc));
        } else {
            pending_hyphen = true;
        }
    }
    while (!out.empty() && (out.back() == '-' || out.back() == '.')) out.pop_back();
    if (out.empty()) raise(Errc::InvalidOption, "title yields an empty item name");
    return out;
}

AtomSet derive_atoms(const Kref& item, const std::string& summary,
                     const std::vector<std::string>& topics,
                     const std::vector<std::string>& keywords) {
    AtomSet atoms;
    atoms.push_back(BeliefAtom::summary(item, summary));
    for (const std::string& t : topics)
        atoms.push_back({item.base(), Predicate::Topic, t});
    for (const std::string& k : keywords)
        atoms.push_back({item.base(), Predicate::Keyword, k});
    normalize(atoms);
    return atoms;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const std::string& p : parts) {
        if (!out.empty()) out += ",";
        out += p;
    }
    return out;
}

} // namespace

IngestResult ingest(Graph& g, const IngestRequest& request) {
    if (request.title.empty() || request.summary.empty())
        raise(Errc::InvalidOption, "ingest requires a title and a summary");

    Kref item = Kref::make(request.project, request.space, slugify(request.title),
                           request.kind);

    Metadata metadata;
    metadata["schema"] = "1";
    metadata["type"] = request.kind;
    if (!request.topics.empty()) metadata["topics"] = join(request.topics);
    if (!request.keywords.empty()) metadata["keywords"] = join(request.keywords);
    if (request.session) metadata["session"] = *request.session;

    auto wl = g.write_lock();
    bool existed = g.has_item(item) && g.latest_seq(item) > 0;
    g.ensure_item(item);

    AtomSet atoms = derive_atoms(item, request.summary, request.topics, request.keywords);
    RevisionOptions opts;
    opts.embedding_text_override = request.embedding_text;
    opts.author = request.author;
    Revision rev = revise(g, item, std::move(atoms), request.summary, std::move(metadata),
                          std::move(opts));

    for (const std::string& tag : request.tags) g.bind_tag(item, tag, rev.seq);
    for (const Kref& source : request.derived_from) {
        Revision target = g.resolve(source, std::nullopt, true);
        g.add_edge(rev.ref(), EdgeType::DerivedFrom, target.ref());
    }
    if (request.artifact)
        g.attach_artifact(rev.ref(), request.artifact->first, request.artifact->second);

    IngestResult result;
    result.kref = item.with_pin(rev.seq);
    result.revision = rev.ref();
    result.revised_existing = existed;
    return result;
}

int flush_embeddings(Graph& g, EmbeddingProvider& provider) {
    int written = 0;
    for (const Item& item : g.items()) {
        for (const Revision& rev : g.revisions(item.kref_base)) {
            if (rev.embedding) continue;
            const std::string& text =
                rev.embedding_text_override ? *rev.embedding_text_override : rev.search_text;
            g.set_embedding(rev.ref(), provider.embed(text));
            ++written;
        }
    }
    return written;
}

} // namespace cogmem
