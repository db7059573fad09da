#pragma once
// Full-graph exports: JSON Lines (lossless; re-import reproduces snapshot
// equality), an events-only JSONL feed, and DOT with nodes colored by kind
// and edges by type.

#include "cogmem/store.hpp"

namespace cogmem {

// One JSON object per line: {seq, kind, subject, at}.
std::string export_events_jsonl(const Graph& g);

// One record per line, typed by a leading "record" field (item, revision,
// edge, tag, artifact, event).
std::string export_graph_jsonl(const Graph& g);
Graph import_graph_jsonl(const std::string& text, std::shared_ptr<Clock> clock);

std::string export_graph_dot(const Graph& g);

} // namespace cogmem
