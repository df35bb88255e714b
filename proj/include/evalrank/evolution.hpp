#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "evalrank/corpus.hpp"
#include "evalrank/relations.hpp"

namespace evalrank {

// One ES_i -> ES_{i+1} step: exactly one achievement joins, together with the
// edges linking it to what was already present.
struct EvolutionEvent {
  int step = 0;  // 1-based
  std::string added;
  bool new_pioneer = false;
  std::vector<RelationEdge> edges_added;

  friend bool operator==(const EvolutionEvent&, const EvolutionEvent&) = default;
};

struct EvolutionTrace {
  std::vector<EvolutionEvent> events;
  std::uint64_t corpus_digest = 0;

  std::size_t size() const { return events.size(); }
};

// ES_k: the first k achievements of the trace and the relations among them.
struct Snapshot {
  std::vector<std::string> achievements;  // insertion order
  RelationGraph graph;
};

// Orders achievements by (end, begin, id) and attributes each graph edge to
// the event of its later endpoint. Throws Error{GraphCorpusMismatch} when the
// graph was built from a different corpus.
EvolutionTrace build_evolution_trace(const Corpus& corpus, const RelationGraph& graph);

// State after k events; 0 <= k <= n, else Error{StepOutOfRange}.
Snapshot replay(const EvolutionTrace& trace, std::size_t k);

// One JSON object per line, one line per event.
std::string trace_to_jsonl(const EvolutionTrace& trace);

}  // namespace evalrank
