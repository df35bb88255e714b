#include "evalrank/evolution.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "evalrank/error.hpp"

namespace evalrank {

EvolutionTrace build_evolution_trace(const Corpus& corpus, const RelationGraph& graph) {
  if (graph.corpus_digest != corpus.digest()) {
    throw Error(ErrorCode::GraphCorpusMismatch,
                fmt::format("relation graph digest {} does not match corpus digest {}",
                            format_digest(graph.corpus_digest), format_digest(corpus.digest())));
  }
  std::vector<const Achievement*> order;
  for (const auto& a : corpus.achievements()) order.push_back(&a);
  std::sort(order.begin(), order.end(), [](const Achievement* x, const Achievement* y) {
    if (x->interval.end != y->interval.end) return x->interval.end < y->interval.end;
    if (x->interval.begin != y->interval.begin) return x->interval.begin < y->interval.begin;
    return x->id < y->id;
  });

  std::map<std::string, int> step_of;
  EvolutionTrace trace;
  trace.corpus_digest = corpus.digest();
  for (const Achievement* a : order) {
    const int step = static_cast<int>(trace.events.size()) + 1;
    step_of[a->id] = step;
    trace.events.push_back({step, a->id, graph.is_pioneer(a->id), {}});
  }
  for (const auto& e : graph.edges) {
    auto from = step_of.find(e.from);
    auto to = step_of.find(e.to);
    if (from == step_of.end() || to == step_of.end()) {
      throw Error(ErrorCode::GraphCorpusMismatch,
                  fmt::format("edge {} -> {} names an achievement outside the corpus", e.from, e.to));
    }
    const int later = std::max(from->second, to->second);
    trace.events[later - 1].edges_added.push_back(e);
  }
  return trace;
}

Snapshot replay(const EvolutionTrace& trace, std::size_t k) {
  if (k > trace.events.size()) {
    throw Error(ErrorCode::StepOutOfRange,
                fmt::format("replay step {} outside 0..{}", k, trace.events.size()));
  }
  Snapshot snap;
  snap.graph.corpus_digest = trace.corpus_digest;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& ev = trace.events[i];
    snap.achievements.push_back(ev.added);
    if (ev.new_pioneer) snap.graph.pioneers.push_back(ev.added);
    snap.graph.edges.insert(snap.graph.edges.end(), ev.edges_added.begin(), ev.edges_added.end());
  }
  std::sort(snap.graph.pioneers.begin(), snap.graph.pioneers.end());
  std::sort(snap.graph.edges.begin(), snap.graph.edges.end());
  return snap;
}

std::string trace_to_jsonl(const EvolutionTrace& trace) {
  std::string out;
  for (const auto& ev : trace.events) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : ev.edges_added) {
      edges.push_back({{"from", e.from}, {"to", e.to}, {"kind", to_string(e.kind)}});
    }
    nlohmann::json line{{"step", ev.step}, {"added", ev.added}, {"new_pioneer", ev.new_pioneer}, {"edges_added", edges}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace evalrank
