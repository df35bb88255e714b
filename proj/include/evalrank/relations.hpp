#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "evalrank/corpus.hpp"

namespace evalrank {

enum class RelationKind { Progressive = 0, Parallel = 1, RelatedNotConnected = 2 };

std::string_view to_string(RelationKind kind);
std::optional<RelationKind> parse_relation_kind(std::string_view name);

// Progressive and RelatedNotConnected edges point earlier -> later; Parallel
// edges are undirected and stored with from < to.
struct RelationEdge {
  std::string from;
  std::string to;
  RelationKind kind = RelationKind::Progressive;

  friend auto operator<=>(const RelationEdge&, const RelationEdge&) = default;
};

struct RelationGraph {
  std::vector<std::string> pioneers;  // sorted
  std::vector<RelationEdge> edges;    // sorted by (from, to, kind)
  std::uint64_t corpus_digest = 0;    // digest of the corpus it was built from

  bool is_pioneer(std::string_view id) const;
};

// P(A)=1: a introduces at least one EC node and nothing mapping that node
// (or anything below it) finished before a began.
bool is_pioneering(const Corpus& corpus, std::string_view a);

// Same key problem, shared EC node, strictly disjoint intervals, and a
// citation in either direction. Symmetric. Requires a != b.
bool is_progressive(const Corpus& corpus, std::string_view a, std::string_view b);

// Same key problem, shared EC node, overlapping closed intervals.
bool is_parallel(const Corpus& corpus, std::string_view a, std::string_view b);

// Pairwise form: a must end strictly before b begins (Error{NotOriented}
// otherwise); true iff same key problem, shared EC node, and b does not cite a.
bool is_related_not_connected(const Corpus& corpus, std::string_view a, std::string_view b);

// Full classification. Pairwise Progressive/Parallel tests run over pairs
// sharing a key problem, in parallel when OpenMP is available;
// RelatedNotConnected is only tested on neighbours in each key-problem class
// sorted by (end, begin, id). Output is schedule-independent.
RelationGraph classify_relationships(const Corpus& corpus);

// Single-threaded reference for classify_relationships: walks every unordered
// pair. Kept for tests and benchmarks.
RelationGraph classify_relationships_serial(const Corpus& corpus);

struct ManyToOneGroup {
  std::set<std::string> predecessors;
  std::string successor;

  friend bool operator==(const ManyToOneGroup&, const ManyToOneGroup&) = default;
};

// Achievements with two or more incoming Progressive edges, sorted by successor.
std::vector<ManyToOneGroup> many_to_one_groups(const RelationGraph& graph);

// {"pioneers":[...],"edges":[{"from","to","kind"}]}
std::string graph_to_json(const RelationGraph& graph);
RelationGraph graph_from_json(std::string_view text);

// Graphviz digraph, one subgraph per relation kind; pioneers are drawn with a
// double border. Titles come from the corpus when present.
std::string graph_to_dot(const RelationGraph& graph, const Corpus* corpus = nullptr);

}  // namespace evalrank
