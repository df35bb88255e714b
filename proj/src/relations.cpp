#include "evalrank/relations.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "evalrank/error.hpp"

namespace evalrank {

using nlohmann::json;

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::Progressive: return "Progressive";
    case RelationKind::Parallel: return "Parallel";
    case RelationKind::RelatedNotConnected: return "RelatedNotConnected";
  }
  return "?";
}

std::optional<RelationKind> parse_relation_kind(std::string_view name) {
  for (auto k : {RelationKind::Progressive, RelationKind::Parallel, RelationKind::RelatedNotConnected}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

bool RelationGraph::is_pioneer(std::string_view id) const {
  return std::binary_search(pioneers.begin(), pioneers.end(), id);
}

namespace {

bool shares_ec(const Achievement& a, const Achievement& b) {
  // Both sets are ordered; linear merge.
  auto i = a.ec_mapping.begin();
  auto j = b.ec_mapping.begin();
  while (i != a.ec_mapping.end() && j != b.ec_mapping.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

bool cites(const Achievement& citing, const Achievement& cited) { return citing.references.count(cited.id) != 0; }

bool pioneer_check(const Corpus& corpus, const Achievement& a) {
  if (a.introduces_ec_nodes.empty()) return false;
  const Taxonomy& tax = corpus.taxonomy();
  for (const auto& introduced : a.introduces_ec_nodes) {
    for (const auto& other : corpus.achievements()) {
      if (other.id == a.id || !(other.interval.end < a.interval.begin)) continue;
      for (const auto& m : other.ec_mapping) {
        if (m == introduced || tax.is_ancestor(introduced, m)) return false;
      }
    }
  }
  return true;
}

bool progressive_check(const Achievement& a, const Achievement& b) {
  return a.key_problem == b.key_problem && shares_ec(a, b) && disjoint(a.interval, b.interval) &&
         (cites(b, a) || cites(a, b));
}

bool parallel_check(const Achievement& a, const Achievement& b) {
  return a.key_problem == b.key_problem && shares_ec(a, b) && overlaps(a.interval, b.interval);
}

// Pairwise step of the classifier for one unordered pair; parallel wins over
// progressive because the temporal conditions are exclusive anyway.
std::optional<RelationEdge> classify_pair(const Achievement& a, const Achievement& b) {
  if (parallel_check(a, b)) {
    return a.id < b.id ? RelationEdge{a.id, b.id, RelationKind::Parallel}
                       : RelationEdge{b.id, a.id, RelationKind::Parallel};
  }
  if (progressive_check(a, b)) {
    return precedes(a.interval, b.interval) ? RelationEdge{a.id, b.id, RelationKind::Progressive}
                                            : RelationEdge{b.id, a.id, RelationKind::Progressive};
  }
  return std::nullopt;
}

bool by_end_begin_id(const Achievement* x, const Achievement* y) {
  if (x->interval.end != y->interval.end) return x->interval.end < y->interval.end;
  if (x->interval.begin != y->interval.begin) return x->interval.begin < y->interval.begin;
  return x->id < y->id;
}

std::map<std::string, std::vector<const Achievement*>> key_problem_classes(const Corpus& corpus) {
  std::map<std::string, std::vector<const Achievement*>> classes;
  for (const auto& a : corpus.achievements()) classes[a.key_problem].push_back(&a);
  return classes;
}

void append_related_not_connected(const Corpus& corpus, std::vector<RelationEdge>& edges) {
  for (auto& [q, members] : key_problem_classes(corpus)) {
    std::sort(members.begin(), members.end(), by_end_begin_id);
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
      const Achievement& earlier = *members[i];
      const Achievement& later = *members[i + 1];
      if (shares_ec(earlier, later) && precedes(earlier.interval, later.interval) && !cites(later, earlier)) {
        edges.push_back({earlier.id, later.id, RelationKind::RelatedNotConnected});
      }
    }
  }
}

RelationGraph finish(const Corpus& corpus, std::vector<std::string> pioneers, std::vector<RelationEdge> edges) {
  std::sort(pioneers.begin(), pioneers.end());
  std::sort(edges.begin(), edges.end());
  return RelationGraph{std::move(pioneers), std::move(edges), corpus.digest()};
}

void require_distinct(std::string_view a, std::string_view b) {
  if (a == b) {
    throw Error(ErrorCode::ConstraintError, fmt::format("relationship predicates need two distinct achievements, got '{}' twice", a));
  }
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

bool is_pioneering(const Corpus& corpus, std::string_view a) { return pioneer_check(corpus, corpus.at(a)); }

bool is_progressive(const Corpus& corpus, std::string_view a, std::string_view b) {
  const Achievement& x = corpus.at(a);
  const Achievement& y = corpus.at(b);
  require_distinct(a, b);
  return progressive_check(x, y);
}

bool is_parallel(const Corpus& corpus, std::string_view a, std::string_view b) {
  const Achievement& x = corpus.at(a);
  const Achievement& y = corpus.at(b);
  require_distinct(a, b);
  return parallel_check(x, y);
}

bool is_related_not_connected(const Corpus& corpus, std::string_view a, std::string_view b) {
  const Achievement& earlier = corpus.at(a);
  const Achievement& later = corpus.at(b);
  require_distinct(a, b);
  if (!precedes(earlier.interval, later.interval)) {
    throw Error(ErrorCode::NotOriented,
                fmt::format("'{}' must end strictly before '{}' begins", earlier.id, later.id));
  }
  return earlier.key_problem == later.key_problem && shares_ec(earlier, later) && !cites(later, earlier);
}

RelationGraph classify_relationships_serial(const Corpus& corpus) {
  const auto& all = corpus.achievements();
  std::vector<std::string> pioneers;
  for (const auto& a : all) {
    if (pioneer_check(corpus, a)) pioneers.push_back(a.id);
  }
  std::vector<RelationEdge> edges;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (auto e = classify_pair(all[i], all[j])) edges.push_back(std::move(*e));
    }
  }
  append_related_not_connected(corpus, edges);
  return finish(corpus, std::move(pioneers), std::move(edges));
}

RelationGraph classify_relationships(const Corpus& corpus) {
  const auto& all = corpus.achievements();
  const auto n = static_cast<std::int64_t>(all.size());

  std::vector<char> pioneer_flag(all.size(), 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    pioneer_flag[i] = pioneer_check(corpus, all[i]) ? 1 : 0;
  }
  std::vector<std::string> pioneers;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (pioneer_flag[i]) pioneers.push_back(all[i].id);
  }

  // Only pairs inside one key-problem class can relate.
  std::vector<std::pair<const Achievement*, const Achievement*>> pairs;
  for (const auto& [q, members] : key_problem_classes(corpus)) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) pairs.emplace_back(members[i], members[j]);
    }
  }

  std::vector<RelationEdge> edges;
  const auto pair_count = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel
  {
    std::vector<RelationEdge> local;
#pragma omp for schedule(static) nowait
    for (std::int64_t p = 0; p < pair_count; ++p) {
      if (auto e = classify_pair(*pairs[p].first, *pairs[p].second)) local.push_back(std::move(*e));
    }
#pragma omp critical
    edges.insert(edges.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
  }

  append_related_not_connected(corpus, edges);
  return finish(corpus, std::move(pioneers), std::move(edges));
}

std::vector<ManyToOneGroup> many_to_one_groups(const RelationGraph& graph) {
  std::map<std::string, std::set<std::string>> incoming;
  for (const auto& e : graph.edges) {
    if (e.kind == RelationKind::Progressive) incoming[e.to].insert(e.from);
  }
  std::vector<ManyToOneGroup> out;
  for (auto& [to, from] : incoming) {
    if (from.size() >= 2) out.push_back({std::move(from), to});
  }
  return out;
}

std::string graph_to_json(const RelationGraph& graph) {
  json edges = json::array();
  for (const auto& e : graph.edges) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"kind", to_string(e.kind)}});
  }
  return json{{"pioneers", graph.pioneers}, {"edges", edges}}.dump(2);
}

RelationGraph graph_from_json(std::string_view text) {
  RelationGraph g;
  try {
    const json doc = json::parse(text);
    g.pioneers = doc.at("pioneers").get<std::vector<std::string>>();
    for (const auto& e : doc.at("edges")) {
      const auto kind = parse_relation_kind(e.at("kind").get<std::string>());
      if (!kind) throw Error(ErrorCode::SchemaError, "unknown relation kind");
      g.edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(), *kind});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, fmt::format("relation graph JSON: {}", e.what()));
  }
  std::sort(g.pioneers.begin(), g.pioneers.end());
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::string graph_to_dot(const RelationGraph& graph, const Corpus* corpus) {
  std::set<std::string> nodes(graph.pioneers.begin(), graph.pioneers.end());
  for (const auto& e : graph.edges) {
    nodes.insert(e.from);
    nodes.insert(e.to);
  }
  std::string out = "digraph relations {\n  rankdir=LR;\n  node [shape=box];\n";
  for (const auto& id : nodes) {
    std::string label = id;
    if (corpus && corpus->contains(id)) label = corpus->at(id).title;
    out += fmt::format("  {} [label={}{}];\n", dot_quote(id), dot_quote(label),
                       graph.is_pioneer(id) ? ", peripheries=2" : "");
  }
  struct Style {
    RelationKind kind;
    const char* name;
    const char* attrs;
  };
  static constexpr Style kStyles[] = {
      {RelationKind::Progressive, "progressive", "style=solid"},
      {RelationKind::Parallel, "parallel", "dir=none, style=dashed"},
      {RelationKind::RelatedNotConnected, "related_not_connected", "style=dotted"},
  };
  for (const auto& s : kStyles) {
    out += fmt::format("  subgraph {} {{\n    edge [{}];\n", s.name, s.attrs);
    for (const auto& e : graph.edges) {
      if (e.kind == s.kind) out += fmt::format("    {} -> {};\n", dot_quote(e.from), dot_quote(e.to));
    }
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

}  // namespace evalrank
