#include "evalrank/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "evalrank/error.hpp"

namespace evalrank {

using nlohmann::json;

std::string_view to_string(Role role) {
  switch (role) {
    case Role::FirstAuthor: return "FirstAuthor";
    case Role::CorrespondingAuthor: return "CorrespondingAuthor";
    case Role::EqualContribution: return "EqualContribution";
  }
  return "?";
}

namespace {

std::optional<Role> parse_role(std::string_view s) {
  for (Role r : {Role::FirstAuthor, Role::CorrespondingAuthor, Role::EqualContribution}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

std::optional<Orientation> parse_orientation(std::string_view s) {
  if (s == "Positive") return Orientation::Positive;
  if (s == "Negative") return Orientation::Negative;
  return std::nullopt;
}

std::string_view to_string(Orientation o) { return o == Orientation::Positive ? "Positive" : "Negative"; }

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaError, fmt::format("{}: {}", path, what));
}

// Typed access to a JSON value that remembers where it sits in the document.
class Node {
 public:
  Node(const json& value, std::string path, bool lenient)
      : value_(value), path_(std::move(path)), lenient_(lenient) {}

  const std::string& path() const { return path_; }

  void expect_object(std::initializer_list<std::string_view> allowed) const {
    if (!value_.is_object()) schema_error(path_, "expected an object");
    if (lenient_) return;
    for (const auto& [key, unused] : value_.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        schema_error(path_ + "." + key, "unknown key (use --lenient to ignore)");
      }
    }
  }

  bool has(const char* key) const { return value_.contains(key); }

  Node field(const char* key) const {
    auto it = value_.find(key);
    if (it == value_.end()) schema_error(path_ + "." + key, "missing required field");
    return Node(*it, path_ + "." + key, lenient_);
  }

  std::vector<Node> elements() const {
    if (!value_.is_array()) schema_error(path_, "expected an array");
    std::vector<Node> out;
    out.reserve(value_.size());
    for (std::size_t i = 0; i < value_.size(); ++i) {
      out.emplace_back(value_[i], fmt::format("{}[{}]", path_, i), lenient_);
    }
    return out;
  }

  std::string str() const {
    if (!value_.is_string()) schema_error(path_, "expected a string");
    return value_.get<std::string>();
  }

  std::string nonempty_str() const {
    auto s = str();
    if (s.empty()) schema_error(path_, "must not be empty");
    return s;
  }

  double number() const {
    if (!value_.is_number()) schema_error(path_, "expected a number");
    return value_.get<double>();
  }

  std::int64_t integer() const {
    if (!value_.is_number_integer()) schema_error(path_, "expected an integer");
    return value_.get<std::int64_t>();
  }

  std::set<std::string> string_set() const {
    std::set<std::string> out;
    for (const auto& e : elements()) {
      if (!out.insert(e.nonempty_str()).second) schema_error(e.path(), "duplicate entry");
    }
    return out;
  }

  const json& raw() const { return value_; }

 private:
  const json& value_;
  std::string path_;
  bool lenient_;
};

ECNode read_ec_node(const Node& n) {
  n.expect_object({"id", "level", "label", "parent"});
  ECNode node;
  node.id = n.field("id").nonempty_str();
  const Node level = n.field("level");
  const auto parsed = parse_level(level.str());
  if (!parsed) schema_error(level.path(), fmt::format("unknown level '{}'", level.str()));
  node.level = *parsed;
  node.label = n.field("label").str();
  if (n.has("parent") && !n.field("parent").raw().is_null()) node.parent = n.field("parent").nonempty_str();
  return node;
}

Contributor read_contributor(const Node& n) {
  n.expect_object({"person", "name", "position", "roles", "institutions"});
  Contributor c;
  c.person = n.field("person").nonempty_str();
  c.name = n.field("name").str();
  const Node pos = n.field("position");
  const auto position = pos.integer();
  if (position < 1) schema_error(pos.path(), "author position must be >= 1");
  c.position = static_cast<int>(position);
  if (n.has("roles")) {
    for (const auto& r : n.field("roles").elements()) {
      const auto role = parse_role(r.str());
      if (!role) schema_error(r.path(), fmt::format("unknown role '{}'", r.str()));
      c.roles.insert(*role);
    }
  }
  const Node insts = n.field("institutions");
  for (const auto& i : insts.elements()) c.institutions.push_back(i.nonempty_str());
  if (c.institutions.empty()) schema_error(insts.path(), "at least one institution required");
  return c;
}

SignificanceDim read_dim(const Node& n) {
  n.expect_object({"name", "value", "orientation"});
  SignificanceDim d;
  d.name = n.field("name").str();
  d.value = n.field("value").number();
  const Node o = n.field("orientation");
  const auto orient = parse_orientation(o.str());
  if (!orient) schema_error(o.path(), fmt::format("orientation must be Positive or Negative, got '{}'", o.str()));
  d.orientation = *orient;
  return d;
}

Achievement read_achievement(const Node& n) {
  n.expect_object({"id", "title", "begin", "end", "ec_mapping", "key_problem", "introduces_ec_nodes",
                   "references", "dims", "contributors", "publication"});
  Achievement a;
  a.id = n.field("id").nonempty_str();
  a.title = n.field("title").str();
  const Node begin = n.field("begin");
  const Node end = n.field("end");
  try {
    a.interval = parse_interval(begin.str(), end.str());
  } catch (const Error& e) {
    schema_error(n.path(), e.what());
  }
  const Node ec = n.field("ec_mapping");
  a.ec_mapping = ec.string_set();
  if (a.ec_mapping.empty()) schema_error(ec.path(), "ec_mapping must be nonempty");
  a.key_problem = n.field("key_problem").nonempty_str();
  if (n.has("introduces_ec_nodes")) a.introduces_ec_nodes = n.field("introduces_ec_nodes").string_set();
  if (n.has("references")) a.references = n.field("references").string_set();
  if (n.has("dims")) {
    for (const auto& d : n.field("dims").elements()) a.dims.push_back(read_dim(d));
  }
  for (const auto& c : n.field("contributors").elements()) a.contributors.push_back(read_contributor(c));
  if (n.has("publication")) {
    const Node p = n.field("publication");
    p.expect_object({"venue", "citation_count"});
    Publication pub;
    pub.venue = p.field("venue").str();
    const Node cc = p.field("citation_count");
    pub.citation_count = cc.integer();
    if (pub.citation_count < 0) schema_error(cc.path(), "citation_count must be nonnegative");
    a.publication = std::move(pub);
  }
  return a;
}

[[noreturn]] void constraint(const std::string& what) { throw Error(ErrorCode::ConstraintError, what); }

void check_achievement(const Achievement& a, const Taxonomy& tax,
                       const std::map<std::string, std::string>& institutions) {
  if (a.ec_mapping.empty()) constraint(fmt::format("achievement '{}' has an empty ec_mapping", a.id));
  for (const auto& n : a.ec_mapping) {
    if (!tax.contains(n)) {
      throw Error(ErrorCode::ReferentialError,
                  fmt::format("achievement '{}' maps unknown EC node '{}'", a.id, n));
    }
  }
  if (!tax.contains(a.key_problem)) {
    throw Error(ErrorCode::ReferentialError,
                fmt::format("achievement '{}' has unknown key_problem '{}'", a.id, a.key_problem));
  }
  const ECLevel q_level = tax.node(a.key_problem).level;
  if (!is_key_problem_level(q_level)) {
    constraint(fmt::format("achievement '{}': key_problem '{}' is a {} node; expected ProblemDomain, "
                           "SubProblemDomain, Problem or SubProblem",
                           a.id, a.key_problem, to_string(q_level)));
  }
  const bool covered = a.ec_mapping.count(a.key_problem) != 0 ||
                       std::any_of(a.ec_mapping.begin(), a.ec_mapping.end(),
                                   [&](const std::string& n) { return tax.is_ancestor(a.key_problem, n); });
  if (!covered) {
    constraint(fmt::format("achievement '{}': key_problem '{}' is neither mapped nor an ancestor of a mapped node",
                           a.id, a.key_problem));
  }
  for (const auto& n : a.introduces_ec_nodes) {
    if (!a.ec_mapping.count(n)) {
      constraint(fmt::format("achievement '{}' introduces '{}' without mapping it", a.id, n));
    }
  }
  if (a.references.count(a.id)) constraint(fmt::format("achievement '{}' references itself", a.id));

  if (a.contributors.empty()) constraint(fmt::format("achievement '{}' has no contributors", a.id));
  std::vector<int> positions;
  std::set<std::string> persons;
  for (const auto& c : a.contributors) {
    positions.push_back(c.position);
    if (!persons.insert(c.person).second) {
      constraint(fmt::format("achievement '{}' lists person '{}' twice", a.id, c.person));
    }
    if (c.institutions.empty()) {
      constraint(fmt::format("achievement '{}': contributor '{}' has no institution", a.id, c.person));
    }
    for (const auto& inst : c.institutions) {
      if (!institutions.count(inst)) {
        throw Error(ErrorCode::ReferentialError,
                    fmt::format("achievement '{}': contributor '{}' names unknown institution '{}'", a.id,
                                c.person, inst));
      }
    }
  }
  std::sort(positions.begin(), positions.end());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] != static_cast<int>(i) + 1) {
      constraint(fmt::format("achievement '{}': author positions must be a permutation of 1..{}", a.id,
                             positions.size()));
    }
  }
  for (const auto& d : a.dims) {
    if (!(d.value > 0.0) || !std::isfinite(d.value)) {
      throw Error(ErrorCode::NonPositiveDim,
                  fmt::format("achievement '{}': dimension '{}' has non-positive value {}", a.id, d.name, d.value));
    }
  }
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json to_canonical(const Corpus& corpus) {
  json tax = json::array();
  for (const auto& [id, n] : corpus.taxonomy().nodes()) {
    json node{{"id", n.id}, {"level", to_string(n.level)}, {"label", n.label}};
    if (n.parent) node["parent"] = *n.parent;
    tax.push_back(std::move(node));
  }
  json achievements = json::array();
  for (const auto& a : corpus.achievements()) {
    json contributors = json::array();
    for (const auto& c : a.contributors) {
      json roles = json::array();
      for (Role r : c.roles) roles.push_back(to_string(r));
      contributors.push_back({{"person", c.person},
                              {"name", c.name},
                              {"position", c.position},
                              {"roles", roles},
                              {"institutions", c.institutions}});
    }
    json dims = json::array();
    for (const auto& d : a.dims) {
      dims.push_back({{"name", d.name}, {"value", d.value}, {"orientation", to_string(d.orientation)}});
    }
    json entry{{"id", a.id},
               {"title", a.title},
               {"begin", a.interval.begin.iso()},
               {"end", a.interval.end.iso()},
               {"ec_mapping", a.ec_mapping},
               {"key_problem", a.key_problem},
               {"introduces_ec_nodes", a.introduces_ec_nodes},
               {"references", a.references},
               {"dims", dims},
               {"contributors", contributors}};
    if (a.publication) {
      entry["publication"] = {{"venue", a.publication->venue}, {"citation_count", a.publication->citation_count}};
    }
    achievements.push_back(std::move(entry));
  }
  return json{{"taxonomy", tax}, {"institutions", corpus.institutions()}, {"achievements", achievements}};
}

std::pair<std::size_t, std::size_t> line_column(std::string_view doc, std::size_t byte) {
  std::size_t line = 1, col = 1;
  const std::size_t stop = std::min(doc.size(), byte == 0 ? 0 : byte - 1);
  for (std::size_t i = 0; i < stop; ++i) {
    if (doc[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

bool Corpus::contains(std::string_view id) const { return index_.find(std::string(id)) != index_.end(); }

std::size_t Corpus::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw Error(ErrorCode::UnknownAchievement, fmt::format("unknown achievement '{}'", id));
  }
  return it->second;
}

const Achievement& Corpus::at(std::string_view id) const { return achievements_[index_of(id)]; }

Corpus Corpus::assemble(Taxonomy taxonomy, std::vector<Achievement> achievements,
                        std::map<std::string, std::string> institutions) {
  Corpus c;
  c.taxonomy_ = std::move(taxonomy);
  c.institutions_ = std::move(institutions);
  std::sort(achievements.begin(), achievements.end(),
            [](const Achievement& x, const Achievement& y) { return x.id < y.id; });
  for (std::size_t i = 0; i < achievements.size(); ++i) {
    if (!c.index_.emplace(achievements[i].id, i).second) {
      throw Error(ErrorCode::SchemaError, fmt::format("duplicate achievement id '{}'", achievements[i].id));
    }
  }
  for (auto& a : achievements) {
    std::sort(a.contributors.begin(), a.contributors.end(),
              [](const Contributor& x, const Contributor& y) { return x.position < y.position; });
    check_achievement(a, c.taxonomy_, c.institutions_);
  }
  std::map<std::string, std::string> introducer;
  for (const auto& a : achievements) {
    for (const auto& r : a.references) {
      auto it = c.index_.find(r);
      if (it == c.index_.end()) {
        throw Error(ErrorCode::ReferentialError,
                    fmt::format("achievement '{}' references unknown achievement '{}'", a.id, r));
      }
      const Achievement& cited = achievements[it->second];
      if (a.interval.end < cited.interval.begin) {
        throw Error(ErrorCode::TemporalError,
                    fmt::format("achievement '{}' (ends {}) cites strictly later achievement '{}' (begins {})", a.id,
                                a.interval.end.iso(), cited.id, cited.interval.begin.iso()));
      }
    }
    for (const auto& n : a.introduces_ec_nodes) {
      auto [it, inserted] = introducer.emplace(n, a.id);
      if (!inserted) {
        throw Error(ErrorCode::DuplicateIntroducer,
                    fmt::format("EC node '{}' is introduced by both '{}' and '{}'", n, it->second, a.id));
      }
    }
  }
  c.achievements_ = std::move(achievements);
  c.digest_ = fnv1a(to_canonical(c).dump());
  return c;
}

Corpus ingest_corpus(std::string_view document, const IngestOptions& options) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(document, e.byte);
    // nlohmann prefixes its own "[json.exception...] parse error at ...: " header; keep only the reason.
    std::string_view reason = e.what();
    if (auto pos = reason.find(": "); pos != std::string_view::npos) reason.remove_prefix(pos + 2);
    throw Error(ErrorCode::ParseError, fmt::format("malformed JSON at line {}, column {}: {}", line, col, reason));
  }
  const Node root(doc, "$", options.lenient);
  root.expect_object({"taxonomy", "institutions", "achievements"});

  std::vector<ECNode> nodes;
  const Node tax = root.field("taxonomy");
  for (const auto& n : tax.elements()) nodes.push_back(read_ec_node(n));
  if (nodes.empty()) schema_error(tax.path(), "taxonomy must contain at least the Field root");
  Taxonomy taxonomy = validate_taxonomy(std::move(nodes));

  std::map<std::string, std::string> institutions;
  if (root.has("institutions")) {
    const Node insts = root.field("institutions");
    if (!insts.raw().is_object()) schema_error(insts.path(), "expected an object mapping id to name");
    for (const auto& [id, name] : insts.raw().items()) {
      institutions[id] = Node(name, insts.path() + "." + id, options.lenient).str();
    }
  }

  std::vector<Achievement> achievements;
  for (const auto& a : root.field("achievements").elements()) achievements.push_back(read_achievement(a));
  return Corpus::assemble(std::move(taxonomy), std::move(achievements), std::move(institutions));
}

Corpus load_corpus_file(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UsageError, fmt::format("cannot open corpus file '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest_corpus(buf.str(), options);
}

Corpus filter_corpus(const Corpus& corpus, const TimeInterval& timeframe, std::string_view field) {
  const std::set<std::string> scope = corpus.taxonomy().subtree_ids(field);
  std::vector<Achievement> kept;
  std::set<std::string> kept_ids;
  for (const auto& a : corpus.achievements()) {
    if (!overlaps(a.interval, timeframe)) continue;
    const bool in_field = std::any_of(a.ec_mapping.begin(), a.ec_mapping.end(),
                                      [&](const std::string& n) { return scope.count(n) != 0; });
    if (!in_field) continue;
    kept.push_back(a);
    kept_ids.insert(a.id);
  }
  for (auto& a : kept) {
    std::erase_if(a.references, [&](const std::string& r) { return !kept_ids.count(r); });
  }
  return Corpus::assemble(corpus.taxonomy(), std::move(kept), corpus.institutions());
}

std::set<std::string> citation_closure(const Corpus& corpus, std::string_view id) {
  const std::string start(corpus.at(id).id);
  std::map<std::string, std::vector<std::string>> cited_by;
  for (const auto& a : corpus.achievements()) {
    for (const auto& r : a.references) cited_by[r].push_back(a.id);
  }
  std::set<std::string> out;
  std::vector<std::string> stack{start};
  while (!stack.empty()) {
    const std::string cur = stack.back();
    stack.pop_back();
    for (const auto& next : cited_by[cur]) {
      if (next != start && out.insert(next).second) stack.push_back(next);
    }
  }
  return out;
}

std::string canonical_json(const Corpus& corpus) { return to_canonical(corpus).dump(2); }

std::string format_digest(std::uint64_t digest) { return fmt::format("{:016x}", digest); }

}  // namespace evalrank
