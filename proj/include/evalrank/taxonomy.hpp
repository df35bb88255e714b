#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace evalrank {

// The nine levels of the extended evaluation condition, outermost first.
// Underlying values are the 1-based ordinals.
enum class ECLevel : int {
  Field = 1,
  ProblemDomain = 2,
  SubProblemDomain = 3,
  Problem = 4,
  SubProblem = 5,
  ProblemInstance = 6,
  AlgorithmMechanism = 7,
  Implementation = 8,
  SupportSystem = 9,
};

inline constexpr std::array<ECLevel, 9> kAllLevels{
    ECLevel::Field,           ECLevel::ProblemDomain,      ECLevel::SubProblemDomain,
    ECLevel::Problem,         ECLevel::SubProblem,         ECLevel::ProblemInstance,
    ECLevel::AlgorithmMechanism, ECLevel::Implementation, ECLevel::SupportSystem};

constexpr int ordinal(ECLevel level) { return static_cast<int>(level); }

std::string_view to_string(ECLevel level);
std::optional<ECLevel> parse_level(std::string_view name);

// Levels a key problem Q(a) may name.
constexpr bool is_key_problem_level(ECLevel level) {
  return level == ECLevel::ProblemDomain || level == ECLevel::SubProblemDomain ||
         level == ECLevel::Problem || level == ECLevel::SubProblem;
}

struct ECNode {
  std::string id;
  ECLevel level = ECLevel::Field;
  std::string label;
  std::optional<std::string> parent;

  friend bool operator==(const ECNode&, const ECNode&) = default;
};

// Validated, immutable rooted tree. Built only through validate_taxonomy.
class Taxonomy {
 public:
  const std::string& root() const { return root_; }
  const std::map<std::string, ECNode>& nodes() const { return nodes_; }
  bool contains(std::string_view id) const { return nodes_.find(std::string(id)) != nodes_.end(); }

  // Throws Error{UnknownNode}.
  const ECNode& node(std::string_view id) const;
  const std::vector<std::string>& children(std::string_view id) const;

  // True iff a lies strictly above b on b's parent chain.
  bool is_ancestor(std::string_view a, std::string_view b) const;
  // a and all of its descendants.
  std::set<std::string> subtree_ids(std::string_view a) const;

  std::size_t size() const { return nodes_.size(); }

  friend Taxonomy validate_taxonomy(std::vector<ECNode> nodes);

 private:
  std::map<std::string, ECNode> nodes_;
  std::map<std::string, std::vector<std::string>> children_;
  std::string root_;
};

// Checks ids, parents, acyclicity, strict level increase and the single
// Field root. Throws Error with DuplicateNode, DanglingParent, CycleDetected,
// LevelInversion, MultipleRoots or InvalidRoot.
Taxonomy validate_taxonomy(std::vector<ECNode> nodes);

}  // namespace evalrank
