#include "evalrank/taxonomy.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "evalrank/error.hpp"

namespace evalrank {

std::string_view to_string(ECLevel level) {
  switch (level) {
    case ECLevel::Field: return "Field";
    case ECLevel::ProblemDomain: return "ProblemDomain";
    case ECLevel::SubProblemDomain: return "SubProblemDomain";
    case ECLevel::Problem: return "Problem";
    case ECLevel::SubProblem: return "SubProblem";
    case ECLevel::ProblemInstance: return "ProblemInstance";
    case ECLevel::AlgorithmMechanism: return "AlgorithmMechanism";
    case ECLevel::Implementation: return "Implementation";
    case ECLevel::SupportSystem: return "SupportSystem";
  }
  return "?";
}

std::optional<ECLevel> parse_level(std::string_view name) {
  for (ECLevel level : kAllLevels) {
    if (to_string(level) == name) return level;
  }
  return std::nullopt;
}

const ECNode& Taxonomy::node(std::string_view id) const {
  auto it = nodes_.find(std::string(id));
  if (it == nodes_.end()) {
    throw Error(ErrorCode::UnknownNode, fmt::format("unknown taxonomy node '{}'", id));
  }
  return it->second;
}

const std::vector<std::string>& Taxonomy::children(std::string_view id) const {
  static const std::vector<std::string> kNone;
  node(id);
  auto it = children_.find(std::string(id));
  return it == children_.end() ? kNone : it->second;
}

bool Taxonomy::is_ancestor(std::string_view a, std::string_view b) const {
  node(a);
  const ECNode* cur = &node(b);
  // Depth is bounded by the nine levels.
  while (cur->parent) {
    if (*cur->parent == a) return true;
    cur = &nodes_.at(*cur->parent);
  }
  return false;
}

std::set<std::string> Taxonomy::subtree_ids(std::string_view a) const {
  std::set<std::string> out;
  std::vector<std::string> stack{std::string(node(a).id)};
  while (!stack.empty()) {
    std::string id = std::move(stack.back());
    stack.pop_back();
    if (auto it = children_.find(id); it != children_.end()) {
      stack.insert(stack.end(), it->second.begin(), it->second.end());
    }
    out.insert(std::move(id));
  }
  return out;
}

Taxonomy validate_taxonomy(std::vector<ECNode> nodes) {
  if (nodes.empty()) {
    throw Error(ErrorCode::InvalidRoot, "taxonomy has no nodes");
  }
  Taxonomy tax;
  for (auto& n : nodes) {
    const std::string id = n.id;
    if (!tax.nodes_.emplace(id, std::move(n)).second) {
      throw Error(ErrorCode::DuplicateNode, fmt::format("duplicate taxonomy node id '{}'", id));
    }
  }

  for (const auto& [id, n] : tax.nodes_) {
    if (n.parent && !tax.nodes_.count(*n.parent)) {
      throw Error(ErrorCode::DanglingParent,
                  fmt::format("node '{}' names missing parent '{}'", id, *n.parent));
    }
  }

  // Parent chains: 0 = unvisited, 1 = on current walk, 2 = known to terminate.
  std::map<std::string, int> state;
  for (const auto& [start, unused] : tax.nodes_) {
    std::vector<const std::string*> walk;
    const std::string* cur = &start;
    while (true) {
      int& s = state[*cur];
      if (s == 2) break;
      if (s == 1) {
        throw Error(ErrorCode::CycleDetected, fmt::format("parent chain through '{}' loops", *cur));
      }
      s = 1;
      walk.push_back(cur);
      const auto& parent = tax.nodes_.at(*cur).parent;
      if (!parent) break;
      cur = &*parent;
    }
    for (const auto* id : walk) state[*id] = 2;
  }

  for (const auto& [id, n] : tax.nodes_) {
    if (!n.parent) continue;
    const ECNode& p = tax.nodes_.at(*n.parent);
    if (ordinal(n.level) <= ordinal(p.level)) {
      throw Error(ErrorCode::LevelInversion,
                  fmt::format("node '{}' ({}) sits under '{}' ({}); levels must strictly increase", id,
                              to_string(n.level), p.id, to_string(p.level)));
    }
  }

  std::vector<std::string> roots;
  for (const auto& [id, n] : tax.nodes_) {
    if (!n.parent) roots.push_back(id);
  }
  if (roots.size() > 1) {
    throw Error(ErrorCode::MultipleRoots,
                fmt::format("taxonomy has {} parentless nodes ('{}', '{}', ...)", roots.size(), roots[0], roots[1]));
  }
  const ECNode& root = tax.nodes_.at(roots.front());
  if (root.level != ECLevel::Field) {
    throw Error(ErrorCode::InvalidRoot,
                fmt::format("root '{}' has level {}, expected Field", root.id, to_string(root.level)));
  }
  tax.root_ = root.id;

  for (const auto& [id, n] : tax.nodes_) {
    if (n.parent) tax.children_[*n.parent].push_back(id);
  }
  return tax;
}

}  // namespace evalrank
