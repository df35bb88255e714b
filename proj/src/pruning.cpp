#include "evalrank/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "evalrank/error.hpp"

namespace evalrank {

std::string_view to_string(PruneClass c) {
  switch (c) {
    case PruneClass::Pioneer: return "pioneer";
    case PruneClass::Progressive: return "progressive";
    case PruneClass::Auxiliary: return "auxiliary";
    case PruneClass::Unlinked: return "unlinked";
  }
  return "?";
}

void validate_config(const PruneConfig& config) {
  if (config.n < 1) throw Error(ErrorCode::ConfigError, fmt::format("N must be positive, got {}", config.n));
  auto in_unit = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (!in_unit(config.pioneering_fraction) || !in_unit(config.progressive_fraction)) {
    throw Error(ErrorCode::ConfigError, "pioneering and progressive fractions must lie in [0, 1]");
  }
  if (std::abs(config.pioneering_fraction + config.progressive_fraction - 1.0) > 1e-9) {
    throw Error(ErrorCode::ConfigError,
                fmt::format("fractions must add up to 1 (got {} + {})", config.pioneering_fraction,
                            config.progressive_fraction));
  }
  if (config.timeframe.end < config.timeframe.begin) {
    throw Error(ErrorCode::ConfigError, "timeframe begins after it ends");
  }
}

int round_half_up(double value) { return static_cast<int>(std::floor(value + 0.5)); }

double significance_value(const Achievement& a) {
  double v = 0.0;
  for (const auto& d : a.dims) {
    if (!(d.value > 0.0)) {
      throw Error(ErrorCode::NonPositiveDim,
                  fmt::format("achievement '{}': dimension '{}' has non-positive value {}", a.id, d.name, d.value));
    }
    const double lg = std::log10(d.value);
    v += d.orientation == Orientation::Positive ? lg : -lg;
  }
  return v;
}

namespace {

struct Item {
  const Achievement* a = nullptr;
  double v = 0.0;
  PruneClass cls = PruneClass::Unlinked;

  const std::string& id() const { return a->id; }
  const std::string& group() const { return a->key_problem; }
};

// Within-group order: V descending, then earlier end, then id.
bool ranks_before(const Item* x, const Item* y) {
  if (x->v != y->v) return x->v > y->v;
  if (x->a->interval.end != y->a->interval.end) return x->a->interval.end < y->a->interval.end;
  return x->id() < y->id();
}

// Cross-group tie rule: earlier end, then id.
bool earlier_then_id(const Item* x, const Item* y) {
  if (x->a->interval.end != y->a->interval.end) return x->a->interval.end < y->a->interval.end;
  return x->id() < y->id();
}

using Groups = std::map<std::string, std::vector<const Item*>>;

class Pruner {
 public:
  Pruner(const Corpus& filtered, const RelationGraph& graph) {
    std::set<std::string> progressive_ids;
    for (const auto& e : graph.edges) {
      if (e.kind == RelationKind::Progressive) {
        progressive_ids.insert(e.from);
        progressive_ids.insert(e.to);
      } else {
        aux_links_[e.from].insert(e.to);
        aux_links_[e.to].insert(e.from);
      }
    }
    items_.reserve(filtered.size());
    for (const auto& a : filtered.achievements()) {
      Item it{&a, significance_value(a), PruneClass::Unlinked};
      if (graph.is_pioneer(a.id)) {
        it.cls = PruneClass::Pioneer;
      } else if (progressive_ids.count(a.id)) {
        it.cls = PruneClass::Progressive;
      } else if (aux_links_.count(a.id)) {
        it.cls = PruneClass::Auxiliary;
      }
      items_.push_back(it);
    }
  }

  Groups groups_of(PruneClass cls) const {
    Groups g;
    for (const auto& it : items_) {
      if (it.cls == cls) g[it.group()].push_back(&it);
    }
    for (auto& [q, members] : g) std::sort(members.begin(), members.end(), ranks_before);
    return g;
  }

  std::size_t count(PruneClass cls) const {
    return static_cast<std::size_t>(
        std::count_if(items_.begin(), items_.end(), [&](const Item& it) { return it.cls == cls; }));
  }

  // Rounds 1 and 3: relax a uniform per-group quota until the target is met.
  std::vector<const Item*> select_primary(PruneClass cls, int budget, RoundRecord& log) const {
    const Groups groups = groups_of(cls);
    std::size_t total = 0;
    for (const auto& [q, m] : groups) total += m.size();
    const std::size_t target = std::min<std::size_t>(total, static_cast<std::size_t>(std::max(budget, 0)));

    auto filled = [&](std::size_t quota) {
      std::size_t c = 0;
      for (const auto& [q, m] : groups) c += std::min(quota, m.size());
      return c;
    };
    std::size_t quota = 0;
    while (filled(quota + 1) <= target && filled(quota + 1) > filled(quota)) ++quota;

    std::vector<const Item*> chosen;
    for (std::size_t level = 0; level < quota; ++level) {
      std::vector<const Item*> tier;
      for (const auto& [q, m] : groups) {
        if (level < m.size()) tier.push_back(m[level]);
      }
      std::sort(tier.begin(), tier.end(), earlier_then_id);
      chosen.insert(chosen.end(), tier.begin(), tier.end());
    }
    // Partial last level when the budget falls between two quotas.
    std::vector<const Item*> partial;
    for (const auto& [q, m] : groups) {
      if (quota < m.size()) partial.push_back(m[quota]);
    }
    std::sort(partial.begin(), partial.end(), earlier_then_id);
    for (std::size_t i = 0; i < partial.size() && chosen.size() < target; ++i) chosen.push_back(partial[i]);

    const std::set<const Item*> kept(chosen.begin(), chosen.end());
    for (const auto& [q, m] : groups) {
      const Item* weakest = nullptr;
      for (const Item* it : m) {
        if (kept.count(it)) weakest = it;
      }
      for (const Item* it : m) {
        if (kept.count(it)) continue;
        log.removed.push_back(it->id());
        if (weakest) {
          log.rationale.push_back(fmt::format("{}: V={:.6f} ranks below kept {} (V={:.6f}) in group {}", it->id(),
                                              it->v, weakest->id(), weakest->v, q));
        } else {
          log.rationale.push_back(
              fmt::format("{}: V={:.6f}; group {} received no quota (budget {})", it->id(), it->v, q, target));
        }
      }
    }
    for (const Item* it : chosen) log.kept.push_back(it->id());
    return chosen;
  }

  // Rounds 2 and 4: auxiliary achievements linked to survivors that are at
  // least as significant as the weakest survivor of their group.
  // With enforce_cutoff off (supply already fits in N) every linked peer is admitted.
  std::vector<const Item*> admit_auxiliary(const std::vector<const Item*>& survivors, int budget,
                                           const std::set<std::string>& taken, RoundRecord* log,
                                           bool enforce_cutoff = true) const {
    std::set<std::string> survivor_ids;
    std::map<std::string, double> cutoff;
    for (const Item* s : survivors) {
      survivor_ids.insert(s->id());
      auto [it, fresh] = cutoff.emplace(s->group(), s->v);
      if (!fresh) it->second = std::min(it->second, s->v);
    }
    auto linked = [&](const Item* it) {
      auto l = aux_links_.find(it->id());
      if (l == aux_links_.end()) return false;
      return std::any_of(l->second.begin(), l->second.end(),
                         [&](const std::string& n) { return survivor_ids.count(n) != 0; });
    };

    std::vector<std::vector<const Item*>> admissible;
    std::vector<std::string> removed, rationale;
    for (const auto& [q, members] : groups_of(PruneClass::Auxiliary)) {
      auto c = cutoff.find(q);
      if (c == cutoff.end()) continue;
      std::vector<const Item*> ok;
      bool open = true;
      for (const Item* it : members) {
        if (taken.count(it->id())) continue;
        const bool is_linked = linked(it);
        if (open && is_linked && (!enforce_cutoff || it->v >= c->second)) {
          ok.push_back(it);
          continue;
        }
        open = false;
        if (!is_linked) continue;
        removed.push_back(it->id());
        rationale.push_back(it->v < c->second
                                ? fmt::format("{}: V={:.6f} below group {} survivor minimum {:.6f}", it->id(), it->v,
                                              q, c->second)
                                : fmt::format("{}: V={:.6f} ranks below a rejected peer in group {}", it->id(),
                                              it->v, q));
      }
      if (!ok.empty()) admissible.push_back(std::move(ok));
    }

    std::vector<const Item*> order;
    for (std::size_t level = 0;; ++level) {
      std::vector<const Item*> tier;
      for (const auto& g : admissible) {
        if (level < g.size()) tier.push_back(g[level]);
      }
      if (tier.empty()) break;
      std::sort(tier.begin(), tier.end(), earlier_then_id);
      order.insert(order.end(), tier.begin(), tier.end());
    }
    const std::size_t room = static_cast<std::size_t>(std::max(budget, 0));
    std::vector<const Item*> chosen(order.begin(), order.begin() + std::min(room, order.size()));
    if (log) {
      for (const Item* it : chosen) log->kept.push_back(it->id());
      for (std::size_t i = chosen.size(); i < order.size(); ++i) {
        log->removed.push_back(order[i]->id());
        log->rationale.push_back(
            fmt::format("{}: admissible (V={:.6f}) but the budget of this side is exhausted", order[i]->id(), order[i]->v));
      }
      log->removed.insert(log->removed.end(), removed.begin(), removed.end());
      log->rationale.insert(log->rationale.end(), rationale.begin(), rationale.end());
    }
    return chosen;
  }

  // Largest number of achievements a side could contribute on its own.
  std::size_t max_fill(PruneClass primary) const {
    std::vector<const Item*> all;
    for (const auto& it : items_) {
      if (it.cls == primary) all.push_back(&it);
    }
    return all.size() + admit_auxiliary(all, static_cast<int>(items_.size()), {}, nullptr).size();
  }

  std::vector<const Item*> backfill(const std::set<std::string>& taken, std::size_t need) const {
    std::map<std::pair<PruneClass, std::string>, std::vector<const Item*>> rest;
    for (const auto& it : items_) {
      if (!taken.count(it.id())) rest[{it.cls, it.group()}].push_back(&it);
    }
    struct Slot {
      const Item* it;
      std::size_t level;
    };
    std::vector<Slot> slots;
    for (auto& [key, members] : rest) {
      std::sort(members.begin(), members.end(), ranks_before);
      for (std::size_t i = 0; i < members.size(); ++i) slots.push_back({members[i], i});
    }
    std::sort(slots.begin(), slots.end(), [](const Slot& x, const Slot& y) {
      if (x.it->cls != y.it->cls) return x.it->cls < y.it->cls;
      if (x.level != y.level) return x.level < y.level;
      return earlier_then_id(x.it, y.it);
    });
    std::vector<const Item*> out;
    for (std::size_t i = 0; i < slots.size() && out.size() < need; ++i) out.push_back(slots[i].it);
    return out;
  }

  std::size_t size() const { return items_.size(); }

 private:
  std::vector<Item> items_;
  std::map<std::string, std::set<std::string>> aux_links_;
};

RelationGraph restrict_graph(const RelationGraph& graph, const Corpus& filtered) {
  RelationGraph out;
  out.corpus_digest = filtered.digest();
  for (const auto& p : graph.pioneers) {
    if (filtered.contains(p)) out.pioneers.push_back(p);
  }
  for (const auto& e : graph.edges) {
    if (filtered.contains(e.from) && filtered.contains(e.to)) out.edges.push_back(e);
  }
  return out;
}

}  // namespace

PragmaticEM prune(const Corpus& corpus, const RelationGraph& graph, const EvolutionTrace& trace,
                  const PruneConfig& config) {
  validate_config(config);
  if (graph.corpus_digest != corpus.digest() || trace.corpus_digest != corpus.digest()) {
    throw Error(ErrorCode::CoherenceError, "relation graph, evolution trace and corpus do not belong together");
  }
  PragmaticEM em;
  em.config = config;
  if (em.config.field.empty()) em.config.field = corpus.taxonomy().root();

  const Corpus filtered = filter_corpus(corpus, em.config.timeframe, em.config.field);
  const RelationGraph scoped = restrict_graph(graph, filtered);
  const Pruner pruner(filtered, scoped);
  em.candidates = filtered.size();

  const int n = config.n;
  const std::size_t n_eff = std::min<std::size_t>(static_cast<std::size_t>(n), filtered.size());
  const int pioneer_budget = round_half_up(n * config.pioneering_fraction);
  const int progressive_budget = n - pioneer_budget;

  // A side that cannot fill its share hands the surplus to the other side.
  const auto max_progressive = static_cast<int>(pruner.max_fill(PruneClass::Progressive));
  const auto max_pioneer = static_cast<int>(pruner.max_fill(PruneClass::Pioneer));
  em.progressive_budget =
      std::min(max_progressive, progressive_budget + std::max(0, pioneer_budget - max_pioneer));
  em.pioneer_budget = std::min(max_pioneer, pioneer_budget + std::max(0, progressive_budget - max_progressive));

  em.round_log.resize(4);
  em.round_log[0] = {1, "rank progressive achievements by V within each key-problem group", {}, {}, {}};
  em.round_log[1] = {2, "admit parallel / related-not-connected peers of round-1 survivors", {}, {}, {}};
  em.round_log[2] = {3, "rank pioneering achievements by V within each key-problem group", {}, {}, {}};
  em.round_log[3] = {4, "admit parallel / related-not-connected peers of round-3 survivors", {}, {}, {}};

  std::set<std::string> taken;
  auto take = [&](const std::vector<const Item*>& items) {
    for (const Item* it : items) {
      em.selected.push_back(it->id());
      taken.insert(it->id());
    }
  };

  // When every candidate fits in N there is nothing to filter: each round
  // keeps its whole class.
  const bool fits = filtered.size() <= static_cast<std::size_t>(n);
  const int all = static_cast<int>(filtered.size());
  const int progressive_room = fits ? all : em.progressive_budget;
  const int pioneer_room = fits ? all : em.pioneer_budget;

  const auto round1 = pruner.select_primary(PruneClass::Progressive, progressive_room, em.round_log[0]);
  take(round1);
  const auto round2 = pruner.admit_auxiliary(round1, progressive_room - static_cast<int>(round1.size()), taken,
                                             &em.round_log[1], !fits);
  take(round2);
  const auto round3 = pruner.select_primary(PruneClass::Pioneer, pioneer_room, em.round_log[2]);
  take(round3);
  const auto round4 = pruner.admit_auxiliary(round3, pioneer_room - static_cast<int>(round3.size()), taken,
                                             &em.round_log[3], !fits);
  take(round4);

  if (taken.size() < n_eff) {
    const auto extra = pruner.backfill(taken, n_eff - taken.size());
    take(extra);
    for (const Item* it : extra) em.backfill.push_back(it->id());
  }
  if (em.selected.size() != n_eff) {
    throw Error(ErrorCode::CoherenceError,
                fmt::format("pruning selected {} achievements, expected {}", em.selected.size(), n_eff));
  }
  return em;
}

std::string pragmatic_to_json(const PragmaticEM& em) {
  using nlohmann::json;
  json rounds = json::array();
  for (const auto& r : em.round_log) {
    rounds.push_back(
        {{"round", r.round}, {"rule", r.rule}, {"kept", r.kept}, {"removed", r.removed}, {"rationale", r.rationale}});
  }
  json cfg{{"n", em.config.n},
           {"pioneering_fraction", em.config.pioneering_fraction},
           {"progressive_fraction", em.config.progressive_fraction},
           {"timeframe", {em.config.timeframe.begin.iso(), em.config.timeframe.end.iso()}},
           {"field", em.config.field}};
  return json{{"config", cfg},
              {"candidates", em.candidates},
              {"pioneer_budget", em.pioneer_budget},
              {"progressive_budget", em.progressive_budget},
              {"selected", em.selected},
              {"round_log", rounds},
              {"backfill", em.backfill}}
      .dump(2);
}

static std::string id_list(std::string_view label, const std::vector<std::string>& ids) {
  if (ids.empty()) return fmt::format("{} (0)\n", label);
  return fmt::format("{} ({}): {}\n", label, ids.size(), fmt::join(ids, ", "));
}

std::string explain(const PragmaticEM& em) {
  std::string out = fmt::format(
      "Top {} @{}..{} @{}: {} candidates, pioneer budget {}, progressive budget {}\n", em.config.n,
      em.config.timeframe.begin.iso(), em.config.timeframe.end.iso(), em.config.field, em.candidates,
      em.pioneer_budget, em.progressive_budget);
  if (em.candidates <= static_cast<std::size_t>(em.config.n)) out += "All candidates fit within N; nothing is filtered.\n";
  for (const auto& r : em.round_log) {
    out += fmt::format("Round {}: {}\n", r.round, r.rule);
    out += id_list("  kept", r.kept);
    out += id_list("  removed", r.removed);
    for (const auto& line : r.rationale) out += fmt::format("    - {}\n", line);
  }
  out += id_list("Final step backfill", em.backfill);
  out += id_list("Selected", em.selected);
  return out;
}

}  // namespace evalrank
