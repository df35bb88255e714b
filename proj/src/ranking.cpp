#include "evalrank/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "evalrank/error.hpp"

namespace evalrank {

namespace {

constexpr double kTieEpsilon = 1e-9;

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct RankKey {
  std::string id;
  std::string name;
  double score;
  Date first_end;
};

std::vector<RankedEntry> order_table(std::vector<RankKey> keys) {
  std::sort(keys.begin(), keys.end(), [](const RankKey& x, const RankKey& y) {
    if (std::abs(x.score - y.score) > kTieEpsilon) return x.score > y.score;
    if (x.first_end != y.first_end) return x.first_end < y.first_end;
    return x.id < y.id;
  });
  std::vector<RankedEntry> out;
  out.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out.push_back({keys[i].id, keys[i].name, keys[i].score, static_cast<int>(i) + 1, false});
  }
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    if (std::abs(out[i].score - out[i + 1].score) <= kTieEpsilon) out[i].tied = out[i + 1].tied = true;
  }
  return out;
}

}  // namespace

void validate_params(const RankParams& params) {
  if (!(params.pioneering_weight >= 0.0) || !std::isfinite(params.pioneering_weight)) {
    throw Error(ErrorCode::ConfigError, "pioneering weight must be a nonnegative number");
  }
  if (!in_unit(params.first_author_ratio) || !in_unit(params.corresponding_author_ratio) ||
      params.first_author_ratio + params.corresponding_author_ratio > 1.0 + 1e-12) {
    throw Error(ErrorCode::ConfigError,
                "author ratios must lie in [0, 1] and the first + corresponding ratios must not exceed 1");
  }
}

ScoreMap score_achievements(const PragmaticEM& selected, const RelationGraph& graph, const RankParams& params) {
  validate_params(params);
  const std::set<std::string> chosen(selected.selected.begin(), selected.selected.end());

  std::map<std::string, std::vector<std::string>> out_edges;
  std::map<std::string, int> indegree;
  for (const auto& id : chosen) indegree[id] = 0;
  for (const auto& e : graph.edges) {
    if (e.kind != RelationKind::Progressive || !chosen.count(e.from) || !chosen.count(e.to)) continue;
    out_edges[e.from].push_back(e.to);
    ++indegree[e.to];
  }

  // Kahn's algorithm; the ready set is ordered so the result is stable.
  std::set<std::string> ready;
  for (const auto& [id, d] : indegree) {
    if (d == 0) ready.insert(id);
  }
  std::vector<std::string> topo;
  while (!ready.empty()) {
    std::string id = *ready.begin();
    ready.erase(ready.begin());
    for (const auto& next : out_edges[id]) {
      if (--indegree[next] == 0) ready.insert(next);
    }
    topo.push_back(std::move(id));
  }
  if (topo.size() != chosen.size()) {
    throw Error(ErrorCode::CycleDetected, "progressive edges among the selected achievements contain a cycle");
  }

  ScoreMap scores;
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    double score = 1.0;
    if (graph.is_pioneer(*it)) {
      std::set<std::string> reached;
      std::vector<std::string> stack(out_edges[*it].begin(), out_edges[*it].end());
      while (!stack.empty()) {
        std::string cur = std::move(stack.back());
        stack.pop_back();
        if (!reached.insert(cur).second) continue;
        for (const auto& next : out_edges[cur]) stack.push_back(next);
      }
      double aggregate = 0.0;
      for (const auto& d : reached) aggregate += params.compound_bonuses ? scores.at(d) : 1.0;
      score += params.pioneering_weight * aggregate;
    }
    scores[*it] = score;
  }
  return scores;
}

ScoreMap contributor_shares(const Achievement& a, double score, const RankParams& params) {
  if (a.contributors.empty()) {
    throw Error(ErrorCode::NoContributors, fmt::format("achievement '{}' has no contributors", a.id));
  }
  const auto& authors = a.contributors;
  const std::size_t k = authors.size();
  ScoreMap shares;
  for (const auto& c : authors) shares[c.person] = 0.0;

  const bool all_equal =
      std::all_of(authors.begin(), authors.end(), [](const Contributor& c) { return c.has(Role::EqualContribution); });
  if (k <= 3 || all_equal) {
    for (const auto& c : authors) shares[c.person] = score / static_cast<double>(k);
    return shares;
  }

  std::vector<const Contributor*> firsts, corresponding, remaining;
  for (const auto& c : authors) {
    if (c.has(Role::FirstAuthor)) firsts.push_back(&c);
    if (c.has(Role::CorrespondingAuthor)) corresponding.push_back(&c);
  }
  const auto by_position = [](const Contributor& x, const Contributor& y) { return x.position < y.position; };
  if (firsts.empty()) firsts.push_back(&*std::min_element(authors.begin(), authors.end(), by_position));
  if (corresponding.empty()) corresponding.push_back(&*std::max_element(authors.begin(), authors.end(), by_position));
  for (const auto& c : authors) {
    const bool has_role = std::find(firsts.begin(), firsts.end(), &c) != firsts.end() ||
                          std::find(corresponding.begin(), corresponding.end(), &c) != corresponding.end();
    if (!has_role) remaining.push_back(&c);
  }

  for (const auto* c : firsts) shares[c->person] += score * params.first_author_ratio / static_cast<double>(firsts.size());
  for (const auto* c : corresponding) {
    shares[c->person] += score * params.corresponding_author_ratio / static_cast<double>(corresponding.size());
  }
  const double rest = score * (1.0 - params.first_author_ratio - params.corresponding_author_ratio);
  if (!remaining.empty()) {
    for (const auto* c : remaining) shares[c->person] += rest / static_cast<double>(remaining.size());
  } else {
    for (const auto& c : authors) shares[c.person] += rest / static_cast<double>(k);
  }
  return shares;
}

ScoreMap institution_rollup(const Corpus& corpus, const SharesByAchievement& shares) {
  ScoreMap totals;
  for (const auto& [achievement_id, per_person] : shares) {
    const Achievement& a = corpus.at(achievement_id);
    for (const auto& c : a.contributors) {
      auto share = per_person.find(c.person);
      if (share == per_person.end()) continue;
      for (const auto& inst : c.institutions) {
        if (!corpus.institutions().count(inst)) {
          throw Error(ErrorCode::UnknownInstitution,
                      fmt::format("achievement '{}': unknown institution '{}'", a.id, inst));
        }
        totals[inst] += share->second / static_cast<double>(c.institutions.size());
      }
    }
  }
  return totals;
}

RankingReport rank_report(const Corpus& corpus, const PragmaticEM& selected, const RelationGraph& graph,
                          const RankParams& params) {
  RankingReport report;
  report.achievement_scores = score_achievements(selected, graph, params);

  std::map<std::string, std::string> person_name;
  std::map<std::string, Date> person_first_end, institution_first_end;
  for (const auto& [id, score] : report.achievement_scores) {
    const Achievement& a = corpus.at(id);
    ScoreMap shares = contributor_shares(a, score, params);
    for (const auto& [person, share] : shares) report.contributor_scores[person] += share;
    for (const auto& c : a.contributors) {
      person_name.emplace(c.person, c.name);
      auto [pit, fresh] = person_first_end.emplace(c.person, a.interval.end);
      if (!fresh) pit->second = std::min(pit->second, a.interval.end);
      for (const auto& inst : c.institutions) {
        auto [iit, ifresh] = institution_first_end.emplace(inst, a.interval.end);
        if (!ifresh) iit->second = std::min(iit->second, a.interval.end);
      }
    }
    report.shares.emplace(id, std::move(shares));
  }
  report.institution_scores = institution_rollup(corpus, report.shares);

  std::vector<RankKey> keys;
  for (const auto& [id, score] : report.achievement_scores) {
    const Achievement& a = corpus.at(id);
    keys.push_back({id, a.title, score, a.interval.end});
  }
  report.achievements = order_table(std::move(keys));

  keys.clear();
  for (const auto& [person, score] : report.contributor_scores) {
    keys.push_back({person, person_name.at(person), score, person_first_end.at(person)});
  }
  report.contributors = order_table(std::move(keys));

  keys.clear();
  for (const auto& [inst, score] : report.institution_scores) {
    keys.push_back({inst, corpus.institutions().at(inst), score, institution_first_end.at(inst)});
  }
  report.institutions = order_table(std::move(keys));
  return report;
}

std::string format_score(double score) { return fmt::format("{:.6f}", score); }

std::string report_to_json(const RankingReport& report) {
  using nlohmann::json;
  auto table = [](const std::vector<RankedEntry>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
      out.push_back({{"id", r.id}, {"name", r.name}, {"score", r.score}, {"rank", r.rank}, {"tied", r.tied}});
    }
    return out;
  };
  return json{{"achievements", table(report.achievements)},
              {"contributors", table(report.contributors)},
              {"institutions", table(report.institutions)}}
      .dump(2);
}

std::string table_to_csv(const std::vector<RankedEntry>& table) {
  std::string out = "id,name,score,rank\n";
  for (const auto& r : table) {
    out += fmt::format("{},{},{},{}\n", csv_field(r.id), csv_field(r.name), format_score(r.score), r.rank);
  }
  return out;
}

std::string report_to_text(const RankingReport& report) {
  std::string out;
  auto section = [&](const char* title, const std::vector<RankedEntry>& rows) {
    out += fmt::format("{} ({})\n", title, rows.size());
    for (const auto& r : rows) {
      out += fmt::format("  {:>4}{} {:>10}  {}  [{}]\n", r.rank, r.tied ? "=" : " ", format_score(r.score), r.name,
                         r.id);
    }
  };
  section("Achievements", report.achievements);
  out += '\n';
  section("Contributors", report.contributors);
  out += '\n';
  section("Institutions", report.institutions);
  return out;
}

}  // namespace evalrank
