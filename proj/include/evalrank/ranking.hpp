#pragma once

#include <map>
#include <string>
#include <vector>

#include "evalrank/corpus.hpp"
#include "evalrank/pruning.hpp"
#include "evalrank/relations.hpp"

namespace evalrank {

struct RankParams {
  double pioneering_weight = 0.2;
  double first_author_ratio = 0.3;
  double corresponding_author_ratio = 0.3;
  // Nested pioneers pass their own bonus upward. When false a pioneer's
  // bonus counts each selected descendant at the base score only.
  bool compound_bonuses = true;
};

// Throws Error{ConfigError}.
void validate_params(const RankParams& params);

using ScoreMap = std::map<std::string, double>;

// Base 1.0 per selected achievement; each selected pioneer adds
// pioneering_weight times the scores of the selected achievements it reaches
// through Progressive edges inside the selection. Throws
// Error{CycleDetected} if those edges do not form a DAG.
ScoreMap score_achievements(const PragmaticEM& selected, const RelationGraph& graph, const RankParams& params);

// Splits one achievement's score over its authors:
//  - three or fewer authors, or every author flagged EqualContribution: equal shares;
//  - otherwise first-author and corresponding-author ratios go to the flagged
//    authors (position 1 / the last position when nobody is flagged) and the
//    remainder is shared by everybody else.
// A person holding both roles receives both ratios.
ScoreMap contributor_shares(const Achievement& a, double score, const RankParams& params);

// achievement id -> (person id -> share)
using SharesByAchievement = std::map<std::string, ScoreMap>;

// Each per-achievement share is divided evenly over the institutions the
// contributor listed on that achievement. Throws Error{UnknownInstitution}.
ScoreMap institution_rollup(const Corpus& corpus, const SharesByAchievement& shares);

struct RankedEntry {
  std::string id;
  std::string name;
  double score = 0.0;
  int rank = 0;        // 1-based position after tie-breaking
  bool tied = false;   // same score as a neighbour; order came from the tie-break
};

struct RankingReport {
  ScoreMap achievement_scores;
  ScoreMap contributor_scores;
  ScoreMap institution_scores;
  SharesByAchievement shares;
  std::vector<RankedEntry> achievements;
  std::vector<RankedEntry> contributors;
  std::vector<RankedEntry> institutions;
};

// Orders each table by score descending, then the earliest end date of the
// entity's first selected achievement, then id.
RankingReport rank_report(const Corpus& corpus, const PragmaticEM& selected, const RelationGraph& graph,
                          const RankParams& params);

std::string report_to_json(const RankingReport& report);
// Columns id,name,score,rank with a header row and LF line endings.
std::string table_to_csv(const std::vector<RankedEntry>& table);
std::string report_to_text(const RankingReport& report);

// Score formatting shared by CSV and text output.
std::string format_score(double score);

}  // namespace evalrank
