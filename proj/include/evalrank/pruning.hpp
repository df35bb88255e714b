#pragma once

#include <string>
#include <vector>

#include "evalrank/corpus.hpp"
#include "evalrank/evolution.hpp"
#include "evalrank/relations.hpp"

namespace evalrank {

// Top N @X @Y parameters.
struct PruneConfig {
  int n = 100;
  double pioneering_fraction = 0.4;
  double progressive_fraction = 0.6;
  TimeInterval timeframe = parse_timeframe("1940s:2023");
  std::string field;  // empty selects the taxonomy root
};

// Throws Error{ConfigError} for n < 1, fractions outside [0,1] or not summing
// to 1 within 1e-9.
void validate_config(const PruneConfig& config);

// Half-up rounding of a nonnegative value.
int round_half_up(double value);

// V = sum of log10(X_i) over Positive dims minus the same over Negative dims.
// Throws Error{NonPositiveDim}.
double significance_value(const Achievement& a);

// How an achievement takes part in the filtering rounds.
enum class PruneClass { Pioneer = 0, Progressive = 1, Auxiliary = 2, Unlinked = 3 };

std::string_view to_string(PruneClass c);

struct RoundRecord {
  int round = 0;
  std::string rule;
  std::vector<std::string> kept;
  std::vector<std::string> removed;
  std::vector<std::string> rationale;  // one line per V comparison
};

struct PragmaticEM {
  std::vector<std::string> selected;  // selection order: rounds 1-4, then backfill
  std::vector<RoundRecord> round_log;  // always four records
  std::vector<std::string> backfill;   // added by the final iterative step
  PruneConfig config;
  int pioneer_budget = 0;       // after surplus transfer
  int progressive_budget = 0;   // after surplus transfer
  std::size_t candidates = 0;   // achievements inside (X, Y)
};

// Reduces the traced corpus to the top-N pragmatic model. The corpus is
// filtered to (timeframe, field) first and the graph restricted to the
// survivors. Throws Error{CoherenceError} when graph or trace were built
// from another corpus, Error{ConfigError} for bad parameters.
PragmaticEM prune(const Corpus& corpus, const RelationGraph& graph, const EvolutionTrace& trace,
                  const PruneConfig& config);

std::string pragmatic_to_json(const PragmaticEM& em);
std::string explain(const PragmaticEM& em);

}  // namespace evalrank
