#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evalrank/corpus.hpp"

namespace evalrank {

// Largest h such that h publications have at least h citations each.
std::int64_t h_index(std::span<const std::int64_t> citations);

struct JournalYearRecord {
  std::int64_t citations_in_year = 0;                 // C
  std::vector<std::int64_t> citable_items_per_year;   // P_i over the preceding window
};

// C / sum(P_i). Throws Error{UndefinedDenominator} when the sum is zero.
double impact_factor(const JournalYearRecord& record);

struct CitationRank {
  std::string id;
  std::int64_t citations = 0;
  bool published = false;
};

// Descending citation count; unpublished achievements rank last (count 0);
// ties by id.
std::vector<CitationRank> citation_ranking(const Corpus& corpus);

// Achievements published at one of `venues`, counted per contributor.
// Every contributor in the corpus appears; descending count, ties by id.
std::vector<std::pair<std::string, std::int64_t>> venue_count_ranking(const Corpus& corpus,
                                                                      const std::set<std::string>& venues);

}  // namespace evalrank
