#include "evalrank/baselines.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "evalrank/error.hpp"

namespace evalrank {

std::int64_t h_index(std::span<const std::int64_t> citations) {
  std::vector<std::int64_t> sorted(citations.begin(), citations.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::int64_t h = 0;
  while (h < static_cast<std::int64_t>(sorted.size()) && sorted[static_cast<std::size_t>(h)] >= h + 1) ++h;
  return h;
}

double impact_factor(const JournalYearRecord& record) {
  const std::int64_t items =
      std::accumulate(record.citable_items_per_year.begin(), record.citable_items_per_year.end(), std::int64_t{0});
  if (items <= 0) {
    throw Error(ErrorCode::UndefinedDenominator, "impact factor undefined: no citable items in the window");
  }
  return static_cast<double>(record.citations_in_year) / static_cast<double>(items);
}

std::vector<CitationRank> citation_ranking(const Corpus& corpus) {
  std::vector<CitationRank> out;
  for (const auto& a : corpus.achievements()) {
    out.push_back({a.id, a.publication ? a.publication->citation_count : 0, a.publication.has_value()});
  }
  std::sort(out.begin(), out.end(), [](const CitationRank& x, const CitationRank& y) {
    if (x.published != y.published) return x.published;
    if (x.citations != y.citations) return x.citations > y.citations;
    return x.id < y.id;
  });
  return out;
}

std::vector<std::pair<std::string, std::int64_t>> venue_count_ranking(const Corpus& corpus,
                                                                      const std::set<std::string>& venues) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& a : corpus.achievements()) {
    const bool match = a.publication && venues.count(a.publication->venue);
    for (const auto& c : a.contributors) counts[c.person] += match ? 1 : 0;
  }
  std::vector<std::pair<std::string, std::int64_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  return out;
}

}  // namespace evalrank
