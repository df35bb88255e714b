#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "evalrank/dates.hpp"
#include "evalrank/taxonomy.hpp"

namespace evalrank {

enum class Role { FirstAuthor, CorrespondingAuthor, EqualContribution };

std::string_view to_string(Role role);

struct Contributor {
  std::string person;
  std::string name;
  int position = 1;  // 1-based author position
  std::set<Role> roles;
  std::vector<std::string> institutions;  // affiliations at contribution time

  bool has(Role r) const { return roles.count(r) != 0; }
  friend bool operator==(const Contributor&, const Contributor&) = default;
};

enum class Orientation { Positive, Negative };

struct SignificanceDim {
  std::string name;
  double value = 1.0;  // X_i, strictly positive
  Orientation orientation = Orientation::Positive;

  friend bool operator==(const SignificanceDim&, const SignificanceDim&) = default;
};

struct Publication {
  std::string venue;
  std::int64_t citation_count = 0;

  friend bool operator==(const Publication&, const Publication&) = default;
};

struct Achievement {
  std::string id;
  std::string title;
  TimeInterval interval;
  std::set<std::string> ec_mapping;           // EC(a)
  std::string key_problem;                    // Q(a)
  std::set<std::string> references;           // R(a), key references only
  std::vector<Contributor> contributors;      // ordered by position
  std::vector<SignificanceDim> dims;
  std::set<std::string> introduces_ec_nodes;
  std::optional<Publication> publication;

  friend bool operator==(const Achievement&, const Achievement&) = default;
};

struct IngestOptions {
  // Ignore unknown object keys instead of rejecting them.
  bool lenient = false;
};

// Validated, immutable set of achievements over one taxonomy. Achievements
// are held sorted by id.
class Corpus {
 public:
  const Taxonomy& taxonomy() const { return taxonomy_; }
  const std::vector<Achievement>& achievements() const { return achievements_; }
  const std::map<std::string, std::string>& institutions() const { return institutions_; }

  std::size_t size() const { return achievements_.size(); }
  bool empty() const { return achievements_.empty(); }
  bool contains(std::string_view id) const;

  // Throws Error{UnknownAchievement}.
  const Achievement& at(std::string_view id) const;
  std::size_t index_of(std::string_view id) const;

  // Content hash of the normalized corpus.
  std::uint64_t digest() const { return digest_; }

  // Checks every corpus invariant and computes the digest. Used by
  // ingestion, filtering and test generators.
  static Corpus assemble(Taxonomy taxonomy, std::vector<Achievement> achievements,
                         std::map<std::string, std::string> institutions);

 private:
  Taxonomy taxonomy_;
  std::vector<Achievement> achievements_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::string> institutions_;
  std::uint64_t digest_ = 0;
};

// Parses and validates a corpus JSON document. Errors: ParseError (with
// line/column), SchemaError (with JSON path), ReferentialError,
// TemporalError, DuplicateIntroducer, NonPositiveDim, ConstraintError, and
// any taxonomy validation error.
Corpus ingest_corpus(std::string_view document, const IngestOptions& options = {});
Corpus load_corpus_file(const std::string& path, const IngestOptions& options = {});

// Achievements whose interval intersects the timeframe and whose EC mapping
// touches the field's subtree. References to dropped achievements are pruned.
Corpus filter_corpus(const Corpus& corpus, const TimeInterval& timeframe, std::string_view field);

// Every achievement that transitively cites a.
std::set<std::string> citation_closure(const Corpus& corpus, std::string_view id);

// Canonical JSON form of the corpus (dates normalized to YYYY-MM-DD,
// achievements sorted by id). The digest hashes its compact dump.
std::string canonical_json(const Corpus& corpus);

std::string format_digest(std::uint64_t digest);

}  // namespace evalrank
