// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "evalrank/baselines.hpp"
#include "evalrank/corpus.hpp"
#include "evalrank/evolution.hpp"
#include "evalrank/pruning.hpp"
#include "evalrank/ranking.hpp"
#include "evalrank/relations.hpp"
#include "support/testkit.hpp"

using namespace evalrank;
namespace tk = evalrank::testkit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects failure notes for one criterion.
struct Verdict {
  std::vector<std::string> failures;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok) ++failed;
  }
  int failed = 0;
};

int report(const std::string& name, const std::function<void(Verdict&)>& body) {
  Verdict v;
  try {
    body(v);
  } catch (const std::exception& e) {
    v.expect(false, fmt::format("unexpected exception: {}", e.what()));
  }
  const bool ok = v.failed == 0;
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name;
  if (!v.detail.empty()) std::cout << "  (" << v.detail << ")";
  std::cout << "\n";
  for (const auto& f : v.failures) std::cout << "      - " << f << "\n";
  std::cout.flush();
  return ok ? 0 : 1;
}

double sum(const ScoreMap& m) {
  return std::accumulate(m.begin(), m.end(), 0.0, [](double s, const auto& kv) { return s + kv.second; });
}

PragmaticEM prune_all(const Corpus& c, const RelationGraph& g, int n, double pf = 0.4) {
  PruneConfig cfg;
  cfg.n = n;
  cfg.pioneering_fraction = pf;
  cfg.progressive_fraction = 1.0 - pf;
  return prune(c, g, build_evolution_trace(c, g), cfg);
}

struct Process {
  int status;
  std::string output;
};

Process run_cli(const std::string& args) {
  const std::string cmd = fmt::format("'{}' {} 2>&1", EVALRANK_CLI_PATH, args);
  Process p{0, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, "popen failed"};
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) p.output.append(buf.data(), n);
  p.status = pclose(pipe);
  return p;
}

void relationship_fixture(Verdict& v) {
  const auto t0 = Clock::now();
  const Corpus c = tk::load_fixture("chip-mini.json");
  const RelationGraph g = classify_relationships(c);
  const double secs = seconds_since(t0);
  using K = RelationKind;
  const std::set<tk::EdgeTuple> expected{
      {"ISA", "CISC", K::Progressive},        {"ISA", "RISC", K::Progressive},
      {"RISC", "RISC-V", K::Progressive},     {"CISC", "X86", K::Progressive},
      {"LeNet", "AlexNet", K::Progressive},   {"GotoBLAS2", "OpenBLAS", K::Progressive},
      {"TPC-C", "CH-benCHmark", K::Progressive}, {"TPC-H", "CH-benCHmark", K::Progressive},
      {"Harvard", "VonNeumann", K::Parallel}, {"BERT", "GPT", K::Parallel},
      {"CentOS", "Ubuntu", K::Parallel},      {"BigBench", "BigDataBench", K::Parallel},
      {"TPC-C", "TPC-E", K::RelatedNotConnected}, {"CondConv", "DynamicConvolution", K::RelatedNotConnected}};
  const auto got = tk::to_oracle(g);
  v.expect(got.pioneers == std::set<std::string>{"ISA", "VonNeumann"}, "pioneer set differs");
  for (const auto& e : expected) {
    v.expect(got.edges.count(e) == 1, fmt::format("missing edge {} -> {}", std::get<0>(e), std::get<1>(e)));
  }
  for (const auto& e : got.edges) {
    v.expect(expected.count(e) == 1, fmt::format("spurious edge {} -> {} ({})", std::get<0>(e), std::get<1>(e),
                                                 to_string(std::get<2>(e))));
  }
  v.expect(secs < 1.0, fmt::format("took {:.3f}s", secs));
  v.detail = fmt::format("{} edges, 2 pioneers, {:.3f}s", got.edges.size(), secs);
}

void oracle_equivalence(Verdict& v) {
  std::mt19937_64 rng(2024);
  const auto t0 = Clock::now();
  std::size_t edges = 0;
  for (int trial = 0; trial < 200; ++trial) {
    tk::CorpusShape shape;
    shape.achievements = std::uniform_int_distribution<std::size_t>(0, 50)(rng);
    shape.key_problems = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    shape.cite_p = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const Corpus c = tk::random_corpus(rng, shape);
    const auto oracle = tk::oracle_classify(c);
    const auto fast = tk::to_oracle(classify_relationships(c));
    const auto serial = tk::to_oracle(classify_relationships_serial(c));
    v.expect(fast.edges == oracle.edges && fast.pioneers == oracle.pioneers,
             fmt::format("trial {}: parallel classifier differs from oracle", trial));
    v.expect(serial.edges == oracle.edges && serial.pioneers == oracle.pioneers,
             fmt::format("trial {}: serial classifier differs from oracle", trial));
    edges += oracle.edges.size();
  }
  const double secs = seconds_since(t0);
  v.expect(secs < 30.0, fmt::format("took {:.2f}s", secs));
  v.detail = fmt::format("200 corpora, {} oracle edges, {:.2f}s", edges, secs);
}

void many_to_one(Verdict& v) {
  const auto groups = many_to_one_groups(classify_relationships(tk::load_fixture("chip-mini.json")));
  v.expect(groups.size() == 1, fmt::format("{} groups", groups.size()));
  if (groups.size() == 1) {
    v.expect(groups[0].predecessors == std::set<std::string>{"TPC-C", "TPC-H"}, "predecessors differ");
    v.expect(groups[0].successor == "CH-benCHmark", "successor differs");
  }
}

void evolution(Verdict& v) {
  std::vector<Corpus> corpora;
  for (const char* f : {"chip-mini.json", "chip100-top.json", "table1.json"}) corpora.push_back(tk::load_fixture(f));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    tk::CorpusShape shape;
    shape.achievements = std::uniform_int_distribution<std::size_t>(0, 40)(rng);
    corpora.push_back(tk::random_corpus(rng, shape));
  }
  for (std::size_t ci = 0; ci < corpora.size(); ++ci) {
    const Corpus& c = corpora[ci];
    const RelationGraph g = classify_relationships(c);
    const EvolutionTrace t = build_evolution_trace(c, g);
    v.expect(t.size() == c.size(), fmt::format("corpus {}: trace length", ci));
    Snapshot prev = replay(t, 0);
    v.expect(prev.achievements.empty() && prev.graph.edges.empty(), fmt::format("corpus {}: replay(0) not empty", ci));
    for (std::size_t k = 1; k <= t.size(); ++k) {
      Snapshot cur = replay(t, k);
      v.expect(cur.achievements.size() == prev.achievements.size() + 1, fmt::format("corpus {}: step {} adds != 1", ci, k));
      const std::set<std::string> ids(cur.achievements.begin(), cur.achievements.end());
      bool mono = std::all_of(prev.achievements.begin(), prev.achievements.end(),
                              [&](const std::string& x) { return ids.count(x) != 0; });
      mono = mono && std::includes(cur.graph.edges.begin(), cur.graph.edges.end(), prev.graph.edges.begin(),
                                   prev.graph.edges.end());
      v.expect(mono, fmt::format("corpus {}: replay({}) not a superset of replay({})", ci, k, k - 1));
      prev = std::move(cur);
    }
    v.expect(graph_to_json(prev.graph) == graph_to_json(g), fmt::format("corpus {}: replay(n) differs from graph", ci));
  }
  v.detail = fmt::format("{} corpora", corpora.size());
}

void pruning_budget(Verdict& v) {
  std::mt19937_64 rng(40);
  for (int n : {5, 10, 100}) {
    const int pio_needed = static_cast<int>(std::ceil(n * 0.4));
    const int pro_needed = static_cast<int>(std::ceil(n * 0.6));
    const Corpus c = tk::budget_corpus(rng, pio_needed + n / 2 + 1, pro_needed + n / 2 + 1, 4);
    const RelationGraph g = classify_relationships(c);
    const PragmaticEM em = prune_all(c, g, n);
    const auto cls = tk::oracle_classes(c);
    const int pioneers = static_cast<int>(
        std::count_if(em.selected.begin(), em.selected.end(), [&](const std::string& id) { return cls.at(id) == 0; }));
    const int others = static_cast<int>(em.selected.size()) - pioneers;
    v.expect(pioneers == round_half_up(n * 0.4) && others == round_half_up(n * 0.6),
             fmt::format("N={}: {} pioneers + {} others", n, pioneers, others));
    v.expect(tk::dominance_violation(c, em.selected).empty(), fmt::format("N={}: dominance", n));
  }
  int violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    tk::CorpusShape shape;
    shape.achievements = std::uniform_int_distribution<std::size_t>(1, 45)(rng);
    shape.key_problems = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    shape.introduce_p = std::uniform_real_distribution<double>(0.0, 0.6)(rng);
    const Corpus c = tk::random_corpus(rng, shape);
    const int n = std::uniform_int_distribution<int>(1, static_cast<int>(c.size()))(rng);
    const double pf = std::uniform_int_distribution<int>(0, 10)(rng) / 10.0;
    const PragmaticEM em = prune_all(c, classify_relationships(c), n, pf);
    const std::string why = tk::dominance_violation(c, em.selected);
    if (!why.empty()) ++violations;
    v.expect(why.empty(), fmt::format("trial {}: {}", trial, why));
    v.expect(em.selected.size() == std::min<std::size_t>(static_cast<std::size_t>(n), c.size()),
             fmt::format("trial {}: selected {} of N={}", trial, em.selected.size(), n));
  }
  v.detail = fmt::format("N in {{5, 10, 100}}; dominance held in {}/500 trials", 500 - violations);
}

void scoring(Verdict& v) {
  const RankParams p;
  auto shares = [&](std::vector<std::set<Role>> roles) {
    Achievement a;
    a.id = "A";
    a.contributors = tk::authors(roles);
    return contributor_shares(a, 1.0, p);
  };
  auto near = [](double x, double y) { return std::abs(x - y) <= 1e-12; };
  const std::set<Role> first{Role::FirstAuthor}, corr{Role::CorrespondingAuthor};
  const auto r1 = shares({{}, {}});
  v.expect(near(r1.at("c1"), 0.5) && near(r1.at("c2"), 0.5), "rule 1 split");
  const auto r3 = shares({first, {}, {}, {}, corr});
  v.expect(near(r3.at("c1"), 0.3) && near(r3.at("c2"), 0.4 / 3) && near(r3.at("c3"), 0.4 / 3) &&
               near(r3.at("c4"), 0.4 / 3) && near(r3.at("c5"), 0.3),
           "rule 3 split (5 authors)");
  const auto co = shares({first, first, {}, corr});
  v.expect(near(co.at("c1"), 0.15) && near(co.at("c2"), 0.15) && near(co.at("c3"), 0.4) && near(co.at("c4"), 0.3),
           "rule 3 split (co-first)");

  RelationGraph g;
  g.pioneers = {"P"};
  g.edges = {{"P", "D", RelationKind::Progressive}};
  PragmaticEM em;
  em.selected = {"P", "D"};
  const double pioneer = score_achievements(em, g, p).at("P");
  v.expect(pioneer == 1.2, fmt::format("pioneer with one descendant scored {:.17g}", pioneer));

  std::mt19937_64 rng(500);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    tk::CorpusShape shape;
    shape.achievements = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
    shape.max_authors = 9;
    const Corpus c = tk::random_corpus(rng, shape);
    const RelationGraph rg = classify_relationships(c);
    const int n = std::uniform_int_distribution<int>(1, static_cast<int>(c.size()))(rng);
    RankParams params;
    params.first_author_ratio = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    params.corresponding_author_ratio = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    params.pioneering_weight = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const RankingReport r = rank_report(c, prune_all(c, rg, n), rg, params);
    const double d1 = std::abs(sum(r.contributor_scores) - sum(r.achievement_scores));
    const double d2 = std::abs(sum(r.institution_scores) - sum(r.contributor_scores));
    worst = std::max({worst, d1, d2});
    v.expect(d1 <= 1e-9 && d2 <= 1e-9, fmt::format("trial {}: mass drift {:.3g} / {:.3g}", trial, d1, d2));
  }
  v.detail = fmt::format("share rules at 1e-12, P=1.2, worst mass drift {:.2g} over 500 corpora", worst);
}

void baselines(Verdict& v) {
  std::mt19937_64 rng(10000);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<std::int64_t> f(std::uniform_int_distribution<std::size_t>(0, 60)(rng));
    const auto cap = std::uniform_int_distribution<std::int64_t>(0, 100)(rng);
    for (auto& x : f) x = std::uniform_int_distribution<std::int64_t>(0, cap)(rng);
    v.expect(h_index(f) == tk::oracle_h_index(f), fmt::format("h-index trial {}", trial));
  }
  for (int trial = 0; trial < 100; ++trial) {
    JournalYearRecord rec;
    rec.citations_in_year = std::uniform_int_distribution<std::int64_t>(0, 100000)(rng);
    const auto years = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    std::int64_t denom = 0;
    for (std::size_t y = 0; y < years; ++y) {
      rec.citable_items_per_year.push_back(std::uniform_int_distribution<std::int64_t>(y == 0 ? 1 : 0, 800)(rng));
      denom += rec.citable_items_per_year.back();
    }
    const double expected = static_cast<double>(rec.citations_in_year) / static_cast<double>(denom);
    v.expect(impact_factor(rec) == expected, fmt::format("impact factor record {}", trial));
  }

  const Corpus c = tk::load_fixture("table1.json");
  const auto ranking = citation_ranking(c);
  std::size_t first_unpublished = ranking.size();
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (!c.at(ranking[i].id).publication) {
      first_unpublished = std::min(first_unpublished, i);
    } else {
      v.expect(first_unpublished == ranking.size(), fmt::format("{} ranks below an unpublished entry", ranking[i].id));
    }
  }
  const RelationGraph g = classify_relationships(c);
  const RankingReport r = rank_report(c, prune_all(c, g, 100), g, {});
  std::set<std::string> ranked;
  for (const auto& e : r.achievements) ranked.insert(e.id);
  for (const char* id : {"linux-kernel", "git", "mysql", "x86", "tpc-c"}) {
    v.expect(!c.at(id).publication.has_value(), fmt::format("{} should be unpublished", id));
    v.expect(ranked.count(id) == 1, fmt::format("{} missing from the evaluatology table", id));
  }
  v.detail = fmt::format("10000 h-index vectors, 100 JIF records, {} unpublished ranked last by citations",
                         ranking.size() - first_unpublished);
}

void chip100(Verdict& v) {
  const Corpus c = tk::load_fixture("chip100-top.json");
  const RelationGraph g = classify_relationships(c);
  const RankingReport r = rank_report(c, prune_all(c, g, 100), g, {});
  std::set<std::string> top;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < std::min<std::size_t>(5, r.contributors.size()); ++i) {
    top.insert(r.contributors[i].name);
    names.push_back(r.contributors[i].name);
  }
  v.expect(top == std::set<std::string>{"John von Neumann", "Maurice Wilkes", "Frederick Brooks", "David A. Patterson",
                                        "Gene Amdahl"},
           "top-5 set differs");
  v.expect(r.contributors.size() > 5 && r.contributors[4].score > r.contributors[5].score,
           "fifth place is not separated from sixth");
  v.detail = fmt::format("{}", fmt::join(names, ", "));
}

void determinism(Verdict& v) {
  const std::vector<std::string> fixtures{"chip-mini.json", "chip100-top.json", "table1.json", "bad-dangling-ref.json",
                                          "bad-temporal.json"};
  const std::vector<std::string> commands{
      "validate {}",
      "validate {} --format json",
      "classify {}",
      "classify {} --format dot",
      "classify {} --format text",
      "trace {}",
      "trace {} --format text",
      "rank {}",
      "rank {} --n 6 --explain",
      "rank {} --n 5 --format json",
      "rank {} --format csv --table achievements",
      "rank {} --format csv --table contributors",
      "rank {} --format csv --table institutions",
      "compare {} --venues CVPR,MICRO",
      "compare {} --format json",
      "export {} --format dot"};
  int runs = 0;
  for (const auto& f : fixtures) {
    const std::string path = "'" + tk::fixture_path(f) + "'";
    for (const auto& pattern : commands) {
      const std::string args = fmt::format(fmt::runtime(pattern), path);
      const Process first = run_cli(args);
      for (int rep = 1; rep < 3; ++rep) {
        const Process again = run_cli(args);
        v.expect(again.status == first.status && again.output == first.output,
                 fmt::format("'{}' on {} differs on run {}", pattern, f, rep + 1));
      }
      runs += 3;
      const bool bad = f.rfind("bad-", 0) == 0;
      v.expect(bad ? first.status != 0 : first.status == 0, fmt::format("'{}' on {} exit status {}", pattern, f, first.status));
    }
  }
  v.detail = fmt::format("{} CLI invocations", runs);
}

}  // namespace

int main() {
  int failures = 0;
  failures += report("relationship fixture: chip-mini emits exactly the named instances in < 1 s", relationship_fixture);
  failures += report("oracle equivalence: 200 random corpora (<= 50 achievements) in < 30 s", oracle_equivalence);
  failures += report("many-to-one: chip-mini yields exactly ({TPC-C, TPC-H}, CH-benCHmark)", many_to_one);
  failures += report("evolution trace: single addition, monotonicity, exact replay on fixtures + 100 random", evolution);
  failures += report("pruning budget: exact 40/60 split for N in {5, 10, 100}; dominance in 500 trials", pruning_budget);
  failures += report("scoring arithmetic: share rules, mass conservation on 500 corpora, pioneer scores 1.2", scoring);
  failures += report("baselines: h-index oracle, impact factor, unpublished work ranked last by citations", baselines);
  failures += report("golden chip subset: top-5 contributors set", chip100);
  failures += report("determinism: every CLI command byte-identical over 3 runs on all fixtures", determinism);
  std::cout << (failures == 0 ? "all acceptance criteria passed" : fmt::format("{} criteria failed", failures)) << "\n";
  return failures == 0 ? 0 : 1;
}
