#include <doctest.h>

#include <algorithm>

#include <random>

#include "evalrank/corpus.hpp"
#include "evalrank/dates.hpp"
#include "support/checks.hpp"
#include "support/testkit.hpp"

using namespace evalrank;
using testkit::make_achievement;
using testkit::make_corpus;

namespace {

std::vector<ECNode> small_tax() {
  return {{"f", ECLevel::Field, "F", std::nullopt},
          {"q", ECLevel::Problem, "Q", "f"},
          {"m", ECLevel::AlgorithmMechanism, "M", "q"},
          {"inst", ECLevel::ProblemInstance, "I", "q"}};
}

std::set<std::string> ids_of(const Corpus& c) {
  std::set<std::string> out;
  for (const auto& a : c.achievements()) out.insert(a.id);
  return out;
}

}  // namespace

TEST_CASE("date tokens normalize to closed day intervals") {
  CHECK(parse_date_token("1940s", Bound::Begin).iso() == "1940-01-01");
  CHECK(parse_date_token("1940s", Bound::End).iso() == "1949-12-31");
  CHECK(parse_date_token("1964", Bound::Begin).iso() == "1964-01-01");
  CHECK(parse_date_token("1964", Bound::End).iso() == "1964-12-31");
  CHECK(parse_date_token("2000-02-29", Bound::Begin).iso() == "2000-02-29");
  CHECK_ERROR_CODE(parse_date_token("2001-02-29", Bound::Begin), SchemaError);
  CHECK_ERROR_CODE(parse_date_token("19x0", Bound::Begin), SchemaError);
  CHECK_ERROR_CODE(parse_date_token("1941s", Bound::Begin), SchemaError);
  CHECK_ERROR_CODE(parse_date_token("", Bound::End), SchemaError);
  CHECK_ERROR_CODE(parse_interval("2001", "2000"), SchemaError);

  const TimeInterval tf = parse_timeframe("1940s:2023");
  CHECK(tf.begin.iso() == "1940-01-01");
  CHECK(tf.end.iso() == "2023-12-31");

  const TimeInterval a = parse_interval("2000-01-01", "2000-06-30");
  const TimeInterval b = parse_interval("2000-07-01", "2000-12-31");
  const TimeInterval c = parse_interval("2000-06-30", "2000-07-01");
  CHECK(precedes(a, b));
  CHECK_FALSE(precedes(b, a));
  CHECK(overlaps(a, c));  // shared single day
  CHECK(overlaps(c, b));
  CHECK(disjoint(a, b));
}

TEST_CASE("chip-mini fixture ingests with every named achievement") {
  const Corpus c = testkit::load_fixture("chip-mini.json");
  CHECK(c.size() == 23);
  CHECK(ids_of(c) == std::set<std::string>{"ISA", "CISC", "X86", "RISC", "RISC-V", "VonNeumann", "Harvard", "LeNet",
                                           "AlexNet", "GotoBLAS2", "OpenBLAS", "Ubuntu", "CentOS", "BERT", "GPT",
                                           "BigDataBench", "BigBench", "TPC-C", "TPC-H", "TPC-E", "CH-benCHmark",
                                           "CondConv", "DynamicConvolution"});
  CHECK(c.taxonomy().root() == "computing");
  CHECK(c.at("VonNeumann").interval == parse_interval("1940s", "1940s"));
  CHECK(c.at("ISA").introduces_ec_nodes == std::set<std::string>{"isa-design"});
  CHECK_FALSE(c.at("X86").publication.has_value());
  CHECK_ERROR_CODE(c.at("nope"), UnknownAchievement);
}

TEST_CASE("ingestion errors") {
  SUBCASE("dangling reference names both ids") {
    const std::string msg =
        error_message([] { testkit::load_fixture("bad-dangling-ref.json"); });
    CHECK(msg.find("'A'") != std::string::npos);
    CHECK(msg.find("'ghost'") != std::string::npos);
    CHECK_ERROR_CODE(testkit::load_fixture("bad-dangling-ref.json"), ReferentialError);
  }
  SUBCASE("citing a strictly later work") {
    CHECK_ERROR_CODE(testkit::load_fixture("bad-temporal.json"), TemporalError);
  }
  SUBCASE("malformed JSON reports line and column") {
    const std::string msg = error_message([] { ingest_corpus("{\n  \"taxonomy\": [,\n"); });
    CHECK(msg.find("line 2, column 16") != std::string::npos);
    CHECK_ERROR_CODE(ingest_corpus("{\n  \"taxonomy\": [,\n"), ParseError);
  }
  const std::string base = R"({"taxonomy":[{"id":"c","level":"Field","label":"C"},
      {"id":"q","level":"Problem","label":"Q","parent":"c"}],"institutions":{"i":"I"},"achievements":[)";
  const std::string contributor = R"("contributors":[{"person":"p","name":"P","position":1,"institutions":["i"]}])";
  SUBCASE("missing field reports its JSON path") {
    const std::string doc = base + R"({"id":"A","begin":"1990","end":"1990","ec_mapping":["q"],"key_problem":"q",)" +
                            contributor + "}]}";
    CHECK(error_message([&] { ingest_corpus(doc); }).find("$.achievements[0].title") != std::string::npos);
    CHECK_ERROR_CODE(ingest_corpus(doc), SchemaError);
  }
  SUBCASE("mistyped field") {
    const std::string doc = base + R"({"id":"A","title":7,"begin":"1990","end":"1990","ec_mapping":["q"],"key_problem":"q",)" +
                            contributor + "}]}";
    CHECK_ERROR_CODE(ingest_corpus(doc), SchemaError);
  }
  SUBCASE("unknown keys are rejected unless lenient") {
    const std::string doc = base + R"({"id":"A","title":"A","begin":"1990","end":"1990","ec_mapping":["q"],"key_problem":"q","color":"red",)" +
                            contributor + "}]}";
    CHECK_ERROR_CODE(ingest_corpus(doc), SchemaError);
    CHECK(ingest_corpus(doc, IngestOptions{true}).size() == 1);
  }
  SUBCASE("unknown EC node and institution") {
    const std::string doc = base + R"({"id":"A","title":"A","begin":"1990","end":"1990","ec_mapping":["zz"],"key_problem":"q",)" +
                            contributor + "}]}";
    CHECK_ERROR_CODE(ingest_corpus(doc), ReferentialError);
    const std::string doc2 = base + R"({"id":"A","title":"A","begin":"1990","end":"1990","ec_mapping":["q"],"key_problem":"q",
        "contributors":[{"person":"p","name":"P","position":1,"institutions":["nowhere"]}]}]})";
    CHECK_ERROR_CODE(ingest_corpus(doc2), ReferentialError);
  }
}

TEST_CASE("corpus invariants enforced at assembly") {
  using testkit::authors;
  SUBCASE("duplicate introducer") {
    CHECK_ERROR_CODE(make_corpus(small_tax(), {make_achievement("A", "1990", "1990", {"m"}, "q", {}, {"m"}),
                                               make_achievement("B", "1995", "1995", {"m"}, "q", {}, {"m"})}),
                     DuplicateIntroducer);
  }
  SUBCASE("key problem must be a problem-kind node covering the mapping") {
    CHECK_ERROR_CODE(make_corpus(small_tax(), {make_achievement("A", "1990", "1990", {"m"}, "m")}), ConstraintError);
    CHECK_ERROR_CODE(make_corpus(small_tax(), {make_achievement("A", "1990", "1990", {"m"}, "f")}), ConstraintError);
    auto tax = small_tax();
    tax.push_back({"q2", ECLevel::Problem, "Q2", "f"});
    CHECK_ERROR_CODE(make_corpus(tax, {make_achievement("A", "1990", "1990", {"m"}, "q2")}), ConstraintError);
    CHECK(make_corpus(small_tax(), {make_achievement("A", "1990", "1990", {"m"}, "q")}).size() == 1);
  }
  SUBCASE("self reference and introduced nodes outside the mapping") {
    CHECK_ERROR_CODE(make_corpus(small_tax(), {make_achievement("A", "1990", "1990", {"m"}, "q", {"A"})}),
                     ConstraintError);
    CHECK_ERROR_CODE(make_corpus(small_tax(), {make_achievement("A", "1990", "1990", {"m"}, "q", {}, {"inst"})}),
                     ConstraintError);
  }
  SUBCASE("contributors") {
    auto a = make_achievement("A", "1990", "1990", {"m"}, "q");
    a.contributors.clear();
    CHECK_ERROR_CODE(make_corpus(small_tax(), {a}), ConstraintError);
    a.contributors = authors({{}, {}, {}});
    a.contributors[2].position = 4;
    CHECK_ERROR_CODE(make_corpus(small_tax(), {a}), ConstraintError);
    a.contributors = authors({{}, {}});
    a.contributors[1].person = a.contributors[0].person;
    CHECK_ERROR_CODE(make_corpus(small_tax(), {a}), ConstraintError);
  }
  SUBCASE("non-positive significance dimension") {
    auto a = make_achievement("A", "1990", "1990", {"m"}, "q");
    a.dims = {{"d", 0.0, Orientation::Positive}};
    CHECK_ERROR_CODE(make_corpus(small_tax(), {a}), NonPositiveDim);
  }
  SUBCASE("same-day boundary citation is allowed, a day later is not") {
    CHECK(make_corpus(small_tax(), {make_achievement("A", "1990-01-01", "2000-06-30", {"m"}, "q", {"B"}),
                                    make_achievement("B", "2000-06-30", "2001", {"m"}, "q")})
              .size() == 2);
    CHECK_ERROR_CODE(make_corpus(small_tax(), {make_achievement("A", "1990-01-01", "2000-06-30", {"m"}, "q", {"B"}),
                                               make_achievement("B", "2000-07-01", "2001", {"m"}, "q")}),
                     TemporalError);
  }
}

TEST_CASE("ingestion is deterministic") {
  const std::string text = testkit::read_file(testkit::fixture_path("chip-mini.json"));
  const Corpus a = ingest_corpus(text);
  const Corpus b = ingest_corpus(text);
  CHECK(canonical_json(a) == canonical_json(b));
  CHECK(a.digest() == b.digest());
  CHECK(a.achievements() == b.achievements());
  // The canonical dump re-ingests to the same corpus.
  const Corpus c = ingest_corpus(canonical_json(a));
  CHECK(c.digest() == a.digest());
  CHECK(format_digest(a.digest()).size() == 16);
}

TEST_CASE("filter_corpus on chip-mini") {
  const Corpus c = testkit::load_fixture("chip-mini.json");
  const TimeInterval full = parse_interval("1940", "2023");
  const Corpus chip = filter_corpus(c, full, "chip");
  CHECK(ids_of(chip) == std::set<std::string>{"ISA", "CISC", "X86", "RISC", "RISC-V", "VonNeumann", "Harvard"});
  CHECK(filter_corpus(c, parse_interval("3000", "3001"), "chip").empty());
  CHECK(ids_of(filter_corpus(c, full, "isa-design")) ==
        std::set<std::string>{"ISA", "CISC", "RISC", "X86", "RISC-V"});
  CHECK(filter_corpus(c, full, "chip").taxonomy().size() == c.taxonomy().size());
  CHECK_ERROR_CODE(filter_corpus(c, full, "nope"), UnknownNode);

  // References to dropped achievements are pruned.
  const Corpus db = filter_corpus(c, parse_interval("2005", "2023"), "db-bench");
  CHECK(ids_of(db) == std::set<std::string>{"TPC-E", "CH-benCHmark"});
  CHECK(db.at("CH-benCHmark").references.empty());
}

TEST_CASE("filter_corpus is idempotent and never enlarges") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const Corpus c = testkit::random_corpus(rng, {});
    std::vector<std::string> nodes;
    for (const auto& [id, n] : c.taxonomy().nodes()) nodes.push_back(id);
    const std::string field = nodes[std::uniform_int_distribution<std::size_t>(0, nodes.size() - 1)(rng)];
    const int y0 = std::uniform_int_distribution<int>(1985, 2012)(rng);
    const TimeInterval tf = parse_interval(std::to_string(y0), std::to_string(y0 + 5));
    const Corpus once = filter_corpus(c, tf, field);
    const Corpus twice = filter_corpus(once, tf, field);
    CHECK(canonical_json(once) == canonical_json(twice));
    for (const auto& a : once.achievements()) {
      CHECK(c.contains(a.id));
      CHECK(overlaps(a.interval, tf));
      for (const auto& r : a.references) CHECK(once.contains(r));
    }
  }
}

TEST_CASE("citation_closure") {
  const Corpus c = testkit::load_fixture("chip-mini.json");
  CHECK(citation_closure(c, "ISA") == std::set<std::string>{"CISC", "RISC", "X86", "RISC-V"});
  CHECK(citation_closure(c, "RISC-V").empty());
  CHECK(citation_closure(c, "RISC") == std::set<std::string>{"RISC-V"});
  CHECK(citation_closure(c, "TPC-C") == std::set<std::string>{"CH-benCHmark"});
  CHECK_ERROR_CODE(citation_closure(c, "nope"), UnknownAchievement);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Corpus r = testkit::random_corpus(rng, {});
    for (const auto& a : r.achievements()) {
      const auto closure = citation_closure(r, a.id);
      CHECK_FALSE(closure.count(a.id));
      // Closed under "is cited by": every citer of a or of a member is a member.
      for (const auto& y : r.achievements()) {
        if (y.id == a.id) continue;
        const bool cites_member = std::any_of(y.references.begin(), y.references.end(), [&](const std::string& ref) {
          return ref == a.id || closure.count(ref) != 0;
        });
        if (cites_member) CHECK(closure.count(y.id) == 1);
      }
    }
  }
}
