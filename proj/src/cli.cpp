#include "evalrank/cli.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "evalrank/baselines.hpp"
#include "evalrank/corpus.hpp"
#include "evalrank/error.hpp"
#include "evalrank/evolution.hpp"
#include "evalrank/pruning.hpp"
#include "evalrank/ranking.hpp"
#include "evalrank/relations.hpp"

namespace evalrank::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string corpus_path;
  std::string format;
  bool lenient = false;
  bool explain = false;
  bool determinism_check = false;
  bool no_compound = false;
  std::string table = "achievements";
  std::string timeframe = "1940s:2023";
  std::vector<std::string> venues;
  PruneConfig prune;
  RankParams rank;
};

struct Output {
  std::string out;
  std::string err;
};

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string dot_quote(std::string_view s) { return "\"" + dot_escape(s) + "\""; }

[[noreturn]] void bad_format(const std::string& command, const std::string& format) {
  throw Error(ErrorCode::UsageError, fmt::format("command '{}' does not support --format {}", command, format));
}

Corpus load(const RunConfig& cfg) { return load_corpus_file(cfg.corpus_path, IngestOptions{cfg.lenient}); }

struct Pipeline {
  Corpus corpus;
  RelationGraph graph;
  EvolutionTrace trace;
  PragmaticEM em;
  RankingReport report;
};

Pipeline run_pipeline(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.rank.compound_bonuses = !cfg.no_compound;
  c.prune.timeframe = parse_timeframe(cfg.timeframe);
  validate_config(c.prune);
  validate_params(c.rank);
  Corpus corpus = load(c);
  if (!c.prune.field.empty()) corpus.taxonomy().node(c.prune.field);
  RelationGraph graph = classify_relationships(corpus);
  EvolutionTrace trace = build_evolution_trace(corpus, graph);
  PragmaticEM em = prune(corpus, graph, trace, c.prune);
  RankingReport report = rank_report(corpus, em, graph, c.rank);
  return {std::move(corpus), std::move(graph), std::move(trace), std::move(em), std::move(report)};
}

Output cmd_validate(const RunConfig& cfg) {
  const Corpus corpus = load(cfg);
  if (cfg.format == "json") {
    return {json{{"valid", true},
                 {"achievements", corpus.size()},
                 {"taxonomy_nodes", corpus.taxonomy().size()},
                 {"institutions", corpus.institutions().size()},
                 {"root", corpus.taxonomy().root()},
                 {"digest", format_digest(corpus.digest())}}
                    .dump(2) +
                "\n",
            {}};
  }
  if (cfg.format != "text") bad_format("validate", cfg.format);
  return {fmt::format("ok: {} achievements, {} taxonomy nodes (root '{}'), {} institutions, digest {}\n",
                      corpus.size(), corpus.taxonomy().size(), corpus.taxonomy().root(), corpus.institutions().size(),
                      format_digest(corpus.digest())),
          {}};
}

Output cmd_classify(const RunConfig& cfg) {
  const Corpus corpus = load(cfg);
  const RelationGraph graph = classify_relationships(corpus);
  if (cfg.format == "json") return {graph_to_json(graph) + "\n", {}};
  if (cfg.format == "dot") return {graph_to_dot(graph, &corpus), {}};
  if (cfg.format != "text") bad_format("classify", cfg.format);
  std::string out = fmt::format("pioneers ({}): {}\n", graph.pioneers.size(), fmt::join(graph.pioneers, ", "));
  for (const auto& e : graph.edges) {
    out += fmt::format("{:<20} {} {} {}\n", to_string(e.kind), e.from,
                       e.kind == RelationKind::Parallel ? "--" : "->", e.to);
  }
  for (const auto& g : many_to_one_groups(graph)) {
    out += fmt::format("many-to-one: {{{}}} -> {}\n", fmt::join(g.predecessors, ", "), g.successor);
  }
  return {out, {}};
}

Output cmd_trace(const RunConfig& cfg) {
  const Corpus corpus = load(cfg);
  const RelationGraph graph = classify_relationships(corpus);
  const EvolutionTrace trace = build_evolution_trace(corpus, graph);
  if (cfg.format == "json") return {trace_to_jsonl(trace), {}};
  if (cfg.format != "text") bad_format("trace", cfg.format);
  std::string out = fmt::format("corpus digest {}\n", format_digest(trace.corpus_digest));
  for (const auto& ev : trace.events) {
    out += fmt::format("ES_{:<4} + {}{}\n", ev.step, ev.added, ev.new_pioneer ? "  [pioneer]" : "");
    for (const auto& e : ev.edges_added) {
      out += fmt::format("         {} {} {}\n", e.from, to_string(e.kind), e.to);
    }
  }
  return {out, {}};
}

Output cmd_rank(const RunConfig& cfg) {
  const Pipeline p = run_pipeline(cfg);
  Output result;
  const std::string explanation = cfg.explain ? explain(p.em) : std::string();
  if (cfg.format == "text") {
    result.out = explanation + (explanation.empty() ? "" : "\n") + report_to_text(p.report);
    return result;
  }
  result.err = explanation;
  if (cfg.format == "json") {
    result.out = json{{"pruning", json::parse(pragmatic_to_json(p.em))}, {"report", json::parse(report_to_json(p.report))}}
                     .dump(2) +
                 "\n";
  } else if (cfg.format == "csv") {
    if (cfg.table == "achievements") {
      result.out = table_to_csv(p.report.achievements);
    } else if (cfg.table == "contributors") {
      result.out = table_to_csv(p.report.contributors);
    } else if (cfg.table == "institutions") {
      result.out = table_to_csv(p.report.institutions);
    } else {
      throw Error(ErrorCode::UsageError, fmt::format("unknown table '{}'", cfg.table));
    }
  } else {
    bad_format("rank", cfg.format);
  }
  return result;
}

Output cmd_compare(const RunConfig& cfg) {
  const Pipeline p = run_pipeline(cfg);
  const auto citations = citation_ranking(p.corpus);
  const auto venue = venue_count_ranking(p.corpus, std::set<std::string>(cfg.venues.begin(), cfg.venues.end()));

  struct Row {
    std::string kind, id, name;
    std::optional<int> eval_rank;
    std::optional<double> eval_score;
    std::optional<int> baseline_rank;
    std::optional<std::int64_t> baseline_value;
    bool published = true;
  };
  std::vector<Row> rows;
  for (const auto& e : p.report.achievements) {
    rows.push_back({"achievement", e.id, e.name, e.rank, e.score, {}, {}});
  }
  for (std::size_t i = 0; i < citations.size(); ++i) {
    const auto& c = citations[i];
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const Row& r) { return r.kind == "achievement" && r.id == c.id; });
    if (it == rows.end()) {
      rows.push_back({"achievement", c.id, p.corpus.at(c.id).title, {}, {}, {}, {}});
      it = rows.end() - 1;
    }
    it->baseline_rank = static_cast<int>(i) + 1;
    it->baseline_value = c.citations;
    it->published = c.published;
  }
  std::map<std::string, std::string> names;
  for (const auto& a : p.corpus.achievements()) {
    for (const auto& c : a.contributors) names.emplace(c.person, c.name);
  }
  const std::size_t first_contributor = rows.size();
  for (const auto& e : p.report.contributors) {
    rows.push_back({"contributor", e.id, e.name, e.rank, e.score, {}, {}});
  }
  for (std::size_t i = 0; i < venue.size(); ++i) {
    auto it = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(first_contributor), rows.end(),
                           [&](const Row& r) { return r.id == venue[i].first; });
    if (it == rows.end()) {
      rows.push_back({"contributor", venue[i].first, names.at(venue[i].first), {}, {}, {}, {}});
      it = rows.end() - 1;
    }
    it->baseline_rank = static_cast<int>(i) + 1;
    it->baseline_value = venue[i].second;
  }

  if (cfg.format == "json") {
    json out = json::array();
    for (const auto& r : rows) {
      json row{{"kind", r.kind}, {"id", r.id}, {"name", r.name}};
      row["evaluatology_rank"] = r.eval_rank ? json(*r.eval_rank) : json(nullptr);
      row["evaluatology_score"] = r.eval_score ? json(*r.eval_score) : json(nullptr);
      const char* rank_key = r.kind == "achievement" ? "citation_rank" : "venue_rank";
      const char* value_key = r.kind == "achievement" ? "citations" : "venue_count";
      row[rank_key] = r.baseline_rank ? json(*r.baseline_rank) : json(nullptr);
      row[value_key] = r.baseline_value ? json(*r.baseline_value) : json(nullptr);
      if (r.kind == "achievement") row["published"] = r.published;
      out.push_back(std::move(row));
    }
    return {out.dump(2) + "\n", {}};
  }
  if (cfg.format != "csv") bad_format("compare", cfg.format);
  std::string out =
      "kind,id,name,evaluatology_rank,evaluatology_score,citation_rank,citations,venue_rank,venue_count\n";
  auto opt = [](const auto& v) { return v ? fmt::format("{}", *v) : std::string(); };
  for (const auto& r : rows) {
    const std::string score = r.eval_score ? format_score(*r.eval_score) : std::string();
    const bool ach = r.kind == "achievement";
    const std::string citation_count = ach && r.baseline_value && r.published ? opt(r.baseline_value) : std::string();
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.kind, csv_cell(r.id), csv_cell(r.name), opt(r.eval_rank), score,
                       ach ? opt(r.baseline_rank) : "", citation_count, ach ? "" : opt(r.baseline_rank),
                       ach ? "" : opt(r.baseline_value));
  }
  return {out, {}};
}

Output cmd_export(const RunConfig& cfg) {
  if (cfg.format != "dot") bad_format("export", cfg.format);
  const Corpus corpus = load(cfg);
  const RelationGraph graph = classify_relationships(corpus);
  const Taxonomy& tax = corpus.taxonomy();
  std::string out = "digraph evolution {\n  rankdir=TB;\n  node [shape=box, style=rounded];\n";
  for (const auto& [id, n] : tax.nodes()) {
    out += fmt::format("  {} [label=\"{}\\n({})\"];\n", dot_quote("ec:" + id), dot_escape(n.label),
                       to_string(n.level));
  }
  for (const auto& [id, n] : tax.nodes()) {
    if (n.parent) out += fmt::format("  {} -> {};\n", dot_quote("ec:" + *n.parent), dot_quote("ec:" + id));
  }
  out += "  node [shape=ellipse, style=solid];\n";
  for (const auto& a : corpus.achievements()) {
    out += fmt::format("  {} [label={}{}];\n", dot_quote("ach:" + a.id), dot_quote(a.title),
                       graph.is_pioneer(a.id) ? ", peripheries=2" : "");
    out += fmt::format("  {} -> {} [style=dotted, arrowhead=none];\n", dot_quote("ec:" + a.key_problem),
                       dot_quote("ach:" + a.id));
  }
  for (const auto& e : graph.edges) {
    if (e.kind != RelationKind::Progressive) continue;
    out += fmt::format("  {} -> {} [color=blue];\n", dot_quote("ach:" + e.from), dot_quote("ach:" + e.to));
  }
  out += "}\n";
  return {out, {}};
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::CoherenceError:
    case ErrorCode::GraphCorpusMismatch:
      return kInternalError;
    default:
      return kUserError;
  }
}

void add_corpus(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("corpus", cfg.corpus_path, "Corpus JSON document")->required();
}

void add_pipeline_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--n", cfg.prune.n, "Number of achievements to select (N)")->capture_default_str();
  sub->add_option("--pioneering-fraction", cfg.prune.pioneering_fraction, "Share of N for pioneering achievements")
      ->capture_default_str();
  sub->add_option("--progressive-fraction", cfg.prune.progressive_fraction, "Share of N for progressive achievements")
      ->capture_default_str();
  sub->add_option("--timeframe", cfg.timeframe, "Period X, e.g. 1940s:2023")->capture_default_str();
  sub->add_option("--field", cfg.prune.field, "Field Y as a taxonomy node id (default: root)");
  sub->add_option("--pioneering-weight", cfg.rank.pioneering_weight, "Weight on aggregated descendant scores")
      ->capture_default_str();
  sub->add_option("--first-author-ratio", cfg.rank.first_author_ratio)->capture_default_str();
  sub->add_option("--corresponding-author-ratio", cfg.rank.corresponding_author_ratio)->capture_default_str();
  sub->add_flag("--no-compound", cfg.no_compound,
                "Count descendants at base score instead of compounding nested pioneer bonuses");
  sub->add_flag("--explain", cfg.explain, "Print the per-round pruning report");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Top N @X @Y achievement ranking over an evaluation-condition taxonomy", "evalrank"};
  app.require_subcommand(1);
  app.add_flag("--lenient", cfg.lenient, "Ignore unknown keys in the corpus document");
  app.add_flag("--seedless-determinism-check", cfg.determinism_check,
               "Run the command twice and fail if the outputs differ");

  std::string format;
  auto* validate = app.add_subcommand("validate", "Ingest and validate a corpus");
  add_corpus(validate, cfg);
  validate->add_option("--format", format, "text | json");

  auto* classify = app.add_subcommand("classify", "Classify relationships among achievements");
  add_corpus(classify, cfg);
  classify->add_option("--format", format, "json | dot | text");

  auto* trace = app.add_subcommand("trace", "Emit the evolution trace");
  add_corpus(trace, cfg);
  trace->add_option("--format", format, "json (one event per line) | text");

  auto* rank = app.add_subcommand("rank", "Prune to Top N @X @Y and rank achievements, contributors, institutions");
  add_corpus(rank, cfg);
  add_pipeline_options(rank, cfg);
  rank->add_option("--format", format, "text | json | csv");
  rank->add_option("--table", cfg.table, "CSV table: achievements | contributors | institutions")
      ->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Contrast the ranking with bibliometric baselines");
  add_corpus(compare, cfg);
  add_pipeline_options(compare, cfg);
  compare->add_option("--format", format, "csv | json");
  compare->add_option("--venues", cfg.venues, "Venues counted by the venue-count baseline")->delimiter(',');

  auto* exporter = app.add_subcommand("export", "Render the taxonomy and achievement tree");
  add_corpus(exporter, cfg);
  exporter->add_option("--format", format, "dot")->required();

  for (auto* sub : {validate, classify, trace, rank, compare, exporter}) {
    sub->add_flag("--lenient", cfg.lenient, "Ignore unknown keys in the corpus document");
    sub->add_flag("--seedless-determinism-check", cfg.determinism_check,
                  "Run the command twice and fail if the outputs differ");
  }

  std::vector<std::string> argv_store{"evalrank"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << to_string(ErrorCode::UsageError) << ": " << e.what() << "\n" << app.help();
    return kUserError;
  }

  std::function<Output(const RunConfig&)> command;
  std::string default_format;
  if (validate->parsed()) {
    command = cmd_validate;
    default_format = "text";
  } else if (classify->parsed()) {
    command = cmd_classify;
    default_format = "json";
  } else if (trace->parsed()) {
    command = cmd_trace;
    default_format = "json";
  } else if (rank->parsed()) {
    command = cmd_rank;
    default_format = "text";
  } else if (compare->parsed()) {
    command = cmd_compare;
    default_format = "csv";
  } else {
    command = cmd_export;
    default_format = "dot";
  }
  cfg.format = format.empty() ? default_format : format;

  try {
    Output result = command(cfg);
    if (cfg.determinism_check) {
      const Output again = command(cfg);
      if (again.out != result.out || again.err != result.err) {
        throw Error(ErrorCode::CoherenceError, "two runs over identical input produced different output");
      }
    }
    out << result.out;
    err << result.err;
    return kOk;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: InternalError: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace evalrank::cli
