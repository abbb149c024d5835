#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lexgraph/analysis.hpp"
#include "lexgraph/decomposition.hpp"
#include "lexgraph/errors.hpp"
#include "lexgraph/game.hpp"
#include "lexgraph/grounding.hpp"
#include "lexgraph/lexicon.hpp"
#include "lexgraph/mgs.hpp"
#include "lexgraph/norms.hpp"
#include "lexgraph/service.hpp"
#include "lexgraph/synthetic.hpp"
#include "lexgraph/version.hpp"

namespace lexgraph::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class InputError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string dict;
  std::string format = "auto";
  std::string stoplist;
  std::string norms;
  std::string mgs_path;
  std::string labels;
  std::string out;
  std::string sessions;
  std::string static_dir;
  std::string host = "127.0.0.1";
  std::string branch_rule = "lexicographic";
  double time_limit = 60.0;
  double entry_p = 0.05;
  std::size_t enumerate = 0;
  bool greedy = false;
  bool json_report = false;
  bool keep_stop_words = false;
  int port = 8080;
  // generate
  std::uint64_t seed = 1;
  std::size_t words = 2000;
  double core_fraction = 0.06;
  double satellite_fraction = 0.02;
  double mean_length = 10.0;
  double coverage = 0.9;
  double effect = 1.0;
  bool no_suppressor = false;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

DictionaryFormat resolve_format(const Options& o) {
  if (o.format != "auto") return parse_format(o.format);
  return fs::path(o.dict).extension() == ".tsv" ? DictionaryFormat::tsv : DictionaryFormat::jsonl;
}

StopList load_stoplist(const Options& o) {
  if (o.keep_stop_words) return StopList{};
  if (o.stoplist.empty()) return StopList::english();
  auto in = open_input(o.stoplist);
  return StopList::parse(in);
}

/// Parse, drop stop words, close. Dropped tokens are reported on `err`.
Lexicon load_dictionary(const Options& o, std::ostream& err) {
  auto in = open_input(o.dict);
  auto raw = parse_dictionary(in, resolve_format(o));
  auto closed = close_lexicon(strip_stop_words(raw, load_stoplist(o)), ClosureMode::drop_unknown);
  if (!closed.dropped.empty()) {
    err << "warning: dropped " << closed.dropped.size() << " defining token(s) without an entry";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, closed.dropped.size()); ++i)
      err << (i ? ", " : " (") << "'" << closed.dropped[i].token << "' in '" << closed.dropped[i].entry << "'";
    err << (closed.dropped.size() > 3 ? ", ...)" : ")") << "\n";
  }
  if (!closed.emptied.empty())
    err << "warning: " << closed.emptied.size() << " entr" << (closed.emptied.size() == 1 ? "y has" : "ies have")
        << " an empty definition after closure\n";
  return std::move(closed.lexicon);
}

VertexSet read_word_list(const DefGraph& g, const std::string& path) {
  auto in = open_input(path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!g.find(line)) throw InputError("'" + path + "': word '" + line + "' is not in the dictionary");
    words.push_back(line);
  }
  return g.ids(words);
}

std::map<VertexId, std::string> read_label_colors(const DefGraph& g, const std::string& path, std::ostream& err) {
  static const std::map<Label, std::string> kColors = {
      {Label::core, "tomato"}, {Label::satellite, "gold"}, {Label::outside, "lightgrey"}};
  auto in = open_input(path);
  std::map<VertexId, std::string> colors;
  std::string line;
  std::size_t line_no = 0, unknown = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(line_no, "expected word<TAB>LABEL");
    auto v = g.find(line.substr(0, tab));
    Label label = parse_label(line.substr(tab + 1));
    if (!v) {
      ++unknown;
      continue;
    }
    colors[*v] = kColors.at(label);
  }
  if (unknown) err << "warning: " << unknown << " labelled word(s) not in the dictionary ignored\n";
  return colors;
}

json manifest(const std::string& command, const Options& o, const json& options, double seconds,
              const std::vector<std::string>& outputs) {
  json inputs = json::object();
  if (!o.dict.empty()) inputs["dictionary"] = o.dict;
  if (!o.labels.empty()) inputs["labels"] = o.labels;
  if (!o.mgs_path.empty()) inputs["mgs"] = o.mgs_path;
  return json{{"tool", "lexgraph"},
              {"version", kVersion},
              {"command", command},
              {"inputs", inputs},
              {"stoplist", o.keep_stop_words ? json(nullptr) : o.stoplist.empty() ? json("builtin:english") : json(o.stoplist)},
              {"norms", o.norms.empty() ? json(nullptr) : json(o.norms)},
              {"options", options},
              {"outputs", outputs},
              {"wall_seconds", seconds}};
}

void write_manifest(const std::string& path, const json& m) {
  auto out = open_output(path + ".manifest.json");
  out << m.dump(2) << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string join_words(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
  return s;
}

int cmd_decompose(const Options& o, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  auto lex = load_dictionary(o, err);
  auto full = decompose_full(lex);
  if (o.json_report)
    out << report_json(full.report) << "\n";
  else
    write_report_table(out, full.report, fs::path(o.dict).filename().string());
  if (!o.out.empty()) {
    auto labels = open_output(o.out);
    write_labels(labels, full.graph, full.decomposition);
    write_manifest(o.out, manifest("decompose", o, {{"format", o.format}}, seconds_since(t0), {o.out}));
  }
  return 0;
}

void print_solution(std::ostream& out, const DefGraph& g, const Decomposition& d, const GroundingSet& s) {
  out << "MGS size: " << s.size();
  if (s.optimal)
    out << " (optimal)\n";
  else
    out << " (not proven optimal; lower bound " << s.lower_bound << ")\n";
  out << "lower bound: " << s.lower_bound << "\n";
  out << "search nodes: " << s.nodes << "\n";
  out << "wall time: " << std::fixed << std::setprecision(3) << s.wall_seconds << " s\n";
  out.unsetf(std::ios::floatfield);
  auto st = straddle_report(d, s);
  out << "straddle: in_core=" << st.in_core << " in_satellite=" << st.in_satellite
      << " outside_kernel=" << st.outside_kernel << "\n";
  out << "words: " << join_words(g.words(s.words)) << "\n";
}

int cmd_mgs(const Options& o, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  SolverConfig cfg;
  cfg.time_limit_seconds = o.time_limit;
  cfg.branch_rule = parse_branch_rule(o.branch_rule);
  cfg.enumeration_cap = std::max<std::size_t>(o.enumerate, 1);
  cfg.validate();

  auto full = decompose_full(load_dictionary(o, err));
  const auto& g = full.graph;
  auto s = o.greedy ? greedy_grounding_set(g) : solve_mgs(g, cfg);
  print_solution(out, g, full.decomposition, s);

  std::vector<GroundingSet> all;
  if (o.enumerate > 0) {
    if (!s.optimal) {
      err << "warning: optimality not proven; enumeration skipped\n";
    } else {
      all = enumerate_mgs(g, cfg, s);
      out << "optimal sets (" << all.size() << (all.size() >= cfg.enumeration_cap ? ", capped" : "") << "):\n";
      for (std::size_t i = 0; i < all.size(); ++i) out << "  " << i + 1 << ": " << join_words(g.words(all[i].words)) << "\n";
    }
  }

  if (!o.out.empty()) {
    auto file = open_output(o.out);
    for (const auto& w : g.words(s.words)) file << w << "\n";
    auto record = json::parse(solver_record_json(g, s));
    if (!all.empty()) {
      record["enumerated"] = json::array();
      for (const auto& a : all) record["enumerated"].push_back(g.words(a.words));
    }
    auto m = manifest("mgs", o,
                      {{"time_limit", o.time_limit},
                       {"enumerate", o.enumerate},
                       {"greedy", o.greedy},
                       {"branch_rule", o.branch_rule}},
                      seconds_since(t0), {o.out});
    m["result"] = record;
    write_manifest(o.out, m);
  }
  return 0;
}

int cmd_stats(const Options& o, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  auto full = decompose_full(load_dictionary(o, err));
  const auto& g = full.graph;
  auto norms_in = open_input(o.norms);
  auto norms = load_norms(norms_in);
  for (const auto& w : norms.warnings) err << "warning: " << w << "\n";

  std::optional<GroundingSet> mgs;
  if (!o.mgs_path.empty()) {
    GroundingSet s;
    s.words = read_word_list(g, o.mgs_path);
    if (!is_grounding_set(g, s.words)) err << "warning: the supplied MGS is not a grounding set of this dictionary\n";
    mgs = std::move(s);
  }

  auto frame = attach_norms(g, full.decomposition, norms, mgs ? &*mgs : nullptr);
  for (const auto& w : frame.warnings) err << "warning: " << w << "\n";
  out << "norms coverage: " << frame.with_norms << " of " << frame.rows.size() << " words";
  if (!frame.rows.empty()) out << " (" << whole_percent(frame.with_norms, frame.rows.size()) << "%)";
  out << "\n";

  json report = {{"coverage", frame.coverage}, {"with_norms", frame.with_norms}, {"dictionary", frame.rows.size()}};
  std::vector<std::string> warnings;
  if (frame.with_norms == 0) {
    err << "warning: no dictionary word has norms; no tables produced\n";
    warnings.push_back("no dictionary word has norms");
  } else {
    out << "\nMean norms by stratum\n";
    write_strata_table(out, frame);
    json strata = json::object();
    for (auto v : kAllNormVariables) {
      json rows = json::array();
      for (const auto& m : strata_means(frame, v))
        rows.push_back({{"stratum", m.stratum}, {"n", m.n}, {"mean", m.mean ? json(*m.mean) : json(nullptr)}});
      strata[std::string(variable_name(v))] = rows;
    }
    report["strata"] = strata;

    std::vector<GroupSplit> splits{kernel_vs_rest(), core_vs_rest()};
    if (mgs) splits.push_back(mgs_vs_rest());
    splits.push_back(core_vs_satellites());
    if (!mgs) warnings.push_back("no MGS supplied; MGS comparisons skipped");

    std::vector<GroupComparison> rows;
    for (const auto& split : splits) {
      for (auto v : kAllNormVariables) {
        try {
          rows.push_back(anova_compare(frame, split, v));
        } catch (const InsufficientDataError& e) {
          warnings.push_back(e.what());
        }
      }
    }
    out << "\nOne-way ANOVA\n";
    write_anova_table(out, rows);
    report["anova"] = json::array();
    for (const auto& c : rows) report["anova"].push_back(json::parse(comparison_json(c)));

    report["regression"] = json::array();
    std::vector<NormVariable> predictors(kAllNormVariables.begin(), kAllNormVariables.end());
    for (const auto& split : splits) {
      try {
        auto r = stepwise_regression(frame, split, predictors, o.entry_p);
        out << "\n";
        write_regression_table(out, r);
        report["regression"].push_back(json::parse(regression_json(r)));
      } catch (const InsufficientDataError& e) {
        warnings.push_back(e.what());
      }
    }

    out << "\nCorrelations (pairwise complete)\n";
    write_correlation_table(out, correlation_matrix(frame));
  }
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  report["warnings"] = warnings;

  if (!o.out.empty()) {
    auto file = open_output(o.out);
    file << report.dump(2) << "\n";
    write_manifest(o.out, manifest("stats", o, {{"entry_p", o.entry_p}}, seconds_since(t0), {o.out}));
  }
  return 0;
}

int cmd_export_dot(const Options& o, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  auto lex = load_dictionary(o, err);
  auto g = build_graph(lex);
  std::map<VertexId, std::string> colors;
  if (!o.labels.empty()) colors = read_label_colors(g, o.labels, err);
  auto name = fs::path(o.dict).stem().string();
  if (o.out.empty()) {
    write_dot(out, g, colors, name);
  } else {
    auto file = open_output(o.out);
    write_dot(file, g, colors, name);
    write_manifest(o.out, manifest("export-dot", o, json::object(), seconds_since(t0), {o.out}));
  }
  return 0;
}

std::atomic<bool> g_stop_requested{false};
extern "C" void on_signal(int) { g_stop_requested = true; }

int cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
  auto stop = std::make_shared<const StopList>(load_stoplist(o));
  std::optional<fs::path> dir;
  if (!o.sessions.empty()) dir = o.sessions;
  SessionStore store(stop, dir);
  for (const auto& w : store.load_warnings()) err << "warning: " << w << "\n";

  ServiceConfig cfg;
  cfg.host = o.host;
  cfg.version = kVersion;
  if (!o.static_dir.empty()) cfg.static_dir = o.static_dir;
  GameService service(store, cfg);
  int port;
  try {
    port = service.bind(o.port);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  out << "serving on http://" << o.host << ":" << port << " (" << store.ids().size() << " session(s) recovered)"
      << std::endl;

  g_stop_requested = false;
  auto previous_int = std::signal(SIGINT, on_signal);
  auto previous_term = std::signal(SIGTERM, on_signal);
  std::thread watcher([&] {
    while (!g_stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    service.stop();
  });
  service.serve();
  g_stop_requested = true;
  watcher.join();
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
  store.flush();
  out << "stopped" << std::endl;
  return 0;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  SyntheticConfig cfg;
  cfg.words = o.words;
  cfg.core_fraction = o.core_fraction;
  cfg.satellite_fraction = o.satellite_fraction;
  cfg.mean_definition_length = o.mean_length;
  cfg.seed = o.seed;
  auto dict = generate_dictionary(cfg);
  auto full = decompose_full(dict.lexicon);

  // Exact solving is only attempted when a time limit is given explicitly.
  GroundingSet mgs;
  if (o.time_limit > 0 && !o.greedy) {
    SolverConfig sc;
    sc.time_limit_seconds = o.time_limit;
    sc.branch_rule = BranchRule::max_degree;
    mgs = solve_mgs(full.graph, sc);
  } else {
    mgs = greedy_grounding_set(full.graph);
  }
  full.report.mgs = mgs.size();

  SyntheticNormsConfig nc;
  nc.coverage = o.coverage;
  nc.effect = o.effect;
  nc.suppressor = !o.no_suppressor;
  nc.seed = o.seed + 1;
  auto norms = generate_norms(full.graph, full.decomposition, mgs, nc);

  const std::string dict_path = o.out + ".jsonl";
  const std::string norms_path = o.out + ".norms.csv";
  const std::string mgs_path = o.out + ".mgs.txt";
  {
    auto f = open_output(dict_path);
    write_jsonl(f, dict.lexicon);
  }
  {
    auto f = open_output(norms_path);
    write_norms(f, norms);
  }
  {
    auto f = open_output(mgs_path);
    for (const auto& w : full.graph.words(mgs.words)) f << w << "\n";
  }
  write_report_table(out, full.report, dict_path);
  out << "MGS " << (mgs.optimal ? "optimal" : "upper bound") << ", lower bound " << mgs.lower_bound << "\n";
  out << "wrote " << dict_path << ", " << norms_path << ", " << mgs_path << "\n";
  (void)err;

  json options = {{"seed", o.seed},
                  {"words", o.words},
                  {"core_fraction", o.core_fraction},
                  {"satellite_fraction", o.satellite_fraction},
                  {"mean_length", o.mean_length},
                  {"coverage", o.coverage},
                  {"effect", o.effect},
                  {"suppressor", !o.no_suppressor},
                  {"mgs_method", mgs.optimal ? "exact" : o.time_limit > 0 && !o.greedy ? "time-limited" : "greedy"}};
  Options inputs;
  write_manifest(o.out, manifest("generate", inputs, options, seconds_since(t0), {dict_path, norms_path, mgs_path}));
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel, Core, Satellites and minimum grounding sets of dictionaries", "lexgraph"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;

  auto add_dict = [&](CLI::App* sub) {
    sub->add_option("dictionary", o.dict, "Dictionary file (jsonl or tsv)")->required();
    sub->add_option("--format", o.format, "Input format")->check(CLI::IsMember({"auto", "jsonl", "tsv"}));
    auto* stoplist =
        sub->add_option("--stoplist", o.stoplist, "Stop-word list, one word per line (default: built-in English)");
    sub->add_flag("--keep-stop-words", o.keep_stop_words, "Do not remove any stop words")->excludes(stoplist);
  };

  auto* decompose = app.add_subcommand("decompose", "Kernel / Core / Satellites report");
  add_dict(decompose);
  decompose->add_option("--out", o.out, "Write per-word labels (TSV) here");
  decompose->add_flag("--json", o.json_report, "Print the report as JSON");

  auto* mgs = app.add_subcommand("mgs", "Minimum grounding set");
  add_dict(mgs);
  mgs->add_option("--time-limit", o.time_limit, "Solver time limit in seconds")->check(CLI::PositiveNumber);
  mgs->add_option("--enumerate", o.enumerate, "List up to N optimal sets");
  mgs->add_option("--branch-rule", o.branch_rule, "lexicographic or max-degree")
      ->check(CLI::IsMember({"lexicographic", "max-degree"}));
  mgs->add_flag("--greedy", o.greedy, "Greedy upper bound only (large dictionaries)");
  mgs->add_option("--out", o.out, "Write the set, one word per line");

  auto* stats = app.add_subcommand("stats", "Compare psycholinguistic norms across structural groups");
  add_dict(stats);
  stats->add_option("--norms", o.norms, "Norms CSV")->required();
  stats->add_option("--mgs", o.mgs_path, "Grounding set, one word per line");
  stats->add_option("--entry-p", o.entry_p, "Stepwise entry threshold")->check(CLI::Range(0.0, 1.0));
  stats->add_option("--out", o.out, "Write the report as JSON");

  auto* dot = app.add_subcommand("export-dot", "Graphviz export of the definition graph");
  add_dict(dot);
  dot->add_option("--labels", o.labels, "Labels TSV from `decompose --out` for colouring");
  dot->add_option("--out", o.out, "Output file (default: stdout)");

  auto* serve = app.add_subcommand("serve", "Run the dictionary game service");
  serve->add_option("--port", o.port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", o.host, "Address to bind");
  serve->add_option("--stoplist", o.stoplist, "Stop-word list for game definitions");
  serve->add_option("--sessions", o.sessions, "Directory for session logs (default: in memory)");
  serve->add_option("--static", o.static_dir, "Directory with the built game UI");

  auto* gen = app.add_subcommand("generate", "Seeded synthetic dictionary, norms and grounding set");
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--words", o.words, "Dictionary size")->check(CLI::Range(10, 10'000'000));
  gen->add_option("--core-fraction", o.core_fraction, "Share of words in the core");
  gen->add_option("--satellite-fraction", o.satellite_fraction, "Share of words in satellites");
  gen->add_option("--mean-length", o.mean_length, "Mean definition length");
  gen->add_option("--coverage", o.coverage, "Share of words with norms")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--effect", o.effect, "Norm shift per stratum, in noise SDs");
  gen->add_flag("--no-suppressor", o.no_suppressor, "Draw concreteness independently of imageability");
  gen->add_option("--time-limit", o.time_limit, "Solve the MGS exactly within this limit instead of greedily");
  gen->add_option("--out", o.out, "Output prefix")->required();
  bool gen_time_limit_given = false;
  gen->callback([&] { gen_time_limit_given = gen->count("--time-limit") > 0; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*decompose) return cmd_decompose(o, out, err);
    if (*mgs) return cmd_mgs(o, out, err);
    if (*stats) return cmd_stats(o, out, err);
    if (*dot) return cmd_export_dot(o, out, err);
    if (*serve) return cmd_serve(o, out, err);
    if (*gen) {
      if (!gen_time_limit_given) o.greedy = true;
      return cmd_generate(o, out, err);
    }
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace lexgraph::cli
