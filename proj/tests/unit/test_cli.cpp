#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "lexgraph/service.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run lexgraph_run(std::vector<std::string> args) {
  args.insert(args.begin(), "lexgraph");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = lexgraph::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_dictionary(const fs::path& p, const std::map<std::string, std::vector<std::string>>& defs) {
  std::ofstream out(p);
  for (const auto& [w, d] : defs) out << json{{"word", w}, {"senses", {{{"rank", 1}, {"tokens", d}}}}}.dump() << "\n";
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = 0; (pos = text.find(needle, pos)) != std::string::npos; pos += needle.size()) ++n;
  return n;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          (std::string("lexgraph_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
    f1 = (dir / "f1.jsonl").string();
    f2 = (dir / "f2.jsonl").string();
    write_dictionary(f1, lexgraph::testing::fixture_f1());
    write_dictionary(f2, lexgraph::testing::fixture_f2());
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }

  fs::path dir;
  std::string f1, f2;
};

}  // namespace

TEST_F(Cli, DecomposeF2Table) {
  auto r = lexgraph_run({"decompose", f2, "--keep-stop-words", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["D"]["count"], 5);
  EXPECT_EQ(j["K"]["count"], 4);
  EXPECT_EQ(j["C"]["count"], 2);
  EXPECT_EQ(j["S"]["count"], 2);

  auto table = lexgraph_run({"decompose", f2, "--keep-stop-words", "--out", path("labels.tsv")});
  ASSERT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("Kernel (K)"), std::string::npos);
  EXPECT_EQ(slurp(path("labels.tsv")), "a\tCORE\nb\tCORE\nc\tSATELLITE\nd\tSATELLITE\ne\tOUTSIDE\n");
  auto m = json::parse(slurp(path("labels.tsv.manifest.json")));
  EXPECT_EQ(m["command"], "decompose");
  EXPECT_EQ(m["inputs"]["dictionary"], f2);
  EXPECT_TRUE(m.contains("version"));
  EXPECT_TRUE(m.contains("wall_seconds"));
}

TEST_F(Cli, DefaultStopListDropsFunctionWords) {
  // "a" is an English function word: it stays a headword but leaves every
  // definition, which breaks the a <-> b cycle.
  auto r = lexgraph_run({"decompose", f2, "--json"});
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["D"]["count"], 5);
  EXPECT_EQ(j["K"]["count"], 3);  // b feeds the c <-> d cycle
}

TEST_F(Cli, TsvInputAndCustomStopList) {
  std::ofstream(path("d.tsv")) << "x\t1\ty the\ny\t1\tx\ny\t2\tignored\n";
  std::ofstream(path("stop.txt")) << "# comment\nthe\n";
  auto r = lexgraph_run({"decompose", path("d.tsv"), "--stoplist", path("stop.txt"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["D"]["count"], 2);
  EXPECT_EQ(j["K"]["count"], 2);
}

TEST_F(Cli, EmptyDictionaryGivesZeroTable) {
  std::ofstream(path("empty.jsonl")).flush();
  auto r = lexgraph_run({"decompose", path("empty.jsonl"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["D"]["count"], 0);
  EXPECT_EQ(j["K"]["count"], 0);
}

TEST_F(Cli, InputErrorsExitTwo) {
  auto missing = lexgraph_run({"decompose", path("nope.jsonl")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("nope.jsonl"), std::string::npos);
  std::ofstream(path("bad.jsonl")) << "{\"word\": 3}\n";
  EXPECT_EQ(lexgraph_run({"decompose", path("bad.jsonl")}).code, 2);
  EXPECT_EQ(lexgraph_run({"decompose"}).code, 2);
  EXPECT_EQ(lexgraph_run({"mgs", f1, "--time-limit", "-1"}).code, 2);
  EXPECT_EQ(lexgraph_run({"frobnicate"}).code, 2);
  EXPECT_EQ(lexgraph_run({"decompose", f2, "--stoplist", path("s.txt"), "--keep-stop-words"}).code, 2);
}

TEST_F(Cli, HelpAndVersionExitZero) {
  EXPECT_EQ(lexgraph_run({"--help"}).code, 0);
  auto v = lexgraph_run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_FALSE(v.out.empty());
}

TEST_F(Cli, MgsF1Enumerates) {
  auto r = lexgraph_run({"mgs", f1, "--keep-stop-words", "--enumerate", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("MGS size: 1 (optimal)"), std::string::npos);
  EXPECT_NE(r.out.find("optimal sets (2)"), std::string::npos);
  EXPECT_NE(r.out.find("1: a\n"), std::string::npos);
  EXPECT_NE(r.out.find("2: b\n"), std::string::npos);
}

TEST_F(Cli, MgsF2StraddleAndOutput) {
  auto r = lexgraph_run({"mgs", f2, "--keep-stop-words", "--out", path("mgs.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("MGS size: 2 (optimal)"), std::string::npos);
  EXPECT_NE(r.out.find("straddle: in_core=1 in_satellite=1 outside_kernel=0"), std::string::npos);
  EXPECT_EQ(slurp(path("mgs.txt")), "a\nc\n");
  auto m = json::parse(slurp(path("mgs.txt.manifest.json")));
  EXPECT_EQ(m["result"]["size"], 2);
}

TEST_F(Cli, MgsTimeLimitFlagsNonOptimal) {
  std::mt19937_64 rng(1);
  auto g = lexgraph::testing::random_digraph(5000, 0.002, rng);
  std::map<std::string, std::vector<std::string>> defs;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) defs[g.name(static_cast<lexgraph::VertexId>(v))];
  for (auto [u, v] : g.arcs()) defs[g.name(v)].push_back(g.name(u));
  write_dictionary(path("big.jsonl"), defs);
  auto r = lexgraph_run({"mgs", path("big.jsonl"), "--time-limit", "0.001"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("not proven optimal; lower bound"), std::string::npos) << r.out;
}

TEST_F(Cli, ExportDotColouredAndDeterministic) {
  ASSERT_EQ(lexgraph_run({"decompose", f2, "--keep-stop-words", "--out", path("labels.tsv")}).code, 0);
  auto r = lexgraph_run({"export-dot", f2, "--keep-stop-words", "--labels", path("labels.tsv"), "--out", path("a.dot")});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(lexgraph_run({"export-dot", f2, "--keep-stop-words", "--labels", path("labels.tsv"), "--out", path("b.dot")}).code, 0);
  const auto dot = slurp(path("a.dot"));
  EXPECT_EQ(dot, slurp(path("b.dot")));
  EXPECT_EQ(count(dot, "->"), 8u);
  std::set<std::string> nodes, colours;
  std::regex node(R"re(^\s*"([^"]+)"\s*(\[|;))re");
  std::regex colour(R"re(fillcolor="([a-z]+)")re");
  std::istringstream lines(dot);
  for (std::string line; std::getline(lines, line);) {
    std::smatch m;
    if (line.find("->") == std::string::npos && std::regex_search(line, m, node)) nodes.insert(m[1]);
    if (std::regex_search(line, m, colour)) colours.insert(m[1]);
  }
  EXPECT_EQ(nodes.size(), 5u);
  EXPECT_EQ(colours, (std::set<std::string>{"gold", "lightgrey", "tomato"}));

  auto plain = lexgraph_run({"export-dot", f2, "--keep-stop-words"});
  ASSERT_EQ(plain.code, 0);
  EXPECT_EQ(plain.out.find("fillcolor"), std::string::npos);
  EXPECT_EQ(count(plain.out, "->"), 8u);
}

TEST_F(Cli, StatsWithZeroCoverageWarnsOnly) {
  std::ofstream(path("norms.csv")) << "word,aoa,concreteness,imageability,freq_written,freq_oral\nzebra,3,4,5,6,7\n";
  auto r = lexgraph_run({"stats", f2, "--keep-stop-words", "--norms", path("norms.csv"), "--out", path("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("no tables"), std::string::npos);
  EXPECT_EQ(r.out.find("ANOVA"), std::string::npos);
  auto j = json::parse(slurp(path("s.json")));
  EXPECT_EQ(j["coverage"], 0.0);
  EXPECT_FALSE(j.contains("anova"));
}

TEST_F(Cli, GenerateThenStatsReproducesPlantedOrdering) {
  const auto prefix = path("syn");
  auto g = lexgraph_run({"generate", "--seed", "5", "--words", "3000", "--out", prefix});
  ASSERT_EQ(g.code, 0) << g.err;
  for (auto ext : {".jsonl", ".norms.csv", ".mgs.txt", ".manifest.json"}) EXPECT_TRUE(fs::exists(prefix + ext)) << ext;

  auto again = lexgraph_run({"generate", "--seed", "5", "--words", "3000", "--out", path("syn2")});
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(slurp(prefix + ".jsonl"), slurp(path("syn2.jsonl")));
  EXPECT_EQ(slurp(prefix + ".norms.csv"), slurp(path("syn2.norms.csv")));

  auto d = lexgraph_run({"decompose", prefix + ".jsonl", "--json"});
  ASSERT_EQ(d.code, 0);
  auto report = json::parse(d.out);
  EXPECT_TRUE(report["core_is_single_scc"].get<bool>()) << report.dump();
  const double k = report["K"]["count"].get<double>() / report["D"]["count"].get<double>();
  EXPECT_GE(k, 0.02);
  EXPECT_LE(k, 0.20);

  auto s = lexgraph_run({"stats", prefix + ".jsonl", "--norms", prefix + ".norms.csv", "--mgs", prefix + ".mgs.txt",
                         "--out", path("stats.json")});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_NE(s.out.find("One-way ANOVA"), std::string::npos);
  auto j = json::parse(slurp(path("stats.json")));
  for (const auto& [var, rows] : j["strata"].items()) {
    std::map<std::string, double> mean;
    for (const auto& row : rows) mean[row["stratum"]] = row["mean"].get<double>();
    const double dir = var == "aoa" ? -1 : 1;
    EXPECT_GT(dir * (mean["MGS"] - mean["Core (non-MGS)"]), 0) << var;
    EXPECT_GT(dir * (mean["Core (non-MGS)"] - mean["Satellites (non-MGS)"]), 0) << var;
    EXPECT_GT(dir * (mean["Satellites (non-MGS)"] - mean["Rest (D-K)"]), 0) << var;
    EXPECT_GT(dir * (mean["Kernel"] - mean["Rest (D-K)"]), 0) << var;
  }

  // The planted suppressor shows up as a reversed concreteness sign for K vs D-K.
  bool reversed = false;
  for (const auto& reg : j["regression"]) {
    if (reg["split"] != "K vs D-K") continue;
    for (const auto& step : reg["steps"])
      if (step["variable"] == "concreteness")
        reversed = step["r"].get<double>() > 0 && step["beta"].get<double>() < 0;
  }
  EXPECT_TRUE(reversed) << j["regression"].dump(2);
  EXPECT_NE(s.out.find("(reversed)"), std::string::npos);
}

TEST_F(Cli, ServeBindFailureExitsTwo) {
  lexgraph::SessionStore store(nullptr);
  lexgraph::GameService holder(store, {});
  const int port = holder.bind(0);
  auto r = lexgraph_run({"serve", "--port", std::to_string(port)});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("cannot bind"), std::string::npos);
}
