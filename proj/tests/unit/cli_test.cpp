#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "selfsim/cli.hpp"

using namespace selfsim;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = cli::dispatch(args, out, err);
  return {status, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content = {}) {
  auto p = std::filesystem::temp_directory_path() / ("selfsim_cli_" + name);
  if (!content.empty()) std::ofstream(p) << content;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TreeAutomorphism corpus_aut(const std::string& name) { return parse_automaton(corpus::find(name).text); }

}  // namespace

TEST(Cli, Classify) {
  auto r = run({"classify", "corpus:grigorchuk"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "a: Finitary(1)\nb: Bounded(2)\nc: Bounded(2)\nd: Bounded(2)\n");
  r = run({"classify", "corpus:odometer", "--profile", "3"});
  EXPECT_EQ(r.out, "Bounded(1)\nactivity: 1 1 1 1\n");
}

TEST(Cli, EvalSectionMulInv) {
  EXPECT_EQ(run({"eval", "corpus:odometer", "-v", "1101"}).out, "0011\n");
  auto sec = run({"section", "corpus:grigorchuk-b", "-v", "1"});
  EXPECT_EQ(sec.status, 0);
  EXPECT_EQ(parse_automaton(sec.out), corpus_aut("grigorchuk-c"));

  auto a = corpus_aut("odometer");
  auto mul = run({"mul", "corpus:odometer", "corpus:odometer"});
  EXPECT_EQ(parse_automaton(mul.out), compose(a, a));
  auto inv = run({"inv", "corpus:odometer"});
  EXPECT_EQ(parse_automaton(inv.out), inverse(a));
}

TEST(Cli, DecomposeAndEnds) {
  auto d = run({"decompose", "corpus:odometer", "--level", "2"});
  EXPECT_EQ(d.out, "level: 2\naction: cycles (0 1) [1: cycles (0 1)]\nsection 11: a (1 nontrivial states)\n");
  EXPECT_EQ(run({"singular", "corpus:grigorchuk-d"}).out, "(1)\n");
  EXPECT_EQ(run({"singular", "corpus:grigorchuk-a"}).out, "none\n");
  EXPECT_EQ(run({"ends-eval", "corpus:odometer", "-w", "(10)"}).out, "01.(10)\n");
}

TEST(Cli, Schreier) {
  auto dot = temp_file("orbital.dot");
  auto r = run({"schreier", "corpus:grigorchuk", "--orbital", "-w", "(1)", "--radius", "6", "--dot", dot});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("vertices: 7\n"), std::string::npos);
  EXPECT_NE(slurp(dot).find("graph \"orbital\""), std::string::npos);
  auto lvl = run({"schreier", "corpus:basilica", "--level", "3", "--radius", "10"});
  EXPECT_NE(lvl.out.find("vertices: 8\n"), std::string::npos);
  EXPECT_EQ(run({"schreier", "corpus:basilica", "--radius", "3"}).status, cli::kUsageError);
}

TEST(Cli, WalkAndReff) {
  auto w = run({"walk", "--exhaustion", "line", "--radius", "50", "--steps", "400", "--trials", "200", "--seed", "3"});
  EXPECT_EQ(w.status, 0) << w.err;
  EXPECT_NE(w.out.find("return_fraction: "), std::string::npos);
  EXPECT_EQ(w.out, run({"walk", "--exhaustion", "line", "--radius", "50", "--steps", "400", "--trials", "200",
                        "--seed", "3"})
                       .out);
  EXPECT_EQ(run({"walk", "--exhaustion", "line", "--steps", "10", "--trials", "10"}).status, cli::kUsageError);

  auto net = temp_file("square.net", "a b\nb c\nc d\nd a\n#boundary\nc\n");
  auto nw = run({"walk", "--net", net, "--start", "a", "--steps", "10", "--trials", "10", "--seed", "1"});
  EXPECT_EQ(nw.status, 0) << nw.err;

  auto csv = temp_file("reff.csv");
  auto r = run({"reff", "--exhaustion", "line", "--levels", "1..4", "--csv", csv});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(slurp(csv), "level,value\n1,0.5\n2,1\n3,1.5\n4,2\n");
  auto orb = run({"reff", "corpus:grigorchuk", "--orbital", "-w", "(1)", "--levels", "1..6"});
  EXPECT_EQ(orb.status, 0) << orb.err;
  EXPECT_NE(orb.out.find("6,2.25\n"), std::string::npos);
}

TEST(Cli, NashWilliams) {
  auto cuts = temp_file("cuts.txt", "2 2 2 2\n");
  auto r = run({"nashwilliams", "--cuts", cuts, "--bound", "2"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("4,2\n"), std::string::npos);
  EXPECT_NE(r.out.find("certified-divergent"), std::string::npos);
  auto bad = temp_file("badcuts.txt", "2 x\n");
  EXPECT_EQ(run({"nashwilliams", "--cuts", bad}).status, cli::kDataError);
}

TEST(Cli, CriterionExitCodes) {
  auto json = temp_file("report.json");
  auto r = run({"criterion", "corpus:z-directed-group", "--json", json, "--radius-cap", "8"});
  EXPECT_EQ(r.status, 0) << r.out << r.err;
  EXPECT_NE(slurp(json).find("\"verdict\": \"criterion-satisfied\""), std::string::npos);
  auto unk = run({"criterion", "corpus:z-directed-group", "--recurrence", "unknown", "--radius-cap", "8"});
  EXPECT_EQ(unk.status, 2);
  auto wrong = run({"criterion", "corpus:z-directed-group", "--pclass", "fin-supp"});
  EXPECT_EQ(wrong.status, 3);
  EXPECT_EQ(run({"criterion", "corpus:odometer"}).status, cli::kUsageError);
}

TEST(Cli, Errors) {
  EXPECT_EQ(run({}).status, cli::kUsageError);
  EXPECT_EQ(run({"frobnicate"}).status, cli::kUsageError);
  EXPECT_EQ(run({"eval", "/nonexistent/file.aut", "-v", "0"}).status, cli::kNoInput);
  auto bad = temp_file("bad.aut", "alphabet 0 1\nstate a output cycles (0 5)\ninitial a\n");
  auto r = run({"classify", bad});
  EXPECT_EQ(r.status, cli::kDataError);
  EXPECT_NE(r.err.find(":2:"), std::string::npos);
  EXPECT_EQ(run({"eval", "corpus:odometer", "-v", "012"}).status, cli::kDataError);
  EXPECT_EQ(run({"--help"}).status, 0);
}

TEST(Cli, Corpus) {
  auto list = run({"corpus", "list"});
  EXPECT_NE(list.out.find("basilica  (group)\n"), std::string::npos);
  EXPECT_EQ(run({"corpus", "show", "odometer"}).out, std::string(corpus::find("odometer").text));
  auto comb = run({"corpus", "run", "comb"});
  EXPECT_NE(comb.out.find("recurrent-evidence"), std::string::npos);
  EXPECT_EQ(run({"corpus", "run"}).status, cli::kUsageError);
}
