#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tpauc/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "tpauc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = tpauc::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return (fs::temp_directory_path() / ("tpauc_cli_" + name)).string(); }

}  // namespace

TEST_CASE("cli: usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"dual-check", "--bogus"}).code == 2);
  CHECK(run({"dual-check", "--weighting", "cubic"}).code == 2);
  CHECK(run({"dual-check", "--weighting", "poly", "--gamma", "0.5"}).code == 2);
  CHECK(run({"eval"}).code == 2);
  CHECK(run({"eval", "--scores", "x.csv", "--alpha", "1.5"}).code == 2);
}

TEST_CASE("cli: domain errors exit with 1") {
  const auto r = run({"eval", "--scores", tmp("missing.csv")});
  CHECK(r.code == 1);
  CHECK(r.err.find("cannot open") != std::string::npos);
  std::ofstream(tmp("bad.csv")) << "label,score\n1,0.5\n0,2.0\n";
  const auto b = run({"eval", "--scores", tmp("bad.csv")});
  CHECK(b.code == 1);
  CHECK(b.err.find(":3:") != std::string::npos);
}

TEST_CASE("cli: gen-data, eval and check-bound") {
  const auto scores = tmp("scores.csv");
  const auto g = run({"gen-data", "--kind", "gauss-scores", "--n-pos", "100", "--n-neg", "100", "--seed", "4", "--out", scores});
  REQUIRE(g.code == 0);
  CHECK(g.out.find("# seed = 4") != std::string::npos);
  const auto e = run({"eval", "--scores", scores, "--alpha", "0.3", "--beta", "0.3", "--opauc"});
  CHECK(e.code == 0);
  CHECK(e.out.find("tpauc(0.3,0.3) = ") != std::string::npos);
  CHECK(e.out.find("opauc(0,0.3) = ") != std::string::npos);
  const auto c = run({"check-bound", "--scores", scores, "--gamma", "3", "--alpha", "0.3", "--beta", "0.3"});
  CHECK(c.code == 0);
  CHECK(c.out.find("holds = true") != std::string::npos);
  fs::remove(scores);
}

TEST_CASE("cli: train writes model and log, eval reads them back") {
  const auto tr = tmp("train.csv"), va = tmp("val.csv"), model = tmp("model.txt"), log = tmp("log.csv"),
             trace = tmp("trace.csv");
  REQUIRE(run({"gen-data", "--kind", "gauss-2d", "--n-pos", "60", "--n-neg", "600", "--sep", "1.5", "--seed", "1", "--out", tr}).code == 0);
  REQUIRE(run({"gen-data", "--kind", "gauss-2d", "--n-pos", "60", "--n-neg", "600", "--sep", "1.5", "--seed", "2", "--out", va}).code == 0);
  const auto t = run({"train", "--data", tr, "--val", va, "--mode", "minimax-tpauc", "--epochs", "5", "--seed", "7",
                      "--out-model", model, "--log", log, "--bound-trace", trace});
  REQUIRE(t.code == 0);
  CHECK(t.out.find("# mode = minimax-tpauc") != std::string::npos);
  CHECK(t.out.find("# seed = 7") != std::string::npos);
  CHECK(fs::exists(model));
  CHECK(fs::exists(trace));
  std::ifstream in(log);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 6);
  const auto e = run({"eval", "--model", model, "--data", va});
  CHECK(e.code == 0);
  CHECK(e.out.find("tpauc(0.5,0.5) = ") != std::string::npos);
  CHECK(run({"train", "--data", tr, "--val", va, "--mode", "nope", "--out-model", model, "--log", log}).code == 2);
  CHECK(run({"train", "--data", tr, "--val", va, "--warmup-epochs", "9", "--epochs", "3", "--out-model", model, "--log", log}).code == 2);
  for (const auto& p : {tr, va, model, log, trace}) fs::remove(p);
}

TEST_CASE("cli: dual-check and inconsistency-demo") {
  const auto d = run({"dual-check", "--weighting", "exp", "--gamma", "25", "--grid", "1000"});
  CHECK(d.code == 0);
  CHECK(d.out.find("concave = true") != std::string::npos);
  const auto c = run({"dual-check", "--weighting", "poly", "--gamma", "1.5"});
  CHECK(c.code == 0);
  CHECK(c.out.find("concave = false") != std::string::npos);
  const auto w = run({"inconsistency-demo", "--seed", "0", "--trials", "10000"});
  CHECK(w.code == 0);
  CHECK(w.out.find("witness = found") != std::string::npos);
}
