#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "multiness/cli.hpp"
#include "multiness/io.hpp"
#include "multiness/tuning.hpp"

using namespace multiness;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("multiness_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

// Simulated Gaussian multiplex written to dir/net.txt.
fs::path simulate(const fs::path& dir, const std::string& n = "50", const std::string& m = "3") {
  const fs::path file = dir / "net.txt";
  const Outcome o = run_cli({"simulate", "--family", "gaussian", "--n", n, "--m", m, "--d1", "2", "--d2", "2",
                             "--sigma", "1", "--seed", "7", "--out", file.string(), "--truth-dir",
                             (dir / "truth").string()});
  EXPECT_EQ(o.code, 0) << o.err;
  return file;
}

}  // namespace

TEST(Cli, SimulateThenFitRecoversRanks) {
  const fs::path dir = scratch("smoke");
  const fs::path net = simulate(dir);
  const Outcome o = run_cli({"fit", "--input", net.string(), "--refit", "--out", (dir / "fit").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json j = read_json(dir / "fit" / "report.json");
  EXPECT_EQ(j["ranks"]["d1"], 2);
  EXPECT_EQ(j["ranks"]["d2"], Json::array({2, 2, 2}));
  EXPECT_TRUE(j["refitted"].get<bool>());
  for (const char* f : {"F.mat", "G_1.mat", "G_3.mat", "V.csv", "U_2.csv"}) EXPECT_TRUE(fs::exists(dir / "fit" / f));
  EXPECT_TRUE(fs::exists(dir / "truth" / "F.mat"));
}

TEST(Cli, MissingRequiredOptionExitsTwo) {
  const fs::path dir = scratch("missing");
  const Outcome o = run_cli({"simulate", "--m", "3", "--out", (dir / "x.txt").string()});
  EXPECT_EQ(o.code, cli::kExitInvalid);
  EXPECT_NE(o.err.find("--n"), std::string::npos) << o.err;
}

TEST(Cli, BinaryExitCodes) {
  const char* bin = std::getenv("MULTINESS_BIN");
  if (bin == nullptr) GTEST_SKIP() << "MULTINESS_BIN not set";
  const fs::path dir = scratch("binary");
  const std::string err_file = (dir / "err.txt").string();
  const int status = std::system((std::string(bin) + " simulate --m 3 --out " + (dir / "x.txt").string() + " 2> " +
                                  err_file)
                                     .c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_NE(slurp(err_file).find("--n"), std::string::npos);
  const int ok = std::system((std::string(bin) + " simulate --n 10 --m 2 --out " + (dir / "y.txt").string() +
                              " 2> /dev/null")
                                 .c_str());
  ASSERT_TRUE(WIFEXITED(ok));
  EXPECT_EQ(WEXITSTATUS(ok), 0);
}

TEST(Cli, AutoLambdaMatchesAdaptiveFormula) {
  const fs::path dir = scratch("auto");
  const fs::path net = simulate(dir);
  const Outcome o = run_cli({"fit", "--input", net.string(), "--lambda", "auto", "--delta", "0.309", "--out",
                             (dir / "fit").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const MultiplexNetwork parsed = read_multiplex(net);
  double total = 0.0;
  for (Index k = 0; k < parsed.m(); ++k) total += std::pow(sigma_mad(parsed.layer(k)), 2);
  const double sigma = std::sqrt(total / 3.0);
  const double expected = 2.309 * sigma * std::sqrt(50.0 * 3.0);
  const Json j = read_json(dir / "fit" / "report.json");
  EXPECT_NEAR(j["lambda"].get<double>(), expected, 1e-9);
  EXPECT_NEAR(j["delta"].get<double>(), 0.309, 0);
  EXPECT_EQ(j["tuning"], "adaptive_uniform");
}

TEST(Cli, NoTimingRunsAreByteIdentical) {
  const fs::path dir = scratch("golden");
  const fs::path net = simulate(dir);
  for (const char* out : {"a", "b"}) {
    const Outcome o = run_cli({"fit", "--input", net.string(), "--refit", "--no-timing", "--seed", "7", "--out",
                               (dir / out).string()});
    ASSERT_EQ(o.code, 0) << o.err;
  }
  for (const char* f : {"report.json", "F.mat", "G_1.mat", "V.csv", "U_3.csv"})
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  EXPECT_FALSE(read_json(dir / "a" / "report.json").contains("timing"));
}

TEST(Cli, InputFileIsNotModified) {
  const fs::path dir = scratch("immutable");
  const fs::path net = simulate(dir);
  const std::string before = slurp(net);
  ASSERT_EQ(run_cli({"fit", "--input", net.string(), "--out", (dir / "fit").string()}).code, 0);
  EXPECT_EQ(slurp(net), before);
}

TEST(Cli, SimulateIsReproducible) {
  const fs::path a = scratch("sim_a"), b = scratch("sim_b");
  EXPECT_EQ(slurp(simulate(a)), slurp(simulate(b)));
}

TEST(Cli, CrossvalWritesSummary) {
  const fs::path dir = scratch("cv");
  const fs::path net = simulate(dir, "40", "2");
  const Outcome o = run_cli({"crossval", "--input", net.string(), "--deltas", "0", "0.309", "--folds", "2",
                             "--no-timing", "--out", (dir / "cv").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json cv = read_json(dir / "cv" / "cv.json");
  EXPECT_EQ(cv["candidates"].size(), 2u);
  const Json rep = read_json(dir / "cv" / "report.json");
  EXPECT_EQ(rep["tuning"], "cross_validated");
  EXPECT_EQ(run_cli({"crossval", "--input", net.string(), "--deltas", "0", "--lambdas", "3", "--out",
                     (dir / "bad").string()})
                .code,
            cli::kExitInvalid);
}

TEST(Cli, EmbedWritesCoordinates) {
  const fs::path dir = scratch("embed");
  simulate(dir);
  const Outcome o =
      run_cli({"embed", "--matrix", (dir / "truth" / "F.mat").string(), "--d", "2", "--out", (dir / "v.csv").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  std::ifstream in(dir / "v.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# signature 2 0");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 50);
}

TEST(Cli, ImputeReportsBothErrors) {
  const fs::path dir = scratch("impute");
  const fs::path net = simulate(dir, "40", "3");
  const Outcome o = run_cli({"impute", "--input", net.string(), "--layer", "2", "--frac", "0.2", "--seed", "1",
                             "--out", (dir / "imp.json").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json j = read_json(dir / "imp.json");
  EXPECT_GT(j["rmse_multiness"].get<double>(), 0.0);
  EXPECT_GT(j["rmse_svt"].get<double>(), 0.0);
}

TEST(Cli, ReportWritesCsv) {
  const fs::path dir = scratch("report");
  std::ofstream(dir / "s.json") << R"({"generator": "gaussian", "n": 30, "m": [2, 3], "d1": 1, "d2": 1,
                                       "reps": 1, "seed": 3, "methods": ["multiness_plus", "oracle"]})";
  const Outcome o = run_cli({"report", "--scenario", (dir / "s.json").string(), "--out", (dir / "r.csv").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  std::ifstream in(dir / "r.csv");
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Cli, BadInputsMapToExitTwo) {
  const fs::path dir = scratch("bad");
  std::ofstream(dir / "broken.txt") << "MULTINESS v1\nn 3\nm 1\nselfloops 0\n1 1 2 oops\n";
  const Outcome parse = run_cli({"fit", "--input", (dir / "broken.txt").string(), "--out", (dir / "o").string()});
  EXPECT_EQ(parse.code, cli::kExitInvalid);
  EXPECT_NE(parse.err.find("line 5"), std::string::npos) << parse.err;
  EXPECT_EQ(run_cli({"simulate", "--n", "5", "--m", "2", "--family", "poisson", "--out", (dir / "x").string()}).code,
            cli::kExitInvalid);
  EXPECT_EQ(run_cli({"nonsense"}).code, cli::kExitInvalid);
  std::ofstream(dir / "s.json") << "{ not json";
  EXPECT_EQ(run_cli({"report", "--scenario", (dir / "s.json").string(), "--out", (dir / "r.csv").string()}).code,
            cli::kExitInvalid);
}
