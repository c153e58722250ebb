#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "haarfisher/cli.hpp"
#include "haarfisher/error.hpp"
#include "haarfisher/io.hpp"

namespace haarfisher {
namespace {

namespace fs = std::filesystem;

struct Result {
  int status = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("haarfisher_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> data_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

Json without_runtime(const fs::path& p) {
  Json j = Json::parse(slurp(p));
  j.erase("runtime");
  return j;
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

TEST(Cli, ValidateReferenceSettingsPass) {
  const Result r = run({"validate", "-N", "16", "-m", "4", "--seed", "1"});
  EXPECT_EQ(r.status, cli::kExitOk) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("PASS haar_abs4"), std::string::npos);
}

TEST(Cli, EstimateIsReproducibleAcrossWorkerCounts) {
  const fs::path a = scratch_dir("est_a");
  const fs::path b = scratch_dir("est_b");
  const std::vector<std::string> base{"estimate", "-N", "32", "-m", "5", "-K", "20000", "--seed", "7"};
  auto with = [&](const fs::path& dir, const char* workers) {
    auto args = base;
    args.insert(args.end(), {"--out", dir.string(), "--workers", workers});
    return run(args);
  };
  ASSERT_EQ(with(a, "1").status, 0);
  ASSERT_EQ(with(b, "3").status, 0);
  const Json ja = without_runtime(a / "estimate.json");
  EXPECT_EQ(ja, without_runtime(b / "estimate.json"));
  EXPECT_EQ(ja.at("schema_version"), kSchemaVersion);
  EXPECT_EQ(ja.at("config").at("seed"), 7);
  EXPECT_EQ(ja.at("ansatz").at("type"), "product-exp");
  EXPECT_EQ(ja.at("per_sample_rel_frob").size(), 20000U);
}

TEST(Cli, EmbeddedCommandLineReproducesOutput) {
  const fs::path a = scratch_dir("replay_a");
  const fs::path b = scratch_dir("replay_b");
  ASSERT_EQ(run({"estimate", "-N", "6", "-m", "2", "-K", "50", "--seed", "3", "--eps", "0.3",
                 "--format", "csv", "--out", a.string()})
                .status,
            0);
  const Json ja = without_runtime(a / "estimate.json");
  auto args = split(ja.at("config").at("command_line").get<std::string>());
  args.insert(args.end(), {"--out", b.string()});
  ASSERT_EQ(run(args).status, 0);
  EXPECT_EQ(ja, without_runtime(b / "estimate.json"));
  EXPECT_EQ(data_lines(a / "estimate_samples.csv"), data_lines(b / "estimate_samples.csv"));
  EXPECT_EQ(data_lines(a / "estimate_samples.csv").front(), "rel_frob");
  EXPECT_EQ(data_lines(a / "estimate_samples.csv").size(), 51U);
  EXPECT_TRUE(ja.contains("sandwich"));
}

TEST(Cli, SweepWritesOneRowPerDimension) {
  const fs::path dir = scratch_dir("sweep");
  const Result r = run({"sweep", "-m", "10", "--Ns", "20,40,80,160", "--trials", "100", "--seed",
                        "3", "--out", dir.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto lines = data_lines(dir / "sweep.csv");
  ASSERT_EQ(lines.size(), 5U);
  EXPECT_EQ(lines[0], "N,mean_rel,scaled,std_rel,trials,seed");
  EXPECT_EQ(lines[1].substr(0, 3), "20,");
  EXPECT_EQ(lines[4].substr(0, 4), "160,");
  const std::string text = slurp(dir / "sweep.csv");
  EXPECT_EQ(text.rfind("# haarfisher {", 0), 0U);
  EXPECT_NE(text.find("\"schema_version\":1"), std::string::npos);
}

TEST(Cli, HistTailAndBoundsArtifacts) {
  const fs::path dir = scratch_dir("artifacts");
  ASSERT_EQ(run({"hist", "-m", "3", "--Ns", "10,20", "-K", "100", "--bins", "5", "--out",
                 dir.string()})
                .status,
            0);
  const auto hist = data_lines(dir / "hist.csv");
  EXPECT_EQ(hist[0], "N,bin_left,bin_right,count");
  EXPECT_EQ(hist.size(), 11U);

  const Result tail = run({"tail", "-m", "3", "--Ns", "10", "-K", "1000", "--out", dir.string()});
  ASSERT_EQ(tail.status, 0) << tail.out << tail.err;
  EXPECT_EQ(data_lines(dir / "ccdf.csv")[0], "N,t,ccdf");
  const Json fit = Json::parse(slurp(dir / "tailfit.json"));
  EXPECT_EQ(fit.at("fits").size(), 1U);
  EXPECT_GT(fit.at("fits")[0].at("c_adjusted").get<double>(), 0.0);
  EXPECT_EQ(fit.at("bounds")[0].at("violations_total"), 0);
  EXPECT_TRUE(fit.contains("seed"));

  ASSERT_EQ(run({"bounds", "--Ns", "20,160", "--out", dir.string()}).status, 0);
  EXPECT_EQ(data_lines(dir / "bounds.csv")[0], "kind,N,m,x,threshold,probability,precondition_met");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).status, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).status, cli::kExitUsage);
  EXPECT_EQ(run({"estimate", "--no-such-flag"}).status, cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--bins", "3"}).status, cli::kExitUsage);
  EXPECT_EQ(run({"estimate", "-N", "1"}).status, cli::kExitUsage);
  EXPECT_EQ(run({"estimate", "-N", "4", "--eps", "0.7"}).status, cli::kExitUsage);
  EXPECT_EQ(run({"estimate", "-N", "4", "--format", "xml"}).status, cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--trials", "1"}).status, cli::kExitUsage);
  EXPECT_EQ(run({"estimate", "--theta-file", "/nonexistent/theta.json"}).status, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).status, cli::kExitOk);
}

TEST(Cli, ExplicitThetaIsRecorded) {
  const fs::path dir = scratch_dir("theta");
  fs::create_directories(dir);
  std::ofstream(dir / "theta.json") << "[0.1, 0.2]";
  ASSERT_EQ(run({"estimate", "-N", "5", "-m", "2", "-K", "20", "--theta-file",
                 (dir / "theta.json").string(), "--out", dir.string()})
                .status,
            0);
  const Json j = Json::parse(slurp(dir / "estimate.json"));
  EXPECT_EQ(j.at("config").at("theta_policy"), "explicit");
  EXPECT_EQ(j.at("theta")[1], 0.2);
  std::ofstream(dir / "short.json") << "[0.1]";
  EXPECT_NE(run({"estimate", "-N", "5", "-m", "2", "-K", "20", "--theta-file",
                 (dir / "short.json").string(), "--out", dir.string()})
                .status,
            0);
}

TEST(Cli, ErrorMapping) {
  std::ostringstream err;
  EXPECT_EQ(cli::report_error(std::make_exception_ptr(DegenerateFamilyError("flat")), err),
            cli::kExitFailure);
  EXPECT_NE(err.str().find("flat"), std::string::npos);
  EXPECT_EQ(cli::report_error(std::make_exception_ptr(DomainError("bad")), err), cli::kExitUsage);
  EXPECT_EQ(cli::report_error(std::make_exception_ptr(std::runtime_error("io")), err),
            cli::kExitFailure);
}

}  // namespace
}  // namespace haarfisher
