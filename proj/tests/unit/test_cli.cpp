#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcomp/cli.hpp"
#include "qcomp/io.hpp"

using qcomp::io::json;
namespace cli = qcomp::cli;

namespace {

const std::string kData = QCOMP_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> lines(const std::string& s) {
  std::vector<json> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

std::filesystem::path temp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qcomp_cli_" + name);
}

}  // namespace

TEST(Cli, DeficiencyOfIdentityWithItself) {
  const Result r = run({"deficiency", "--phi", kData + "/id2.json", "--psi", kData + "/id2.json"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 0.0, 1e-7);
  EXPECT_EQ(j["command"], "deficiency");
  for (const char* key : {"inputs", "certificates", "certified_gap", "residuals", "wall_time"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_FALSE(j["certificates"].empty());
  EXPECT_LE(j["certified_gap"].get<double>(), 1e-7);
}

TEST(Cli, DiamondOfPauliCqMap) {
  const Result r = run({"diamond", "--map", kData + "/cq_paulis.json"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), 2.0, 1e-6);
}

TEST(Cli, DualAndLecam) {
  const Result dual = run({"dual", "--map", kData + "/id2.json"});
  ASSERT_EQ(dual.code, cli::kOk) << dual.err;
  EXPECT_NEAR(json::parse(dual.out)["value"].get<double>(), 4.0, 1e-6);
  const Result lecam = run({"lecam", "--phi", kData + "/id2.json", "--psi", kData + "/dep05.json"});
  ASSERT_EQ(lecam.code, cli::kOk) << lecam.err;
  EXPECT_GT(json::parse(lecam.out)["value"].get<double>(), 0.1);
}

TEST(Cli, MinimaxSuiteHasNoViolations) {
  const Result r = run({"verify", "--suite", "thm1", "--phi", kData + "/id2.json", "--psi",
                        kData + "/dep05.json", "--trials", "100", "--seed", "7"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const std::vector<json> ls = lines(r.out);
  ASSERT_EQ(ls.size(), 101u);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_TRUE(ls[i]["pass"].get<bool>());
  EXPECT_TRUE(ls.back()["summary"].get<bool>());
  EXPECT_EQ(ls.back()["violations"].get<std::size_t>(), 0u);
}

TEST(Cli, OtherChannelSuites) {
  for (const char* suite : {"prop7", "coro1"}) {
    const Result r = run({"verify", "--suite", suite, "--phi", kData + "/id2.json", "--psi",
                          kData + "/dep05.json", "--trials", "3"});
    ASSERT_EQ(r.code, cli::kOk) << suite << r.err;
    EXPECT_EQ(lines(r.out).size(), 4u);
  }
}

TEST(Cli, GenIsDeterministic) {
  const Result a = run({"gen", "channel", "--din", "2", "--dout", "2", "--seed", "1"});
  const Result b = run({"gen", "channel", "--din", "2", "--dout", "2", "--seed", "1"});
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Result c = run({"gen", "channel", "--din", "2", "--dout", "2", "--seed", "2"});
  EXPECT_NE(a.out, c.out);
  const qcomp::HermitianMap phi = qcomp::io::map_from_json(json::parse(a.out));
  EXPECT_TRUE(qcomp::is_channel(phi));
}

TEST(Cli, GenEnsembleWeightsSumToOne) {
  const Result r = run({"gen", "ensemble", "--dim", "2", "--n", "4", "--seed", "3"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const json e = json::parse(r.out);
  double total = 0.0;
  for (const json& it : e["items"]) total += it["weight"].get<double>();
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Cli, GeneratedExperimentAgainstItself) {
  const auto path = temp("exp.json");
  ASSERT_EQ(run({"gen", "experiment", "--dim", "2", "--n", "3", "--seed", "4", "--output",
                 path.string()})
                .code,
            cli::kOk);
  const Result r = run({"exp-deficiency", "--s", path.string(), "--t", path.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), 0.0, 1e-7);

  const Result v = run({"exp-verify", "--suite", "thm4", "--s", path.string(), "--t",
                        path.string(), "--trials", "3"});
  EXPECT_EQ(v.code, cli::kOk) << v.err;
  const Result c = run({"exp-verify", "--suite", "coro2", "--s", path.string(), "--t",
                        path.string(), "--trials", "2"});
  EXPECT_EQ(c.code, cli::kOk) << c.err;

  const Result lc = run({"lecam-classical", "--s", path.string(), "--t", path.string()});
  EXPECT_EQ(lc.code, cli::kValidation);
  EXPECT_EQ(json::parse(lc.err)["error"], "ValidationError");
  std::filesystem::remove(path);
}

TEST(Cli, ClassicalLecamDistance) {
  const auto s = temp("s.json"), t = temp("t.json");
  qcomp::io::write_json(s, json::parse(R"({"dim": 2, "labels": ["a", "b"], "states": {
      "a": [[1, 0], [0, 0]], "b": [[0, 0], [0, 1]]}})"));
  qcomp::io::write_json(t, json::parse(R"({"dim": 2, "labels": ["a", "b"], "states": {
      "a": [[0.5, 0], [0, 0.5]], "b": [[0.5, 0], [0, 0.5]]}})"));
  const Result r = run({"lecam-classical", "--s", s.string(), "--t", t.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const json j = json::parse(r.out);
  // The uninformative experiment reproduces the informative one only up to 1/2.
  EXPECT_NEAR(j["values"]["delta_st"].get<double>(), 0.5, 1e-7);
  EXPECT_NEAR(j["values"]["delta_ts"].get<double>(), 0.0, 1e-7);
  EXPECT_NEAR(j["value"].get<double>(), 0.5, 1e-7);
  std::filesystem::remove(s);
  std::filesystem::remove(t);
}

TEST(Cli, PsuccAndEnsembleFromMap) {
  const auto e = temp("ens.json");
  ASSERT_EQ(run({"ensemble-from-map", "--map", kData + "/id2.json", "--output", e.string()}).code,
            cli::kOk);
  const json report = qcomp::io::read_json(e);
  EXPECT_EQ(report["value"].get<std::size_t>(), 4u);
  qcomp::io::write_json(e, report["ensemble"]);
  const Result r = run({"psucc", "--ensemble", e.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  // Four Bell states are perfectly distinguishable.
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), 1.0, 1e-6);
  std::filesystem::remove(e);
}

TEST(Cli, ErrorsAreStructured) {
  const Result missing = run({"diamond", "--map", "/nonexistent/map.json"});
  EXPECT_EQ(missing.code, cli::kValidation);
  EXPECT_EQ(json::parse(missing.err)["error"], "ValidationError");
  EXPECT_TRUE(missing.out.empty());

  EXPECT_EQ(run({"frobnicate"}).code, cli::kValidation);
  EXPECT_EQ(run({"verify", "--suite", "nope", "--phi", "a", "--psi", "b"}).code, cli::kValidation);
  EXPECT_EQ(run({"diamond", "--map", kData + "/id2.json", "--tol", "-1"}).code, cli::kValidation);

  const Result mismatch =
      run({"deficiency", "--phi", kData + "/id2.json", "--psi", kData + "/../data/id2.json"});
  EXPECT_EQ(mismatch.code, cli::kOk);
  EXPECT_EQ(run({"help"}).code, cli::kValidation);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}
