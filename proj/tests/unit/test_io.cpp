#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "qcomp/errors.hpp"
#include "qcomp/io.hpp"

using namespace qcomp;
using qcomp::io::json;

TEST(Io, MatrixRoundTripIsExact) {
  rng::Stream s(1);
  const CMatrix m = ginibre(3, 3, s);
  const CMatrix back = io::matrix_from_json(json::parse(io::matrix_to_json(m).dump()));
  EXPECT_TRUE(back == m);
}

TEST(Io, RealEntriesAccepted) {
  const CMatrix m = io::matrix_from_json(json::parse("[[1, 0], [0, 2.5]]"));
  EXPECT_EQ(m(1, 1), Complex(2.5, 0.0));
}

TEST(Io, MapEnsembleExperimentRoundTrip) {
  rng::Stream s(2);
  const HermitianMap phi = random_channel(2, 3, s);
  const HermitianMap phi2 = io::map_from_json(io::to_json(phi));
  EXPECT_EQ(phi2.dims(), phi.dims());
  EXPECT_TRUE(phi2.choi() == phi.choi());

  const Ensemble e = random_ensemble(2, 3, s);
  const Ensemble e2 = io::ensemble_from_json(io::to_json(e));
  ASSERT_EQ(e2.size(), e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_EQ(e2.items()[i].weight, e.items()[i].weight);
    EXPECT_TRUE(e2.items()[i].state == e.items()[i].state);
  }

  const Experiment t = random_experiment(2, 3, s);
  const Experiment t2 = io::experiment_from_json(io::to_json(t));
  EXPECT_EQ(t2.labels(), t.labels());
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_TRUE(t2.states()[i] == t.states()[i]);
}

TEST(Io, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "qcomp_io_test.json";
  const json j = io::to_json(HermitianMap::identity(2));
  io::write_json(path, j);
  EXPECT_EQ(io::read_json(path), j);
  std::filesystem::remove(path);
}

TEST(Io, Errors) {
  EXPECT_THROW(io::read_json("/nonexistent/qcomp.json"), ValidationError);
  const auto path = std::filesystem::temp_directory_path() / "qcomp_io_bad.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(io::read_json(path), ValidationError);
  std::filesystem::remove(path);

  EXPECT_THROW(io::matrix_from_json(json::parse("[[1, 2], [3]]")), ValidationError);
  EXPECT_THROW(io::matrix_from_json(json::parse("\"x\"")), ValidationError);
  EXPECT_THROW(io::map_from_json(json::parse("{\"d_in\": 2}")), ValidationError);
  json bad = io::to_json(HermitianMap::identity(2));
  bad["d_out"] = 3;
  EXPECT_THROW(io::map_from_json(bad), ValidationError);
}
