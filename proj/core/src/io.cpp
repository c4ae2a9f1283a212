#include "qcomp/io.hpp"

#include <fstream>

#include "qcomp/errors.hpp"

namespace qcomp::io {

namespace {

using Idx = Eigen::Index;

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string("JSON record is missing field '") + key + "'");
  }
  return j.at(key);
}

std::size_t positive_dim(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw DimensionMismatch(std::string("JSON field '") + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Idx r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Idx c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw ShapeError("matrix must be a non-empty array of rows");
  }
  const auto rows = static_cast<Idx>(j.size());
  const auto cols = static_cast<Idx>(j.front().size());
  CMatrix m(rows, cols);
  for (Idx r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Idx>(row.size()) != cols) {
      throw ShapeError("matrix rows differ in length");
    }
    for (Idx c = 0; c < cols; ++c) {
      const json& z = row[static_cast<std::size_t>(c)];
      if (z.is_number()) {
        m(r, c) = z.get<double>();
      } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
        m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
      } else {
        throw ShapeError("matrix entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

json to_json(const HermitianMap& phi) {
  return {{"d_in", phi.d_in()}, {"d_out", phi.d_out()}, {"choi", matrix_to_json(phi.choi())}};
}

json to_json(const Ensemble& e) {
  json items = json::array();
  for (const EnsembleItem& it : e.items()) {
    items.push_back({{"weight", it.weight}, {"state", matrix_to_json(it.state)}});
  }
  return {{"dim", e.dim()}, {"items", std::move(items)}};
}

json to_json(const Experiment& t) {
  json states = json::object();
  for (std::size_t i = 0; i < t.size(); ++i) {
    states[t.labels()[i]] = matrix_to_json(t.states()[i]);
  }
  return {{"dim", t.dim()}, {"labels", t.labels()}, {"states", std::move(states)}};
}

json to_json(const sdp::Certificate& c) {
  return {{"status", sdp::to_string(c.status)},
          {"primal_value", c.primal_value},
          {"dual_value", c.dual_value},
          {"gap", c.gap},
          {"primal_infeas", c.primal_infeas},
          {"dual_infeas", c.dual_infeas},
          {"iterations", c.iterations}};
}

HermitianMap map_from_json(const json& j) {
  const std::size_t d_in = positive_dim(j, "d_in");
  const std::size_t d_out = positive_dim(j, "d_out");
  return HermitianMap(d_in, d_out, matrix_from_json(field(j, "choi")));
}

Ensemble ensemble_from_json(const json& j) {
  const std::size_t dim = positive_dim(j, "dim");
  const json& arr = field(j, "items");
  if (!arr.is_array() || arr.empty()) throw SizeMismatch("ensemble has no items");
  std::vector<EnsembleItem> items;
  for (const json& it : arr) {
    const json& w = field(it, "weight");
    if (!w.is_number()) throw ValidationError("ensemble weight must be a number");
    CMatrix st = matrix_from_json(field(it, "state"));
    if (static_cast<std::size_t>(st.rows()) != dim || st.rows() != st.cols()) {
      throw DimensionMismatch("ensemble state does not match dim " + std::to_string(dim));
    }
    items.push_back({w.get<double>(), std::move(st)});
  }
  return Ensemble(std::move(items));
}

Experiment experiment_from_json(const json& j) {
  const std::size_t dim = positive_dim(j, "dim");
  const json& labels = field(j, "labels");
  const json& states = field(j, "states");
  if (!labels.is_array() || !states.is_object()) {
    throw ValidationError("experiment needs a label array and a state object");
  }
  std::vector<std::string> l;
  std::vector<CMatrix> st;
  for (const json& x : labels) {
    if (!x.is_string()) throw ValidationError("experiment labels must be strings");
    const std::string name = x.get<std::string>();
    if (!states.contains(name)) throw LabelMismatch("experiment has no state for '" + name + "'");
    st.push_back(matrix_from_json(states.at(name)));
    if (static_cast<std::size_t>(st.back().rows()) != dim) {
      throw DimensionMismatch("experiment state '" + name + "' does not match dim");
    }
    l.push_back(name);
  }
  if (states.size() != l.size()) throw LabelMismatch("experiment has states without labels");
  return Experiment(std::move(l), std::move(st));
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace qcomp::io
