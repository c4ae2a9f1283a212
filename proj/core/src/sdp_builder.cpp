#include <cmath>
#include <string>

#include "qcomp/errors.hpp"
#include "qcomp/sdp.hpp"

namespace qcomp::sdp {

namespace {

constexpr double kDropCoeff = 1e-14;

}  // namespace

Builder::Builder(Sense sense) { problem_.sense = sense; }

std::size_t Builder::add_block(std::size_t n) {
  if (n == 0) throw DimensionMismatch("sdp::Builder: empty block");
  problem_.blocks.push_back(n);
  const auto k = static_cast<Eigen::Index>(n);
  problem_.objective.push_back(CMatrix::Zero(k, k));
  return problem_.blocks.size() - 1;
}

std::size_t Builder::block_size(std::size_t block) const {
  if (block >= problem_.blocks.size()) {
    throw DimensionMismatch("sdp::Builder: unknown block " +
                            std::to_string(block));
  }
  return problem_.blocks[block];
}

void Builder::add_objective(std::size_t block, const CMatrix& coeff) {
  const std::size_t n = block_size(block);
  if (static_cast<std::size_t>(coeff.rows()) != n ||
      static_cast<std::size_t>(coeff.cols()) != n) {
    throw DimensionMismatch("sdp::Builder::add_objective: size mismatch");
  }
  problem_.objective[block] += hermitian_part(coeff);
}

void Builder::add_objective(std::size_t block, const LinearFunctional& f) {
  const std::size_t n = block_size(block);
  const auto k = static_cast<Eigen::Index>(n);
  CMatrix coeff = CMatrix::Zero(k, k);
  for (const CMatrix& g : hermitian_basis(n)) coeff += f(g) * g;
  problem_.objective[block] += coeff;
}

void Builder::add_scalar_equality(std::vector<Term> terms, double rhs) {
  Constraint c;
  c.rhs = rhs;
  for (Term& t : terms) {
    const std::size_t n = block_size(t.block);
    if (static_cast<std::size_t>(t.coeff.rows()) != n ||
        static_cast<std::size_t>(t.coeff.cols()) != n) {
      throw DimensionMismatch("sdp::Builder::add_scalar_equality: size mismatch");
    }
    t.coeff = hermitian_part(t.coeff);
    c.terms.push_back(std::move(t));
  }
  problem_.constraints.push_back(std::move(c));
}

void Builder::add_matrix_equality(
    const std::vector<std::pair<std::size_t, LinearMap>>& terms,
    const CMatrix& rhs) {
  if (rhs.rows() != rhs.cols()) {
    throw DimensionMismatch("sdp::Builder::add_matrix_equality: rhs not square");
  }
  const auto m = static_cast<std::size_t>(rhs.rows());
  const std::size_t rows = m * m;

  struct Lifted {
    std::size_t block;
    std::vector<CMatrix> basis;
    Eigen::MatrixXd coords;  // rows x basis.size(); column p = coords of L(G_p)
  };
  std::vector<Lifted> lifted;
  lifted.reserve(terms.size());
  for (const auto& [block, map] : terms) {
    const std::size_t n = block_size(block);
    Lifted l{block, hermitian_basis(n), {}};
    l.coords.resize(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(l.basis.size()));
    for (std::size_t p = 0; p < l.basis.size(); ++p) {
      const CMatrix image = map(l.basis[p]);
      if (static_cast<std::size_t>(image.rows()) != m ||
          static_cast<std::size_t>(image.cols()) != m) {
        throw DimensionMismatch(
            "sdp::Builder::add_matrix_equality: map output is " +
            std::to_string(image.rows()) + "x" + std::to_string(image.cols()) +
            ", expected " + std::to_string(m));
      }
      if (!is_hermitian(image, 1e-10)) {
        throw NotHermitian(
            "sdp::Builder::add_matrix_equality: map is not Hermitian-preserving");
      }
      l.coords.col(static_cast<Eigen::Index>(p)) = hermitian_coordinates(image);
    }
    lifted.push_back(std::move(l));
  }

  const RVector rhs_coords = hermitian_coordinates(hermitian_part(rhs));
  for (std::size_t q = 0; q < rows; ++q) {
    Constraint c;
    c.rhs = rhs_coords(static_cast<Eigen::Index>(q));
    for (const Lifted& l : lifted) {
      const auto row = l.coords.row(static_cast<Eigen::Index>(q));
      if (row.cwiseAbs().maxCoeff() <= kDropCoeff) continue;
      const auto n = static_cast<Eigen::Index>(block_size(l.block));
      CMatrix coeff = CMatrix::Zero(n, n);
      for (std::size_t p = 0; p < l.basis.size(); ++p) {
        const double w = row(static_cast<Eigen::Index>(p));
        if (std::abs(w) > kDropCoeff) coeff += w * l.basis[p];
      }
      c.terms.push_back(Term{l.block, std::move(coeff)});
    }
    if (c.terms.empty() && std::abs(c.rhs) <= kDropCoeff) continue;
    problem_.constraints.push_back(std::move(c));
  }
}

Problem Builder::build() && { return std::move(problem_); }

}  // namespace qcomp::sdp
