#include "qcomp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qcomp/errors.hpp"

namespace qcomp {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(what) + ": matrix is not square (" +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ")");
  }
}

void require_size(const CMatrix& m, std::size_t n, const char* what) {
  require_square(m, what);
  if (static_cast<std::size_t>(m.rows()) != n) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " +
                            std::to_string(n) + ", got " +
                            std::to_string(m.rows()));
  }
}

}  // namespace

CMatrix identity(std::size_t d) {
  return CMatrix::Identity(static_cast<Eigen::Index>(d),
                           static_cast<Eigen::Index>(d));
}

CMatrix matrix_unit(std::size_t d, std::size_t i, std::size_t j) {
  CMatrix e = CMatrix::Zero(static_cast<Eigen::Index>(d),
                            static_cast<Eigen::Index>(d));
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

CMatrix hermitian_part(const CMatrix& m) {
  require_square(m, "hermitian_part");
  return 0.5 * (m + m.adjoint());
}

HermEig herm_eig(const CMatrix& m) {
  require_square(m, "herm_eig");
  if (!is_hermitian(m)) {
    throw NotHermitian("herm_eig: matrix is not Hermitian (defect " +
                       std::to_string(hermiticity_defect(m)) + ")");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("herm_eig: eigensolver did not converge");
  }
  HermEig out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

RVector herm_eigenvalues(const CMatrix& m) {
  require_square(m, "herm_eigenvalues");
  if (!is_hermitian(m)) {
    throw NotHermitian("herm_eigenvalues: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m),
                                                Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

double lambda_min(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return herm_eigenvalues(m).minCoeff();
}

double lambda_max(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return herm_eigenvalues(m).maxCoeff();
}

double trace_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m)) return herm_eigenvalues(m).cwiseAbs().sum();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m)) return herm_eigenvalues(m).cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double real_trace_product(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw DimensionMismatch("real_trace_product: incompatible shapes");
  }
  // Tr[AB] = sum_ij A_ij B_ji
  return a.cwiseProduct(b.transpose()).sum().real();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix partial_trace(const CMatrix& m, std::size_t d_a, std::size_t d_b,
                      Subsystem traced) {
  const std::size_t dims[2] = {d_a, d_b};
  return partial_trace(m, dims, traced == Subsystem::first ? 0 : 1);
}

CMatrix partial_trace(const CMatrix& m, std::span<const std::size_t> dims,
                      std::size_t traced) {
  if (traced >= dims.size()) {
    throw DimensionMismatch("partial_trace: factor index out of range");
  }
  require_size(m, product(dims), "partial_trace");
  // Split indices as (outer, traced, inner).
  std::size_t outer = 1, inner = 1;
  for (std::size_t k = 0; k < traced; ++k) outer *= dims[k];
  for (std::size_t k = traced + 1; k < dims.size(); ++k) inner *= dims[k];
  const std::size_t dt = dims[traced];
  const auto n = static_cast<Eigen::Index>(outer * inner);
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t o1 = 0; o1 < outer; ++o1) {
    for (std::size_t o2 = 0; o2 < outer; ++o2) {
      for (std::size_t t = 0; t < dt; ++t) {
        const auto r0 = static_cast<Eigen::Index>((o1 * dt + t) * inner);
        const auto c0 = static_cast<Eigen::Index>((o2 * dt + t) * inner);
        out.block(static_cast<Eigen::Index>(o1 * inner),
                  static_cast<Eigen::Index>(o2 * inner),
                  static_cast<Eigen::Index>(inner),
                  static_cast<Eigen::Index>(inner)) +=
            m.block(r0, c0, static_cast<Eigen::Index>(inner),
                    static_cast<Eigen::Index>(inner));
      }
    }
  }
  return out;
}

CMatrix partial_transpose(const CMatrix& m, std::size_t d_a, std::size_t d_b,
                          Subsystem which) {
  require_size(m, d_a * d_b, "partial_transpose");
  CMatrix out(m.rows(), m.cols());
  for (std::size_t a1 = 0; a1 < d_a; ++a1) {
    for (std::size_t b1 = 0; b1 < d_b; ++b1) {
      for (std::size_t a2 = 0; a2 < d_a; ++a2) {
        for (std::size_t b2 = 0; b2 < d_b; ++b2) {
          const auto r = static_cast<Eigen::Index>(a1 * d_b + b1);
          const auto c = static_cast<Eigen::Index>(a2 * d_b + b2);
          if (which == Subsystem::first) {
            out(r, c) = m(static_cast<Eigen::Index>(a2 * d_b + b1),
                          static_cast<Eigen::Index>(a1 * d_b + b2));
          } else {
            out(r, c) = m(static_cast<Eigen::Index>(a1 * d_b + b2),
                          static_cast<Eigen::Index>(a2 * d_b + b1));
          }
        }
      }
    }
  }
  return out;
}

CMatrix permute_subsystems(const CMatrix& m, std::span<const std::size_t> dims,
                           std::span<const std::size_t> perm) {
  const std::size_t k = dims.size();
  if (perm.size() != k) {
    throw DimensionMismatch("permute_subsystems: permutation size mismatch");
  }
  std::vector<bool> seen(k, false);
  for (std::size_t p : perm) {
    if (p >= k || seen[p]) {
      throw DimensionMismatch("permute_subsystems: invalid permutation");
    }
    seen[p] = true;
  }
  const std::size_t n = product(dims);
  require_size(m, n, "permute_subsystems");

  std::vector<std::size_t> new_dims(k);
  for (std::size_t i = 0; i < k; ++i) new_dims[i] = dims[perm[i]];

  // map[old flat index] = new flat index
  std::vector<std::size_t> map(n);
  std::vector<std::size_t> digits(k);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rest = flat;
    for (std::size_t f = k; f-- > 0;) {
      digits[f] = rest % dims[f];
      rest /= dims[f];
    }
    std::size_t target = 0;
    for (std::size_t i = 0; i < k; ++i) {
      target = target * new_dims[i] + digits[perm[i]];
    }
    map[flat] = target;
  }
  CMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out(static_cast<Eigen::Index>(map[r]), static_cast<Eigen::Index>(map[c])) =
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

std::vector<CMatrix> hermitian_basis(std::size_t d) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i_unit(0.0, 1.0);
  std::vector<CMatrix> basis;
  basis.reserve(d * d);
  for (std::size_t i = 0; i < d; ++i) basis.push_back(matrix_unit(d, i, i));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      basis.push_back(s * (matrix_unit(d, i, j) + matrix_unit(d, j, i)));
      basis.push_back(s * i_unit * (matrix_unit(d, i, j) - matrix_unit(d, j, i)));
    }
  }
  return basis;
}

RVector hermitian_coordinates(const CMatrix& m) {
  require_square(m, "hermitian_coordinates");
  const auto d = static_cast<std::size_t>(m.rows());
  const double r2 = std::sqrt(2.0);
  RVector out(static_cast<Eigen::Index>(d * d));
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < d; ++i) {
    out(k++) = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const Complex z = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      // Re Tr[G X] for the two off-diagonal basis elements
      out(k++) = r2 * z.real();
      out(k++) = r2 * z.imag();
    }
  }
  return out;
}

bool spans_hermitian(std::span<const CMatrix> ms) {
  using Idx = Eigen::Index;
  if (ms.empty()) return false;
  const Idx d = ms.front().rows();
  Eigen::MatrixXd coords(d * d, static_cast<Idx>(ms.size()));
  for (std::size_t j = 0; j < ms.size(); ++j) {
    if (ms[j].rows() != d || ms[j].cols() != d) {
      throw DimensionMismatch("spans_hermitian: matrices differ in size");
    }
    coords.col(static_cast<Idx>(j)) = hermitian_coordinates(hermitian_part(ms[j]));
  }
  if (coords.cols() < coords.rows()) return false;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(coords);
  const RVector sv = svd.singularValues();
  const double cut = 1e-9 * sv(0);
  Idx rank = 0;
  for (Idx i = 0; i < sv.size(); ++i) rank += sv(i) > cut ? 1 : 0;
  return rank == d * d;
}

}  // namespace qcomp
