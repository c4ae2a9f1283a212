#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qcomp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Absolute Hermiticity tolerance, scaled by the largest entry magnitude.
inline constexpr double kHermTol = 1e-9;

/// Input/output dimensions of a linear map B(H) -> B(K).
struct DimPair {
  std::size_t d_in = 1;
  std::size_t d_out = 1;

  friend bool operator==(const DimPair&, const DimPair&) = default;
};

/// Factor of a bipartite space A (x) B. The first factor is the slow index:
/// (a, b) flattens to a * dB + b.
enum class Subsystem { first, second };

struct HermEig {
  RVector eigenvalues;   // descending
  CMatrix eigenvectors;  // columns, unitary
};

CMatrix identity(std::size_t d);

/// |i><j| on C^d.
CMatrix matrix_unit(std::size_t d, std::size_t i, std::size_t j);

/// Largest |M_ij - conj(M_ji)|, divided by max(1, max |M_ij|).
double hermiticity_defect(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol = kHermTol);

/// (M + M^dagger) / 2.
CMatrix hermitian_part(const CMatrix& m);

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order. The input is symmetrized first; throws NotHermitian
/// when the asymmetry exceeds kHermTol.
HermEig herm_eig(const CMatrix& m);
RVector herm_eigenvalues(const CMatrix& m);
double lambda_min(const CMatrix& m);
double lambda_max(const CMatrix& m);

/// Applies f to the spectrum of a Hermitian matrix.
template <class F>
CMatrix herm_apply(const CMatrix& m, F&& f) {
  HermEig e = herm_eig(m);
  RVector fv = e.eigenvalues.unaryExpr(f);
  return e.eigenvectors * fv.asDiagonal() * e.eigenvectors.adjoint();
}

/// Sum of singular values. Hermitian inputs use the eigenvalue path.
double trace_norm(const CMatrix& m);

/// Largest singular value. Hermitian inputs use the eigenvalue path.
double op_norm(const CMatrix& m);

/// Re Tr[A B]; the Hilbert-Schmidt pairing when A is Hermitian.
double real_trace_product(const CMatrix& a, const CMatrix& b);

CMatrix kron(const CMatrix& a, const CMatrix& b);

CMatrix partial_trace(const CMatrix& m, std::size_t d_a, std::size_t d_b,
                      Subsystem traced);

/// Traces out factor `traced` of a multipartite space with the given
/// factor dimensions (first factor slowest).
CMatrix partial_trace(const CMatrix& m, std::span<const std::size_t> dims,
                      std::size_t traced);

CMatrix partial_transpose(const CMatrix& m, std::size_t d_a, std::size_t d_b,
                          Subsystem which);

/// Reorders tensor factors: factor i of the result is factor perm[i] of the
/// input.
CMatrix permute_subsystems(const CMatrix& m, std::span<const std::size_t> dims,
                           std::span<const std::size_t> perm);

/// Orthonormal basis of the real space of d x d Hermitian matrices with
/// respect to Re Tr[A B]: E_ii, (E_ij + E_ji)/sqrt2, i(E_ij - E_ji)/sqrt2.
std::vector<CMatrix> hermitian_basis(std::size_t d);

/// Coordinates of a Hermitian matrix in hermitian_basis(d).
RVector hermitian_coordinates(const CMatrix& m);

/// True when the matrices span the real space of d x d Hermitian matrices:
/// rank of their coordinate matrix, singular values below 1e-9 times the
/// largest one counted as zero.
bool spans_hermitian(std::span<const CMatrix> ms);

}  // namespace qcomp
