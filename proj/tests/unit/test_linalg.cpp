#include <gtest/gtest.h>

#include <cmath>

#include "qcomp/errors.hpp"
#include "qcomp/linalg.hpp"
#include "qcomp/random.hpp"

using namespace qcomp;

namespace {

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace

TEST(HermEig, IdentityAndPauliZ) {
  const HermEig a = herm_eig(identity(2));
  EXPECT_NEAR(a.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(a.eigenvalues(1), 1.0, 1e-15);
  const HermEig z = herm_eig(pauli_z());
  EXPECT_NEAR(z.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(z.eigenvalues(1), -1.0, 1e-15);
}

TEST(HermEig, ReconstructsRandomHermitianDescending) {
  rng::Stream s(11);
  for (std::size_t d : {1u, 2u, 3u, 5u, 8u}) {
    const CMatrix h = random_hermitian(d, s);
    const HermEig e = herm_eig(h);
    for (Eigen::Index i = 1; i < e.eigenvalues.size(); ++i) {
      EXPECT_GE(e.eigenvalues(i - 1), e.eigenvalues(i));
    }
    const CMatrix back = e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
    EXPECT_LT((back - h).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((e.eigenvectors.adjoint() * e.eigenvectors - identity(d)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(HermEig, IllConditionedReconstruction) {
  rng::Stream s(12);
  const CMatrix u = random_unitary(4, s);
  RVector ev(4);
  ev << 1.0, 1e-2, 1e-4, 1e-6;
  const CMatrix h = u * ev.asDiagonal() * u.adjoint();
  const HermEig e = herm_eig(hermitian_part(h));
  const CMatrix back = e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
  EXPECT_LT((back - h).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(HermEig, RejectsNonHermitian) {
  CMatrix m(2, 2);
  m << 1, 2, 0, 1;
  EXPECT_THROW(herm_eig(m), NotHermitian);
}

TEST(HermEig, SymmetrizesTinyAsymmetry) {
  CMatrix m = pauli_x();
  m(0, 1) += 1e-12;
  EXPECT_NO_THROW(herm_eig(m));
}

TEST(Norms, TraceNormExamples) {
  EXPECT_NEAR(trace_norm(pauli_x()), 2.0, 1e-14);
  rng::Stream s(1);
  EXPECT_NEAR(trace_norm(random_state(3, s)), 1.0, 1e-12);
  CMatrix plus = CMatrix::Constant(2, 2, 0.5);
  CMatrix zero = CMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  EXPECT_NEAR(trace_norm(zero - plus), std::sqrt(2.0), 1e-14);
}

TEST(Norms, OperatorNormExamples) {
  EXPECT_NEAR(op_norm(identity(4)), 1.0, 1e-15);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -5.0;
  EXPECT_NEAR(op_norm(d), 5.0, 1e-15);
  rng::Stream s(2);
  for (int i = 0; i < 20; ++i) {
    const CMatrix g = ginibre(3, 3, s);
    EXPECT_LE(op_norm(g), trace_norm(g) + 1e-12);
  }
}

TEST(Norms, TraceNormMatchesEigenvalues) {
  rng::Stream s(3);
  for (int i = 0; i < 30; ++i) {
    const CMatrix h = random_hermitian(1 + s.index(6), s);
    EXPECT_NEAR(trace_norm(h), herm_eig(h).eigenvalues.cwiseAbs().sum(), 1e-9);
  }
}

TEST(Tensor, PartialTraceOfProduct) {
  rng::Stream s(4);
  const CMatrix a = ginibre(2, 2, s);
  const CMatrix b = ginibre(3, 3, s);
  EXPECT_LT((partial_trace(kron(a, b), 2, 3, Subsystem::second) - b.trace() * a).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_LT((partial_trace(kron(a, b), 2, 3, Subsystem::first) - a.trace() * b).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(Tensor, PartialTracePreservesTrace) {
  rng::Stream s(5);
  const CMatrix m = ginibre(6, 6, s);
  EXPECT_NEAR(std::abs(partial_trace(m, 2, 3, Subsystem::first).trace() - m.trace()), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(partial_trace(m, 2, 3, Subsystem::second).trace() - m.trace()), 0.0, 1e-10);
}

TEST(Tensor, PartialTransposeIsInvolution) {
  rng::Stream s(6);
  const CMatrix m = ginibre(6, 6, s);
  for (Subsystem w : {Subsystem::first, Subsystem::second}) {
    const CMatrix twice = partial_transpose(partial_transpose(m, 2, 3, w), 2, 3, w);
    EXPECT_EQ((twice - m).cwiseAbs().maxCoeff(), 0.0);
  }
  // Both partial transposes compose to the full transpose.
  const CMatrix full = partial_transpose(partial_transpose(m, 2, 3, Subsystem::first), 2, 3,
                                         Subsystem::second);
  EXPECT_LT((full - m.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Tensor, PartialTransposeOfProduct) {
  rng::Stream s(7);
  const CMatrix a = ginibre(2, 2, s);
  const CMatrix b = ginibre(3, 3, s);
  EXPECT_LT((partial_transpose(kron(a, b), 2, 3, Subsystem::first) - kron(a.transpose(), b))
                .cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Tensor, KronAssociativityAndIndexConvention) {
  rng::Stream s(8);
  const CMatrix a = ginibre(2, 2, s);
  const CMatrix b = ginibre(3, 3, s);
  const CMatrix c = ginibre(2, 2, s);
  EXPECT_LT((kron(kron(a, b), c) - kron(a, kron(b, c))).cwiseAbs().maxCoeff(), 1e-10);
  const CMatrix ab = kron(a, b);
  EXPECT_EQ(ab(1 * 3 + 2, 0 * 3 + 1), a(1, 0) * b(2, 1));
}

TEST(Tensor, MultipartiteTraceAndPermutation) {
  rng::Stream s(9);
  const CMatrix a = random_state(2, s);
  const CMatrix b = random_state(3, s);
  const CMatrix c = random_state(2, s);
  const std::size_t dims[3] = {2, 3, 2};
  EXPECT_LT((partial_trace(kron(kron(a, b), c), dims, 1) - kron(a, c)).cwiseAbs().maxCoeff(), 1e-12);
  const std::size_t perm[3] = {2, 0, 1};
  EXPECT_LT((permute_subsystems(kron(kron(a, b), c), dims, perm) - kron(kron(c, a), b))
                .cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Tensor, DimensionErrors) {
  EXPECT_THROW(partial_trace(identity(5), 2, 3, Subsystem::first), DimensionMismatch);
  EXPECT_THROW(partial_transpose(identity(4), 3, 2, Subsystem::first), DimensionMismatch);
}

TEST(HermitianBasis, OrthonormalAndCoordinatesRoundTrip) {
  const auto basis = hermitian_basis(3);
  ASSERT_EQ(basis.size(), 9u);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      EXPECT_NEAR(real_trace_product(basis[i], basis[j]), i == j ? 1.0 : 0.0, 1e-15);
    }
  }
  rng::Stream s(10);
  const CMatrix h = random_hermitian(3, s);
  const RVector c = hermitian_coordinates(h);
  CMatrix back = CMatrix::Zero(3, 3);
  for (std::size_t i = 0; i < basis.size(); ++i) back += c(static_cast<Eigen::Index>(i)) * basis[i];
  EXPECT_LT((back - h).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(HermitianBasis, SpanningCheck) {
  std::vector<CMatrix> tomographic = {identity(2) / 2.0, 0.5 * (identity(2) + pauli_x()),
                                      0.5 * (identity(2) + pauli_z())};
  EXPECT_FALSE(spans_hermitian(tomographic));
  CMatrix y(2, 2);
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  tomographic.push_back(0.5 * (identity(2) + y));
  EXPECT_TRUE(spans_hermitian(tomographic));
}
