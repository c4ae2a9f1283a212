#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcomp/discrimination.hpp"
#include "qcomp/errors.hpp"
#include "qcomp/norms.hpp"

using namespace qcomp;

namespace {

CMatrix ket0() { return matrix_unit(2, 0, 0); }
CMatrix ket1() { return matrix_unit(2, 1, 1); }
CMatrix plus() { return CMatrix::Constant(2, 2, 0.5); }

Ensemble bell_ensemble() {
  std::vector<EnsembleItem> items;
  for (const CMatrix& u : heisenberg_weyl(2)) {
    const CMatrix iu = kron(identity(2), u);
    items.push_back({0.25, iu.adjoint() * max_entangled_kernel(2) * iu / 2.0});
  }
  return Ensemble(std::move(items));
}

}  // namespace

TEST(EnsembleType, Validation) {
  EXPECT_THROW(Ensemble({{0.5, ket0()}, {0.6, ket1()}}), ValidationError);
  EXPECT_THROW(Ensemble({{1.0, 2.0 * ket0()}}), ValidationError);
  EXPECT_THROW(Ensemble({{0.0, ket0()}, {1.0, ket1()}}), ValidationError);
  EXPECT_THROW(Ensemble({{0.5, ket0()}, {0.5, identity(3) / 3.0}}), ValidationError);
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(Ensemble({{1.0, neg}}), ValidationError);
}

TEST(PovmType, Validation) {
  EXPECT_NO_THROW(Povm({ket0(), ket1()}));
  EXPECT_THROW(Povm({ket0(), ket0()}), ValidationError);
  EXPECT_THROW(Povm({identity(2) + ket0(), -ket0()}), ValidationError);
  rng::Stream s(1);
  auto near = random_povm_elements(3, 3, s);
  near[0] += 1e-6 * identity(3);
  const auto fixed = normalize_povm(near);
  EXPECT_NO_THROW(Povm{fixed});
}

TEST(Psucc, OrthogonalStates) {
  EXPECT_NEAR(psucc(Ensemble({{0.5, ket0()}, {0.5, ket1()}})).value, 1.0, 1e-8);
}

TEST(Psucc, ZeroVersusPlus) {
  const double expected = (2.0 + std::sqrt(2.0)) / 4.0;
  const PsuccResult r = psucc(Ensemble({{0.5, ket0()}, {0.5, plus()}}));
  EXPECT_NEAR(r.value, expected, 1e-8);
  EXPECT_NEAR(oracle::helstrom(0.5, ket0(), plus()), expected, 1e-15);
  EXPECT_NEAR(r.certificate.primal_value, r.certificate.dual_value, 1e-8);
  // The returned POVM attains the value.
  const double attained = 0.5 * real_trace_product(r.optimal_povm.elements()[0], ket0()) +
                          0.5 * real_trace_product(r.optimal_povm.elements()[1], plus());
  EXPECT_NEAR(attained, expected, 1e-8);
}

TEST(Psucc, BellBasis) {
  EXPECT_NEAR(psucc(bell_ensemble()).value, 1.0, 1e-8);
}

TEST(Psucc, HelstromOracleOnTwoStateEnsembles) {
  rng::Stream s(2);
  for (int i = 0; i < 50; ++i) {
    const std::size_t d = 2 + s.index(2);
    const double p = 0.05 + 0.9 * s.uniform();
    const CMatrix r0 = random_state(d, s);
    const CMatrix r1 = random_state(d, s);
    EXPECT_NEAR(psucc(Ensemble({{p, r0}, {1.0 - p, r1}})).value, oracle::helstrom(p, r0, r1), 1e-8);
  }
}

TEST(Psucc, BoundsAndDualNorm) {
  rng::Stream s(3);
  for (int i = 0; i < 30; ++i) {
    const Ensemble e = random_ensemble(2 + s.index(3), 1 + s.index(6), s);
    const double v = psucc(e).value;
    double wmax = 0.0;
    for (const EnsembleItem& it : e.items()) wmax = std::max(wmax, it.weight);
    EXPECT_GE(v, wmax - 1e-8);
    EXPECT_LE(v, 1.0 + 1e-8);
    const DualityCheck c = psucc_equals_dual_norm_check(e);
    EXPECT_LE(std::abs(c.diff), 1e-6);
  }
}

TEST(Psucc, DualNormExamples) {
  const DualityCheck bell = psucc_equals_dual_norm_check(bell_ensemble());
  EXPECT_NEAR(bell.lhs, 1.0, 1e-7);
  EXPECT_NEAR(bell.rhs, 1.0, 1e-7);
  const DualityCheck zp = psucc_equals_dual_norm_check(Ensemble({{0.5, ket0()}, {0.5, plus()}}));
  EXPECT_NEAR(zp.rhs, (2.0 + std::sqrt(2.0)) / 4.0, 1e-7);
}

TEST(GuessingValue, HermitianCollection) {
  // max over POVMs of Tr[M0 Z] + Tr[M1 (-Z)] = ||Z||_1 = 2.
  CMatrix z = ket0() - ket1();
  const std::vector<CMatrix> x = {z, CMatrix(-z)};
  EXPECT_NEAR(guessing_value(x).value, 2.0, 1e-8);
}

TEST(HeisenbergWeyl, TwirlIdentity) {
  EXPECT_EQ(heisenberg_weyl(1).size(), 1u);
  EXPECT_NEAR(std::abs(heisenberg_weyl(1)[0](0, 0) - 1.0), 0.0, 1e-15);
  rng::Stream s(4);
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto u = heisenberg_weyl(d);
    ASSERT_EQ(u.size(), d * d);
    const CMatrix a = ginibre(d, d, s);
    CMatrix twirl = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (const CMatrix& x : u) {
      EXPECT_LT((x.adjoint() * x - identity(d)).cwiseAbs().maxCoeff(), 1e-13);
      twirl += x.adjoint() * a * x;
    }
    EXPECT_LT((twirl / static_cast<double>(d) - a.trace() * identity(d)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(EnsembleFromCpMap, IdentityGivesBellStates) {
  const Ensemble e = ensemble_from_cp_map(HermitianMap::identity(2));
  ASSERT_EQ(e.size(), 4u);
  const Ensemble bell = bell_ensemble();
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(e.items()[i].weight, 0.25, 1e-15);
    EXPECT_LT((e.items()[i].state - bell.items()[i].state).cwiseAbs().maxCoeff(), 1e-14);
    // Each state is a rank-one projector.
    EXPECT_NEAR((e.items()[i].state * e.items()[i].state - e.items()[i].state).cwiseAbs().maxCoeff(), 0.0,
                1e-14);
  }
  EXPECT_NEAR(psucc(e).value, 1.0, 1e-8);
}

TEST(EnsembleFromCpMap, DualNormIdentity) {
  rng::Stream s(5);
  for (int i = 0; i < 10; ++i) {
    const std::size_t dk = 1 + s.index(3);
    const std::size_t dh = 1 + s.index(3);
    const HermitianMap g = random_cp_map(dk, dh, s);
    const double tr = qcomp::apply(g, identity(dk)).trace().real();
    EXPECT_NEAR(dual_diamond_norm(g),
                static_cast<double>(dk) * tr * psucc(ensemble_from_cp_map(g)).value, 1e-6);
  }
}

TEST(EnsembleFromCpMap, Covariance) {
  rng::Stream s(6);
  for (int i = 0; i < 10; ++i) {
    const HermitianMap g = random_cp_map(2, 3, s);
    const HermitianMap phi = random_channel(3, 2, s);
    const Ensemble lhs = ensemble_from_cp_map(compose(phi, g));
    const Ensemble rhs = push_ensemble(phi, ensemble_from_cp_map(g), 2);
    ASSERT_EQ(lhs.size(), rhs.size());
    for (std::size_t j = 0; j < lhs.size(); ++j) {
      EXPECT_LT((lhs.items()[j].state - rhs.items()[j].state).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(EnsembleFromCpMap, ZeroMapRejected) {
  EXPECT_THROW(ensemble_from_cp_map(HermitianMap::zero(2, 2)), ZeroMap);
}

TEST(PushEnsemble, IdentityErasureAndMonotonicity) {
  rng::Stream s(7);
  const Ensemble e = random_ensemble(2, 3, s);
  const Ensemble same = push_ensemble(HermitianMap::identity(2), e);
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_LT((same.items()[i].state - e.items()[i].state).cwiseAbs().maxCoeff(), 1e-14);
  }
  const CMatrix sigma = random_state(3, s);
  const Ensemble erased = push_ensemble(erasure_channel(sigma, 2), e);
  double wmax = 0.0;
  for (const EnsembleItem& it : erased.items()) {
    EXPECT_LT((it.state - sigma).cwiseAbs().maxCoeff(), 1e-12);
    wmax = std::max(wmax, it.weight);
  }
  EXPECT_NEAR(psucc(erased).value, wmax, 1e-8);
  for (int i = 0; i < 10; ++i) {
    const Ensemble f = random_ensemble(4, 3, s);
    const HermitianMap phi = random_channel(2, 2, s);
    EXPECT_LE(psucc(push_ensemble(phi, f, 2)).value, psucc(f).value + 1e-8);
  }
  EXPECT_THROW(push_ensemble(HermitianMap::identity(3), e), DimensionMismatch);
  EXPECT_THROW(push_ensemble(2.0 * HermitianMap::identity(2), e), NotAChannel);
}

TEST(EnsembleCqMap, ColumnsReproduceWeightedStates) {
  rng::Stream s(8);
  const Ensemble e = random_ensemble(2, 3, s);
  const HermitianMap phi = ensemble_cq_map(e);
  EXPECT_TRUE(is_cp(phi));
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_LT((qcomp::apply(phi, matrix_unit(3, i, i)) - e.weighted_states()[i]).cwiseAbs().maxCoeff(),
              1e-14);
  }
}
