#include <gtest/gtest.h>

#include <cstdlib>

#include "qcomp/errors.hpp"
#include "qcomp/random.hpp"
#include "qcomp/sdp.hpp"

using namespace qcomp;
using sdp::Builder;
using sdp::Sense;
using sdp::Status;

namespace {

sdp::LinearMap ident() {
  return [](const CMatrix& x) { return x; };
}
sdp::LinearMap negate() {
  return [](const CMatrix& x) { return CMatrix(-x); };
}

/// min Tr[P + N] with P - N = M.
sdp::Problem trace_norm_problem(const CMatrix& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  Builder b(Sense::minimize);
  const auto p = b.add_block(n);
  const auto q = b.add_block(n);
  b.add_objective(p, identity(n));
  b.add_objective(q, identity(n));
  b.add_matrix_equality({{p, ident()}, {q, negate()}}, m);
  return std::move(b).build();
}

/// max Re Tr[R X] with Tr X = 1.
sdp::Problem lambda_max_problem(const CMatrix& r) {
  const auto n = static_cast<std::size_t>(r.rows());
  Builder b(Sense::maximize);
  const auto x = b.add_block(n);
  b.add_objective(x, r);
  b.add_scalar_equality({{x, identity(n)}}, 1.0);
  return std::move(b).build();
}

/// min t with t I - M = S >= 0 and a free scalar modeled as t = t+ - t-.
sdp::Problem op_norm_problem(const CMatrix& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  Builder b(Sense::minimize);
  const auto tp = b.add_block(1);
  const auto tm = b.add_block(1);
  const auto up = b.add_block(n);
  const auto lo = b.add_block(n);
  b.add_objective(tp, CMatrix::Identity(1, 1));
  b.add_objective(tm, -CMatrix::Identity(1, 1));
  auto lift = [n](double sign) {
    return [n, sign](const CMatrix& t) { return CMatrix(sign * t(0, 0) * identity(n)); };
  };
  b.add_matrix_equality({{tp, lift(1.0)}, {tm, lift(-1.0)}, {up, negate()}}, m);
  b.add_matrix_equality({{tp, lift(1.0)}, {tm, lift(-1.0)}, {lo, negate()}}, CMatrix(-m));
  return std::move(b).build();
}

}  // namespace

TEST(Solve, ScalarLp) {
  Builder b(Sense::maximize);
  const auto x = b.add_block(1);
  b.add_objective(x, CMatrix::Identity(1, 1));
  b.add_scalar_equality({{x, CMatrix::Identity(1, 1)}}, 1.0);
  const sdp::Problem p = std::move(b).build();
  const sdp::Solution s = sdp::solve(p);
  ASSERT_EQ(s.status, Status::optimal);
  EXPECT_NEAR(s.primal_value, 1.0, 1e-8);
  const sdp::Residuals r = sdp::residuals(p, s);
  EXPECT_LE(r.primal_infeas, 1e-8);
  EXPECT_LE(r.dual_infeas, 1e-8);
  EXPECT_LE(r.gap, 1e-8);
}

TEST(Solve, TraceNormMatchesEigenvalues) {
  rng::Stream s(1);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + s.index(16);
    const CMatrix m = random_hermitian(n, s);
    const sdp::Solution sol = sdp::solve(trace_norm_problem(m));
    ASSERT_EQ(sol.status, Status::optimal) << "n = " << n;
    EXPECT_NEAR(sol.primal_value, herm_eigenvalues(m).cwiseAbs().sum(), 1e-7) << "n = " << n;
  }
}

TEST(Solve, LambdaMaxMatchesEigenvalues) {
  rng::Stream s(2);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + s.index(16);
    const CMatrix rho = random_state(n, s);
    const sdp::Solution sol = sdp::solve(lambda_max_problem(rho));
    ASSERT_EQ(sol.status, Status::optimal);
    EXPECT_NEAR(sol.primal_value, lambda_max(rho), 1e-7);
    EXPECT_NEAR(sol.dual_value, lambda_max(rho), 1e-7);
  }
}

TEST(Solve, OperatorNormMatchesEigenvalues) {
  rng::Stream s(3);
  for (int i = 0; i < 30; ++i) {
    const std::size_t n = 1 + s.index(8);
    const CMatrix m = random_hermitian(n, s);
    const sdp::Solution sol = sdp::solve(op_norm_problem(m));
    ASSERT_EQ(sol.status, Status::optimal);
    EXPECT_NEAR(sol.primal_value, op_norm(m), 1e-7);
  }
}

TEST(Solve, OptimalSolutionsMeetTolerances) {
  rng::Stream s(4);
  const sdp::Options opts;
  for (int i = 0; i < 100; ++i) {
    // Random feasible problem: constraints generated from a known PSD point
    // and a bounded objective (X lives in a trace-bounded set).
    const std::size_t n = 2 + s.index(4);
    Builder b(s.uniform() < 0.5 ? Sense::maximize : Sense::minimize);
    const auto x = b.add_block(n);
    b.add_objective(x, random_hermitian(n, s));
    const CMatrix x0 = random_state(n, s);
    b.add_scalar_equality({{x, identity(n)}}, 1.0);
    for (int k = 0; k < 2; ++k) {
      const CMatrix a = random_hermitian(n, s);
      b.add_scalar_equality({{x, a}}, real_trace_product(a, x0));
    }
    const sdp::Problem p = std::move(b).build();
    const sdp::Solution sol = sdp::solve(p, opts);
    ASSERT_EQ(sol.status, Status::optimal);
    EXPECT_LE(sol.gap, opts.gap_tol);
    const sdp::Certificate c = sdp::certify(p, sol);
    EXPECT_LE(c.gap, 1e-7);
    EXPECT_LE(c.primal_infeas, 1e-7);
    EXPECT_LE(c.dual_infeas, 1e-7);
  }
}

TEST(Solve, WeakDualityAlongTheRun) {
  rng::Stream s(5);
  sdp::Options opts;
  opts.record_history = true;
  const sdp::Solution sol = sdp::solve(lambda_max_problem(random_state(5, s)), opts);
  ASSERT_FALSE(sol.history.empty());
  // Once both iterates are feasible the dual bound dominates the primal value.
  for (const sdp::IterateLog& it : sol.history) {
    if (it.primal_infeas < 1e-9 && it.dual_infeas < 1e-9) {
      EXPECT_GE(it.dual_value, it.primal_value - 1e-9) << "iteration " << it.iteration;
    }
  }
}

TEST(Residuals, DetectPerturbation) {
  rng::Stream s(6);
  const sdp::Problem p = trace_norm_problem(random_hermitian(3, s));
  sdp::Solution sol = sdp::solve(p);
  ASSERT_EQ(sol.status, Status::optimal);
  sol.primal_blocks[0] += 1e-3 * identity(3);
  EXPECT_GE(sdp::residuals(p, sol).primal_infeas, 1e-4);
}

TEST(Solve, DependentRowsAreDropped) {
  Builder b(Sense::maximize);
  const auto x = b.add_block(2);
  b.add_objective(x, matrix_unit(2, 0, 0));
  b.add_scalar_equality({{x, identity(2)}}, 1.0);
  b.add_scalar_equality({{x, 2.0 * identity(2)}}, 2.0);
  const sdp::Solution sol = sdp::solve(std::move(b).build());
  EXPECT_EQ(sol.status, Status::optimal);
  EXPECT_EQ(sol.dropped_rows.size(), 1u);
  EXPECT_FALSE(sol.warnings.empty());
  EXPECT_NEAR(sol.primal_value, 1.0, 1e-8);
}

TEST(Solve, InconsistentRowsAreInfeasible) {
  Builder b(Sense::maximize);
  const auto x = b.add_block(2);
  b.add_scalar_equality({{x, identity(2)}}, 1.0);
  b.add_scalar_equality({{x, identity(2)}}, 2.0);
  EXPECT_EQ(sdp::solve(std::move(b).build()).status, Status::infeasible);
}

TEST(Solve, PsdInfeasibility) {
  // X >= 0 with Tr X = -1.
  Builder b(Sense::minimize);
  const auto x = b.add_block(2);
  b.add_objective(x, identity(2));
  b.add_scalar_equality({{x, identity(2)}}, -1.0);
  EXPECT_EQ(sdp::solve(std::move(b).build()).status, Status::infeasible);
}

TEST(Solve, Unbounded) {
  // maximize X_00 subject to X_11 = 1.
  Builder b(Sense::maximize);
  const auto x = b.add_block(2);
  b.add_objective(x, matrix_unit(2, 0, 0));
  b.add_scalar_equality({{x, matrix_unit(2, 1, 1)}}, 1.0);
  EXPECT_EQ(sdp::solve(std::move(b).build()).status, Status::unbounded);
}

TEST(Solve, MaxIterationsReturnsBestIterate) {
  rng::Stream s(7);
  sdp::Options opts;
  opts.max_iter = 2;
  const sdp::Solution sol = sdp::solve(trace_norm_problem(random_hermitian(4, s)), opts);
  EXPECT_EQ(sol.status, Status::max_iter);
  EXPECT_EQ(sol.primal_blocks.size(), 2u);
  EXPECT_THROW(sdp::require_optimal(sol, "test"), SolverFailure);
}

TEST(Solve, RejectsMalformedProblems) {
  sdp::Problem p;
  p.blocks = {2};
  p.objective = {identity(3)};
  EXPECT_THROW(sdp::solve(p), DimensionMismatch);
  p.objective = {matrix_unit(2, 0, 1)};
  EXPECT_THROW(sdp::solve(p), NotHermitian);
  Builder b(Sense::maximize);
  const auto x = b.add_block(2);
  EXPECT_THROW(b.add_scalar_equality({{x, identity(3)}}, 1.0), DimensionMismatch);
  EXPECT_THROW(b.add_block(0), DimensionMismatch);
}

TEST(Certification, ScopesNestAndRecord) {
  rng::Stream s(8);
  sdp::CertificationScope outer;
  sdp::solve(lambda_max_problem(random_state(2, s)));
  {
    sdp::CertificationScope inner;
    sdp::solve(lambda_max_problem(random_state(3, s)));
    EXPECT_EQ(inner.certificates().size(), 1u);
  }
  ASSERT_EQ(outer.certificates().size(), 2u);
  for (const sdp::Certificate& c : outer.certificates()) {
    EXPECT_EQ(c.status, Status::optimal);
    EXPECT_LE(c.gap, 1e-8);
  }
}

TEST(Options, EnvironmentOverridesGapTolerance) {
  ::setenv("QCOMP_SDP_TOL", "1e-5", 1);
  EXPECT_DOUBLE_EQ(sdp::options_from_env().gap_tol, 1e-5);
  ::setenv("QCOMP_SDP_TOL", "garbage", 1);
  EXPECT_DOUBLE_EQ(sdp::options_from_env().gap_tol, sdp::Options{}.gap_tol);
  ::unsetenv("QCOMP_SDP_TOL");
}
