#include "qcomp/norms.hpp"

#include <algorithm>
#include <cmath>

#include "qcomp/errors.hpp"

namespace qcomp {

namespace {

constexpr double kZeroClamp = 1e-10;

double clamp_small(double v) { return std::abs(v) < kZeroClamp ? 0.0 : v; }

sdp::LinearMap ident() {
  return [](const CMatrix& x) { return x; };
}

sdp::LinearMap negate() {
  return [](const CMatrix& x) { return CMatrix(-x); };
}

/// x (1x1) |-> x * I_d
sdp::LinearMap scalar_times_identity(std::size_t d, double scale) {
  return [d, scale](const CMatrix& x) { return CMatrix(scale * x(0, 0) * identity(d)); };
}

/// rho |-> rho (x) I_d
sdp::LinearMap tensor_identity(std::size_t d, double scale) {
  return [d, scale](const CMatrix& x) { return CMatrix(scale * kron(x, identity(d))); };
}

std::size_t common_dim(std::span<const CMatrix> a, const char* where) {
  if (a.empty()) throw DimensionMismatch(std::string(where) + ": empty collection");
  const auto d = a.front().rows();
  for (const CMatrix& m : a) {
    if (m.rows() != d || m.cols() != d) {
      throw DimensionMismatch(std::string(where) + ": operators differ in size");
    }
    if (!is_hermitian(m)) throw NotHermitian(std::string(where) + ": operator not Hermitian");
  }
  return static_cast<std::size_t>(d);
}

void require_cp(const HermitianMap& phi, const char* where) {
  if (!is_cp(phi)) throw NotCompletelyPositive(std::string(where) + ": map is not CP");
}

}  // namespace

double diamond_norm(const HermitianMap& phi, const sdp::Options& opts) {
  const std::size_t dh = phi.d_in();
  const std::size_t dk = phi.d_out();
  const std::size_t n = dh * dk;

  // C(beta) = (P + N) / 2 and C(phi) = (N - P) / 2.
  sdp::Builder b(sdp::Sense::minimize);
  const auto p = b.add_block(n);
  const auto m = b.add_block(n);
  const auto lam = b.add_block(1);
  b.add_objective(lam, CMatrix::Identity(1, 1));
  b.add_matrix_equality({{m, ident()}, {p, negate()}}, 2.0 * phi.choi());
  const auto half_marginal = [dk, dh](const CMatrix& x) {
    return CMatrix(0.5 * partial_trace(x, dk, dh, Subsystem::first));
  };
  b.add_matrix_equality({{p, half_marginal}, {m, half_marginal},
                         {lam, scalar_times_identity(dh, -1.0)}},
                        CMatrix::Zero(static_cast<Eigen::Index>(dh), static_cast<Eigen::Index>(dh)));
  const auto sol = sdp::solve(std::move(b).build(), opts);
  sdp::require_optimal(sol, "diamond_norm");
  return clamp_small(sol.primal_value);
}

double dual_diamond_norm(const HermitianMap& psi, const sdp::Options& opts) {
  const std::size_t d_rho = psi.d_out();
  const std::size_t d_other = psi.d_in();
  const std::size_t n = d_rho * d_other;

  // Conic dual of min Tr rho s.t. rho (x) I >= +-C(psi): only d_rho^2 rows,
  // where the slack form has 2 n^2 and degenerates when psi is CP.
  sdp::Builder b(sdp::Sense::maximize);
  const auto y1 = b.add_block(n);
  const auto y2 = b.add_block(n);
  b.add_objective(y1, psi.choi());
  b.add_objective(y2, CMatrix(-psi.choi()));
  const auto marginal = [d_rho, d_other](const CMatrix& x) {
    return partial_trace(x, d_rho, d_other, Subsystem::second);
  };
  b.add_matrix_equality({{y1, marginal}, {y2, marginal}}, identity(d_rho));
  const auto sol = sdp::solve(std::move(b).build(), opts);
  sdp::require_optimal(sol, "dual_diamond_norm");
  return clamp_small(sol.primal_value);
}

double diamond_norm_cp(const HermitianMap& phi) {
  require_cp(phi, "diamond_norm_cp");
  return clamp_small(lambda_max(qcomp::apply(adjoint(phi), identity(phi.d_out()))));
}

double dual_diamond_norm_cp(const HermitianMap& phi, const sdp::Options& opts) {
  require_cp(phi, "dual_diamond_norm_cp");
  // alpha: K -> H with Choi on H (x) K and Tr_H C(alpha) = I_K.
  const std::size_t dh = phi.d_in();
  const std::size_t dk = phi.d_out();
  sdp::Builder b(sdp::Sense::maximize);
  const auto a = b.add_block(dh * dk);
  const CMatrix c_phi = phi.choi();
  b.add_objective(a, [c_phi, dh, dk](const CMatrix& x) {
    return real_trace_product(c_phi, adjoint_choi(x, dk, dh));
  });
  b.add_matrix_equality({{a, [dh, dk](const CMatrix& x) {
                           return partial_trace(x, dh, dk, Subsystem::first);
                         }}},
                        identity(dk));
  const auto sol = sdp::solve(std::move(b).build(), opts);
  sdp::require_optimal(sol, "dual_diamond_norm_cp");
  return clamp_small(sol.primal_value);
}

double cp_dual_ball_support(const HermitianMap& phi, const sdp::Options& opts) {
  // gamma: K -> H, Choi G on H (x) K; ||gamma||^diamond <= 1 iff
  // sigma (x) I_K >= G for some state sigma on H.
  const std::size_t dh = phi.d_in();
  const std::size_t dk = phi.d_out();
  const std::size_t n = dh * dk;
  sdp::Builder b(sdp::Sense::maximize);
  const auto g = b.add_block(n);
  const auto z = b.add_block(n);
  const auto sigma = b.add_block(dh);
  const CMatrix c_phi = phi.choi();
  b.add_objective(g, [c_phi, dh, dk](const CMatrix& x) {
    return real_trace_product(c_phi, adjoint_choi(x, dk, dh));
  });
  b.add_matrix_equality({{sigma, tensor_identity(dk, 1.0)}, {g, negate()}, {z, negate()}},
                        CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
  b.add_scalar_equality({{sigma, identity(dh)}}, 1.0);
  const auto sol = sdp::solve(std::move(b).build(), opts);
  sdp::require_optimal(sol, "cp_dual_ball_support");
  return clamp_small(sol.primal_value);
}

NormPair cq_norms(std::span<const CMatrix> a, const sdp::Options& opts) {
  const std::size_t d = common_dim(a, "cq_norms");
  NormPair out;
  for (const CMatrix& m : a) out.diamond = std::max(out.diamond, trace_norm(m));

  sdp::Builder b(sdp::Sense::minimize);
  const auto rho = b.add_block(d);
  b.add_objective(rho, identity(d));
  for (const CMatrix& m : a) {
    const auto p = b.add_block(d);
    const auto q = b.add_block(d);
    b.add_matrix_equality({{rho, ident()}, {p, negate()}}, m);
    b.add_matrix_equality({{rho, ident()}, {q, negate()}}, -m);
  }
  const auto sol = sdp::solve(std::move(b).build(), opts);
  sdp::require_optimal(sol, "cq_norms");
  out.dual = clamp_small(sol.primal_value);
  out.diamond = clamp_small(out.diamond);
  return out;
}

NormPair qc_norms(std::span<const CMatrix> a, const sdp::Options& opts) {
  const std::size_t d = common_dim(a, "qc_norms");
  NormPair out;
  for (const CMatrix& m : a) out.dual += op_norm(m);

  // F_i = (V_i - U_i) / 2 with U_i + V_i = 2 sigma encodes -sigma <= F_i <= sigma.
  sdp::Builder b(sdp::Sense::maximize);
  const auto sigma = b.add_block(d);
  b.add_scalar_equality({{sigma, identity(d)}}, 1.0);
  for (const CMatrix& m : a) {
    const auto u = b.add_block(d);
    const auto v = b.add_block(d);
    b.add_objective(u, CMatrix(-0.5 * m));
    b.add_objective(v, CMatrix(0.5 * m));
    b.add_matrix_equality(
        {{u, ident()}, {v, ident()}, {sigma, [](const CMatrix& x) { return CMatrix(-2.0 * x); }}},
        CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  }
  const auto sol = sdp::solve(std::move(b).build(), opts);
  sdp::require_optimal(sol, "qc_norms");
  out.diamond = clamp_small(sol.primal_value);
  out.dual = clamp_small(out.dual);
  return out;
}

}  // namespace qcomp
