#include "qcomp/deficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qcomp/errors.hpp"
#include "qcomp/norms.hpp"
#include "qcomp/random.hpp"

namespace qcomp {

namespace {

using Idx = Eigen::Index;

constexpr double kProjectionTol = 1e-7;
constexpr double kMonotoneTol = 1e-7;

CMatrix zeros(std::size_t n) {
  return CMatrix::Zero(static_cast<Idx>(n), static_cast<Idx>(n));
}

sdp::LinearMap ident() {
  return [](const CMatrix& x) { return x; };
}

sdp::LinearMap negate() {
  return [](const CMatrix& x) { return CMatrix(-x); };
}

void require_pair(const HermitianMap& phi, const HermitianMap& psi, const std::string& where) {
  require_channel(phi, where);
  require_channel(psi, where);
  if (phi.d_in() != psi.d_in()) {
    throw DimensionMismatch(where + ": channels have different input dimensions (" +
                            std::to_string(phi.d_in()) + " vs " +
                            std::to_string(psi.d_in()) + ")");
  }
}

double clamp_value(double v) {
  if (std::abs(v) < 1e-10) return 0.0;
  return v;
}

double lowest() { return -std::numeric_limits<double>::infinity(); }

std::vector<CMatrix> mapped(const HermitianMap& phi, std::span<const CMatrix> xs) {
  std::vector<CMatrix> out;
  out.reserve(xs.size());
  for (const CMatrix& x : xs) out.push_back(qcomp::apply(phi, x));
  return out;
}

}  // namespace

DeficiencyResult deficiency_upper(const HermitianMap& phi, const HermitianMap& psi,
                                  const sdp::Options& opts) {
  require_pair(phi, psi, "deficiency");
  const std::size_t dh = phi.d_in();
  const std::size_t dk = phi.d_out();
  const std::size_t dk2 = psi.d_out();

  // C(beta) = (P + N) / 2 bounds C(Phi) - C(alpha o Psi) = (N - P) / 2.
  sdp::Builder b(sdp::Sense::minimize);
  const auto a = b.add_block(dk * dk2);
  const auto p = b.add_block(dk * dh);
  const auto n = b.add_block(dk * dh);
  const auto lam = b.add_block(1);
  b.add_objective(lam, CMatrix::Identity(1, 1));
  b.add_matrix_equality({{a, [dk, dk2](const CMatrix& x) {
                           return partial_trace(x, dk, dk2, Subsystem::first);
                         }}},
                        identity(dk2));
  const CMatrix c_psi = psi.choi();
  b.add_matrix_equality({{n, ident()},
                         {p, negate()},
                         {a, [c_psi, dk, dk2, dh](const CMatrix& x) {
                            return CMatrix(2.0 * compose_choi(x, dk, c_psi, dk2, dh));
                          }}},
                        2.0 * phi.choi());
  const auto half_marginal = [dk, dh](const CMatrix& x) {
    return CMatrix(0.5 * partial_trace(x, dk, dh, Subsystem::first));
  };
  b.add_matrix_equality({{p, half_marginal},
                         {n, half_marginal},
                         {lam, [dh](const CMatrix& x) { return CMatrix(-x(0, 0) * identity(dh)); }}},
                        zeros(dh));
  const sdp::Solution sol = sdp::solve(std::move(b).build(), opts);
  sdp::require_optimal(sol, "deficiency");

  const HermitianMap raw(dk2, dk, hermitian_part(sol.primal_blocks[a]));
  HermitianMap alpha = project_to_channel(raw);
  const double shift = choi_distance(alpha, raw);
  if (shift > kProjectionTol) {
    throw SolverFailure("deficiency: post-processing moved by " + std::to_string(shift) +
                        " when projected onto channels (status max_iter)");
  }
  return DeficiencyResult{clamp_value(sol.primal_value), std::move(alpha),
                          HermitianMap::zero(dk, dh), 0.0, 0.0, shift};
}

WitnessResult deficiency_witness(const HermitianMap& phi, const HermitianMap& psi,
                                 const sdp::Options& opts) {
  require_pair(phi, psi, "deficiency_witness");
  const std::size_t dh = phi.d_in();
  const std::size_t dk = phi.d_out();
  const std::size_t dk2 = psi.d_out();

  // gamma: K -> H with Choi G on H (x) K.
  sdp::Builder b(sdp::Sense::maximize);
  const auto g = b.add_block(dh * dk);
  const auto rho = b.add_block(dh);
  const auto slack = b.add_block(1);
  const auto z1 = b.add_block(dh * dk);
  const auto tau = b.add_block(dk2);
  const auto z2 = b.add_block(dk2 * dk);
  const CMatrix c_phi = phi.choi();
  b.add_objective(g, [c_phi, dh, dk](const CMatrix& x) {
    return 2.0 * real_trace_product(c_phi, adjoint_choi(x, dk, dh));
  });
  b.add_objective(tau, CMatrix(-2.0 * identity(dk2)));
  b.add_scalar_equality({{rho, identity(dh)}, {slack, CMatrix::Identity(1, 1)}}, 1.0);
  b.add_matrix_equality({{rho, [dk](const CMatrix& x) { return kron(x, identity(dk)); }},
                         {g, negate()},
                         {z1, negate()}},
                        zeros(dh * dk));
  const CMatrix c_psi = psi.choi();
  b.add_matrix_equality({{tau, [dk](const CMatrix& x) { return kron(x, identity(dk)); }},
                         {g, [c_psi, dk2, dh, dk](const CMatrix& x) {
                            return CMatrix(-compose_choi(c_psi, dk2, x, dh, dk));
                          }},
                         {z2, negate()}},
                        zeros(dk2 * dk));
  const sdp::Solution sol = sdp::solve(std::move(b).build(), opts);
  sdp::require_optimal(sol, "deficiency_witness");
  const CMatrix gamma = herm_apply(sol.primal_blocks[g], [](double x) { return x < 0.0 ? 0.0 : x; });
  return WitnessResult{HermitianMap(dk, dh, gamma), clamp_value(sol.primal_value)};
}

DeficiencyResult deficiency(const HermitianMap& phi, const HermitianMap& psi,
                            const sdp::Options& opts) {
  DeficiencyResult r = deficiency_upper(phi, psi, opts);
  WitnessResult w = deficiency_witness(phi, psi, opts);
  r.witness = std::move(w.gamma);
  r.witness_value = w.value;
  r.certified_gap = r.value - w.value;
  return r;
}

double lecam_distance(const HermitianMap& phi, const HermitianMap& psi,
                      const sdp::Options& opts) {
  return std::max(deficiency_upper(phi, psi, opts).value,
                  deficiency_upper(psi, phi, opts).value);
}

DataProcessingResult data_processing_check(const HermitianMap& phi2, const HermitianMap& psi,
                                           const HermitianMap& beta,
                                           const sdp::Options& opts) {
  require_channel(beta, "data_processing_check");
  DataProcessingResult r;
  r.delta1 = deficiency_upper(compose(beta, phi2), psi, opts).value;
  r.delta2 = deficiency_upper(phi2, psi, opts).value;
  r.holds = r.delta1 <= r.delta2 + kMonotoneTol;
  return r;
}

DataProcessingResult data_processing_check_dual(const HermitianMap& phi,
                                                const HermitianMap& psi2,
                                                const HermitianMap& beta,
                                                const sdp::Options& opts) {
  require_channel(beta, "data_processing_check_dual");
  DataProcessingResult r;
  r.delta1 = deficiency_upper(phi, compose(beta, psi2), opts).value;
  r.delta2 = deficiency_upper(phi, psi2, opts).value;
  r.holds = r.delta1 >= r.delta2 - kMonotoneTol;
  return r;
}

PovmGapResult povm_postprocessing_gap(const HermitianMap& phi, const HermitianMap& psi,
                                      const Povm& m, const sdp::Options& opts) {
  require_pair(phi, psi, "povm_postprocessing_gap");
  if (m.dim() != phi.d_out()) {
    throw DimensionMismatch("povm_postprocessing_gap: POVM lives on dimension " +
                            std::to_string(m.dim()) + ", expected " +
                            std::to_string(phi.d_out()));
  }
  const std::size_t dh = phi.d_in();
  const std::size_t dk2 = psi.d_out();
  const std::size_t k = m.size();
  const HermitianMap phi_star = adjoint(phi);
  const HermitianMap psi_star = adjoint(psi);
  const CMatrix target = qc_map(mapped(phi_star, m.elements())).choi();

  sdp::Builder b(sdp::Sense::minimize);
  std::vector<std::pair<std::size_t, sdp::LinearMap>> povm_sum;
  std::vector<std::pair<std::size_t, sdp::LinearMap>> epigraph;
  std::vector<std::size_t> n_blocks;
  for (std::size_t i = 0; i < k; ++i) {
    const auto ni = b.add_block(dk2);
    n_blocks.push_back(ni);
    povm_sum.emplace_back(ni, ident());
    epigraph.emplace_back(ni, [psi_star, k, i](const CMatrix& x) {
      return CMatrix(2.0 * kron(matrix_unit(k, i, i), qcomp::apply(psi_star, x).transpose()));
    });
  }
  const auto p = b.add_block(k * dh);
  const auto q = b.add_block(k * dh);
  const auto lam = b.add_block(1);
  b.add_objective(lam, CMatrix::Identity(1, 1));
  b.add_matrix_equality(povm_sum, identity(dk2));
  epigraph.emplace_back(q, ident());
  epigraph.emplace_back(p, negate());
  b.add_matrix_equality(epigraph, 2.0 * target);
  const auto half_marginal = [k, dh](const CMatrix& x) {
    return CMatrix(0.5 * partial_trace(x, k, dh, Subsystem::first));
  };
  b.add_matrix_equality({{p, half_marginal},
                         {q, half_marginal},
                         {lam, [dh](const CMatrix& x) { return CMatrix(-x(0, 0) * identity(dh)); }}},
                        zeros(dh));
  const sdp::Solution sol = sdp::solve(std::move(b).build(), opts);
  sdp::require_optimal(sol, "povm_postprocessing_gap");
  std::vector<CMatrix> n;
  for (std::size_t ni : n_blocks) n.push_back(sol.primal_blocks[ni]);
  return PovmGapResult{clamp_value(sol.primal_value), Povm(normalize_povm(std::move(n)))};
}

ClassicalScanReport classical_comparison_scan(const HermitianMap& phi, const HermitianMap& psi,
                                              std::size_t k, std::size_t trials,
                                              std::uint64_t seed,
                                              const sdp::Options& opts) {
  require_pair(phi, psi, "classical_comparison_scan");
  if (k == 0) throw SizeMismatch("classical_comparison_scan: k must be positive");
  const std::size_t dh = phi.d_in();
  const std::size_t dk = phi.d_out();
  const rng::Stream root(seed);

  ClassicalScanReport r;
  r.k = k;
  r.trials = trials;
  r.stat_i = r.stat_ii = r.stat_iii = r.stat_iv = lowest();
  for (std::size_t t = 0; t < trials; ++t) {
    rng::Stream s = root.split(t);

    const Ensemble e = random_ensemble(dh, k, s);
    const double pe = psucc(e, opts).value;
    const PsuccResult p_phi = psucc(push_ensemble(phi, e), opts);
    const double p_psi = psucc(push_ensemble(psi, e), opts).value;
    r.stat_i = std::max(r.stat_i, (p_phi.value - p_psi) / pe);

    std::vector<CMatrix> f_pos;
    for (std::size_t i = 0; i < k; ++i) {
      const CMatrix w = ginibre(dh, dh, s);
      f_pos.push_back(hermitian_part(w * w.adjoint()));
    }
    const double n_f = cq_norms(f_pos, opts).dual;
    const double n_phi = cq_norms(mapped(phi, f_pos), opts).dual;
    const double n_psi = cq_norms(mapped(psi, f_pos), opts).dual;
    r.stat_ii = std::max(r.stat_ii, (n_phi - n_psi) / n_f);

    std::vector<CMatrix> f_herm;
    for (std::size_t i = 0; i < k; ++i) f_herm.push_back(random_hermitian(dh, s));
    const double g_phi = guessing_value(mapped(phi, f_herm), opts).value;
    const double g_psi = guessing_value(mapped(psi, f_herm), opts).value;
    const double n_h = cq_norms(f_herm, opts).dual;
    r.stat_iii = std::max(r.stat_iii, (g_phi - g_psi) / (2.0 * n_h));

    const Povm m_rand(random_povm_elements(dk, k, s));
    r.stat_iv = std::max(r.stat_iv, 0.5 * povm_postprocessing_gap(phi, psi, m_rand, opts).gap);
    r.stat_iv = std::max(r.stat_iv,
                         0.5 * povm_postprocessing_gap(phi, psi, p_phi.optimal_povm, opts).gap);
  }
  if (trials == 0) r.stat_i = r.stat_ii = r.stat_iii = r.stat_iv = 0.0;
  r.chain_consistent = r.stat_i <= r.stat_iv + 1e-6;
  return r;
}

Thm1Report thm1_verify(const HermitianMap& phi, const HermitianMap& psi, std::size_t trials,
                       std::uint64_t seed, const sdp::Options& opts) {
  require_pair(phi, psi, "thm1_verify");
  const std::size_t dh = phi.d_in();
  const std::size_t dk = phi.d_out();
  const DeficiencyResult def = deficiency(phi, psi, opts);
  const double half = 0.5 * def.value;
  const rng::Stream root(seed);
  constexpr double kTolII = 1e-7;
  constexpr double kTolIII = 1e-6;

  Thm1Report r;
  r.delta = def.value;
  r.witness_value = def.witness_value;
  r.trials = trials;
  r.min_slack_ii = r.min_slack_iii = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    rng::Stream s = root.split(t);
    const HermitianMap gamma = random_cp_map(dk, dh, s);

    const double n_phi = dual_diamond_norm(compose(phi, gamma), opts);
    const double n_psi = dual_diamond_norm(compose(psi, gamma), opts);
    const double n_gamma = dual_diamond_norm(gamma, opts);
    const double slack_ii = n_psi + half * n_gamma - n_phi;
    r.min_slack_ii = std::min(r.min_slack_ii, slack_ii);
    if (slack_ii < -kTolII) ++r.violations_ii;

    const Ensemble e = ensemble_from_cp_map(gamma);
    const double pe = psucc(e, opts).value;
    const double p_phi = psucc(push_ensemble(phi, e, dk), opts).value;
    const double p_psi = psucc(push_ensemble(psi, e, dk), opts).value;
    const double slack_iii = p_psi + half * pe - p_phi;
    r.min_slack_iii = std::min(r.min_slack_iii, slack_iii);
    if (slack_iii < -kTolIII) ++r.violations_iii;
  }
  if (trials == 0) r.min_slack_ii = r.min_slack_iii = 0.0;

  const double w_phi = dual_diamond_norm(compose(phi, def.witness), opts);
  const double w_psi = dual_diamond_norm(compose(psi, def.witness), opts);
  r.saturation_residual = std::abs(2.0 * (w_phi - w_psi) - def.value);
  r.saturated = r.saturation_residual <= 1e-6;
  return r;
}

Coro1Report thm2_coro1_scan(const HermitianMap& phi, const HermitianMap& psi,
                            std::span<const CMatrix> spanning_states, std::size_t trials,
                            std::uint64_t seed, const sdp::Options& opts) {
  require_pair(phi, psi, "thm2_coro1_scan");
  const std::size_t dh = phi.d_in();
  const std::size_t dk = phi.d_out();
  for (const CMatrix& st : spanning_states) {
    if (static_cast<std::size_t>(st.rows()) != dk || st.rows() != st.cols()) {
      throw DimensionMismatch("thm2_coro1_scan: spanning state has wrong size");
    }
  }
  if (spanning_states.size() < dk * dk || !spans_hermitian(spanning_states)) {
    throw NotSpanning("thm2_coro1_scan: states do not span the Hermitian matrices on K");
  }
  const std::size_t m = dk * dk;
  const std::size_t nj = spanning_states.size();
  const rng::Stream root(seed);

  Coro1Report r;
  r.delta = deficiency_upper(phi, psi, opts).value;
  r.trials = trials;
  r.max_gap = trials == 0 ? 0.0 : lowest();
  for (std::size_t t = 0; t < trials; ++t) {
    rng::Stream s = root.split(t);
    std::vector<EnsembleItem> items;
    for (std::size_t i = 0; i < m; ++i) {
      const std::vector<double> w = random_simplex(nj, s);
      CMatrix rho = CMatrix::Zero(static_cast<Idx>(dh * dk), static_cast<Idx>(dh * dk));
      for (std::size_t j = 0; j < nj; ++j) rho += w[j] * kron(random_state(dh, s), spanning_states[j]);
      items.push_back({1.0 / static_cast<double>(m), hermitian_part(rho)});
    }
    const Ensemble e(std::move(items));
    const double gap = psucc(push_ensemble(phi, e, dk), opts).value -
                       psucc(push_ensemble(psi, e, dk), opts).value;
    r.max_gap = std::max(r.max_gap, gap);
  }
  r.consistent = r.delta > 1e-7 || r.max_gap <= 1e-6;
  return r;
}

}  // namespace qcomp
