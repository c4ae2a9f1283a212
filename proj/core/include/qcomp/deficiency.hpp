#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "qcomp/discrimination.hpp"
#include "qcomp/maps.hpp"
#include "qcomp/sdp.hpp"

namespace qcomp {

struct DeficiencyResult {
  double value = 0.0;                 // delta(Phi, Psi)
  HermitianMap optimal_postprocessing;  // alpha: K' -> K
  HermitianMap witness;               // gamma: K -> H, CP, dual norm <= 1
  double witness_value = 0.0;         // 2(<gamma, Phi> - ||Psi o gamma||^diamond)
  double certified_gap = 0.0;         // value - witness_value
  double projection_shift = 0.0;      // entrywise move of alpha onto the channel set
};

/// delta(Phi, Psi) = min over channels alpha of ||Phi - alpha o Psi||_diamond,
/// solved jointly with the diamond-norm epigraph, plus the max-side witness.
DeficiencyResult deficiency(const HermitianMap& phi, const HermitianMap& psi,
                            const sdp::Options& opts = {});

/// Value and optimal alpha only (no witness solve).
DeficiencyResult deficiency_upper(const HermitianMap& phi, const HermitianMap& psi,
                                  const sdp::Options& opts = {});

/// max(delta(Phi, Psi), delta(Psi, Phi)).
double lecam_distance(const HermitianMap& phi, const HermitianMap& psi,
                      const sdp::Options& opts = {});

struct WitnessResult {
  HermitianMap gamma;
  double value = 0.0;
};

/// 2 max { <gamma, Phi> - ||Psi o gamma||^diamond : gamma CP, ||gamma||^diamond <= 1 }.
WitnessResult deficiency_witness(const HermitianMap& phi, const HermitianMap& psi,
                                 const sdp::Options& opts = {});

struct DataProcessingResult {
  double delta1 = 0.0;
  double delta2 = 0.0;
  bool holds = false;
};

/// (delta(beta o Phi2, Psi), delta(Phi2, Psi)); holds when delta1 <= delta2 + 1e-7.
DataProcessingResult data_processing_check(const HermitianMap& phi2, const HermitianMap& psi,
                                           const HermitianMap& beta,
                                           const sdp::Options& opts = {});

/// (delta(Phi, beta o Psi2), delta(Phi, Psi2)); holds when delta1 >= delta2 - 1e-7.
DataProcessingResult data_processing_check_dual(const HermitianMap& phi,
                                                const HermitianMap& psi2,
                                                const HermitianMap& beta,
                                                const sdp::Options& opts = {});

struct PovmGapResult {
  double gap = 0.0;
  Povm n;
};

/// min over POVMs N on K' of ||qc_{Phi*(M)} - qc_{Psi*(N)}||_diamond.
PovmGapResult povm_postprocessing_gap(const HermitianMap& phi, const HermitianMap& psi,
                                      const Povm& m, const sdp::Options& opts = {});

struct ClassicalScanReport {
  std::size_t k = 0;
  std::size_t trials = 0;
  double stat_i = 0.0;    // ensembles
  double stat_ii = 0.0;   // CP cq-maps
  double stat_iii = 0.0;  // Hermitian collections
  double stat_iv = 0.0;   // half the POVM post-processing gap
  bool chain_consistent = true;  // stat_i <= stat_iv + 1e-6
};

/// Sampled statistics for the four k-outcome comparison statements.
/// Statistics (i)-(iii) are lower bounds on the smallest valid epsilon; (iv)
/// is exact per sampled POVM. The (iv) samples include the optimal POVMs of
/// the (i) samples.
ClassicalScanReport classical_comparison_scan(const HermitianMap& phi, const HermitianMap& psi,
                                              std::size_t k, std::size_t trials,
                                              std::uint64_t seed,
                                              const sdp::Options& opts = {});

struct Thm1Report {
  double delta = 0.0;
  double witness_value = 0.0;
  std::size_t trials = 0;
  double min_slack_ii = 0.0;
  double min_slack_iii = 0.0;
  std::size_t violations_ii = 0;
  std::size_t violations_iii = 0;
  double saturation_residual = 0.0;  // |2(||Phi o g*|| - ||Psi o g*||) - delta|
  bool saturated = false;
};

/// Checks the CP-map and ancilla-ensemble inequalities at epsilon = delta on
/// random samples, and that the witness attains the bound.
Thm1Report thm1_verify(const HermitianMap& phi, const HermitianMap& psi, std::size_t trials,
                       std::uint64_t seed, const sdp::Options& opts = {});

struct Coro1Report {
  double delta = 0.0;
  std::size_t trials = 0;
  double max_gap = 0.0;  // max P_succ((Phi x id)E) - P_succ((Psi x id)E)
  bool consistent = true;  // delta > 0 or max_gap <= 1e-6
};

/// Samples equiprobable d_K^2-item ensembles with states sum_j rho_j (x) sigma_j.
Coro1Report thm2_coro1_scan(const HermitianMap& phi, const HermitianMap& psi,
                            std::span<const CMatrix> spanning_states, std::size_t trials,
                            std::uint64_t seed, const sdp::Options& opts = {});

}  // namespace qcomp
