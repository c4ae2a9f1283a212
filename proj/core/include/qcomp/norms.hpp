#pragma once

#include <span>

#include "qcomp/linalg.hpp"
#include "qcomp/maps.hpp"
#include "qcomp/sdp.hpp"

namespace qcomp {

/// ||phi||_diamond as min lambda over CP beta with C(beta) -/+ C(phi) >= 0
/// and Tr_K C(beta) = lambda I_H.
double diamond_norm(const HermitianMap& phi, const sdp::Options& opts = {});

/// Dual norm ||psi||^diamond as min Tr[rho] over rho >= 0 on the output
/// space with rho (x) I -/+ C(psi) >= 0.
double dual_diamond_norm(const HermitianMap& psi, const sdp::Options& opts = {});

/// lambda_max(phi*(I)); closed form for CP maps.
double diamond_norm_cp(const HermitianMap& phi);

/// sup over channels alpha in the reverse direction of <alpha, phi>; CP maps
/// only.
double dual_diamond_norm_cp(const HermitianMap& phi, const sdp::Options& opts = {});

/// sup { <gamma, phi> : gamma CP, ||gamma||^diamond <= 1 } for phi: H -> K,
/// gamma: K -> H. For a difference of channels twice this is the diamond norm.
double cp_dual_ball_support(const HermitianMap& phi, const sdp::Options& opts = {});

struct NormPair {
  double diamond = 0.0;
  double dual = 0.0;
};

/// Norms of the cq-map built from A.
NormPair cq_norms(std::span<const CMatrix> a, const sdp::Options& opts = {});

/// Norms of the qc-map built from A.
NormPair qc_norms(std::span<const CMatrix> a, const sdp::Options& opts = {});

}  // namespace qcomp
