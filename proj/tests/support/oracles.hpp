#pragma once

// Reference computations used only by tests. Each one avoids the library
// code path it is meant to check.

#include <Eigen/Dense>
#include <vector>

#include "qcomp/linalg.hpp"
#include "qcomp/maps.hpp"

namespace oracle {

using qcomp::CMatrix;
using qcomp::HermitianMap;

/// Optimal two-state guessing probability (1 + ||p rho0 - (1-p) rho1||_1) / 2.
/// Qubit inputs use the closed-form 2x2 spectrum.
double helstrom(double p0, const CMatrix& rho0, const CMatrix& rho1);

/// Best two-outcome projective measurement for qubit states by scanning the
/// measurement axis over a fine sphere grid.
double best_projective_qubit(double p0, const CMatrix& rho0, const CMatrix& rho1, int steps);

/// phi(A) = sum_ij A_ij phi(E_ij), reading phi(E_ij) off the Choi blocks.
CMatrix apply_by_units(const HermitianMap& phi, const CMatrix& a);

/// Choi matrix of psi o phi from the images of the d_in^2 matrix units.
CMatrix compose_by_units(const HermitianMap& psi, const HermitianMap& phi);

/// Choi matrix of a map given by its action, sum_ij f(E_ij) (x) E_ij.
template <class F>
CMatrix choi_from_action(std::size_t d_in, std::size_t d_out, F&& f) {
  CMatrix c = CMatrix::Zero(static_cast<Eigen::Index>(d_in * d_out),
                            static_cast<Eigen::Index>(d_in * d_out));
  for (std::size_t i = 0; i < d_in; ++i) {
    for (std::size_t j = 0; j < d_in; ++j) {
      c += qcomp::kron(f(qcomp::matrix_unit(d_in, i, j)), qcomp::matrix_unit(d_in, i, j));
    }
  }
  return c;
}

struct LpResult {
  bool feasible = false;
  double value = 0.0;
  Eigen::VectorXd x;
};

/// min c.x subject to A x = b, x >= 0, by the two-phase simplex method with
/// Bland's rule. Intended for tiny dense problems.
LpResult simplex_min(Eigen::MatrixXd a, Eigen::VectorXd b, const Eigen::VectorXd& c);

/// Classical deficiency min over stochastic M (dK x dH) of
/// max_theta ||p_theta - M q_theta||_1 / 2; rows of p and q are distributions.
double classical_deficiency(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q);

/// Upper bound on the qubit experiment deficiency from measure-and-prepare
/// channels: two-outcome measurements with effect (a I + b n.sigma) for n in
/// the x-z plane, outputs on the z axis, every parameter on a grid of the
/// given step.
double measure_prepare_grid(const std::vector<CMatrix>& s_states,
                            const std::vector<CMatrix>& t_states, double step);

}  // namespace oracle
