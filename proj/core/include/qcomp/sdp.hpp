#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qcomp/linalg.hpp"

namespace qcomp::sdp {

enum class Sense { maximize, minimize };

enum class Status { optimal, infeasible, unbounded, max_iter };

std::string to_string(Status s);

/// Coefficient matrix of one block in a linear functional.
struct Term {
  std::size_t block = 0;
  CMatrix coeff;  // Hermitian, size-matched to the block
};

/// sum_b Re Tr[A_b X_b] = rhs
struct Constraint {
  std::vector<Term> terms;
  double rhs = 0.0;
};

/// Semidefinite program over Hermitian PSD blocks X_b:
///   maximize/minimize  sum_b Re Tr[C_b X_b]
///   subject to         sum_b Re Tr[A_{k,b} X_b] = r_k,  X_b >= 0.
struct Problem {
  std::vector<std::size_t> blocks;
  std::vector<CMatrix> objective;  // one entry per block; empty means zero
  std::vector<Constraint> constraints;
  Sense sense = Sense::maximize;
};

struct Options {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  double regularization = 1e-12;
  bool record_history = false;
};

/// Returns Options with gap_tol taken from QCOMP_SDP_TOL when it is set to a
/// positive number.
Options options_from_env(Options base = {});

struct IterateLog {
  int iteration = 0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double primal_infeas = 0.0;
  double dual_infeas = 0.0;
  double mu = 0.0;
};

/// Values are reported in the problem's own sense: for a maximization the
/// primal value is the attained objective and the dual value an upper bound.
struct Solution {
  Status status = Status::max_iter;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;  // |primal - dual| / (1 + |primal|)
  std::vector<CMatrix> primal_blocks;
  std::vector<double> dual_vector;  // one entry per constraint
  std::vector<CMatrix> dual_slacks;
  int iterations = 0;
  std::vector<std::size_t> dropped_rows;
  std::vector<std::string> warnings;
  std::vector<IterateLog> history;
};

struct Residuals {
  double primal_infeas = 0.0;
  double dual_infeas = 0.0;
  double gap = 0.0;
};

Solution solve(const Problem& p, const Options& opts = {});

/// Recomputes feasibility and gap of `s` against `p` from scratch:
/// primal_infeas = max(||r - A(X)|| / (1 + ||r||), max_b (-lambda_min(X_b))_+),
/// dual_infeas = max_b (-lambda_min(C_b -/+ A^T(y)_b))_+ / (1 + ||C||),
/// gap = |<C,X> - <r,y>| / (1 + |<C,X>|).
Residuals residuals(const Problem& p, const Solution& s);

/// Status plus independently recomputed residuals of one solve.
struct Certificate {
  Status status = Status::max_iter;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  double primal_infeas = 0.0;
  double dual_infeas = 0.0;
  int iterations = 0;
};

Certificate certify(const Problem& p, const Solution& s);

/// Throws SolverFailure unless the solution is optimal.
void require_optimal(const Solution& s, const std::string& context);

/// Collects certificates of every solve() issued on this thread while the
/// scope is alive. Scopes nest; each one sees the solves made inside it.
class CertificationScope {
 public:
  CertificationScope();
  ~CertificationScope();
  CertificationScope(const CertificationScope&) = delete;
  CertificationScope& operator=(const CertificationScope&) = delete;

  const std::vector<Certificate>& certificates() const { return certs_; }
  void record(const Certificate& c);

 private:
  std::vector<Certificate> certs_;
  CertificationScope* parent_;
};

// ---------------------------------------------------------------------------
// Modeling helper

using LinearMap = std::function<CMatrix(const CMatrix&)>;
using LinearFunctional = std::function<double(const CMatrix&)>;

/// Assembles a Problem from matrix-valued linear constraints. Coefficient
/// matrices are recovered by evaluating the supplied linear maps on an
/// orthonormal Hermitian basis, so callers only write forward maps.
class Builder {
 public:
  explicit Builder(Sense sense);

  std::size_t add_block(std::size_t n);
  std::size_t block_size(std::size_t block) const;

  /// Adds Re Tr[coeff X_block] to the objective.
  void add_objective(std::size_t block, const CMatrix& coeff);
  /// Adds f(X_block) to the objective; f must be real-linear.
  void add_objective(std::size_t block, const LinearFunctional& f);

  /// sum_b Re Tr[coeff_b X_b] = rhs.
  void add_scalar_equality(std::vector<Term> terms, double rhs);

  /// sum_i map_i(X_{block_i}) = rhs as an equality of Hermitian matrices;
  /// contributes rhs.rows()^2 scalar rows.
  void add_matrix_equality(
      const std::vector<std::pair<std::size_t, LinearMap>>& terms,
      const CMatrix& rhs);

  const Problem& problem() const { return problem_; }
  Problem build() &&;

 private:
  Problem problem_;
};

}  // namespace qcomp::sdp
