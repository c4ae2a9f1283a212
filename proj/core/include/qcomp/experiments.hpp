#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcomp/discrimination.hpp"
#include "qcomp/maps.hpp"
#include "qcomp/random.hpp"
#include "qcomp/sdp.hpp"

namespace qcomp {

/// Label-indexed family of density matrices on one space.
class Experiment {
 public:
  /// Throws LabelMismatch on duplicate labels or a count mismatch and
  /// ValidationError unless every state is PSD with unit trace within 1e-8.
  Experiment(std::vector<std::string> labels, std::vector<CMatrix> states);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<CMatrix>& states() const { return states_; }

  /// Throws LabelUnknown.
  std::size_t index_of(const std::string& label) const;
  const CMatrix& state(const std::string& label) const;

  /// Sub-experiment on the given labels, in that order.
  Experiment restrict(std::span<const std::string> labels) const;

  /// The experiment {phi(rho_theta)}.
  Experiment mapped(const HermitianMap& phi) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<CMatrix> states_;
};

/// Classical decision space (D, g) with g(theta, d) >= 0; rows follow
/// `labels`, columns are the decisions.
class DecisionProblem {
 public:
  DecisionProblem(std::vector<std::string> labels, Eigen::MatrixXd payoff);

  std::size_t decisions() const { return static_cast<std::size_t>(payoff_.cols()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::MatrixXd& table() const { return payoff_; }
  /// Throws LabelUnknown.
  double g(const std::string& label, std::size_t d) const;

 private:
  std::vector<std::string> labels_;
  Eigen::MatrixXd payoff_;
};

/// Quantum decision space (D, G): PSD payoff operators G(theta) on D.
class QuantumDecisionSpace {
 public:
  QuantumDecisionSpace(std::vector<std::string> labels, std::vector<CMatrix> payoffs);

  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Throws LabelUnknown.
  const CMatrix& payoff(const std::string& label) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<CMatrix> payoffs_;
};

/// Finitely supported probability weights over labels.
class Prior {
 public:
  Prior(std::vector<std::string> labels, std::vector<double> weights);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Zero for labels outside the support; throws LabelUnknown otherwise unknown.
  double weight(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;
};

/// sum_d g(theta, d) Tr[rho_theta M_d].
double payoff(const Experiment& t, const std::string& theta, const Povm& m,
              const DecisionProblem& g);

/// Tr[phi(rho_theta) G(theta)].
double quantum_payoff(const Experiment& t, const std::string& theta, const HermitianMap& phi,
                      const QuantumDecisionSpace& g);

/// sup over decision rules M of sum_theta p(theta) payoff(T, theta, M, g).
double bayes_payoff(const Experiment& t, const Prior& p, const DecisionProblem& g,
                    const sdp::Options& opts = {});

/// Classical ensemble {lambda_d, diag(mu^d_theta)} over the support of p with
/// lambda_d = sum_theta p g / Z, mu^d_theta = p(theta) g(theta, d) / (Z lambda_d),
/// Z = sum p g. Decisions with lambda_d = 0 are dropped.
struct DecisionEnsemble {
  Ensemble ensemble;
  std::vector<std::string> support;   // basis order of the diagonal
  std::vector<std::size_t> decisions;  // decision of each item
  double normalization = 0.0;          // Z
};
DecisionEnsemble decision_to_ensemble(const Prior& p, const DecisionProblem& g);

/// Inverse of decision_to_ensemble for a classical ensemble on C^n with
/// labels "0".."n-1": p(theta) = sum_d lambda_d mu^d_theta, g = lambda mu / p.
std::pair<Prior, DecisionProblem> ensemble_to_decision(const Ensemble& e);

/// phi^cq of the states on `labels`, in order: C^n -> space of the experiment.
HermitianMap experiment_cq_map(const Experiment& t, std::span<const std::string> labels);

struct ExpDeficiencyResult {
  double epsilon = 0.0;  // min over alpha of max_theta ||sigma_theta - alpha(rho_theta)||_1 / 2
  HermitianMap alpha;    // H -> K
  double projection_shift = 0.0;
};

/// S on K, T on H with the same labels.
ExpDeficiencyResult exp_deficiency(const Experiment& s, const Experiment& t,
                                   const sdp::Options& opts = {});

/// P_succ({lambda_i, sum_j sigma_j (x) tau^j_i}) - P_succ({lambda_i, sum_j rho_j (x) tau^j_i})
/// - epsilon P_succ(E) for a block-diagonal ensemble E on C^n (x) K.
double ensemble_criterion_gap(const Experiment& s, const Experiment& t,
                              std::span<const std::string> labels, const Ensemble& e,
                              double epsilon, const sdp::Options& opts = {});

/// Random block-diagonal ensemble on C^n (x) C^d with k items.
Ensemble random_block_ensemble(std::size_t n, std::size_t d, std::size_t k, rng::Stream& s);

/// Equiprobable d^2-item ensemble of a random qc-form CP map C^d -> C^n; its
/// states are block-diagonal on C^n (x) C^d.
Ensemble label_block_ensemble(std::size_t n, std::size_t d, rng::Stream& s);

/// States span the Hermitian matrices.
bool is_complete(const Experiment& t);

/// Ensemble {lambda_i, sum_{j,l} Lambda^i_{jl} tau^H_l (x) tau^K_j} on H (x) K.
/// Lambda^i is |S0| x |T0| with nonnegative entries summing to 1.
Ensemble coro3_ensemble(std::span<const Eigen::MatrixXd> lambda, std::span<const double> weights,
                        const Experiment& t0, const Experiment& s0);

struct Coro2Report {
  double epsilon = 0.0;
  std::size_t trials = 0;
  double max_gap = 0.0;
  bool consistent = true;  // epsilon > 0 or max_gap <= 1e-6
};

Coro2Report coro2_scan(const Experiment& s, const Experiment& t, const Experiment& s0,
                       std::size_t trials, std::uint64_t seed, const sdp::Options& opts = {});

struct Thm4Report {
  double epsilon = 0.0;
  std::size_t trials = 0;
  double max_gap_ii = 0.0;          // ensemble criterion gap
  std::size_t violations_ii = 0;    // gap > 1e-6
  double max_excess_i = 0.0;        // payoff difference minus epsilon ||G||
  std::size_t violations_i = 0;     // excess > 1e-7
};

/// At epsilon from exp_deficiency: ensemble criterion on random block
/// ensembles (alternating plain and label-block type), and the decision-space
/// bound with phi' = phi o alpha on random quantum decision spaces.
Thm4Report thm4_verify(const Experiment& s, const Experiment& t, std::size_t trials,
                       std::uint64_t seed, const sdp::Options& opts = {});

/// Experiment with `labels` random full-rank states on C^d, labels "0".."n-1".
Experiment random_experiment(std::size_t d, std::size_t n, rng::Stream& s);

}  // namespace qcomp
