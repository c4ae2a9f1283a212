#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qcomp/linalg.hpp"
#include "qcomp/maps.hpp"
#include "qcomp/random.hpp"
#include "qcomp/sdp.hpp"

namespace qcomp {

struct EnsembleItem {
  double weight = 0.0;
  CMatrix state;
};

/// Weighted family {lambda_i, sigma_i} of density matrices on one space.
class Ensemble {
 public:
  /// Throws ValidationError unless weights lie in (0, 1] and sum to 1
  /// within 1e-10 and every state is PSD with unit trace within 1e-8.
  explicit Ensemble(std::vector<EnsembleItem> items);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return items_.size(); }
  const std::vector<EnsembleItem>& items() const { return items_; }

  /// lambda_i sigma_i.
  std::vector<CMatrix> weighted_states() const;

 private:
  std::size_t dim_ = 0;
  std::vector<EnsembleItem> items_;
};

/// PSD operators summing to the identity within 1e-8.
class Povm {
 public:
  explicit Povm(std::vector<CMatrix> elements);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<CMatrix>& elements() const { return elements_; }

 private:
  std::size_t dim_ = 0;
  std::vector<CMatrix> elements_;
};

/// Rescales PSD operators as S^{-1/2} M_i S^{-1/2}, S = sum_i M_i, after
/// clipping negative eigenvalues; turns a near-POVM into an exact one.
std::vector<CMatrix> normalize_povm(std::vector<CMatrix> elements);

struct PsuccResult {
  double value = 0.0;
  Povm optimal_povm;
  sdp::Certificate certificate;
};

/// max over n-outcome POVMs M of sum_i Re Tr[M_i X_i] for Hermitian X_i,
/// with the maximizing POVM.
struct GuessingValue {
  double value = 0.0;
  std::vector<CMatrix> povm;
  sdp::Certificate certificate;
};
GuessingValue guessing_value(std::span<const CMatrix> x, const sdp::Options& opts = {});

/// Optimal guessing probability max_M sum_i lambda_i Tr[M_i sigma_i].
PsuccResult psucc(const Ensemble& e, const sdp::Options& opts = {});

/// phi_E, the cq-map of the weighted states.
HermitianMap ensemble_cq_map(const Ensemble& e);

struct DualityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double diff = 0.0;
};

/// (P_succ(E), ||phi_E||^diamond, difference).
DualityCheck psucc_equals_dual_norm_check(const Ensemble& e,
                                          const sdp::Options& opts = {});

/// Clock-shift unitaries S^a C^b on C^d, index a * d + b.
std::vector<CMatrix> heisenberg_weyl(std::size_t d);

/// Equiprobable ensemble {1/d_K^2, (I (x) U_i^dag) C(gamma) (I (x) U_i) / Tr[gamma(I)]}
/// on H (x) K for CP gamma: K -> H.
Ensemble ensemble_from_cp_map(const HermitianMap& gamma);

/// States mapped through phi (x) id_ancilla; weights unchanged.
Ensemble push_ensemble(const HermitianMap& phi, const Ensemble& e,
                       std::size_t ancilla = 1);

/// n random full-rank states on C^d with flat-Dirichlet weights.
Ensemble random_ensemble(std::size_t d, std::size_t n, rng::Stream& s);

}  // namespace qcomp
