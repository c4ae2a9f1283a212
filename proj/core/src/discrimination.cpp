#include "qcomp/discrimination.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qcomp/errors.hpp"
#include "qcomp/norms.hpp"

namespace qcomp {

namespace {

using Idx = Eigen::Index;

constexpr double kWeightTol = 1e-10;
constexpr double kStateTol = 1e-8;
constexpr double kClipTol = 1e-10;

/// Re-Hermitize and zero out eigenvalues in [-kClipTol, 0).
CMatrix clip_state(const CMatrix& m) {
  CMatrix h = hermitian_part(m);
  const double lmin = lambda_min(h);
  if (lmin < 0.0 && lmin >= -kClipTol) {
    h = herm_apply(h, [](double x) { return x < 0.0 ? 0.0 : x; });
    h /= h.trace().real();
  }
  return h;
}

}  // namespace

Ensemble::Ensemble(std::vector<EnsembleItem> items) : items_(std::move(items)) {
  if (items_.empty()) throw SizeMismatch("Ensemble: no items");
  dim_ = static_cast<std::size_t>(items_.front().state.rows());
  double total = 0.0;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    EnsembleItem& it = items_[i];
    const std::string where = "Ensemble item " + std::to_string(i);
    if (static_cast<std::size_t>(it.state.rows()) != dim_ || it.state.rows() != it.state.cols()) {
      throw DimensionMismatch(where + ": state has wrong shape");
    }
    if (!(it.weight > 0.0 && it.weight <= 1.0 + kWeightTol)) {
      throw ValidationError(where + ": weight outside (0, 1]");
    }
    if (!is_hermitian(it.state)) throw NotHermitian(where + ": state not Hermitian");
    it.state = hermitian_part(it.state);
    if (lambda_min(it.state) < -kStateTol) throw ValidationError(where + ": state not PSD");
    if (std::abs(it.state.trace().real() - 1.0) > kStateTol) {
      throw ValidationError(where + ": state trace is not 1");
    }
    total += it.weight;
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    throw ValidationError("Ensemble: weights sum to " + std::to_string(total));
  }
}

std::vector<CMatrix> Ensemble::weighted_states() const {
  std::vector<CMatrix> out;
  out.reserve(items_.size());
  for (const EnsembleItem& it : items_) out.push_back(it.weight * it.state);
  return out;
}

Povm::Povm(std::vector<CMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw SizeMismatch("Povm: no elements");
  dim_ = static_cast<std::size_t>(elements_.front().rows());
  const auto d = static_cast<Idx>(dim_);
  CMatrix total = CMatrix::Zero(d, d);
  for (CMatrix& m : elements_) {
    if (m.rows() != d || m.cols() != d) throw DimensionMismatch("Povm: element has wrong shape");
    if (!is_hermitian(m)) throw NotHermitian("Povm: element not Hermitian");
    m = hermitian_part(m);
    if (lambda_min(m) < -kPsdTol) throw ValidationError("Povm: element not PSD");
    total += m;
  }
  if ((total - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kPsdTol) {
    throw ValidationError("Povm: elements do not sum to the identity");
  }
}

std::vector<CMatrix> normalize_povm(std::vector<CMatrix> elements) {
  if (elements.empty()) return elements;
  const Idx d = elements.front().rows();
  CMatrix total = CMatrix::Zero(d, d);
  for (CMatrix& m : elements) {
    m = herm_apply(m, [](double x) { return x < 0.0 ? 0.0 : x; });
    total += m;
  }
  const CMatrix inv_sqrt = herm_apply(total, [](double x) { return 1.0 / std::sqrt(x); });
  for (CMatrix& m : elements) m = hermitian_part(inv_sqrt * m * inv_sqrt);
  return elements;
}

GuessingValue guessing_value(std::span<const CMatrix> x, const sdp::Options& opts) {
  if (x.empty()) throw SizeMismatch("guessing_value: empty collection");
  const auto d = static_cast<std::size_t>(x.front().rows());
  sdp::Builder b(sdp::Sense::maximize);
  std::vector<std::pair<std::size_t, sdp::LinearMap>> sum;
  for (const CMatrix& xi : x) {
    if (static_cast<std::size_t>(xi.rows()) != d || xi.rows() != xi.cols()) {
      throw DimensionMismatch("guessing_value: operators differ in size");
    }
    const auto m = b.add_block(d);
    b.add_objective(m, xi);
    sum.emplace_back(m, [](const CMatrix& y) { return y; });
  }
  b.add_matrix_equality(sum, identity(d));
  const sdp::Problem p = std::move(b).build();
  const sdp::Solution sol = sdp::solve(p, opts);
  sdp::require_optimal(sol, "guessing_value");
  return GuessingValue{sol.primal_value, normalize_povm(sol.primal_blocks), sdp::certify(p, sol)};
}

PsuccResult psucc(const Ensemble& e, const sdp::Options& opts) {
  GuessingValue g = guessing_value(e.weighted_states(), opts);
  return PsuccResult{g.value, Povm(std::move(g.povm)), g.certificate};
}

HermitianMap ensemble_cq_map(const Ensemble& e) {
  return cq_map(e.weighted_states());
}

DualityCheck psucc_equals_dual_norm_check(const Ensemble& e, const sdp::Options& opts) {
  DualityCheck out;
  out.lhs = psucc(e, opts).value;
  out.rhs = dual_diamond_norm(ensemble_cq_map(e), opts);
  out.diff = out.lhs - out.rhs;
  return out;
}

std::vector<CMatrix> heisenberg_weyl(std::size_t d) {
  if (d == 0) throw DimensionMismatch("heisenberg_weyl: d must be positive");
  const auto n = static_cast<Idx>(d);
  CMatrix shift = CMatrix::Zero(n, n);
  CMatrix clock = CMatrix::Zero(n, n);
  for (Idx k = 0; k < n; ++k) {
    shift((k + 1) % n, k) = 1.0;
    clock(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                      static_cast<double>(d));
  }
  std::vector<CMatrix> out;
  out.reserve(d * d);
  CMatrix sa = CMatrix::Identity(n, n);
  for (std::size_t a = 0; a < d; ++a) {
    CMatrix u = sa;
    for (std::size_t b = 0; b < d; ++b) {
      out.push_back(u);
      u = u * clock;
    }
    sa = shift * sa;
  }
  return out;
}

Ensemble ensemble_from_cp_map(const HermitianMap& gamma) {
  if (!is_cp(gamma)) throw NotCompletelyPositive("ensemble_from_cp_map: map is not CP");
  const double t = gamma.choi().trace().real();
  if (t <= 1e-12) throw ZeroMap("ensemble_from_cp_map: Tr[gamma(I)] vanishes");
  const std::size_t dk = gamma.d_in();
  const std::size_t dh = gamma.d_out();
  const double w = 1.0 / static_cast<double>(dk * dk);
  std::vector<EnsembleItem> items;
  items.reserve(dk * dk);
  for (const CMatrix& u : heisenberg_weyl(dk)) {
    const CMatrix v = kron(identity(dh), u);
    items.push_back({w, clip_state(v.adjoint() * gamma.choi() * v / t)});
  }
  return Ensemble(std::move(items));
}

Ensemble push_ensemble(const HermitianMap& phi, const Ensemble& e, std::size_t ancilla) {
  if (ancilla == 0) throw DimensionMismatch("push_ensemble: ancilla dimension must be positive");
  if (phi.d_in() * ancilla != e.dim()) {
    throw DimensionMismatch("push_ensemble: ensemble dimension " + std::to_string(e.dim()) +
                            " is not d_in * ancilla = " +
                            std::to_string(phi.d_in() * ancilla));
  }
  if (!is_channel(phi)) throw NotAChannel("push_ensemble: map is not a channel");
  const HermitianMap ext = ancilla == 1 ? phi : tensor(phi, HermitianMap::identity(ancilla));
  std::vector<EnsembleItem> items;
  items.reserve(e.size());
  for (const EnsembleItem& it : e.items()) items.push_back({it.weight, clip_state(qcomp::apply(ext, it.state))});
  return Ensemble(std::move(items));
}

Ensemble random_ensemble(std::size_t d, std::size_t n, rng::Stream& s) {
  const std::vector<double> w = random_simplex(n, s);
  std::vector<EnsembleItem> items;
  items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) items.push_back({w[i], random_state(d, s)});
  return Ensemble(std::move(items));
}

}  // namespace qcomp
