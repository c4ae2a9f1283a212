#include "qcomp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "qcomp/errors.hpp"

namespace qcomp {

namespace {

using Idx = Eigen::Index;

constexpr double kStateTol = 1e-8;
constexpr double kProjectionTol = 1e-7;
constexpr double kBlockTol = 1e-9;

std::size_t find_label(const std::vector<std::string>& labels, const std::string& label,
                       const char* where) {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw LabelUnknown(std::string(where) + ": unknown label '" + label + "'");
  }
  return static_cast<std::size_t>(it - labels.begin());
}

void require_unique(const std::vector<std::string>& labels, const char* where) {
  const std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) {
    throw LabelMismatch(std::string(where) + ": duplicate labels");
  }
}

CMatrix zeros(std::size_t n) {
  return CMatrix::Zero(static_cast<Idx>(n), static_cast<Idx>(n));
}

sdp::LinearMap ident() {
  return [](const CMatrix& x) { return x; };
}

}  // namespace

Experiment::Experiment(std::vector<std::string> labels, std::vector<CMatrix> states)
    : labels_(std::move(labels)), states_(std::move(states)) {
  if (labels_.empty()) throw SizeMismatch("Experiment: no labels");
  if (labels_.size() != states_.size()) {
    throw LabelMismatch("Experiment: " + std::to_string(labels_.size()) + " labels but " +
                        std::to_string(states_.size()) + " states");
  }
  require_unique(labels_, "Experiment");
  dim_ = static_cast<std::size_t>(states_.front().rows());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    CMatrix& st = states_[i];
    const std::string where = "Experiment state '" + labels_[i] + "'";
    if (static_cast<std::size_t>(st.rows()) != dim_ || st.rows() != st.cols()) {
      throw DimensionMismatch(where + ": wrong shape");
    }
    if (!is_hermitian(st)) throw NotHermitian(where + ": not Hermitian");
    st = hermitian_part(st);
    if (lambda_min(st) < -kStateTol) throw ValidationError(where + ": not PSD");
    if (std::abs(st.trace().real() - 1.0) > kStateTol) {
      throw ValidationError(where + ": trace is not 1");
    }
  }
}

std::size_t Experiment::index_of(const std::string& label) const {
  return find_label(labels_, label, "Experiment");
}

const CMatrix& Experiment::state(const std::string& label) const {
  return states_[index_of(label)];
}

Experiment Experiment::restrict(std::span<const std::string> labels) const {
  std::vector<std::string> l(labels.begin(), labels.end());
  std::vector<CMatrix> st;
  st.reserve(l.size());
  for (const std::string& x : l) st.push_back(state(x));
  return Experiment(std::move(l), std::move(st));
}

Experiment Experiment::mapped(const HermitianMap& phi) const {
  require_channel(phi, "Experiment::mapped");
  std::vector<CMatrix> st;
  st.reserve(states_.size());
  for (const CMatrix& x : states_) st.push_back(hermitian_part(qcomp::apply(phi, x)));
  return Experiment(labels_, std::move(st));
}

DecisionProblem::DecisionProblem(std::vector<std::string> labels, Eigen::MatrixXd payoff)
    : labels_(std::move(labels)), payoff_(std::move(payoff)) {
  require_unique(labels_, "DecisionProblem");
  if (static_cast<std::size_t>(payoff_.rows()) != labels_.size() || payoff_.cols() == 0) {
    throw SizeMismatch("DecisionProblem: payoff table must be labels x decisions");
  }
  if (!payoff_.allFinite() || payoff_.minCoeff() < 0.0) {
    throw ValidationError("DecisionProblem: payoff entries must be finite and nonnegative");
  }
}

double DecisionProblem::g(const std::string& label, std::size_t d) const {
  if (d >= decisions()) throw SizeMismatch("DecisionProblem: decision index out of range");
  return payoff_(static_cast<Idx>(find_label(labels_, label, "DecisionProblem")),
                 static_cast<Idx>(d));
}

QuantumDecisionSpace::QuantumDecisionSpace(std::vector<std::string> labels,
                                           std::vector<CMatrix> payoffs)
    : labels_(std::move(labels)), payoffs_(std::move(payoffs)) {
  require_unique(labels_, "QuantumDecisionSpace");
  if (labels_.size() != payoffs_.size() || payoffs_.empty()) {
    throw SizeMismatch("QuantumDecisionSpace: one payoff operator per label required");
  }
  dim_ = static_cast<std::size_t>(payoffs_.front().rows());
  for (CMatrix& g : payoffs_) {
    if (static_cast<std::size_t>(g.rows()) != dim_ || g.rows() != g.cols()) {
      throw DimensionMismatch("QuantumDecisionSpace: payoff operators differ in size");
    }
    if (!is_hermitian(g)) throw NotHermitian("QuantumDecisionSpace: payoff not Hermitian");
    g = hermitian_part(g);
    if (lambda_min(g) < -kPsdTol) throw ValidationError("QuantumDecisionSpace: payoff not PSD");
  }
}

const CMatrix& QuantumDecisionSpace::payoff(const std::string& label) const {
  return payoffs_[find_label(labels_, label, "QuantumDecisionSpace")];
}

Prior::Prior(std::vector<std::string> labels, std::vector<double> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
  require_unique(labels_, "Prior");
  if (labels_.size() != weights_.size() || labels_.empty()) {
    throw SizeMismatch("Prior: one weight per label required");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("Prior: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw ValidationError("Prior: weights sum to " + std::to_string(total));
  }
}

double Prior::weight(const std::string& label) const {
  return weights_[find_label(labels_, label, "Prior")];
}

double payoff(const Experiment& t, const std::string& theta, const Povm& m,
              const DecisionProblem& g) {
  if (m.size() != g.decisions()) {
    throw SizeMismatch("payoff: POVM has " + std::to_string(m.size()) + " outcomes but " +
                       std::to_string(g.decisions()) + " decisions");
  }
  if (m.dim() != t.dim()) throw DimensionMismatch("payoff: POVM dimension mismatch");
  const CMatrix& rho = t.state(theta);
  double v = 0.0;
  for (std::size_t d = 0; d < m.size(); ++d) {
    v += g.g(theta, d) * real_trace_product(rho, m.elements()[d]);
  }
  return v;
}

double quantum_payoff(const Experiment& t, const std::string& theta, const HermitianMap& phi,
                      const QuantumDecisionSpace& g) {
  if (phi.d_in() != t.dim() || phi.d_out() != g.dim()) {
    throw DimensionMismatch("quantum_payoff: decision rule dimensions do not match");
  }
  return real_trace_product(qcomp::apply(phi, t.state(theta)), g.payoff(theta));
}

double bayes_payoff(const Experiment& t, const Prior& p, const DecisionProblem& g,
                    const sdp::Options& opts) {
  std::vector<CMatrix> x(g.decisions(), zeros(t.dim()));
  for (std::size_t i = 0; i < p.labels().size(); ++i) {
    const double w = p.weights()[i];
    if (w == 0.0) continue;
    const std::string& theta = p.labels()[i];
    for (std::size_t d = 0; d < g.decisions(); ++d) x[d] += w * g.g(theta, d) * t.state(theta);
  }
  return guessing_value(x, opts).value;
}

DecisionEnsemble decision_to_ensemble(const Prior& p, const DecisionProblem& g) {
  std::vector<std::string> support;
  std::vector<double> pw;
  for (std::size_t i = 0; i < p.labels().size(); ++i) {
    if (p.weights()[i] > 0.0) {
      support.push_back(p.labels()[i]);
      pw.push_back(p.weights()[i]);
    }
  }
  const std::size_t n = support.size();
  const std::size_t nd = g.decisions();
  Eigen::MatrixXd mass(static_cast<Idx>(n), static_cast<Idx>(nd));  // p(theta) g(theta, d)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < nd; ++d) {
      mass(static_cast<Idx>(i), static_cast<Idx>(d)) = pw[i] * g.g(support[i], d);
    }
  }
  const double z = mass.sum();
  if (!(z > 0.0)) throw DegeneratePayoff("decision_to_ensemble: payoff vanishes on the support");

  DecisionEnsemble out{Ensemble({{1.0, CMatrix::Identity(1, 1)}}), support, {}, z};
  std::vector<EnsembleItem> items;
  for (std::size_t d = 0; d < nd; ++d) {
    const double col = mass.col(static_cast<Idx>(d)).sum();
    if (col <= 0.0) continue;
    CMatrix diag = zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
      diag(static_cast<Idx>(i), static_cast<Idx>(i)) = mass(static_cast<Idx>(i), static_cast<Idx>(d)) / col;
    }
    items.push_back({col / z, diag});
    out.decisions.push_back(d);
  }
  out.ensemble = Ensemble(std::move(items));
  return out;
}

std::pair<Prior, DecisionProblem> ensemble_to_decision(const Ensemble& e) {
  const std::size_t n = e.dim();
  const std::size_t nd = e.size();
  Eigen::MatrixXd mass(static_cast<Idx>(n), static_cast<Idx>(nd));  // lambda_d mu^d_theta
  for (std::size_t d = 0; d < nd; ++d) {
    const CMatrix& st = e.items()[d].state;
    if ((st - CMatrix(st.diagonal().asDiagonal())).cwiseAbs().maxCoeff() > kBlockTol) {
      throw ShapeError("ensemble_to_decision: ensemble is not classical");
    }
    for (std::size_t i = 0; i < n; ++i) {
      mass(static_cast<Idx>(i), static_cast<Idx>(d)) =
          e.items()[d].weight * std::max(0.0, st(static_cast<Idx>(i), static_cast<Idx>(i)).real());
    }
  }
  std::vector<std::string> labels;
  std::vector<double> prior;
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(static_cast<Idx>(n), static_cast<Idx>(nd));
  const double total = mass.sum();
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(std::to_string(i));
    const double row = mass.row(static_cast<Idx>(i)).sum();
    prior.push_back(row / total);
    if (row > 0.0) table.row(static_cast<Idx>(i)) = mass.row(static_cast<Idx>(i)) / (row / total);
  }
  return {Prior(labels, prior), DecisionProblem(labels, table)};
}

HermitianMap experiment_cq_map(const Experiment& t, std::span<const std::string> labels) {
  std::vector<CMatrix> st;
  st.reserve(labels.size());
  for (const std::string& l : labels) st.push_back(t.state(l));
  return cq_map(st);
}

ExpDeficiencyResult exp_deficiency(const Experiment& s, const Experiment& t,
                                   const sdp::Options& opts) {
  if (s.size() != t.size()) {
    throw LabelMismatch("exp_deficiency: experiments have different label sets");
  }
  for (const std::string& l : s.labels()) {
    if (std::find(t.labels().begin(), t.labels().end(), l) == t.labels().end()) {
      throw LabelMismatch("exp_deficiency: label '" + l + "' missing from T");
    }
  }
  const std::size_t dk = s.dim();
  const std::size_t dh = t.dim();

  // sigma - alpha(rho) = P - N with Tr[P + N] + slack = t for every label.
  sdp::Builder b(sdp::Sense::minimize);
  const auto a = b.add_block(dk * dh);
  const auto tb = b.add_block(1);
  b.add_objective(tb, CMatrix::Identity(1, 1));
  b.add_matrix_equality({{a, [dk, dh](const CMatrix& x) {
                           return partial_trace(x, dk, dh, Subsystem::first);
                         }}},
                        identity(dh));
  for (const std::string& l : s.labels()) {
    const auto p = b.add_block(dk);
    const auto n = b.add_block(dk);
    const auto slack = b.add_block(1);
    const CMatrix rho = t.state(l);
    b.add_matrix_equality({{p, ident()},
                           {n, [](const CMatrix& x) { return CMatrix(-x); }},
                           {a, [rho, dh, dk](const CMatrix& x) {
                              return apply_choi(x, dh, dk, rho);
                            }}},
                          s.state(l));
    b.add_scalar_equality({{p, identity(dk)},
                           {n, identity(dk)},
                           {slack, CMatrix::Identity(1, 1)},
                           {tb, -CMatrix::Identity(1, 1)}},
                          0.0);
  }
  const sdp::Solution sol = sdp::solve(std::move(b).build(), opts);
  sdp::require_optimal(sol, "exp_deficiency");

  const HermitianMap raw(dh, dk, hermitian_part(sol.primal_blocks[a]));
  HermitianMap alpha = project_to_channel(raw);
  const double shift = choi_distance(alpha, raw);
  if (shift > kProjectionTol) {
    throw SolverFailure("exp_deficiency: randomization moved by " + std::to_string(shift) +
                        " when projected onto channels (status max_iter)");
  }
  double eps = 0.5 * sol.primal_value;
  if (std::abs(eps) < 1e-10) eps = 0.0;
  return ExpDeficiencyResult{eps, std::move(alpha), shift};
}

double ensemble_criterion_gap(const Experiment& s, const Experiment& t,
                              std::span<const std::string> labels, const Ensemble& e,
                              double epsilon, const sdp::Options& opts) {
  const std::size_t n = labels.size();
  const std::size_t dk = s.dim();
  if (n == 0 || e.dim() != n * dk) {
    throw ShapeError("ensemble_criterion_gap: ensemble must live on C^n (x) K with n = " +
                     std::to_string(n) + ", d_K = " + std::to_string(dk));
  }
  const auto bk = static_cast<Idx>(dk);
  for (const EnsembleItem& it : e.items()) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t jj = 0; jj < n; ++jj) {
        if (j == jj) continue;
        const auto blk = it.state.block(static_cast<Idx>(j) * bk, static_cast<Idx>(jj) * bk, bk, bk);
        if (blk.cwiseAbs().maxCoeff() > kBlockTol) {
          throw ShapeError("ensemble_criterion_gap: ensemble state is not block-diagonal");
        }
      }
    }
  }
  const double p_s = psucc(push_ensemble(experiment_cq_map(s, labels), e, dk), opts).value;
  const double p_t = psucc(push_ensemble(experiment_cq_map(t, labels), e, dk), opts).value;
  const double p_e = psucc(e, opts).value;
  return p_s - p_t - epsilon * p_e;
}

Ensemble random_block_ensemble(std::size_t n, std::size_t d, std::size_t k, rng::Stream& s) {
  const std::vector<double> w = random_simplex(k, s);
  std::vector<EnsembleItem> items;
  for (std::size_t i = 0; i < k; ++i) {
    const std::vector<double> mass = random_simplex(n, s);
    CMatrix st = zeros(n * d);
    for (std::size_t j = 0; j < n; ++j) {
      st += mass[j] * kron(matrix_unit(n, j, j), random_state(d, s));
    }
    items.push_back({w[i], hermitian_part(st)});
  }
  return Ensemble(std::move(items));
}

Ensemble label_block_ensemble(std::size_t n, std::size_t d, rng::Stream& s) {
  const HermitianMap gamma = compose(pinching(n), random_cp_map(d, n, s));
  return ensemble_from_cp_map(gamma);
}

bool is_complete(const Experiment& t) { return spans_hermitian(t.states()); }

Ensemble coro3_ensemble(std::span<const Eigen::MatrixXd> lambda, std::span<const double> weights,
                        const Experiment& t0, const Experiment& s0) {
  if (!is_complete(t0) || !is_complete(s0)) {
    throw NotComplete("coro3_ensemble: reference experiments must be complete");
  }
  if (lambda.empty() || lambda.size() != weights.size()) {
    throw ShapeError("coro3_ensemble: one weight per Lambda slice required");
  }
  const std::size_t dh = t0.dim();
  const std::size_t dk = s0.dim();
  std::vector<EnsembleItem> items;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const Eigen::MatrixXd& l = lambda[i];
    if (static_cast<std::size_t>(l.rows()) != s0.size() ||
        static_cast<std::size_t>(l.cols()) != t0.size()) {
      throw ShapeError("coro3_ensemble: Lambda slice must be |S0| x |T0|");
    }
    if (l.minCoeff() < 0.0 || std::abs(l.sum() - 1.0) > 1e-10) {
      throw ShapeError("coro3_ensemble: Lambda slice must be nonnegative with unit sum");
    }
    CMatrix st = zeros(dh * dk);
    for (Idx j = 0; j < l.rows(); ++j) {
      for (Idx c = 0; c < l.cols(); ++c) {
        if (l(j, c) == 0.0) continue;
        st += l(j, c) * kron(t0.states()[static_cast<std::size_t>(c)],
                             s0.states()[static_cast<std::size_t>(j)]);
      }
    }
    items.push_back({weights[i], hermitian_part(st)});
  }
  return Ensemble(std::move(items));
}

Coro2Report coro2_scan(const Experiment& s, const Experiment& t, const Experiment& s0,
                       std::size_t trials, std::uint64_t seed, const sdp::Options& opts) {
  if (!is_complete(s0)) throw NotComplete("coro2_scan: S0 is not complete");
  if (s0.dim() != s.dim()) throw DimensionMismatch("coro2_scan: S0 must live on the space of S");
  const std::size_t dk = s.dim();
  const std::size_t dh = t.dim();
  const std::size_t k = dk * dk;
  const std::size_t nl = s.size();
  const std::size_t nj = s0.size();
  const rng::Stream root(seed);

  Coro2Report r;
  r.epsilon = exp_deficiency(s, t, opts).epsilon;
  r.trials = trials;
  r.max_gap = trials == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  for (std::size_t tr = 0; tr < trials; ++tr) {
    rng::Stream st = root.split(tr);
    std::vector<EnsembleItem> s_items, t_items;
    for (std::size_t i = 0; i < k; ++i) {
      const std::vector<double> w = random_simplex(nj * nl, st);
      CMatrix xs = zeros(dk * dk);
      CMatrix xt = zeros(dh * dk);
      for (std::size_t j = 0; j < nj; ++j) {
        for (std::size_t l = 0; l < nl; ++l) {
          const double c = w[j * nl + l];
          const std::string& label = s.labels()[l];
          xs += c * kron(s.state(label), s0.states()[j]);
          xt += c * kron(t.state(label), s0.states()[j]);
        }
      }
      s_items.push_back({1.0 / static_cast<double>(k), hermitian_part(xs)});
      t_items.push_back({1.0 / static_cast<double>(k), hermitian_part(xt)});
    }
    const double gap = psucc(Ensemble(std::move(s_items)), opts).value -
                       psucc(Ensemble(std::move(t_items)), opts).value;
    r.max_gap = std::max(r.max_gap, gap);
  }
  r.consistent = r.epsilon > 1e-7 || r.max_gap <= 1e-6;
  return r;
}

Thm4Report thm4_verify(const Experiment& s, const Experiment& t, std::size_t trials,
                       std::uint64_t seed, const sdp::Options& opts) {
  const ExpDeficiencyResult def = exp_deficiency(s, t, opts);
  const std::size_t dk = s.dim();
  const rng::Stream root(seed);
  constexpr double kTolII = 1e-6;
  constexpr double kTolI = 1e-7;

  Thm4Report r;
  r.epsilon = def.epsilon;
  r.trials = trials;
  r.max_gap_ii = r.max_excess_i = trials == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  for (std::size_t tr = 0; tr < trials; ++tr) {
    rng::Stream st = root.split(tr);

    // Random nonempty label subset, kept in experiment order.
    std::vector<std::string> labels;
    while (labels.empty()) {
      for (const std::string& l : s.labels()) {
        if (st.uniform() < 0.7) labels.push_back(l);
      }
    }
    const std::size_t n = labels.size();
    const Ensemble e = tr % 2 == 0 ? random_block_ensemble(n, dk, 1 + st.index(dk * dk), st)
                                   : label_block_ensemble(n, dk, st);
    const double gap = ensemble_criterion_gap(s, t, labels, e, def.epsilon, opts);
    r.max_gap_ii = std::max(r.max_gap_ii, gap);
    if (gap > kTolII) ++r.violations_ii;

    const std::size_t dd = 1 + st.index(3);
    std::vector<CMatrix> gs;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const CMatrix w = ginibre(dd, dd, st);
      gs.push_back(hermitian_part(w * w.adjoint()));
    }
    const QuantumDecisionSpace space(s.labels(), gs);
    const HermitianMap phi = random_channel(dk, dd, st);
    const HermitianMap phi_prime = compose(phi, def.alpha);
    for (const std::string& l : s.labels()) {
      const double excess = quantum_payoff(s, l, phi, space) - quantum_payoff(t, l, phi_prime, space) -
                            def.epsilon * op_norm(space.payoff(l));
      r.max_excess_i = std::max(r.max_excess_i, excess);
      if (excess > kTolI) ++r.violations_i;
    }
  }
  return r;
}

Experiment random_experiment(std::size_t d, std::size_t n, rng::Stream& s) {
  std::vector<std::string> labels;
  std::vector<CMatrix> states;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(std::to_string(i));
    states.push_back(random_state(d, s));
  }
  return Experiment(std::move(labels), std::move(states));
}

}  // namespace qcomp
