#include "qcomp/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "qcomp/errors.hpp"

namespace qcomp::sdp {

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::max_iter: return "max_iter";
  }
  return "unknown";
}

Options options_from_env(Options base) {
  if (const char* env = std::getenv("QCOMP_SDP_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0 && std::isfinite(v)) base.gap_tol = v;
  }
  return base;
}

namespace {

thread_local CertificationScope* t_scope = nullptr;

using Blocks = std::vector<CMatrix>;
using Idx = Eigen::Index;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPolishTarget = 1e-3;
constexpr int kPolishSteps = 4;
constexpr int kRefineSteps = 3;
constexpr double kProjectThreshold = 1e-2;
constexpr int kBacktrackSteps = 30;

Eigen::Map<const Eigen::VectorXcd> vec(const CMatrix& m) {
  return {m.data(), m.size()};
}

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (vec(a[k]).dot(vec(b[k]))).real();
  return s;
}

double frob(const Blocks& a) {
  double s = 0.0;
  for (const CMatrix& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

void symmetrize(CMatrix& m) { m = 0.5 * (m + m.adjoint()).eval(); }

struct BlockData {
  Idx n = 0;
  std::vector<Idx> rows;   // constraint indices touching this block
  Eigen::MatrixXcd coeffs;  // n*n x rows.size(); column k = vec(A_{rows[k]})
};

/// The constraint operator after presolve, in internal minimization form.
struct Kernel {
  std::vector<BlockData> blocks;
  Blocks c;
  RVector b;
  Idx m = 0;
  double total_dim = 0.0;

  RVector apply_a(const Blocks& x) const {
    RVector out = RVector::Zero(m);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const BlockData& bd = blocks[k];
      if (bd.rows.empty()) continue;
      const Eigen::VectorXcd v = bd.coeffs.adjoint() * vec(x[k]);
      for (std::size_t r = 0; r < bd.rows.size(); ++r) {
        out(bd.rows[r]) += v(static_cast<Idx>(r)).real();
      }
    }
    return out;
  }

  Blocks apply_at(const RVector& y) const {
    Blocks out(blocks.size());
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const BlockData& bd = blocks[k];
      out[k] = CMatrix::Zero(bd.n, bd.n);
      if (bd.rows.empty()) continue;
      Eigen::VectorXcd ys(static_cast<Idx>(bd.rows.size()));
      for (std::size_t r = 0; r < bd.rows.size(); ++r) ys(static_cast<Idx>(r)) = y(bd.rows[r]);
      const Eigen::VectorXcd v = bd.coeffs * ys;
      out[k] = Eigen::Map<const CMatrix>(v.data(), bd.n, bd.n);
      symmetrize(out[k]);
    }
    return out;
  }
};

struct Presolved {
  Kernel kernel;
  std::vector<std::size_t> kept;  // original index of each kept row
  std::vector<std::size_t> dropped;
  bool inconsistent = false;
};

void validate(const Problem& p) {
  if (p.objective.size() != p.blocks.size() && !p.objective.empty()) {
    throw DimensionMismatch("sdp::solve: objective has " +
                            std::to_string(p.objective.size()) +
                            " blocks, problem has " +
                            std::to_string(p.blocks.size()));
  }
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    if (p.blocks[k] == 0) throw DimensionMismatch("sdp::solve: empty block");
    if (k < p.objective.size() && p.objective[k].size() != 0) {
      const CMatrix& c = p.objective[k];
      if (static_cast<std::size_t>(c.rows()) != p.blocks[k] || c.rows() != c.cols()) {
        throw DimensionMismatch("sdp::solve: objective block size mismatch");
      }
      if (!is_hermitian(c)) throw NotHermitian("sdp::solve: objective not Hermitian");
    }
  }
  for (const Constraint& con : p.constraints) {
    for (const Term& t : con.terms) {
      if (t.block >= p.blocks.size()) {
        throw DimensionMismatch("sdp::solve: constraint references unknown block");
      }
      if (static_cast<std::size_t>(t.coeff.rows()) != p.blocks[t.block] ||
          t.coeff.rows() != t.coeff.cols()) {
        throw DimensionMismatch("sdp::solve: constraint block size mismatch");
      }
      if (!is_hermitian(t.coeff)) {
        throw NotHermitian("sdp::solve: constraint coefficient not Hermitian");
      }
    }
  }
}

CMatrix objective_block(const Problem& p, std::size_t k) {
  const auto n = static_cast<Idx>(p.blocks[k]);
  if (k < p.objective.size() && p.objective[k].size() != 0) {
    return hermitian_part(p.objective[k]);
  }
  return CMatrix::Zero(n, n);
}

Presolved presolve(const Problem& p) {
  const std::size_t nb = p.blocks.size();
  const std::size_t m = p.constraints.size();
  std::vector<Idx> offset(nb + 1, 0);
  for (std::size_t k = 0; k < nb; ++k) {
    offset[k + 1] = offset[k] + static_cast<Idx>(p.blocks[k] * p.blocks[k]);
  }
  const Idx len = offset[nb];

  Presolved out;
  if (m > 0) {
    // Real embedding of each constraint so that <A, X> = a . x.
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(2 * len, static_cast<Idx>(m));
    RVector rhs(static_cast<Idx>(m));
    for (std::size_t j = 0; j < m; ++j) {
      const Constraint& con = p.constraints[j];
      rhs(static_cast<Idx>(j)) = con.rhs;
      for (const Term& t : con.terms) {
        const CMatrix a = hermitian_part(t.coeff);
        const auto v = vec(a);
        rows.col(static_cast<Idx>(j)).segment(offset[t.block], v.size()) += v.real();
        rows.col(static_cast<Idx>(j)).segment(len + offset[t.block], v.size()) += v.imag();
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rows);
    qr.setThreshold(1e-10);
    const Idx rank = qr.rank();
    const auto& perm = qr.colsPermutation().indices();
    std::vector<std::size_t> kept, dropped;
    for (Idx k = 0; k < static_cast<Idx>(m); ++k) {
      (k < rank ? kept : dropped).push_back(static_cast<std::size_t>(perm(k)));
    }
    std::sort(kept.begin(), kept.end());
    std::sort(dropped.begin(), dropped.end());
    if (!dropped.empty()) {
      Eigen::MatrixXd basis(rows.rows(), static_cast<Idx>(kept.size()));
      RVector basis_rhs(static_cast<Idx>(kept.size()));
      for (std::size_t k = 0; k < kept.size(); ++k) {
        basis.col(static_cast<Idx>(k)) = rows.col(static_cast<Idx>(kept[k]));
        basis_rhs(static_cast<Idx>(k)) = rhs(static_cast<Idx>(kept[k]));
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> bqr(basis);
      for (std::size_t d : dropped) {
        const RVector z = kept.empty() ? RVector() : RVector(bqr.solve(rows.col(static_cast<Idx>(d))));
        const double implied = kept.empty() ? 0.0 : basis_rhs.dot(z);
        const double scale = 1.0 + std::abs(rhs(static_cast<Idx>(d))) +
                             (kept.empty() ? 0.0 : z.cwiseAbs().dot(basis_rhs.cwiseAbs()));
        if (std::abs(implied - rhs(static_cast<Idx>(d))) > 1e-8 * scale) {
          out.inconsistent = true;
        }
      }
    }
    out.kept = std::move(kept);
    out.dropped = std::move(dropped);
  }

  Kernel& ker = out.kernel;
  ker.m = static_cast<Idx>(out.kept.size());
  ker.b.resize(ker.m);
  ker.blocks.resize(nb);
  ker.c.resize(nb);
  const double sign = p.sense == Sense::maximize ? -1.0 : 1.0;
  for (std::size_t k = 0; k < nb; ++k) {
    ker.blocks[k].n = static_cast<Idx>(p.blocks[k]);
    ker.c[k] = sign * objective_block(p, k);
    ker.total_dim += static_cast<double>(p.blocks[k]);
  }
  // Gather per-block coefficient columns.
  std::vector<std::vector<std::pair<Idx, CMatrix>>> per_block(nb);
  for (std::size_t r = 0; r < out.kept.size(); ++r) {
    const Constraint& con = p.constraints[out.kept[r]];
    ker.b(static_cast<Idx>(r)) = con.rhs;
    std::vector<CMatrix> acc(nb);
    for (const Term& t : con.terms) {
      if (acc[t.block].size() == 0) {
        acc[t.block] = hermitian_part(t.coeff);
      } else {
        acc[t.block] += hermitian_part(t.coeff);
      }
    }
    for (std::size_t k = 0; k < nb; ++k) {
      if (acc[k].size() != 0 && acc[k].cwiseAbs().maxCoeff() > 0.0) {
        per_block[k].emplace_back(static_cast<Idx>(r), std::move(acc[k]));
      }
    }
  }
  for (std::size_t k = 0; k < nb; ++k) {
    BlockData& bd = ker.blocks[k];
    bd.coeffs.resize(bd.n * bd.n, static_cast<Idx>(per_block[k].size()));
    for (std::size_t j = 0; j < per_block[k].size(); ++j) {
      bd.rows.push_back(per_block[k][j].first);
      bd.coeffs.col(static_cast<Idx>(j)) = vec(per_block[k][j].second);
    }
  }
  return out;
}

/// Nesterov-Todd scaling of one block: W S W = X with W = G G^H and
/// G^H S G = G^{-1} X G^{-H} = diag(v).
struct NtScaling {
  CMatrix g;
  CMatrix g_inv;
  CMatrix w;
  RVector v;
};

bool nt_scaling(const CMatrix& x, const CMatrix& s, NtScaling& out) {
  Eigen::LLT<CMatrix> llt(x);
  if (llt.info() != Eigen::Success) return false;
  const CMatrix l = llt.matrixL();
  CMatrix t = l.adjoint() * s * l;
  symmetrize(t);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(t);
  if (es.info() != Eigen::Success) return false;
  const RVector d = es.eigenvalues();
  if (!(d.minCoeff() > 0.0)) return false;
  const CMatrix& q = es.eigenvectors();
  const RVector d_m14 = d.array().pow(-0.25);
  const RVector d_p14 = d.array().pow(0.25);
  const CMatrix l_inv = l.triangularView<Eigen::Lower>().solve(
      CMatrix::Identity(x.rows(), x.cols()));
  out.g = l * q * d_m14.asDiagonal();
  out.g_inv = d_p14.asDiagonal() * q.adjoint() * l_inv;
  out.w = out.g * out.g.adjoint();
  symmetrize(out.w);
  out.v = d.array().sqrt();
  return true;
}

/// Largest alpha with x + alpha dx >= 0 (infinity if unconstrained).
double max_step(const CMatrix& x, const CMatrix& dx) {
  Eigen::LLT<CMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const auto l = llt.matrixL();
  const CMatrix y = l.solve(dx);
  CMatrix e = l.solve(CMatrix(y.adjoint())).adjoint();
  symmetrize(e);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(e, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin >= 0.0 ? kInf : -1.0 / lmin;
}

/// Solves (V Z + Z V) / 2 = R for diagonal V.
CMatrix lyapunov(const RVector& v, const CMatrix& r) {
  CMatrix z(r.rows(), r.cols());
  for (Idx i = 0; i < r.rows(); ++i) {
    for (Idx j = 0; j < r.cols(); ++j) z(i, j) = 2.0 * r(i, j) / (v(i) + v(j));
  }
  return z;
}

bool interior(const Blocks& x) {
  for (const CMatrix& m : x) {
    if (Eigen::LLT<CMatrix>(m).info() != Eigen::Success) return false;
  }
  return true;
}

struct Iterate {
  Blocks x, s;
  RVector y;
};

struct Direction {
  Blocks dx, ds;
  RVector dy;
};

class InteriorPoint {
 public:
  InteriorPoint(const Kernel& k, const Options& o);

  Solution run(Iterate& it, std::vector<IterateLog>* history);

 private:
  bool build_schur(const std::vector<NtScaling>& nt);
  Direction direction(const std::vector<NtScaling>& nt, const Blocks& z,
                      const RVector& rp, const Blocks& rd) const;

  const Kernel& ker_;
  const Options& opts_;
  RVector solve_schur(const RVector& r) const {
    return schur_scale_.cwiseProduct(schur_.solve(schur_scale_.cwiseProduct(r)));
  }

  Eigen::LLT<Eigen::MatrixXd> schur_;  // of D^-1/2 S D^-1/2, D = diag(S)
  RVector schur_scale_;                // D^-1/2
  Eigen::LLT<Eigen::MatrixXd> gram_;  // A A^T, fixed for the whole run
};

InteriorPoint::InteriorPoint(const Kernel& k, const Options& o) : ker_(k), opts_(o) {
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(ker_.m, ker_.m);
  for (const BlockData& bd : ker_.blocks) {
    if (bd.rows.empty()) continue;
    const Eigen::MatrixXd local = (bd.coeffs.adjoint() * bd.coeffs).real();
    for (Idx i = 0; i < local.rows(); ++i) {
      for (Idx j = 0; j < local.cols(); ++j) {
        gram(bd.rows[static_cast<std::size_t>(i)], bd.rows[static_cast<std::size_t>(j)]) += local(i, j);
      }
    }
  }
  gram_.compute(0.5 * (gram + gram.transpose()));
}

bool InteriorPoint::build_schur(const std::vector<NtScaling>& nt) {
  Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(ker_.m, ker_.m);
  for (std::size_t k = 0; k < ker_.blocks.size(); ++k) {
    const BlockData& bd = ker_.blocks[k];
    if (bd.rows.empty()) continue;
    const Idx cols = bd.coeffs.cols();
    Eigen::MatrixXcd waw(bd.n * bd.n, cols);
    for (Idx j = 0; j < cols; ++j) {
      const Eigen::Map<const CMatrix> a(bd.coeffs.col(j).data(), bd.n, bd.n);
      const CMatrix prod = nt[k].w * a * nt[k].w;
      waw.col(j) = vec(prod);
    }
    const Eigen::MatrixXd local = (bd.coeffs.adjoint() * waw).real();
    for (Idx i = 0; i < cols; ++i) {
      for (Idx j = 0; j < cols; ++j) {
        schur(bd.rows[static_cast<std::size_t>(i)], bd.rows[static_cast<std::size_t>(j)]) +=
            local(i, j);
      }
    }
  }
  schur = 0.5 * (schur + schur.transpose()).eval();
  // Rows from nearly converged blocks carry entries many orders larger than
  // the rest; equilibrating first keeps the regularization relative to each row.
  schur_scale_ = schur.diagonal().unaryExpr(
      [](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 1.0; });
  schur = schur_scale_.asDiagonal() * schur * schur_scale_.asDiagonal();
  double reg = opts_.regularization;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Eigen::MatrixXd reg_schur = schur;
    reg_schur.diagonal().array() += reg;
    schur_.compute(reg_schur);
    if (schur_.info() == Eigen::Success) return true;
    reg *= 100.0;
  }
  return false;
}

Direction InteriorPoint::direction(const std::vector<NtScaling>& nt,
                                   const Blocks& z, const RVector& rp,
                                   const Blocks& rd) const {
  const std::size_t nb = ker_.blocks.size();
  Blocks gzg(nb), wrw(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    gzg[k] = nt[k].g * z[k] * nt[k].g.adjoint();
    symmetrize(gzg[k]);
    wrw[k] = nt[k].w * rd[k] * nt[k].w;
  }
  Direction d;
  const RVector h = rp + ker_.apply_a(wrw) - ker_.apply_a(gzg);
  d.dy = ker_.m > 0 ? solve_schur(h) : RVector();
  d.ds.resize(nb);
  d.dx.resize(nb);
  // Refine dy against the unfactored operator so that A(dx) = rp holds even
  // when the regularized Schur factor is inaccurate near the boundary.
  const double target = 1e-14 * (1.0 + rp.norm());
  double last = kInf;
  for (int round = 0;; ++round) {
    const Blocks atdy = ker_.apply_at(d.dy);
    for (std::size_t k = 0; k < nb; ++k) {
      d.ds[k] = rd[k] - atdy[k];
      d.dx[k] = gzg[k] - nt[k].w * d.ds[k] * nt[k].w;
      symmetrize(d.dx[k]);
      symmetrize(d.ds[k]);
    }
    if (ker_.m == 0 || round == kRefineSteps) break;
    const RVector res = rp - ker_.apply_a(d.dx);
    const double rn = res.norm();
    if (rn <= target || rn >= 0.5 * last) break;
    last = rn;
    d.dy += solve_schur(res);
  }
  // A Schur solve too inaccurate to refine would push the iterate off the
  // affine set; project dx back onto A dx = rp with A A^T, which stays well
  // conditioned. Small leftovers are left alone since the projection ignores
  // the cone and can stall the step length.
  const RVector res = ker_.m > 0 ? RVector(rp - ker_.apply_a(d.dx)) : RVector();
  if (ker_.m > 0 && gram_.info() == Eigen::Success &&
      res.norm() > kProjectThreshold * opts_.feas_tol * (1.0 + ker_.b.norm())) {
    const Blocks fix = ker_.apply_at(gram_.solve(res));
    for (std::size_t k = 0; k < nb; ++k) d.dx[k] += fix[k];
  }
  return d;
}

Solution InteriorPoint::run(Iterate& it, std::vector<IterateLog>* history) {
  const std::size_t nb = ker_.blocks.size();
  const double norm_b = ker_.b.norm();
  const double norm_c = frob(ker_.c);

  Solution sol;
  Iterate best = it;
  double best_merit = kInf;
  int stalled = 0;
  int polish = 0;

  for (int iter = 0;; ++iter) {
    const RVector rp = ker_.b - ker_.apply_a(it.x);
    const Blocks aty = ker_.apply_at(it.y);
    Blocks rd(nb);
    for (std::size_t k = 0; k < nb; ++k) rd[k] = ker_.c[k] - it.s[k] - aty[k];

    const double pobj = inner(ker_.c, it.x);
    const double dobj = ker_.b.dot(it.y);
    const double mu = inner(it.x, it.s) / ker_.total_dim;
    const double pinf = rp.norm() / (1.0 + norm_b);
    const double dinf = frob(rd) / (1.0 + norm_c);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));

    if (history) history->push_back({iter, pobj, dobj, pinf, dinf, mu});

    // merit <= 1 exactly when all three termination tests pass.
    const double merit = std::max({gap / opts_.gap_tol, pinf / opts_.feas_tol,
                                   dinf / opts_.feas_tol});
    if (merit < best_merit) {
      best_merit = merit;
      best = it;
      sol.iterations = iter;
    }
    if (merit <= 1.0) sol.status = Status::optimal;
    // A few extra steps buy headroom below the tolerance; the best iterate is
    // kept if they make things worse.
    if (sol.status == Status::optimal &&
        (best_merit <= kPolishTarget || ++polish > kPolishSteps)) {
      break;
    }
    // Farkas certificates read off diverging iterates.
    if (iter > 5 && sol.status != Status::optimal) {
      Blocks aty_s(nb);
      for (std::size_t k = 0; k < nb; ++k) aty_s[k] = aty[k] + it.s[k];
      if (dobj > 0.0 && frob(aty_s) / dobj < 1e-8 && dobj > 1e6) {
        sol.status = Status::infeasible;
        best = it;
        sol.iterations = iter;
        break;
      }
      if (pobj < 0.0 && ker_.apply_a(it.x).norm() / -pobj < 1e-8 && -pobj > 1e6) {
        sol.status = Status::unbounded;
        best = it;
        sol.iterations = iter;
        break;
      }
    }
    if (iter >= opts_.max_iter) break;

    std::vector<NtScaling> nt(nb);
    bool ok = true;
    for (std::size_t k = 0; k < nb && ok; ++k) ok = nt_scaling(it.x[k], it.s[k], nt[k]);
    if (!ok || !build_schur(nt)) {
      if (sol.status == Status::optimal) break;
      throw NumericalFailure("sdp::solve: factorization breakdown at iteration " +
                             std::to_string(iter));
    }

    // Predictor: target mu = 0.
    Blocks z(nb);
    for (std::size_t k = 0; k < nb; ++k) z[k] = -CMatrix(nt[k].v.cast<Complex>().asDiagonal());
    const Direction pred = direction(nt, z, rp, rd);
    double ap = kInf, ad = kInf;
    for (std::size_t k = 0; k < nb; ++k) {
      ap = std::min(ap, max_step(it.x[k], pred.dx[k]));
      ad = std::min(ad, max_step(it.s[k], pred.ds[k]));
    }
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double mu_aff = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      const CMatrix xa = it.x[k] + ap * pred.dx[k];
      const CMatrix sa = it.s[k] + ad * pred.ds[k];
      mu_aff += (vec(xa).dot(vec(sa))).real();
    }
    mu_aff /= ker_.total_dim;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);
    const double step_factor = 0.9 + 0.09 * std::min(ap, ad);

    // Corrector with Mehrotra second-order term.
    for (std::size_t k = 0; k < nb; ++k) {
      const CMatrix dxs = nt[k].g_inv * pred.dx[k] * nt[k].g_inv.adjoint();
      const CMatrix dss = nt[k].g.adjoint() * pred.ds[k] * nt[k].g;
      CMatrix r = -0.5 * (dxs * dss + dss * dxs);
      for (Idx i = 0; i < r.rows(); ++i) r(i, i) += sigma * mu - nt[k].v(i) * nt[k].v(i);
      z[k] = lyapunov(nt[k].v, r);
    }
    const Direction corr = direction(nt, z, rp, rd);
    ap = kInf;
    ad = kInf;
    for (std::size_t k = 0; k < nb; ++k) {
      ap = std::min(ap, max_step(it.x[k], corr.dx[k]));
      ad = std::min(ad, max_step(it.s[k], corr.ds[k]));
    }
    ap = std::min(1.0, step_factor * ap);
    ad = std::min(1.0, step_factor * ad);

    // Rounding can land a step on the boundary; later steps need a Cholesky
    // factor of both iterates.
    Blocks nx(nb), ns(nb);
    for (int tries = 0;; ++tries) {
      for (std::size_t k = 0; k < nb; ++k) {
        nx[k] = it.x[k] + ap * corr.dx[k];
        ns[k] = it.s[k] + ad * corr.ds[k];
        symmetrize(nx[k]);
        symmetrize(ns[k]);
      }
      if ((interior(nx) && interior(ns)) || tries == kBacktrackSteps) break;
      ap *= 0.5;
      ad *= 0.5;
    }
    it.x = std::move(nx);
    it.s = std::move(ns);
    if (ker_.m > 0) it.y += ad * corr.dy;

    stalled = (std::max(ap, ad) < 1e-8) ? stalled + 1 : 0;
    if (stalled >= 3) break;
  }
  it = std::move(best);
  return sol;
}

}  // namespace

Solution solve(const Problem& p, const Options& opts) {
  validate(p);
  Presolved pre = presolve(p);
  const Kernel& ker = pre.kernel;
  const std::size_t nb = p.blocks.size();

  Solution sol;
  for (std::size_t d : pre.dropped) {
    sol.warnings.push_back("dropped linearly dependent constraint row " +
                           std::to_string(d));
  }
  sol.dropped_rows = pre.dropped;

  Iterate it;
  it.x.resize(nb);
  it.s.resize(nb);
  it.y = RVector::Zero(ker.m);
  for (std::size_t k = 0; k < nb; ++k) {
    const BlockData& bd = ker.blocks[k];
    const double n = static_cast<double>(bd.n);
    double xi = std::max(10.0, std::sqrt(n));
    double eta = std::max({10.0, std::sqrt(n), ker.c[k].norm()});
    for (std::size_t j = 0; j < bd.rows.size(); ++j) {
      const double an = bd.coeffs.col(static_cast<Idx>(j)).norm();
      xi = std::max(xi, n * (1.0 + std::abs(ker.b(bd.rows[j]))) / (1.0 + an));
      eta = std::max(eta, an);
    }
    it.x[k] = xi * CMatrix::Identity(bd.n, bd.n);
    it.s[k] = eta * CMatrix::Identity(bd.n, bd.n);
  }

  if (pre.inconsistent) {
    sol.status = Status::infeasible;
  } else {
    InteriorPoint ipm(ker, opts);
    const Solution run = ipm.run(it, opts.record_history ? &sol.history : nullptr);
    sol.status = run.status;
    sol.iterations = run.iterations;
  }

  const bool maximize = p.sense == Sense::maximize;
  if (maximize) {
    for (IterateLog& h : sol.history) {
      h.primal_value = -h.primal_value;
      h.dual_value = -h.dual_value;
    }
  }
  const double pobj = inner(ker.c, it.x);
  const double dobj = ker.b.dot(it.y);
  sol.primal_value = maximize ? -pobj : pobj;
  sol.dual_value = maximize ? -dobj : dobj;
  sol.gap = std::abs(sol.primal_value - sol.dual_value) / (1.0 + std::abs(sol.primal_value));
  sol.primal_blocks = std::move(it.x);
  sol.dual_slacks = std::move(it.s);
  sol.dual_vector.assign(p.constraints.size(), 0.0);
  for (std::size_t r = 0; r < pre.kept.size(); ++r) {
    sol.dual_vector[pre.kept[r]] = (maximize ? -1.0 : 1.0) * it.y(static_cast<Idx>(r));
  }

  if (t_scope != nullptr) {
    t_scope->record(certify(p, sol));
  }
  return sol;
}

Residuals residuals(const Problem& p, const Solution& s) {
  validate(p);
  const std::size_t nb = p.blocks.size();
  if (s.primal_blocks.size() != nb || s.dual_vector.size() != p.constraints.size()) {
    throw DimensionMismatch("sdp::residuals: solution does not match problem");
  }
  Residuals out;

  RVector rhs(static_cast<Idx>(p.constraints.size()));
  RVector ax(static_cast<Idx>(p.constraints.size()));
  Blocks aty(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const auto n = static_cast<Idx>(p.blocks[k]);
    aty[k] = CMatrix::Zero(n, n);
  }
  for (std::size_t j = 0; j < p.constraints.size(); ++j) {
    const Constraint& con = p.constraints[j];
    rhs(static_cast<Idx>(j)) = con.rhs;
    double v = 0.0;
    for (const Term& t : con.terms) {
      const CMatrix a = hermitian_part(t.coeff);
      v += real_trace_product(a, s.primal_blocks[t.block]);
      aty[t.block] += s.dual_vector[j] * a;
    }
    ax(static_cast<Idx>(j)) = v;
  }
  out.primal_infeas = (ax - rhs).norm() / (1.0 + rhs.norm());
  for (const CMatrix& x : s.primal_blocks) {
    out.primal_infeas = std::max(out.primal_infeas, -lambda_min(hermitian_part(x)));
  }

  const bool maximize = p.sense == Sense::maximize;
  double norm_c = 0.0;
  double cx = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    const CMatrix c = objective_block(p, k);
    norm_c += c.squaredNorm();
    cx += real_trace_product(c, s.primal_blocks[k]);
    const CMatrix slack = maximize ? CMatrix(aty[k] - c) : CMatrix(c - aty[k]);
    out.dual_infeas = std::max(out.dual_infeas, -lambda_min(hermitian_part(slack)));
  }
  out.dual_infeas /= 1.0 + std::sqrt(norm_c);
  const double ry = rhs.dot(Eigen::Map<const RVector>(s.dual_vector.data(),
                                                      static_cast<Idx>(s.dual_vector.size())));
  out.gap = std::abs(cx - ry) / (1.0 + std::abs(cx));
  return out;
}

Certificate certify(const Problem& p, const Solution& s) {
  const Residuals r = residuals(p, s);
  Certificate c;
  c.status = s.status;
  c.primal_value = s.primal_value;
  c.dual_value = s.dual_value;
  c.gap = r.gap;
  c.primal_infeas = r.primal_infeas;
  c.dual_infeas = r.dual_infeas;
  c.iterations = s.iterations;
  return c;
}

void require_optimal(const Solution& s, const std::string& context) {
  if (s.status != Status::optimal) {
    throw SolverFailure(context + ": SDP solver returned status " +
                        to_string(s.status) + " (gap " + std::to_string(s.gap) + ")");
  }
}

CertificationScope::CertificationScope() : parent_(t_scope) { t_scope = this; }

CertificationScope::~CertificationScope() { t_scope = parent_; }

void CertificationScope::record(const Certificate& c) {
  certs_.push_back(c);
  if (parent_ != nullptr) parent_->record(c);
}

}  // namespace qcomp::sdp
