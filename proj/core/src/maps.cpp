#include "qcomp/maps.hpp"

#include <cmath>
#include <string>

#include "qcomp/errors.hpp"

namespace qcomp {

namespace {

std::string dims_str(std::size_t d_in, std::size_t d_out) {
  return std::to_string(d_in) + "->" + std::to_string(d_out);
}

void require_square_dim(const CMatrix& a, std::size_t d, const char* what) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != d) {
    throw DimensionMismatch(std::string(what) + ": expected " +
                            std::to_string(d) + "x" + std::to_string(d) +
                            " matrix, got " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()));
  }
}

}  // namespace

HermitianMap::HermitianMap(std::size_t d_in, std::size_t d_out,
                           const CMatrix& choi)
    : dims_{d_in, d_out} {
  if (d_in == 0 || d_out == 0) {
    throw DimensionMismatch("HermitianMap: dimensions must be >= 1");
  }
  require_square_dim(choi, d_in * d_out, "HermitianMap");
  if (!is_hermitian(choi)) {
    throw NotHermitian("HermitianMap: Choi matrix is not Hermitian");
  }
  choi_ = hermitian_part(choi);
}

HermitianMap HermitianMap::identity(std::size_t d) {
  return HermitianMap(d, d, max_entangled_kernel(d));
}

HermitianMap HermitianMap::zero(std::size_t d_in, std::size_t d_out) {
  const auto n = static_cast<Eigen::Index>(d_in * d_out);
  return HermitianMap(d_in, d_out, CMatrix::Zero(n, n));
}

HermitianMap HermitianMap::operator+(const HermitianMap& other) const {
  if (dims_ != other.dims_) {
    throw DimensionMismatch("HermitianMap +: " + dims_str(d_in(), d_out()) +
                            " vs " + dims_str(other.d_in(), other.d_out()));
  }
  return HermitianMap(d_in(), d_out(), choi_ + other.choi_);
}

HermitianMap HermitianMap::operator-(const HermitianMap& other) const {
  return *this + (-other);
}

HermitianMap HermitianMap::operator-() const {
  return HermitianMap(d_in(), d_out(), -choi_);
}

HermitianMap operator*(double s, const HermitianMap& m) {
  return HermitianMap(m.d_in(), m.d_out(), s * m.choi_);
}

CMatrix max_entangled_kernel(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d * d);
  CMatrix x = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      x(static_cast<Eigen::Index>(i * d + i),
        static_cast<Eigen::Index>(j * d + j)) = 1.0;
    }
  }
  return x;
}

HermitianMap map_from_kraus(std::span<const CMatrix> kraus) {
  if (kraus.empty()) {
    throw DimensionMismatch("map_from_kraus: empty Kraus list");
  }
  const auto d_out = static_cast<std::size_t>(kraus.front().rows());
  const auto d_in = static_cast<std::size_t>(kraus.front().cols());
  const CMatrix x = max_entangled_kernel(d_in);
  const CMatrix id = identity(d_in);
  const auto n = static_cast<Eigen::Index>(d_out * d_in);
  CMatrix choi = CMatrix::Zero(n, n);
  for (const CMatrix& k : kraus) {
    if (static_cast<std::size_t>(k.rows()) != d_out ||
        static_cast<std::size_t>(k.cols()) != d_in) {
      throw DimensionMismatch("map_from_kraus: Kraus operators differ in shape");
    }
    const CMatrix kk = kron(k, id);
    choi += kk * x * kk.adjoint();
  }
  return HermitianMap(d_in, d_out, choi);
}

CMatrix apply_choi(const CMatrix& choi, std::size_t d_in, std::size_t d_out,
                   const CMatrix& a) {
  require_square_dim(a, d_in, "apply");
  require_square_dim(choi, d_in * d_out, "apply");
  const CMatrix lifted = kron(identity(d_out), a.transpose()) * choi;
  return partial_trace(lifted, d_out, d_in, Subsystem::second);
}

CMatrix apply(const HermitianMap& phi, const CMatrix& a) {
  return apply_choi(phi.choi(), phi.d_in(), phi.d_out(), a);
}

CMatrix compose_choi(const CMatrix& outer_choi, std::size_t d_l,
                     const CMatrix& inner_choi, std::size_t d_k,
                     std::size_t d_h) {
  require_square_dim(outer_choi, d_l * d_k, "compose");
  require_square_dim(inner_choi, d_k * d_h, "compose");
  // Tr_K[(C_outer (x) I_H)(I_L (x) C_inner^{T_K})] on L (x) K (x) H.
  const CMatrix left = kron(outer_choi, identity(d_h));
  const CMatrix right =
      kron(identity(d_l),
           partial_transpose(inner_choi, d_k, d_h, Subsystem::first));
  const std::size_t dims[3] = {d_l, d_k, d_h};
  return partial_trace(left * right, dims, 1);
}

HermitianMap compose(const HermitianMap& psi, const HermitianMap& phi) {
  if (psi.d_in() != phi.d_out()) {
    throw DimensionMismatch("compose: inner map outputs " +
                            std::to_string(phi.d_out()) +
                            " but outer map expects " +
                            std::to_string(psi.d_in()));
  }
  return HermitianMap(
      phi.d_in(), psi.d_out(),
      compose_choi(psi.choi(), psi.d_out(), phi.choi(), phi.d_out(),
                   phi.d_in()));
}

CMatrix adjoint_choi(const CMatrix& choi, std::size_t d_in, std::size_t d_out) {
  require_square_dim(choi, d_in * d_out, "adjoint");
  // C(phi*)[(h,a),(h',b)] = C(phi)[(b,h'),(a,h)]
  const std::size_t dims[2] = {d_out, d_in};
  const std::size_t swap[2] = {1, 0};
  return permute_subsystems(choi.transpose(), dims, swap);
}

HermitianMap adjoint(const HermitianMap& phi) {
  return HermitianMap(phi.d_out(), phi.d_in(),
                      adjoint_choi(phi.choi(), phi.d_in(), phi.d_out()));
}

HermitianMap tensor(const HermitianMap& phi, const HermitianMap& psi) {
  // kron lives on K1 (x) H1 (x) K2 (x) H2; reorder to K1 K2 H1 H2.
  const std::size_t dims[4] = {phi.d_out(), phi.d_in(), psi.d_out(),
                               psi.d_in()};
  const std::size_t perm[4] = {0, 2, 1, 3};
  return HermitianMap(phi.d_in() * psi.d_in(), phi.d_out() * psi.d_out(),
                      permute_subsystems(kron(phi.choi(), psi.choi()), dims,
                                         perm));
}

HermitianMap cq_map(std::span<const CMatrix> a) {
  if (a.empty()) throw DimensionMismatch("cq_map: empty collection");
  const auto d = static_cast<std::size_t>(a.front().rows());
  const std::size_t n = a.size();
  const auto big = static_cast<Eigen::Index>(d * n);
  CMatrix choi = CMatrix::Zero(big, big);
  for (std::size_t i = 0; i < n; ++i) {
    require_square_dim(a[i], d, "cq_map");
    choi += kron(a[i], matrix_unit(n, i, i));
  }
  return HermitianMap(n, d, choi);
}

HermitianMap qc_map(std::span<const CMatrix> b) {
  if (b.empty()) throw DimensionMismatch("qc_map: empty collection");
  const auto d = static_cast<std::size_t>(b.front().rows());
  const std::size_t n = b.size();
  const auto big = static_cast<Eigen::Index>(d * n);
  CMatrix choi = CMatrix::Zero(big, big);
  for (std::size_t i = 0; i < n; ++i) {
    require_square_dim(b[i], d, "qc_map");
    choi += kron(matrix_unit(n, i, i), b[i].transpose());
  }
  return HermitianMap(d, n, choi);
}

HermitianMap pinching(std::size_t d) {
  if (d == 0) throw DimensionMismatch("pinching: d must be >= 1");
  std::vector<CMatrix> projectors;
  projectors.reserve(d);
  for (std::size_t i = 0; i < d; ++i) projectors.push_back(matrix_unit(d, i, i));
  return cq_map(projectors);
}

HermitianMap erasure_channel(const CMatrix& sigma, std::size_t d_in) {
  if (sigma.rows() != sigma.cols()) {
    throw DimensionMismatch("erasure_channel: sigma is not square");
  }
  return HermitianMap(d_in, static_cast<std::size_t>(sigma.rows()),
                      kron(sigma, identity(d_in)));
}

double s_functional(const HermitianMap& phi) {
  if (phi.d_in() != phi.d_out()) {
    throw DimensionMismatch("s_functional: map is not an endo-map (" +
                            dims_str(phi.d_in(), phi.d_out()) + ")");
  }
  return real_trace_product(phi.choi(), max_entangled_kernel(phi.d_in()));
}

double pairing(const HermitianMap& psi, const HermitianMap& phi) {
  if (psi.d_in() != phi.d_out() || psi.d_out() != phi.d_in()) {
    throw DimensionMismatch("pairing: maps are not dual-compatible (" +
                            dims_str(psi.d_in(), psi.d_out()) + " vs " +
                            dims_str(phi.d_in(), phi.d_out()) + ")");
  }
  return real_trace_product(phi.choi(),
                            adjoint_choi(psi.choi(), psi.d_in(), psi.d_out()));
}

bool is_cp(const HermitianMap& phi, double tol) {
  return lambda_min(phi.choi()) >= -tol;
}

bool is_channel(const HermitianMap& phi, double tol) {
  if (!is_cp(phi, tol)) return false;
  const CMatrix reduced =
      partial_trace(phi.choi(), phi.d_out(), phi.d_in(), Subsystem::first);
  return (reduced - identity(phi.d_in())).cwiseAbs().maxCoeff() <= tol;
}

void require_channel(const HermitianMap& phi, const std::string& where) {
  if (!is_channel(phi)) {
    throw NotAChannel(where + ": map " + dims_str(phi.d_in(), phi.d_out()) +
                      " is not a channel");
  }
}

HermitianMap project_to_channel(const HermitianMap& phi) {
  const std::size_t d_in = phi.d_in();
  const std::size_t d_out = phi.d_out();
  const CMatrix clipped = herm_apply(phi.choi(), [](double x) { return x < 0.0 ? 0.0 : x; });
  const CMatrix marginal = partial_trace(clipped, d_out, d_in, Subsystem::first);
  const CMatrix fix = kron(identity(d_out), herm_apply(marginal, [](double x) {
                             return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0;
                           }));
  return HermitianMap(d_in, d_out, hermitian_part(fix * clipped * fix));
}

bool is_qc_form(const HermitianMap& phi, double tol) {
  const std::size_t di = phi.d_in();
  const std::size_t dout = phi.d_out();
  for (std::size_t k1 = 0; k1 < dout; ++k1) {
    for (std::size_t k2 = 0; k2 < dout; ++k2) {
      if (k1 == k2) continue;
      const auto block = phi.choi().block(
          static_cast<Eigen::Index>(k1 * di), static_cast<Eigen::Index>(k2 * di),
          static_cast<Eigen::Index>(di), static_cast<Eigen::Index>(di));
      if (block.cwiseAbs().maxCoeff() > tol) return false;
    }
  }
  return true;
}

bool is_cq_form(const HermitianMap& phi, double tol) {
  return choi_distance(compose(phi, pinching(phi.d_in())), phi) <= tol;
}

double choi_distance(const HermitianMap& a, const HermitianMap& b) {
  if (a.dims() != b.dims()) {
    throw DimensionMismatch("choi_distance: dimension mismatch");
  }
  return (a.choi() - b.choi()).cwiseAbs().maxCoeff();
}

}  // namespace qcomp
