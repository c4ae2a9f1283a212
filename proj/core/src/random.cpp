#include "qcomp/random.hpp"

#include <cmath>
#include <numbers>

#include "qcomp/errors.hpp"

namespace qcomp::rng {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Stream::Stream(std::uint64_t seed) : key_(mix(seed + kGolden)) {}

Stream::Stream(std::uint64_t key, int) : key_(key) {}

Stream Stream::split(std::uint64_t index) const {
  return Stream(mix(key_ ^ mix(index + 0x632BE59BD9B4E019ULL)), 0);
}

std::uint64_t Stream::next_u64() {
  ++counter_;
  return mix(key_ + counter_ * kGolden);
}

double Stream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Complex Stream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::numbers::sqrt2;
}

std::size_t Stream::index(std::size_t n) {
  if (n == 0) throw SizeMismatch("rng::Stream::index: empty range");
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

}  // namespace qcomp::rng

namespace qcomp {

using Idx = Eigen::Index;

CMatrix ginibre(std::size_t rows, std::size_t cols, rng::Stream& s) {
  CMatrix g(static_cast<Idx>(rows), static_cast<Idx>(cols));
  // Row-major fill keeps the stream order independent of storage order.
  for (Idx i = 0; i < g.rows(); ++i) {
    for (Idx j = 0; j < g.cols(); ++j) g(i, j) = s.complex_normal();
  }
  return g;
}

CMatrix random_unitary(std::size_t d, rng::Stream& s) {
  const CMatrix g = ginibre(d, d, s);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Idx j = 0; j < q.cols(); ++j) {
    const Complex rjj = r(j, j);
    const double a = std::abs(rjj);
    if (a > 0.0) q.col(j) *= rjj / a;
  }
  return q;
}

CMatrix random_state(std::size_t d, rng::Stream& s, std::size_t rank) {
  if (rank == 0) rank = d;
  const CMatrix w = ginibre(d, rank, s);
  CMatrix rho = w * w.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

CMatrix random_pure_state(std::size_t d, rng::Stream& s) {
  return random_state(d, s, 1);
}

CMatrix random_hermitian(std::size_t d, rng::Stream& s) {
  return hermitian_part(ginibre(d, d, s));
}

HermitianMap random_channel(std::size_t d_in, std::size_t d_out, rng::Stream& s,
                            std::size_t env) {
  if (env == 0) env = d_in * d_out;
  const CMatrix g = ginibre(d_out * env, d_in, s);
  const CMatrix gram = g.adjoint() * g;
  const CMatrix v = g * herm_apply(gram, [](double x) { return 1.0 / std::sqrt(x); });
  std::vector<CMatrix> kraus;
  kraus.reserve(env);
  const auto dout = static_cast<Idx>(d_out);
  for (std::size_t e = 0; e < env; ++e) {
    kraus.emplace_back(v.middleRows(static_cast<Idx>(e) * dout, dout));
  }
  return map_from_kraus(kraus);
}

HermitianMap random_cp_map(std::size_t d_in, std::size_t d_out, rng::Stream& s) {
  const std::size_t n = d_in * d_out;
  const CMatrix w = ginibre(n, n, s);
  CMatrix choi = w * w.adjoint();
  choi *= static_cast<double>(d_in) / choi.trace().real();
  return HermitianMap(d_in, d_out, hermitian_part(choi));
}

HermitianMap random_hermitian_map(std::size_t d_in, std::size_t d_out,
                                  rng::Stream& s) {
  const std::size_t n = d_in * d_out;
  return HermitianMap(d_in, d_out, random_hermitian(n, s) / std::sqrt(static_cast<double>(n)));
}

std::vector<CMatrix> random_povm_elements(std::size_t d, std::size_t n,
                                          rng::Stream& s) {
  std::vector<CMatrix> g;
  CMatrix total = CMatrix::Zero(static_cast<Idx>(d), static_cast<Idx>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const CMatrix w = ginibre(d, d, s);
    g.push_back(w * w.adjoint());
    total += g.back();
  }
  const CMatrix inv_sqrt = herm_apply(total, [](double x) { return 1.0 / std::sqrt(x); });
  for (CMatrix& m : g) m = hermitian_part(inv_sqrt * m * inv_sqrt);
  return g;
}

std::vector<double> random_simplex(std::size_t n, rng::Stream& s) {
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) {
    double u = s.uniform();
    while (u <= 0.0) u = s.uniform();
    x = -std::log(u);
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

}  // namespace qcomp
