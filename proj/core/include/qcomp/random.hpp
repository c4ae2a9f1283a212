#pragma once

#include <cstddef>
#include <cstdint>

#include "qcomp/linalg.hpp"
#include "qcomp/maps.hpp"

namespace qcomp::rng {

/// Counter-based generator: the n-th draw is splitmix64(key + n * golden).
/// Streams split deterministically, so trial i of a scan sees the same
/// numbers regardless of scheduling or platform.
class Stream {
 public:
  explicit Stream(std::uint64_t seed);

  /// Child stream `index`; does not advance this stream.
  Stream split(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller).
  double normal();
  /// (N + iN) / sqrt2, unit variance.
  Complex complex_normal();
  /// Uniform on {0, ..., n-1}.
  std::size_t index(std::size_t n);

 private:
  Stream(std::uint64_t key, int);

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qcomp::rng

namespace qcomp {

/// rows x cols matrix of i.i.d. standard complex Gaussians.
CMatrix ginibre(std::size_t rows, std::size_t cols, rng::Stream& s);

/// Haar unitary via QR of a Ginibre matrix with phase correction.
CMatrix random_unitary(std::size_t d, rng::Stream& s);

/// Induced-measure density matrix W W^dagger / Tr, W Ginibre d x rank.
CMatrix random_state(std::size_t d, rng::Stream& s, std::size_t rank = 0);

CMatrix random_pure_state(std::size_t d, rng::Stream& s);

/// GUE-like Hermitian matrix (G + G^dagger) / 2.
CMatrix random_hermitian(std::size_t d, rng::Stream& s);

/// Ginibre-Stinespring channel: a Ginibre matrix G of shape
/// (d_out * env) x d_in is orthonormalized to an isometry V = G (G^dag G)^{-1/2},
/// whose env blocks of rows are the Kraus operators. env = 0 means d_in * d_out.
HermitianMap random_channel(std::size_t d_in, std::size_t d_out, rng::Stream& s,
                            std::size_t env = 0);

/// CP map with Wishart Choi matrix normalized to trace d_in.
HermitianMap random_cp_map(std::size_t d_in, std::size_t d_out, rng::Stream& s);

/// Hermiticity-preserving map with a random Hermitian Choi matrix.
HermitianMap random_hermitian_map(std::size_t d_in, std::size_t d_out,
                                  rng::Stream& s);

/// n-outcome POVM S^{-1/2} W_i W_i^dag S^{-1/2}.
std::vector<CMatrix> random_povm_elements(std::size_t d, std::size_t n,
                                          rng::Stream& s);

/// Point on the probability simplex (flat Dirichlet).
std::vector<double> random_simplex(std::size_t n, rng::Stream& s);

}  // namespace qcomp
