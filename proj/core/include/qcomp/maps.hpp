#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qcomp/linalg.hpp"

namespace qcomp {

inline constexpr double kPsdTol = 1e-8;
inline constexpr double kChanTol = 1e-8;

/// A Hermitian-preserving linear map B(H) -> B(K), stored as its Choi
/// matrix C(phi) = (phi (x) id_H)(X_H) on K (x) H. Row (k, h) flattens to
/// k * d_in + h.
class HermitianMap {
 public:
  /// Validates shape and Hermiticity; the stored Choi is symmetrized.
  HermitianMap(std::size_t d_in, std::size_t d_out, const CMatrix& choi);

  static HermitianMap identity(std::size_t d);
  static HermitianMap zero(std::size_t d_in, std::size_t d_out);

  std::size_t d_in() const { return dims_.d_in; }
  std::size_t d_out() const { return dims_.d_out; }
  DimPair dims() const { return dims_; }
  const CMatrix& choi() const { return choi_; }

  HermitianMap operator+(const HermitianMap& other) const;
  HermitianMap operator-(const HermitianMap& other) const;
  HermitianMap operator-() const;
  friend HermitianMap operator*(double s, const HermitianMap& m);

 private:
  DimPair dims_;
  CMatrix choi_;
};

/// X_H = sum_ij |i><j| (x) |i><j| = d |Omega><Omega|.
CMatrix max_entangled_kernel(std::size_t d);

HermitianMap map_from_kraus(std::span<const CMatrix> kraus);

/// phi(A) = Tr_H[(I (x) A^T) C(phi)].
CMatrix apply(const HermitianMap& phi, const CMatrix& a);

/// Choi-level application; `choi` lives on d_out (x) d_in.
CMatrix apply_choi(const CMatrix& choi, std::size_t d_in, std::size_t d_out,
                   const CMatrix& a);

/// psi o phi.
HermitianMap compose(const HermitianMap& psi, const HermitianMap& phi);

/// Link contraction C(psi o phi) for psi: K -> L, phi: H -> K. Bilinear in
/// the two Choi matrices, which need not be Hermitian.
CMatrix compose_choi(const CMatrix& outer_choi, std::size_t d_l,
                     const CMatrix& inner_choi, std::size_t d_k,
                     std::size_t d_h);

/// The Hilbert-Schmidt adjoint phi*: Tr[phi*(A) B] = Tr[A phi(B)].
HermitianMap adjoint(const HermitianMap& phi);

/// C(phi*) from C(phi); phi maps d_in -> d_out.
CMatrix adjoint_choi(const CMatrix& choi, std::size_t d_in, std::size_t d_out);

/// phi (x) psi, with Choi on (K1 (x) K2) (x) (H1 (x) H2).
HermitianMap tensor(const HermitianMap& phi, const HermitianMap& psi);

/// phi^cq_A : C^n -> K, X |-> sum_i <e_i, X e_i> A_i.
HermitianMap cq_map(std::span<const CMatrix> a);

/// phi^qc_B : H -> C^n, X |-> sum_i Tr[X B_i] |e_i><e_i|.
HermitianMap qc_map(std::span<const CMatrix> b);

/// The basis-diagonalizing channel on C^d.
HermitianMap pinching(std::size_t d);

/// phi_sigma : B(H) -> B(K), A |-> Tr[A] sigma, with Choi sigma (x) I_H.
HermitianMap erasure_channel(const CMatrix& sigma, std::size_t d_in);

/// s(phi) = sum_ij <e_i, phi(|e_i><e_j|) e_j> = Tr[C(phi) X_H], endo-maps only.
double s_functional(const HermitianMap& phi);

/// <psi, phi> = s(psi o phi) = Tr[C(phi) C(psi*)] for psi: K -> H, phi: H -> K.
double pairing(const HermitianMap& psi, const HermitianMap& phi);

bool is_cp(const HermitianMap& phi, double tol = kPsdTol);
bool is_channel(const HermitianMap& phi, double tol = kChanTol);

/// Throws NotAChannel naming `where` unless is_channel(phi).
void require_channel(const HermitianMap& phi, const std::string& where);

/// Nearest-channel repair of an almost-channel Choi matrix: negative
/// eigenvalues are clipped and the input marginal T is renormalized by
/// (I (x) T^{-1/2}) C (I (x) T^{-1/2}).
HermitianMap project_to_channel(const HermitianMap& phi);

/// True when C(phi) is block diagonal in the output basis, i.e. phi = delta o phi.
bool is_qc_form(const HermitianMap& phi, double tol = 1e-9);

/// True when phi = phi o delta.
bool is_cq_form(const HermitianMap& phi, double tol = 1e-9);

/// Largest entrywise difference between the Choi matrices; throws on a
/// dimension mismatch.
double choi_distance(const HermitianMap& a, const HermitianMap& b);

}  // namespace qcomp
