#pragma once

#include "treecast/channels.hpp"
#include "treecast/exact.hpp"
#include "treecast/inference.hpp"
#include "treecast/trees.hpp"

#include <vector>

namespace treecast {

/// Qb = b - (v . b) 1, the projection onto v-perp along the all-ones vector.
Vector project_q(const Vector& v, const Vector& b);

/// Euclidean norm on v-perp in which M contracts by `alpha`.
///
/// Vectors of v-perp are written b = U c with U an orthonormal basis; the
/// norm is |b|^2 = c' P c. T is the q x q matrix with |Qb|^2 = b' T b.
struct ContractionNorm {
  Vector v;
  Matrix basis;  // U, q x (q-1)
  Matrix gram;   // P, (q-1) x (q-1)
  double alpha = 0.0;
  double eps_slack = 0.0;
  Matrix t;
  double sum_abs_t = 0.0;
  /// Number of series terms summed (a power of two).
  long long series_terms = 0;

  int q() const noexcept { return static_cast<int>(v.size()); }
  /// |Qb|^2 evaluated through U and P (avoids the cancellation in b' T b).
  double norm_sq(const Vector& b) const;
  /// M restricted to v-perp in U coordinates.
  static Matrix restricted(const Matrix& m, const Matrix& basis) { return basis.transpose() * m * basis; }
};

/// P = sum_k alpha^{-2k} (A^k)' A^k for A = U' M U, summed by repeated
/// doubling until |(A/alpha)^K|^2 <= 1e-12. Throws DivergentSeries when
/// alpha does not exceed the spectral radius of A.
ContractionNorm build_contraction_norm(const Channel& channel, double target_alpha, double eps_slack = 0.0);

/// Rebuilds the derived fields (T, sum |t|) from a stored basis and Gram matrix.
ContractionNorm contraction_norm_from_gram(const Vector& v, const Matrix& basis, const Matrix& gram, double alpha,
                                           double eps_slack);

/// Smallest eigenvalue of alpha^2 P - A' P A, divided by the largest
/// eigenvalue of P. Nonnegative exactly when |Mb| <= alpha |b| on v-perp.
double contraction_margin(const Matrix& m, const ContractionNorm& norm);

/// T = Q' U P U' Q.
Matrix t_coefficients(const ContractionNorm& norm);

/// D = sum_a w |Q g|^2 sum_k v_k / g_k. Infinite when an atom has a zero
/// entry and |Qg| > 0; atoms with Qg = 0 contribute nothing.
double discrepancy_of_atoms(const AtomSet& atoms, const ContractionNorm& norm);

/// Entries sum_a w g_i g_j / g_k.
struct MomentTensor {
  int q = 0;
  std::vector<double> m;
  bool finite = true;

  double operator()(int i, int j, int k) const {
    return m[static_cast<std::size_t>((i * q + j) * q + k)];
  }
};

MomentTensor moment_tensor(const AtomSet& atoms);

struct DiscrepancyConstants {
  Matrix c_pairs;  // C_ij, dual norm of b -> b_i - b_j
  double c = 0.0;
  double c_tilde = 0.0;
};

DiscrepancyConstants moment_constant(const ContractionNorm& norm);

/// delta = eta / C where (1 + eta)^(B-1) - 1 = eps / C_tilde. B = 1 returns `cap`.
double tensorization_delta(int arity, double eps, double c, double c_tilde, double cap = 1.0);

/// Discrepancy with tau drawn from the stationary mixture.
McEstimate discrepancy_mc(const Tree& tree, const Channel& channel, const NoiseChannel& noise, const Antichain& s,
                          const ContractionNorm& norm, const McOptions& opts);

}  // namespace treecast
