#pragma once

#include <Eigen/Dense>

#include <string>

namespace treecast {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Absolute per-row tolerance used for every stochastic-matrix check.
inline constexpr double kStochasticTol = 1e-12;

/// A validated q x q transition matrix together with its stationary vector
/// and the modulus of its second eigenvalue.
///
/// Non-ergodic matrices are accepted and flagged; the stationary vector is
/// only available when the chain is ergodic (irreducible and aperiodic).
class Channel {
 public:
  static Channel build(const Matrix& entries);

  int q() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  bool ergodic() const noexcept { return ergodic_; }
  double lambda2() const noexcept { return lambda2_; }
  /// Throws NonErgodic when the chain has no strictly positive stationary vector.
  const Vector& stationary() const;
  double min_entry() const noexcept { return m_.minCoeff(); }

 private:
  Matrix m_;
  Vector v_;
  double lambda2_ = 0.0;
  bool ergodic_ = false;
};

Channel build_channel(const Matrix& entries);
Vector stationary_distribution(const Channel& channel);
double second_eigenvalue(const Channel& channel);

/// Binary symmetric channel [[1-d, d], [d, 1-d]].
Channel bsc(double delta);
/// q-ary symmetric channel: 1-d on the diagonal, d/(q-1) elsewhere.
Channel qsym(int q, double delta);

/// True when some power of the support pattern is strictly positive.
bool is_primitive(const Matrix& m);

/// Orthonormal basis (q x (q-1)) of the Euclidean complement of `v`,
/// taken from a Householder QR factorisation so it is deterministic.
Matrix orthonormal_complement(const Vector& v);

enum class NoiseKind { ExtraSteps, Mix, Erasure, Custom };

const char* to_string(NoiseKind kind) noexcept;

/// Leaf observation channel: a q x b stochastic matrix.
struct NoiseChannel {
  NoiseKind kind = NoiseKind::Custom;
  Matrix n;
  int steps = 0;        // ExtraSteps
  Vector nu;            // Mix
  double eps = 0.0;     // Mix weight or erasure probability
  bool nondegenerate = true;

  int q() const noexcept { return static_cast<int>(n.rows()); }
  int b() const noexcept { return static_cast<int>(n.cols()); }
};

NoiseChannel power_noise(const Channel& channel, int k);
NoiseChannel mix_noise(const Vector& nu, double eps);
NoiseChannel erasure_noise(int q, double eps);
NoiseChannel custom_noise(const Matrix& n);
/// The noiseless observation (identity matrix).
NoiseChannel identity_noise(int q);

/// Throws RowSumError / NegativeEntry if `m` is not row-stochastic.
void validate_stochastic(const Matrix& m, const std::string& what);

}  // namespace treecast
