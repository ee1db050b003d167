#include "treecast/channels.hpp"

#include "treecast/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace treecast {
namespace {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
  const Eigen::Index n = a.rows();
  BoolMatrix out = BoolMatrix::Constant(n, n, false);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!a(i, k)) continue;
      for (Eigen::Index j = 0; j < n; ++j) out(i, j) = out(i, j) || b(k, j);
    }
  return out;
}

Vector solve_stationary(const Matrix& m) {
  const Eigen::Index q = m.rows();
  if (q > 64) {
    // Power iteration; converges because the chain is primitive.
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Constant(q, 1.0 / static_cast<double>(q));
    for (int it = 0; it < 1000000; ++it) {
      Eigen::RowVectorXd next = v * m;
      next /= next.sum();
      const double diff = (next - v).cwiseAbs().maxCoeff();
      v = next;
      if (diff < 1e-15) break;
    }
    return v.transpose();
  }
  Matrix a(q + 1, q);
  a.topRows(q) = m.transpose() - Matrix::Identity(q, q);
  a.row(q).setOnes();
  Vector rhs = Vector::Zero(q + 1);
  rhs(q) = 1.0;
  Vector v = a.colPivHouseholderQr().solve(rhs);
  v /= v.sum();
  return v;
}

double lambda2_on_complement(const Matrix& m, const Vector& v) {
  const Matrix u = orthonormal_complement(v);
  const Matrix restricted = u.transpose() * m * u;
  Eigen::EigenSolver<Matrix> solver(restricted, false);
  double best = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    best = std::max(best, std::abs(solver.eigenvalues()(i)));
  return best;
}

double lambda2_full_spectrum(const Matrix& m) {
  Eigen::EigenSolver<Matrix> solver(m, false);
  const auto& ev = solver.eigenvalues();
  Eigen::Index drop = 0;
  double closest = std::abs(ev(0) - std::complex<double>(1.0, 0.0));
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    const double d = std::abs(ev(i) - std::complex<double>(1.0, 0.0));
    if (d < closest) {
      closest = d;
      drop = i;
    }
  }
  double best = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (i != drop) best = std::max(best, std::abs(ev(i)));
  return best;
}

}  // namespace

void validate_stochastic(const Matrix& m, const std::string& what) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j)) || m(i, j) < 0.0) {
        std::ostringstream msg;
        msg << what << " entry (" << i << "," << j << ") = " << m(i, j);
        throw NegativeEntry(msg.str());
      }
    }
    const double s = m.row(i).sum();
    if (std::abs(s - 1.0) > kStochasticTol) {
      std::ostringstream msg;
      msg.precision(17);
      msg << what << " row " << i << " sums to " << s;
      throw RowSumError(msg.str());
    }
  }
}

bool is_primitive(const Matrix& m) {
  const Eigen::Index q = m.rows();
  BoolMatrix support = (m.array() > 0.0).matrix();
  // Wielandt: a primitive matrix has M^((q-1)^2+1) > 0.
  const long long exponent = (q - 1) * (q - 1) + 1;
  BoolMatrix result = BoolMatrix::Identity(q, q);
  BoolMatrix base = support;
  long long e = exponent;
  while (e > 0) {
    if (e & 1) result = bool_product(result, base);
    e >>= 1;
    if (e > 0) base = bool_product(base, base);
  }
  return result.all();
}

Matrix orthonormal_complement(const Vector& v) {
  const Eigen::Index q = v.size();
  Eigen::HouseholderQR<Matrix> qr(v);
  Matrix full = qr.householderQ() * Matrix::Identity(q, q);
  return full.rightCols(q - 1);
}

Channel Channel::build(const Matrix& entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 2)
    throw InvalidArgument("transition matrix must be square with q >= 2");
  validate_stochastic(entries, "transition matrix");
  Channel c;
  c.m_ = entries;
  c.ergodic_ = is_primitive(entries);
  if (c.ergodic_) {
    c.v_ = solve_stationary(entries);
    c.lambda2_ = lambda2_on_complement(entries, c.v_);
  } else {
    c.lambda2_ = lambda2_full_spectrum(entries);
  }
  return c;
}

const Vector& Channel::stationary() const {
  if (!ergodic_) throw NonErgodic("stationary vector requested for a non-ergodic chain");
  return v_;
}

Channel build_channel(const Matrix& entries) { return Channel::build(entries); }

Vector stationary_distribution(const Channel& channel) { return channel.stationary(); }

double second_eigenvalue(const Channel& channel) { return channel.lambda2(); }

Channel bsc(double delta) {
  Matrix m(2, 2);
  m << 1.0 - delta, delta, delta, 1.0 - delta;
  return Channel::build(m);
}

Channel qsym(int q, double delta) {
  if (q < 2) throw InvalidArgument("qsym needs q >= 2");
  Matrix m = Matrix::Constant(q, q, delta / (q - 1));
  m.diagonal().setConstant(1.0 - delta);
  return Channel::build(m);
}

const char* to_string(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::ExtraSteps: return "extra-steps";
    case NoiseKind::Mix: return "mix";
    case NoiseKind::Erasure: return "erasure";
    case NoiseKind::Custom: return "custom";
  }
  return "custom";
}

NoiseChannel power_noise(const Channel& channel, int k) {
  if (k < 0) throw InvalidArgument("extra-step count must be >= 0");
  NoiseChannel nc;
  nc.kind = NoiseKind::ExtraSteps;
  nc.steps = k;
  nc.n = Matrix::Identity(channel.q(), channel.q());
  Matrix base = channel.matrix();
  for (int e = k; e > 0; e >>= 1) {
    if (e & 1) nc.n = nc.n * base;
    if (e > 1) base = base * base;
  }
  return nc;
}

NoiseChannel mix_noise(const Vector& nu, double eps) {
  if (eps < 0.0 || eps > 1.0) throw InvalidArgument("mix weight must lie in [0,1]");
  if (nu.size() < 2) throw InvalidArgument("mix distribution needs q >= 2");
  if ((nu.array() < 0.0).any() || std::abs(nu.sum() - 1.0) > kStochasticTol)
    throw InvalidArgument("mix distribution must be a probability vector");
  const Eigen::Index q = nu.size();
  NoiseChannel nc;
  nc.kind = NoiseKind::Mix;
  nc.nu = nu;
  nc.eps = eps;
  nc.nondegenerate = (nu.array() > 0.0).all();
  nc.n = (1.0 - eps) * Matrix::Identity(q, q) + eps * Vector::Ones(q) * nu.transpose();
  return nc;
}

NoiseChannel erasure_noise(int q, double eps) {
  if (q < 2) throw InvalidArgument("erasure noise needs q >= 2");
  if (eps < 0.0 || eps > 1.0) throw InvalidArgument("erasure probability must lie in [0,1]");
  NoiseChannel nc;
  nc.kind = NoiseKind::Erasure;
  nc.eps = eps;
  nc.n = Matrix::Zero(q, q + 1);
  nc.n.leftCols(q).diagonal().setConstant(1.0 - eps);
  nc.n.col(q).setConstant(eps);
  return nc;
}

NoiseChannel custom_noise(const Matrix& n) {
  validate_stochastic(n, "noise matrix");
  NoiseChannel nc;
  nc.kind = NoiseKind::Custom;
  nc.n = n;
  return nc;
}

NoiseChannel identity_noise(int q) {
  NoiseChannel nc;
  nc.kind = NoiseKind::ExtraSteps;
  nc.steps = 0;
  nc.n = Matrix::Identity(q, q);
  return nc;
}

}  // namespace treecast
