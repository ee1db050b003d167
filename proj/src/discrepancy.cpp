#include "treecast/discrepancy.hpp"

#include "treecast/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace treecast {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailTol = 1e-12;
constexpr int kMaxDoublings = 60;

double spectral_radius(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::EigenSolver<Matrix>(a, false).eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_norm_sq(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<Matrix>(x.transpose() * x, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

// Reusable buffers so the per-atom evaluation does not allocate.
struct DWork {
  Vector b, c, t;
  explicit DWork(int q) : b(q), c(q > 1 ? q - 1 : 0), t(q > 1 ? q - 1 : 0) {}
};

double atom_discrepancy(std::span<const double> g, const ContractionNorm& norm, DWork& w) {
  const int q = norm.q();
  double vg = 0.0;
  for (int i = 0; i < q; ++i) vg += norm.v(i) * g[static_cast<std::size_t>(i)];
  for (int i = 0; i < q; ++i) w.b(i) = g[static_cast<std::size_t>(i)] - vg;
  w.c.noalias() = norm.basis.transpose() * w.b;
  w.t.noalias() = norm.gram * w.c;
  const double qn = w.c.dot(w.t);
  if (qn <= 0.0) return 0.0;
  double s = 0.0;
  for (int k = 0; k < q; ++k) {
    const double x = g[static_cast<std::size_t>(k)];
    if (x <= 0.0) return kInf;
    s += norm.v(k) / x;
  }
  return qn * s;
}

}  // namespace

Vector project_q(const Vector& v, const Vector& b) {
  if (v.size() != b.size()) throw InvalidArgument("projection sizes differ");
  return b - Vector::Constant(b.size(), v.dot(b));
}

double ContractionNorm::norm_sq(const Vector& b) const {
  const Vector c = basis.transpose() * project_q(v, b);
  return c.dot(gram * c);
}

ContractionNorm contraction_norm_from_gram(const Vector& v, const Matrix& basis, const Matrix& gram, double alpha,
                                           double eps_slack) {
  ContractionNorm n;
  n.v = v;
  n.basis = basis;
  n.gram = 0.5 * (gram + gram.transpose());
  n.alpha = alpha;
  n.eps_slack = eps_slack;
  if (Eigen::LLT<Matrix>(n.gram).info() != Eigen::Success)
    throw InvalidArgument("Gram matrix is not positive definite");
  n.t = t_coefficients(n);
  n.sum_abs_t = n.t.cwiseAbs().sum();
  return n;
}

ContractionNorm build_contraction_norm(const Channel& channel, double target_alpha, double eps_slack) {
  if (!channel.ergodic()) throw NonErgodic("contraction norm needs an ergodic chain");
  if (!(target_alpha > 0.0) || !(target_alpha < 1.0)) throw InvalidArgument("target alpha must lie in (0, 1)");
  const Vector& v = channel.stationary();
  const Matrix u = orthonormal_complement(v);
  const Matrix a = ContractionNorm::restricted(channel.matrix(), u);
  const double rho = spectral_radius(a);
  // A gap below rounding level would only sum to a meaningless huge Gram matrix.
  if (rho >= target_alpha * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "target alpha " << target_alpha << " does not exceed the spectral radius " << rho << " on v-perp";
    throw DivergentSeries(msg.str());
  }
  const Matrix at = a / target_alpha;
  const auto d = at.rows();
  // P_K = sum_{k<K} X_k' X_k with X_k = at^k; P_2K = P_K + X_K' P_K X_K.
  Matrix p = Matrix::Identity(d, d);
  Matrix x = at;
  long long terms = 1;
  int doublings = 0;
  while (spectral_norm_sq(x) > kTailTol) {
    if (++doublings > kMaxDoublings || !x.allFinite() || !p.allFinite())
      throw DivergentSeries("contraction series did not converge; alpha is too close to the spectral radius");
    p = p + x.transpose() * p * x;
    x = x * x;
    terms *= 2;
  }
  if (!p.allFinite()) throw DivergentSeries("contraction series overflowed");
  ContractionNorm n = contraction_norm_from_gram(v, u, p, target_alpha, eps_slack);
  n.series_terms = terms;
  return n;
}

double contraction_margin(const Matrix& m, const ContractionNorm& norm) {
  const Matrix a = ContractionNorm::restricted(m, norm.basis);
  const Matrix gap = norm.alpha * norm.alpha * norm.gram - a.transpose() * norm.gram * a;
  const Matrix sym = 0.5 * (gap + gap.transpose());
  const double low = Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  const double top =
      Eigen::SelfAdjointEigenSolver<Matrix>(norm.gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  return low / top;
}

Matrix t_coefficients(const ContractionNorm& norm) {
  const int q = norm.q();
  const Matrix qm = Matrix::Identity(q, q) - Vector::Ones(q) * norm.v.transpose();
  const Matrix l = norm.basis.transpose() * qm;
  Matrix t = l.transpose() * norm.gram * l;
  return 0.5 * (t + t.transpose());
}

double discrepancy_of_atoms(const AtomSet& atoms, const ContractionNorm& norm) {
  if (atoms.q() != norm.q()) throw InvalidArgument("atom set and norm disagree on q");
  DWork work(norm.q());
  double d = 0.0;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const double term = atom_discrepancy(atoms.g(a), norm, work);
    if (std::isinf(term)) return kInf;
    d += atoms.w(a) * term;
  }
  return d;
}

MomentTensor moment_tensor(const AtomSet& atoms) {
  const int q = atoms.q();
  MomentTensor mt;
  mt.q = q;
  mt.m.assign(static_cast<std::size_t>(q * q * q), 0.0);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      for (int k = 0; k < q; ++k) {
        double& e = mt.m[static_cast<std::size_t>((i * q + j) * q + k)];
        if (i == k || j == k) {
          e = 1.0;
          continue;
        }
        for (std::size_t a = 0; a < atoms.size(); ++a) {
          const auto g = atoms.g(a);
          const double num = g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)];
          if (num == 0.0) continue;
          if (g[static_cast<std::size_t>(k)] == 0.0) {
            e = kInf;
            mt.finite = false;
            break;
          }
          e += atoms.w(a) * num / g[static_cast<std::size_t>(k)];
        }
      }
  return mt;
}

DiscrepancyConstants moment_constant(const ContractionNorm& norm) {
  const int q = norm.q();
  DiscrepancyConstants dc;
  dc.c_pairs = Matrix::Zero(q, q);
  const Eigen::LLT<Matrix> llt(norm.gram);
  double worst = 0.0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      if (i == j) continue;
      const Vector c = norm.basis.row(i).transpose() - norm.basis.row(j).transpose();
      const double cij = std::sqrt(std::max(0.0, c.dot(llt.solve(c))));
      dc.c_pairs(i, j) = cij;
      worst = std::max(worst, cij * cij);
    }
  dc.c = worst / norm.v.minCoeff();
  dc.c_tilde = dc.c * norm.sum_abs_t;
  return dc;
}

double tensorization_delta(int arity, double eps, double c, double c_tilde, double cap) {
  if (arity < 1) throw InvalidArgument("arity must be at least 1");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (arity == 1) return cap;
  if (!(c > 0.0) || !(c_tilde > 0.0)) throw InvalidArgument("constants must be positive");
  const double eta = std::expm1(std::log1p(eps / c_tilde) / static_cast<double>(arity - 1));
  return eta / c;
}

McEstimate discrepancy_mc(const Tree& tree, const Channel& channel, const NoiseChannel& noise, const Antichain& s,
                          const ContractionNorm& norm, const McOptions& opts) {
  const Vector v = channel.stationary();
  const ObservationPlan plan = ObservationPlan::make(tree, s);
  return run_mc("discrepancy", opts, [&] {
    auto sampler = std::make_shared<ObservationSampler>(tree, channel, noise, s);
    auto eval = std::make_shared<LikelihoodEvaluator>(plan, channel, noise);
    auto tau = std::make_shared<std::vector<int>>();
    auto work = std::make_shared<DWork>(channel.q());
    return std::function<double(std::uint64_t)>([=, &v, &norm, &opts](std::uint64_t k) {
      sampler->sample(-1, opts.seed, k, *tau);
      const ScaledLikelihood l = eval->evaluate(*tau);
      const Vector f = l.scaled / v.dot(l.scaled);
      return atom_discrepancy(std::span<const double>(f.data(), static_cast<std::size_t>(f.size())), norm, *work);
    });
  });
}

}  // namespace treecast
