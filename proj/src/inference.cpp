#include "treecast/inference.hpp"

#include "treecast/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

namespace treecast {
namespace {

// Values of sample(0..n-1), computed over `streams` threads. Each value lands
// at its own index, so the reduction below never depends on the stream count.
std::vector<double> collect(std::uint64_t n, unsigned streams,
                            const std::function<std::function<double(std::uint64_t)>()>& make_sampler) {
  std::vector<double> values(n);
  streams = std::max(1u, streams);
  auto work = [&](unsigned s) {
    auto sample = make_sampler();
    const std::uint64_t lo = n * s / streams, hi = n * (s + 1) / streams;
    for (std::uint64_t k = lo; k < hi; ++k) values[k] = sample(k);
  };
  if (streams == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex lock;
    for (unsigned s = 0; s < streams; ++s)
      pool.emplace_back([&, s] {
        try {
          work(s);
        } catch (...) {
          std::lock_guard guard(lock);
          if (!failure) failure = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  return values;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  // Two passes in index order: deterministic and stable.
  double sum = 0.0;
  for (double x : values) sum += x;
  m.mean = sum / static_cast<double>(values.size());
  if (!std::isfinite(m.mean)) {
    m.variance = std::numeric_limits<double>::infinity();
    return m;
  }
  double ss = 0.0;
  for (double x : values) ss += (x - m.mean) * (x - m.mean);
  m.variance = values.size() > 1 ? ss / static_cast<double>(values.size() - 1) : 0.0;
  return m;
}

double median_of_means(const std::vector<double>& values, unsigned blocks) {
  const std::uint64_t n = values.size();
  blocks = static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, blocks), std::max<std::uint64_t>(n, 1)));
  std::vector<double> means;
  for (unsigned b = 0; b < blocks; ++b) {
    const std::uint64_t lo = n * b / blocks, hi = n * (b + 1) / blocks;
    double sum = 0.0;
    for (std::uint64_t k = lo; k < hi; ++k) sum += values[k];
    means.push_back(sum / static_cast<double>(hi - lo));
  }
  std::sort(means.begin(), means.end());
  const std::size_t mid = means.size() / 2;
  return means.size() % 2 ? means[mid] : 0.5 * (means[mid - 1] + means[mid]);
}

Vector normalized(const ScaledLikelihood& l, const Vector& v) {
  // f = g / (v . g); the scale factor cancels.
  const double z = v.dot(l.scaled);
  return l.scaled / z;
}

}  // namespace

LikelihoodEvaluator::LikelihoodEvaluator(const Tree& tree, const Channel& channel, const NoiseChannel& noise,
                                         const Antichain& s)
    : LikelihoodEvaluator(ObservationPlan::make(tree, s), channel, noise) {}

LikelihoodEvaluator::LikelihoodEvaluator(ObservationPlan plan, const Channel& channel, const NoiseChannel& noise)
    : plan_(std::move(plan)), m_(channel.matrix()), n_(noise.n) {
  if (noise.q() != channel.q()) throw InvalidArgument("noise matrix rows must match the state count");
  h_.assign(plan_.nodes.size(), Vector::Zero(channel.q()));
  log_.assign(plan_.nodes.size(), 0.0);
}

ScaledLikelihood LikelihoodEvaluator::evaluate(std::span<const int> tau) {
  if (tau.size() != plan_.member_pos.size()) throw InvalidArgument("tau must have one symbol per antichain member");
  for (std::size_t k = 0; k < tau.size(); ++k) {
    const auto p = static_cast<std::size_t>(plan_.member_pos[k]);
    if (tau[k] < 0 || tau[k] >= n_.cols()) throw InvalidArgument("observation symbol out of range");
    h_[p] = n_.col(tau[k]);
    log_[p] = 0.0;
  }
  for (std::size_t p = plan_.nodes.size(); p-- > 0;) {
    const auto& kids = plan_.child_pos[p];
    if (kids.empty()) continue;
    Vector acc = Vector::Ones(m_.rows());
    double lg = 0.0;
    for (int c : kids) {
      acc.array() *= (m_ * h_[static_cast<std::size_t>(c)]).array();
      lg += log_[static_cast<std::size_t>(c)];
    }
    const double top = acc.maxCoeff();
    if (top > 0.0) {
      acc /= top;
      lg += std::log(top);
    }
    h_[p] = acc;
    log_[p] = lg;
  }
  return {h_[0], log_[0]};
}

Vector likelihood_vector(const Tree& tree, const Channel& channel, const NoiseChannel& noise, const Antichain& s,
                         std::span<const int> tau) {
  LikelihoodEvaluator eval(tree, channel, noise, s);
  return eval.evaluate(tau).value();
}

Vector root_posterior(const Vector& g, const Vector& prior) {
  if (g.size() != prior.size()) throw InvalidArgument("likelihood and prior sizes differ");
  const Vector joint = prior.cwiseProduct(g);
  const double z = joint.sum();
  if (!(z > 0.0)) throw ZeroLikelihood("observation has zero probability under the prior");
  return joint / z;
}

McEstimate run_mc(const std::string& name, const McOptions& opts,
                  const std::function<std::function<double(std::uint64_t)>()>& make_sampler) {
  const auto values = collect(opts.n_samples, opts.streams, make_sampler);
  const Moments m = moments(values);
  McEstimate est;
  est.estimator = name;
  est.n_samples = opts.n_samples;
  est.seed = opts.seed;
  est.streams = std::max(1u, opts.streams);
  est.mean = opts.median_of_means ? median_of_means(values, opts.mom_blocks) : m.mean;
  est.std_error = opts.n_samples > 0 ? std::sqrt(m.variance / static_cast<double>(opts.n_samples)) : 0.0;
  return est;
}

McEstimate tv_mc(const Tree& tree, const Channel& channel, const NoiseChannel& noise, const Antichain& s, int i,
                 int j, const McOptions& opts) {
  if (i < 0 || j < 0 || i >= channel.q() || j >= channel.q()) throw InvalidArgument("state out of range");
  const Vector v = channel.stationary();
  const ObservationPlan plan = ObservationPlan::make(tree, s);
  return run_mc("tv", opts, [&] {
    auto sampler = std::make_shared<ObservationSampler>(tree, channel, noise, s);
    auto eval = std::make_shared<LikelihoodEvaluator>(plan, channel, noise);
    auto tau = std::make_shared<std::vector<int>>();
    return std::function<double(std::uint64_t)>([=, &v, &opts](std::uint64_t k) {
      sampler->sample(-1, opts.seed, k, *tau);
      const Vector f = normalized(eval->evaluate(*tau), v);
      return 0.5 * std::abs(f(i) - f(j));
    });
  });
}

McEstimate reconstruction_error_mc(const Tree& tree, const Channel& channel, const NoiseChannel& noise,
                                   const Antichain& s, const McOptions& opts) {
  const Vector v = channel.stationary();
  const ObservationPlan plan = ObservationPlan::make(tree, s);
  return run_mc("reconstruction_error", opts, [&] {
    auto sampler = std::make_shared<ObservationSampler>(tree, channel, noise, s);
    auto eval = std::make_shared<LikelihoodEvaluator>(plan, channel, noise);
    auto tau = std::make_shared<std::vector<int>>();
    return std::function<double(std::uint64_t)>([=, &v, &opts](std::uint64_t k) {
      const int root = sampler->sample(-1, opts.seed, k, *tau);
      const Vector post = v.cwiseProduct(eval->evaluate(*tau).scaled);
      Eigen::Index best = 0;
      for (Eigen::Index a = 1; a < post.size(); ++a)
        if (post(a) > post(best)) best = a;
      return best == root ? 0.0 : 1.0;
    });
  });
}

namespace {

// Right eigenvector for the eigenvalue of largest modulus once the Perron
// eigenvalue (the one nearest 1) is removed.
Vector second_right_eigenvector(const Matrix& m, bool& complex_flag) {
  Eigen::EigenSolver<Matrix> es(m);
  const auto vals = es.eigenvalues();
  Eigen::Index perron = 0;
  for (Eigen::Index k = 1; k < vals.size(); ++k)
    if (std::abs(vals(k) - 1.0) < std::abs(vals(perron) - 1.0)) perron = k;
  Eigen::Index second = perron == 0 ? 1 : 0;
  for (Eigen::Index k = 0; k < vals.size(); ++k)
    if (k != perron && std::abs(vals(k)) > std::abs(vals(second)) + 1e-14) second = k;
  complex_flag = std::abs(vals(second).imag()) > 1e-12;
  Vector r = es.eigenvectors().col(second).real();
  if (r.norm() == 0.0) r = es.eigenvectors().col(second).imag();
  return r / r.norm();
}

}  // namespace

CensusResult census_separation(const Tree& tree, const Channel& channel, const NoiseChannel& noise, int level,
                               const McOptions& opts) {
  if (level < 0 || level > tree.max_depth()) throw InvalidArgument("census level outside the tree");
  const int q = channel.q();
  CensusResult res;
  res.level = level;
  const Vector r = second_right_eigenvector(channel.matrix(), res.complex_eigenvector);
  res.weights = noise.n.completeOrthogonalDecomposition().solve(r);
  const Antichain s = level_antichain(tree, level);
  const Vector h = res.weights;
  for (int i = 0; i < q; ++i) {
    const std::uint64_t offset = static_cast<std::uint64_t>(i) * opts.n_samples;
    const auto values = collect(opts.n_samples, opts.streams, [&] {
      auto sampler = std::make_shared<ObservationSampler>(tree, channel, noise, s);
      auto tau = std::make_shared<std::vector<int>>();
      return std::function<double(std::uint64_t)>([=, &h, &opts](std::uint64_t k) {
        sampler->sample(i, opts.seed, offset + k, *tau);
        double acc = 0.0;
        for (int t : *tau) acc += h(t);
        return acc;
      });
    });
    const Moments m = moments(values);
    res.mean.push_back(m.mean);
    res.variance.push_back(m.variance);
  }
  res.z = Matrix::Zero(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      if (i == j) continue;
      const double pooled = std::sqrt(0.5 * (res.variance[static_cast<std::size_t>(i)] +
                                             res.variance[static_cast<std::size_t>(j)]));
      const double diff = std::abs(res.mean[static_cast<std::size_t>(i)] - res.mean[static_cast<std::size_t>(j)]);
      res.z(i, j) = pooled > 0.0 ? diff / pooled : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    }
  return res;
}

}  // namespace treecast
