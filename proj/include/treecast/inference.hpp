#pragma once

#include "treecast/broadcast.hpp"
#include "treecast/channels.hpp"
#include "treecast/trees.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace treecast {

/// Likelihood vector kept as scaled * exp(log_scale) so deep trees do not underflow.
struct ScaledLikelihood {
  Vector scaled;
  double log_scale = 0.0;

  Vector value() const { return scaled * std::exp(log_scale); }
};

/// Upward (pruning) recursion over S u Ins(S), reusable across samples.
class LikelihoodEvaluator {
 public:
  LikelihoodEvaluator(const Tree& tree, const Channel& channel, const NoiseChannel& noise, const Antichain& s);
  LikelihoodEvaluator(ObservationPlan plan, const Channel& channel, const NoiseChannel& noise);

  /// tau is indexed like S.members.
  ScaledLikelihood evaluate(std::span<const int> tau);
  const ObservationPlan& plan() const noexcept { return plan_; }

 private:
  ObservationPlan plan_;
  Matrix m_;
  Matrix n_;
  std::vector<Vector> h_;
  std::vector<double> log_;
};

/// g_i = P(tau on S | root state i).
Vector likelihood_vector(const Tree& tree, const Channel& channel, const NoiseChannel& noise, const Antichain& s,
                         std::span<const int> tau);

/// Bayes rule; throws ZeroLikelihood when prior . g == 0.
Vector root_posterior(const Vector& g, const Vector& prior);

struct McOptions {
  std::uint64_t n_samples = 10'000;
  std::uint64_t seed = 1;
  /// Samples are split into this many contiguous streams; partial sums are
  /// reduced in stream order, so results depend only on (seed, streams).
  unsigned streams = 1;
  bool median_of_means = false;
  unsigned mom_blocks = 16;
};

struct McEstimate {
  std::string estimator;
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  unsigned streams = 1;
};

/// Runs `sample(index)` for index in [0, n) across streams and reduces. The
/// per-sample function must depend only on its index.
McEstimate run_mc(const std::string& name, const McOptions& opts,
                  const std::function<std::function<double(std::uint64_t)>()>& make_sampler);

/// Half the L1 distance between mu_i and mu_j (the TV convention with the 1/2),
/// estimated with tau drawn from the stationary mixture.
McEstimate tv_mc(const Tree& tree, const Channel& channel, const NoiseChannel& noise, const Antichain& s, int i,
                 int j, const McOptions& opts);

/// P(argmax posterior != root) with the root drawn from v; ties go to the lowest index.
McEstimate reconstruction_error_mc(const Tree& tree, const Channel& channel, const NoiseChannel& noise,
                                   const Antichain& s, const McOptions& opts);

struct CensusResult {
  int level = 0;
  std::vector<double> mean;      // E_i s
  std::vector<double> variance;  // Var_i s
  Matrix z;                      // |E_i s - E_j s| / sqrt((Var_i + Var_j) / 2)
  bool complex_eigenvector = false;
  Vector weights;                // per observation symbol
};

/// Census statistic s(tau) = sum over the level-n leaves of h(tau_x), where h
/// solves N h = r for the second right eigenvector M r = lambda_2 r.
CensusResult census_separation(const Tree& tree, const Channel& channel, const NoiseChannel& noise, int level,
                               const McOptions& opts);

}  // namespace treecast
