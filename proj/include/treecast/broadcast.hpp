#pragma once

#include "treecast/channels.hpp"
#include "treecast/trees.hpp"

#include <cstdint>
#include <vector>

namespace treecast {

/// Row-wise cumulative sums of a stochastic matrix for inverse-CDF draws.
class CategoricalTable {
 public:
  explicit CategoricalTable(const Matrix& m);
  int sample(int row, double u) const noexcept;
  int cols() const noexcept { return cols_; }

 private:
  int cols_ = 0;
  std::vector<double> cum_;
};

/// The vertices of S u Ins(S) in breadth-first order, which is all a sampler
/// or a likelihood pass over antichain observations needs to touch.
struct ObservationPlan {
  std::vector<int> nodes;       // tree indices, parents before children
  std::vector<int> parent_pos;  // index into `nodes`, -1 for the root
  std::vector<int> member_pos;  // index into `nodes` of S.members[k]
  std::vector<std::vector<int>> child_pos;

  static ObservationPlan make(const Tree& tree, const Antichain& s);
};

/// Full configuration: sigma on every vertex, tau on the observed antichain.
struct Configuration {
  std::vector<int> sigma;
  std::vector<int> tau;
};

/// Broadcast M down the whole tree from `root_state` (states are 0-based).
std::vector<int> sample_configuration(const Tree& tree, const Channel& channel, int root_state,
                                      std::uint64_t seed, std::uint64_t sample_index = 0);

/// Root drawn from the stationary vector instead of fixed.
std::vector<int> sample_configuration_stationary(const Tree& tree, const Channel& channel, std::uint64_t seed,
                                                 std::uint64_t sample_index = 0);

/// tau[k] ~ row sigma(S.members[k]) of N, independently per member.
std::vector<int> observe_antichain(const std::vector<int>& sigma, const Antichain& s, const NoiseChannel& noise,
                                   std::uint64_t seed, std::uint64_t sample_index = 0);

Configuration sample_observation(const Tree& tree, const Channel& channel, const NoiseChannel& noise,
                                 const Antichain& s, int root_state, std::uint64_t seed,
                                 std::uint64_t sample_index = 0);

/// Reusable sampler over a plan; draws are identical to sample_observation.
class ObservationSampler {
 public:
  ObservationSampler(const Tree& tree, const Channel& channel, const NoiseChannel& noise, const Antichain& s);

  /// Fills tau (size |S|) and returns the root state used. A negative
  /// root_state draws the root from the stationary vector.
  int sample(int root_state, std::uint64_t seed, std::uint64_t sample_index, std::vector<int>& tau);

  const ObservationPlan& plan() const noexcept { return plan_; }

 private:
  ObservationPlan plan_;
  CategoricalTable transition_;
  CategoricalTable observation_;
  std::vector<double> root_cum_;
  std::vector<int> sigma_;
};

}  // namespace treecast
