#include "treecast/broadcast.hpp"

#include "treecast/error.hpp"
#include "treecast/rng.hpp"

#include <algorithm>

namespace treecast {
namespace {

std::vector<double> cumulative(const Vector& p) {
  std::vector<double> c(static_cast<std::size_t>(p.size()));
  double acc = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j) c[static_cast<std::size_t>(j)] = (acc += p(j));
  return c;
}

int draw(const double* cum, int n, double u) noexcept {
  const double target = u * cum[n - 1];
  int j = static_cast<int>(std::upper_bound(cum, cum + n, target) - cum);
  if (j >= n) j = n - 1;
  // Skip zero-probability symbols that share the cumulative value.
  while (j > 0 && cum[j] == cum[j - 1]) --j;
  return j;
}

void check_state(const Channel& channel, int state) {
  if (state < 0 || state >= channel.q()) throw InvalidArgument("root state out of range");
}

}  // namespace

CategoricalTable::CategoricalTable(const Matrix& m) : cols_(static_cast<int>(m.cols())) {
  cum_.resize(static_cast<std::size_t>(m.rows() * m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) cum_[static_cast<std::size_t>(i * m.cols() + j)] = (acc += m(i, j));
  }
}

int CategoricalTable::sample(int row, double u) const noexcept {
  return draw(cum_.data() + static_cast<std::ptrdiff_t>(row) * cols_, cols_, u);
}

ObservationPlan ObservationPlan::make(const Tree& tree, const Antichain& s) {
  ObservationPlan plan;
  std::vector<int> pos(tree.size(), -1);
  std::vector<char> in_s(tree.size(), 0);
  for (int x : s.members) in_s[static_cast<std::size_t>(x)] = 1;
  plan.nodes.push_back(0);
  plan.parent_pos.push_back(-1);
  pos[0] = 0;
  for (std::size_t head = 0; head < plan.nodes.size(); ++head) {
    const int x = plan.nodes[head];
    plan.child_pos.emplace_back();
    if (in_s[static_cast<std::size_t>(x)]) continue;
    for (int c : tree.children(x)) {
      pos[static_cast<std::size_t>(c)] = static_cast<int>(plan.nodes.size());
      plan.child_pos[head].push_back(static_cast<int>(plan.nodes.size()));
      plan.nodes.push_back(c);
      plan.parent_pos.push_back(static_cast<int>(head));
    }
  }
  for (int x : s.members) plan.member_pos.push_back(pos[static_cast<std::size_t>(x)]);
  return plan;
}

std::vector<int> sample_configuration(const Tree& tree, const Channel& channel, int root_state, std::uint64_t seed,
                                      std::uint64_t sample_index) {
  check_state(channel, root_state);
  const CategoricalTable table(channel.matrix());
  std::vector<int> sigma(tree.size(), 0);
  sigma[0] = root_state;
  for (int x : tree.bfs_order()) {
    if (x == 0) continue;
    const double u = counter_uniform(seed, sample_index, static_cast<std::uint32_t>(x), DrawPurpose::Transition);
    sigma[static_cast<std::size_t>(x)] = table.sample(sigma[static_cast<std::size_t>(tree.parent(x))], u);
  }
  return sigma;
}

std::vector<int> sample_configuration_stationary(const Tree& tree, const Channel& channel, std::uint64_t seed,
                                                 std::uint64_t sample_index) {
  const auto cum = cumulative(channel.stationary());
  const double u = counter_uniform(seed, sample_index, 0, DrawPurpose::Root);
  return sample_configuration(tree, channel, draw(cum.data(), channel.q(), u), seed, sample_index);
}

std::vector<int> observe_antichain(const std::vector<int>& sigma, const Antichain& s, const NoiseChannel& noise,
                                   std::uint64_t seed, std::uint64_t sample_index) {
  const CategoricalTable table(noise.n);
  std::vector<int> tau;
  tau.reserve(s.members.size());
  for (int x : s.members) {
    const double u = counter_uniform(seed, sample_index, static_cast<std::uint32_t>(x), DrawPurpose::Observation);
    tau.push_back(table.sample(sigma.at(static_cast<std::size_t>(x)), u));
  }
  return tau;
}

Configuration sample_observation(const Tree& tree, const Channel& channel, const NoiseChannel& noise,
                                 const Antichain& s, int root_state, std::uint64_t seed, std::uint64_t sample_index) {
  Configuration c;
  c.sigma = sample_configuration(tree, channel, root_state, seed, sample_index);
  c.tau = observe_antichain(c.sigma, s, noise, seed, sample_index);
  return c;
}

ObservationSampler::ObservationSampler(const Tree& tree, const Channel& channel, const NoiseChannel& noise,
                                       const Antichain& s)
    : plan_(ObservationPlan::make(tree, s)), transition_(channel.matrix()), observation_(noise.n) {
  if (noise.q() != channel.q()) throw InvalidArgument("noise matrix rows must match the state count");
  if (channel.ergodic()) root_cum_ = cumulative(channel.stationary());
  sigma_.resize(plan_.nodes.size());
}

int ObservationSampler::sample(int root_state, std::uint64_t seed, std::uint64_t sample_index,
                               std::vector<int>& tau) {
  if (root_state < 0) {
    if (root_cum_.empty()) throw NonErgodic("stationary root draw needs an ergodic chain");
    const double u = counter_uniform(seed, sample_index, 0, DrawPurpose::Root);
    root_state = draw(root_cum_.data(), static_cast<int>(root_cum_.size()), u);
  }
  sigma_[0] = root_state;
  for (std::size_t k = 1; k < plan_.nodes.size(); ++k) {
    const double u =
        counter_uniform(seed, sample_index, static_cast<std::uint32_t>(plan_.nodes[k]), DrawPurpose::Transition);
    sigma_[k] = transition_.sample(sigma_[static_cast<std::size_t>(plan_.parent_pos[k])], u);
  }
  tau.resize(plan_.member_pos.size());
  for (std::size_t k = 0; k < plan_.member_pos.size(); ++k) {
    const auto p = static_cast<std::size_t>(plan_.member_pos[k]);
    const double u =
        counter_uniform(seed, sample_index, static_cast<std::uint32_t>(plan_.nodes[p]), DrawPurpose::Observation);
    tau[k] = observation_.sample(sigma_[p], u);
  }
  return root_state;
}

}  // namespace treecast
