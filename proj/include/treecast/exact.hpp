#pragma once

#include "treecast/channels.hpp"
#include "treecast/error.hpp"
#include "treecast/trees.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace treecast {

struct EngineOptions {
  std::size_t atom_budget = 1'000'000;
  /// Relative tolerance under which two likelihood vectors are the same class.
  double merge_tol = 1e-12;
  /// Lossy merging (off by default); merged mass is accumulated in lossy_error().
  bool lossy = false;
  double lossy_tol = 1e-9;
};

/// The vector of measures (mu_1, ..., mu_q) on observation classes, stored as
/// weighted likelihood vectors: atom a has g_i = P(observation | state i)
/// for each of its w(a) raw observation strings.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(int q) : q_(q) {}

  int q() const noexcept { return q_; }
  std::size_t size() const noexcept { return w_.size(); }
  bool empty() const noexcept { return w_.empty(); }
  std::span<const double> g(std::size_t a) const noexcept {
    return {g_.data() + a * static_cast<std::size_t>(q_), static_cast<std::size_t>(q_)};
  }
  double w(std::size_t a) const noexcept { return w_[a]; }
  const std::vector<double>& likelihoods() const noexcept { return g_; }
  const std::vector<double>& weights() const noexcept { return w_; }

  /// Appends an atom; all-zero likelihood vectors are dropped.
  void add(std::span<const double> g, double w);
  void reserve(std::size_t n);
  /// Combines atoms whose likelihood vectors agree within `tol` (relative).
  /// Deterministic: the result depends only on the multiset of atoms.
  void merge(double tol = 1e-12);
  /// sum_a w(a) g_i(a); equals 1 for every state of a valid AtomSet.
  double mass(int state) const;
  double lossy_error() const noexcept { return lossy_error_; }
  void add_lossy_error(double e) noexcept { lossy_error_ += e; }

  friend bool operator==(const AtomSet& a, const AtomSet& b) {
    return a.q_ == b.q_ && a.g_ == b.g_ && a.w_ == b.w_;
  }

 private:
  int q_ = 0;
  std::vector<double> g_;
  std::vector<double> w_;
  double lossy_error_ = 0.0;
};

/// Symbol j of the observation alphabet becomes the atom (N_{1j}, ..., N_{qj}).
AtomSet leaf_atoms(const NoiseChannel& noise);

/// g -> M g on every atom (the measure vector mu -> M mu), then merged.
AtomSet apply_channel(const AtomSet& atoms, const Matrix& m, const EngineOptions& opts = {});

/// Number of product atoms recursion_step would enumerate before merging.
long double product_atom_count(std::span<const AtomSet> factors);

namespace detail {
std::vector<std::vector<std::size_t>> identical_groups(std::span<const AtomSet> factors);
}

/// Visits each atom of the componentwise tensor product of `factors`.
/// Identical factors are enumerated as multisets with multinomial weights.
/// The visitor receives (likelihood, weight, chosen atom index per factor).
template <class Visitor>
void for_each_product_atom(std::span<const AtomSet> factors, Visitor&& visit) {
  if (factors.empty()) return;
  const int q = factors.front().q();
  const auto groups = detail::identical_groups(factors);
  const std::size_t slots = factors.size();
  // Flattened slot order: group by group.
  std::vector<std::size_t> slot_factor;
  std::vector<std::size_t> slot_group;
  for (std::size_t gi = 0; gi < groups.size(); ++gi)
    for (std::size_t f : groups[gi]) {
      slot_factor.push_back(f);
      slot_group.push_back(gi);
    }
  std::vector<std::uint32_t> chosen(slots, 0);          // atom index per slot
  std::vector<std::uint32_t> per_factor(slots, 0);      // reported in factor order
  std::vector<double> prefix_g(static_cast<std::size_t>(q) * (slots + 1), 1.0);
  std::vector<double> prefix_w(slots + 1, 1.0);
  std::vector<double> prefix_coeff(slots + 1, 1.0);
  std::vector<std::uint32_t> run(slots + 1, 0);

  // Iterative depth-first enumeration; slot s in a group starts at the atom
  // chosen by the previous slot of the same group (nondecreasing sequences).
  std::size_t s = 0;
  std::vector<std::int64_t> next(slots, -1);
  auto start_of = [&](std::size_t slot) -> std::uint32_t {
    if (slot > 0 && slot_group[slot - 1] == slot_group[slot]) return chosen[slot - 1];
    return 0;
  };
  next[0] = start_of(0);
  while (true) {
    const AtomSet& set = factors[slot_factor[s]];
    if (next[s] >= static_cast<std::int64_t>(set.size())) {
      if (s == 0) break;
      --s;
      ++next[s];
      continue;
    }
    const auto a = static_cast<std::uint32_t>(next[s]);
    chosen[s] = a;
    const bool same_group_prev = s > 0 && slot_group[s - 1] == slot_group[s];
    const std::uint32_t r = (same_group_prev && chosen[s - 1] == a) ? run[s] + 1 : 1;
    run[s + 1] = r;
    // Position within the group, 1-based.
    std::size_t pos = 1;
    for (std::size_t t = s; t > 0 && slot_group[t - 1] == slot_group[s]; --t) ++pos;
    prefix_coeff[s + 1] = prefix_coeff[s] * static_cast<double>(pos) / static_cast<double>(r);
    prefix_w[s + 1] = prefix_w[s] * set.w(a);
    const auto ga = set.g(a);
    const double* pg = prefix_g.data() + s * static_cast<std::size_t>(q);
    double* ng = prefix_g.data() + (s + 1) * static_cast<std::size_t>(q);
    for (int i = 0; i < q; ++i) ng[i] = pg[i] * ga[static_cast<std::size_t>(i)];
    if (s + 1 == slots) {
      for (std::size_t t = 0; t < slots; ++t) per_factor[slot_factor[t]] = chosen[t];
      visit(std::span<const double>(ng, static_cast<std::size_t>(q)), prefix_w[slots] * prefix_coeff[slots],
            std::span<const std::uint32_t>(per_factor));
      ++next[s];
    } else {
      ++s;
      next[s] = start_of(s);
    }
  }
}

/// One step of the tensor recursion: parent = (x)_s (M child_s).
AtomSet recursion_step(std::span<const AtomSet> children, const Matrix& m, const EngineOptions& opts = {});

/// Componentwise tensor product without a channel step (M = identity).
AtomSet tensor_product(std::span<const AtomSet> factors, const EngineOptions& opts = {});

/// mu^n for n = 0..depth on the B-ary tree with the given leaf noise.
std::vector<AtomSet> bary_levels(const Channel& channel, const NoiseChannel& noise, int arity, int depth,
                                 const EngineOptions& opts = {});

/// Measure vectors mu^{y,S} for every y in S u Ins(S) (keyed by node).
std::unordered_map<int, AtomSet> antichain_node_atoms(const Tree& tree, const Channel& channel,
                                                      const NoiseChannel& noise, const Antichain& s,
                                                      const EngineOptions& opts = {});

/// mu^{rho,S}: the root entry of antichain_node_atoms, computed without
/// keeping intermediate nodes alive.
AtomSet antichain_atoms(const Tree& tree, const Channel& channel, const NoiseChannel& noise, const Antichain& s,
                        const EngineOptions& opts = {});

/// Brute force over every observation string on S (one unmerged atom per
/// string). Requires b^|S| <= cap.
AtomSet enumerate_oracle(const Tree& tree, const Channel& channel, const NoiseChannel& noise, const Antichain& s,
                         std::size_t cap = 1'000'000);

/// mu_root(tau) by summing the full product over every assignment sigma of
/// S u Ins(S). Exponential; for cross-checking on tiny trees.
double brute_force_probability(const Tree& tree, const Channel& channel, const NoiseChannel& noise,
                               const Antichain& s, std::span<const int> tau, int root_state);

/// Total variation between mu_i and mu_j: half of sum w |g_i - g_j|.
double atoms_tv(const AtomSet& atoms, int i, int j);
double atoms_tv_max(const AtomSet& atoms);

/// TV distance between the state-`state` measures of two AtomSets, after
/// pushing both forward to likelihood-vector values (matched within tol).
double pushforward_tv(const AtomSet& a, const AtomSet& b, int state, double tol = 1e-9);

/// CSV with header `w,g_1,...,g_q`, numbers at 17 significant digits.
void write_atoms_csv(std::ostream& out, const AtomSet& atoms);
AtomSet read_atoms_csv(std::istream& in);

}  // namespace treecast
