#include "treecast/exact.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace treecast {
namespace {

bool close_rel(std::span<const double> a, std::span<const double> b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max(std::abs(a[i]), std::abs(b[i]));
    if (std::abs(a[i] - b[i]) > tol * scale) return false;
  }
  return true;
}

void check_budget(long double count, const EngineOptions& opts) {
  if (count > static_cast<long double>(opts.atom_budget)) {
    std::ostringstream msg;
    msg << "product would enumerate " << static_cast<double>(count) << " atoms, budget is " << opts.atom_budget;
    throw AtomBudgetExceeded(msg.str());
  }
}

long double multiset_count(std::size_t n, std::size_t r) {
  // C(n + r - 1, r)
  long double c = 1;
  for (std::size_t k = 1; k <= r; ++k) c = c * static_cast<long double>(n + k - 1) / static_cast<long double>(k);
  return c;
}

void finish(AtomSet& out, const EngineOptions& opts) {
  if (opts.lossy) {
    const AtomSet before = out;
    out.merge(opts.lossy_tol);
    // Mass moved by lossy merging, bounded per state by the largest shift.
    double moved = 0.0;
    for (int i = 0; i < before.q(); ++i) moved = std::max(moved, std::abs(before.mass(i) - out.mass(i)));
    out.add_lossy_error(moved + opts.lossy_tol);
  } else {
    out.merge(opts.merge_tol);
  }
}

}  // namespace

void AtomSet::add(std::span<const double> g, double w) {
  if (static_cast<int>(g.size()) != q_) throw InvalidArgument("atom dimension does not match q");
  if (!(w > 0.0)) return;
  if (std::all_of(g.begin(), g.end(), [](double x) { return x == 0.0; })) return;
  g_.insert(g_.end(), g.begin(), g.end());
  w_.push_back(w);
}

void AtomSet::reserve(std::size_t n) {
  g_.reserve(n * static_cast<std::size_t>(q_));
  w_.reserve(n);
}

void AtomSet::merge(double tol) {
  const std::size_t n = size();
  if (n < 2) return;
  const auto qs = static_cast<std::size_t>(q_);
  std::vector<double> sums(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto ga = g(a);
    sums[a] = std::accumulate(ga.begin(), ga.end(), 0.0);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sums[a] != sums[b]) return sums[a] < sums[b];
    const auto ga = g(a), gb = g(b);
    return std::lexicographical_compare(ga.begin(), ga.end(), gb.begin(), gb.end());
  });
  std::vector<char> used(n, 0);
  std::vector<double> ng, nw;
  ng.reserve(n * qs);
  nw.reserve(n);
  std::vector<double> acc(qs);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = order[i];
    if (used[a]) continue;
    const auto ga = g(a);
    double weight = w_[a];
    for (std::size_t k = 0; k < qs; ++k) acc[k] = weight * ga[k];
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t b = order[j];
      if (sums[b] - sums[a] > tol * (sums[a] + sums[b])) break;
      if (used[b] || !close_rel(ga, g(b), tol)) continue;
      used[b] = 1;
      const auto gb = g(b);
      for (std::size_t k = 0; k < qs; ++k) acc[k] += w_[b] * gb[k];
      weight += w_[b];
    }
    for (std::size_t k = 0; k < qs; ++k) ng.push_back(acc[k] / weight);
    nw.push_back(weight);
  }
  g_ = std::move(ng);
  w_ = std::move(nw);
}

double AtomSet::mass(int state) const {
  double acc = 0.0;
  for (std::size_t a = 0; a < size(); ++a) acc += w_[a] * g(a)[static_cast<std::size_t>(state)];
  return acc;
}

AtomSet leaf_atoms(const NoiseChannel& noise) {
  AtomSet out(noise.q());
  std::vector<double> g(static_cast<std::size_t>(noise.q()));
  for (Eigen::Index j = 0; j < noise.n.cols(); ++j) {
    for (Eigen::Index i = 0; i < noise.n.rows(); ++i) g[static_cast<std::size_t>(i)] = noise.n(i, j);
    out.add(g, 1.0);
  }
  out.merge();
  return out;
}

AtomSet apply_channel(const AtomSet& atoms, const Matrix& m, const EngineOptions& opts) {
  const int q = atoms.q();
  if (m.rows() != q || m.cols() != q) throw InvalidArgument("channel size does not match atoms");
  AtomSet out(q);
  out.reserve(atoms.size());
  Vector in(q), res(q);
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const auto g = atoms.g(a);
    for (int i = 0; i < q; ++i) in(i) = g[static_cast<std::size_t>(i)];
    res.noalias() = m * in;
    out.add(std::span<const double>(res.data(), static_cast<std::size_t>(q)), atoms.w(a));
  }
  out.add_lossy_error(atoms.lossy_error());
  finish(out, opts);
  return out;
}

namespace detail {
std::vector<std::vector<std::size_t>> identical_groups(std::span<const AtomSet> factors) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    bool placed = false;
    for (auto& grp : groups)
      if (factors[grp.front()] == factors[f]) {
        grp.push_back(f);
        placed = true;
        break;
      }
    if (!placed) groups.push_back({f});
  }
  return groups;
}
}  // namespace detail

long double product_atom_count(std::span<const AtomSet> factors) {
  long double count = 1;
  for (const auto& grp : detail::identical_groups(factors))
    count *= multiset_count(factors[grp.front()].size(), grp.size());
  return count;
}

AtomSet tensor_product(std::span<const AtomSet> factors, const EngineOptions& opts) {
  if (factors.empty()) throw InvalidArgument("tensor product of no factors");
  const int q = factors.front().q();
  for (const auto& f : factors)
    if (f.q() != q) throw InvalidArgument("factors disagree on q");
  const long double count = product_atom_count(factors);
  check_budget(count, opts);
  AtomSet out(q);
  out.reserve(static_cast<std::size_t>(count));
  for_each_product_atom(factors, [&](std::span<const double> g, double w, std::span<const std::uint32_t>) {
    out.add(g, w);
  });
  for (const auto& f : factors) out.add_lossy_error(f.lossy_error());
  finish(out, opts);
  return out;
}

AtomSet recursion_step(std::span<const AtomSet> children, const Matrix& m, const EngineOptions& opts) {
  if (children.empty()) throw InvalidArgument("recursion step needs at least one child");
  std::vector<AtomSet> stepped;
  stepped.reserve(children.size());
  // Identical children stay identical after the step; reuse the result.
  for (std::size_t c = 0; c < children.size(); ++c) {
    std::size_t same = c;
    for (std::size_t d = 0; d < c; ++d)
      if (children[d] == children[c]) {
        same = d;
        break;
      }
    stepped.push_back(same == c ? apply_channel(children[c], m, opts) : stepped[same]);
  }
  return tensor_product(stepped, opts);
}

std::vector<AtomSet> bary_levels(const Channel& channel, const NoiseChannel& noise, int arity, int depth,
                                 const EngineOptions& opts) {
  if (noise.q() != channel.q()) throw InvalidArgument("noise rows must match the state count");
  std::vector<AtomSet> levels{leaf_atoms(noise)};
  for (int n = 1; n <= depth; ++n) {
    const std::vector<AtomSet> children(static_cast<std::size_t>(arity), levels.back());
    levels.push_back(recursion_step(children, channel.matrix(), opts));
  }
  return levels;
}

namespace {

template <class Keep>
std::unordered_map<int, AtomSet> node_atoms_impl(const Tree& tree, const Channel& channel,
                                                 const NoiseChannel& noise, const Antichain& s,
                                                 const EngineOptions& opts, Keep keep) {
  if (noise.q() != channel.q()) throw InvalidArgument("noise rows must match the state count");
  std::unordered_map<int, AtomSet> atoms;
  const AtomSet leaf = leaf_atoms(noise);
  for (int x : s.members) atoms.emplace(x, leaf);
  std::vector<int> inside = s.inside;
  std::stable_sort(inside.begin(), inside.end(),
                   [&](int a, int b) { return tree.depth(a) > tree.depth(b); });
  for (int y : inside) {
    std::vector<AtomSet> children;
    for (int c : tree.children(y)) {
      auto it = atoms.find(c);
      if (keep(c)) {
        children.push_back(it->second);
      } else {
        children.push_back(std::move(it->second));
        atoms.erase(it);
      }
    }
    atoms.emplace(y, recursion_step(children, channel.matrix(), opts));
  }
  return atoms;
}

}  // namespace

std::unordered_map<int, AtomSet> antichain_node_atoms(const Tree& tree, const Channel& channel,
                                                      const NoiseChannel& noise, const Antichain& s,
                                                      const EngineOptions& opts) {
  return node_atoms_impl(tree, channel, noise, s, opts, [](int) { return true; });
}

AtomSet antichain_atoms(const Tree& tree, const Channel& channel, const NoiseChannel& noise, const Antichain& s,
                        const EngineOptions& opts) {
  auto atoms = node_atoms_impl(tree, channel, noise, s, opts, [](int) { return false; });
  return std::move(atoms.at(0));
}

AtomSet enumerate_oracle(const Tree& tree, const Channel& channel, const NoiseChannel& noise, const Antichain& s,
                         std::size_t cap) {
  const int q = channel.q();
  const int b = noise.b();
  const std::size_t k = s.members.size();
  long double strings = 1;
  for (std::size_t i = 0; i < k; ++i) strings *= b;
  if (strings > static_cast<long double>(cap)) {
    std::ostringstream msg;
    msg << b << "^" << k << " observation strings exceed the oracle cap " << cap;
    throw CapExceeded(msg.str());
  }
  const Matrix& m = channel.matrix();
  std::vector<int> member_index(tree.size(), -1);
  for (std::size_t i = 0; i < k; ++i) member_index[static_cast<std::size_t>(s.members[i])] = static_cast<int>(i);
  std::vector<int> inside = s.inside;
  std::stable_sort(inside.begin(), inside.end(), [&](int a, int c) { return tree.depth(a) > tree.depth(c); });

  AtomSet out(q);
  out.reserve(static_cast<std::size_t>(strings));
  std::vector<int> tau(k, 0);
  std::vector<Vector> h(tree.size());
  std::vector<double> g(static_cast<std::size_t>(q));
  while (true) {
    // Sum over sigma by the distributive law: h_y(l) = P(tau below y | sigma(y) = l).
    for (std::size_t i = 0; i < k; ++i) h[static_cast<std::size_t>(s.members[i])] = noise.n.col(tau[i]);
    for (int y : inside) {
      Vector acc = Vector::Ones(q);
      for (int c : tree.children(y)) acc.array() *= (m * h[static_cast<std::size_t>(c)]).array();
      h[static_cast<std::size_t>(y)] = acc;
    }
    for (int i = 0; i < q; ++i) g[static_cast<std::size_t>(i)] = h[0](i);
    out.add(g, 1.0);
    std::size_t pos = 0;
    while (pos < k && ++tau[pos] == b) tau[pos++] = 0;
    if (pos == k) break;
  }
  return out;
}

double brute_force_probability(const Tree& tree, const Channel& channel, const NoiseChannel& noise,
                               const Antichain& s, std::span<const int> tau, int root_state) {
  const int q = channel.q();
  std::vector<int> nodes = s.inside;
  nodes.insert(nodes.end(), s.members.begin(), s.members.end());
  std::sort(nodes.begin(), nodes.end());
  std::vector<int> pos(tree.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) pos[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
  std::vector<int> sigma(nodes.size(), 0);
  const Matrix& m = channel.matrix();
  double total = 0.0;
  while (true) {
    if (sigma[static_cast<std::size_t>(pos[0])] == root_state) {
      double p = 1.0;
      for (auto [x, y] : s.inside_edges)
        p *= m(sigma[static_cast<std::size_t>(pos[static_cast<std::size_t>(x)])],
               sigma[static_cast<std::size_t>(pos[static_cast<std::size_t>(y)])]);
      for (std::size_t i = 0; i < s.members.size(); ++i)
        p *= noise.n(sigma[static_cast<std::size_t>(pos[static_cast<std::size_t>(s.members[i])])], tau[i]);
      total += p;
    }
    std::size_t i = 0;
    while (i < sigma.size() && ++sigma[i] == q) sigma[i++] = 0;
    if (i == sigma.size()) break;
  }
  return total;
}

double atoms_tv(const AtomSet& atoms, int i, int j) {
  if (i == j) return 0.0;
  double acc = 0.0;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    const auto g = atoms.g(a);
    acc += atoms.w(a) * std::abs(g[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(j)]);
  }
  return 0.5 * acc;
}

double atoms_tv_max(const AtomSet& atoms) {
  double best = 0.0;
  for (int i = 0; i < atoms.q(); ++i)
    for (int j = i + 1; j < atoms.q(); ++j) best = std::max(best, atoms_tv(atoms, i, j));
  return best;
}

double pushforward_tv(const AtomSet& a, const AtomSet& b, int state, double tol) {
  if (a.q() != b.q()) throw InvalidArgument("atom sets disagree on q");
  // Tag every atom with a signed mass and merge equal likelihood vectors.
  struct Entry {
    double sum;
    std::size_t index;
    bool from_a;
  };
  std::vector<Entry> entries;
  auto push = [&](const AtomSet& set, bool from_a) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto g = set.g(i);
      entries.push_back({std::accumulate(g.begin(), g.end(), 0.0), i, from_a});
    }
  };
  push(a, true);
  push(b, false);
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.sum < y.sum; });
  auto view = [&](const Entry& e) { return e.from_a ? a.g(e.index) : b.g(e.index); };
  auto signed_mass = [&](const Entry& e) {
    const AtomSet& set = e.from_a ? a : b;
    const double m = set.w(e.index) * set.g(e.index)[static_cast<std::size_t>(state)];
    return e.from_a ? m : -m;
  };
  std::vector<char> used(entries.size(), 0);
  double tv = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (used[i]) continue;
    double net = signed_mass(entries[i]);
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (entries[j].sum - entries[i].sum > tol * (std::abs(entries[i].sum) + std::abs(entries[j].sum))) break;
      if (used[j] || !close_rel(view(entries[i]), view(entries[j]), tol)) continue;
      used[j] = 1;
      net += signed_mass(entries[j]);
    }
    tv += std::abs(net);
  }
  return 0.5 * tv;
}

void write_atoms_csv(std::ostream& out, const AtomSet& atoms) {
  const auto old = out.precision(17);
  out << 'w';
  for (int i = 1; i <= atoms.q(); ++i) out << ",g_" << i;
  out << '\n';
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    out << atoms.w(a);
    for (double x : atoms.g(a)) out << ',' << x;
    out << '\n';
  }
  out.precision(old);
}

AtomSet read_atoms_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("atom CSV is empty");
  const int q = static_cast<int>(std::count(line.begin(), line.end(), ','));
  if (q < 1 || line.rfind("w,", 0) != 0) throw ParseError("atom CSV header must be w,g_1,...");
  AtomSet out(q);
  std::vector<double> g(static_cast<std::size_t>(q));
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double w = 0.0;
    if (!(ls >> w)) throw ParseError("atom CSV line " + std::to_string(line_no));
    for (auto& x : g)
      if (!(ls >> x)) throw ParseError("atom CSV line " + std::to_string(line_no) + " is short");
    out.add(g, w);
  }
  return out;
}

}  // namespace treecast
