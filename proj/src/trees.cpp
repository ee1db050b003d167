#include "treecast/trees.hpp"

#include "treecast/error.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace treecast {
namespace {

void check_cap(long double count, std::size_t cap) {
  if (count > static_cast<long double>(cap)) {
    std::ostringstream msg;
    msg << "tree would have " << static_cast<double>(count) << " nodes, cap is " << cap;
    throw CapExceeded(msg.str());
  }
}

// s(y) = sum over x in S n T(y) of g^{-|x|}, for every y in S u Ins(S).
std::vector<double> cutset_mass(const Tree& tree, const Antichain& s, double g) {
  std::vector<double> mass(tree.size(), 0.0);
  std::vector<char> in_s(tree.size(), 0);
  for (int x : s.members) {
    in_s[static_cast<std::size_t>(x)] = 1;
    mass[static_cast<std::size_t>(x)] = std::pow(g, -tree.depth(x));
  }
  // Inside nodes, deepest first.
  std::vector<int> inside = s.inside;
  std::sort(inside.begin(), inside.end(),
            [&](int a, int b) { return tree.depth(a) > tree.depth(b); });
  for (int y : inside) {
    double acc = 0.0;
    for (int c : tree.children(y)) acc += mass[static_cast<std::size_t>(c)];
    mass[static_cast<std::size_t>(y)] = acc;
  }
  return mass;
}

}  // namespace

std::vector<int> Tree::leaves() const {
  std::vector<int> out;
  for (std::size_t x = 0; x < size(); ++x)
    if (children_[x].empty()) out.push_back(static_cast<int>(x));
  return out;
}

bool Tree::is_ancestor(int a, int x) const {
  while (x >= 0 && depth(x) > depth(a)) x = parent(x);
  return x == a;
}

Tree Tree::from_parents(std::vector<int> parents, std::size_t node_cap, int depth_offset) {
  const std::size_t n = parents.size();
  if (n == 0) throw InvalidArgument("tree needs at least one node");
  check_cap(static_cast<long double>(n), node_cap);
  if (parents[0] != -1) throw InvalidArgument("node 0 must be the root (parent -1)");
  Tree t;
  t.children_.assign(n, {});
  for (std::size_t x = 1; x < n; ++x) {
    const int p = parents[x];
    if (p < 0 || static_cast<std::size_t>(p) >= n || static_cast<std::size_t>(p) == x) {
      std::ostringstream msg;
      msg << "node " << x << " has invalid parent " << p;
      throw CycleError(msg.str());
    }
    t.children_[static_cast<std::size_t>(p)].push_back(static_cast<int>(x));
  }
  t.parent_ = std::move(parents);
  t.depth_.assign(n, -1);
  t.depth_[0] = 0;
  t.bfs_.reserve(n);
  t.bfs_.push_back(0);
  for (std::size_t head = 0; head < t.bfs_.size(); ++head) {
    const int x = t.bfs_[head];
    for (int c : t.children_[static_cast<std::size_t>(x)]) {
      t.depth_[static_cast<std::size_t>(c)] = t.depth_[static_cast<std::size_t>(x)] + 1;
      t.bfs_.push_back(c);
    }
  }
  if (t.bfs_.size() != n) throw CycleError("parent list contains a cycle or a detached component");
  int max_d = 0;
  for (int d : t.depth_) max_d = std::max(max_d, d);
  t.levels_.assign(static_cast<std::size_t>(max_d) + 1, {});
  for (std::size_t x = 0; x < n; ++x)
    t.levels_[static_cast<std::size_t>(t.depth_[x])].push_back(static_cast<int>(x));
  for (const auto& ch : t.children_)
    t.max_children_ = std::max(t.max_children_, static_cast<int>(ch.size()));
  t.depth_offset_ = depth_offset;
  return t;
}

Tree build_tree(const TreeSpec& spec, std::size_t node_cap) {
  if (const auto* b = std::get_if<BAry>(&spec)) {
    if (b->arity < 1 || b->depth < 0) throw InvalidArgument("B-ary tree needs arity >= 1, depth >= 0");
    std::vector<int> counts(static_cast<std::size_t>(b->depth), b->arity);
    return build_tree(SphericallySymmetric{counts}, node_cap);
  }
  if (const auto* e = std::get_if<Explicit>(&spec)) return Tree::from_parents(e->parents, node_cap);
  const auto& s = std::get<SphericallySymmetric>(spec);
  long double total = 1, width = 1;
  for (int c : s.children_per_level) {
    if (c < 1) throw InvalidArgument("children per level must be >= 1");
    width *= c;
    total += width;
    check_cap(total, node_cap);
  }
  std::vector<int> parents{-1};
  parents.reserve(static_cast<std::size_t>(total));
  std::size_t level_begin = 0, level_end = 1;
  for (int c : s.children_per_level) {
    for (std::size_t x = level_begin; x < level_end; ++x)
      for (int k = 0; k < c; ++k) parents.push_back(static_cast<int>(x));
    level_begin = level_end;
    level_end = parents.size();
  }
  return Tree::from_parents(std::move(parents), node_cap);
}

Tree subtree(const Tree& tree, int y) {
  if (y < 0 || static_cast<std::size_t>(y) >= tree.size()) throw InvalidArgument("subtree root out of range");
  std::vector<int> order{y};
  std::vector<int> index(tree.size(), -1);
  index[static_cast<std::size_t>(y)] = 0;
  for (std::size_t head = 0; head < order.size(); ++head)
    for (int c : tree.children(order[head])) {
      index[static_cast<std::size_t>(c)] = static_cast<int>(order.size());
      order.push_back(c);
    }
  std::vector<int> parents(order.size(), -1);
  for (std::size_t k = 1; k < order.size(); ++k)
    parents[k] = index[static_cast<std::size_t>(tree.parent(order[k]))];
  return Tree::from_parents(std::move(parents), kDefaultNodeCap, tree.depth_offset() + tree.depth(y));
}

Tree truncate(const Tree& tree, int d) {
  std::vector<int> index(tree.size(), -1);
  std::vector<int> parents;
  for (std::size_t x = 0; x < tree.size(); ++x) {
    if (tree.depth(static_cast<int>(x)) > d) continue;
    index[x] = static_cast<int>(parents.size());
    parents.push_back(x == 0 ? -1 : tree.parent(static_cast<int>(x)));
  }
  // Parents precede children only if the input does; remap after the fact.
  for (std::size_t k = 1; k < parents.size(); ++k) parents[k] = index[static_cast<std::size_t>(parents[k])];
  return Tree::from_parents(std::move(parents), kDefaultNodeCap, tree.depth_offset());
}

Antichain validate_antichain(const Tree& tree, std::vector<int> nodes) {
  if (nodes.empty()) throw NotACutset("empty vertex set");
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
    throw InvalidArgument("antichain lists a node twice");
  std::vector<char> in_s(tree.size(), 0);
  for (int x : nodes) {
    if (x < 0 || static_cast<std::size_t>(x) >= tree.size()) throw InvalidArgument("antichain node out of range");
    in_s[static_cast<std::size_t>(x)] = 1;
  }
  for (int x : nodes)
    for (int a = tree.parent(x); a >= 0; a = tree.parent(a))
      if (in_s[static_cast<std::size_t>(a)]) {
        std::ostringstream msg;
        msg << "node " << x << " lies below member " << a;
        throw NotMinimal(msg.str());
      }
  Antichain s;
  s.members = std::move(nodes);
  if (in_s[0]) return s;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    const auto& ch = tree.children(x);
    if (ch.empty()) {
      std::ostringstream msg;
      msg << "path to leaf " << x << " avoids the set";
      throw NotACutset(msg.str());
    }
    s.inside.push_back(x);
    for (int c : ch) {
      s.inside_edges.emplace_back(x, c);
      if (!in_s[static_cast<std::size_t>(c)]) stack.push_back(c);
    }
  }
  std::sort(s.inside.begin(), s.inside.end());
  std::sort(s.inside_edges.begin(), s.inside_edges.end());
  return s;
}

Antichain level_antichain(const Tree& tree, int n) {
  if (n < 0 || n > tree.max_depth()) throw InvalidArgument("level out of range");
  return validate_antichain(tree, tree.level(n));
}

double cutset_sum(const Tree& tree, const Antichain& s, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  double acc = 0.0;
  for (int x : s.members) acc += std::pow(lambda, -tree.depth(x));
  return acc;
}

AntichainMinimum min_antichain_sum(const Tree& tree, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  const std::size_t n = tree.size();
  std::vector<double> value(n, 0.0);
  std::vector<char> cut(n, 0);
  const auto& order = tree.bfs_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int x = *it;
    const double here = std::pow(lambda, -tree.depth(x));
    const auto& ch = tree.children(x);
    if (ch.empty()) {
      value[static_cast<std::size_t>(x)] = here;
      cut[static_cast<std::size_t>(x)] = 1;
      continue;
    }
    double below = 0.0;
    for (int c : ch) below += value[static_cast<std::size_t>(c)];
    if (here <= below) {
      value[static_cast<std::size_t>(x)] = here;
      cut[static_cast<std::size_t>(x)] = 1;
    } else {
      value[static_cast<std::size_t>(x)] = below;
    }
  }
  std::vector<int> members;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    if (cut[static_cast<std::size_t>(x)]) {
      members.push_back(x);
      continue;
    }
    for (int c : tree.children(x)) stack.push_back(c);
  }
  AntichainMinimum out;
  out.value = value[0];
  out.antichain = validate_antichain(tree, std::move(members));
  return out;
}

double max_local_cutset_sum(const Tree& tree, const Antichain& s, double g) {
  const auto mass = cutset_mass(tree, s, g);
  double worst = 0.0;
  auto local = [&](int y) { return mass[static_cast<std::size_t>(y)] * std::pow(g, tree.depth(y)); };
  for (int y : s.members) worst = std::max(worst, local(y));
  for (int y : s.inside) worst = std::max(worst, local(y));
  return worst;
}

TreeFamily TreeFamily::bary(int arity) {
  if (arity < 1) throw InvalidArgument("arity must be >= 1");
  TreeFamily f;
  f.kind_ = Kind::BAry;
  f.arity_ = arity;
  return f;
}

TreeFamily TreeFamily::spherical(std::vector<int> pattern) {
  if (pattern.empty()) throw InvalidArgument("spherical pattern must be nonempty");
  for (int c : pattern)
    if (c < 1) throw InvalidArgument("children per level must be >= 1");
  TreeFamily f;
  f.kind_ = Kind::Spherical;
  f.pattern_ = std::move(pattern);
  return f;
}

TreeFamily TreeFamily::fixed(Tree tree) {
  TreeFamily f;
  f.kind_ = Kind::Fixed;
  f.fixed_parents_ = tree.parents();
  return f;
}

Tree TreeFamily::truncation(int depth) const {
  switch (kind_) {
    case Kind::BAry:
      return build_tree(BAry{arity_, depth});
    case Kind::Spherical: {
      std::vector<int> counts;
      for (int d = 0; d < depth; ++d)
        counts.push_back(pattern_[std::min<std::size_t>(static_cast<std::size_t>(d), pattern_.size() - 1)]);
      return build_tree(SphericallySymmetric{counts});
    }
    case Kind::Fixed:
      return truncate(Tree::from_parents(fixed_parents_), depth);
  }
  throw InvalidArgument("unknown tree family");
}

std::string TreeFamily::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::BAry: out << "bary(" << arity_ << ")"; break;
    case Kind::Spherical:
      out << "spherical(";
      for (std::size_t i = 0; i < pattern_.size(); ++i) out << (i ? "," : "") << pattern_[i];
      out << ")";
      break;
    case Kind::Fixed: out << "explicit(" << fixed_parents_.size() << " nodes)"; break;
  }
  return out.str();
}

std::vector<GoodAntichain> good_antichain_sequence(const TreeFamily& family, double g, double eps,
                                                   int depth_cap) {
  if (!(g > 1.0)) throw InvalidArgument("growth parameter g must exceed 1");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  std::vector<GoodAntichain> out;
  int previous_depth = -1;
  for (int d = 0; d <= depth_cap; ++d) {
    const Tree t = family.truncation(d);
    if (t.max_depth() == previous_depth) break;  // fixed finite tree exhausted
    previous_depth = t.max_depth();
    const auto best = min_antichain_sum(t, g);
    if (best.value > eps) continue;
    GoodAntichain good;
    good.truncation_depth = d;
    good.antichain = best.antichain;
    good.cutset_sum = best.value;
    good.max_local_sum = max_local_cutset_sum(t, best.antichain, g);
    if (good.max_local_sum > 1.0 + 1e-12) continue;
    out.push_back(std::move(good));
  }
  if (out.empty()) {
    std::ostringstream msg;
    msg << "no antichain of " << family.describe() << " up to depth " << depth_cap << " has cutset sum <= "
        << eps << " at g = " << g;
    throw NotFoundWithinCap(msg.str());
  }
  return out;
}

BranchingInterval branching_interval(const Tree& tree, double small) {
  BranchingInterval out;
  out.depth = tree.max_depth();
  if (tree.max_depth() == 0) {
    out.lower = out.upper = std::numeric_limits<double>::infinity();
    return out;
  }
  auto m = [&](double lambda) { return min_antichain_sum(tree, lambda).value; };
  auto bisect = [&](auto&& pred) {  // smallest lambda with pred true
    double lo = 1.0, hi = 2.0;
    while (!pred(hi)) {
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (pred(mid) ? hi : lo) = mid;
    }
    return hi;
  };
  out.lower = bisect([&](double l) { return m(l) < 1.0 - 1e-12; });
  out.upper = bisect([&](double l) { return m(l) <= small; });
  return out;
}

Tree read_parent_array(std::istream& in, std::size_t node_cap) {
  std::vector<std::pair<long long, long long>> edges;
  std::string line;
  long long max_index = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long child = 0, parent = 0;
    if (!(ls >> child)) continue;
    std::string rest;
    if (!(ls >> parent) || (ls >> rest)) {
      throw ParseError("line " + std::to_string(line_no) + ": expected `child parent`");
    }
    if (child <= 0 || parent < 0) throw ParseError("line " + std::to_string(line_no) + ": bad indices");
    edges.emplace_back(child, parent);
    max_index = std::max({max_index, child, parent});
  }
  check_cap(static_cast<long double>(max_index + 1), node_cap);
  std::vector<int> parents(static_cast<std::size_t>(max_index + 1), -2);
  parents[0] = -1;
  for (auto [c, p] : edges) {
    if (parents[static_cast<std::size_t>(c)] != -2)
      throw ParseError("node " + std::to_string(c) + " has two parents");
    parents[static_cast<std::size_t>(c)] = static_cast<int>(p);
  }
  for (std::size_t x = 1; x < parents.size(); ++x)
    if (parents[x] == -2) throw ParseError("node " + std::to_string(x) + " has no parent line");
  return Tree::from_parents(std::move(parents), node_cap);
}

void write_parent_array(std::ostream& out, const Tree& tree) {
  for (std::size_t x = 1; x < tree.size(); ++x) out << x << ' ' << tree.parent(static_cast<int>(x)) << '\n';
}

std::string antichain_csv(const Antichain& s) {
  std::ostringstream out;
  for (std::size_t i = 0; i < s.members.size(); ++i) out << (i ? "," : "") << s.members[i];
  return out.str();
}

}  // namespace treecast
