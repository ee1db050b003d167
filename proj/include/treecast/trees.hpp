#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace treecast {

struct BAry {
  int arity = 2;
  int depth = 0;
};

/// parents[0] must be -1 (the root); every other entry names an existing node.
struct Explicit {
  std::vector<int> parents;
};

/// Every vertex at depth d has children_per_level[d] children.
struct SphericallySymmetric {
  std::vector<int> children_per_level;
};

using TreeSpec = std::variant<BAry, Explicit, SphericallySymmetric>;

inline constexpr std::size_t kDefaultNodeCap = 1u << 22;

/// Rooted finite tree. Node 0 is the root; nodes are stored in the order
/// they were supplied, with depth labels and level sets precomputed.
class Tree {
 public:
  std::size_t size() const noexcept { return parent_.size(); }
  int root() const noexcept { return 0; }
  int parent(int x) const { return parent_.at(static_cast<std::size_t>(x)); }
  const std::vector<int>& children(int x) const { return children_.at(static_cast<std::size_t>(x)); }
  int depth(int x) const { return depth_.at(static_cast<std::size_t>(x)); }
  const std::vector<int>& parents() const noexcept { return parent_; }
  const std::vector<int>& depths() const noexcept { return depth_; }
  int max_depth() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  const std::vector<int>& level(int n) const { return levels_.at(static_cast<std::size_t>(n)); }
  /// Largest number of children of any vertex (the K of the degree bound).
  int max_children() const noexcept { return max_children_; }
  std::vector<int> leaves() const;
  /// Depth of this tree's root inside the tree it was cut from.
  int depth_offset() const noexcept { return depth_offset_; }
  /// Nodes in breadth-first order (parents before children).
  const std::vector<int>& bfs_order() const noexcept { return bfs_; }
  bool is_ancestor(int a, int x) const;

  static Tree from_parents(std::vector<int> parents, std::size_t node_cap = kDefaultNodeCap,
                           int depth_offset = 0);

 private:
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> depth_;
  std::vector<std::vector<int>> levels_;
  std::vector<int> bfs_;
  int max_children_ = 0;
  int depth_offset_ = 0;
};

Tree build_tree(const TreeSpec& spec, std::size_t node_cap = kDefaultNodeCap);

/// The subtree T(y), reindexed with y as node 0; depth_offset() = depth(y).
Tree subtree(const Tree& tree, int y);

/// Keep only the vertices of depth <= d (indices of kept vertices are
/// renumbered in their original order).
Tree truncate(const Tree& tree, int d);

/// A minimal cutset with its inside: Ins(S) is the root component of T \ S.
struct Antichain {
  std::vector<int> members;                       // sorted
  std::vector<int> inside;                        // sorted
  std::vector<std::pair<int, int>> inside_edges;  // (parent, child), parent in inside
};

Antichain validate_antichain(const Tree& tree, std::vector<int> nodes);
Antichain level_antichain(const Tree& tree, int n);

/// Sum over x in S of lambda^{-|x|}.
double cutset_sum(const Tree& tree, const Antichain& s, double lambda);

struct AntichainMinimum {
  double value = 0.0;
  Antichain antichain;
};

/// Exact minimiser of the cutset sum over antichains of a finite tree, by
/// value(x) = min(lambda^{-|x|}, sum of children values). Ties cut at x.
AntichainMinimum min_antichain_sum(const Tree& tree, double lambda);

/// max over y in S u Ins(S) of sum_{x in S n T(y)} g^{-(|x|-|y|)}.
double max_local_cutset_sum(const Tree& tree, const Antichain& s, double g);

/// A rule generating finite truncations of a (possibly infinite) tree.
class TreeFamily {
 public:
  static TreeFamily bary(int arity);
  /// Children-per-level pattern; the last entry repeats forever.
  static TreeFamily spherical(std::vector<int> pattern);
  /// A fixed finite tree; truncations deeper than its depth return it whole.
  static TreeFamily fixed(Tree tree);

  Tree truncation(int depth) const;
  std::string describe() const;

 private:
  enum class Kind { BAry, Spherical, Fixed };
  Kind kind_ = Kind::BAry;
  int arity_ = 2;
  std::vector<int> pattern_;
  std::vector<int> fixed_parents_;
};

struct GoodAntichain {
  int truncation_depth = 0;
  Antichain antichain;
  double cutset_sum = 0.0;    // sum g^{-|x|}
  double max_local_sum = 0.0; // worst y in S u Ins(S)
};

/// Antichains meeting cutset_sum <= eps and the local condition at g, one per
/// truncation depth from the first depth where the sum condition holds up to
/// depth_cap. Throws NotFoundWithinCap if no truncation qualifies.
std::vector<GoodAntichain> good_antichain_sequence(const TreeFamily& family, double g, double eps,
                                                   int depth_cap);

/// Branching-number bracket read off one finite truncation: `lower` is the
/// largest lambda at which the root alone is optimal, `upper` the smallest
/// lambda at which the minimal cutset sum drops to `small`.
struct BranchingInterval {
  double lower = 0.0;
  double upper = 0.0;
  int depth = 0;
};
BranchingInterval branching_interval(const Tree& tree, double small = 0.5);

/// Parent-array text format: one `child parent` pair per line, node 0 is the root.
Tree read_parent_array(std::istream& in, std::size_t node_cap = kDefaultNodeCap);
void write_parent_array(std::ostream& out, const Tree& tree);
/// Antichain members as a sorted, comma-separated index list.
std::string antichain_csv(const Antichain& s);

}  // namespace treecast
