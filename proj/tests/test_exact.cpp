#include "doctest.h"
#include "oracles.hpp"
#include "treecast/error.hpp"
#include "treecast/exact.hpp"

#include <random>
#include <sstream>

using namespace treecast;

namespace {

oracle::Classes engine_classes(const AtomSet& a) {
  oracle::Classes c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Vector g(a.q());
    for (int k = 0; k < a.q(); ++k) g(k) = a.g(i)[static_cast<std::size_t>(k)];
    c.g.push_back(g);
    c.w.push_back(a.w(i));
  }
  return c;
}

oracle::Classes oracle_classes(const Tree& t, const Channel& m, const NoiseChannel& n, const Antichain& s) {
  const auto gs = oracle::string_likelihoods(t.parents(), s.members, m.matrix(), n.n);
  std::vector<Vector> kept;
  for (const auto& g : gs)
    if (g.maxCoeff() > 0.0) kept.push_back(g);
  return oracle::classify(kept, std::vector<double>(kept.size(), 1.0));
}

NoiseChannel random_noise(std::mt19937_64& rng, const Channel& m, int which) {
  const int q = m.q();
  switch (which) {
    case 0:
      return power_noise(m, 1 + static_cast<int>(rng() % 2));
    case 1:
      return mix_noise(oracle::random_probability(rng, q, 0.05), 0.3);
    default:
      return erasure_noise(q, 0.25);
  }
}

}  // namespace

TEST_CASE("leaf atoms") {
  const AtomSet id = leaf_atoms(identity_noise(2));
  REQUIRE(id.size() == 2);
  const AtomSet er = leaf_atoms(erasure_noise(2, 0.25));
  REQUIRE(er.size() == 3);
  double erased = 0.0;
  for (std::size_t a = 0; a < er.size(); ++a)
    if (er.g(a)[0] == er.g(a)[1]) erased = er.g(a)[0];
  CHECK(erased == 0.25);
  const AtomSet mix = leaf_atoms(mix_noise(Vector::Constant(2, 0.5), 1.0));
  REQUIRE(mix.size() == 1);
  CHECK(mix.w(0) == 2.0);
  CHECK(mix.g(0)[0] == 0.5);
}

TEST_CASE("one recursion step on the binary symmetric channel") {
  const AtomSet leaf = leaf_atoms(identity_noise(2));
  const std::vector<AtomSet> kids{leaf, leaf};
  const AtomSet parent = recursion_step(kids, bsc(0.3).matrix());
  REQUIRE(parent.size() == 3);
  // Sorted by sum of g: (0.21,0.21) sums to 0.42, the others to 0.58.
  CHECK(parent.g(0)[0] == doctest::Approx(0.21));
  CHECK(parent.w(0) == 2.0);
  for (std::size_t a = 1; a < 3; ++a) {
    CHECK(parent.w(a) == 1.0);
    CHECK(std::max(parent.g(a)[0], parent.g(a)[1]) == doctest::Approx(0.49));
    CHECK(std::min(parent.g(a)[0], parent.g(a)[1]) == doctest::Approx(0.09));
  }
  CHECK(atoms_tv(parent, 0, 1) == doctest::Approx(0.4));
  CHECK(atoms_tv(parent, 1, 1) == 0.0);
  const std::vector<AtomSet> one{leaf};
  CHECK(recursion_step(one, Matrix::Identity(2, 2)) == leaf);
  CHECK(atoms_tv_max(bary_levels(bsc(0.5), identity_noise(2), 2, 3).back()) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("enumeration oracle examples") {
  const Tree t = build_tree(BAry{2, 1});
  const Antichain s = level_antichain(t, 1);
  const AtomSet raw = enumerate_oracle(t, bsc(0.3), identity_noise(2), s);
  REQUIRE(raw.size() == 4);
  std::vector<double> root0;
  for (std::size_t a = 0; a < 4; ++a) root0.push_back(raw.g(a)[0]);
  CHECK(root0[0] == doctest::Approx(0.49));
  CHECK(root0[1] == doctest::Approx(0.21));
  CHECK(root0[2] == doctest::Approx(0.21));
  CHECK(root0[3] == doctest::Approx(0.09));

  const Tree single = build_tree(BAry{2, 0});
  const AtomSet point = enumerate_oracle(single, qsym(3, 0.2), identity_noise(3), level_antichain(single, 0));
  CHECK(point.size() == 3);
  const AtomSet erased = enumerate_oracle(t, bsc(0.3), erasure_noise(2, 1.0), s);
  REQUIRE(erased.size() == 1);
  CHECK(erased.g(0)[0] == 1.0);
  CHECK(erased.g(0)[1] == 1.0);
  const Tree big = build_tree(BAry{2, 4});
  CHECK_THROWS_AS(enumerate_oracle(big, bsc(0.3), identity_noise(2), level_antichain(big, 4), 1000), CapExceeded);
}

TEST_CASE("enumeration oracle against the naive sum") {
  std::mt19937_64 rng(8);
  const Tree t = build_tree(Explicit{{-1, 0, 0, 1, 1, 2}});
  const Antichain s = validate_antichain(t, {2, 3, 4});
  for (int trial = 0; trial < 5; ++trial) {
    const Channel m = build_channel(oracle::random_stochastic(rng, 3, 3));
    const NoiseChannel n = random_noise(rng, m, trial % 3);
    const AtomSet raw = enumerate_oracle(t, m, n, s);
    std::size_t a = 0;
    std::vector<int> tau(3, 0);
    const int b = n.b();
    // Walk strings in the same order as the oracle; zero strings are dropped.
    while (true) {
      Vector g(3);
      for (int r = 0; r < 3; ++r) g(r) = oracle::naive_probability(t.parents(), s.members, tau, r, m.matrix(), n.n);
      if (g.maxCoeff() > 0.0) {
        for (int r = 0; r < 3; ++r) {
          CHECK(raw.g(a)[static_cast<std::size_t>(r)] == doctest::Approx(g(r)).epsilon(1e-12));
          CHECK(brute_force_probability(t, m, n, s, tau, r) == doctest::Approx(g(r)).epsilon(1e-12));
        }
        ++a;
      }
      std::size_t k = 0;
      while (k < 3 && ++tau[k] == b) tau[k++] = 0;
      if (k == 3) break;
    }
    CHECK(a == raw.size());
  }
}

TEST_CASE("engine matches string enumeration on small b-ary trees") {
  std::mt19937_64 rng(21);
  for (int q = 2; q <= 3; ++q)
    for (int arity = 2; arity <= 3; ++arity)
      for (int depth = 0; depth <= 3; ++depth)
        for (int which = 0; which < 3; ++which) {
          const Channel m = build_channel(oracle::random_stochastic(rng, q, q, 0.02));
          const NoiseChannel n = random_noise(rng, m, which);
          long double strings = std::pow(static_cast<long double>(n.b()), std::pow(arity, depth));
          if (strings > 300000) continue;
          const Tree t = build_tree(BAry{arity, depth});
          const AtomSet engine = bary_levels(m, n, arity, depth).back();
          const auto ref = oracle_classes(t, m, n, level_antichain(t, depth));
          for (int i = 0; i < q; ++i) {
            CHECK(engine.mass(i) == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(oracle::class_tv(engine_classes(engine), ref, i) <= 1e-10);
          }
        }
}

TEST_CASE("antichain atoms on an irregular tree") {
  std::mt19937_64 rng(4);
  const Tree t = build_tree(Explicit{{-1, 0, 0, 0, 1, 1, 2, 4, 4, 4, 6}});
  const Antichain s = validate_antichain(t, {3, 5, 7, 8, 9, 10});
  const Channel m = build_channel(oracle::random_stochastic(rng, 3, 3, 0.05));
  const NoiseChannel n = mix_noise(oracle::random_probability(rng, 3, 0.1), 0.4);
  const auto nodes = antichain_node_atoms(t, m, n, s);
  for (int y : {0, 1, 2, 4, 6}) {
    const Tree sub = subtree(t, y);
    std::vector<int> members;
    // Map the antichain into the subtree's numbering: BFS order is preserved by subtree().
    std::vector<int> sub_members;
    for (int x : s.members)
      if (t.is_ancestor(y, x) || x == y) members.push_back(x);
    // subtree() renumbers in BFS order of T(y); rebuild that order here.
    std::vector<int> bfs{y};
    for (std::size_t h = 0; h < bfs.size(); ++h)
      for (int c : t.children(bfs[h])) bfs.push_back(c);
    for (std::size_t k = 0; k < bfs.size(); ++k)
      if (std::find(members.begin(), members.end(), bfs[k]) != members.end()) sub_members.push_back(static_cast<int>(k));
    const auto ref = oracle_classes(sub, m, n, validate_antichain(sub, sub_members));
    for (int i = 0; i < 3; ++i) CHECK(oracle::class_tv(engine_classes(nodes.at(y)), ref, i) <= 1e-10);
  }
  CHECK(antichain_atoms(t, m, n, s) == nodes.at(0));
}

TEST_CASE("atom counts respect the multiset recurrence") {
  const auto levels = bary_levels(bsc(0.3), identity_noise(2), 2, 5);
  for (std::size_t n = 0; n + 1 < levels.size(); ++n) {
    const double a = static_cast<double>(levels[n].size());
    CHECK(static_cast<double>(levels[n + 1].size()) <= a * (a + 1) / 2);
  }
  CHECK(levels[1].size() == 3);
  const std::vector<AtomSet> three(3, levels[2]);
  CHECK(product_atom_count(three) == doctest::Approx(static_cast<double>(
                                          levels[2].size() * (levels[2].size() + 1) * (levels[2].size() + 2) / 6)));
}

TEST_CASE("TV shrinks under data processing") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const int q = 2 + trial % 2;
    const Channel m = build_channel(oracle::random_stochastic(rng, q, q, 0.02));
    // Along a path each extra level garbles the previous observation.
    const auto path = bary_levels(m, mix_noise(Vector::Constant(q, 1.0 / q), 0.2), 1, 6);
    for (std::size_t n = 0; n + 1 < path.size(); ++n) CHECK(atoms_tv_max(path[n + 1]) <= atoms_tv_max(path[n]) + 1e-12);
    // More observation noise on the same tree.
    for (int k = 0; k < 3; ++k)
      CHECK(atoms_tv_max(bary_levels(m, power_noise(m, k + 1), 2, 3).back()) <=
            atoms_tv_max(bary_levels(m, power_noise(m, k), 2, 3).back()) + 1e-12);
  }
}

TEST_CASE("budget, lossy mode and CSV") {
  const auto levels = bary_levels(bsc(0.3), identity_noise(2), 2, 3);
  EngineOptions tight;
  tight.atom_budget = 10;
  const std::vector<AtomSet> kids{levels[3], levels[3]};
  CHECK_THROWS_AS(recursion_step(kids, bsc(0.3).matrix(), tight), AtomBudgetExceeded);

  EngineOptions lossy;
  lossy.lossy = true;
  lossy.lossy_tol = 1e-3;
  const AtomSet coarse = recursion_step(kids, bsc(0.3).matrix(), lossy);
  const AtomSet exact = recursion_step(kids, bsc(0.3).matrix());
  CHECK(coarse.size() <= exact.size());
  CHECK(coarse.lossy_error() > 0.0);
  CHECK(exact.lossy_error() == 0.0);

  std::stringstream ss;
  write_atoms_csv(ss, levels[2]);
  CHECK(ss.str().rfind("w,g_1,g_2\n", 0) == 0);
  const AtomSet back = read_atoms_csv(ss);
  CHECK(back == levels[2]);
  std::istringstream bad("x,y\n");
  CHECK_THROWS_AS(read_atoms_csv(bad), ParseError);
}

TEST_CASE("pushforward TV") {
  const auto levels = bary_levels(bsc(0.3), identity_noise(2), 2, 2);
  CHECK(pushforward_tv(levels[2], levels[2], 0) == 0.0);
  const auto other = bary_levels(bsc(0.2), identity_noise(2), 2, 2);
  CHECK(pushforward_tv(levels[2], other[2], 0) > 0.1);
}
