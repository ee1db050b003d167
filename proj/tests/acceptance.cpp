// Acceptance suite: one PASS/FAIL line per criterion, details indented below.

#include "property_suite.hpp"
#include "oracles.hpp"
#include "treecast/certify.hpp"
#include "treecast/discrepancy.hpp"
#include "treecast/exact.hpp"
#include "treecast/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace treecast;

namespace {

struct Outcome {
  bool pass = false;
  std::vector<std::string> details;

  void note(const std::string& s) { details.push_back(s); }
  bool expect(bool ok, const std::string& what) {
    note(std::string(ok ? "ok   " : "FAIL ") + what);
    return ok;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

int run_criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.note(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= budget_s;
  if (!in_time) o.note("over the time budget");
  const bool pass = o.pass && in_time;
  std::printf("%s criterion %d: %s (%.1f s of %.0f s)\n", pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              budget_s);
  for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
  std::fflush(stdout);
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------- criterion 1

Outcome property_suites() {
  Outcome o;
  o.pass = true;
  for (const auto& r : suite::all(20240601, 1000)) {
    o.pass &= o.expect(r.ok() && r.instances >= 1000,
                       r.name + ": " + std::to_string(r.instances) + " checks, " + std::to_string(r.violations) +
                           " violations, worst excess " + fmt("%.3g", r.worst));
  }
  return o;
}

// ---------------------------------------------------------------- criterion 2

// |Qb|^2 sum_k v_k / b_k from the basis and Gram matrix, on raw arrays.
struct FastD {
  int q;
  std::vector<double> v, u, p;  // u is q x (q-1) row major, p is (q-1)^2

  explicit FastD(const ContractionNorm& n) : q(n.q()) {
    for (int i = 0; i < q; ++i) v.push_back(n.v(i));
    for (int i = 0; i < q; ++i)
      for (int a = 0; a < q - 1; ++a) u.push_back(n.basis(i, a));
    for (int a = 0; a < q - 1; ++a)
      for (int b = 0; b < q - 1; ++b) p.push_back(n.gram(a, b));
  }

  double operator()(const double* g) const {
    double vg = 0.0, inv = 0.0;
    for (int i = 0; i < q; ++i) vg += v[static_cast<std::size_t>(i)] * g[i];
    double c[8] = {0};
    for (int i = 0; i < q; ++i) {
      const double qb = g[i] - vg;
      for (int a = 0; a < q - 1; ++a) c[a] += u[static_cast<std::size_t>(i * (q - 1) + a)] * qb;
    }
    double qn = 0.0;
    for (int a = 0; a < q - 1; ++a)
      for (int b = 0; b < q - 1; ++b) qn += c[a] * p[static_cast<std::size_t>(a * (q - 1) + b)] * c[b];
    if (qn == 0.0) return 0.0;
    for (int i = 0; i < q; ++i) {
      if (g[i] == 0.0) return INFINITY;
      inv += v[static_cast<std::size_t>(i)] / g[i];
    }
    return qn * inv;
  }
};

oracle::Classes engine_classes(const AtomSet& a) {
  oracle::Classes c;
  for (std::size_t k = 0; k < a.size(); ++k) {
    Vector g(a.q());
    for (int i = 0; i < a.q(); ++i) g(i) = a.g(k)[static_cast<std::size_t>(i)];
    c.g.push_back(g);
    c.w.push_back(a.w(k));
  }
  return c;
}

std::vector<int> last_level(const std::vector<int>& parents, int count) {
  std::vector<int> m;
  for (int x = static_cast<int>(parents.size()) - count; x < static_cast<int>(parents.size()); ++x) m.push_back(x);
  return m;
}

bool d_agrees(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return std::isinf(a) && std::isinf(b);
  return std::abs(a - b) <= 1e-9 * std::max(std::abs(b), 1e-300);
}

struct CaseResult {
  double tv = 0.0;  // worst per-state TV between engine and oracle
  double d_engine = 0.0, d_oracle = 0.0;
  std::size_t atoms = 0;
  std::string method;
};

// Strings on every leaf, pooled into likelihood classes.
CaseResult direct_case(const Channel& m, const NoiseChannel& n, int arity, int depth, const ContractionNorm& norm) {
  CaseResult r;
  r.method = "full enumeration";
  const auto parents = oracle::bary_parents(arity, depth);
  const int leaves = static_cast<int>(std::pow(arity, depth));
  const auto gs_all = oracle::string_likelihoods(parents, last_level(parents, leaves), m.matrix(), n.n);
  std::vector<Vector> gs;
  for (const auto& g : gs_all)
    if (g.maxCoeff() > 0.0) gs.push_back(g);
  const auto ref = oracle::classify(gs, std::vector<double>(gs.size(), 1.0));
  const AtomSet eng = bary_levels(m, n, arity, depth).back();
  r.atoms = eng.size();
  const auto ec = engine_classes(eng);
  for (int i = 0; i < m.q(); ++i) r.tv = std::max(r.tv, oracle::class_tv(ec, ref, i));
  const FastD fd(norm);
  for (const auto& g : gs) {
    r.d_oracle += fd(g.data());
    if (std::isinf(r.d_oracle)) break;
  }
  r.d_engine = discrepancy_of_atoms(eng, norm);
  return r;
}

// B = 3, depth 3: brute force on the depth-2 subtrees, then stream the root
// level over multisets of subtree classes.
CaseResult split_case(const Channel& m, const NoiseChannel& n, const ContractionNorm& norm) {
  CaseResult r;
  const int q = m.q();
  const auto sub_parents = oracle::bary_parents(3, 2);
  const auto gs_all = oracle::string_likelihoods(sub_parents, last_level(sub_parents, 9), m.matrix(), n.n);
  std::vector<Vector> gs;
  for (const auto& g : gs_all)
    if (g.maxCoeff() > 0.0) gs.push_back(g);
  const auto sub = oracle::classify(gs, std::vector<double>(gs.size(), 1.0));
  const std::size_t k = sub.g.size();
  std::vector<double> mh(k * static_cast<std::size_t>(q));
  for (std::size_t c = 0; c < k; ++c) {
    const Vector x = m.matrix() * sub.g[c];
    for (int i = 0; i < q; ++i) mh[c * static_cast<std::size_t>(q) + static_cast<std::size_t>(i)] = x(i);
  }

  // Match engine atoms to oracle vectors one to one (values and weights).
  auto match = [&](const AtomSet& eng, const std::vector<double>& ref, std::vector<std::size_t>& map) {
    if (eng.size() != k) return false;
    map.assign(k, k);
    std::vector<char> taken(k, 0);
    for (std::size_t a = 0; a < k; ++a) {
      double best = INFINITY;
      std::size_t arg = k;
      for (std::size_t c = 0; c < k; ++c) {
        if (taken[c]) continue;
        double diff = 0.0, scale = 0.0;
        for (int i = 0; i < q; ++i) {
          const double x = ref[c * static_cast<std::size_t>(q) + static_cast<std::size_t>(i)];
          diff = std::max(diff, std::abs(eng.g(a)[static_cast<std::size_t>(i)] - x));
          scale = std::max(scale, std::abs(x));
        }
        if (diff <= 1e-9 * scale && diff < best) {
          best = diff;
          arg = c;
        }
      }
      if (arg == k || std::abs(eng.w(a) - sub.w[arg]) > 1e-9 * sub.w[arg]) return false;
      map[a] = arg;
      taken[arg] = 1;
    }
    return true;
  };
  std::vector<double> h(k * static_cast<std::size_t>(q));
  for (std::size_t c = 0; c < k; ++c)
    for (int i = 0; i < q; ++i) h[c * static_cast<std::size_t>(q) + static_cast<std::size_t>(i)] = sub.g[c](i);
  const AtomSet e2 = bary_levels(m, n, 3, 2).back();
  std::vector<std::size_t> map;
  if (!match(e2, h, map)) {
    r.tv = INFINITY;
    r.method = "depth-2 classes do not match";
    return r;
  }

  const FastD fd(norm);
  auto oracle_atom = [&](std::size_t c1, std::size_t c2, std::size_t c3, double* g) {
    std::size_t s[3] = {c1, c2, c3};
    std::sort(s, s + 3);
    const double perms = (s[0] == s[2]) ? 1.0 : (s[0] == s[1] || s[1] == s[2]) ? 3.0 : 6.0;
    for (int i = 0; i < q; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      g[i] = mh[s[0] * static_cast<std::size_t>(q) + ii] * mh[s[1] * static_cast<std::size_t>(q) + ii] *
             mh[s[2] * static_cast<std::size_t>(q) + ii];
    }
    return perms * sub.w[s[0]] * sub.w[s[1]] * sub.w[s[2]];
  };

  const std::vector<AtomSet> kids(3, e2);
  const long double count = product_atom_count(kids);
  std::vector<double> tv(static_cast<std::size_t>(q), 0.0);
  double g[8];
  if (count <= 2.5e6) {
    // Engine result merged at the root; oracle atoms are looked up by value.
    r.method = "split enumeration, merged root";
    EngineOptions big;
    big.atom_budget = 3'000'000;
    const AtomSet e3 = recursion_step(kids, m.matrix(), big);
    r.atoms = e3.size();
    std::vector<std::pair<double, std::size_t>> by_sum;
    for (std::size_t a = 0; a < e3.size(); ++a) {
      double s = 0.0;
      for (double x : e3.g(a)) s += x;
      by_sum.emplace_back(s, a);
    }
    std::sort(by_sum.begin(), by_sum.end());
    std::vector<double> resid(e3.size() * static_cast<std::size_t>(q));
    for (std::size_t a = 0; a < e3.size(); ++a)
      for (int i = 0; i < q; ++i)
        resid[a * static_cast<std::size_t>(q) + static_cast<std::size_t>(i)] =
            e3.w(a) * e3.g(a)[static_cast<std::size_t>(i)];
    std::vector<double> unmatched(static_cast<std::size_t>(q), 0.0);
    for (std::size_t c1 = 0; c1 < k; ++c1)
      for (std::size_t c2 = c1; c2 < k; ++c2)
        for (std::size_t c3 = c2; c3 < k; ++c3) {
          const double w = oracle_atom(c1, c2, c3, g);
          r.d_oracle += w * fd(g);
          double s = 0.0, scale = 0.0;
          for (int i = 0; i < q; ++i) {
            s += g[i];
            scale = std::max(scale, g[i]);
          }
          auto it = std::lower_bound(by_sum.begin(), by_sum.end(), std::make_pair(s * (1 - 1e-9), std::size_t{0}));
          std::size_t hit = e3.size();
          double best = INFINITY;
          for (; it != by_sum.end() && it->first <= s * (1 + 1e-9); ++it) {
            double diff = 0.0;
            for (int i = 0; i < q; ++i)
              diff = std::max(diff, std::abs(e3.g(it->second)[static_cast<std::size_t>(i)] - g[i]));
            if (diff <= 1e-9 * scale && diff < best) {
              best = diff;
              hit = it->second;
            }
          }
          for (int i = 0; i < q; ++i) {
            if (hit < e3.size())
              resid[hit * static_cast<std::size_t>(q) + static_cast<std::size_t>(i)] -= w * g[i];
            else
              unmatched[static_cast<std::size_t>(i)] += w * g[i];
          }
        }
    for (int i = 0; i < q; ++i) {
      double s = unmatched[static_cast<std::size_t>(i)];
      for (std::size_t a = 0; a < e3.size(); ++a)
        s += std::abs(resid[a * static_cast<std::size_t>(q) + static_cast<std::size_t>(i)]);
      tv[static_cast<std::size_t>(i)] = 0.5 * s;
    }
    r.d_engine = discrepancy_of_atoms(e3, norm);
  } else {
    // Too many root classes to hold: stream the engine's product atoms and
    // pair each with the oracle atom of the same multiset of subtree classes.
    r.method = "split enumeration, streamed root";
    std::vector<AtomSet> mk(3, apply_channel(e2, m.matrix()));
    if (!match(mk[0], mh, map)) {
      r.tv = INFINITY;
      r.method = "subtree messages do not match";
      return r;
    }
    AtomSet chunk(q);
    std::size_t visited = 0;
    for_each_product_atom(std::span<const AtomSet>(mk), [&](std::span<const double> ge, double we,
                                                           std::span<const std::uint32_t> idx) {
      const double wo = oracle_atom(map[idx[0]], map[idx[1]], map[idx[2]], g);
      for (int i = 0; i < q; ++i)
        tv[static_cast<std::size_t>(i)] += 0.5 * std::abs(we * ge[static_cast<std::size_t>(i)] - wo * g[i]);
      r.d_oracle += wo * fd(g);
      chunk.add(ge, we);
      if (chunk.size() == (1u << 16)) {
        r.d_engine += discrepancy_of_atoms(chunk, norm);
        chunk = AtomSet(q);
      }
      ++visited;
    });
    r.d_engine += discrepancy_of_atoms(chunk, norm);
    r.atoms = visited;
  }
  for (double x : tv) r.tv = std::max(r.tv, x);
  return r;
}

Outcome oracle_equivalence() {
  Outcome o;
  o.pass = true;
  std::mt19937_64 rng(31337);
  for (int arity : {2, 3})
    for (int q : {2, 3})
      for (NoiseKind regime : {NoiseKind::ExtraSteps, NoiseKind::Mix, NoiseKind::Erasure}) {
        const Channel m = build_channel(oracle::random_stochastic(rng, q, q, 0.02));
        NoiseChannel n;
        if (regime == NoiseKind::ExtraSteps) n = power_noise(m, 1);
        if (regime == NoiseKind::Mix) n = mix_noise(oracle::random_probability(rng, q, 0.1), 0.3);
        if (regime == NoiseKind::Erasure) n = erasure_noise(q, 0.25);
        const ContractionNorm norm = build_contraction_norm(m, 0.5 * (1.0 + m.lambda2()));
        for (int depth = 0; depth <= 3; ++depth) {
          const CaseResult r = (arity == 3 && depth == 3) ? split_case(m, n, norm) : direct_case(m, n, arity, depth, norm);
          const bool ok = r.tv <= 1e-10 && d_agrees(r.d_engine, r.d_oracle);
          std::ostringstream s;
          s << "B=" << arity << " q=" << q << " " << to_string(regime) << " depth " << depth << ": " << r.atoms
            << " atoms, TV " << fmt("%.2e", r.tv) << ", D " << fmt("%.12g", r.d_engine) << " vs "
            << fmt("%.12g", r.d_oracle) << " (" << r.method << ")";
          o.pass &= o.expect(ok, s.str());
        }
      }
  return o;
}

// ---------------------------------------------------------------- criterion 3

Outcome binary_bsc() {
  Outcome o;
  o.pass = true;
  const Channel m = bsc(0.3);
  Certificate c = certify_bary(m, 2, NoiseKind::ExtraSteps);
  o.pass &= o.expect(c.threshold == 4, "k* = " + fmt("%g", c.threshold) + " (expected 4)");
  o.pass &= o.expect(std::abs(c.eps_slack() - 0.2576) < 5e-4, "eps_slack = " + fmt("%.6f", c.eps_slack()));
  o.pass &= o.expect(std::abs(c.decay_ratio - 0.742) < 5e-4, "ratio 1 - eps_slack = " + fmt("%.6f", c.decay_ratio));
  verify_decay(c, 4);
  for (int n = 0; n < 4; ++n) {
    const double a = c.decay_log[static_cast<std::size_t>(n)], b = c.decay_log[static_cast<std::size_t>(n + 1)];
    o.pass &= o.expect(b < a && b <= c.decay_ratio * a + 1e-10,
                       "D(" + std::to_string(n + 1) + ") = " + fmt("%.6g", b) + ", ratio " + fmt("%.4f", b / a));
  }
  const double tv0 = c.tv_log.front(), tv4 = c.tv_log.back();
  o.pass &= o.expect(tv4 * 2 <= tv0, "TV(4) = " + fmt("%.5g", tv4) + " vs TV(0) = " + fmt("%.5g", tv0) +
                                         ", factor " + fmt("%.2f", tv0 / tv4));

  Certificate mix = certify_bary(m, 2, NoiseKind::Mix, Vector::Constant(2, 0.5));
  o.pass &= o.expect(mix.threshold < 1, "mix eps* = " + fmt("%.8f", mix.threshold));
  verify_decay(mix, 4);
  o.pass &= o.expect(true, "mix decay verified to depth 4");
  Certificate er = certify_bary(m, 2, NoiseKind::Erasure);
  o.pass &= o.expect(er.threshold < 1, "erasure threshold = " + fmt("%.8f", er.threshold));
  verify_decay(er, 4);
  o.pass &= o.expect(true, "erasure decay verified on depths 1..4");
  for (const Certificate* cert : {&c, &mix, &er}) {
    const VerifyReport rep = verify_certificate(*cert);
    o.pass &= o.expect(rep.ok, std::string("verify_certificate ") + to_string(cert->regime));
  }
  return o;
}

// ---------------------------------------------------------------- criterion 4

Outcome monotonicity() {
  Outcome o;
  o.pass = true;
  std::mt19937_64 rng(99);
  std::vector<std::pair<std::string, Channel>> channels{{"bsc(0.3)", bsc(0.3)}, {"bsc(0.1)", bsc(0.1)},
                                                        {"qsym(3,0.3)", qsym(3, 0.3)}};
  for (int k = 0; k < 3; ++k)
    channels.emplace_back("random q=3 #" + std::to_string(k),
                          build_channel(oracle::random_stochastic(rng, 3, 3, 0.05)));
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  int checks = 0, violations = 0;
  for (const auto& [name, m] : channels) {
    const int q = m.q();
    auto tv_at = [&](const NoiseChannel& n) { return bary_levels(m, n, 2, 3).back(); };
    std::vector<AtomSet> by_k, by_mix, by_er;
    for (int k = 0; k <= 4; ++k) by_k.push_back(tv_at(power_noise(m, k)));
    for (double e : grid) by_mix.push_back(tv_at(mix_noise(Vector::Constant(q, 1.0 / q), e)));
    for (double e : grid) by_er.push_back(tv_at(erasure_noise(q, e)));
    for (const auto* seq : {&by_k, &by_mix, &by_er})
      for (std::size_t s = 0; s + 1 < seq->size(); ++s)
        for (int i = 0; i < q; ++i)
          for (int j = i + 1; j < q; ++j) {
            ++checks;
            if (atoms_tv((*seq)[s + 1], i, j) > atoms_tv((*seq)[s], i, j) + 1e-10) ++violations;
          }
    o.note(name + ": TV(k=0..4) " + fmt("%.4g", atoms_tv_max(by_k.front())) + " -> " +
           fmt("%.4g", atoms_tv_max(by_k.back())));
  }
  o.pass = o.expect(violations == 0,
                    std::to_string(checks) + " consecutive pairs, " + std::to_string(violations) + " violations");
  return o;
}

// ---------------------------------------------------------------- criteria 5 and 7

struct ContrastRun {
  McEstimate above_tv, below_tv;
  CensusResult census;
};

ContrastRun contrast_run(unsigned streams) {
  McOptions opts;
  opts.n_samples = 100'000;
  opts.seed = 2024;
  opts.streams = streams;
  const Tree t = build_tree(BAry{2, 8});
  const Antichain s = level_antichain(t, 8);
  ContrastRun r;
  const Channel hot = bsc(0.05);
  const NoiseChannel hot_noise = mix_noise(Vector::Constant(2, 0.5), 0.5);
  r.above_tv = tv_mc(t, hot, hot_noise, s, 0, 1, opts);
  r.census = census_separation(t, hot, hot_noise, 8, opts);
  const Channel cold = bsc(0.3);
  const Certificate c = certify_bary(cold, 2, NoiseKind::ExtraSteps);
  r.below_tv = tv_mc(t, cold, power_noise(cold, static_cast<int>(c.threshold)), s, 0, 1, opts);
  return r;
}

ContrastRun first_run;

Outcome above_threshold_contrast() {
  Outcome o;
  o.pass = true;
  first_run = contrast_run(1);
  const auto& r = first_run;
  o.note("BSC(0.05), B=2, B*lambda2^2 = 1.62, mix eps = 0.5, n = 8, 1e5 samples");
  o.pass &= o.expect(r.above_tv.mean - 3 * r.above_tv.std_error >= 0.05,
                     "tv_mc = " + fmt("%.5f", r.above_tv.mean) + " +- " + fmt("%.5f", r.above_tv.std_error) +
                         " (need mean - 3 se >= 0.05)");
  o.pass &= o.expect(r.census.z(0, 1) > 2, "census z = " + fmt("%.4f", r.census.z(0, 1)) + " (need > 2)");
  o.note("BSC(0.3), B=2, extra steps k = k* = 4, n = 8, 1e5 samples");
  o.pass &= o.expect(r.below_tv.mean + 3 * r.below_tv.std_error <= 0.02,
                     "tv_mc = " + fmt("%.5f", r.below_tv.mean) + " +- " + fmt("%.5f", r.below_tv.std_error) +
                         " (need mean + 3 se <= 0.02)");
  return o;
}

Outcome determinism() {
  Outcome o;
  o.pass = true;
  const ContrastRun again = contrast_run(1);
  auto same = [](const McEstimate& a, const McEstimate& b) { return a.mean == b.mean && a.std_error == b.std_error; };
  o.pass &= o.expect(same(first_run.above_tv, again.above_tv), "above-threshold tv_mc rerun bit-identical");
  o.pass &= o.expect(same(first_run.below_tv, again.below_tv), "below-threshold tv_mc rerun bit-identical");
  o.pass &= o.expect(first_run.census.z == again.census.z && first_run.census.mean == again.census.mean,
                     "census rerun bit-identical");
  const ContrastRun split = contrast_run(4);
  o.pass &= o.expect(same(first_run.above_tv, split.above_tv) && same(first_run.below_tv, split.below_tv) &&
                         first_run.census.z == split.census.z,
                     "4 streams give the same bits as 1 stream");
  McOptions mc;
  mc.n_samples = 20'000;
  mc.seed = 8;
  const Tree t = build_tree(BAry{2, 4});
  const auto rec1 = reconstruction_error_mc(t, bsc(0.2), identity_noise(2), level_antichain(t, 4), mc);
  const auto norm = build_contraction_norm(bsc(0.2), 0.7);
  const auto d1 = discrepancy_mc(t, bsc(0.2), identity_noise(2), level_antichain(t, 4), norm, mc);
  mc.streams = 3;
  const auto rec2 = reconstruction_error_mc(t, bsc(0.2), identity_noise(2), level_antichain(t, 4), mc);
  const auto d2 = discrepancy_mc(t, bsc(0.2), identity_noise(2), level_antichain(t, 4), norm, mc);
  o.pass &= o.expect(same(rec1, rec2) && same(d1, d2), "reconstruction and discrepancy estimators bit-identical");
  return o;
}

// ---------------------------------------------------------------- criterion 6

Tree pruned_binary() {
  // Binary depth 4 with the subtree of the last depth-2 node removed.
  const auto full = oracle::bary_parents(2, 4);
  std::vector<int> id(full.size(), -1), parents;
  for (std::size_t x = 0; x < full.size(); ++x) {
    int y = static_cast<int>(x);
    bool gone = false;
    for (; y >= 0; y = full[static_cast<std::size_t>(y)]) gone |= (y == 6);
    if (gone) continue;
    id[x] = static_cast<int>(parents.size());
    parents.push_back(full[x] < 0 ? -1 : id[static_cast<std::size_t>(full[x])]);
  }
  return build_tree(Explicit{parents});
}

Outcome finite_tree() {
  Outcome o;
  o.pass = true;
  const Channel m = bsc(0.3);
  const Tree t = pruned_binary();
  const double lambda_sq = m.lambda2() * m.lambda2();
  const double g = 1.0 / lambda_sq - 0.25;
  const double eps29 = 0.05;
  o.note("tree: " + std::to_string(t.size()) + " nodes, depth " + std::to_string(t.max_depth()) + ", g = " +
         fmt("%.4f", g));
  const AntichainMinimum dp = min_antichain_sum(t, g);
  const double sum29 = cutset_sum(t, dp.antichain, g);
  const double local30 = max_local_cutset_sum(t, dp.antichain, g);
  o.pass &= o.expect(sum29 <= eps29, "cutset sum g^-|x| = " + fmt("%.6g", sum29) + " <= " + fmt("%g", eps29));
  // Members of S contribute exactly 1 to their own local sum; allow rounding.
  o.pass &= o.expect(local30 <= 1.0 + 1e-12, "max local cutset sum = " + fmt("%.17g", local30) + " <= 1");
  o.note("antichain: " + std::to_string(dp.antichain.members.size()) + " nodes");
  for (NoiseKind regime : {NoiseKind::ExtraSteps, NoiseKind::Mix}) {
    const Certificate c = certify_finite_tree(m, t, {dp.antichain}, regime, g,
                                              regime == NoiseKind::Mix ? Vector::Constant(2, 0.5) : Vector{});
    int ok = 0, total = 0;
    double worst = 0.0;
    for (const auto& nc : c.antichains[0].checks) {
      ++total;
      ok += nc.ok && nc.d <= nc.bound * (1 + 1e-12);
      worst = std::max(worst, nc.d / nc.bound);
    }
    o.pass &= o.expect(ok == total && total > 0, std::string(to_string(regime)) + " threshold " +
                                                     fmt("%.6g", c.threshold) + ": " + std::to_string(ok) + "/" +
                                                     std::to_string(total) + " node checks, worst D/bound " +
                                                     fmt("%.4g", worst));
    o.pass &= o.expect(verify_certificate(c).ok, std::string("finite-tree certificate re-verifies (") +
                                                     to_string(regime) + ")");
  }
  return o;
}

}  // namespace

int main() {
  // TREECAST_ACCEPTANCE_ONLY=2,5 runs a subset (for development).
  const char* only = std::getenv("TREECAST_ACCEPTANCE_ONLY");
  auto run_criterion = [&](int id, const std::string& title, double budget, const std::function<Outcome()>& body) {
    if (only && std::string(only).find(std::to_string(id)) == std::string::npos) return 0;
    return ::run_criterion(id, title, budget, body);
  };
  int failures = 0;
  failures += run_criterion(1, "randomized inequality suites", 60, property_suites);
  failures += run_criterion(2, "atom engine vs brute enumeration", 120, oracle_equivalence);
  failures += run_criterion(3, "binary tree under BSC(0.3)", 300, binary_bsc);
  failures += run_criterion(4, "monotone TV in k, eps and erasure", 120, monotonicity);
  failures += run_criterion(5, "above-threshold contrast", 300, above_threshold_contrast);
  failures += run_criterion(6, "finite irregular tree", 300, finite_tree);
  failures += run_criterion(7, "Monte Carlo determinism", 600, determinism);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
