#include "treecast/certify.hpp"

#include "treecast/error.hpp"
#include "treecast/io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace treecast {
namespace {

constexpr double kRatioSlack = 1e-10;

bool close_rel(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

bool close_rel(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() <= tol * std::max(scale, 1e-300);
}

void check_regime(NoiseKind regime, const Channel& channel, const Vector& nu) {
  if (regime == NoiseKind::Custom) throw InvalidArgument("certificates cover extra-steps, mix and erasure noise");
  if (regime == NoiseKind::Erasure && channel.min_entry() <= 0.0)
    throw ZeroEntry("erasure certificates need every entry of M to be positive");
  if (regime == NoiseKind::Mix) {
    if (nu.size() != channel.q()) throw InvalidArgument("mix reference measure has the wrong length");
    if (nu.minCoeff() <= 0.0) throw DegenerateNu("mix reference measure has a zero entry");
  }
}

double threshold_for(const Certificate& c, const Channel& channel, int kstar_cap) {
  switch (c.regime) {
    case NoiseKind::ExtraSteps:
      return kstar(channel, c.norm, c.leaf_delta, kstar_cap);
    case NoiseKind::Mix:
      return epsstar_mix(channel, c.nu, c.norm, c.leaf_delta);
    case NoiseKind::Erasure:
      return epsstar_erasure(channel, c.norm, c.leaf_delta);
    default:
      throw InvalidArgument("unsupported regime");
  }
}

// Constants, deltas and the threshold shared by both certificate kinds.
void fill_constants(Certificate& c, const Channel& channel, const CertifyOptions& opts) {
  const SlackChoice slack = choose_slack(c.lambda2, c.growth);
  c.norm = build_contraction_norm(channel, slack.alpha, slack.eps_slack);
  c.constants = moment_constant(c.norm);
  c.delta = tensorization_delta(c.arity, slack.eps_slack, c.constants.c, c.constants.c_tilde, opts.delta_cap);
  c.leaf_delta = c.regime == NoiseKind::Erasure ? c.delta / (c.arity * (1.0 + slack.eps_slack)) : c.delta;
  c.threshold = threshold_for(c, channel, opts.kstar_cap);
  c.decay_ratio = 1.0 - slack.eps_slack;
}

struct DecayLog {
  std::vector<double> d;
  std::vector<double> tv;
};

DecayLog compute_decay(const Certificate& cert, int depth, const EngineOptions& opts) {
  const Channel channel = cert.channel();
  const auto levels = bary_levels(channel, cert.noise(), cert.arity, depth, opts);
  DecayLog log;
  for (const auto& level : levels) {
    log.d.push_back(discrepancy_of_atoms(level, cert.norm));
    log.tv.push_back(atoms_tv_max(level));
  }
  return log;
}

Antichain children_of(const Tree& tree, const Antichain& s) {
  std::vector<int> kids;
  for (int x : s.members) {
    if (tree.children(x).empty())
      throw InvalidArgument("erasure checks need every antichain member to have children");
    for (int c : tree.children(x)) kids.push_back(c);
  }
  return validate_antichain(tree, kids);
}

std::string tree_hash_of(const std::vector<int>& parents) { return hex64(fnv1a64(format_ints(parents))); }

}  // namespace

SlackChoice choose_slack(double lambda2, double growth) {
  if (!(growth > 0.0)) throw InvalidArgument("growth factor must be positive");
  const double gl = growth * lambda2 * lambda2;
  if (!(gl < 1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "growth * lambda2^2 = " << gl << " is not below 1";
    throw AboveThreshold(msg.str());
  }
  SlackChoice s;
  s.eps_max = (1.0 - gl) / (1.0 + gl);
  s.eps_slack = 0.5 * s.eps_max;
  const double eps = s.eps_slack;
  auto feasible = [&](double a) { return growth * (1.0 + eps) * a * a <= 1.0 - eps; };
  double alpha = lambda2 > 0.0 ? lambda2 * (1.0 + eps / 4.0) : 0.5 * std::sqrt((1.0 - eps) / (growth * (1.0 + eps)));
  for (int guard = 0; guard < 200 && !feasible(alpha); ++guard) alpha = 0.5 * (alpha + lambda2);
  if (!feasible(alpha) || !(alpha > lambda2)) throw AboveThreshold("no contraction factor satisfies the slack inequality");
  s.alpha = alpha;
  return s;
}

NoiseChannel Certificate::noise() const {
  switch (regime) {
    case NoiseKind::ExtraSteps:
      return power_noise(channel(), static_cast<int>(threshold));
    case NoiseKind::Mix:
      return mix_noise(nu, threshold);
    case NoiseKind::Erasure:
      return erasure_noise(static_cast<int>(m.rows()), threshold);
    default:
      throw InvalidArgument("certificate has no noise regime");
  }
}

int kstar(const Channel& channel, const ContractionNorm& norm, double delta, int cap) {
  if (!channel.ergodic()) throw NonErgodic("k* needs an ergodic chain");
  NoiseChannel rows;
  rows.kind = NoiseKind::ExtraSteps;
  rows.n = channel.matrix();
  for (int r = 1; r <= cap; ++r) {
    rows.steps = r;
    if (discrepancy_of_atoms(leaf_atoms(rows), norm) <= delta) return r;
    rows.n = rows.n * channel.matrix();
  }
  throw NotFoundWithinCap("no power of M reaches the discrepancy target within the cap");
}

double epsstar_mix(const Channel& channel, const Vector& nu, const ContractionNorm& norm, double delta) {
  if (nu.size() != channel.q()) throw InvalidArgument("nu has the wrong length");
  if (nu.minCoeff() < 0.0 || std::abs(nu.sum() - 1.0) > kStochasticTol)
    throw InvalidArgument("nu must be a probability vector");
  const double m = nu.minCoeff();
  if (m <= 0.0) throw DegenerateNu("nu has a zero entry");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  // ((a e + 1/m)^2 / e - 1) sum|t| <= delta with a = 1 - 1/m, as a quadratic in e.
  const double c = delta / norm.sum_abs_t;
  const double a = 1.0 - 1.0 / m;
  const double qa = a * a, qb = 2.0 * a / m - (1.0 + c), qc = 1.0 / (m * m);
  const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
  const double root = 2.0 * qc / (-qb + std::sqrt(disc));
  return std::max(0.0, root);
}

double epsstar_erasure(const Channel& channel, const ContractionNorm& norm, double delta) {
  const double m = channel.min_entry();
  if (m <= 0.0) throw ZeroEntry("M has a zero entry");
  const double q = channel.q();
  const double denom = norm.sum_abs_t * (q * q / m - 1.0);
  return std::max(0.0, 1.0 - delta / denom);
}

Certificate certify_bary(const Channel& channel, int arity, NoiseKind regime, const Vector& nu,
                         const CertifyOptions& opts) {
  if (arity < 1) throw InvalidArgument("arity must be at least 1");
  if (!channel.ergodic()) throw NonErgodic("certificates need an ergodic chain");
  Certificate c;
  c.kind = CertificateKind::Bary;
  c.m = channel.matrix();
  c.channel_hash = matrix_hash(c.m);
  c.lambda2 = channel.lambda2();
  c.arity = arity;
  c.growth = arity;
  c.regime = regime;
  if (regime == NoiseKind::Mix) c.nu = nu;
  // Threshold first, so AboveThreshold wins over regime errors.
  choose_slack(c.lambda2, c.growth);
  check_regime(regime, channel, nu);
  fill_constants(c, channel, opts);
  c.definition = "level antichains";
  return c;
}

void verify_decay(Certificate& cert, int depth, const EngineOptions& opts) {
  if (cert.kind != CertificateKind::Bary) throw InvalidArgument("decay logs are defined for b-ary certificates");
  const double eps = cert.eps_slack();
  if (!(cert.growth * (1.0 + eps) * cert.alpha() * cert.alpha() <= 1.0 - eps) || !(eps > 0.0))
    throw AboveThreshold("certificate does not satisfy the slack inequality");
  const int first = cert.regime == NoiseKind::Erasure ? 1 : 0;
  if (depth < first + 1) throw InvalidArgument("decay check needs at least one ratio");
  const DecayLog log = compute_decay(cert, depth, opts);
  cert.first_level = first;
  cert.decay_log = log.d;
  cert.tv_log = log.tv;
  if (!(log.d[static_cast<std::size_t>(first)] <= cert.delta)) {
    std::ostringstream msg;
    msg << "D at level " << first << " is " << log.d[static_cast<std::size_t>(first)] << ", above delta "
        << cert.delta;
    throw BoundViolation(msg.str());
  }
  for (int n = first; n < depth; ++n) {
    const double now = log.d[static_cast<std::size_t>(n)], next = log.d[static_cast<std::size_t>(n + 1)];
    if (!(next <= cert.decay_ratio * now + kRatioSlack)) {
      std::ostringstream msg;
      msg << "D(level " << n + 1 << ") = " << next << " exceeds " << cert.decay_ratio << " * D(level " << n
          << ") = " << cert.decay_ratio * now;
      throw RatioViolation(msg.str());
    }
  }
}

AntichainRecord check_antichain(const Certificate& cert, const Tree& tree, const Antichain& s,
                                const EngineOptions& opts) {
  const Channel channel = cert.channel();
  const Antichain observed = cert.regime == NoiseKind::Erasure ? children_of(tree, s) : s;
  const auto atoms = antichain_node_atoms(tree, channel, cert.noise(), observed, opts);
  const double r = (1.0 + cert.eps_slack()) * cert.alpha() * cert.alpha();
  std::vector<double> sums(tree.size(), 0.0);
  for (int x : s.members)
    for (int a = x; a >= 0; a = tree.parent(a)) sums[static_cast<std::size_t>(a)] += std::pow(r, tree.depth(x) - tree.depth(a));
  AntichainRecord rec;
  rec.members = s.members;
  rec.cutset_sum = cutset_sum(tree, s, cert.growth);
  rec.max_local_sum = max_local_cutset_sum(tree, s, cert.growth);
  std::vector<int> nodes = s.members;
  nodes.insert(nodes.end(), s.inside.begin(), s.inside.end());
  std::sort(nodes.begin(), nodes.end());
  for (int y : nodes) {
    NodeCheck nc;
    nc.node = y;
    nc.depth = tree.depth(y);
    nc.d = discrepancy_of_atoms(atoms.at(y), cert.norm);
    nc.bound = cert.delta * sums[static_cast<std::size_t>(y)];
    nc.ok = nc.d <= nc.bound * (1.0 + 1e-12);
    rec.checks.push_back(nc);
  }
  return rec;
}

Certificate certify_finite_tree(const Channel& channel, const Tree& tree, const std::vector<Antichain>& antichains,
                                NoiseKind regime, double growth, const Vector& nu, const CertifyOptions& opts) {
  if (!channel.ergodic()) throw NonErgodic("certificates need an ergodic chain");
  if (!(growth > 1.0)) throw InvalidArgument("branching bound g must exceed 1");
  if (antichains.empty()) throw InvalidArgument("no antichains to check");
  Certificate c;
  c.kind = CertificateKind::FiniteTree;
  c.m = channel.matrix();
  c.channel_hash = matrix_hash(c.m);
  c.lambda2 = channel.lambda2();
  c.arity = std::max(1, tree.max_children());
  c.growth = growth;
  c.regime = regime;
  if (regime == NoiseKind::Mix) c.nu = nu;
  choose_slack(c.lambda2, c.growth);
  check_regime(regime, channel, nu);
  fill_constants(c, channel, opts);
  c.tree_parents = tree.parents();
  c.tree_hash = tree_hash_of(c.tree_parents);
  c.definition = "all antichains";
  for (const auto& s : antichains) {
    c.antichains.push_back(check_antichain(c, tree, s, opts.engine));
    for (const auto& nc : c.antichains.back().checks)
      if (!nc.ok) {
        std::ostringstream msg;
        msg << "node " << nc.node << " (depth " << nc.depth << "): D = " << nc.d << " exceeds " << nc.bound;
        throw BoundViolation(msg.str());
      }
  }
  return c;
}

void VerifyReport::record(const std::string& name, bool pass, const std::string& note) {
  checks.emplace_back(name, pass);
  ok = ok && pass;
  if (!note.empty()) notes.push_back(name + ": " + note);
}

VerifyReport verify_certificate(const Certificate& cert, const EngineOptions& opts) {
  VerifyReport rep;
  constexpr double tol = 1e-9;
  Channel channel;
  try {
    channel = Channel::build(cert.m);
    rep.record("channel.stochastic", true);
  } catch (const Error& e) {
    rep.record("channel.stochastic", false, e.what());
    return rep;
  }
  rep.record("channel.hash", matrix_hash(cert.m) == cert.channel_hash);
  rep.record("channel.ergodic", channel.ergodic());
  if (!channel.ergodic()) return rep;
  rep.record("channel.lambda2", std::abs(channel.lambda2() - cert.lambda2) <= tol);

  const ContractionNorm& n = cert.norm;
  const int q = channel.q();
  const Matrix& u = n.basis;
  const bool shapes = u.rows() == q && u.cols() == q - 1 && n.gram.rows() == q - 1 && n.gram.cols() == q - 1 &&
                      n.v.size() == q;
  rep.record("norm.shapes", shapes);
  if (!shapes) return rep;
  rep.record("norm.stationary", (n.v - channel.stationary()).cwiseAbs().maxCoeff() <= 1e-10);
  rep.record("norm.basis",
             (u.transpose() * u - Matrix::Identity(q - 1, q - 1)).cwiseAbs().maxCoeff() <= 1e-10 &&
                 (u.transpose() * n.v).cwiseAbs().maxCoeff() <= 1e-10);
  rep.record("norm.positive_definite", Eigen::LLT<Matrix>(n.gram).info() == Eigen::Success &&
                                           (n.gram - n.gram.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const double margin = contraction_margin(cert.m, n);
  rep.record("norm.contraction", margin >= -1e-12, "margin " + format_double(margin));
  const double eps = n.eps_slack;
  rep.record("slack.inequality", eps > 0.0 && cert.growth * (1.0 + eps) * n.alpha * n.alpha <= 1.0 - eps);

  ContractionNorm fresh;
  try {
    fresh = contraction_norm_from_gram(n.v, u, n.gram, n.alpha, eps);
  } catch (const Error& e) {
    rep.record("constants.rebuild", false, e.what());
    return rep;
  }
  rep.record("constants.t", close_rel(fresh.t, n.t, tol) && close_rel(fresh.sum_abs_t, n.sum_abs_t, tol));
  const DiscrepancyConstants dc = moment_constant(fresh);
  rep.record("constants.C", close_rel(dc.c, cert.constants.c, tol) &&
                                close_rel(dc.c_tilde, cert.constants.c_tilde, tol) &&
                                close_rel(dc.c_pairs, cert.constants.c_pairs, tol));
  const double delta = tensorization_delta(cert.arity, eps, dc.c, dc.c_tilde, cert.delta);
  rep.record("constants.delta", close_rel(delta, cert.delta, tol));
  const double leaf_delta =
      cert.regime == NoiseKind::Erasure ? cert.delta / (cert.arity * (1.0 + eps)) : cert.delta;
  rep.record("constants.leaf_delta", close_rel(leaf_delta, cert.leaf_delta, tol));
  rep.record("threshold.ratio", close_rel(cert.decay_ratio, 1.0 - eps, 1e-15));

  try {
    Certificate probe = cert;
    probe.norm = fresh;
    const double t = threshold_for(probe, channel, 100'000);
    const bool same = cert.regime == NoiseKind::ExtraSteps ? t == cert.threshold : close_rel(t, cert.threshold, tol);
    rep.record("threshold.value", same && (cert.regime == NoiseKind::ExtraSteps || cert.threshold < 1.0),
               "recomputed " + format_double(t));
  } catch (const Error& e) {
    rep.record("threshold.value", false, e.what());
  }

  if (!cert.decay_log.empty()) {
    try {
      const int depth = static_cast<int>(cert.decay_log.size()) - 1;
      const DecayLog log = compute_decay(cert, depth, opts);
      bool match = log.d.size() == cert.decay_log.size();
      for (std::size_t i = 0; match && i < log.d.size(); ++i)
        match = close_rel(log.d[i], cert.decay_log[i], tol) &&
                (cert.tv_log.empty() || close_rel(log.tv[i], cert.tv_log[i], tol));
      rep.record("decay.recomputed", match);
      const auto first = static_cast<std::size_t>(cert.first_level);
      bool ratios = first < log.d.size() && log.d[first] <= cert.delta;
      for (std::size_t i = first; ratios && i + 1 < log.d.size(); ++i)
        ratios = log.d[i + 1] <= cert.decay_ratio * log.d[i] + kRatioSlack;
      rep.record("decay.ratios", ratios);
    } catch (const Error& e) {
      rep.record("decay.recomputed", false, e.what());
    }
  }

  if (cert.kind == CertificateKind::FiniteTree) {
    try {
      const Tree tree = Tree::from_parents(cert.tree_parents);
      rep.record("tree.hash", tree_hash_of(cert.tree_parents) == cert.tree_hash);
      rep.record("tree.degree", std::max(1, tree.max_children()) == cert.arity);
      bool all = !cert.antichains.empty();
      for (const auto& stored : cert.antichains) {
        const Antichain s = validate_antichain(tree, stored.members);
        const AntichainRecord rec = check_antichain(cert, tree, s, opts);
        bool same = rec.checks.size() == stored.checks.size();
        for (std::size_t i = 0; same && i < rec.checks.size(); ++i)
          same = rec.checks[i].node == stored.checks[i].node && close_rel(rec.checks[i].d, stored.checks[i].d, tol) &&
                 rec.checks[i].ok;
        all = all && same;
      }
      rep.record("tree.node_checks", all);
    } catch (const Error& e) {
      rep.record("tree.node_checks", false, e.what());
    }
  }
  return rep;
}

void write_certificate(std::ostream& out, const Certificate& c) {
  const bool finite = c.kind == CertificateKind::FiniteTree;
  auto vec = [](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_double(xs[i]);
    return s;
  };
  out << "# treecast certificate\n";
  out << "version = " << Certificate::kVersion << "\n";
  out << "kind = " << (finite ? "finite-tree" : "bary") << "\n";
  out << "\n[channel]\n";
  out << "q = " << c.m.rows() << "\n";
  out << "matrix = " << format_matrix(c.m) << "\n";
  out << "hash = " << c.channel_hash << "\n";
  out << "lambda2 = " << format_double(c.lambda2) << "\n";
  out << "stationary = " << format_vector(c.norm.v) << "\n";
  out << "\n[norm]\n";
  out << "alpha = " << format_double(c.norm.alpha) << "\n";
  out << "eps_slack = " << format_double(c.norm.eps_slack) << "\n";
  out << "series_terms = " << c.norm.series_terms << "\n";
  out << "basis = " << format_matrix(c.norm.basis) << "\n";
  out << "gram = " << format_matrix(c.norm.gram) << "\n";
  out << "\n[constants]\n";
  out << "t = " << format_matrix(c.norm.t) << "\n";
  out << "sum_abs_t = " << format_double(c.norm.sum_abs_t) << "\n";
  out << "c_pairs = " << format_matrix(c.constants.c_pairs) << "\n";
  out << "C = " << format_double(c.constants.c) << "\n";
  out << "C_tilde = " << format_double(c.constants.c_tilde) << "\n";
  out << "delta = " << format_double(c.delta) << "\n";
  out << "leaf_delta = " << format_double(c.leaf_delta) << "\n";
  out << "\n[threshold]\n";
  out << "arity = " << c.arity << "\n";
  out << "growth = " << format_double(c.growth) << "\n";
  out << "regime = " << to_string(c.regime) << "\n";
  if (c.regime == NoiseKind::Mix) out << "nu = " << format_vector(c.nu) << "\n";
  out << "value = " << format_double(c.threshold) << "\n";
  out << "decay_ratio = " << format_double(c.decay_ratio) << "\n";
  out << "definition = " << c.definition << "\n";
  if (finite) {
    out << "\n[tree]\n";
    out << "hash = " << c.tree_hash << "\n";
    out << "parents = " << format_ints(c.tree_parents) << "\n";
    out << "\n[antichains]\n";
    out << "count = " << c.antichains.size() << "\n";
    for (std::size_t i = 0; i < c.antichains.size(); ++i) {
      const auto& a = c.antichains[i];
      const std::string p = "S" + std::to_string(i) + ".";
      std::vector<int> nodes, depths;
      std::vector<double> d, bound;
      for (const auto& nc : a.checks) {
        nodes.push_back(nc.node);
        depths.push_back(nc.depth);
        d.push_back(nc.d);
        bound.push_back(nc.bound);
      }
      out << p << "members = " << format_ints(a.members) << "\n";
      out << p << "cutset_sum = " << format_double(a.cutset_sum) << "\n";
      out << p << "max_local_sum = " << format_double(a.max_local_sum) << "\n";
      out << p << "nodes = " << format_ints(nodes) << "\n";
      out << p << "depths = " << format_ints(depths) << "\n";
      out << p << "D = " << vec(d) << "\n";
      out << p << "bound = " << vec(bound) << "\n";
    }
  }
  out << "\n[decay-log]\n";
  out << "first_level = " << c.first_level << "\n";
  out << "D = " << vec(c.decay_log) << "\n";
  out << "tv = " << vec(c.tv_log) << "\n";
}

Certificate read_certificate(std::istream& in) {
  std::map<std::pair<std::string, std::string>, std::string> kv;
  for (const auto& e : parse_ini(in)) kv[{e.section, e.key}] = e.value;
  auto get = [&](const std::string& sec, const std::string& key) -> const std::string& {
    const auto it = kv.find({sec, key});
    if (it == kv.end()) throw ParseError("certificate is missing " + (sec.empty() ? key : sec + "." + key));
    return it->second;
  };
  auto doubles = [](const std::string& s) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (const auto& p : split(s, ',')) out.push_back(parse_double(p));
    return out;
  };
  if (parse_int(get("", "version")) != Certificate::kVersion) throw ParseError("unsupported certificate version");
  Certificate c;
  const std::string kind = get("", "kind");
  if (kind == "bary") {
    c.kind = CertificateKind::Bary;
  } else if (kind == "finite-tree") {
    c.kind = CertificateKind::FiniteTree;
  } else {
    throw ParseError("unknown certificate kind '" + kind + "'");
  }
  c.m = parse_matrix(get("channel", "matrix"));
  c.channel_hash = get("channel", "hash");
  c.lambda2 = parse_double(get("channel", "lambda2"));
  const Vector v = parse_vector(get("channel", "stationary"));
  const Matrix basis = parse_matrix(get("norm", "basis"));
  const Matrix gram = parse_matrix(get("norm", "gram"));
  c.norm.v = v;
  c.norm.basis = basis;
  c.norm.gram = gram;
  c.norm.alpha = parse_double(get("norm", "alpha"));
  c.norm.eps_slack = parse_double(get("norm", "eps_slack"));
  c.norm.series_terms = parse_int(get("norm", "series_terms"));
  c.norm.t = parse_matrix(get("constants", "t"));
  c.norm.sum_abs_t = parse_double(get("constants", "sum_abs_t"));
  c.constants.c_pairs = parse_matrix(get("constants", "c_pairs"));
  c.constants.c = parse_double(get("constants", "C"));
  c.constants.c_tilde = parse_double(get("constants", "C_tilde"));
  c.delta = parse_double(get("constants", "delta"));
  c.leaf_delta = parse_double(get("constants", "leaf_delta"));
  c.arity = static_cast<int>(parse_int(get("threshold", "arity")));
  c.growth = parse_double(get("threshold", "growth"));
  const std::string regime = get("threshold", "regime");
  if (regime == "extra-steps") {
    c.regime = NoiseKind::ExtraSteps;
  } else if (regime == "mix") {
    c.regime = NoiseKind::Mix;
    c.nu = parse_vector(get("threshold", "nu"));
  } else if (regime == "erasure") {
    c.regime = NoiseKind::Erasure;
  } else {
    throw ParseError("unknown regime '" + regime + "'");
  }
  c.threshold = parse_double(get("threshold", "value"));
  c.decay_ratio = parse_double(get("threshold", "decay_ratio"));
  c.definition = get("threshold", "definition");
  if (c.kind == CertificateKind::FiniteTree) {
    c.tree_hash = get("tree", "hash");
    c.tree_parents = parse_ints(get("tree", "parents"));
    const auto count = parse_int(get("antichains", "count"));
    for (long long i = 0; i < count; ++i) {
      const std::string p = "S" + std::to_string(i) + ".";
      AntichainRecord a;
      a.members = parse_ints(get("antichains", p + "members"));
      a.cutset_sum = parse_double(get("antichains", p + "cutset_sum"));
      a.max_local_sum = parse_double(get("antichains", p + "max_local_sum"));
      const auto nodes = parse_ints(get("antichains", p + "nodes"));
      const auto depths = parse_ints(get("antichains", p + "depths"));
      const auto d = doubles(get("antichains", p + "D"));
      const auto bound = doubles(get("antichains", p + "bound"));
      if (depths.size() != nodes.size() || d.size() != nodes.size() || bound.size() != nodes.size())
        throw ParseError("antichain " + std::to_string(i) + " has ragged check lists");
      for (std::size_t k = 0; k < nodes.size(); ++k)
        a.checks.push_back({nodes[k], depths[k], d[k], bound[k], d[k] <= bound[k] * (1.0 + 1e-12)});
      c.antichains.push_back(std::move(a));
    }
  }
  c.first_level = static_cast<int>(parse_int(get("decay-log", "first_level")));
  c.decay_log = doubles(get("decay-log", "D"));
  c.tv_log = doubles(get("decay-log", "tv"));
  return c;
}

Tightening empirical_tightening(const Certificate& cert, int depth, const EngineOptions& opts) {
  Tightening t;
  t.regime = cert.regime;
  t.depth = depth;
  const int first = cert.regime == NoiseKind::Erasure ? 1 : 0;
  auto passes = [&](double level) {
    Certificate probe = cert;
    probe.threshold = level;
    try {
      const DecayLog log = compute_decay(probe, depth, opts);
      if (!(log.d[static_cast<std::size_t>(first)] <= cert.delta)) return false;
      for (int n = first; n < depth; ++n)
        if (!(log.d[static_cast<std::size_t>(n + 1)] <= cert.decay_ratio * log.d[static_cast<std::size_t>(n)] + kRatioSlack))
          return false;
      return true;
    } catch (const AtomBudgetExceeded&) {
      return false;
    }
  };
  if (cert.regime == NoiseKind::ExtraSteps) {
    t.value = cert.threshold;
    for (int k = 1; k < static_cast<int>(cert.threshold); ++k)
      if (passes(k)) {
        t.value = k;
        break;
      }
    return t;
  }
  // Bisection assumes the check is monotone in the noise level, which is
  // what makes the result a measurement rather than a bound.
  double lo = 0.0, hi = cert.threshold;
  if (passes(lo)) {
    t.value = lo;
    return t;
  }
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? hi : lo) = mid;
  }
  t.value = hi;
  return t;
}

}  // namespace treecast
