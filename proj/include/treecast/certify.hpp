#pragma once

#include "treecast/channels.hpp"
#include "treecast/discrepancy.hpp"
#include "treecast/exact.hpp"
#include "treecast/trees.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace treecast {

/// Slack eps and contraction factor alpha with growth * (1 + eps) * alpha^2 <= 1 - eps.
struct SlackChoice {
  double eps_max = 0.0;  // largest eps feasible with alpha = |lambda_2|
  double eps_slack = 0.0;
  double alpha = 0.0;
};

/// eps_max solves growth (1 + eps) lambda^2 = 1 - eps; eps_slack = eps_max / 2
/// and alpha = lambda (1 + eps_slack / 4), pulled towards lambda if needed.
/// Throws AboveThreshold when growth * lambda^2 >= 1 - 1e-12.
SlackChoice choose_slack(double lambda2, double growth);

struct CertifyOptions {
  EngineOptions engine;
  /// Value returned by the tensorization threshold when the arity is 1.
  double delta_cap = 1.0;
  int kstar_cap = 100'000;
};

/// One node check: D at y against delta * sum r^{|x|-|y|}.
struct NodeCheck {
  int node = 0;
  int depth = 0;
  double d = 0.0;
  double bound = 0.0;
  bool ok = false;
};

struct AntichainRecord {
  std::vector<int> members;
  double cutset_sum = 0.0;     // sum g^{-|x|}
  double max_local_sum = 0.0;  // worst local sum at g
  std::vector<NodeCheck> checks;
};

enum class CertificateKind { Bary, FiniteTree };

struct Certificate {
  static constexpr int kVersion = 1;

  CertificateKind kind = CertificateKind::Bary;
  Matrix m;
  std::string channel_hash;
  double lambda2 = 0.0;
  int arity = 0;        // B, or the degree bound K of a finite tree
  double growth = 0.0;  // B, or the branching bound g
  ContractionNorm norm;
  DiscrepancyConstants constants;
  double delta = 0.0;       // tensorization threshold at `arity`
  double leaf_delta = 0.0;  // target for the observed nodes (delta / (arity (1 + eps)) for erasure)
  NoiseKind regime = NoiseKind::ExtraSteps;
  Vector nu;                // mix reference measure
  double threshold = 0.0;   // k* (integer valued), eps* or the erasure threshold
  double decay_ratio = 0.0;

  // [decay-log]
  int first_level = 0;
  std::vector<double> decay_log;
  std::vector<double> tv_log;

  // Finite trees.
  std::vector<int> tree_parents;
  std::string tree_hash;
  std::string definition;  // "level antichains" or "all antichains"
  std::vector<AntichainRecord> antichains;

  double eps_slack() const noexcept { return norm.eps_slack; }
  double alpha() const noexcept { return norm.alpha; }
  Channel channel() const { return Channel::build(m); }
  /// Leaf noise at the certified threshold.
  NoiseChannel noise() const;
};

Certificate certify_bary(const Channel& channel, int arity, NoiseKind regime, const Vector& nu = {},
                         const CertifyOptions& opts = {});

/// Smallest r >= 1 with D(rows of M^r) <= delta.
int kstar(const Channel& channel, const ContractionNorm& norm, double delta, int cap = 100'000);

/// Smallest mix weight at which the one-step mix bound drops to delta.
double epsstar_mix(const Channel& channel, const Vector& nu, const ContractionNorm& norm, double delta);

/// 1 - delta / (sum|t| (q^2 / m - 1)) with m the smallest entry of M, floored at 0.
double epsstar_erasure(const Channel& channel, const ContractionNorm& norm, double delta);

/// Computes D(mu^n) at the threshold noise for n = 0..depth on the B-ary tree,
/// stores the log in `cert` and checks every ratio against 1 - eps_slack.
/// Erasure logs start at level 1 because D(mu^0) is infinite there.
void verify_decay(Certificate& cert, int depth, const EngineOptions& opts = {});

/// Checks the per-node discrepancy bound for every provided antichain of a
/// finite tree. Throws BoundViolation if any node fails.
Certificate certify_finite_tree(const Channel& channel, const Tree& tree, const std::vector<Antichain>& antichains,
                                NoiseKind regime, double growth, const Vector& nu = {},
                                const CertifyOptions& opts = {});

/// The node checks of one antichain under a certificate's constants and noise.
AntichainRecord check_antichain(const Certificate& cert, const Tree& tree, const Antichain& s,
                                const EngineOptions& opts = {});

struct VerifyReport {
  bool ok = true;
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::string> notes;

  void record(const std::string& name, bool pass, const std::string& note = {});
};

/// Re-derives every stored quantity from the certificate's own data.
VerifyReport verify_certificate(const Certificate& cert, const EngineOptions& opts = {});

void write_certificate(std::ostream& out, const Certificate& cert);
Certificate read_certificate(std::istream& in);

/// Smallest noise level at which the decay check passes to `depth`. This is
/// a measurement, not a certificate.
struct Tightening {
  NoiseKind regime = NoiseKind::ExtraSteps;
  double value = 0.0;
  int depth = 0;
  bool certified = false;
  std::string label = "empirical, not certified";
};

Tightening empirical_tightening(const Certificate& cert, int depth, const EngineOptions& opts = {});

}  // namespace treecast
