#include "treecast/cli.hpp"

#include "treecast/certify.hpp"
#include "treecast/discrepancy.hpp"
#include "treecast/error.hpp"
#include "treecast/exact.hpp"
#include "treecast/inference.hpp"
#include "treecast/io.hpp"
#include "treecast/rng.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <regex>
#include <set>
#include <sstream>

namespace treecast {
namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"run", {"seed", "streams", "out", "budget"}},
      {"channel", {"preset", "matrix"}},
      {"tree", {"type", "arity", "depth", "parents", "parents_file", "pattern"}},
      {"noise", {"regime", "k", "eps", "nu", "matrix"}},
      {"certify", {"regime", "nu", "depth", "growth", "antichains", "tighten"}},
      {"verify", {"file"}},
      {"exact", {"depths", "alpha", "lossy"}},
      {"simulate", {"estimators", "samples", "depths", "i", "j", "median_of_means"}},
      {"sweep", {"family", "q", "delta", "regime", "values", "nu", "depths"}},
      {"antichain", {"g"}},
  };
  return s;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("expected true or false, got '" + s + "'");
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_double(trim(part)));
  return out;
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(std::string("cannot read ") + what + " '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

// Effective run settings after flags override the [run] section.
struct RunSettings {
  std::uint64_t seed = 1;
  unsigned streams = 1;
  std::size_t budget = EngineOptions{}.atom_budget;
  std::string out;
  bool timestamp = true;
  std::string config_hash;
};

RunSettings settings(const ExperimentConfig& cfg, const CliRequest& req) {
  RunSettings r;
  if (cfg.has("run", "seed")) r.seed = static_cast<std::uint64_t>(parse_int(cfg.get("run", "seed")));
  if (cfg.has("run", "streams")) r.streams = static_cast<unsigned>(parse_int(cfg.get("run", "streams")));
  if (cfg.has("run", "budget")) r.budget = static_cast<std::size_t>(parse_int(cfg.get("run", "budget")));
  if (cfg.has("run", "out")) r.out = cfg.get("run", "out");
  if (req.seed) r.seed = *req.seed;
  if (req.streams) r.streams = *req.streams;
  if (req.budget) r.budget = *req.budget;
  if (req.out) r.out = *req.out;
  if (r.streams < 1) throw ConfigError("streams must be at least 1");
  if (r.budget < 1) throw ConfigError("budget must be at least 1");
  r.timestamp = req.timestamp;
  std::ostringstream key;
  key << cfg.text() << "\n#seed=" << r.seed << " streams=" << r.streams << " budget=" << r.budget;
  r.config_hash = hex64(fnv1a64(key.str()));
  return r;
}

void header(std::ostream& o, const std::string& command, const RunSettings& r) {
  o << "# treecast " << command << "\n";
  o << "# config_hash = " << r.config_hash << "\n";
  o << "# rng = " << rng_identifier() << " seed=" << r.seed << " streams=" << r.streams << "\n";
  if (r.timestamp) o << "# timestamp = " << timestamp_utc() << "\n";
}

EngineOptions engine(const RunSettings& r) {
  EngineOptions e;
  e.atom_budget = r.budget;
  return e;
}

// Contraction norm for reporting D: the certificate's choice below the
// threshold, otherwise halfway between |lambda_2| and 1.
ContractionNorm report_norm(const Channel& m, double growth, std::optional<double> alpha) {
  if (alpha) return build_contraction_norm(m, *alpha);
  try {
    const SlackChoice s = choose_slack(m.lambda2(), growth);
    return build_contraction_norm(m, s.alpha, s.eps_slack);
  } catch (const AboveThreshold&) {
    return build_contraction_norm(m, 0.5 * (1.0 + m.lambda2()));
  }
}

std::vector<Antichain> certify_antichains(const ExperimentConfig& cfg, const Tree& tree, double growth) {
  const std::string spec = cfg.get("certify", "antichains", "min");
  std::vector<Antichain> out;
  if (spec == "min") {
    out.push_back(min_antichain_sum(tree, growth).antichain);
    return out;
  }
  for (const auto& part : split(spec, ';')) {
    const std::string p = trim(part);
    if (p.rfind("level:", 0) == 0)
      out.push_back(level_antichain(tree, static_cast<int>(parse_int(p.substr(6)))));
    else
      out.push_back(validate_antichain(tree, parse_ints(p)));
  }
  return out;
}

std::string run_certify(const ExperimentConfig& cfg, const RunSettings& rs, std::ostream& log) {
  const Channel m = cfg.channel();
  const NoiseKind regime = parse_regime(cfg.get("certify", "regime", "extra-steps"));
  Vector nu;
  if (regime == NoiseKind::Mix)
    nu = cfg.has("certify", "nu") ? parse_vector(cfg.get("certify", "nu")) : Vector::Constant(m.q(), 1.0 / m.q());
  CertifyOptions opts;
  opts.engine = engine(rs);
  Certificate c;
  std::string extra;
  if (const auto arity = cfg.bary_arity()) {
    c = certify_bary(m, *arity, regime, nu, opts);
    verify_decay(c, static_cast<int>(parse_int(cfg.get("certify", "depth", "4"))), opts.engine);
    if (parse_bool(cfg.get("certify", "tighten", "false"))) {
      const Tightening t = empirical_tightening(c, static_cast<int>(c.decay_log.size()) - 1, opts.engine);
      extra = "# tightening = " + format_double(t.value) + " at depth " + std::to_string(t.depth) + " (" + t.label +
              ")\n";
    }
  } else {
    const Tree tree = cfg.tree();
    const double growth = parse_double(cfg.get("certify", "growth"));
    c = certify_finite_tree(m, tree, certify_antichains(cfg, tree, growth), regime, growth, nu, opts);
  }
  log << "certified " << to_string(c.regime) << " threshold " << format_double(c.threshold) << "\n";
  std::ostringstream o;
  header(o, "certify", rs);
  o << extra;
  write_certificate(o, c);
  return o.str();
}

int run_verify(const std::string& path, std::ostream& out, std::ostream& log, const RunSettings& rs) {
  std::istringstream in(read_file(path, "certificate"));
  const Certificate c = read_certificate(in);
  const VerifyReport rep = verify_certificate(c, engine(rs));
  std::ostringstream o;
  for (const auto& [name, pass] : rep.checks) o << (pass ? "PASS " : "FAIL ") << name << "\n";
  for (const auto& note : rep.notes) o << "# " << note << "\n";
  o << "result = " << (rep.ok ? "ok" : "failed") << "\n";
  if (rs.out.empty()) {
    out << o.str();
  } else {
    std::ofstream f(rs.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + rs.out + "'");
    f << o.str();
  }
  if (!rep.ok) log << "certificate failed verification\n";
  return rep.ok ? 0 : 1;
}

std::string run_exact(const ExperimentConfig& cfg, const RunSettings& rs) {
  const Channel m = cfg.channel();
  const NoiseChannel n = cfg.noise(m);
  const Tree full = cfg.tree();
  const std::vector<int> depths = parse_int_range(cfg.get("exact", "depths", "0-" + std::to_string(full.max_depth())));
  std::optional<double> alpha;
  if (cfg.has("exact", "alpha")) alpha = parse_double(cfg.get("exact", "alpha"));
  const double growth = cfg.bary_arity() ? *cfg.bary_arity() : std::max(1, full.max_children());
  const ContractionNorm norm = report_norm(m, growth, alpha);
  EngineOptions e = engine(rs);
  e.lossy = parse_bool(cfg.get("exact", "lossy", "false"));
  std::ostringstream o;
  header(o, "exact", rs);
  o << "# alpha = " << format_double(norm.alpha) << "\n";
  o << "depth,atoms,D,tv_max,lossy_error\n";
  std::vector<AtomSet> levels;
  if (const auto arity = cfg.bary_arity()) {
    int top = 0;
    for (int d : depths) top = std::max(top, d);
    levels = bary_levels(m, n, *arity, top, e);
  }
  for (int d : depths) {
    if (d < 0 || d > full.max_depth()) throw ConfigError("exact depth " + std::to_string(d) + " outside the tree");
    const AtomSet a = cfg.bary_arity() ? levels[static_cast<std::size_t>(d)]
                                       : antichain_atoms(full, m, n, level_antichain(full, d), e);
    o << d << "," << a.size() << "," << format_double(discrepancy_of_atoms(a, norm)) << ","
      << format_double(atoms_tv_max(a)) << "," << format_double(a.lossy_error()) << "\n";
  }
  return o.str();
}

std::string run_simulate(const ExperimentConfig& cfg, const RunSettings& rs) {
  const Channel m = cfg.channel();
  const NoiseChannel n = cfg.noise(m);
  const Tree full = cfg.tree();
  const std::vector<int> depths =
      parse_int_range(cfg.get("simulate", "depths", std::to_string(full.max_depth())));
  McOptions mc;
  mc.n_samples = static_cast<std::uint64_t>(parse_int(cfg.get("simulate", "samples", "10000")));
  mc.seed = rs.seed;
  mc.streams = rs.streams;
  mc.median_of_means = parse_bool(cfg.get("simulate", "median_of_means", "false"));
  const int i = static_cast<int>(parse_int(cfg.get("simulate", "i", "0")));
  const int j = static_cast<int>(parse_int(cfg.get("simulate", "j", "1")));
  if (i < 0 || j < 0 || i >= m.q() || j >= m.q()) throw ConfigError("states i and j must lie in 0..q-1");
  std::vector<std::string> estimators;
  for (const auto& e : split(cfg.get("simulate", "estimators", "tv"), ',')) {
    const std::string name = trim(e);
    if (name != "tv" && name != "reconstruction" && name != "discrepancy" && name != "census")
      throw ConfigError("unknown estimator '" + name + "'");
    estimators.push_back(name);
  }
  for (int d : depths)
    if (d < 0 || d > full.max_depth()) throw ConfigError("simulate depth " + std::to_string(d) + " outside the tree");
  const double growth = cfg.bary_arity() ? *cfg.bary_arity() : std::max(1, full.max_children());

  std::ostringstream o;
  header(o, "simulate", rs);
  o << "estimator,instance_hash,depth,n_samples,mean,stderr,seed,streams\n";
  for (int d : depths) {
    const Antichain s = level_antichain(full, d);
    for (const auto& name : estimators) {
      std::ostringstream inst;
      inst << format_matrix(m.matrix()) << "|" << format_matrix(n.n) << "|" << format_ints(full.parents()) << "|"
           << d << "|" << name << "|" << i << "," << j << "|" << mc.median_of_means;
      const std::string hash = hex64(fnv1a64(inst.str()));
      McEstimate est;
      if (name == "tv") {
        est = tv_mc(full, m, n, s, i, j, mc);
      } else if (name == "reconstruction") {
        est = reconstruction_error_mc(full, m, n, s, mc);
      } else if (name == "discrepancy") {
        est = discrepancy_mc(full, m, n, s, report_norm(m, growth, {}), mc);
      } else {
        const CensusResult c = census_separation(full, m, n, d, mc);
        est.estimator = "census_z";
        est.mean = c.z(i, j);
        est.std_error = std::numeric_limits<double>::quiet_NaN();
        est.n_samples = mc.n_samples;
      }
      o << (name == "census" ? "census_z" : est.estimator) << "," << hash << "," << d << "," << est.n_samples << ","
        << format_double(est.mean) << "," << format_double(est.std_error) << "," << mc.seed << "," << mc.streams
        << "\n";
    }
  }
  return o.str();
}

std::string run_sweep(const ExperimentConfig& cfg, const RunSettings& rs) {
  const auto arity = cfg.bary_arity();
  if (!arity) throw ConfigError("sweep needs a b-ary [tree]");
  const std::string family = cfg.get("sweep", "family", "bsc");
  if (family != "bsc" && family != "qsym") throw ConfigError("sweep family must be bsc or qsym");
  const int q = family == "bsc" ? 2 : static_cast<int>(parse_int(cfg.get("sweep", "q", "3")));
  const std::vector<double> deltas = parse_doubles(cfg.get("sweep", "delta"));
  const NoiseKind regime = parse_regime(cfg.get("sweep", "regime", "extra-steps"));
  if (regime == NoiseKind::Custom) throw ConfigError("sweep regimes are extra-steps, mix and erasure");
  const std::vector<double> values = parse_doubles(cfg.get("sweep", "values", regime == NoiseKind::ExtraSteps ? "0" : "0.5"));
  const std::vector<int> depths = parse_int_range(cfg.get("sweep", "depths", "0-3"));
  const Vector nu = cfg.has("sweep", "nu") ? parse_vector(cfg.get("sweep", "nu")) : Vector::Constant(q, 1.0 / q);
  int top = 0;
  for (int d : depths) top = std::max(top, d);
  std::ostringstream o;
  header(o, "sweep", rs);
  o << "delta,regime,noise_param,depth,atoms,alpha,D,tv_max\n";
  for (double delta : deltas) {
    const Channel m = family == "bsc" ? bsc(delta) : qsym(q, delta);
    const ContractionNorm norm = report_norm(m, *arity, {});
    for (double value : values) {
      NoiseChannel n;
      if (regime == NoiseKind::ExtraSteps) {
        if (value < 0 || value != std::floor(value)) throw ConfigError("extra-steps values must be whole numbers");
        n = power_noise(m, static_cast<int>(value));
      } else if (regime == NoiseKind::Mix) {
        n = mix_noise(nu, value);
      } else {
        n = erasure_noise(q, value);
      }
      const auto levels = bary_levels(m, n, *arity, top, engine(rs));
      for (int d : depths) {
        if (d < 0) throw ConfigError("negative sweep depth");
        const AtomSet& a = levels[static_cast<std::size_t>(d)];
        o << format_double(delta) << "," << to_string(regime) << "," << format_double(value) << "," << d << ","
          << a.size() << "," << format_double(norm.alpha) << "," << format_double(discrepancy_of_atoms(a, norm))
          << "," << format_double(atoms_tv_max(a)) << "\n";
      }
    }
  }
  return o.str();
}

std::string run_antichain(const ExperimentConfig& cfg, const RunSettings& rs) {
  const Tree tree = cfg.tree();
  const std::vector<double> gs = parse_doubles(cfg.get("antichain", "g"));
  const BranchingInterval bi = branching_interval(tree);
  std::ostringstream o;
  header(o, "antichain", rs);
  o << "# branching_interval = [" << format_double(bi.lower) << ", " << format_double(bi.upper) << "] at depth "
    << bi.depth << "\n";
  o << "g,cutset_sum,size,max_local_sum,members\n";
  for (double g : gs) {
    if (!(g > 0)) throw ConfigError("g must be positive");
    const AntichainMinimum a = min_antichain_sum(tree, g);
    std::string members = antichain_csv(a.antichain);
    for (char& ch : members)
      if (ch == ',') ch = ' ';
    o << format_double(g) << "," << format_double(a.value) << "," << a.antichain.members.size() << ","
      << format_double(max_local_cutset_sum(tree, a.antichain, g)) << "," << members << "\n";
  }
  return o.str();
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::AboveThreshold:
    case ErrorKind::BoundViolation:
    case ErrorKind::RatioViolation:
    case ErrorKind::ZeroEntry:
    case ErrorKind::NonErgodic:
    case ErrorKind::DivergentSeries:
    case ErrorKind::AtomBudgetExceeded:
    case ErrorKind::CapExceeded:
    case ErrorKind::NotFoundWithinCap:
    case ErrorKind::ZeroLikelihood:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  c.text_ = text;
  std::istringstream in(text);
  std::vector<IniEntry> entries;
  try {
    entries = parse_ini(in);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  for (const auto& e : entries) {
    const auto sec = schema().find(e.section);
    if (sec == schema().end())
      throw ConfigError("line " + std::to_string(e.line) + ": unknown section [" + e.section + "]");
    if (!sec->second.count(e.key))
      throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + e.key + "' in [" + e.section + "]");
    if (c.values_[e.section].count(e.key))
      throw ConfigError("line " + std::to_string(e.line) + ": duplicate key '" + e.key + "'");
    c.values_[e.section][e.key] = e.value;
  }
  return c;
}

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
  const auto it = values_.find(section);
  return it != values_.end() && it->second.count(key) > 0;
}

std::string ExperimentConfig::get(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ConfigError("missing key '" + key + "' in [" + section + "]");
  return values_.at(section).at(key);
}

std::string ExperimentConfig::get(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  return has(section, key) ? values_.at(section).at(key) : fallback;
}

Channel ExperimentConfig::channel() const {
  const bool preset = has("channel", "preset"), matrix = has("channel", "matrix");
  if (preset == matrix) throw ConfigError("[channel] needs exactly one of preset or matrix");
  return parse_channel_spec(preset ? get("channel", "preset") : get("channel", "matrix"));
}

std::optional<int> ExperimentConfig::bary_arity() const {
  if (get("tree", "type", "bary") != "bary") return std::nullopt;
  return static_cast<int>(parse_int(get("tree", "arity", "2")));
}

Tree ExperimentConfig::tree(std::optional<int> depth_override) const {
  const std::string type = get("tree", "type", "bary");
  if (type == "bary") {
    const int depth = depth_override ? *depth_override : static_cast<int>(parse_int(get("tree", "depth")));
    return build_tree(BAry{static_cast<int>(parse_int(get("tree", "arity", "2"))), depth});
  }
  if (type == "spherical") {
    std::vector<int> pattern = parse_ints(get("tree", "pattern"));
    if (pattern.empty()) throw ConfigError("empty spherical pattern");
    const int depth = depth_override ? *depth_override : static_cast<int>(parse_int(get("tree", "depth")));
    if (depth < 0) throw ConfigError("negative tree depth");
    std::vector<int> per_level;
    for (int d = 0; d < depth; ++d)
      per_level.push_back(pattern[std::min(static_cast<std::size_t>(d), pattern.size() - 1)]);
    return build_tree(SphericallySymmetric{per_level});
  }
  if (type == "explicit") {
    if (has("tree", "parents") == has("tree", "parents_file"))
      throw ConfigError("explicit trees need exactly one of parents or parents_file");
    if (has("tree", "parents")) return build_tree(Explicit{parse_ints(get("tree", "parents"))});
    std::istringstream in(read_file(get("tree", "parents_file"), "parent array"));
    return read_parent_array(in);
  }
  throw ConfigError("unknown tree type '" + type + "'");
}

NoiseChannel ExperimentConfig::noise(const Channel& channel) const {
  const std::string regime = get("noise", "regime", "none");
  if (regime == "none") return identity_noise(channel.q());
  switch (parse_regime(regime)) {
    case NoiseKind::ExtraSteps:
      return power_noise(channel, static_cast<int>(parse_int(get("noise", "k"))));
    case NoiseKind::Mix:
      return mix_noise(has("noise", "nu") ? parse_vector(get("noise", "nu"))
                                          : Vector::Constant(channel.q(), 1.0 / channel.q()),
                       parse_double(get("noise", "eps")));
    case NoiseKind::Erasure:
      return erasure_noise(channel.q(), parse_double(get("noise", "eps")));
    case NoiseKind::Custom: {
      const NoiseChannel n = custom_noise(parse_matrix(get("noise", "matrix")));
      if (n.q() != channel.q()) throw ConfigError("noise matrix needs one row per state");
      return n;
    }
  }
  throw ConfigError("unknown noise regime");
}

Channel parse_channel_spec(const std::string& spec) {
  static const std::regex bsc_re(R"(^\s*bsc\(\s*([^,()]+)\s*\)\s*$)");
  static const std::regex qsym_re(R"(^\s*qsym\(\s*([0-9]+)\s*,\s*([^,()]+)\s*\)\s*$)");
  std::smatch mt;
  if (std::regex_match(spec, mt, bsc_re)) return bsc(parse_double(trim(mt[1].str())));
  if (std::regex_match(spec, mt, qsym_re))
    return qsym(static_cast<int>(parse_int(mt[1].str())), parse_double(trim(mt[2].str())));
  if (spec.find('(') != std::string::npos) throw ConfigError("unknown channel preset '" + spec + "'");
  return build_channel(parse_matrix(spec));
}

std::vector<int> parse_int_range(const std::string& s) {
  std::vector<int> out;
  for (const auto& raw : split(s, ',')) {
    const std::string part = trim(raw);
    const auto dash = part.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(static_cast<int>(parse_int(part)));
      continue;
    }
    const int lo = static_cast<int>(parse_int(trim(part.substr(0, dash))));
    const int hi = static_cast<int>(parse_int(trim(part.substr(dash + 1))));
    if (hi < lo) throw ConfigError("empty range '" + part + "'");
    for (int x = lo; x <= hi; ++x) out.push_back(x);
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

NoiseKind parse_regime(const std::string& s) {
  if (s == "extra-steps") return NoiseKind::ExtraSteps;
  if (s == "mix") return NoiseKind::Mix;
  if (s == "erasure") return NoiseKind::Erasure;
  if (s == "custom") return NoiseKind::Custom;
  throw ConfigError("unknown noise regime '" + s + "'");
}

int run_cli(const CliRequest& req, std::ostream& out, std::ostream& err) {
  static const std::set<std::string> commands{"certify", "verify", "exact", "simulate", "sweep", "antichain"};
  try {
    if (!commands.count(req.command)) throw ConfigError("unknown subcommand '" + req.command + "'");
    ExperimentConfig cfg;
    if (!req.config_path.empty())
      cfg = ExperimentConfig::parse(read_file(req.config_path, "config"));
    else if (req.command != "verify")
      throw ConfigError("--config is required for " + req.command);
    const RunSettings rs = settings(cfg, req);

    if (req.command == "verify") {
      std::string path = req.positional;
      if (path.empty()) path = cfg.get("verify", "file");
      return run_verify(path, out, err, rs);
    }
    std::string body;
    if (req.command == "certify") body = run_certify(cfg, rs, err);
    if (req.command == "exact") body = run_exact(cfg, rs);
    if (req.command == "simulate") body = run_simulate(cfg, rs);
    if (req.command == "sweep") body = run_sweep(cfg, rs);
    if (req.command == "antichain") body = run_antichain(cfg, rs);
    if (rs.out.empty()) {
      out << body;
    } else {
      std::ofstream f(rs.out, std::ios::binary);
      if (!f) throw ConfigError("cannot write '" + rs.out + "'");
      f << body;
    }
    return 0;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

const char* cli_output_help() noexcept {
  return "Output columns (every file starts with '#' lines: config hash, RNG id, timestamp):\n"
         "  certify    certificate file: [channel] [norm] [constants] [threshold] [tree] [antichains] [decay-log]\n"
         "  verify     one 'PASS name' or 'FAIL name' line per check, then 'result = ok|failed'\n"
         "  exact      depth,atoms,D,tv_max,lossy_error\n"
         "  simulate   estimator,instance_hash,depth,n_samples,mean,stderr,seed,streams\n"
         "  sweep      delta,regime,noise_param,depth,atoms,alpha,D,tv_max\n"
         "  antichain  g,cutset_sum,size,max_local_sum,members\n"
         "Exit codes: 0 success, 1 certification or verification failure, 2 configuration error.\n";
}

}  // namespace treecast
