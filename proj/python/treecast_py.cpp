// Python bindings for the main treecast operations.

#include "treecast/certify.hpp"
#include "treecast/channels.hpp"
#include "treecast/cli.hpp"
#include "treecast/discrepancy.hpp"
#include "treecast/error.hpp"
#include "treecast/exact.hpp"
#include "treecast/inference.hpp"
#include "treecast/trees.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace treecast;

namespace {

Tree tree_from(py::object spec) {
  if (py::isinstance<Tree>(spec)) return spec.cast<Tree>();
  return Tree::from_parents(spec.cast<std::vector<int>>());
}

std::vector<int> members_of(const Antichain& s) { return s.members; }

}  // namespace

PYBIND11_MODULE(_treecast, m) {
  m.doc() = "Broadcasting on trees: exact measures, discrepancy bounds and certificates.";

  static py::exception<Error> error(m, "TreecastError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      inst.attr("kind") = py::str(to_string(e.kind()));
      PyErr_SetObject(error.ptr(), inst.ptr());
    }
  });

  // channels
  py::class_<Channel>(m, "Channel")
      .def(py::init(&build_channel), py::arg("matrix"))
      .def_property_readonly("q", &Channel::q)
      .def_property_readonly("matrix", &Channel::matrix)
      .def_property_readonly("ergodic", &Channel::ergodic)
      .def_property_readonly("lambda2", &Channel::lambda2)
      .def_property_readonly("stationary", &Channel::stationary)
      .def("__repr__", [](const Channel& c) {
        std::ostringstream s;
        s << "Channel(q=" << c.q() << ", lambda2=" << c.lambda2() << ")";
        return s.str();
      });
  m.def("bsc", &bsc, py::arg("delta"));
  m.def("qsym", &qsym, py::arg("q"), py::arg("delta"));
  m.def("parse_channel", &parse_channel_spec, py::arg("text"));

  py::enum_<NoiseKind>(m, "NoiseKind")
      .value("EXTRA_STEPS", NoiseKind::ExtraSteps)
      .value("MIX", NoiseKind::Mix)
      .value("ERASURE", NoiseKind::Erasure)
      .value("CUSTOM", NoiseKind::Custom);
  py::class_<NoiseChannel>(m, "NoiseChannel")
      .def_readonly("kind", &NoiseChannel::kind)
      .def_readonly("matrix", &NoiseChannel::n)
      .def_readonly("steps", &NoiseChannel::steps)
      .def_readonly("eps", &NoiseChannel::eps)
      .def_readonly("nu", &NoiseChannel::nu);
  m.def("power_noise", &power_noise, py::arg("channel"), py::arg("k"));
  m.def("mix_noise", &mix_noise, py::arg("nu"), py::arg("eps"));
  m.def("erasure_noise", &erasure_noise, py::arg("q"), py::arg("eps"));
  m.def("custom_noise", &custom_noise, py::arg("matrix"));
  m.def("identity_noise", &identity_noise, py::arg("q"));

  // trees
  py::class_<Tree>(m, "Tree")
      .def(py::init([](std::vector<int> parents) { return Tree::from_parents(std::move(parents)); }),
           py::arg("parents"))
      .def_static("bary", [](int arity, int depth) { return build_tree(BAry{arity, depth}); }, py::arg("arity"),
                  py::arg("depth"))
      .def_static("spherical", [](std::vector<int> pattern) { return build_tree(SphericallySymmetric{pattern}); },
                  py::arg("children_per_level"))
      .def("__len__", &Tree::size)
      .def_property_readonly("parents", &Tree::parents)
      .def_property_readonly("depths", &Tree::depths)
      .def_property_readonly("max_depth", &Tree::max_depth)
      .def("children", &Tree::children)
      .def("level", &Tree::level)
      .def("leaves", &Tree::leaves);

  py::class_<Antichain>(m, "Antichain")
      .def_property_readonly("members", &members_of)
      .def_readonly("inside", &Antichain::inside);
  m.def("antichain", [](py::object t, std::vector<int> nodes) { return validate_antichain(tree_from(t), nodes); },
        py::arg("tree"), py::arg("nodes"));
  m.def("level_antichain", [](py::object t, int n) { return level_antichain(tree_from(t), n); }, py::arg("tree"),
        py::arg("level"));
  m.def("cutset_sum", [](py::object t, const Antichain& s, double lam) { return cutset_sum(tree_from(t), s, lam); },
        py::arg("tree"), py::arg("antichain"), py::arg("lam"));
  m.def("min_antichain_sum",
        [](py::object t, double lam) {
          const auto r = min_antichain_sum(tree_from(t), lam);
          return py::make_tuple(r.value, r.antichain);
        },
        py::arg("tree"), py::arg("lam"));

  // exact measures
  py::class_<EngineOptions>(m, "EngineOptions")
      .def(py::init<>())
      .def_readwrite("atom_budget", &EngineOptions::atom_budget)
      .def_readwrite("merge_tol", &EngineOptions::merge_tol)
      .def_readwrite("lossy", &EngineOptions::lossy)
      .def_readwrite("lossy_tol", &EngineOptions::lossy_tol);
  py::class_<AtomSet>(m, "AtomSet")
      .def_property_readonly("q", &AtomSet::q)
      .def("__len__", &AtomSet::size)
      .def_property_readonly("weights", &AtomSet::weights)
      .def_property_readonly("likelihoods",
                             [](const AtomSet& a) {
                               Matrix g(static_cast<Eigen::Index>(a.size()), a.q());
                               for (std::size_t k = 0; k < a.size(); ++k)
                                 for (int i = 0; i < a.q(); ++i)
                                   g(static_cast<Eigen::Index>(k), i) = a.g(k)[static_cast<std::size_t>(i)];
                               return g;
                             })
      .def("mass", &AtomSet::mass, py::arg("state"))
      .def_property_readonly("lossy_error", &AtomSet::lossy_error)
      .def("tv", &atoms_tv, py::arg("i"), py::arg("j"))
      .def("tv_max", &atoms_tv_max)
      .def("to_csv", [](const AtomSet& a) {
        std::ostringstream s;
        write_atoms_csv(s, a);
        return s.str();
      });
  m.def("bary_levels", &bary_levels, py::arg("channel"), py::arg("noise"), py::arg("arity"), py::arg("depth"),
        py::arg("options") = EngineOptions{});
  m.def("antichain_atoms",
        [](py::object t, const Channel& c, const NoiseChannel& n, const Antichain& s, const EngineOptions& o) {
          return antichain_atoms(tree_from(t), c, n, s, o);
        },
        py::arg("tree"), py::arg("channel"), py::arg("noise"), py::arg("antichain"),
        py::arg("options") = EngineOptions{});

  // discrepancy
  py::class_<ContractionNorm>(m, "ContractionNorm")
      .def_readonly("v", &ContractionNorm::v)
      .def_readonly("basis", &ContractionNorm::basis)
      .def_readonly("gram", &ContractionNorm::gram)
      .def_readonly("alpha", &ContractionNorm::alpha)
      .def_readonly("t", &ContractionNorm::t)
      .def_readonly("sum_abs_t", &ContractionNorm::sum_abs_t)
      .def("norm_sq", &ContractionNorm::norm_sq, py::arg("b"));
  m.def("contraction_norm", &build_contraction_norm, py::arg("channel"), py::arg("alpha"),
        py::arg("eps_slack") = 0.0);
  m.def("discrepancy", &discrepancy_of_atoms, py::arg("atoms"), py::arg("norm"));
  py::class_<DiscrepancyConstants>(m, "DiscrepancyConstants")
      .def_readonly("c_pairs", &DiscrepancyConstants::c_pairs)
      .def_readonly("c", &DiscrepancyConstants::c)
      .def_readonly("c_tilde", &DiscrepancyConstants::c_tilde);
  m.def("moment_constant", &moment_constant, py::arg("norm"));
  m.def("tensorization_delta", &tensorization_delta, py::arg("arity"), py::arg("eps"), py::arg("c"),
        py::arg("c_tilde"), py::arg("cap") = 1.0);

  // Monte Carlo
  py::class_<McOptions>(m, "McOptions")
      .def(py::init<>())
      .def_readwrite("n_samples", &McOptions::n_samples)
      .def_readwrite("seed", &McOptions::seed)
      .def_readwrite("streams", &McOptions::streams)
      .def_readwrite("median_of_means", &McOptions::median_of_means);
  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("estimator", &McEstimate::estimator)
      .def_readonly("mean", &McEstimate::mean)
      .def_readonly("std_error", &McEstimate::std_error)
      .def_readonly("n_samples", &McEstimate::n_samples);
  m.def("likelihood_vector",
        [](py::object t, const Channel& c, const NoiseChannel& n, const Antichain& s, std::vector<int> tau) {
          return likelihood_vector(tree_from(t), c, n, s, tau);
        },
        py::arg("tree"), py::arg("channel"), py::arg("noise"), py::arg("antichain"), py::arg("tau"));
  m.def("root_posterior", &root_posterior, py::arg("g"), py::arg("prior"));
  m.def("tv_mc",
        [](py::object t, const Channel& c, const NoiseChannel& n, const Antichain& s, int i, int j,
           const McOptions& o) { return tv_mc(tree_from(t), c, n, s, i, j, o); },
        py::arg("tree"), py::arg("channel"), py::arg("noise"), py::arg("antichain"), py::arg("i"), py::arg("j"),
        py::arg("options") = McOptions{});
  m.def("reconstruction_error_mc",
        [](py::object t, const Channel& c, const NoiseChannel& n, const Antichain& s, const McOptions& o) {
          return reconstruction_error_mc(tree_from(t), c, n, s, o);
        },
        py::arg("tree"), py::arg("channel"), py::arg("noise"), py::arg("antichain"),
        py::arg("options") = McOptions{});

  // certificates
  py::class_<SlackChoice>(m, "SlackChoice")
      .def_readonly("eps_max", &SlackChoice::eps_max)
      .def_readonly("eps_slack", &SlackChoice::eps_slack)
      .def_readonly("alpha", &SlackChoice::alpha);
  m.def("choose_slack", &choose_slack, py::arg("lambda2"), py::arg("growth"));
  py::class_<Certificate>(m, "Certificate")
      .def_readonly("lambda2", &Certificate::lambda2)
      .def_readonly("arity", &Certificate::arity)
      .def_readonly("delta", &Certificate::delta)
      .def_readonly("leaf_delta", &Certificate::leaf_delta)
      .def_readonly("regime", &Certificate::regime)
      .def_readonly("threshold", &Certificate::threshold)
      .def_readonly("decay_ratio", &Certificate::decay_ratio)
      .def_readonly("decay_log", &Certificate::decay_log)
      .def_readonly("first_level", &Certificate::first_level)
      .def_property_readonly("alpha", &Certificate::alpha)
      .def_property_readonly("eps_slack", &Certificate::eps_slack)
      .def("noise", &Certificate::noise)
      .def("to_text", [](const Certificate& c) {
        std::ostringstream s;
        write_certificate(s, c);
        return s.str();
      });
  m.def("certificate_from_text", [](const std::string& text) {
    std::istringstream s(text);
    return read_certificate(s);
  });
  m.def("certify_bary",
        [](const Channel& c, int arity, NoiseKind regime, const Vector& nu, int depth) {
          Certificate cert = certify_bary(c, arity, regime, nu);
          if (depth >= 0) verify_decay(cert, depth);
          return cert;
        },
        py::arg("channel"), py::arg("arity"), py::arg("regime"), py::arg("nu") = Vector(),
        py::arg("depth") = -1);
  m.def("verify_certificate",
        [](const Certificate& c) {
          const VerifyReport r = verify_certificate(c);
          return py::make_tuple(r.ok, r.checks);
        },
        py::arg("certificate"));

  // command line
  m.def("run_cli",
        [](const std::string& command, const std::string& config_path, std::optional<std::uint64_t> seed,
           std::optional<unsigned> streams, std::optional<std::string> out, const std::string& positional,
           bool timestamp) {
          CliRequest req;
          req.command = command;
          req.config_path = config_path;
          req.positional = positional;
          req.seed = seed;
          req.streams = streams;
          req.out = out;
          req.timestamp = timestamp;
          std::ostringstream o, e;
          const int code = run_cli(req, o, e);
          return py::make_tuple(code, o.str(), e.str());
        },
        py::arg("command"), py::arg("config") = "", py::arg("seed") = py::none(), py::arg("streams") = py::none(),
        py::arg("out") = py::none(), py::arg("positional") = "", py::arg("timestamp") = false);
}
