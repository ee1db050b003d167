#include "CLI11.hpp"
#include "treecast/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"treecast: robust reconstruction certificates for broadcasting on trees"};
  app.footer(treecast::cli_output_help());
  app.require_subcommand(1, 1);

  treecast::CliRequest req;
  std::uint64_t seed = 0;
  unsigned streams = 0;
  std::string out;
  std::size_t budget = 0;
  bool no_timestamp = false;

  const char* about[][2] = {
      {"certify", "Build and check a certificate; writes the certificate file"},
      {"verify", "Re-check a certificate file from its own data"},
      {"exact", "Exact D and TV per depth from the atom engine"},
      {"simulate", "Monte Carlo estimates (tv, reconstruction, discrepancy, census)"},
      {"sweep", "Exact D and TV over a grid of channel, noise and depth"},
      {"antichain", "Minimal cutset-sum antichains and local sums"},
  };
  for (const auto& [name, text] : about) {
    CLI::App* sub = app.add_subcommand(name, text);
    sub->add_option("--config", req.config_path, "Experiment config file");
    sub->add_option("--seed", seed, "Override [run] seed");
    sub->add_option("--streams", streams, "Override [run] streams");
    sub->add_option("--out", out, "Output path (stdout when omitted)");
    sub->add_option("--budget", budget, "Atom budget for the exact engine");
    sub->add_flag("--no-timestamp", no_timestamp, "Leave the timestamp header line out");
    if (std::string(name) == "verify") sub->add_option("file", req.positional, "Certificate file");
    sub->callback([&req, n = std::string(name)] { req.command = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  auto given = [&](const char* flag) {
    for (CLI::App* sub : app.get_subcommands())
      if (sub->count(flag) > 0) return true;
    return false;
  };
  if (given("--seed")) req.seed = seed;
  if (given("--streams")) req.streams = streams;
  if (given("--out")) req.out = out;
  if (given("--budget")) req.budget = budget;
  req.timestamp = !no_timestamp;
  return treecast::run_cli(req, std::cout, std::cerr);
}
