#include <iostream>

#include <CLI11.hpp>

#include "spinnet/cli/commands.hpp"

using namespace spinnet;

int main(int argc, char** argv) {
  CLI::App app{"spinnet: spin network states, inner products and diffeomorphism averaging"};
  app.require_subcommand(1);

  std::string file_a, file_b;
  std::optional<std::string> holonomies;
  auto* eval = app.add_subcommand("eval", "Evaluate a network on holonomies (identity when no file is given)");
  eval->add_option("file", file_a, "Network document")->required();
  eval->add_option("holonomies", holonomies, "JSON object of segment id -> [w, x, y, z]");

  std::size_t mc = 0;
  std::optional<std::uint64_t> seed;
  auto* ip = app.add_subcommand("ip", "Inner product of two networks");
  ip->add_option("a", file_a)->required();
  ip->add_option("b", file_b)->required();
  ip->add_option("--mc", mc, "Monte Carlo sample count (exact when omitted)");
  ip->add_option("--seed", seed, "Monte Carlo seed (default: SPINNET_SEED or 0)");

  bool preserving = false;
  auto* dip = app.add_subcommand("dip", "Diffeomorphism-averaged inner product");
  dip->add_option("a", file_a)->required();
  dip->add_option("b", file_b)->required();
  dip->add_flag("--orientation-preserving-only", preserving);

  std::vector<std::string> files;
  bool averaged = false;
  auto* gram = app.add_subcommand("gram", "Gram matrix of several networks");
  gram->add_option("files", files)->required();
  gram->add_flag("--averaged", averaged, "Use the averaged inner product");
  gram->add_flag("--orientation-preserving-only", preserving);

  cli::Section4Options s4;
  auto* sec4 = app.add_subcommand("section4", "Blip counterexample observations");
  sec4->add_option("--truncation", s4.truncation, "Blip truncation N");
  sec4->add_option("--i0", s4.i0, "Odd blip index for the second state");
  sec4->add_option("--which", s4.which, "obs1 or obs2")->check(CLI::IsMember({"obs1", "obs2"}));
  sec4->add_option("--emit-curves", s4.emit_curves, "Write curve polylines as CSV");

  std::vector<std::string> spins;
  auto* haar = app.add_subcommand("haar-projector", "Print the invariant projector of a tensor product");
  haar->add_option("--spins", spins, "Spins such as 1/2 1 3/2")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kValidation;
  }

  try {
    cli::CommandResult r;
    if (*eval) r = cli::cmd_eval(file_a, holonomies);
    else if (*ip) r = cli::cmd_ip(file_a, file_b, mc, seed ? *seed : cli::default_seed());
    else if (*dip) r = cli::cmd_dip(file_a, file_b, preserving);
    else if (*gram) r = cli::cmd_gram(files, averaged, preserving);
    else if (*sec4) r = cli::cmd_section4(s4);
    else if (*haar) r = cli::cmd_haar_projector(spins);
    std::cout << io::dump(r.report) << "\n";
    return r.exit_code;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kValidation;
  }
}
