#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_tolerance_flags(CLI::App* cmd, semiembed::cli::ToleranceOverrides& t) {
  cmd->add_option("--rank-tol", t.rank_tol, "singular-value cutoff, relative")->check(CLI::NonNegativeNumber);
  cmd->add_option("--eig-tol", t.eig_cluster_tol, "eigenvalue clustering radius, relative")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--verify-tol", t.verify_tol, "residual acceptance")->check(CLI::NonNegativeNumber);
  cmd->add_option("--pos-tol", t.positivity_tol, "entrywise sign threshold")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace semiembed::cli;
  CLI::App app{"Decide and certify embeddability of matrices into one-parameter semigroups"};
  app.set_version_flag("--version", std::string(kToolName) + " " + tool_version());
  app.require_subcommand(1);

  CommandOptions options;
  std::string path;
  bool no_timing = false;

  auto matrix_command = [&](const char* name, const char* help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    cmd->add_option("input", path, "matrix document (JSON); standard input when omitted or '-'");
    add_tolerance_flags(cmd, options.flags);
    cmd->add_flag("--no-timing", no_timing, "omit the timing block from the report");
    return cmd;
  };
  matrix_command("check-real", "decide real embeddability and emit a real generator");
  CLI::App* positive = matrix_command("check-positive", "decide positive embeddability");
  positive->add_option("--branch-bound", options.branch_bound, "largest |k| in the logarithm branch search")
      ->check(CLI::NonNegativeNumber);
  matrix_command("sqrt-real", "real square root through a real generator");
  CLI::App* sample = matrix_command("sample", "CSV trajectory t,i,j,re,im of the semigroup");
  sample->add_option("--t-min", options.t_min, "first time");
  sample->add_option("--t-max", options.t_max, "last time");
  sample->add_option("--steps", options.steps, "number of equally spaced times (>= 2)");
  sample->add_flag("--positive", options.positive_path, "use the positive decider's generator");
  sample->add_option("--branch-bound", options.branch_bound, "branch bound for --positive")
      ->check(CLI::NonNegativeNumber);

  CLI::App* verify = app.add_subcommand("verify", "run the seeded property suite");
  verify->add_option("--seed", options.seed, "ensemble seed");
  verify->add_option("--probe", options.probe, "run a single probe");
  add_tolerance_flags(verify, options.flags);
  verify->add_flag("--no-timing", no_timing, "omit the timing block from the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }
  options.timing = !no_timing;

  const std::string command = app.get_subcommands().front()->get_name();
  std::string input;
  if (command != "verify") {
    if (path.empty() || path == "-") {
      input.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
      std::ifstream file(path, std::ios::binary);
      if (!file) {
        std::cerr << kToolName << ": cannot open '" << path << "'\n";
        return kParse;
      }
      std::ostringstream buf;
      buf << file.rdbuf();
      input = buf.str();
    }
  }
  return run_command(command, input, options, std::cout, std::cerr);
}
