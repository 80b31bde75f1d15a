#include <chrono>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "retention/cli.hpp"

int main(int argc, char** argv) {
  using namespace retention::cli;

  CLI::App app{"Retention problems for finite abstract dynamical systems"};
  std::string command_name;
  std::string path;
  Options opt;
  bool parallel = false;
  app.add_option("command", command_name, "validate | solve | verify | decomposable")
      ->required()
      ->check(CLI::IsMember({"validate", "solve", "verify", "decomposable"}));
  app.add_option("file", path, "instance file")->required();
  app.add_flag("--close-constraint", opt.close_constraint,
               "complete the constraint to its prefix closure before validation");
  app.add_option("--budget", opt.budget, "maximum quasistrategy candidates per state for verify")
      ->check(CLI::PositiveNumber);
  app.add_flag("--all-states", opt.all_states, "solve: list quasistrategy sizes for every kernel state");
  app.add_flag("--parallel", parallel, "evaluate independent states on several threads");
  CLI11_PARSE(app, argc, argv);
  if (parallel) opt.execution = retention::Execution::parallel;

  const auto start = std::chrono::steady_clock::now();
  const auto report = run_file(*parse_command(command_name), path, opt);
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);

  std::cout << report.document().dump(2) << '\n';
  std::cerr << report.summary << " [" << elapsed.count() << " ms]\n";
  return report.exit_code;
}
