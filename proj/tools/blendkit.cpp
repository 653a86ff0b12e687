#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blendkit/cli.hpp"

int main(int argc, char** argv) {
  using blendkit::cli::Invocation;
  CLI::App app{"Partial signature morphisms, lax blends and amalgamation over PL and MSA"};
  app.set_help_all_flag("--help-all");
  Invocation inv;
  std::string command;
  app.add_option("command", command, "validate | compose | factorize | pushout | blend | reduct | satisfy | entails |\n"
                                     "classify-theory-morphism | amalgamate | check-square | verify-laws |\n"
                                     "consistent | export")
      ->required()
      ->check(CLI::IsMember(blendkit::cli::command_names()));
  app.add_option("args", inv.args, "Declaration names the command works on");
  app.add_option("--file,-f", inv.file, "Specification document (DSL, or JSON when it starts with '{')");
  app.add_option("--config,-c", inv.config, "JSON file with bounds, seed and iterations");
  app.add_option("--seed", inv.seed, "Seed for verify-laws");
  app.add_option("--iters", inv.iterations, "Random cases per law for verify-laws");
  app.add_option("--max-carrier", inv.max_carrier, "Largest MSA carrier enumerated per sort");
  app.add_option("--depth", inv.depth, "Sentence depth for syntactic checks");
  app.add_option("--dom", inv.dom, "blend/amalgamate: signature used as dom theta0, or 'minimal'");
  app.add_flag("--json", inv.json, "JSON output");
  app.add_flag("--dot", inv.dot, "blend: emit the cocone as a Graphviz digraph");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : blendkit::cli::InputError;
  }
  inv.command = command;
  return blendkit::cli::run(inv, std::cout, std::cerr);
}
