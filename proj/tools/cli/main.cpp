#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "escort/error.hpp"
#include "execute.hpp"

int main(int argc, char** argv) {
  using namespace escort::cli;
  CLI::App app{"escort: rays, clusters and the sigma-iteration for p(exp(z))"};
  std::string command, spec_path, out_dir = ".", format = "records";
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "trace-ray | classify | clusters | solve | check-invariant | verify-bounds | plot");
  app.add_option("--spec", spec_path, "run file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "overrides the seed in the run file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "records, csv or svg")->check(CLI::IsMember({"records", "csv", "svg"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kValidationFailure;
  }

  RunSpec spec;
  try {
    std::ifstream in(spec_path);
    std::stringstream text;
    text << in.rdbuf();
    if (!command.empty()) text << "\ncommand = " << command << '\n';
    spec = parse_spec(text.str());
    if (seed) spec.seed = *seed;
  } catch (const escort::Error& e) {
    std::cerr << e.what() << '\n';
    return kValidationFailure;
  }

  const RunReport report = execute(spec);
  try {
    for (const auto& p : emit(report, parse_format(format), out_dir)) std::cerr << "wrote " << p.string() << '\n';
  } catch (const escort::Error& e) {
    std::cerr << e.what() << '\n';
    return kValidationFailure;
  }
  std::cerr << spec.command << ": exit " << report.exit_code << " in " << report.wall_seconds << " s\n";
  return report.exit_code;
}
