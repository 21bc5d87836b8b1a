// dilkit: batch front-end over problem files.
//
//   dilkit <command> problem.json [--tol T] [--seed S] [--nmax N]
//          [--out path] [--format text|json] [--artifacts]
//
// Every flag can also come from the environment: DILKIT_TOL, DILKIT_SEED,
// DILKIT_NMAX, DILKIT_OUT, DILKIT_FORMAT, DILKIT_ARTIFACTS. Flags win over
// the environment, which wins over the options block of the problem file.
//
// Exit codes: 0 affirmative, 1 negative verdict, 2 error.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dilkit/problem.hpp"
#include "dilkit/report.hpp"

namespace {

int emit(const std::string& text, const std::optional<std::string>& out) {
  if (!out) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(*out);
  if (!f) {
    std::cerr << "IOError: cannot write " << *out << "\n";
    return 2;
  }
  f << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dilations of positive definite functions on finite *-semigroups"};
  app.require_subcommand(1, 1);

  std::optional<double> tol;
  std::optional<unsigned> seed;
  std::optional<std::size_t> nmax;
  std::optional<std::string> out;
  std::string format = "text";
  bool artifacts = false;

  app.add_option("--tol", tol, "Global tolerance (default 1e-9)")->envname("DILKIT_TOL");
  app.add_option("--seed", seed, "Sampling seed (default 0)")->envname("DILKIT_SEED");
  app.add_option("--nmax", nmax, "Length of the power sequence for condition (d) (default 6)")
      ->envname("DILKIT_NMAX");
  app.add_option("--out", out, "Write the report here instead of stdout")->envname("DILKIT_OUT");
  app.add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->envname("DILKIT_FORMAT");
  app.add_flag("--artifacts", artifacts, "Include matrices (V, Phi, Kraus, U) in the report")
      ->envname("DILKIT_ARTIFACTS");

  const std::map<std::string, std::string> about{
      {"validate-semigroup", "Check the *-semigroup axioms of a table or builtin family"},
      {"check-pd", "Positive definiteness of a kernel via its block Gram matrix"},
      {"build-rkhm", "Reproducing kernel module: rank, reducer, Kolmogorov check"},
      {"dilate", "Dilation (V, Phi) of an invariant kernel omega"},
      {"bounded", "Boundedness constants c_a, c_b and the power-sequence estimate"},
      {"extend", "Largest extension constant and the unitized omega"},
      {"stinespring", "Stinespring dilation of a CP map, checked against Kraus operators"},
      {"naimark", "Naimark dilation of a POVM to a projection-valued measure"},
      {"contraction", "Unitary dilation of a contraction on a window of powers"},
      {"moments", "Hankel positivity and support radius of moment data"},
      {"subnormal", "Windowed subnormality kernel test"}};
  std::string path;
  for (const auto& name : dilkit::command_names()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->fallthrough();
    sub->add_option("problem", path, "Problem file (JSON)")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    dilkit::Problem problem = dilkit::parse_problem(path);
    if (tol) problem.options.tol = *tol;
    if (seed) problem.options.seed = *seed;
    if (nmax) problem.options.n_max = *nmax;
    const dilkit::Report report = dilkit::run_command(command, problem, {artifacts});
    const int status = emit(format == "json" ? report.to_json_text() : report.to_text(), out);
    return status != 0 ? status : report.exit_code();
  } catch (const dilkit::Error& e) {
    std::cerr << e.what() << "\n";
    if (format == "json") emit(dilkit::error_report(command, e).dump(2) + "\n", out);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
