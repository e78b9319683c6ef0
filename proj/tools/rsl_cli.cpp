#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "rsl/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sturm-Liouville problems with retarded argument and transmission conditions"};
  app.require_subcommand(1);

  rsl::RunOptions options;
  std::string config, out;
  bool serial = false;
  int n_min = 1, n_max = 10, n = 1, samples = 129;
  std::optional<int> compare_min, compare_max;
  std::string variant = "numeric";
  std::string mode = "check";
  double lambda = 100.0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "problem config (JSON)")->required();
    sub->add_option("--out", out, "output file; stdout when omitted");
    sub->add_option("--tol,--tol-ode", options.tol_ode, "integrator tolerance")
        ->capture_default_str();
    sub->add_option("--tol-root", options.tol_root, "root tolerance in s")->capture_default_str();
    sub->add_flag("--serial", serial, "disable OpenMP work distribution");
  };

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues in windows n-min..n-max");
  common(spectrum);
  spectrum->add_option("--n-min", n_min)->capture_default_str();
  spectrum->add_option("--n-max", n_max)->capture_default_str();

  auto* compare = app.add_subcommand("compare", "numeric eigenvalues against the asymptotic formulas");
  common(compare);
  compare->add_option("--n-min", compare_min, "default: harness.n_min of the config");
  compare->add_option("--n-max", compare_max, "default: harness.n_max of the config");

  auto* eigenfunction = app.add_subcommand("eigenfunction", "sampled eigenfunction u_n");
  common(eigenfunction);
  eigenfunction->add_option("--n", n)->capture_default_str();
  eigenfunction->add_option("--samples", samples, "points per subinterval")->capture_default_str();
  eigenfunction->add_option("--variant", variant, "numeric | leading | refined")
      ->capture_default_str();

  auto* check = app.add_subcommand("check", "invariant suite with a JSON report");
  common(check);
  check->add_option("--mode", mode, "check | freeze")
      ->check(CLI::IsMember({"check", "freeze"}))
      ->capture_default_str();
  check->add_flag("--timing", options.timing, "include per-check runtimes in the report");

  auto* trajectory = app.add_subcommand("trajectory", "initial-value solution (w, w') at fixed lambda");
  common(trajectory);
  trajectory->add_option("--lambda", lambda)->capture_default_str();
  trajectory->add_option("--samples", samples, "points per subinterval")->capture_default_str();

  auto* predict = app.add_subcommand("predict", "leading and refined asymptotic eigenvalues");
  common(predict);
  predict->add_option("--n-min", n_min)->capture_default_str();
  predict->add_option("--n-max", n_max)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rsl::kExitOk : rsl::kExitUsage;
  }

  options.config = config;
  options.out = out;
  options.execution = serial ? rsl::Execution::Serial : rsl::Execution::Parallel;

  if (spectrum->parsed()) return rsl::cmd_spectrum(options, n_min, n_max, std::cout, std::cerr);
  if (compare->parsed()) {
    return rsl::cmd_compare(options, compare_min, compare_max, std::cout, std::cerr);
  }
  if (eigenfunction->parsed()) {
    return rsl::cmd_eigenfunction(options, n, samples, variant, std::cout, std::cerr);
  }
  if (check->parsed()) {
    const auto m = mode == "freeze" ? rsl::CheckMode::Freeze : rsl::CheckMode::Check;
    return rsl::cmd_check(options, m, std::cout, std::cerr);
  }
  if (trajectory->parsed()) return rsl::cmd_trajectory(options, lambda, samples, std::cout, std::cerr);
  return rsl::cmd_predict(options, n_min, n_max, std::cout, std::cerr);
}
