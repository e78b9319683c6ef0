#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rsl/problem.hpp"
#include "rsl/spectral.hpp"

namespace rsl {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitSolver = 3 };

/// Optional "harness" section of a problem config.
struct HarnessSettings {
  int n_reliable = 8;
  int n_min = 10;  // range used by compare checks
  int n_max = 30;
  /// Frozen constants: scaled_lead_max, scaled_refined_max, amplitude_max,
  /// eigenfunction_lead_max, eigenfunction_refined_max.
  std::map<std::string, double> thresholds;

  static HarnessSettings from_config(const nlohmann::json& doc);
};

struct LoadedConfig {
  std::filesystem::path path;
  nlohmann::json doc;
  ProblemSpec spec;
  HarnessSettings settings;
  std::string digest;  // FNV-1a of the canonical problem JSON
};

LoadedConfig load_config(const std::filesystem::path& path, bool check_delay = true);

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path out;  // empty: write to the output stream
  double tol_ode = 1e-10;
  double tol_root = 1e-9;
  Execution execution = Execution::Parallel;
  bool timing = false;  // include per-check runtimes in the JSON report
};

struct ComparisonRow {
  int n = 0;
  double s_numeric = 0.0;
  double s_leading = 0.0;
  std::optional<double> s_refined;
  double err_lead = 0.0;
  std::optional<double> err_refined;
  double scaled_lead = 0.0;                // (2n+1) err_lead
  std::optional<double> scaled_refined;    // (2n+1)^2 err_refined
  double f_residual = 0.0;
};

/// One row per eigenpair; refined fields absent when the refined formula is unavailable.
std::vector<ComparisonRow> compare_rows(const ProblemSpec& spec, const Spectrum& spectrum);

/// Leading and refined comparisons need d != 0 and a2 != 0.
bool asymptotic_comparison_enabled(const ProblemSpec& spec);

enum class CheckStatus { Pass, Fail, Skipped };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  double runtime_s = 0.0;
};

struct CheckReport {
  std::string digest;
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* first_failure() const;
  nlohmann::json to_json(bool timing) const;
};

enum class CheckMode { Check, Freeze };

/// Runs the invariant suite. In Freeze mode the threshold-bearing checks record their
/// measured value (times 1.001) into `frozen` instead of comparing.
CheckReport run_checks(const LoadedConfig& config, const RunOptions& options, CheckMode mode,
                       std::map<std::string, double>* frozen = nullptr);

/// Command entry points; all return an ExitCode and never throw.
int cmd_spectrum(const RunOptions& options, int n_min, int n_max, std::ostream& out,
                 std::ostream& err);
int cmd_compare(const RunOptions& options, std::optional<int> n_min, std::optional<int> n_max,
                std::ostream& out, std::ostream& err);
int cmd_eigenfunction(const RunOptions& options, int n, int samples, const std::string& variant,
                      std::ostream& out, std::ostream& err);
int cmd_check(const RunOptions& options, CheckMode mode, std::ostream& out, std::ostream& err);
int cmd_trajectory(const RunOptions& options, double lambda, int samples, std::ostream& out,
                   std::ostream& err);
int cmd_predict(const RunOptions& options, int n_min, int n_max, std::ostream& out,
                std::ostream& err);

}  // namespace rsl
