#include "rsl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "rsl/asymptotics.hpp"
#include "rsl/errors.hpp"
#include "rsl/format.hpp"
#include "rsl/integrator.hpp"
#include "rsl/picard.hpp"
#include "rsl/qnorms.hpp"
#include "rsl/residual.hpp"

namespace rsl {

namespace {

constexpr double kFreezeMargin = 1.001;
constexpr int kPicardMaxIters = 200;
constexpr double kPicardTol = 1e-13;

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnavailableError& e) {
    err << "unavailable: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
}

void emit(const RunOptions& options, const std::string& content, std::ostream& out) {
  if (options.out.empty()) {
    out << content;
  } else {
    write_atomic(options.out, content);
  }
}

SpectralOptions spectral_options(const RunOptions& options, const HarnessSettings& settings) {
  SpectralOptions s;
  s.tol_ode = options.tol_ode;
  s.tol_root = options.tol_root;
  s.n_reliable = settings.n_reliable;
  s.execution = options.execution;
  return s;
}

void provenance(CsvTable& table, const std::string& command, const LoadedConfig& cfg,
                const RunOptions& options) {
  table.comment("rsl " + command);
  table.comment("config_digest=" + cfg.digest + " tol_ode=" + format_number(options.tol_ode) +
                " tol_root=" + format_number(options.tol_root));
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

double grid_unit(const ProblemSpec& spec) { return spec.p1 * spec.p2 / (spec.p1 + spec.p2); }

// The window root for n when the window is clean; otherwise the n-th root of a global scan.
// With d = 0 the windows do not follow the roots, so the scan is used directly.
Eigenpair eigenpair_for(const ProblemSpec& spec, int n, const SpectralOptions& opt) {
  if (spec.d != 0.0) {
    const Spectrum window = find_eigenvalues(spec, n, n, opt);
    if (window.clean() && window.pairs.size() == 1) return window.pairs.front();
  }
  const double s_max = locate_window(spec, n).second + grid_unit(spec);
  const Spectrum scan = global_scan(spec, s_max, grid_unit(spec) / 2, opt);
  if (static_cast<int>(scan.pairs.size()) < n) {
    throw Error("no eigenvalue with index " + std::to_string(n) + " below s = " +
                std::to_string(s_max));
  }
  Eigenpair pair = scan.pairs[static_cast<std::size_t>(n - 1)];
  pair.n = n;
  return pair;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double sup_distance(const Trajectory& a, const Trajectory& b, int grid) {
  double worst = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double x = i == grid ? a.upper() : a.lower() + (a.upper() - a.lower()) * i / grid;
    worst = std::max(worst, std::abs(a(x).w - b(x).w));
  }
  return worst;
}

double sup_abs(const Trajectory& a, int grid) {
  double worst = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double x = i == grid ? a.upper() : a.lower() + (a.upper() - a.lower()) * i / grid;
    worst = std::max(worst, std::abs(a(x).w));
  }
  return worst;
}

// n^p * sup over a 513-point grid of |numeric u_n - model(x)|.
template <class Model>
double eigenfunction_error(const ProblemSpec& spec, const Eigenpair& pair, double tol,
                           Model&& model) {
  const Solution sol = solve(spec, pair.lambda, tol);
  double worst = 0.0;
  for (int i = 0; i <= 512; ++i) {
    const double x = kPi * i / 512;
    worst = std::max(worst, std::abs(sol(x).w - model(x)));
  }
  return worst;
}

class CheckRunner {
 public:
  CheckRunner(CheckReport& report, CheckMode mode, std::map<std::string, double>* frozen,
              const HarnessSettings& settings)
      : report_(report), mode_(mode), frozen_(frozen), settings_(settings) {}

  // body fills measured/threshold/status/detail.
  void run(const std::string& name, const std::function<void(CheckResult&)>& body) {
    CheckResult r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    body(r);
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report_.checks.push_back(std::move(r));
  }

  // Compares against (or freezes) the named config threshold.
  void against_frozen(CheckResult& r, const std::string& key, double measured) {
    r.measured = measured;
    if (mode_ == CheckMode::Freeze) {
      r.threshold = measured * kFreezeMargin;
      if (frozen_) (*frozen_)[key] = r.threshold;
      r.status = CheckStatus::Pass;
      r.detail = "frozen as " + key;
      return;
    }
    auto it = settings_.thresholds.find(key);
    if (it == settings_.thresholds.end()) {
      r.status = CheckStatus::Fail;
      r.detail = "no frozen threshold '" + key + "'; run with --mode freeze";
      return;
    }
    r.threshold = it->second;
    r.status = measured <= r.threshold ? CheckStatus::Pass : CheckStatus::Fail;
  }

  static void at_most(CheckResult& r, double measured, double threshold) {
    r.measured = measured;
    r.threshold = threshold;
    r.status = measured <= threshold ? CheckStatus::Pass : CheckStatus::Fail;
  }

  static void skip(CheckResult& r, std::string why) {
    r.status = CheckStatus::Skipped;
    r.detail = std::move(why);
  }

 private:
  CheckReport& report_;
  CheckMode mode_;
  std::map<std::string, double>* frozen_;
  const HarnessSettings& settings_;
};

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Skipped:
      return "skipped";
  }
  return "?";
}

const std::vector<std::string> kCheckNames = {
    "delay_conditions",      "transmission",          "integral_defect",
    "picard_agreement",      "linearity",             "amplitude_bounds",
    "amplitude_in_s",        "window_sign_changes",   "root_residual",
    "count_growth",          "scan_consistency",      "oscillatory_decay",
    "leading_order",         "leading_order_spread",  "refined_order",
    "refined_order_spread",  "refined_more_accurate", "eigenfunction_leading",
    "eigenfunction_refined", "eigenfunction_refined_spread"};

}  // namespace

HarnessSettings HarnessSettings::from_config(const nlohmann::json& doc) {
  HarnessSettings s;
  auto it = doc.find("harness");
  if (it == doc.end()) return s;
  if (!it->is_object()) throw ConfigError("'harness' must be an object");
  s.n_reliable = it->value("n_reliable", s.n_reliable);
  s.n_min = it->value("n_min", std::max(s.n_reliable, s.n_min));
  s.n_max = it->value("n_max", s.n_max);
  if (s.n_reliable < 1 || s.n_min < 1 || s.n_max < s.n_min) {
    throw ConfigError("harness: need 1 <= n_min <= n_max and n_reliable >= 1");
  }
  if (auto t = it->find("thresholds"); t != it->end()) {
    if (!t->is_object()) throw ConfigError("harness.thresholds must be an object");
    for (const auto& [key, value] : t->items()) {
      if (!value.is_number()) throw ConfigError("harness.thresholds." + key + " must be a number");
      s.thresholds[key] = value.get<double>();
    }
  }
  return s;
}

LoadedConfig load_config(const std::filesystem::path& path, bool check_delay) {
  LoadedConfig cfg;
  cfg.path = path;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  try {
    cfg.doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  LoadOptions lo;
  lo.check_delay = check_delay;
  cfg.spec = load_problem(cfg.doc, lo);
  cfg.settings = HarnessSettings::from_config(cfg.doc);
  cfg.digest = hex64(fnv1a64(to_json(cfg.spec).dump()));
  return cfg;
}

bool asymptotic_comparison_enabled(const ProblemSpec& spec) {
  return spec.d != 0.0 && spec.a2 != 0.0;
}

std::vector<ComparisonRow> compare_rows(const ProblemSpec& spec, const Spectrum& spectrum) {
  std::vector<ComparisonRow> rows;
  for (const Eigenpair& p : spectrum.pairs) {
    const AsymptoticPrediction pred = predict(spec, p.n);
    ComparisonRow r;
    r.n = p.n;
    r.s_numeric = p.s;
    r.s_leading = pred.s_leading;
    r.s_refined = pred.s_refined;
    r.err_lead = std::abs(p.s - pred.s_leading);
    r.scaled_lead = (2 * p.n + 1) * r.err_lead;
    if (pred.s_refined) {
      r.err_refined = std::abs(p.s - *pred.s_refined);
      r.scaled_refined = std::pow(2 * p.n + 1, 2) * *r.err_refined;
    }
    r.f_residual = p.f_residual;
    rows.push_back(r);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) { return a.n < b.n; });
  return rows;
}

bool CheckReport::passed() const { return first_failure() == nullptr; }

const CheckResult* CheckReport::first_failure() const {
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail) return &c;
  }
  return nullptr;
}

nlohmann::json CheckReport::to_json(bool timing) const {
  nlohmann::json j;
  j["config_digest"] = digest;
  j["passed"] = passed();
  const CheckResult* f = first_failure();
  j["first_failure"] = f ? nlohmann::json(f->name) : nlohmann::json(nullptr);
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e{{"name", c.name},
                     {"status", status_name(c.status)},
                     {"measured", c.measured},
                     {"threshold", c.threshold}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    if (timing) e["runtime_s"] = c.runtime_s;
    list.push_back(std::move(e));
  }
  j["checks"] = std::move(list);
  return j;
}

CheckReport run_checks(const LoadedConfig& config, const RunOptions& options, CheckMode mode,
                       std::map<std::string, double>* frozen) {
  const ProblemSpec& spec = config.spec;
  const HarnessSettings& settings = config.settings;
  const SpectralOptions sopt = spectral_options(options, settings);
  const double tol = options.tol_ode;

  CheckReport report;
  report.digest = config.digest;
  CheckRunner runner(report, mode, frozen, settings);

  runner.run("delay_conditions", [&](CheckResult& r) {
    r.measured = spec.conditions.worst_violation;
    r.status = spec.conditions.delay_ok ? CheckStatus::Pass : CheckStatus::Fail;
    for (const auto& v : spec.conditions.violations) r.detail += (r.detail.empty() ? "" : "; ") + v;
  });
  if (!spec.conditions.delay_ok) {
    for (std::size_t i = 1; i < kCheckNames.size(); ++i) {
      runner.run(kCheckNames[i], [](CheckResult& r) { CheckRunner::skip(r, "delay conditions violated"); });
    }
    return report;
  }

  runner.run("transmission", [&](CheckResult& r) {
    double worst = 0.0;
    for (double lambda : {25.0, 100.0, 400.0}) {
      const Solution sol = solve(spec, lambda, tol);
      const TransmissionResidual t = transmission_residual(spec, sol.w1, sol.w2);
      worst = std::max(worst, std::max(t.value, t.derivative) / t.scale);
    }
    CheckRunner::at_most(r, worst, 1e-10);
  });

  runner.run("integral_defect", [&](CheckResult& r) {
    double worst = 0.0;
    for (double lambda : {25.0, 100.0, 400.0}) {
      const Solution sol = solve(spec, lambda, tol);
      worst = std::max(worst, residual(spec, lambda, sol.w1, sol.w2).sup_integral_defect);
    }
    CheckRunner::at_most(r, worst, 1e-7);
  });

  runner.run("picard_agreement", [&](CheckResult& r) {
    double worst = 0.0;
    for (double lambda : {25.0, 100.0}) {
      const Solution sol = solve(spec, lambda, tol);
      const PicardResult pic = picard_solve(spec, lambda, kPicardMaxIters, kPicardTol);
      worst = std::max({worst, sup_distance(sol.w1, pic.w1, 1024), sup_distance(sol.w2, pic.w2, 1024)});
    }
    CheckRunner::at_most(r, worst, 1e-6);
  });

  runner.run("linearity", [&](CheckResult& r) {
    const double lambda = 100.0;
    const Solution base = solve(spec, lambda, tol);
    const double scale = std::max(sup_abs(base.w1, 1024), sup_abs(base.w2, 1024));
    double worst = 0.0;
    for (double c : {-2.0, 0.5, 3.0}) {
      ProblemSpec scaled = spec;
      scaled.a1 *= c;
      scaled.a2 *= c;
      const Solution sol = solve(scaled, lambda, tol);
      worst = std::max({worst, sup_distance(sol.w1, base.w1.scaled(c), 1024) / (std::abs(c) * scale),
                        sup_distance(sol.w2, base.w2.scaled(c), 1024) / (std::abs(c) * scale)});
    }
    CheckRunner::at_most(r, worst, 1e-10);
  });

  const QNorms norms = compute_qnorms(spec);
  runner.run("amplitude_bounds", [&](CheckResult& r) {
    if (norms.q1 <= 0.0) return CheckRunner::skip(r, "q1 = 0: the bounds are vacuous");
    double slack = INFINITY;
    const double lambda0 = std::max(norms.bound_lambda(), 1.0);
    for (int k = 0; k < 32; ++k) {
      const double lambda = lambda0 * std::pow(1.15, k);
      const Solution sol = solve(spec, lambda, tol);
      slack = std::min(slack, amplitude_bounds(spec, norms, sol.w1, sol.w2).slack());
    }
    r.measured = slack;
    r.threshold = -1e-8;
    r.status = slack >= r.threshold ? CheckStatus::Pass : CheckStatus::Fail;
    r.detail = "minimum slack (bound - measured) over 32 lambda >= max{4 q1^2, 4 q2^2}";
  });

  runner.run("amplitude_in_s", [&](CheckResult& r) {
    const double s0 = std::max(1.0, 2.0 * std::max(norms.q1, norms.q2));
    const double h = 1e-4;
    double worst = 0.0;
    for (double s = s0; s <= 50.0 + 1e-12; s += 0.5) {
      const Solution a = solve(spec, s * s, tol);
      const Solution b = solve(spec, (s + h) * (s + h), tol);
      worst = std::max({worst, sup_abs(a.w1, 256), sup_abs(a.w2, 256),
                        sup_distance(a.w1, b.w1, 256) / h, sup_distance(a.w2, b.w2, 256) / h});
    }
    runner.against_frozen(r, "amplitude_max", worst);
    r.detail += (r.detail.empty() ? "" : "; ") + std::string("max of |w1|, |w2|, |dw/ds| for s in [s0, 50]");
  });

  const Spectrum windows = find_eigenvalues(spec, settings.n_reliable,
                                            std::max(settings.n_max, settings.n_reliable), sopt);
  runner.run("window_sign_changes", [&](CheckResult& r) {
    int bad = 0;
    for (const auto& w : windows.windows) bad += w.sign_changes != 1;
    for (const auto& p : windows.pairs) bad += !p.sign_change || p.suspect;
    CheckRunner::at_most(r, bad, 0);
    r.detail = std::to_string(windows.windows.size()) + " windows from n = " +
               std::to_string(settings.n_reliable);
  });

  runner.run("root_residual", [&](CheckResult& r) {
    double worst = 0.0;
    for (const auto& p : windows.pairs) {
      worst = std::max(worst, p.f_residual / p.s / std::max(1.0, p.s));
    }
    CheckRunner::at_most(r, worst, 1e-6);
  });

  const double step = grid_unit(spec) / 2;
  const Spectrum scan10 = global_scan(spec, 10.0, step, sopt);
  const Spectrum scan20 = global_scan(spec, 20.0, step, sopt);
  runner.run("count_growth", [&](CheckResult& r) {
    const auto c10 = scan10.pairs.size();
    const auto c20 = scan20.pairs.size();
    r.measured = static_cast<double>(c20);
    r.threshold = static_cast<double>(c10);
    r.status = c20 > c10 && c10 > 0 ? CheckStatus::Pass : CheckStatus::Fail;
    r.detail = "roots below s = 10: " + std::to_string(c10) + ", below s = 20: " + std::to_string(c20);
  });

  runner.run("scan_consistency", [&](CheckResult& r) {
    double worst = 0.0;
    int common = 0;
    for (const auto& p : windows.pairs) {
      if (p.s >= 20.0) continue;
      double best = INFINITY;
      for (const auto& g : scan20.pairs) best = std::min(best, std::abs(g.s - p.s));
      worst = std::max(worst, best);
      ++common;
    }
    CheckRunner::at_most(r, worst, options.tol_root);
    r.detail = std::to_string(common) + " common roots";
  });

  runner.run("oscillatory_decay", [&](CheckResult& r) {
    if (!spec.conditions.condition_a_ok || !spec.conditions.condition_b_ok) {
      return CheckRunner::skip(r, "conditions a/b fail");
    }
    const DecayReport d = oscillatory_decay(spec, {10.0, 20.0, 40.0, 80.0});
    const double first = d.rows.front().max();
    CheckRunner::at_most(r, first > 0.0 ? d.max_scaled / first : 0.0, 2.0);
    r.detail = "max over s of s * sup|integral|, relative to s = 10";
  });

  const bool compare_on = asymptotic_comparison_enabled(spec);
  const std::string compare_off = spec.d == 0.0 ? "d = 0: asymptotic comparison disabled"
                                                : "a2 = 0: asymptotic comparison disabled";
  std::vector<ComparisonRow> rows;
  if (compare_on) {
    const Spectrum spectrum = find_eigenvalues(spec, settings.n_min, settings.n_max, sopt);
    rows = compare_rows(spec, spectrum);
  }
  std::vector<double> lead, refined;
  for (const auto& row : rows) {
    lead.push_back(row.scaled_lead);
    if (row.scaled_refined) refined.push_back(*row.scaled_refined);
  }
  const bool refined_on = compare_on && !refined.empty();
  const std::string refined_off = !compare_on ? compare_off : refined_unavailable_reason(spec);

  runner.run("leading_order", [&](CheckResult& r) {
    if (!compare_on) return CheckRunner::skip(r, compare_off);
    runner.against_frozen(r, "scaled_lead_max", *std::max_element(lead.begin(), lead.end()));
  });
  runner.run("leading_order_spread", [&](CheckResult& r) {
    if (!compare_on) return CheckRunner::skip(r, compare_off);
    const double m = median(lead);
    CheckRunner::at_most(r, m > 0 ? *std::max_element(lead.begin(), lead.end()) / m : 0.0, 5.0);
  });
  runner.run("refined_order", [&](CheckResult& r) {
    if (!refined_on) return CheckRunner::skip(r, refined_off);
    runner.against_frozen(r, "scaled_refined_max", *std::max_element(refined.begin(), refined.end()));
  });
  runner.run("refined_order_spread", [&](CheckResult& r) {
    if (!refined_on) return CheckRunner::skip(r, refined_off);
    const double m = median(refined);
    CheckRunner::at_most(r, m > 0 ? *std::max_element(refined.begin(), refined.end()) / m : 0.0, 5.0);
  });
  runner.run("refined_more_accurate", [&](CheckResult& r) {
    if (!refined_on) return CheckRunner::skip(r, refined_off);
    double worst = 0.0;
    for (const auto& row : rows) {
      if (row.n >= 10 && row.err_refined) worst = std::max(worst, *row.err_refined / row.err_lead);
    }
    r.measured = worst;
    r.threshold = 1.0;
    r.status = worst < 1.0 ? CheckStatus::Pass : CheckStatus::Fail;
    r.detail = "max over n >= 10 of |s_n - s_refined| / |s_n - s_leading|";
  });

  std::vector<int> ef_n;
  for (int n : {10, 15, 20, 30}) {
    if (n >= settings.n_reliable) ef_n.push_back(n);
  }
  std::vector<Eigenpair> ef_pairs;
  if (compare_on) {
    for (int n : ef_n) ef_pairs.push_back(eigenpair_for(spec, n, sopt));
  }
  runner.run("eigenfunction_leading", [&](CheckResult& r) {
    if (!compare_on) return CheckRunner::skip(r, compare_off);
    double worst = 0.0;
    for (const auto& p : ef_pairs) {
      worst = std::max(worst, p.n * eigenfunction_error(spec, p, tol, [&](double x) {
                                return leading_eigenfunction(spec, p.n, x);
                              }));
    }
    runner.against_frozen(r, "eigenfunction_lead_max", worst);
  });
  std::vector<double> ef_refined;
  runner.run("eigenfunction_refined", [&](CheckResult& r) {
    if (!refined_on) return CheckRunner::skip(r, refined_off);
    for (const auto& p : ef_pairs) {
      const RefinedEigenfunction model(spec, p.n);
      ef_refined.push_back(double(p.n) * p.n * eigenfunction_error(spec, p, tol, model));
    }
    runner.against_frozen(r, "eigenfunction_refined_max",
                          *std::max_element(ef_refined.begin(), ef_refined.end()));
  });
  runner.run("eigenfunction_refined_spread", [&](CheckResult& r) {
    if (!refined_on) return CheckRunner::skip(r, refined_off);
    const auto [lo, hi] = std::minmax_element(ef_refined.begin(), ef_refined.end());
    CheckRunner::at_most(r, *lo > 0 ? *hi / *lo : 0.0, 3.0);
  });
  return report;
}

int cmd_spectrum(const RunOptions& options, int n_min, int n_max, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("need 1 <= n-min <= n-max");
    const LoadedConfig cfg = load_config(options.config);
    const Spectrum spectrum =
        find_eigenvalues(cfg.spec, n_min, n_max, spectral_options(options, cfg.settings));
    CsvTable table({"n", "s", "lambda", "f_residual", "bracket_lo", "bracket_hi"});
    provenance(table, "spectrum", cfg, options);
    for (const auto& p : spectrum.pairs) {
      table.row({std::to_string(p.n), format_number(p.s), format_number(p.lambda),
                 format_number(p.f_residual), format_number(p.bracket_lo),
                 format_number(p.bracket_hi)});
    }
    emit(options, table.str(), out);
    for (const auto& w : spectrum.warnings) err << "warning: " << w << '\n';
    for (const auto& p : spectrum.pairs) {
      if (p.suspect) err << "warning: root n = " << p.n << " near s = " << p.s << " is suspect\n";
    }
    return spectrum.clean() ? kExitOk : kExitCheckFailed;
  });
}

int cmd_compare(const RunOptions& options, std::optional<int> n_min, std::optional<int> n_max,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const LoadedConfig cfg = load_config(options.config);
    const int lo = n_min.value_or(cfg.settings.n_min);
    const int hi = n_max.value_or(cfg.settings.n_max);
    if (lo < 1 || hi < lo) throw std::invalid_argument("need 1 <= n-min <= n-max");
    const Spectrum spectrum =
        find_eigenvalues(cfg.spec, lo, hi, spectral_options(options, cfg.settings));
    const std::vector<ComparisonRow> rows = compare_rows(cfg.spec, spectrum);

    double max_lead = 0.0;
    std::optional<double> max_refined;
    for (const auto& r : rows) {
      max_lead = std::max(max_lead, r.scaled_lead);
      if (r.scaled_refined) max_refined = std::max(max_refined.value_or(0.0), *r.scaled_refined);
    }
    const std::string summary = "max_scaled_lead=" + format_number(max_lead) +
                                " max_scaled_refined=" +
                                (max_refined ? format_number(*max_refined) : "absent");

    CsvTable table({"n", "s_numeric", "s_leading", "s_refined", "err_lead", "err_refined",
                    "scaled_lead", "scaled_refined", "f_residual"});
    provenance(table, "compare", cfg, options);
    table.comment(summary);
    for (const auto& r : rows) {
      table.row({std::to_string(r.n), format_number(r.s_numeric), format_number(r.s_leading),
                 optional_cell(r.s_refined), format_number(r.err_lead),
                 optional_cell(r.err_refined), format_number(r.scaled_lead),
                 optional_cell(r.scaled_refined), format_number(r.f_residual)});
    }
    emit(options, table.str(), out);
    err << summary << '\n';

    if (!spectrum.clean()) {
      for (const auto& w : spectrum.warnings) err << "warning: " << w << '\n';
      return kExitCheckFailed;
    }
    if (!asymptotic_comparison_enabled(cfg.spec)) {
      err << (cfg.spec.d == 0.0 ? "d = 0" : "a2 = 0") << ": asymptotic comparison disabled\n";
      return kExitOk;
    }
    const auto& th = cfg.settings.thresholds;
    int code = kExitOk;
    auto check = [&](const char* key, double value) {
      auto it = th.find(key);
      if (it == th.end()) {
        err << "no threshold '" << key << "' in config\n";
        code = kExitCheckFailed;
      } else if (!(value <= it->second)) {
        err << key << " exceeded: " << format_number(value) << " > " << format_number(it->second) << '\n';
        code = kExitCheckFailed;
      }
    };
    check("scaled_lead_max", max_lead);
    if (max_refined) check("scaled_refined_max", *max_refined);
    return code;
  });
}

int cmd_eigenfunction(const RunOptions& options, int n, int samples, const std::string& variant,
                      std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (samples < 2) throw std::invalid_argument("samples must be at least 2 per subinterval");
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    if (variant != "numeric" && variant != "leading" && variant != "refined") {
      throw std::invalid_argument("variant must be numeric, leading or refined");
    }
    const LoadedConfig cfg = load_config(options.config);
    const ProblemSpec& spec = cfg.spec;

    std::function<double(double, Side)> model;
    std::optional<Solution> sol;
    std::optional<RefinedEigenfunction> refined;
    double s = leading_s(spec, n);
    if (variant == "numeric") {
      const Eigenpair pair = eigenpair_for(spec, n, spectral_options(options, cfg.settings));
      s = pair.s;
      sol = solve(spec, pair.lambda, options.tol_ode);
      model = [&](double x, Side side) { return side == Side::Left ? sol->w1(x).w : sol->w2(x).w; };
    } else if (variant == "leading") {
      model = [&](double x, Side side) { return leading_eigenfunction(spec, n, x, side); };
    } else {
      refined.emplace(spec, n);
      model = [&](double x, Side side) { return (*refined)(x, side); };
    }

    CsvTable table({"x", "u"});
    provenance(table, "eigenfunction", cfg, options);
    table.comment("variant=" + variant + " n=" + std::to_string(n) + " s=" + format_number(s));
    for (Side side : {Side::Left, Side::Right}) {
      const double lo = side_lo(side);
      const double hi = side_hi(side);
      for (int i = 0; i < samples; ++i) {
        const double x = i + 1 == samples ? hi : lo + (hi - lo) * i / (samples - 1);
        table.row({format_number(x), format_number(model(x, side))});
      }
    }
    emit(options, table.str(), out);
    return kExitOk;
  });
}

int cmd_check(const RunOptions& options, CheckMode mode, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    LoadedConfig cfg = load_config(options.config, false);
    std::map<std::string, double> frozen;
    const CheckReport report = run_checks(cfg, options, mode, &frozen);
    emit(options, report.to_json(options.timing).dump(2) + "\n", out);
    if (mode == CheckMode::Freeze && !frozen.empty()) {
      nlohmann::json& th = cfg.doc["harness"]["thresholds"];
      for (const auto& [key, value] : frozen) th[key] = value;
      write_atomic(cfg.path, cfg.doc.dump(2) + "\n");
      err << "froze " << frozen.size() << " thresholds into " << cfg.path.string() << '\n';
    }
    if (const CheckResult* f = report.first_failure()) {
      err << "check failed: " << f->name << '\n';
      return kExitCheckFailed;
    }
    return kExitOk;
  });
}

int cmd_trajectory(const RunOptions& options, double lambda, int samples, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (samples < 2) throw std::invalid_argument("samples must be at least 2 per subinterval");
    const LoadedConfig cfg = load_config(options.config);
    const Solution sol = solve(cfg.spec, lambda, options.tol_ode);
    CsvTable table({"x", "w", "w_prime"});
    provenance(table, "trajectory", cfg, options);
    table.comment("lambda=" + format_number(lambda));
    for (const Trajectory* w : {&sol.w1, &sol.w2}) {
      for (int i = 0; i < samples; ++i) {
        const double x = i + 1 == samples ? w->upper()
                                          : w->lower() + (w->upper() - w->lower()) * i / (samples - 1);
        const State st = (*w)(x);
        table.row({format_number(x), format_number(st.w), format_number(st.dw)});
      }
    }
    emit(options, table.str(), out);
    return kExitOk;
  });
}

int cmd_predict(const RunOptions& options, int n_min, int n_max, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("need 1 <= n-min <= n-max");
    const LoadedConfig cfg = load_config(options.config);
    CsvTable table({"n", "s_leading", "s_refined", "delta_n", "A", "B", "C", "D"});
    provenance(table, "predict", cfg, options);
    std::string reason;
    for (int n = n_min; n <= n_max; ++n) {
      const AsymptoticPrediction p = predict(cfg.spec, n);
      reason = p.unavailable_reason;
      table.row({std::to_string(n), format_number(p.s_leading), optional_cell(p.s_refined),
                 optional_cell(p.delta_n), format_number(p.terms.A), format_number(p.terms.B),
                 format_number(p.terms.C), format_number(p.terms.D)});
    }
    if (!reason.empty()) table.comment("refined columns absent: " + reason);
    emit(options, table.str(), out);
    return kExitOk;
  });
}

}  // namespace rsl
