#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "rsl/errors.hpp"
#include "rsl/format.hpp"
#include "rsl/harness.hpp"
#include "support.hpp"

using namespace rsl;
namespace fs = std::filesystem;

namespace {

struct Captured {
  int code;
  std::string out;
  std::string err;
};

template <class Command>
Captured capture(Command&& command) {
  std::ostringstream out, err;
  const int code = command(out, err);
  return {code, out.str(), err.str()};
}

RunOptions options_for(const std::string& name) {
  RunOptions o;
  o.config = testing::config_path(name);
  return o;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "rsl_harness_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("format_number: 17 significant digits, round trip") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, 1e-9}) {
    const std::string s = format_number(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(NAN) == "nan");
}

TEST_CASE("fnv1a64: reference vectors") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");
}

TEST_CASE("csv: comments, header, rows") {
  CsvTable t({"a", "b"});
  t.comment("digest=1");
  t.row({"1", "2"});
  CHECK(t.str() == "# digest=1\na,b\n1,2\n");
  CHECK_THROWS_AS(t.row({"1"}), std::invalid_argument);
}

TEST_CASE("write_atomic: replaces the target and leaves no temporary") {
  const fs::path target = scratch_dir() / "atomic.txt";
  write_atomic(target, "first\n");
  write_atomic(target, "second\n");
  CHECK(slurp(target) == "second\n");
  CHECK_FALSE(fs::exists(target.string() + ".tmp"));
  CHECK_THROWS(write_atomic(scratch_dir() / "missing_dir" / "x.txt", "x"));
}

TEST_CASE("settings: harness section") {
  const LoadedConfig cfg = load_config(testing::config_path("canonical"));
  CHECK(cfg.settings.n_min == 10);
  CHECK(cfg.settings.n_max == 40);
  CHECK(cfg.settings.thresholds.count("scaled_refined_max") == 1);
  CHECK(cfg.digest.size() == 16);
  CHECK_THROWS_AS(HarnessSettings::from_config(nlohmann::json{{"harness", 3}}), ConfigError);
  CHECK_THROWS_AS(HarnessSettings::from_config(nlohmann::json{{"harness", {{"n_min", 5}, {"n_max", 4}}}}),
                  ConfigError);
  const HarnessSettings defaults = HarnessSettings::from_config(nlohmann::json::object());
  CHECK(defaults.n_reliable == 8);
}

TEST_CASE("spectrum: rows, provenance and determinism") {
  const RunOptions o = options_for("trivial");
  const Captured a = capture([&](auto& out, auto& err) { return cmd_spectrum(o, 1, 10, out, err); });
  const Captured b = capture([&](auto& out, auto& err) { return cmd_spectrum(o, 1, 10, out, err); });
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  std::istringstream lines(a.out);
  std::string line;
  int comments = 0, rows = 0;
  while (std::getline(lines, line)) (line[0] == '#' ? comments : rows)++;
  CHECK(comments == 2);
  CHECK(rows == 11);
  CHECK(a.out.find("config_digest=") != std::string::npos);
  CHECK(a.out.find("\n5,5.44215559") != std::string::npos);
}

TEST_CASE("spectrum: exit codes") {
  auto run = [](const std::string& name, int lo, int hi) {
    return capture([&](auto& out, auto& err) { return cmd_spectrum(options_for(name), lo, hi, out, err); });
  };
  const Captured bad = run("bad_boundary", 1, 3);
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("|a1|+|a2| = 0") != std::string::npos);
  CHECK(run("does_not_exist", 1, 3).code == kExitUsage);
  CHECK(run("trivial", 4, 3).code == kExitUsage);
  CHECK(run("bad_delay", 1, 3).code == kExitUsage);
  CHECK(run("trivial_d0", 1, 3).err.find("global_scan is authoritative") != std::string::npos);
}

TEST_CASE("spectrum: output file is written atomically") {
  RunOptions o = options_for("trivial");
  o.out = scratch_dir() / "spectrum.csv";
  fs::remove(o.out);
  const Captured c = capture([&](auto& out, auto& err) { return cmd_spectrum(o, 1, 3, out, err); });
  CHECK(c.code == kExitOk);
  CHECK(c.out.empty());
  CHECK(slurp(o.out).find("n,s,lambda") != std::string::npos);
}

TEST_CASE("compare: trivial problem") {
  const Captured c = capture([](auto& out, auto& err) {
    return cmd_compare(options_for("trivial"), 5, 30, out, err);
  });
  CHECK(c.code == kExitOk);
  CHECK(c.err.find("max_scaled_refined=") != std::string::npos);
  const auto rows = compare_rows(testing::load("trivial"),
                                 find_eigenvalues(testing::load("trivial"), 5, 30));
  REQUIRE(rows.size() == 26);
  for (const auto& r : rows) {
    CHECK(r.err_lead >= 0.0);
    CHECK(*r.scaled_refined <= 0.01);
    CHECK(*r.scaled_refined < r.scaled_lead);
  }
}

TEST_CASE("compare: refined columns absent when unavailable") {
  const ProblemSpec spec = testing::make({{"a1", 1}, {"a2", 0}});
  const auto rows = compare_rows(spec, find_eigenvalues(spec, 8, 10));
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK_FALSE(r.s_refined);
    CHECK_FALSE(r.scaled_refined);
  }
  CHECK_FALSE(asymptotic_comparison_enabled(spec));
  CHECK_FALSE(asymptotic_comparison_enabled(testing::load("trivial_d0")));
  CHECK(asymptotic_comparison_enabled(testing::load("canonical")));
}

TEST_CASE("eigenfunction: variants and usage errors") {
  const RunOptions o = options_for("trivial_d0");
  const Captured numeric = capture([&](auto& out, auto& err) {
    return cmd_eigenfunction(o, 2, 9, "numeric", out, err);
  });
  REQUIRE(numeric.code == kExitOk);
  std::istringstream lines(numeric.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line[0] == '#' || line[0] == 'x') continue;
    const auto comma = line.find(',');
    const double x = std::stod(line.substr(0, comma));
    const double u = std::stod(line.substr(comma + 1));
    CHECK(u == doctest::Approx(std::cos(2 * x)).scale(1).epsilon(1e-8));
    ++rows;
  }
  CHECK(rows == 18);

  auto code = [](const RunOptions& opt, int samples, const char* variant) {
    return capture([&](auto& out, auto& err) {
             return cmd_eigenfunction(opt, 10, samples, variant, out, err);
           }).code;
  };
  CHECK(code(o, 1, "numeric") == kExitUsage);
  CHECK(code(o, 5, "bogus") == kExitUsage);
  CHECK(code(options_for("canonical"), 5, "leading") == kExitOk);
  CHECK(code(options_for("canonical"), 5, "refined") == kExitOk);
}

TEST_CASE("trajectory and predict commands") {
  const Captured t = capture([](auto& out, auto& err) {
    return cmd_trajectory(options_for("trivial"), 4.0, 3, out, err);
  });
  CHECK(t.code == kExitOk);
  CHECK(t.out.find("x,w,w_prime") != std::string::npos);
  CHECK(capture([](auto& out, auto& err) {
          return cmd_trajectory(options_for("trivial"), -1.0, 3, out, err);
        }).code == kExitUsage);

  const Captured p = capture([](auto& out, auto& err) {
    return cmd_predict(options_for("trivial"), 5, 5, out, err);
  });
  CHECK(p.code == kExitOk);
  CHECK(p.out.find("5,5.5,5.44212547") != std::string::npos);
}

TEST_CASE("check: trivial problem passes") {
  const Captured c = capture([](auto& out, auto& err) {
    return cmd_check(options_for("trivial"), CheckMode::Check, out, err);
  });
  CHECK(c.code == kExitOk);
  const nlohmann::json report = nlohmann::json::parse(c.out);
  CHECK(report["passed"] == true);
  CHECK(report["first_failure"].is_null());
  CHECK_FALSE(report["checks"][0].contains("runtime_s"));
}

TEST_CASE("check: delay violation gates the suite") {
  const Captured c = capture([](auto& out, auto& err) {
    return cmd_check(options_for("bad_delay"), CheckMode::Check, out, err);
  });
  CHECK(c.code == kExitCheckFailed);
  CHECK(c.err.find("delay_conditions") != std::string::npos);
  const nlohmann::json report = nlohmann::json::parse(c.out);
  CHECK(report["first_failure"] == "delay_conditions");
  for (std::size_t i = 1; i < report["checks"].size(); ++i) {
    CHECK(report["checks"][i]["status"] == "skipped");
  }
}

TEST_CASE("check: freeze records thresholds, check asserts them") {
  const fs::path copy = scratch_dir() / "freeze.json";
  nlohmann::json doc = nlohmann::json::parse(slurp(testing::config_path("trivial")));
  doc.erase("harness");
  write_atomic(copy, doc.dump());

  RunOptions o;
  o.config = copy;
  const Captured missing = capture([&](auto& out, auto& err) { return cmd_check(o, CheckMode::Check, out, err); });
  CHECK(missing.code == kExitCheckFailed);

  const Captured frozen = capture([&](auto& out, auto& err) { return cmd_check(o, CheckMode::Freeze, out, err); });
  CHECK(frozen.code == kExitOk);
  const LoadedConfig cfg = load_config(copy);
  CHECK(cfg.settings.thresholds.size() == 5);

  const Captured checked = capture([&](auto& out, auto& err) { return cmd_check(o, CheckMode::Check, out, err); });
  CHECK(checked.code == kExitOk);
  CHECK(load_config(copy).digest == load_config(testing::config_path("trivial")).digest);
}
