// couponq: expected number of generated tests until every question in every
// bank has appeared, with table/figure reproduction and validation.
//
// Exit codes: 0 success, 1 validation failure, 2 bad arguments,
//             3 computation cap exceeded, 4 I/O failure.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "couponq/couponq.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kBadArguments = 2,
  kCapExceeded = 3,
  kIoFailure = 4,
};

constexpr const char* kOutDirEnv = "COUPONQ_OUT_DIR";

int exit_code_for(const couponq::Error& e) {
  switch (e.kind()) {
    case couponq::ErrorKind::cap_exceeded: return kCapExceeded;
    case couponq::ErrorKind::quadrature_failure: return kCapExceeded;
    default: return kBadArguments;
  }
}

std::filesystem::path default_output(const std::string& stem, const std::string& ext) {
  const char* dir = std::getenv(kOutDirEnv);
  return std::filesystem::path(dir && *dir ? dir : ".") / (stem + "." + ext);
}

// Writes through `emit` to stdout for "-", otherwise to the file.
template <typename Emit>
int write_output(const std::string& out, Emit&& emit) {
  if (out == "-") {
    emit(std::cout);
    return std::cout ? kOk : kIoFailure;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open " << out << " for writing\n";
    return kIoFailure;
  }
  emit(file);
  file.flush();
  if (!file) {
    std::cerr << "error: write to " << out << " failed\n";
    return kIoFailure;
  }
  std::cerr << "wrote " << out << '\n';
  return kOk;
}

int cmd_expect(int a, std::int64_t q, double eps, std::int64_t n_cap) {
  couponq::TruncationPolicy policy;
  policy.eps_term = eps;
  policy.n_cap = n_cap;
  const couponq::BankSpec spec(a, q);
  const couponq::SeriesValue v = couponq::expected_tests(spec, policy);
  nlohmann::ordered_json j;
  j["a"] = a;
  j["q"] = q;
  j["expected"] = v.value;
  j["tail_bound"] = v.tail_bound;
  j["terms"] = v.terms;
  std::cout << j.dump() << '\n';
  return kOk;
}

int cmd_table(const std::string& name, std::string out) {
  const auto table = couponq::parse_table_name(name);
  if (!table) {
    std::cerr << "error: unknown table '" << name << "'\n";
    return kBadArguments;
  }
  if (out.empty()) out = default_output(name, "csv").string();
  const couponq::TableArtifact t = couponq::build_table(*table);
  return write_output(out, [&](std::ostream& os) { couponq::write_csv(os, t); });
}

int cmd_figure(const std::string& name, std::string out, const std::string& format) {
  const auto table = couponq::parse_table_name(name);
  if (!table || (*table != couponq::TableName::fig_low && *table != couponq::TableName::fig_high)) {
    std::cerr << "error: figure must be fig_low or fig_high, got '" << name << "'\n";
    return kBadArguments;
  }
  if (out.empty()) out = default_output(name, format).string();
  const couponq::TableArtifact t = couponq::build_table(*table);
  return write_output(out, [&](std::ostream& os) {
    if (format == "svg")
      couponq::write_svg(os, t);
    else
      couponq::write_csv(os, t);
  });
}

int cmd_simulate(int a, std::int64_t q, std::int64_t reps, std::uint64_t seed, int workers,
                 bool histogram) {
  const couponq::SimulationResult r =
      couponq::run_experiment({couponq::BankSpec(a, q), reps, seed, workers});
  std::cout << couponq::to_json_line(r, histogram);
  return kOk;
}

int cmd_validate(const std::string& level) {
  couponq::ValidationOptions opts;
  opts.level = level == "full" ? couponq::ValidationLevel::full : couponq::ValidationLevel::quick;
  const auto checks = couponq::run_validation(opts);
  std::size_t failed = 0;
  for (const auto& c : checks) {
    couponq::print_check(std::cout, c);
    failed += c.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "OK" : "FAILED") << ": " << checks.size() - failed << "/"
            << checks.size() << " checks passed (" << level << ")\n";
  return failed == 0 ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupon-collector analysis of randomly generated multi-question tests"};
  app.require_subcommand(1);

  int a = 0;
  std::int64_t q = 0;

  auto* expect = app.add_subcommand("expect", "Print E N_q with its certified tail bound");
  double eps = 1e-12;
  std::int64_t n_cap = 100'000;
  expect->add_option("--a", a, "Alternatives per bank")->required();
  expect->add_option("--q", q, "Questions per test")->required();
  expect->add_option("--policy-eps", eps, "Series term threshold")->capture_default_str();
  expect->add_option("--n-cap", n_cap, "Hard cap on summed terms")->capture_default_str();

  const std::string tables = "en_q, centred, sd_bounds, fig_low, fig_high";
  auto* table = app.add_subcommand("table", "Write a reference table as CSV");
  std::string table_name;
  std::string table_out;
  table->add_option("name", table_name, "One of: " + tables)->required();
  table->add_option("--out", table_out,
                    std::string("Output path ('-' for stdout); default $") + kOutDirEnv +
                        "/<name>.csv");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the N_q distribution");
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  bool histogram = false;
  simulate->add_option("--a", a, "Alternatives per bank")->required();
  simulate->add_option("--q", q, "Questions per test")->required();
  simulate->add_option("--reps", reps, "Replications")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "Master seed")->required();
  simulate->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_flag("--histogram", histogram, "Include the histogram in the output");

  auto* validate = app.add_subcommand("validate", "Run the validation checks");
  std::string level = "quick";
  validate->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();

  auto* figure = app.add_subcommand("figure", "Write figure data as SVG or CSV");
  std::string figure_name;
  std::string figure_out;
  std::string format = "svg";
  figure->add_option("name", figure_name, "fig_low or fig_high")->required();
  figure->add_option("--out", figure_out, "Output path ('-' for stdout)");
  figure->add_option("--format", format, "svg or csv")
      ->check(CLI::IsMember({"svg", "csv"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadArguments;
  }

  try {
    if (*expect) return cmd_expect(a, q, eps, n_cap);
    if (*table) return cmd_table(table_name, table_out);
    if (*simulate) return cmd_simulate(a, q, reps, seed, workers, histogram);
    if (*validate) return cmd_validate(level);
    if (*figure) return cmd_figure(figure_name, figure_out, format);
  } catch (const couponq::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kBadArguments;
}
