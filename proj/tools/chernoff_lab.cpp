// chernoff_lab: bound verification, rate fitting, numerical-range
// certification and constant tables from the command line.
//
// Exit codes: 0 all checks passed, 1 a bound or rate check failed,
// 2 usage or I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chernoff/chernoff.hpp"

namespace {

using namespace chernoff;
using harness::ExperimentConfig;

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << bytes;
  out.close();
  if (!out) throw IoError("write to " + path + " failed");
}

void add_experiment_flags(CLI::App* cmd, ExperimentConfig& cfg, std::string& format, std::string& out) {
  std::vector<std::string> kinds;
  for (const auto& k : harness::registry()) kinds.emplace_back(k.name);
  cmd->add_option("kind", cfg.kind, "Experiment kind")->required()->check(CLI::IsMember(kinds));
  cmd->add_option("--dim", cfg.dim, "Matrix dimension")->check(CLI::Range(1, 256));
  cmd->add_option("--alpha", cfg.alpha, "Semi-angle alpha in [0, pi/2)");
  cmd->add_option("--seed", cfg.seed, "Base seed");
  cmd->add_option("--trials", cfg.trials, "Number of seeded draws")->check(CLI::PositiveNumber);
  cmd->add_option("--nmax", cfg.nmax, "Largest n")->check(CLI::PositiveNumber);
  cmd->add_option("--t", cfg.ts, "Comma-separated times")->delimiter(',');
  cmd->add_option("--vectors", cfg.vectors, "Unit vectors per draw")->check(CLI::PositiveNumber);
  cmd->add_flag("--dense", cfg.dense_n, "Sweep every n in [1, nmax] instead of powers of two");
  cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", out, "Output path (stdout when omitted)");
}

int run_verify(const ExperimentConfig& cfg, const std::string& format, const std::string& out) {
  const auto report = harness::run_experiment(cfg);
  write_output(out, harness::emit_report(report, harness::format_from_string(format)));
  const auto& s = report.summary;
  std::fprintf(stderr, "%s: %zu records, %zu failed, max ratio %.6g, excluded draws %zu\n",
               cfg.kind.c_str(), s.records, s.failed, s.max_ratio, s.excluded_draws);
  return s.all_passed ? kPass : kViolation;
}

int run_rate(const ExperimentConfig& cfg, const std::string& format, const std::string& out) {
  const auto report = harness::run_experiment(cfg);
  if (!out.empty()) write_output(out, harness::emit_report(report, harness::format_from_string(format)));
  const auto& s = report.summary;
  if (!s.rate) {
    std::printf("%s: fewer than 5 positive points at n >= %llu, no rate fitted\n", cfg.kind.c_str(),
                static_cast<unsigned long long>(cfg.fit_min_n));
  } else {
    std::printf("%s: p = %.6f  prefactor = %.6g  r^2 = %.6f  n in [%g, %g]  points %zu  dropped %zu\n",
                cfg.kind.c_str(), s.rate->exponent_p, s.rate->prefactor, s.rate->r_squared, s.rate->n_min,
                s.rate->n_max, s.rate->points, s.rate->dropped_zero);
  }
  if (s.rate_window) {
    std::printf("asserted window [%g, %g]: %s\n", s.rate_window->first, s.rate_window->second,
                s.rate_ok ? "ok" : "FAILED");
  }
  for (const auto& [k, v] : s.constants) std::printf("%s = %.17g\n", k.c_str(), v);
  return s.all_passed ? kPass : kViolation;
}

Operator read_matrix(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("matrix file: ") + e.what());
  }
  try {
    const int dim = j.at("dim").get<int>();
    const auto re = j.at("re").get<std::vector<std::vector<double>>>();
    const auto im = j.at("im").get<std::vector<std::vector<double>>>();
    if (dim < 1 || re.size() != static_cast<std::size_t>(dim) || im.size() != static_cast<std::size_t>(dim)) {
      throw InvalidInput("matrix file: re and im must have dim rows");
    }
    Operator m(dim, dim);
    for (int r = 0; r < dim; ++r) {
      if (re[r].size() != static_cast<std::size_t>(dim) || im[r].size() != static_cast<std::size_t>(dim)) {
        throw InvalidInput("matrix file: rows must have dim entries");
      }
      for (int c = 0; c < dim; ++c) m(r, c) = cplx(re[r][c], im[r][c]);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("matrix file: ") + e.what());
  }
}

int run_numrange(const std::string& input, double alpha, int points) {
  const Operator c = read_matrix(input);
  const auto cert = certify_quasi_sectorial(c, alpha, points);
  if (const auto* ok = std::get_if<SectorCertificate>(&cert)) {
    std::printf("certified: W(C) in D_alpha, alpha = %.17g, %zu boundary points, max distance %.3g\n",
                ok->alpha_hat, ok->boundary_points.size(), ok->max_violation);
  } else {
    const auto& bad = std::get<SectorFailure>(cert);
    std::printf("not certified at alpha = %.17g: boundary point %.17g%+.17gi is %.3g outside D_alpha\n",
                bad.alpha, bad.worst_point.real(), bad.worst_point.imag(), bad.distance);
  }
  try {
    const auto hat = min_semi_angle(c, points);
    if (hat) {
      std::printf("min semi-angle = %.17g\n", *hat);
    } else {
      std::printf("min semi-angle: none below pi/2\n");
    }
  } catch (const NotAContraction&) {
    std::printf("min semi-angle: not a contraction\n");
  }
  return certified(cert) ? kPass : kViolation;
}

int run_constants(double alpha) {
  const auto k = bounds::k_alpha(alpha);
  std::printf("alpha = %.17g\n", alpha);
  std::printf("K_alpha = %.17g\n", k.value);
  std::printf("argmin_alpha_prime = %.17g\n", k.argmin_alpha_prime);
  std::printf("L_alpha = %.17g\n", 2.0 * k.value + 2.0);
  std::printf("M_alpha_upper = %.17g\n", bounds::euler_upper_constant(alpha));
  return kPass;
}

int run_merge(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<harness::Report> reports;
  for (const auto& path : inputs) reports.push_back(harness::parse_report(read_file(path)));
  const auto merged = harness::merge_reports(reports);
  const bool csv = out.size() >= 4 && out.compare(out.size() - 4, 4, ".csv") == 0;
  write_output(out, harness::emit_report(merged, csv ? harness::Format::csv : harness::Format::json));
  return merged.summary.all_passed ? kPass : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chernoff-type approximation bounds: verification and rate experiments"};
  app.require_subcommand(1);

  ExperimentConfig verify_cfg;
  std::string verify_format = "csv";
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "Run an experiment and emit its records");
  add_experiment_flags(verify, verify_cfg, verify_format, verify_out);

  ExperimentConfig rate_cfg;
  std::string rate_format = "json";
  std::string rate_out;
  auto* rate = app.add_subcommand("rate", "Run an experiment and print the fitted convergence rate");
  add_experiment_flags(rate, rate_cfg, rate_format, rate_out);
  rate->add_option("--fit-min-n", rate_cfg.fit_min_n, "Smallest n used in the fit");

  std::string matrix_path;
  double nr_alpha = 0.0;
  int nr_points = tol::default_boundary_points;
  auto* numrange = app.add_subcommand("numrange", "Certify W(C) in D_alpha for a matrix file");
  numrange->add_option("--input", matrix_path, "Matrix JSON {dim, re, im}")->required();
  numrange->add_option("--alpha", nr_alpha, "Semi-angle")->required();
  numrange->add_option("--points", nr_points, "Boundary directions")->check(CLI::Range(16, 1 << 20));

  double c_alpha = 0.0;
  auto* constants = app.add_subcommand("constants", "Print K_alpha, its argmin, L_alpha and M_alpha");
  constants->add_option("--alpha", c_alpha, "Semi-angle")->required();

  std::vector<std::string> merge_inputs;
  std::string merge_out;
  auto* report = app.add_subcommand("report", "Merge reports");
  report->add_option("--merge", merge_inputs, "Report files (CSV or JSON)")->required()->expected(1, -1);
  report->add_option("--out", merge_out, "Output path; .csv selects CSV, otherwise JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify) return run_verify(verify_cfg, verify_format, verify_out);
    if (*rate) return run_rate(rate_cfg, rate_format, rate_out);
    if (*numrange) return run_numrange(matrix_path, nr_alpha, nr_points);
    if (*constants) return run_constants(c_alpha);
    if (*report) return run_merge(merge_inputs, merge_out);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const chernoff::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
