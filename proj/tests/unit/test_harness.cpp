#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "chernoff/chernoff.hpp"
#include "gen.hpp"

using namespace chernoff;
using namespace chernoff::harness;
using std::numbers::pi;

namespace {

ExperimentConfig small(std::string kind) {
  ExperimentConfig c;
  c.kind = std::move(kind);
  c.dim = 3;
  c.trials = 3;
  c.nmax = 64;
  c.vectors = 4;
  c.ts = {0.5, 1.0};
  return c;
}

Report one_record_report() {
  Report r;
  r.header["kind"] = "unit";
  r.records.push_back(make_record("unit/0", 4, 1.0, 0.1, 0.5));
  summarize_records(r.summary, r.records);
  return r;
}

}  // namespace

TEST(Records, SlackRule) {
  EXPECT_TRUE(within_bound(1.0, 1.0));
  EXPECT_TRUE(within_bound(1.0 + 1e-9, 1.0));
  EXPECT_FALSE(within_bound(1.0 + 2e-8, 1.0));
  EXPECT_TRUE(within_bound(1e-10, 0.0));
  EXPECT_FALSE(within_bound(2e-10, 0.0));
}

TEST(Records, RatioConventions) {
  EXPECT_EQ(make_record("a", 1, 0.0, 0.0, 0.0).ratio, 0.0);
  EXPECT_TRUE(make_record("a", 1, 0.0, 0.0, 0.0).passed);
  EXPECT_EQ(make_record("a", 1, 0.0, 1.0, 0.0).ratio, HUGE_VAL);
  EXPECT_FALSE(make_record("a", 1, 0.0, 1.0, 0.0).passed);
  const auto r = make_record("a", 1, 0.0, 0.3, 0.6);
  EXPECT_EQ(r.ratio, 0.5);
  EXPECT_TRUE(r.passed);
}

TEST(FitRate, ExactInversePowerLaw) {
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k <= 10; ++k) pts.emplace_back(std::ldexp(1.0, k), std::ldexp(1.0, -k));
  const auto r = fit_rate(pts);
  EXPECT_NEAR(r.exponent_p, 1.0, 1e-12);
  EXPECT_NEAR(r.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(r.prefactor, 1.0, 1e-12);
  EXPECT_EQ(r.points, 11U);
  EXPECT_EQ(r.n_min, 1.0);
  EXPECT_EQ(r.n_max, 1024.0);
}

TEST(FitRate, CubeRootWithPrefactor) {
  std::vector<std::pair<double, double>> pts;
  for (int n = 1; n <= 4096; n *= 2) pts.emplace_back(n, 5.0 * std::pow(n, -1.0 / 3.0));
  const auto r = fit_rate(pts);
  EXPECT_NEAR(r.exponent_p, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.prefactor, 5.0, 1e-11);
}

TEST(FitRate, ScalarEulerIsFirstOrder) {
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k <= 10; ++k) {
    const double n = std::ldexp(1.0, k);
    pts.emplace_back(n, std::abs(std::pow(1.0 + 1.0 / n, -n) - std::exp(-1.0)));
  }
  const auto r = fit_rate(pts);
  EXPECT_GE(r.exponent_p, 0.9);
  EXPECT_LE(r.exponent_p, 1.1);
}

TEST(FitRate, DropsZerosAndNeedsFivePoints) {
  std::vector<std::pair<double, double>> pts{{1, 0.0}, {2, 0.5}, {4, 0.25}, {8, 0.0}, {16, 1.0 / 16}};
  EXPECT_THROW(fit_rate(pts), InsufficientData);
  pts.emplace_back(32, 1.0 / 32);
  pts.emplace_back(64, 1.0 / 64);
  const auto r = fit_rate(pts);
  EXPECT_EQ(r.dropped_zero, 2U);
  EXPECT_EQ(r.points, 5U);
  EXPECT_NEAR(r.exponent_p, 1.0, 1e-12);
  EXPECT_THROW(fit_rate({{0.0, 1.0}, {1, 1}, {2, 1}, {3, 1}, {4, 1}}), InvalidInput);
}

TEST(FitRate, RSquaredInUnitInterval) {
  gen::Rng rng(90);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < 8; ++k) pts.emplace_back(std::ldexp(1.0, k), std::exp(rng.uniform(-5.0, 5.0)));
    const auto r = fit_rate(pts);
    EXPECT_GE(r.r_squared, 0.0);
    EXPECT_LE(r.r_squared, 1.0);
  }
}

TEST(Registry, CoversEveryResult) {
  std::set<std::string> names;
  for (const auto& k : registry()) names.emplace(k.name);
  const std::set<std::string> expected{"sqrt_n",
                                       "cbrt_n",
                                       "telescopic",
                                       "chernoff_product",
                                       "trotter_product",
                                       "trotter_commuting",
                                       "ritt",
                                       "norm_chernoff",
                                       "selfadjoint_ritt",
                                       "selfadjoint_chernoff",
                                       "euler",
                                       "euler_rate",
                                       "dunford_segal",
                                       "tnk_equivalence",
                                       "contour_reconstruction",
                                       "poisson_split"};
  EXPECT_EQ(names, expected);
  EXPECT_EQ(registry().size(), expected.size());
  EXPECT_FALSE(known_kind("wishart"));
}

TEST(Config, Validation) {
  auto c = small("sqrt_n");
  EXPECT_NO_THROW(validate(c));
  c.kind = "wishart";
  EXPECT_THROW(run_experiment(c), InvalidInput);
  c = small("ritt");
  c.alpha = pi / 2;
  EXPECT_THROW(run_experiment(c), InvalidInput);
  c = small("euler");
  c.ts.clear();
  EXPECT_THROW(run_experiment(c), InvalidInput);
  c = small("sqrt_n");
  c.trials = 0;
  EXPECT_THROW(run_experiment(c), InvalidInput);
}

TEST(Config, NGrid) {
  auto c = small("sqrt_n");
  c.nmax = 100;
  EXPECT_EQ(n_grid(c), (std::vector<std::uint64_t>{1, 2, 4, 8, 16, 32, 64}));
  c.dense_n = true;
  c.nmax = 5;
  EXPECT_EQ(n_grid(c), (std::vector<std::uint64_t>{1, 2, 3, 4, 5}));
}

TEST(RunExperiment, SelfAdjointChernoffDenseGrid) {
  auto c = small("selfadjoint_chernoff");
  c.nmax = 1024;
  c.dense_n = true;
  c.dim = 6;
  const auto r = run_experiment(c);
  EXPECT_TRUE(r.summary.all_passed);
  EXPECT_LE(r.summary.max_ratio, 1.0);
  EXPECT_EQ(r.summary.failed, 0U);
}

TEST(RunExperiment, RittAtPiOverEight) {
  auto c = small("ritt");
  c.alpha = pi / 8;
  c.trials = 100;
  c.nmax = 4096;
  c.ts = {1.0};
  const auto r = run_experiment(c);
  EXPECT_TRUE(r.summary.all_passed);
  EXPECT_EQ(r.summary.failed, 0U);
  EXPECT_NEAR(r.summary.constants.at("K_alpha"), bounds::k_alpha(pi / 8).value, 0.0);
  EXPECT_LE(r.summary.constants.at("ritt_hat"), r.summary.constants.at("K_alpha"));
}

TEST(RunExperiment, TrotterCommutingIsExact) {
  auto c = small("trotter_commuting");
  c.nmax = 1024;
  const auto r = run_experiment(c);
  EXPECT_TRUE(r.summary.all_passed);
  for (const auto& rec : r.records) EXPECT_LE(rec.empirical, 1e-10) << rec.experiment_id;
}

TEST(RunExperiment, EveryKindPassesOnASmallConfig) {
  for (const auto& k : registry()) {
    auto c = small(std::string(k.name));
    if (k.name == "euler_rate" || k.name == "dunford_segal" || k.name == "tnk_equivalence") c.nmax = 1024;
    const auto r = run_experiment(c);
    EXPECT_FALSE(r.records.empty()) << k.name;
    EXPECT_TRUE(r.summary.all_passed) << k.name << " failed " << r.summary.failed;
  }
}

TEST(RunExperiment, SummaryMaxRatioIsExact) {
  for (const char* kind : {"sqrt_n", "norm_chernoff", "euler", "poisson_split"}) {
    const auto r = run_experiment(small(kind));
    double worst = 0.0;
    std::size_t failed = 0;
    for (const auto& rec : r.records) {
      worst = std::max(worst, rec.ratio);
      failed += rec.passed ? 0 : 1;
    }
    EXPECT_EQ(r.summary.max_ratio, worst) << kind;
    EXPECT_EQ(r.summary.failed, failed) << kind;
    EXPECT_EQ(r.summary.records, r.records.size()) << kind;
  }
}

TEST(RunExperiment, ByteIdenticalReports) {
  for (const auto& k : registry()) {
    const auto c = small(std::string(k.name));
    const auto a = run_experiment(c);
    const auto b = run_experiment(c);
    EXPECT_EQ(emit_report(a, Format::csv), emit_report(b, Format::csv)) << k.name;
    EXPECT_EQ(emit_report(a, Format::json), emit_report(b, Format::json)) << k.name;
  }
}

TEST(RunExperiment, SeedChangesReport) {
  auto c = small("sqrt_n");
  const auto a = emit_report(run_experiment(c), Format::csv);
  c.seed = 2;
  EXPECT_NE(a, emit_report(run_experiment(c), Format::csv));
}

TEST(Emit, OnePassingRecordCsv) {
  const std::string csv = emit_report(one_record_report(), Format::csv);
  std::istringstream in(csv);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3U);
  EXPECT_EQ(lines[0].front(), '#');
  EXPECT_EQ(lines[1], "experiment_id,n,t,empirical,bound,ratio,passed");
  EXPECT_EQ(lines[2], "unit/0,4,1,0.10000000000000001,0.5,0.20000000000000001,true");
}

TEST(Emit, EmptyRecordsRejected) {
  Report r;
  EXPECT_THROW(emit_report(r, Format::csv), InvalidInput);
  EXPECT_THROW(emit_report(r, Format::json), InvalidInput);
  r.records.push_back(make_record("bad,id", 1, 0, 0, 1));
  EXPECT_THROW(emit_report(r, Format::csv), InvalidInput);
}

TEST(Emit, JsonLayout) {
  const auto j = nlohmann::json::parse(emit_report(one_record_report(), Format::json));
  EXPECT_EQ(j.at("header").at("kind"), "unit");
  EXPECT_EQ(j.at("header").at("slack_rel").get<double>(), tol::slack_rel);
  EXPECT_EQ(j.at("records").size(), 1U);
  EXPECT_TRUE(j.at("summary").at("all_passed").get<bool>());
}

TEST(Emit, JsonRoundTrip) {
  for (const char* kind : {"norm_chernoff", "dunford_segal", "tnk_equivalence", "trotter_commuting"}) {
    auto c = small(kind);
    c.nmax = 256;
    const auto r = run_experiment(c);
    const auto back = parse_report(emit_report(r, Format::json));
    EXPECT_EQ(back.records, r.records) << kind;
    EXPECT_EQ(back.summary, r.summary) << kind;
    EXPECT_EQ(emit_report(back, Format::json), emit_report(r, Format::json)) << kind;
  }
}

TEST(Emit, NonFiniteRatioSurvivesRoundTrip) {
  Report r;
  r.records.push_back(make_record("z/0", 1, 0.0, 1.0, 0.0));
  summarize_records(r.summary, r.records);
  const auto json_back = parse_report(emit_report(r, Format::json));
  EXPECT_EQ(json_back.records, r.records);
  const auto csv_back = parse_report(emit_report(r, Format::csv));
  EXPECT_EQ(csv_back.records, r.records);
}

TEST(Emit, CsvRoundTrip) {
  const auto r = run_experiment(small("cbrt_n"));
  const auto back = parse_report(emit_report(r, Format::csv));
  EXPECT_EQ(back.records, r.records);
}

TEST(Parse, Malformed) {
  EXPECT_THROW(parse_report("{\"header\": 1"), InvalidInput);
  EXPECT_THROW(parse_report("a,b\n"), InvalidInput);
  EXPECT_THROW(parse_report(std::string(kCsvHeader) + "\nx,1,2\n"), InvalidInput);
  EXPECT_THROW(parse_report(std::string(kCsvHeader) + "\nx,1,2,3,4,5,maybe\n"), InvalidInput);
}

TEST(Merge, ConcatenatesAndRequiresAllInputs) {
  const auto a = run_experiment(small("sqrt_n"));
  const auto b = run_experiment(small("telescopic"));
  const auto m = merge_reports({a, b});
  EXPECT_EQ(m.records.size(), a.records.size() + b.records.size());
  EXPECT_TRUE(m.summary.all_passed);
  EXPECT_EQ(m.header.at("kind"), "merged");
  EXPECT_EQ(m.header.at("sources").size(), 2U);
  EXPECT_EQ(m.summary.max_ratio, std::max(a.summary.max_ratio, b.summary.max_ratio));

  Report failing = one_record_report();
  failing.summary.rate_window = std::make_pair(0.9, 1.1);
  summarize_records(failing.summary, failing.records);
  EXPECT_FALSE(failing.summary.all_passed);
  EXPECT_FALSE(merge_reports({a, failing}).summary.all_passed);
  EXPECT_THROW(merge_reports({}), InvalidInput);
}
