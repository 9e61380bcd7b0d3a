#pragma once

// Experiment registry and runner. Every kind sweeps n (and t where the
// approximant has a time parameter) over seeded draws and emits one record
// per (draw, n, t) cell and check. Vector-valued checks keep the worst of
// the sampled unit vectors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "chernoff/approximants.hpp"
#include "chernoff/bounds.hpp"
#include "chernoff/contour.hpp"
#include "chernoff/ensembles.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/harness/records.hpp"
#include "chernoff/harness/report.hpp"
#include "chernoff/linalg.hpp"
#include "chernoff/numrange.hpp"
#include "chernoff/poisson.hpp"

namespace chernoff::harness {

struct KindInfo {
  std::string_view name;
  std::string_view description;
};

inline const std::vector<KindInfo>& registry() {
  static const std::vector<KindInfo> kinds{
      {"sqrt_n", "|(C^n - e^{n(C-1)})x| <= sqrt(n) |(C-1)x| for random contractions"},
      {"cbrt_n", "two-term split bound at eps*, its closed form and the norm form"},
      {"telescopic", "(n/2)(|(C-1)^2 x| + (e^2/3)|(C-1)^3 x|)"},
      {"chernoff_product", "Phi(t/n)^n -> e^{-tA} for Phi(s) = e^{-sA/2}(1 + sA/2)^{-1}"},
      {"trotter_product", "(e^{-tA/n} e^{-tB/n})^n -> e^{-t(A+B)} for non-commuting pairs"},
      {"trotter_commuting", "Lie-Trotter product is exact for commuting pairs"},
      {"ritt", "(n+1)|C^n(1-C)| <= K_alpha for resolvent contractions"},
      {"norm_chernoff", "|C^n - e^{n(C-1)}| <= L_alpha / n^{1/3} for resolvent contractions"},
      {"selfadjoint_ritt", "|C^n(1-C)| <= 1/(n+1) for self-adjoint contractions"},
      {"selfadjoint_chernoff", "|C^n - e^{n(C-1)}| <= e^{-1}/n for self-adjoint contractions"},
      {"euler", "|(1 + tA/n)^{-n} - e^{-tA}| <= M_alpha / ((cos alpha)^2 n)"},
      {"euler_rate", "Euler error with the fitted rate asserted in [0.9, 1.1]"},
      {"dunford_segal", "e^{-n(1 - e^{-tA/n})} -> e^{-tA}; L_alpha / n^{1/3} on the step; N estimate"},
      {"tnk_equivalence", "resolvent difference O(s) and semigroup difference -> 0 for X(s)"},
      {"contour_reconstruction", "Riesz-Dunford reconstruction, winding check and resolvent majorants"},
      {"poisson_split", "central and tail parts of the Chernoff sum at eps*"},
  };
  return kinds;
}

inline bool known_kind(std::string_view name) {
  return std::any_of(registry().begin(), registry().end(),
                     [&](const KindInfo& k) { return k.name == name; });
}

struct ExperimentConfig {
  std::string kind = "sqrt_n";
  int dim = 4;
  double alpha = std::numbers::pi / 8;
  std::uint64_t seed = 1;
  int trials = 10;
  std::uint64_t nmax = 1024;
  std::vector<double> ts{1.0};
  std::uint64_t fit_min_n = 1;
  int vectors = 20;
  /// All n in [1, nmax] instead of powers of two.
  bool dense_n = false;
};

inline void validate(const ExperimentConfig& c) {
  if (!known_kind(c.kind)) throw InvalidInput("unknown experiment kind: " + c.kind);
  if (c.dim < 1 || c.dim > 256) throw InvalidInput("dim must lie in [1, 256]");
  if (!(c.alpha >= 0.0 && c.alpha < std::numbers::pi / 2)) throw InvalidInput("alpha must lie in [0, pi/2)");
  if (c.trials < 1) throw InvalidInput("trials must be >= 1");
  if (c.nmax < 1) throw InvalidInput("nmax must be >= 1");
  if (c.vectors < 1) throw InvalidInput("vectors must be >= 1");
  if (c.ts.empty()) throw InvalidInput("at least one t is required");
  for (double t : c.ts) {
    if (!(t > 0.0 && std::isfinite(t))) throw InvalidInput("t values must be positive and finite");
  }
}

inline ordered_json config_header(const ExperimentConfig& c) {
  ordered_json h = ordered_json::object();
  h["kind"] = c.kind;
  h["dim"] = c.dim;
  h["alpha"] = c.alpha;
  h["seed"] = c.seed;
  h["trials"] = c.trials;
  h["nmax"] = c.nmax;
  h["t"] = c.ts;
  h["fit_min_n"] = c.fit_min_n;
  h["vectors"] = c.vectors;
  h["dense_n"] = c.dense_n;
  return h;
}

/// n values swept: powers of two up to nmax, or every n with dense_n.
inline std::vector<std::uint64_t> n_grid(const ExperimentConfig& c) {
  std::vector<std::uint64_t> out;
  if (c.dense_n) {
    for (std::uint64_t n = 1; n <= c.nmax; ++n) out.push_back(n);
  } else {
    for (std::uint64_t n = 1; n <= c.nmax; n *= 2) out.push_back(n);
  }
  return out;
}

namespace detail {

// Tracks base^n along an increasing n sequence.
class PowerSweep {
 public:
  explicit PowerSweep(Operator base) : base_(std::move(base)), current_(identity(base_.rows())) {}

  const Operator& at(std::uint64_t n) {
    if (n < exponent_) {
      current_ = identity(base_.rows());
      exponent_ = 0;
    }
    if (n > exponent_) {
      current_ = current_ * mat_pow(base_, n - exponent_);
      exponent_ = n;
    }
    return current_;
  }

 private:
  Operator base_;
  Operator current_;
  std::uint64_t exponent_ = 0;
};

// Keeps the most critical record: a failure beats a pass, then larger ratio.
class Worst {
 public:
  void offer(ErrorRecord r) {
    if (!has_ || (!r.passed && best_.passed) || (r.passed == best_.passed && r.ratio > best_.ratio)) {
      best_ = std::move(r);
      has_ = true;
    }
  }
  [[nodiscard]] bool has() const { return has_; }
  [[nodiscard]] const ErrorRecord& get() const { return best_; }

 private:
  ErrorRecord best_;
  bool has_ = false;
};

struct Run {
  const ExperimentConfig& cfg;
  std::vector<ErrorRecord> records;
  std::map<std::uint64_t, double> series;  // n -> max primary error over draws and t
  Summary summary;

  std::string id(int draw, std::string_view check = {}) const {
    std::string s = cfg.kind + "/" + std::to_string(draw);
    if (!check.empty()) {
      s += ':';
      s += check;
    }
    return s;
  }

  void add(ErrorRecord r) { records.push_back(std::move(r)); }
  void add(const Worst& w) {
    if (w.has()) records.push_back(w.get());
  }
  void observe(std::uint64_t n, double err) {
    auto [it, inserted] = series.emplace(n, err);
    if (!inserted) it->second = std::max(it->second, err);
  }
  void constant_max(const std::string& key, double v) {
    auto [it, inserted] = summary.constants.emplace(key, v);
    if (!inserted) it->second = std::max(it->second, v);
  }
  std::uint64_t draw_seed(int draw) const { return derive_seed(cfg.seed, static_cast<std::uint64_t>(draw)); }
};

inline std::vector<Vector> draw_vectors(std::uint64_t seed, int count, Eigen::Index dim) {
  SeededRng rng(derive_seed(seed, 0x7ec7ull));
  std::vector<Vector> xs;
  xs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) xs.push_back(rng.unit_vector(dim));
  return xs;
}

inline bool sector_certified(const Operator& a, double alpha) {
  const auto points = numerical_range_boundary(a);
  return std::all_of(points.begin(), points.end(), [&](cplx z) { return in_sector(z, alpha); });
}

// Contraction-vector kinds: sqrt_n, cbrt_n, telescopic, poisson_split.
inline void run_vector_kind(Run& run) {
  const auto& cfg = run.cfg;
  const auto grid = n_grid(cfg);
  for (int d = 0; d < cfg.trials; ++d) {
    const std::uint64_t seed = run.draw_seed(d);
    const Operator c = random_contraction(cfg.dim, seed);
    const Operator id = identity(cfg.dim);
    const Operator cm1 = c - id;
    const auto xs = draw_vectors(seed, cfg.vectors, cfg.dim);
    PowerSweep powers(c);
    PowerSweep exps(expm(cm1));
    for (std::uint64_t n : grid) {
      const Operator diff = powers.at(n) - exps.at(n);
      run.observe(n, op_norm(diff));
      if (cfg.kind == "sqrt_n") {
        Worst w;
        for (const auto& x : xs) {
          w.offer(make_record(run.id(d), n, 0.0, (diff * x).norm(),
                              bounds::sqrt_n_bound(n, (cm1 * x).norm())));
        }
        run.add(w);
      } else if (cfg.kind == "cbrt_n") {
        Worst two;
        Worst closed;
        for (const auto& x : xs) {
          const double emp = (diff * x).norm();
          const double d1 = (cm1 * x).norm();
          double two_term = 0.0;
          if (d1 > 0.0) two_term = bounds::cbrt_vector_bound(n, bounds::epsilon_star(n, 1.0, d1), 1.0, d1);
          two.offer(make_record(run.id(d, "two_term"), n, 0.0, emp, two_term));
          closed.offer(make_record(run.id(d, "closed_form"), n, 0.0, emp,
                                   bounds::cbrt_vector_optimal(n, 1.0, d1)));
        }
        run.add(two);
        run.add(closed);
        run.add(make_record(run.id(d, "norm_form"), n, 0.0, op_norm(diff),
                            bounds::cbrt_norm_bound(n, op_norm(cm1))));
      } else if (cfg.kind == "telescopic") {
        const Operator cm2 = cm1 * cm1;
        const Operator cm3 = cm2 * cm1;
        Worst w;
        for (const auto& x : xs) {
          w.offer(make_record(run.id(d), n, 0.0, (diff * x).norm(),
                              bounds::telescopic_bound(n, (cm2 * x).norm(), (cm3 * x).norm())));
        }
        run.add(w);
      } else {  // poisson_split
        Worst total;
        Worst central;
        Worst tail;
        for (const auto& x : xs) {
          const double d1 = (cm1 * x).norm();
          if (d1 == 0.0) continue;
          const double eps = bounds::epsilon_star(n, 1.0, d1);
          const auto split = poisson::chernoff_split_sum(c, x, n, eps);
          total.offer(make_record(run.id(d), n, 0.0, (diff * x).norm(),
                                  split.central + split.tail + split.truncation_error));
          central.offer(make_record(run.id(d, "central"), n, 0.0, split.central, eps * d1));
          tail.offer(make_record(run.id(d, "tail"), n, 0.0, split.tail,
                                 2.0 * poisson::tchebychev_bound(n, eps)));
        }
        run.add(total);
        run.add(central);
        run.add(tail);
      }
    }
  }
}

// Chernoff-type products Phi(t/n)^n against e^{-tG}. The bound is the norm
// form of the cube-root estimate for C = Phi(t/n) plus the exact distance
// |e^{n(C-1)} - e^{-tG}|.
inline void run_product_kind(Run& run) {
  const auto& cfg = run.cfg;
  const auto grid = n_grid(cfg);
  for (int d = 0; d < cfg.trials; ++d) {
    const std::uint64_t seed = run.draw_seed(d);
    ContractionFamily phi;
    Operator generator;
    if (cfg.kind == "chernoff_product") {
      const Operator a = random_m_sectorial(cfg.dim, cfg.alpha, seed);
      generator = a;
      phi = {[a](double s) {
               const Operator half = (0.5 * s) * a;
               return Operator(expm(-half) * inverse(identity(a.rows()) + half));
             },
             "strang_resolvent", a.rows()};
    } else if (cfg.kind == "trotter_product") {
      const Operator a = random_m_sectorial(cfg.dim, cfg.alpha, derive_seed(seed, 0));
      const Operator b = random_m_sectorial(cfg.dim, cfg.alpha, derive_seed(seed, 1));
      generator = a + b;
      phi = trotter_family(a, b);
    } else {  // trotter_commuting
      SeededRng rng(seed);
      const Operator u = haar_unitary(cfg.dim, rng);
      Eigen::VectorXd da(cfg.dim);
      Eigen::VectorXd db(cfg.dim);
      for (int k = 0; k < cfg.dim; ++k) da(k) = rng.uniform(0.0, 2.0);
      for (int k = 0; k < cfg.dim; ++k) db(k) = rng.uniform(0.0, 2.0);
      const Operator a = u * da.cast<cplx>().asDiagonal() * u.adjoint();
      const Operator b = u * db.cast<cplx>().asDiagonal() * u.adjoint();
      generator = a + b;
      phi = trotter_family(a, b);
    }
    for (std::uint64_t n : grid) {
      for (double t : cfg.ts) {
        const Operator reference = expm(-t * generator);
        const Operator step = phi(t / static_cast<double>(n));
        const double err = approx_error(mat_pow(step, n), reference);
        run.observe(n, err);
        double bound = 0.0;
        if (cfg.kind != "trotter_commuting") {
          const Operator id = identity(cfg.dim);
          bound = bounds::cbrt_norm_bound(n, op_norm(id - step)) +
                  op_norm(expm(static_cast<double>(n) * (step - id)) - reference);
        }
        run.add(make_record(run.id(d), n, t, err, bound));
      }
    }
  }
}

// Quasi-sectorial resolvent contractions: ritt, norm_chernoff.
inline void run_resolvent_kind(Run& run) {
  const auto& cfg = run.cfg;
  const auto grid = n_grid(cfg);
  const bool ritt = cfg.kind == "ritt";
  const auto k = bounds::k_alpha(cfg.alpha);
  const double l = 2.0 * k.value + 2.0;
  run.summary.constants["K_alpha"] = k.value;
  run.summary.constants["argmin_alpha_prime"] = k.argmin_alpha_prime;
  if (!ritt) {
    run.summary.constants["L_alpha"] = l;
    run.summary.constants["proof_threshold"] = bounds::proof_threshold(1.0 / 6.0);
  }
  for (int d = 0; d < cfg.trials; ++d) {
    const Operator a = random_m_sectorial(cfg.dim, cfg.alpha, run.draw_seed(d));
    std::vector<Operator> cs;
    bool excluded = false;
    for (double t : cfg.ts) {
      Operator c = resolvent_contraction(a, t);
      if (!certified(certify_quasi_sectorial(c, cfg.alpha))) excluded = true;
      cs.push_back(std::move(c));
    }
    if (excluded) {
      ++run.summary.excluded_draws;
      continue;
    }
    const Operator id = identity(cfg.dim);
    std::vector<PowerSweep> powers;
    std::vector<PowerSweep> exps;
    for (const auto& c : cs) {
      powers.emplace_back(c);
      exps.emplace_back(expm(c - id));
    }
    for (std::uint64_t n : grid) {
      const double dn = static_cast<double>(n);
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const double t = cfg.ts[i];
        const Operator& cn = powers[i].at(n);
        if (ritt) {
          const double err = op_norm(cn * (id - cs[i]));
          run.observe(n, err);
          run.constant_max("ritt_hat", (dn + 1.0) * err);
          run.add(make_record(run.id(d), n, t, (dn + 1.0) * err, k.value));
        } else {
          const double err = op_norm(cn - exps[i].at(n));
          run.observe(n, err);
          run.constant_max("L_hat", err * std::cbrt(dn));
          run.add(make_record(run.id(d), n, t, err, bounds::norm_chernoff_bound_from_l(n, l)));
          const auto two = bounds::two_param_bound(n, 1.0 / 6.0, k.value);
          if (two.clears_threshold) run.add(make_record(run.id(d, "two_param"), n, t, err, two.value));
        }
      }
    }
  }
}

// Self-adjoint contractions with spectrum j/dim shifted by (d + 1/2)/(trials dim).
inline void run_selfadjoint_kind(Run& run) {
  const auto& cfg = run.cfg;
  const auto grid = n_grid(cfg);
  const bool ritt = cfg.kind == "selfadjoint_ritt";
  for (int d = 0; d < cfg.trials; ++d) {
    std::vector<double> spectrum(static_cast<std::size_t>(cfg.dim));
    for (int j = 0; j < cfg.dim; ++j) {
      spectrum[static_cast<std::size_t>(j)] = (j + (d + 0.5) / cfg.trials) / cfg.dim;
    }
    const Operator c = self_adjoint_contraction(spectrum, run.draw_seed(d));
    const Operator id = identity(cfg.dim);
    PowerSweep powers(c);
    PowerSweep exps(expm(c - id));
    for (std::uint64_t n : grid) {
      const Operator& cn = powers.at(n);
      if (ritt) {
        const double err = op_norm(cn * (id - c));
        run.observe(n, err);
        run.add(make_record(run.id(d), n, 0.0, err, bounds::selfadjoint_ritt_bound(n)));
      } else {
        const double err = op_norm(cn - exps.at(n));
        run.observe(n, err);
        run.add(make_record(run.id(d), n, 0.0, err, bounds::selfadjoint_chernoff_bound(n)));
      }
    }
  }
}

// m-sectorial generators: euler, euler_rate, dunford_segal.
inline void run_generator_kind(Run& run) {
  const auto& cfg = run.cfg;
  const auto grid = n_grid(cfg);
  const double cos2 = std::cos(cfg.alpha) * std::cos(cfg.alpha);
  const bool euler = cfg.kind != "dunford_segal";
  double l = 0.0;
  if (euler) {
    run.summary.constants["M_alpha_upper"] = bounds::euler_upper_constant(cfg.alpha);
    run.summary.constants["M_alpha_lower"] = bounds::euler_lower_constant(cfg.alpha);
  } else {
    l = bounds::l_alpha(cfg.alpha);
    run.summary.constants["L_alpha"] = l;
    run.summary.constants["uncertified_steps"] = 0.0;
  }
  for (int d = 0; d < cfg.trials; ++d) {
    const Operator a = random_m_sectorial(cfg.dim, cfg.alpha, run.draw_seed(d));
    if (!sector_certified(a, cfg.alpha)) {
      ++run.summary.excluded_draws;
      continue;
    }
    const Operator id = identity(cfg.dim);
    for (std::uint64_t n : grid) {
      const double dn = static_cast<double>(n);
      for (double t : cfg.ts) {
        const Operator reference = reference_semigroup(a, t);
        if (euler) {
          const double err = approx_error(euler_approx(a, t, n), reference);
          run.observe(n, err);
          run.constant_max("M_hat", dn * cos2 * err);
          run.add(make_record(run.id(d), n, t, err, bounds::euler_bound(n, cfg.alpha)));
          if (cfg.alpha == 0.0) {
            run.add(make_record(run.id(d, "spectral"), n, t, err, bounds::selfadjoint_chernoff_bound(n)));
          }
        } else {
          const Operator step = semigroup_step(a, t, n);
          const double err = approx_error(expm(dn * (step - id)), reference);
          run.observe(n, err);
          run.constant_max("N_hat", dn * cos2 * err);
          if (certified(certify_quasi_sectorial(step, cfg.alpha))) {
            run.add(make_record(run.id(d), n, t, err, bounds::norm_chernoff_bound_from_l(n, l)));
          } else {
            run.summary.constants["uncertified_steps"] += 1.0;
            run.add(make_record(run.id(d, "uncertified"), n, t, err, 2.0));
          }
        }
      }
    }
  }
}

// X(s) = (1 - (1 + sA)^{-1})/s at s = 1/n, n = 1, 2, 4, ... <= nmax, zeta = 1.
inline void run_tnk(Run& run) {
  const auto& cfg = run.cfg;
  std::map<std::uint64_t, double> semigroup;
  for (int d = 0; d < cfg.trials; ++d) {
    const Operator a = random_m_sectorial(cfg.dim, cfg.alpha, run.draw_seed(d));
    if (!sector_certified(a, cfg.alpha)) {
      ++run.summary.excluded_draws;
      continue;
    }
    const Operator id = identity(cfg.dim);
    const auto family = resolvent_family(a);
    const Operator ra = inverse(id + a);
    for (std::uint64_t n = 1; n <= cfg.nmax; n *= 2) {
      const double s = 1.0 / static_cast<double>(n);
      const Operator x = discrete_generator(family, s, 1);
      const double err = op_norm(inverse(id + x) - ra);
      run.observe(n, err);
      run.add(make_record(run.id(d), n, 0.0, err, bounds::tnk_resolvent_bound(s, 1.0, cfg.alpha)));
      for (double t : cfg.ts) {
        const double gap = op_norm(expm(-t * x) - expm(-t * a));
        auto [it, inserted] = semigroup.emplace(n, gap);
        if (!inserted) it->second = std::max(it->second, gap);
        run.add(make_record(run.id(d, "semigroup"), n, t, gap, 2.0));
      }
    }
  }
  if (!semigroup.empty()) {
    run.summary.constants["semigroup_first"] = semigroup.begin()->second;
    run.summary.constants["semigroup_last"] = semigroup.rbegin()->second;
    std::vector<std::pair<double, double>> pts;
    for (const auto& [n, v] : semigroup) pts.emplace_back(static_cast<double>(n), v);
    try {
      run.summary.constants["semigroup_rate_p"] = fit_rate(pts).exponent_p;
    } catch (const InsufficientData&) {
    }
  }
}

inline constexpr double kReconstructionTol = 1e-7;
inline constexpr double kWindingTol = 1e-8;

inline void run_contour(Run& run) {
  const auto& cfg = run.cfg;
  const double alpha_prime = contour::default_alpha_prime(cfg.alpha);
  run.summary.constants["alpha_prime"] = alpha_prime;
  const auto nodes = contour::build_contour(alpha_prime, 16, 16, 0);
  for (int d = 0; d < cfg.trials; ++d) {
    const Operator a = random_m_sectorial(cfg.dim, cfg.alpha, run.draw_seed(d));
    std::vector<Operator> cs;
    bool excluded = false;
    for (double t : cfg.ts) {
      Operator c = resolvent_contraction(a, t);
      if (!certified(certify_quasi_sectorial(c, cfg.alpha))) excluded = true;
      cs.push_back(std::move(c));
    }
    if (excluded) {
      ++run.summary.excluded_draws;
      continue;
    }
    const Operator id = identity(cfg.dim);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const Operator& c = cs[i];
      const double t = cfg.ts[i];
      const auto winding = contour::riesz_dunford([](cplx) { return cplx(1.0, 0.0); }, c, nodes);
      run.add(make_record(run.id(d, "winding"), 0, t, op_norm(winding.value - id), kWindingTol));
    }
    for (std::uint64_t n = 1; n <= cfg.nmax; n *= 2) {
      const double dn = static_cast<double>(n);
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const Operator& c = cs[i];
        const double t = cfg.ts[i];
        const Operator cn = mat_pow(c, n);
        const auto power = contour::riesz_dunford(
            [dn](cplx z) { return std::pow(z, dn) * (1.0 - z); }, c, nodes);
        const double err_power = op_norm(power.value - cn * (id - c));
        run.observe(n, err_power);
        run.add(make_record(run.id(d, "power"), n, t, err_power, kReconstructionTol));
        const auto chern = contour::riesz_dunford(
            [dn](cplx z) { return std::pow(z, dn) - std::exp(dn * (z - 1.0)); }, c, nodes);
        const double err_chern = op_norm(chern.value - (cn - expm(dn * (c - id))));
        run.add(make_record(run.id(d, "chernoff"), n, t, err_chern, kReconstructionTol));
        const auto check = contour::contour_norm_bound_check(c, cfg.alpha, alpha_prime, n);
        run.add(make_record(run.id(d, "majorant"), n, t, check.worst_majorant_ratio(), 1.0));
        run.add(make_record(run.id(d, "distance"), n, t, check.worst_distance_ratio, 1.0));
        run.add(make_record(run.id(d, "ritt_chain"), n, t, check.actual_norm, check.ritt_bound));
      }
    }
  }
}

}  // namespace detail

/// Rate window asserted by the kinds whose claim is an O(1/n) rate.
inline std::optional<std::pair<double, double>> asserted_rate_window(std::string_view kind) {
  if (kind == "euler_rate" || kind == "dunford_segal" || kind == "tnk_equivalence") {
    return std::make_pair(0.9, 1.1);
  }
  return std::nullopt;
}

/// Runs one experiment. Deterministic in the config; records are ordered by
/// (draw, n, t).
inline Report run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  detail::Run run{cfg, {}, {}, {}};
  const std::string& k = cfg.kind;
  if (k == "sqrt_n" || k == "cbrt_n" || k == "telescopic" || k == "poisson_split") {
    detail::run_vector_kind(run);
  } else if (k == "chernoff_product" || k == "trotter_product" || k == "trotter_commuting") {
    detail::run_product_kind(run);
  } else if (k == "ritt" || k == "norm_chernoff") {
    detail::run_resolvent_kind(run);
  } else if (k == "selfadjoint_ritt" || k == "selfadjoint_chernoff") {
    detail::run_selfadjoint_kind(run);
  } else if (k == "euler" || k == "euler_rate" || k == "dunford_segal") {
    detail::run_generator_kind(run);
  } else if (k == "tnk_equivalence") {
    detail::run_tnk(run);
  } else {
    detail::run_contour(run);
  }

  Report report;
  report.header = config_header(cfg);
  report.summary = std::move(run.summary);
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, err] : run.series) {
    if (n >= cfg.fit_min_n) pts.emplace_back(static_cast<double>(n), err);
  }
  try {
    report.summary.rate = fit_rate(pts);
  } catch (const InsufficientData&) {
    report.summary.rate.reset();
  }
  report.summary.rate_window = asserted_rate_window(k);
  if (k == "norm_chernoff" || k == "dunford_segal") {
    const double threshold = bounds::proof_threshold(1.0 / 6.0);
    for (const auto& r : run.records) {
      if (!r.passed && static_cast<double>(r.n) < threshold) ++report.summary.flagged_below_threshold;
    }
  }
  report.records = std::move(run.records);
  summarize_records(report.summary, report.records);
  return report;
}

}  // namespace chernoff::harness
