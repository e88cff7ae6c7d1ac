#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dyadic/analysis.hpp"
#include "dyadic/config.hpp"
#include "dyadic/extremals.hpp"
#include "dyadic/norms.hpp"
#include "dyadic/report.hpp"
#include "dyadic/rough.hpp"
#include "dyadic/sphere.hpp"

namespace dyadic {

struct ExperimentInfo {
  std::string name;
  std::string summary;
};

inline const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> reg{
      {"shifted-square-growth", "||S^y f||_p / ||S^0 f||_p against the shift y"},
      {"linear-extremal", "identity, L^2 and L^p growth of the linear sharpness family"},
      {"bilinear-extremal", "B(f, g) = N eta^2 and growth of the bilinear sharpness family"},
      {"dlambda-scaling", "D_lambda of the shifted beta kernel against N"},
      {"drf-mikhlin", "multiplier constants, small-xi slope and band audit of the rough kernel pieces"},
      {"level-split-audit", "level-set pieces of Omega: mean zero, masses, reconstruction"},
      {"orlicz-suite", "Luxemburg norms of L(log L)^alpha on test Omegas"},
  };
  return reg;
}

inline bool known_experiment(const std::string& name) {
  const auto& r = experiment_registry();
  return std::any_of(r.begin(), r.end(), [&](const ExperimentInfo& e) { return e.name == name; });
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> notes;
  double memory_bytes = 0.0;

  bool ok() const { return errors.empty(); }
  std::string text() const {
    std::ostringstream os;
    for (const auto& e : errors) os << "error: " << e << '\n';
    for (const auto& n : notes) os << "note: " << n << '\n';
    os << "memory estimate: " << ResultTable::format(memory_bytes / (1024.0 * 1024.0)) << " MiB\n";
    os << (ok() ? "feasible\n" : "infeasible\n");
    return os.str();
  }
};

inline constexpr double memory_budget = 4.0 * 1024 * 1024 * 1024;

namespace detail {

inline bool is_sweep_experiment(const std::string& n) {
  return n == "linear-extremal" || n == "bilinear-extremal" || n == "shifted-square-growth";
}

inline std::string pow2_text(double v) {
  std::ostringstream os;
  os << "2^" << static_cast<long long>(std::llround(std::log2(v)));
  return os.str();
}

inline double next_pow2(double v) { return std::exp2(std::ceil(std::log2(std::max(v, 1.0)))); }

inline double shifted_min_L(const ExperimentConfig& cfg) {
  double y = 0.0;
  for (double v : cfg.y_list) y = std::max(y, std::abs(v));
  return next_pow2(std::max(cfg.L, 16.0 * y));
}

}  // namespace detail

inline ValidationReport validate(const ExperimentConfig& cfg) {
  ValidationReport rep;
  auto err = [&](std::string s) { rep.errors.push_back(std::move(s)); };
  if (!known_experiment(cfg.name)) err("unknown experiment: " + cfg.name);
  if (cfg.Q < 2 || cfg.Q % 2 != 0) err("Q must be even and >= 2 (quadrature pairs theta with theta + pi)");
  if (!is_pow2(cfg.M) || cfg.M < 2) err("M must be a power of two");
  if (!is_pow2(cfg.M2) || cfg.M2 < 2) err("M2 must be a power of two");
  if (!(cfg.L > 0.0) || !(cfg.L2 > 0.0)) err("grid periods must be positive");
  if (cfg.c < 1) err("c must be positive");
  if (cfg.workers < 1) err("workers must be >= 1");
  for (int n : cfg.N_list)
    if (n < 1) err("N_list entries must be positive");
  for (double p : cfg.p_list)
    if (!(p >= 1.0)) err("p_list entries must be >= 1");
  for (double l : cfg.lambda_list)
    if (!(l >= 0.0)) err("lambda_list entries must be >= 0");
  for (double a : cfg.alpha_list)
    if (!(a >= 0.0)) err("alpha_list entries must be >= 0");
  for (int j : cfg.j_list)
    if (j > 0) err("j_list entries must be <= 0");
  for (const auto& o : cfg.omega_list)
    if (o != "odd_harmonics" && o != "odd_harmonics3" && o != "two_level" && o != "spike" && o != "random_rough")
      err("unknown omega: " + o);
  if (!(cfg.bumps.eta_radius > 0.0 && cfg.bumps.eta_radius <= 0.25)) err("eta_radius must lie in (0, 1/4]");
  if (!rep.ok()) return rep;

  if (cfg.name == "shifted-square-growth")
    for (double p : cfg.p_list)
      if (p != 2.0 && std::fmod(p, 4.0) != 0.0) err("shifted-square-growth takes p = 2 or a multiple of 4");

  if (detail::is_sweep_experiment(cfg.name)) {
    const bool products = cfg.name != "linear-extremal" ||
                          std::any_of(cfg.p_list.begin(), cfg.p_list.end(), [](double p) { return p != 2.0; });
    const double minL = cfg.name == "shifted-square-growth" ? detail::shifted_min_L(cfg) : detail::next_pow2(cfg.L);
    for (int N : cfg.N_list) {
      const double zN = static_cast<double>(cfg.c) * N;
      const double L = std::max(minL, std::exp2(cfg.c * (N - 1.0) + 2.0));
      const double R = std::floor(cfg.bumps.eta_radius * L);
      const double M = std::max(static_cast<double>(cfg.M), detail::next_pow2(2.0 * ((products ? 2 : 1) * R + 2)));
      const double dense = detail::next_pow2(2.4 * std::exp2(zN) * L);
      const double bands = cfg.name == "linear-extremal" ? (products ? N * N + N : N) : N * N + 2.0 * N;
      rep.memory_bytes = std::max(rep.memory_bytes, bands * M * 16.0 * 2.0);
      std::ostringstream os;
      os << "N=" << N << ": period L=" << detail::pow2_text(L) << ", base window M=" << detail::pow2_text(M)
         << " (a dense grid would need M=" << detail::pow2_text(dense) << ")";
      if (zN + std::log2(L) > 52.0)
        err(os.str() + ": carrier index 2^" + std::to_string(static_cast<long long>(zN + std::log2(L))) +
            " exceeds exact double range; requires M=" + detail::pow2_text(M) + " at L=" + detail::pow2_text(L));
      else
        rep.notes.push_back(os.str());
      if (std::any_of(cfg.p_list.begin(), cfg.p_list.end(), [](double p) { return std::isinf(p); }) &&
          dense > static_cast<double>(max_bmo_samples))
        err("N=" + std::to_string(N) + ": the p=inf route needs a dense grid of " + detail::pow2_text(dense) + " samples");
    }
  }
  if (cfg.name == "drf-mikhlin") {
    const Grid2D g(cfg.L2, cfg.M2);
    if (cfg.M2 > 4096) err("M2 above 2^12 is outside the 2D memory budget");
    if (cfg.L2 < 8.0) err("L2 must be >= 8");
    if (g.nyquist() < 1.0) err("M2 / L2 too small: the 2D grid must resolve |xi| = 2");
    rep.memory_bytes = std::max(rep.memory_bytes, 16.0 * cfg.M2 * cfg.M2 * 16.0);
  }
  if (rep.memory_bytes > memory_budget) err("memory estimate exceeds the 4 GiB budget");
  return rep;
}

// ---------------------------------------------------------------------------
// Execution helpers

/// Runs tasks on up to `workers` threads; results keep task order.
template <class T>
std::vector<T> run_ordered(const std::vector<std::function<T()>>& tasks, std::size_t workers) {
  std::vector<T> out(tasks.size());
  std::vector<std::exception_ptr> errs(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) {
      try {
        out[i] = tasks[i]();
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(workers, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

inline SphereFunction make_omega(const std::string& name, std::size_t Q, std::uint64_t seed) {
  if (name == "odd_harmonics") return omegas::odd_harmonics(Q, 1);
  if (name == "odd_harmonics3") return omegas::odd_harmonics(Q, 3);
  if (name == "two_level") return omegas::two_level(Q, 1.0);
  if (name == "spike") return omegas::spike(Q, 16.0);
  if (name == "random_rough") return omegas::random_rough(Q, seed);
  throw error(errc::invalid_argument, "unknown omega: " + name);
}

namespace detail {

inline std::string kv(const std::string& k, double v) { return k + "=" + ResultTable::format(v); }

inline std::string join(std::initializer_list<std::string> parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : ";") + p;
  return s;
}

inline ResultRow row(const std::string& exp, std::string params, std::string quantity, double value,
                     std::string criterion = {}, std::optional<bool> pass = std::nullopt) {
  ResultRow r;
  r.experiment = exp;
  r.parameters = std::move(params);
  r.quantity = std::move(quantity);
  r.value = value;
  r.criterion = std::move(criterion);
  r.pass = pass;
  return r;
}

inline ResultRow fit_row(const std::string& exp, std::string params, std::string quantity, const GrowthFit& fit,
                         std::string criterion = {}, std::optional<bool> pass = std::nullopt) {
  ResultRow r = row(exp, std::move(params), std::move(quantity), fit.values.back(), std::move(criterion), pass);
  r.exponent = fit.fit.slope;
  r.residual = fit.fit.residual;
  return r;
}

inline Series series_of(const std::string& name, const std::string& y_label, const GrowthFit& fit) {
  Series s{name, "N", y_label, {}, {}};
  for (std::size_t i = 0; i < fit.N.size(); ++i) s.x.push_back(fit.N[i]), s.y.push_back(fit.values[i]);
  return s;
}

inline BumpFamily experiment_family(const ExperimentConfig& cfg) {
  return make_family(Grid1D(64.0, 1024), Grid2D(16.0, 128), cfg.bumps);
}

inline ExtremalGrid sweep_grid(const ExperimentConfig& cfg, const BumpFamily& fam, int N, double min_L, bool products) {
  ExtremalGrid g = default_extremal_grid(N, cfg.c, fam, min_L);
  const long long R = eta_reach(fam, g.L);
  g.M = std::max(cfg.M, std::size_t{2});
  while (static_cast<long long>(g.M / 2) <= (products ? 2 * R : R) + 1) g.M *= 2;
  return g;
}

inline std::string p_text(double p) { return std::isinf(p) ? "inf" : ResultTable::format(p); }

// --------------------------------------------------------------------------

inline ResultTable shifted_square_growth(const ExperimentConfig& cfg) {
  const std::string E = cfg.name;
  const BumpFamily fam = experiment_family(cfg);
  const double minL = shifted_min_L(cfg);
  ResultTable t;

  using Rows = std::vector<ResultRow>;
  std::vector<std::function<Rows()>> tasks;

  auto ratios = [&, E](const MultibandFunction1D& f, const std::string& label, bool family_input) {
    Rows rows;
    const KRange kr = nonzero_k_range(f, fam);
    for (double p : cfg.p_list) {
      auto norm = [&](double y) {
        if (p == 2.0) return std::sqrt(square_function_energy(f, y, fam, kr));
        const auto S2 = square_function_squared(f, y, fam, kr);
        return std::sqrt(lp_norm(S2, p / 2.0));
      };
      const double base = norm(0.0);
      for (double y : cfg.y_list) {
        const double r = norm(y) / base;
        std::optional<bool> pass;
        std::string crit;
        if (p == 2.0) {
          crit = "6";
          pass = std::abs(r - 1.0) <= 1e-10;
        } else if (p == 4.0 && family_input) {
          crit = "6";
          pass = r >= 1.0 - 1e-12 && r <= 2.0 * std::sqrt(std::log(std::numbers::e + std::abs(y)));
        }
        rows.push_back(row(E, join({label, kv("p", p), kv("y", y)}), "ratio", r, crit, pass));
      }
    }
    return rows;
  };

  for (int N : cfg.N_list)
    tasks.push_back([&, N] {
      const auto inst = make_linear_extremal(N, cfg.c, fam, sweep_grid(cfg, fam, N, minL, true));
      return ratios(inst.f, join({"input=family", kv("N", N), kv("c", cfg.c)}), true);
    });
  // Random band-limited inputs: four bands at seeded carriers.
  for (int s = 0; s < 10; ++s)
    tasks.push_back([&, s] {
      std::mt19937_64 rng(cfg.seed * 1000 + s);
      std::normal_distribution<double> n;
      std::uniform_int_distribution<long long> carrier(4, 64);
      const ExtremalGrid g = sweep_grid(cfg, fam, 1, minL, true);
      MultibandFunction1D f(Grid1D(g.L, g.M));
      const long long R = eta_reach(fam, g.L);
      for (int b = 0; b < 4; ++b) {
        Band band = f.blank(carrier(rng) * static_cast<long long>(g.L) / 4);
        band.lo = -R;
        band.hi = R;
        for (long long i = -R; i <= R; ++i) band.coeffs[f.idx(i)] = cplx(n(rng), n(rng));
        f.add(std::move(band));
      }
      Rows rows;
      for (auto& r : ratios(f, join({"input=random", kv("seed", static_cast<double>(cfg.seed * 1000 + s))}), false))
        if (r.parameters.find("p=2;") != std::string::npos) rows.push_back(std::move(r));
      return rows;
    });

  for (auto& rows : run_ordered(tasks, cfg.workers))
    for (auto& r : rows) t.rows.push_back(std::move(r));

  for (double p : cfg.p_list)
    for (int N : cfg.N_list) {
      Series s{"ratio-p" + p_text(p) + "-N" + std::to_string(N), "y", "ratio", {}, {}};
      const std::string key = join({"input=family", kv("N", N), kv("c", cfg.c), kv("p", p)}) + ";";
      for (const auto& r : t.rows)
        if (r.parameters.rfind(key, 0) == 0) {
          s.x.push_back(std::stod(r.parameters.substr(r.parameters.rfind("y=") + 2)));
          s.y.push_back(r.value);
        }
      t.series.push_back(std::move(s));
    }
  return t;
}

inline ResultTable linear_extremal(const ExperimentConfig& cfg) {
  const std::string E = cfg.name;
  const BumpFamily fam = experiment_family(cfg);
  const bool products = std::any_of(cfg.p_list.begin(), cfg.p_list.end(), [](double p) { return p != 2.0; });
  ResultTable t;
  auto make = [&](int N) { return make_linear_extremal(N, cfg.c, fam, sweep_grid(cfg, fam, N, next_pow2(cfg.L), products)); };

  struct PerN {
    std::vector<ResultRow> rows;
    std::vector<double> tf, f;  // per p
    std::vector<double> dl;     // per lambda
  };
  std::vector<std::function<PerN()>> tasks;
  for (int N : cfg.N_list)
    tasks.push_back([&, N] {
      PerN out;
      const auto inst = make(N);
      const std::string P = join({kv("N", N), kv("c", cfg.c), kv("L", inst.period())});
      const auto Tf = inst.output();
      const double peak = inst.eta.evaluate(0.0).real();
      const double id = sup_bound(Tf, inst.expected()) / peak;
      out.rows.push_back(row(E, P, "identity_error", id, "2", id <= 1e-8));
      out.rows.push_back(row(E, P, "support_residual", inst.support_residual, "2", inst.support_residual == 0.0));
      const double l2 = l2_norm(Tf) / l2_norm(inst.eta);
      const double rel = std::abs(l2 / std::sqrt(N) - 1.0);
      out.rows.push_back(row(E, P, "l2_ratio_error", rel, "3", rel <= 1e-9));
      for (double p : cfg.p_list) {
        const NormSpec so{GrowthTarget::output, NormKind::Lp, p, 1.0};
        const NormSpec si{GrowthTarget::f, NormKind::Lp, p, 1.0};
        out.tf.push_back(evaluate_norm(inst, so, fam));
        out.f.push_back(evaluate_norm(inst, si, fam));
        out.rows.push_back(row(E, join({P, "p=" + p_text(p)}), "Tf_norm", out.tf.back()));
        out.rows.push_back(row(E, join({P, "p=" + p_text(p)}), "f_norm", out.f.back()));
      }
      for (double l : cfg.lambda_list) out.dl.push_back(inst.d_lambda_kernel(l));
      return out;
    });
  const auto per = run_ordered(tasks, cfg.workers);
  for (const auto& pn : per)
    for (const auto& r : pn.rows) t.rows.push_back(r);

  if (cfg.N_list.size() < 2) return t;
  auto fit_of = [&](auto pick, const std::string& label) {
    return measure_growth(cfg.N_list, [&](int N) {
      const auto i = static_cast<std::size_t>(std::find(cfg.N_list.begin(), cfg.N_list.end(), N) - cfg.N_list.begin());
      return pick(per[i]);
    }, label);
  };
  const std::string P = join({kv("c", cfg.c), "N=" + std::to_string(cfg.N_list.front()) + ".." + std::to_string(cfg.N_list.back())});
  for (std::size_t q = 0; q < cfg.p_list.size(); ++q) {
    const double p = cfg.p_list[q];
    const auto tf = fit_of([q](const PerN& x) { return x.tf[q]; }, "Tf");
    const auto f = fit_of([q](const PerN& x) { return x.f[q]; }, "f");
    const bool c4 = p == 4.0;
    t.rows.push_back(fit_row(E, join({P, "p=" + p_text(p)}), "Tf_slope", tf, c4 ? "4" : "",
                             c4 ? std::optional<bool>(tf.fit.slope >= 0.40 && tf.fit.slope <= 0.60) : std::nullopt));
    t.rows.push_back(fit_row(E, join({P, "p=" + p_text(p)}), "f_slope", f, c4 ? "4" : "",
                             c4 ? std::optional<bool>(f.fit.slope >= 0.15 && f.fit.slope <= 0.35) : std::nullopt));
    t.series.push_back(series_of("Tf-p" + p_text(p), "||Tf||_p", tf));
    t.series.push_back(series_of("f-p" + p_text(p), "||f||_p", f));
    for (std::size_t li = 0; li < cfg.lambda_list.size(); ++li) {
      const auto r = fit_of([q, li](const PerN& x) { return x.tf[q] / (x.dl[li] * x.f[q]); }, "ratio");
      t.rows.push_back(fit_row(E, join({P, "p=" + p_text(p), kv("lambda", cfg.lambda_list[li])}), "ratio_slope", r));
    }
  }
  return t;
}

inline ResultTable bilinear_extremal(const ExperimentConfig& cfg) {
  const std::string E = cfg.name;
  const BumpFamily fam = experiment_family(cfg);
  ResultTable t;
  struct PerN {
    std::vector<ResultRow> rows;
    double out_l2 = 0, g_sup = 0;
    std::vector<double> dl;
  };
  std::vector<std::function<PerN()>> tasks;
  for (int N : cfg.N_list)
    tasks.push_back([&, N] {
      PerN out;
      const auto inst = make_bilinear_extremal(N, cfg.c, fam, sweep_grid(cfg, fam, N, next_pow2(cfg.L), true));
      const std::string P = join({kv("N", N), kv("c", cfg.c), kv("L", inst.period())});
      const auto B = inst.output();
      const double peak = std::pow(inst.eta.evaluate(0.0).real(), 2);
      const double dev = sup_bound(B, inst.expected()) / (N * peak);
      out.rows.push_back(row(E, P, "identity_error", dev, "1", dev <= 1e-7));
      out.out_l2 = l2_norm(B);
      out.g_sup = grid_sup(inst.g);
      out.rows.push_back(row(E, P, "B_l2", out.out_l2));
      out.rows.push_back(row(E, P, "g_sup", out.g_sup));
      for (double l : cfg.lambda_list) {
        out.dl.push_back(inst.d_lambda_kernel(l));
        out.rows.push_back(row(E, join({P, kv("lambda", l)}), "D_lambda", out.dl.back()));
      }
      return out;
    });
  const auto per = run_ordered(tasks, cfg.workers);
  for (const auto& pn : per)
    for (const auto& r : pn.rows) t.rows.push_back(r);
  if (cfg.N_list.size() < 2) return t;
  auto fit_of = [&](auto pick, const std::string& label) {
    std::vector<double> v;
    for (const auto& x : per) v.push_back(pick(x));
    std::size_t i = 0;
    return measure_growth(cfg.N_list, [&](int) { return v[i++]; }, label);
  };
  const std::string P = join({kv("c", cfg.c)});
  const auto b = fit_of([](const PerN& x) { return x.out_l2; }, "B");
  t.rows.push_back(fit_row(E, P, "B_l2_slope", b));
  t.series.push_back(series_of("B-l2", "||B(f,g)||_2", b));
  const auto g = fit_of([](const PerN& x) { return x.g_sup; }, "g");
  t.rows.push_back(fit_row(E, P, "g_sup_slope", g));
  for (std::size_t li = 0; li < cfg.lambda_list.size(); ++li) {
    const auto d = fit_of([li](const PerN& x) { return x.dl[li]; }, "D");
    t.rows.push_back(fit_row(E, join({P, kv("lambda", cfg.lambda_list[li])}), "D_lambda_slope", d));
    t.series.push_back(series_of("D-lambda" + ResultTable::format(cfg.lambda_list[li]), "D_lambda(K)", d));
  }
  return t;
}

inline ResultTable dlambda_scaling(const ExperimentConfig& cfg) {
  const std::string E = cfg.name;
  const BumpFamily fam = experiment_family(cfg);
  ResultTable t;
  ExtremalGrid kg;
  std::vector<std::function<SampledFunction1D()>> tasks;
  for (int N : cfg.N_list) tasks.push_back([&, N] { return shifted_beta(fam, kg, static_cast<long long>(cfg.c) * N); });
  const auto kernels = run_ordered(tasks, cfg.workers);
  for (double l : cfg.lambda_list) {
    std::vector<double> v;
    for (std::size_t i = 0; i < kernels.size(); ++i) {
      v.push_back(d_lambda(kernels[i], l).value);
      t.rows.push_back(row(E, join({kv("N", cfg.N_list[i]), kv("zeta_N", cfg.c * cfg.N_list[i]), kv("lambda", l)}), "D_lambda", v.back()));
    }
    if (cfg.N_list.size() < 2) continue;
    std::size_t i = 0;
    const auto fit = measure_growth(cfg.N_list, [&](int) { return v[i++]; }, "D");
    t.rows.push_back(fit_row(E, join({kv("c", cfg.c), kv("lambda", l)}), "slope", fit, "5", std::abs(fit.fit.slope - l) <= 0.2));
    t.series.push_back(series_of("lambda" + ResultTable::format(l), "D_lambda(K)", fit));
  }
  return t;
}

inline ResultTable drf_mikhlin(const ExperimentConfig& cfg) {
  const std::string E = cfg.name;
  const BumpFamily fam = experiment_family(cfg);
  ResultTable t;
  const Grid2D g(cfg.L2, cfg.M2);
  const int j_hi = static_cast<int>(std::floor(std::log2(g.nyquist()))) - 1;
  const int j_lo = static_cast<int>(std::ceil(std::log2(4.0 / g.L))) - 1;
  using Rows = std::vector<ResultRow>;
  std::vector<std::function<Rows()>> tasks;
  std::vector<std::vector<double>> c0(cfg.omega_list.size());
  for (std::size_t oi = 0; oi < cfg.omega_list.size(); ++oi) {
    const std::string name = cfg.omega_list[oi];
    tasks.push_back([&, oi, name] {
      Rows rows;
      const SphereFunction omega = project_vanishing(make_omega(name, cfg.Q, cfg.seed));
      const RoughKernel kernel(omega, fam);
      const std::string P = join({"omega=" + name, kv("Q", static_cast<double>(cfg.Q))});
      for (int j : cfg.j_list) {
        const auto rep = mikhlin_check(kernel, j);
        c0[oi].push_back(rep.constants[0]);
        rows.push_back(row(E, join({P, kv("j", j)}), "mikhlin_c0", rep.constants[0]));
        rows.push_back(row(E, join({P, kv("j", j)}), "mikhlin_max", rep.max_constant()));
      }
      const auto [mn, mx] = std::minmax_element(c0[oi].begin(), c0[oi].end());
      const double spread = *mx / *mn;
      rows.push_back(row(E, P, "mikhlin_spread", spread, "10c", spread < 2.0));

      const double s_in = small_xi_slope(RoughKernel(omega, fam, 4.0)).slope;
      rows.push_back(row(E, P, "small_xi_slope", s_in, "10d", s_in >= 0.9));
      std::vector<double> shifted = omega.values();
      for (auto& v : shifted) v += omega.l1();
      const double s_out = small_xi_slope(RoughKernel(SphereFunction(shifted), fam, 4.0)).slope;
      rows.push_back(row(E, join({P, "moment=nonzero"}), "small_xi_slope", s_out, "10d", s_out <= 0.2));

      const auto dec = drf_decompose(kernel, g, j_lo, j_hi);
      double oob = 0.0;
      for (int j = j_lo; j <= j_hi; ++j) oob = std::max(oob, dec.out_of_band_energy(j));
      const std::string D = join({P, kv("L2", g.L), kv("M2", static_cast<double>(g.M)), "j=" + std::to_string(j_lo) + ".." + std::to_string(j_hi)});
      rows.push_back(row(E, D, "out_of_band_energy", oob, "10b", oob < 1e-6));
      rows.push_back(row(E, D, "telescoping_residual", telescoping_residual(dec)));
      rows.push_back(row(E, P, "orlicz_A", orlicz_norm(omega, cfg.A).value));
      return rows;
    });
  }
  for (auto& rows : run_ordered(tasks, cfg.workers))
    for (auto& r : rows) t.rows.push_back(std::move(r));
  for (std::size_t oi = 0; oi < cfg.omega_list.size(); ++oi) {
    Series s{"c0-" + cfg.omega_list[oi], "-j", "sup|K^j| / (2^j ||Omega||_1)", {}, {}};
    for (std::size_t i = 0; i < cfg.j_list.size(); ++i) s.x.push_back(1.0 - cfg.j_list[i]), s.y.push_back(c0[oi][i]);
    t.series.push_back(std::move(s));
  }
  return t;
}

inline ResultTable level_split_audit(const ExperimentConfig& cfg) {
  const std::string E = cfg.name;
  ResultTable t;
  for (const auto& name : cfg.omega_list) {
    const SphereFunction omega = project_vanishing(make_omega(name, cfg.Q, cfg.seed));
    const auto split = level_split(omega);
    const std::string P = join({"omega=" + name, kv("Q", static_cast<double>(cfg.Q))});
    Series s{"mass-" + name, "mu", "mass of D^mu", {}, {}};
    double worst_mean = 0.0;
    for (const auto& [mu, piece] : split.pieces) {
      const double m = std::abs(piece.mean());
      worst_mean = std::max(worst_mean, m);
      t.rows.push_back(row(E, join({P, kv("mu", mu)}), "piece_mean", m, "10a", m <= 1e-10));
      t.rows.push_back(row(E, join({P, kv("mu", mu)}), "level_mass", split.level_mass.at(mu)));
      s.x.push_back(mu);
      s.y.push_back(split.level_mass.at(mu));
    }
    const auto total = split.total();
    double rec = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) rec = std::max(rec, std::abs(total[i] - omega[i]));
    t.rows.push_back(row(E, P, "reconstruction_error", rec));
    t.rows.push_back(row(E, P, "mu_max", split.mu_max));
    if (!s.x.empty()) t.series.push_back(std::move(s));
  }
  return t;
}

inline ResultTable orlicz_suite(const ExperimentConfig& cfg) {
  const std::string E = cfg.name;
  ResultTable t;
  std::vector<double> alphas = cfg.alpha_list;
  std::sort(alphas.begin(), alphas.end());
  for (const auto& name : cfg.omega_list) {
    const SphereFunction omega = make_omega(name, cfg.Q, cfg.seed);
    const std::string P = join({"omega=" + name, kv("Q", static_cast<double>(cfg.Q))});
    Series s{"norm-" + name, "alpha", "||Omega||_{L(log L)^alpha}", {}, {}};
    double prev = 0.0;
    bool monotone = true;
    for (double a : alphas) {
      const auto rep = orlicz_norm(omega, a);
      const double res = rep.diagnostics.count("residual") ? rep.diagnostics.at("residual") : 0.0;
      t.rows.push_back(row(E, join({P, kv("alpha", a)}), "norm", rep.value));
      t.rows.push_back(row(E, join({P, kv("alpha", a)}), "luxemburg_residual", res, "11", res < 1e-9));
      if (a == 0.0) {
        const double d = std::abs(rep.value - omega.l1()) / omega.l1();
        t.rows.push_back(row(E, P, "alpha0_vs_l1", d, "11", d <= 1e-9));
      }
      monotone = monotone && rep.value >= prev * (1.0 - 1e-12);
      prev = rep.value;
      s.x.push_back(a);
      s.y.push_back(rep.value);
    }
    t.rows.push_back(row(E, P, "monotone_in_alpha", monotone ? 1.0 : 0.0, "11", monotone));
    t.series.push_back(std::move(s));
  }
  return t;
}

}  // namespace detail

/// Validates, then runs the named experiment.
inline ResultTable run(const ExperimentConfig& cfg) {
  const auto rep = validate(cfg);
  if (!rep.ok()) throw error(errc::invalid_argument, rep.text());
  if (cfg.name == "shifted-square-growth") return detail::shifted_square_growth(cfg);
  if (cfg.name == "linear-extremal") return detail::linear_extremal(cfg);
  if (cfg.name == "bilinear-extremal") return detail::bilinear_extremal(cfg);
  if (cfg.name == "dlambda-scaling") return detail::dlambda_scaling(cfg);
  if (cfg.name == "drf-mikhlin") return detail::drf_mikhlin(cfg);
  if (cfg.name == "level-split-audit") return detail::level_split_audit(cfg);
  if (cfg.name == "orlicz-suite") return detail::orlicz_suite(cfg);
  throw error(errc::invalid_argument, "unknown experiment: " + cfg.name);
}

}  // namespace dyadic
