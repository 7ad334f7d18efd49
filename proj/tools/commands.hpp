#ifndef LUTT_QUENCH_COMMANDS_HPP
#define LUTT_QUENCH_COMMANDS_HPP

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace quench {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failed = 5;

// ---------------------------------------------------------------------------
// density

inline ordered_json cone_metadata(double x, double t, double w0) {
  ordered_json c;
  c["free"] = {x - t, x + t};
  c["renormalized"] = {x - w0 * t, x + w0 * t};
  return c;
}

inline int run_density(const RunConfig& cfg) {
  const auto P = cfg.params();
  const double w0 = lutt::omega0(P);
  const auto z = lutt::linspace(cfg.z_min, cfg.z_max, cfg.z_steps);
  const double step = (cfg.z_max - cfg.z_min) / static_cast<double>(cfg.z_steps - 1);
  const double window = 10.0 * step;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t k = 0; k < cfg.t.size(); ++k) {
    const double t = cfg.t[k];
    Table tab;
    tab.metadata = base_metadata(cfg, P);
    tab.metadata["x"] = cfg.x;
    tab.metadata["t"] = t;
    tab.metadata["z_grid"] = {{"z_min", cfg.z_min}, {"z_max", cfg.z_max}, {"z_steps", cfg.z_steps}};
    tab.metadata["exclusion_window"] = window;
    tab.metadata["light_cones"] = cone_metadata(cfg.x, t, w0);
    tab.metadata["between_cones"] =
        "omega0 t < |x - z| < t: oscillating denominator changes sign; values from the closed formula";
    tab.columns = {"z", "smooth", "oscillating", "total", "excluded"};
    tab.rows.assign(z.size(), {});

    if (cfg.L) {
      const auto grid = cfg.grid_for(*cfg.L);
      tab.metadata["volume"] = {{"L", grid.L()}, {"n_max", grid.n_max()}, {"delta", grid.delta()}};
      lutt::parallel_for(z.size(), [&](std::size_t i) {
        const double a = cfg.x - z[i];
        const bool near = std::abs(std::abs(a) - t) < window || std::abs(std::abs(a) - w0 * t) < window;
        if (near) {
          tab.rows[i] = {z[i], nan, nan, nan, 1.0};
          return;
        }
        const auto parts = lutt::density_finite_parts(P, cfg.x, z[i], t, grid, 0.0);
        tab.rows[i] = {z[i], parts.smooth, parts.oscillating, parts.total(), 0.0};
      });
    } else {
      tab.metadata["volume"] = "infinite";
      const auto prof = lutt::density_profile(P, cfg.x, z, t, window);
      for (std::size_t i = 0; i < z.size(); ++i) {
        const bool ex = prof.is_excluded(i);
        tab.rows[i] = {z[i], ex ? nan : prof.smooth[i], ex ? nan : prof.oscillating[i], prof.total[i], ex ? 1.0 : 0.0};
      }
    }
    std::optional<std::string> path = cfg.out;
    if (path && cfg.t.size() > 1) path = with_suffix(*path, "_t" + std::to_string(k));
    emit(path, tab.render(cfg.output_format()));
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------
// zfactor and scan

inline int run_zfactor(const RunConfig& cfg) {
  const auto P = cfg.params();
  Table tab;
  tab.metadata = base_metadata(cfg, P);
  tab.columns = {"t", "Z", "expZ"};
  std::optional<lutt::ModeGrid> grid;
  if (cfg.L) {
    grid = cfg.grid_for(*cfg.L);
    tab.metadata["volume"] = {{"L", grid->L()}, {"n_max", grid->n_max()}, {"delta", grid->delta()}};
    tab.columns.push_back("Z_L");
    tab.columns.push_back("expZ_L");
  } else {
    tab.metadata["volume"] = "infinite";
  }
  for (double t : cfg.t) {
    const double zt = lutt::z_of_t(P, t);
    std::vector<double> row{t, zt, std::exp(zt)};
    if (grid) {
      const double zl = lutt::z_sum(P, t, *grid);
      row.push_back(zl);
      row.push_back(std::exp(zl));
    }
    tab.rows.push_back(row);
  }
  emit(cfg.out, tab.render(cfg.output_format()));
  return exit_ok;
}

inline int run_scan(const RunConfig& cfg) {
  const std::vector<double> lambdas = cfg.lambda_steps == 1
                                          ? std::vector<double>{cfg.lambda_from}
                                          : lutt::linspace(cfg.lambda_from, cfg.lambda_to, cfg.lambda_steps);
  Table tab;
  tab.metadata = base_metadata(cfg, cfg.params());
  tab.metadata["lambda_range"] = {cfg.lambda_from, cfg.lambda_to, cfg.lambda_steps};
  tab.columns = {"lambda", "omega0", "gamma0", "t", "Z", "expZ"};
  for (double l : lambdas) {
    const auto P = cfg.params_with_lambda(l);
    for (double t : cfg.t) {
      const double zt = lutt::z_of_t(P, t);
      tab.rows.push_back({l, lutt::omega0(P), lutt::gamma0(P), t, zt, std::exp(zt)});
    }
  }
  emit(cfg.out, tab.render(cfg.output_format()));
  return exit_ok;
}

// ---------------------------------------------------------------------------
// convergence

inline int run_convergence(const RunConfig& cfg) {
  const auto P = cfg.params();
  const double z = cfg.point_z();
  const double t = cfg.t.front();
  const double ref = lutt::density_interacting(P, cfg.x, z, t);
  Table tab;
  tab.metadata = base_metadata(cfg, P);
  tab.metadata["point"] = {{"x", cfg.x}, {"z", z}, {"t", t}};
  tab.metadata["infinite_volume"] = ref;
  tab.columns = {"L", "n_max", "delta", "finite", "infinite", "abs_error", "rel_error"};
  std::vector<double> rows_value(cfg.L_list.size());
  std::vector<lutt::ModeGrid> grids;
  for (double L : cfg.L_list) grids.push_back(cfg.grid_for(L));
  lutt::parallel_for(grids.size(), [&](std::size_t i) { rows_value[i] = lutt::density_finite(P, cfg.x, z, t, grids[i]); });
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < grids.size(); ++i) {
    const double err = std::abs(rows_value[i] - ref);
    tab.rows.push_back({grids[i].L(), static_cast<double>(grids[i].n_max()), grids[i].delta(), rows_value[i], ref, err,
                        err / std::abs(ref)});
    if (err > 0.0) {
      lx.push_back(std::log(grids[i].L()));
      ly.push_back(std::log(err));
    }
  }
  if (lx.size() >= 2)
    tab.metadata["rate"] = -lutt::least_squares_slope(lx, ly);
  else
    tab.metadata["rate"] = nullptr;
  emit(cfg.out, tab.render(cfg.output_format()));
  return exit_ok;
}

// ---------------------------------------------------------------------------
// fit-exponent

inline bool outside_asymptotic_regime(const lutt::FitReport& r) { return r.window.t_min < 1.0 || r.residual_rms > 1e-2; }

inline int run_fit_exponent(const RunConfig& cfg) {
  const auto P = cfg.params();
  const auto ts = lutt::logspace(cfg.t_min, cfg.t_max, cfg.samples);
  std::vector<lutt::PowerLawSample> samples;
  Table tab;
  tab.metadata = base_metadata(cfg, P);
  tab.columns = {"t", "expZ"};
  for (double t : ts) {
    const double v = std::exp(lutt::z_of_t(P, t));
    samples.push_back({t, v});
    tab.rows.push_back({t, v});
  }
  const auto rep = lutt::fit_power_law(samples, {cfg.t_min, cfg.t_max});
  ordered_json fit;
  fit["exponent"] = rep.exponent;
  fit["amplitude"] = rep.amplitude;
  fit["residual_rms"] = rep.residual_rms;
  fit["window"] = {rep.window.t_min, rep.window.t_max};
  fit["samples_used"] = rep.samples_used;
  fit["gamma0"] = lutt::gamma0(P);
  fit["exponent_error"] = std::abs(rep.exponent - lutt::gamma0(P));
  fit["amplitude_expected"] = std::exp(-lutt::gamma0(P) * lutt::euler_gamma) *
                              std::pow(2.0 * lutt::omega0(P) * P.p_cut(), -lutt::gamma0(P));
  const bool outside = outside_asymptotic_regime(rep);
  fit["asymptotic_regime"] = !outside;
  if (outside) fit["note"] = "outside asymptotic regime";

  if (cfg.output_format() == Format::json) {
    ordered_json j;
    j["metadata"] = tab.metadata;
    j["samples"] = tab.json();
    j["samples"].erase("metadata");
    j["fit"] = fit;
    emit(cfg.out, j.dump(2) + "\n");
  } else {
    emit(cfg.out, tab.csv());
    ordered_json side;
    side["metadata"] = tab.metadata;
    side["fit"] = fit;
    std::optional<std::string> sidecar;
    if (cfg.out) sidecar = replace_extension(*cfg.out, ".fit.json");
    emit(sidecar, side.dump(2) + "\n");
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::size_t points = 0;
  double runtime = 0.0;
  bool pass() const { return std::isfinite(max_deviation) && max_deviation <= tolerance; }
};

namespace detail {

inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

/// Largest entry; NaN propagates so a broken evaluation fails the check.
inline double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double d : v) {
    if (std::isnan(d)) return d;
    m = std::max(m, d);
  }
  return m;
}

inline CheckResult check_free_reduction(const RunConfig&, const lutt::ModelParams& P) {
  const auto z = lutt::linspace(-10.0, 10.0, 201);
  const double window = 10.0 * 0.1;
  std::vector<double> dev;
  for (double pf : {0.0, 1.0})
    for (double t : {0.0, 1.0, 3.0}) {
      const auto P0 = lutt::ModelParams(0.0, P.v0(), P.convention(), pf, P.p_cut());
      for (double zi : z) {
        const double a = -zi;
        if (std::abs(std::abs(a) - t) < window) continue;
        dev.push_back(std::abs(lutt::density_interacting(P0, 0.0, zi, t, window) - lutt::density_free(0.0, zi, t, pf, window)));
      }
    }
  return {"free_reduction", max_of(dev), 1e-14, dev.size()};
}

inline CheckResult check_dual_path(const RunConfig& cfg, const lutt::ModelParams& P) {
  const std::array<lutt::ModeGrid, 2> grids{lutt::ModeGrid(60.0, 16, 0.1), lutt::ModeGrid(200.0, 256, 0.1)};
  std::mt19937_64 rng(20240607);
  std::vector<std::array<double, 2>> pts;
  for (int k = 0; k < 10; ++k) {
    const double a = -8.0 + 16.0 * unit_uniform(rng);
    const double t = 5.0 * unit_uniform(rng);
    pts.push_back({a, t});
  }
  std::vector<double> dev(grids.size() * pts.size());
  lutt::parallel_for(dev.size(), [&](std::size_t i) {
    const auto& g = grids[i / pts.size()];
    const auto& pt = pts[i % pts.size()];
    const auto hand = lutt::exponent_main1(P, pt[0], pt[1], g, cfg.perturb_gamma).total();
    const auto mech = lutt::derive_main1_exponent(P, pt[0], 0.0, pt[1], g);
    dev[i] = std::abs(hand - mech);
  });
  return {"dual_path", max_of(dev), 1e-12, dev.size()};
}

inline CheckResult check_cin_quadrature(const RunConfig&, const lutt::ModelParams&) {
  const std::vector<double> us{1e-3, 0.5, 1.0, 2.0, 5.0, 8.0, 10.0, 20.0, 50.0, 100.0};
  std::vector<double> dev(us.size());
  lutt::parallel_for(us.size(), [&](std::size_t i) { dev[i] = std::abs(lutt::cin(us[i]) - lutt::cin_by_quadrature(us[i])); });
  return {"cin_quadrature", max_of(dev), 1e-11, dev.size()};
}

inline CheckResult check_z_quadrature(const RunConfig&, const lutt::ModelParams& P) {
  const std::vector<double> ts{0.1, 1.0, 10.0, 100.0};
  std::vector<double> dev(ts.size());
  lutt::parallel_for(ts.size(), [&](std::size_t i) { dev[i] = std::abs(lutt::z_of_t(P, ts[i]) - lutt::z_by_quadrature(P, ts[i])); });
  return {"z_quadrature", max_of(dev), 1e-10, dev.size()};
}

inline CheckResult check_q_closed_form(const RunConfig&, const lutt::ModelParams& P) {
  const std::vector<std::array<double, 2>> pts{{3.0, 1.0}, {5.0, 2.0}, {-4.0, 1.5}, {10.0, 3.0}, {0.5, 2.0}};
  std::vector<double> dev(pts.size(), -1.0);
  lutt::parallel_for(pts.size(), [&](std::size_t i) {
    double closed = 0.0;
    try {
      closed = lutt::q_closed_form(P, pts[i][0], pts[i][1]);
    } catch (const lutt::DomainError&) {
      return; // between the cones for this coupling
    }
    dev[i] = std::abs(lutt::q_extrapolated(P, pts[i][0], pts[i][1]) - closed);
  });
  std::vector<double> used;
  for (double d : dev)
    if (d >= 0.0 || std::isnan(d)) used.push_back(d);
  return {"q_closed_form", max_of(used), 1e-6, used.size()};
}

inline CheckResult check_poisson_identity(const RunConfig&, const lutt::ModelParams&) {
  const lutt::ModeGrid g(100.0, 6000, 0.1);
  std::vector<double> dev;
  dev.push_back(std::abs(std::exp(lutt::mode_log_sum(0.0, g).real()) / (g.L() * lutt::normalization_sq(g)) - 1.0));
  for (double theta : {0.5, 3.0, -7.0})
    dev.push_back(std::abs(lutt::mode_log_sum(theta, g) - lutt::closed_log_sum(theta, g.L(), g.delta())));
  return {"poisson_identity", max_of(dev), 1e-12, dev.size()};
}

inline CheckResult check_finite_to_infinite(const RunConfig&, const lutt::ModelParams& P) {
  const double L = 4000.0;
  const auto g = lutt::ModeGrid::covering(L, 10.0 / L, P.p_cut());
  const double fin = lutt::density_finite(P, 5.0, 0.0, 2.0, g);
  const double inf = lutt::density_interacting(P, 5.0, 0.0, 2.0);
  return {"finite_to_infinite", std::abs(fin - inf) / std::abs(inf), 1e-3, 1};
}

} // namespace detail

inline std::vector<CheckResult> run_checks(const RunConfig& cfg) {
  using Fn = std::function<CheckResult(const RunConfig&, const lutt::ModelParams&)>;
  const std::vector<std::pair<std::string, Fn>> registry{
      {"free_reduction", detail::check_free_reduction},     {"dual_path", detail::check_dual_path},
      {"cin_quadrature", detail::check_cin_quadrature},     {"z_quadrature", detail::check_z_quadrature},
      {"q_closed_form", detail::check_q_closed_form},       {"poisson_identity", detail::check_poisson_identity},
      {"finite_to_infinite", detail::check_finite_to_infinite}};
  const auto P = cfg.params();
  std::vector<CheckResult> out;
  for (const auto& name : cfg.checks) {
    for (const auto& [n, fn] : registry) {
      if (n != name) continue;
      const auto t0 = std::chrono::steady_clock::now();
      CheckResult r = fn(cfg, P);
      r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out.push_back(r);
    }
  }
  return out;
}

inline int run_verify(const RunConfig& cfg) {
  const auto P = cfg.params();
  const auto results = run_checks(cfg);
  bool all = true;
  for (const auto& r : results) all = all && r.pass();

  ordered_json meta = base_metadata(cfg, P);
  if (cfg.perturb_gamma != 0.0) meta["perturb_gamma"] = cfg.perturb_gamma;
  if (cfg.output_format() == Format::json) {
    ordered_json j;
    j["metadata"] = meta;
    ordered_json arr = ordered_json::array();
    for (const auto& r : results) {
      ordered_json c;
      c["name"] = r.name;
      c["pass"] = r.pass();
      c["max_deviation"] = json_number(r.max_deviation);
      c["tolerance"] = r.tolerance;
      c["points"] = r.points;
      if (cfg.timings) c["runtime_s"] = r.runtime;
      arr.push_back(c);
    }
    j["checks"] = arr;
    j["all_pass"] = all;
    emit(cfg.out, j.dump(2) + "\n");
  } else {
    std::string s;
    for (const auto& [k, v] : meta.items()) s += "# " + k + ": " + v.dump() + "\n";
    s += std::string("check,pass,max_deviation,tolerance,points") + (cfg.timings ? ",runtime_s" : "") + "\n";
    for (const auto& r : results) {
      s += r.name + "," + (r.pass() ? "1" : "0") + "," + fmt(r.max_deviation) + "," + fmt(r.tolerance) + "," +
           std::to_string(r.points);
      if (cfg.timings) s += "," + fmt(r.runtime);
      s += "\n";
    }
    s += std::string("# all_pass: ") + (all ? "true" : "false") + "\n";
    emit(cfg.out, s);
  }
  return all ? exit_ok : exit_verification_failed;
}

inline int dispatch(const RunConfig& cfg) {
  switch (cfg.command) {
  case Command::density: return run_density(cfg);
  case Command::zfactor: return run_zfactor(cfg);
  case Command::scan: return run_scan(cfg);
  case Command::convergence: return run_convergence(cfg);
  case Command::fit_exponent: return run_fit_exponent(cfg);
  case Command::verify: return run_verify(cfg);
  }
  return exit_ok;
}

} // namespace quench

#endif
