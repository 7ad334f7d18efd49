#ifndef LUTT_INFINITE_VOLUME_HPP
#define LUTT_INFINITE_VOLUME_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "finite_volume.hpp"
#include "model.hpp"
#include "numerics.hpp"
#include "parallel.hpp"

namespace lutt {

namespace detail {

inline double smooth_part(double a, double t) {
  const double l = a - t, r = a + t;
  return (1.0 / (4.0 * pi * pi)) * (1.0 / (l * l) + 1.0 / (r * r));
}

/// (1 / 2 pi^2) cos(2 p_F a) weight / (a^2 - (v t)^2), vt = cone velocity times t.
inline double oscillating_part(double p_F, double a, double vt, double weight) {
  return (1.0 / (2.0 * pi * pi)) * std::cos(2.0 * p_F * a) * weight / (a * a - vt * vt);
}

} // namespace detail

/// Free density after adding a fermion at x to the ground state, evaluated at z.
inline double density_free(double x, double z, double t, double p_F, double window = default_pointwise_window) {
  const double a = x - z;
  if (std::abs(std::abs(a) - std::abs(t)) < window)
    throw LightConeSingularity("density_free: point inside the light-cone window");
  return detail::smooth_part(a, t) + detail::oscillating_part(p_F, a, t, 1.0);
}

/// Landau exponent Z(t) = gamma0 int_0^{p_cut} (cos 2 omega0 p t - 1) dp / p = -gamma0 Cin(2 omega0 p_cut t).
/// Even in t.
inline double z_of_t(const ModelParams& params, double t) {
  check_stability(params);
  const double g0 = gamma0(params);
  if (g0 == 0.0) return 0.0;
  return -g0 * cin(2.0 * omega0(params) * params.p_cut() * std::abs(t));
}

/// dZ/dt = -gamma0 (1 - cos 2 omega0 p_cut t) / t.
inline double z_derivative(const ModelParams& params, double t) {
  const double g0 = gamma0(params);
  if (t == 0.0 || g0 == 0.0) return 0.0;
  const double s = std::sin(omega0(params) * params.p_cut() * t);
  return -g0 * 2.0 * s * s / t;
}

/// ln(((x - z)^2 - t^2) / ((x - z)^2 - omega0^2 t^2)).
inline double q_closed_form(const ModelParams& params, double a, double t,
                            double window = default_pointwise_window) {
  check_stability(params);
  const double w0 = omega0(params);
  check_light_cones(a, t, w0, window);
  const double num = a * a - t * t;
  const double den = a * a - (w0 * t) * (w0 * t);
  if (!(num / den > 0.0))
    throw DomainError("q_closed_form: log argument is not positive between the light cones (a = " +
                      std::to_string(a) + ", t = " + std::to_string(t) + ")");
  return std::log(num / den);
}

struct DensityPoint {
  double smooth = 0.0;
  double oscillating = 0.0;
  double total() const { return smooth + oscillating; }
};

inline DensityPoint density_interacting_parts(const ModelParams& params, double x, double z, double t,
                                              double window = default_pointwise_window) {
  check_stability(params);
  const double a = x - z;
  const double w0 = omega0(params);
  check_light_cones(a, t, w0, window);
  return {detail::smooth_part(a, t), detail::oscillating_part(params.p_F(), a, w0 * t, std::exp(z_of_t(params, t)))};
}

/// Interacting density: smooth part on the free cone, oscillating part carried by the
/// renormalized cone with the quasi-particle weight e^{Z(t)}.
inline double density_interacting(const ModelParams& params, double x, double z, double t,
                                  double window = default_pointwise_window) {
  return density_interacting_parts(params, x, z, t, window).total();
}

/// Same density assembled as smooth + cos(2 p_F a) e^{Z} e^{Q} / (2 pi^2 (a^2 - t^2)).
/// Raises DomainError between the cones, where the log form of Q is undefined.
inline double density_assembled(const ModelParams& params, double x, double z, double t,
                                double window = default_pointwise_window) {
  const double a = x - z;
  const double q = q_closed_form(params, a, t, window);
  return detail::smooth_part(a, t) +
         detail::oscillating_part(params.p_F(), a, t, std::exp(z_of_t(params, t)) * std::exp(q));
}

// ---------------------------------------------------------------------------
// Profiles

/// Which cones blank out which component.
///   both_cones: a point near either cone is excluded entirely;
///   own_cone:   smooth is blanked near |x - z| = t, oscillating near |x - z| = omega0 t.
enum class ExclusionPolicy { both_cones, own_cone };

struct DensityProfile {
  double x = 0.0;
  double t = 0.0;
  double window = 0.0;
  ModelParams params{0.0, 0.0};
  std::vector<double> z_grid;
  std::vector<double> smooth;      ///< NaN where blanked
  std::vector<double> oscillating; ///< NaN where blanked
  std::vector<double> total;       ///< NaN where excluded
  std::vector<std::size_t> excluded;

  bool is_excluded(std::size_t i) const { return std::binary_search(excluded.begin(), excluded.end(), i); }
};

inline DensityProfile density_profile(const ModelParams& params, double x, std::span<const double> z_grid, double t,
                                      double window, ExclusionPolicy policy = ExclusionPolicy::both_cones) {
  check_stability(params);
  const double w0 = omega0(params);
  const double weight = std::exp(z_of_t(params, t));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  DensityProfile prof;
  prof.x = x;
  prof.t = t;
  prof.window = window;
  prof.params = params;
  prof.z_grid.assign(z_grid.begin(), z_grid.end());
  const std::size_t n = z_grid.size();
  prof.smooth.assign(n, nan);
  prof.oscillating.assign(n, nan);
  prof.total.assign(n, nan);
  std::vector<char> flag(n, 0);
  parallel_for(n, [&](std::size_t i) {
    const double a = x - z_grid[i];
    const bool near_free = std::abs(std::abs(a) - std::abs(t)) < window;
    const bool near_renorm = std::abs(std::abs(a) - w0 * std::abs(t)) < window;
    const bool blank_smooth = policy == ExclusionPolicy::both_cones ? (near_free || near_renorm) : near_free;
    const bool blank_osc = policy == ExclusionPolicy::both_cones ? (near_free || near_renorm) : near_renorm;
    if (!blank_smooth) prof.smooth[i] = detail::smooth_part(a, t);
    if (!blank_osc) prof.oscillating[i] = detail::oscillating_part(params.p_F(), a, w0 * t, weight);
    if (blank_smooth || blank_osc)
      flag[i] = 1;
    else
      prof.total[i] = prof.smooth[i] + prof.oscillating[i];
  });
  for (std::size_t i = 0; i < n; ++i)
    if (flag[i]) prof.excluded.push_back(i);
  return prof;
}

// ---------------------------------------------------------------------------
// Peak tracking

struct ZWindow {
  double z_min;
  double z_max;
  std::size_t steps; ///< number of samples, endpoints included
  double step() const { return (z_max - z_min) / static_cast<double>(steps - 1); }
};

struct PeakTrack {
  std::vector<double> times;
  std::vector<double> smooth_peaks;      ///< argmax |smooth| on the right-moving side
  std::vector<double> oscillating_peaks; ///< argmax |oscillating| on the right-moving side
  double smooth_velocity = 0.0;
  double oscillating_velocity = 0.0;
  double grid_step = 0.0;
};

namespace detail {

inline double argmax_abs(std::span<const double> z, std::span<const double> v, double x) {
  double best = -1.0, where = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] > x) || std::isnan(v[i])) continue;
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      where = z[i];
    }
  }
  if (std::isnan(where)) throw WindowTooCoarse("track_peaks: no admissible sample right of x");
  return where;
}

} // namespace detail

/// Locates, for every t, the peaks of the smooth and oscillating parts on the
/// right-moving side (z > x) and fits the peak velocities by linear regression. Only
/// samples sitting on a component's own cone (within 1e-6 steps) are skipped, so the
/// argmax is the sample nearest the singularity.
inline PeakTrack track_peaks(const ModelParams& params, double x, std::span<const double> t_grid, ZWindow z_window) {
  check_stability(params);
  if (t_grid.size() < 2) throw WindowTooCoarse("track_peaks: need at least two times for a velocity");
  if (z_window.steps < 2 || !(z_window.z_max > z_window.z_min))
    throw WindowTooCoarse("track_peaks: empty z window");
  std::vector<double> times(t_grid.begin(), t_grid.end());
  std::sort(times.begin(), times.end());
  const double step = z_window.step();
  const double slowest = std::min(1.0, omega0(params));
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(slowest * (times[i] - times[i - 1]) >= 3.0 * step))
      throw WindowTooCoarse("track_peaks: cones move fewer than 3 samples per time step");
  const auto z = linspace(z_window.z_min, z_window.z_max, z_window.steps);
  PeakTrack track;
  track.times = times;
  track.grid_step = step;
  for (double t : times) {
    const auto prof = density_profile(params, x, z, t, 1e-6 * step, ExclusionPolicy::own_cone);
    track.smooth_peaks.push_back(detail::argmax_abs(z, prof.smooth, x));
    track.oscillating_peaks.push_back(detail::argmax_abs(z, prof.oscillating, x));
  }
  std::vector<double> ds, dosc;
  for (std::size_t i = 0; i < times.size(); ++i) {
    ds.push_back(track.smooth_peaks[i] - x);
    dosc.push_back(track.oscillating_peaks[i] - x);
  }
  track.smooth_velocity = least_squares_slope(times, ds);
  track.oscillating_velocity = least_squares_slope(times, dosc);
  return track;
}

} // namespace lutt

#endif
