#ifndef LUTT_FINITE_VOLUME_HPP
#define LUTT_FINITE_VOLUME_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "boson_algebra.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "model.hpp"
#include "numerics.hpp"

namespace lutt {

/// Default half-width of the light-cone exclusion window for pointwise evaluation.
inline constexpr double default_pointwise_window = 1e-9;

inline void check_light_cones(double a, double t, double omega0_value, double window) {
  const double d = std::abs(a);
  if (std::abs(d - std::abs(t)) < window)
    throw LightConeSingularity("point on the free light cone |x - z| = t (a = " + std::to_string(a) +
                               ", t = " + std::to_string(t) + ")");
  if (std::abs(d - omega0_value * std::abs(t)) < window)
    throw LightConeSingularity("point on the renormalized light cone |x - z| = omega0 t (a = " + std::to_string(a) +
                               ", t = " + std::to_string(t) + ")");
}

struct ExponentBreakdown {
  complex z_term{};
  complex q_plus{};
  complex q_minus{};
  complex free_reference{}; ///< the free phases e^{ip(a+t)} + e^{ip(a-t)} that were subtracted
  complex total() const { return z_term + q_plus + q_minus; }
};

/// Mode sum of the four-point exponent over the grid, with a = x - z and the
/// two-vertex damping e^{-2 delta p}:
///   sum_p (2 pi / L p) e^{-2 delta p} [ (e^{ip(a + omega t)} - e^{ip(a + t)})
///       + (e^{ip(a - omega t)} - e^{ip(a - t)}) + W(p) (cos 2 p omega t - 1) ]
/// with W = 2 sinh(phi) cosh(phi) (sinh(phi) + cosh(phi))^2. `weight_shift` is added to W
/// on the support of the potential (fault injection).
inline ExponentBreakdown exponent_main1(const ModelParams& params, double a, double t, const ModeGrid& grid,
                                        double weight_shift = 0.0) {
  check_stability(params);
  require_covers(grid, params);
  CompensatedComplexSum zs, qp, qm, fr;
  const double delta = grid.delta();
  for (std::size_t n = 1; n <= grid.n_max(); ++n) {
    const double p = grid.momentum(n);
    const auto d = dispersion(params, p);
    const double w = std::exp(-2.0 * delta * p) / static_cast<double>(n);
    const complex free_plus = std::polar(w, p * (a + t));
    const complex free_minus = std::polar(w, p * (a - t));
    qp += std::polar(w, p * (a + d.omega * t)) - free_plus;
    qm += std::polar(w, p * (a - d.omega * t)) - free_minus;
    fr += free_plus + free_minus;
    double weight = bogoliubov_weight(d);
    if (p <= params.p_cut()) weight += weight_shift;
    const double sn = std::sin(p * d.omega * t);
    zs += -2.0 * w * weight * sn * sn;
  }
  return {zs.value(), qp.value(), qm.value(), fr.value()};
}

/// Finite-volume Landau exponent sum_{p <= p_cut} (2 pi / L p) e^{-2 delta p} gamma(p) (cos 2 p omega t - 1).
inline double z_sum(const ModelParams& params, double t, const ModeGrid& grid) {
  check_stability(params);
  require_covers(grid, params);
  CompensatedSum z;
  for (std::size_t n = 1; n <= grid.n_max(); ++n) {
    const double p = grid.momentum(n);
    if (p > params.p_cut()) break;
    const auto d = dispersion(params, p);
    const double sn = std::sin(p * d.omega * t);
    z += -2.0 * std::exp(-2.0 * grid.delta() * p) / static_cast<double>(n) * d.gamma * sn * sn;
  }
  return z.value();
}

namespace detail {

/// 1 - exp(-(ur + i ui)) without cancellation for small |u|.
inline complex one_minus_exp(double ur, double ui) {
  const double s = std::sin(0.5 * ui);
  const double e = std::exp(-ur);
  return {-std::expm1(-ur) + 2.0 * e * s * s, e * std::sin(ui)};
}

} // namespace detail

/// sum_{n >= 1} (1/n) exp(-(2 pi n / L)(2 delta - i theta)) = -log(1 - e^{-u}), all modes.
inline complex closed_log_sum(double theta, double L, double delta) {
  const double k = two_pi / L;
  return -std::log(detail::one_minus_exp(2.0 * k * delta, -k * theta));
}

/// The same sum truncated to the grid, accumulated mode by mode.
inline complex mode_log_sum(double theta, const ModeGrid& grid) {
  CompensatedComplexSum s;
  for (std::size_t n = 1; n <= grid.n_max(); ++n) {
    const double p = grid.momentum(n);
    s += std::polar(std::exp(-2.0 * grid.delta() * p) / static_cast<double>(n), p * theta);
  }
  return s.value();
}

inline double normalization_sq(const ModeGrid& grid) { return normalization_sq(grid.L(), grid.delta()); }

/// Support of the renormalized velocity inside Q.
///   potential: omega(p) from the box, the sum runs over the grid (omega = 1 beyond p_cut);
///   unbounded: omega0 at every momentum, summed over all modes in closed form.
enum class QSupport { potential, unbounded };

inline complex q_sum(const ModelParams& params, double a, double t, const ModeGrid& grid,
                     QSupport support = QSupport::unbounded) {
  check_stability(params);
  if (support == QSupport::potential) {
    const auto e = exponent_main1(params, a, t, grid);
    return e.q_plus + e.q_minus;
  }
  const double w0 = omega0(params);
  const double L = grid.L(), d = grid.delta();
  return (closed_log_sum(a + w0 * t, L, d) - closed_log_sum(a + t, L, d)) +
         (closed_log_sum(a - w0 * t, L, d) - closed_log_sum(a - t, L, d));
}

/// Branch propagator < psi^-_w(x) psi^+_w(z, t) >_0 / Klein = N_delta^2 exp(sum_p w_p (e^{ip theta} - 1))
/// = 1 / (L (1 - exp(-(2 pi / L)(2 delta - i theta)))), theta = (x - z) + eps_w t, all modes.
inline complex free_propagator_finite(double a, double t, const ModeGrid& grid, Branch w,
                                      double window = default_pointwise_window) {
  if (std::abs(std::abs(a) - std::abs(t)) < window)
    throw LightConeSingularity("free propagator evaluated on the light cone");
  const double k = two_pi / grid.L();
  const double theta = a + chirality(w) * t;
  return 1.0 / (grid.L() * detail::one_minus_exp(2.0 * k * grid.delta(), -k * theta));
}

/// The same propagator from the mode sum truncated to the grid.
inline complex free_propagator_modes(double a, double t, const ModeGrid& grid, Branch w) {
  const double theta = a + chirality(w) * t;
  CompensatedComplexSum s;
  for (std::size_t n = 1; n <= grid.n_max(); ++n) {
    const double p = grid.momentum(n);
    const double wn = std::exp(-2.0 * grid.delta() * p) / static_cast<double>(n);
    const double sn = std::sin(0.5 * p * theta);
    s += complex(-2.0 * wn * sn * sn, wn * std::sin(p * theta));
  }
  return normalization_sq(grid) * std::exp(s.value());
}

/// Cross-branch free factor -m_1 m_2, which tends to 1 / (4 pi^2 ((x - z)^2 - t^2)).
inline complex mixed_free_propagator(double a, double t, const ModeGrid& grid,
                                     double window = default_pointwise_window) {
  return -free_propagator_finite(a, t, grid, Branch::one, window) *
         free_propagator_finite(a, t, grid, Branch::two, window);
}

struct FiniteDensityParts {
  double smooth = 0.0;
  double oscillating = 0.0;
  double imag_residual = 0.0; ///< imaginary part left over from the conjugate pair
  double total() const { return smooth + oscillating; }
};

/// Finite-volume density < n(z) > at time t after adding a fermion at x:
/// smooth |m_1|^2 + |m_2|^2 plus the two cross terms
/// e^{+-2 i p_F a} (-m_1 m_2)(+-a) e^{Q(+-a)} e^{Z}.
inline FiniteDensityParts density_finite_parts(const ModelParams& params, double x, double z, double t,
                                               const ModeGrid& grid, double window = default_pointwise_window,
                                               QSupport support = QSupport::unbounded) {
  check_stability(params);
  const double a = x - z;
  check_light_cones(a, t, omega0(params), window);
  const complex m1 = free_propagator_finite(a, t, grid, Branch::one, 0.0);
  const complex m2 = free_propagator_finite(a, t, grid, Branch::two, 0.0);
  FiniteDensityParts r;
  r.smooth = std::norm(m1) + std::norm(m2);
  const double ez = std::exp(z_sum(params, t, grid));
  const double pf = params.p_F();
  const complex t12 = std::polar(1.0, 2.0 * pf * a) * mixed_free_propagator(a, t, grid, 0.0) *
                      std::exp(q_sum(params, a, t, grid, support));
  const complex t21 = std::polar(1.0, -2.0 * pf * a) * mixed_free_propagator(-a, t, grid, 0.0) *
                      std::exp(q_sum(params, -a, t, grid, support));
  const complex osc = ez * (t12 + t21);
  r.oscillating = osc.real();
  r.imag_residual = osc.imag();
  return r;
}

inline double density_finite(const ModelParams& params, double x, double z, double t, const ModeGrid& grid,
                             double window = default_pointwise_window) {
  return density_finite_parts(params, x, z, t, grid, window).total();
}

} // namespace lutt

#endif
