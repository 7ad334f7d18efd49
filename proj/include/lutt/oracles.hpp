#ifndef LUTT_ORACLES_HPP
#define LUTT_ORACLES_HPP

// Quadrature-based reference values for the closed forms.

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "model.hpp"
#include "numerics.hpp"

namespace lutt {

/// int_0^u (1 - cos y) / y dy by adaptive quadrature.
inline double cin_by_quadrature(double u, QuadratureSpec spec = {}) {
  if (u > two_pi) spec.oscillation_period = two_pi;
  return integrate(
      [](double y) {
        const double s = std::sin(0.5 * y);
        return 2.0 * s * s / y;
      },
      0.0, u, spec);
}

/// gamma0 int_0^{p_cut} (cos 2 omega0 p t - 1) / p dp by adaptive quadrature.
inline double z_by_quadrature(const ModelParams& params, double t, QuadratureSpec spec = {}) {
  const double w0 = omega0(params);
  const double g0 = gamma0(params);
  const double k = w0 * std::abs(t);
  if (k > 0.0) spec.oscillation_period = pi / k;
  return g0 * integrate(
                  [k](double p) {
                    const double s = std::sin(k * p);
                    return -2.0 * s * s / p;
                  },
                  0.0, params.p_cut(), spec);
}

/// Real part of sum over s = +-1 of int_0^inf (dp / p) e^{-2 delta p}
/// (cos p(a + s omega0 t) - cos p(a + s t)), with omega0 at every momentum.
inline double q_by_quadrature(const ModelParams& params, double a, double t, double delta, QuadratureSpec spec = {}) {
  const double w0 = omega0(params);
  const double h = 0.5 * (1.0 + w0) * t; // mean phase shift
  const double d = 0.5 * (1.0 - w0) * t; // half splitting between the cones
  const double top = 18.5 / delta;      // e^{-2 delta p} < 1e-16 beyond
  const double fastest = std::abs(a) + std::abs(t);
  if (fastest > 0.0) spec.oscillation_period = two_pi / fastest;
  auto f = [=](double p) {
    // cos p(a + w0 t) - cos p(a + t) = 2 sin(p(a + h)) sin(p d), and the mirrored pair
    const double sd = std::sin(p * d);
    return std::exp(-2.0 * delta * p) * 2.0 * sd * (std::sin(p * (a + h)) - std::sin(p * (a - h))) / p;
  };
  return integrate(f, 0.0, top, spec);
}

/// q_by_quadrature at several regulators, extrapolated to delta = 0 in delta^2
/// (the regulated integral is even in delta).
inline double q_extrapolated(const ModelParams& params, double a, double t,
                             std::span<const double> deltas = std::array{0.1, 0.05, 0.025},
                             const QuadratureSpec& spec = {}) {
  std::vector<double> h, v;
  for (double d : deltas) {
    h.push_back(d * d);
    v.push_back(q_by_quadrature(params, a, t, d, spec));
  }
  return extrapolate_to_zero(h, v);
}

} // namespace lutt

#endif
