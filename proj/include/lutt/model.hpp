#ifndef LUTT_MODEL_HPP
#define LUTT_MODEL_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace lutt {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Parameterization of the Bogoliubov angle.
///
/// `theorem` uses the closed formulas omega = sqrt(1 - (lambda v / 2 pi)^2),
/// gamma = lambda v / (4 pi), tanh(2 phi) = -lambda v / (2 pi); this is the
/// parameterization that actually diagonalizes the box Hamiltonian.
/// `angle` takes tanh(phi) = -lambda v / (2 pi) literally, with
/// sigma = sech(2 phi) - 1 and gamma = 2 sinh(phi) cosh(phi) (sinh(phi) + cosh(phi))^2.
enum class Convention { theorem, angle };

inline std::string_view to_string(Convention c) {
  return c == Convention::theorem ? "theorem" : "angle";
}

inline Convention convention_from_string(std::string_view s) {
  if (s == "theorem" || s == "THEOREM") return Convention::theorem;
  if (s == "angle" || s == "ANGLE") return Convention::angle;
  throw std::invalid_argument("unknown convention '" + std::string(s) + "'");
}

/// Scalar parameters of the non-local Luttinger model with box potential.
/// Units are v_F = 1. Construction fails with StabilityError when |lambda v0| >= 2 pi.
class ModelParams {
public:
  static constexpr double v_F = 1.0;

  ModelParams(double lambda, double v0, Convention convention = Convention::theorem,
              double p_F = 0.0, double p_cut = 1.0)
      : lambda_(lambda), v0_(v0), p_cut_(p_cut), p_F_(p_F), convention_(convention) {
    if (!std::isfinite(lambda) || !std::isfinite(v0) || !std::isfinite(p_F))
      throw std::invalid_argument("model parameters must be finite");
    if (!(p_cut > 0.0) || !std::isfinite(p_cut))
      throw std::invalid_argument("p_cut must be positive");
    if (!(std::abs(lambda * v0) < two_pi))
      throw StabilityError("unstable model: |lambda * v0| = " +
                           std::to_string(std::abs(lambda * v0)) + " >= 2 pi");
  }

  double lambda() const { return lambda_; }
  double v0() const { return v0_; }
  double p_cut() const { return p_cut_; }
  double p_F() const { return p_F_; }
  Convention convention() const { return convention_; }

  ModelParams with_convention(Convention c) const {
    return ModelParams(lambda_, v0_, c, p_F_, p_cut_);
  }
  ModelParams with_fermi_momentum(double p_F) const {
    return ModelParams(lambda_, v0_, convention_, p_F, p_cut_);
  }
  ModelParams with_lambda(double lambda) const {
    return ModelParams(lambda, v0_, convention_, p_F_, p_cut_);
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
  double lambda_;
  double v0_;
  double p_cut_;
  double p_F_;
  Convention convention_;
};

/// Fourier transform of the box potential; the support boundary is inclusive.
inline double potential(const ModelParams& params, double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("potential: momentum must be >= 0");
  return p <= params.p_cut() ? params.v0() : 0.0;
}

struct DispersionData {
  double phi = 0.0;   ///< Bogoliubov angle
  double sigma = 0.0; ///< sech(2 phi) - 1
  double omega = 1.0; ///< renormalized velocity factor, sigma + 1
  double gamma = 0.0; ///< quasi-particle exponent density
};

inline void check_stability(const ModelParams& params) {
  if (!(std::abs(params.lambda() * params.v0()) < two_pi))
    throw StabilityError("unstable model: |lambda * v0| >= 2 pi");
}

inline DispersionData dispersion(const ModelParams& params, double p) {
  const double lv = params.lambda() * potential(params, p);
  if (!(std::abs(lv) < two_pi)) throw StabilityError("unstable mode: |lambda v(p)| >= 2 pi");
  const double x = -lv / two_pi;
  DispersionData d;
  if (lv == 0.0) return d;
  if (params.convention() == Convention::theorem) {
    d.phi = 0.5 * std::atanh(x);
    d.omega = std::sqrt((1.0 - x) * (1.0 + x));
    d.sigma = -x * x / (1.0 + d.omega);
    d.gamma = lv / (2.0 * two_pi);
  } else {
    d.phi = std::atanh(x);
    const double sh = std::sinh(d.phi);
    const double ch = std::cosh(d.phi);
    const double ch2 = std::cosh(2.0 * d.phi);
    d.omega = 1.0 / ch2;
    d.sigma = -2.0 * sh * sh / ch2;
    d.gamma = 2.0 * sh * ch * (sh + ch) * (sh + ch);
  }
  return d;
}

/// The coefficient 2 sinh(phi) cosh(phi) (sinh(phi) + cosh(phi))^2 that the vertex
/// algebra produces in front of (cos 2 p omega t - 1). Equals gamma under `angle`;
/// equals -g / (1 + g), g = lambda v / 2 pi, under `theorem`.
inline double bogoliubov_weight(const DispersionData& d) {
  const double sh = std::sinh(d.phi);
  const double ch = std::cosh(d.phi);
  return 2.0 * sh * ch * (sh + ch) * (sh + ch);
}

/// Renormalized velocity on the support of the potential.
inline double omega0(const ModelParams& params) { return dispersion(params, 0.0).omega; }

/// Quasi-particle exponent on the support of the potential (active convention).
inline double gamma0(const ModelParams& params) { return dispersion(params, 0.0).gamma; }

/// Side-by-side values of both parameterizations at momentum p.
struct ConventionReport {
  double omega_theorem = 1.0;
  double omega_angle = 1.0;
  double gamma_theorem = 0.0;
  double gamma_angle = 0.0;
  double weight_theorem = 0.0;   ///< bogoliubov_weight at the theorem angle
  double gamma0_literal = 0.0; ///< v0 / 2, without lambda
  double omega_difference() const { return omega_theorem - omega_angle; }
  double gamma_difference() const { return gamma_theorem - gamma_angle; }
};

inline ConventionReport convention_report(const ModelParams& params, double p) {
  const DispersionData th = dispersion(params.with_convention(Convention::theorem), p);
  const DispersionData an = dispersion(params.with_convention(Convention::angle), p);
  ConventionReport r;
  r.omega_theorem = th.omega;
  r.omega_angle = an.omega;
  r.gamma_theorem = th.gamma;
  r.gamma_angle = an.gamma;
  r.weight_theorem = bogoliubov_weight(th);
  r.gamma0_literal = potential(params, p) / 2.0;
  return r;
}

} // namespace lutt

#endif
