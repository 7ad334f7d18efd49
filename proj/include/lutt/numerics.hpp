#ifndef LUTT_NUMERICS_HPP
#define LUTT_NUMERICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace lutt {

using complex = std::complex<double>;

inline constexpr double euler_gamma = 0.5772156649015329;

/// Neumaier (improved Kahan) running sum. Addition order is the caller's.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
public:
  void add(complex z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  CompensatedComplexSum& operator+=(complex z) {
    add(z);
    return *this;
  }
  complex value() const { return {re_.value(), im_.value()}; }

private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// ---------------------------------------------------------------------------
// Cosine integrals

namespace detail {

inline double cin_series(double u) {
  // Cin(u) = sum_{k>=1} (-1)^{k+1} u^{2k} / (2k (2k)!)
  const double u2 = u * u;
  double term = u2 / 2.0; // (-1)^{k+1} u^{2k} / (2k)!, k = 1
  CompensatedSum sum;
  for (int k = 1; k < 200; ++k) {
    const double contrib = term / (2.0 * k);
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * std::abs(sum.value())) break;
    term *= -u2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
  }
  return sum.value();
}

/// Ci(u) and Si(u) for u > 2 from the continued fraction of E1(iu) (modified Lentz).
inline std::pair<double, double> cisi_continued_fraction(double u) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  complex b(1.0, u);
  complex c(1.0 / tiny, 0.0);
  complex d = 1.0 / b;
  complex h = d;
  for (int i = 2; i < 100000; ++i) {
    const double a = -static_cast<double>((i - 1) * (i - 1));
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const complex del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) break;
  }
  h *= complex(std::cos(u), -std::sin(u));
  return {-h.real(), pi / 2.0 + h.imag()};
}

} // namespace detail

/// Series / continued-fraction switch point for cin.
inline constexpr double cin_switch_point = 8.0;

/// Cosine integral Ci(u) for u > 0.
inline double cosine_integral(double u) {
  if (!(u > 0.0)) throw std::invalid_argument("cosine_integral: u must be > 0");
  if (u <= cin_switch_point) return euler_gamma + std::log(u) - detail::cin_series(u);
  return detail::cisi_continued_fraction(u).first;
}

/// Entire cosine integral Cin(u) = int_0^u (1 - cos y) / y dy, u >= 0.
/// Satisfies int_u^inf cos(y)/y dy = -C - ln u + Cin(u).
inline double cin(double u) {
  if (!(u >= 0.0)) throw std::invalid_argument("cin: u must be >= 0");
  if (u == 0.0) return 0.0;
  if (u <= cin_switch_point) return detail::cin_series(u);
  return euler_gamma + std::log(u) - detail::cisi_continued_fraction(u).first;
}

// ---------------------------------------------------------------------------
// Adaptive quadrature

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = 2000;
  /// When set, [a, b] is first split at the zeros of cos(2 pi y / period).
  std::optional<double> oscillation_period;
  /// Each starting panel is divided into this many equal parts.
  std::size_t initial_panels = 1;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw std::invalid_argument("QuadratureSpec: tolerances must be > 0");
    if (max_subdivisions < 1) throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    if (initial_panels < 1) throw std::invalid_argument("QuadratureSpec: initial_panels must be >= 1");
    if (oscillation_period && !(*oscillation_period > 0.0))
      throw std::invalid_argument("QuadratureSpec: oscillation_period must be > 0");
  }
};

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> gk15_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> g7_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * gk15_kronrod_weights[7];
  double gauss = fc * g7_weights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * gk15_nodes[j];
    const double fsum = f(centre - dx) + f(centre + dx);
    kronrod += gk15_kronrod_weights[j] * fsum;
    if (j % 2 == 1) gauss += g7_weights[j / 2] * fsum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
  if (a == b) return 0.0;

  std::vector<double> cuts{a};
  if (spec.oscillation_period) {
    const double quarter = *spec.oscillation_period / 4.0;
    // zeros of cos(2 pi y / P) sit at odd multiples of P/4
    auto k = static_cast<long long>(std::floor((a / quarter - 1.0) / 2.0));
    for (;; ++k) {
      const double y = (2.0 * static_cast<double>(k) + 1.0) * quarter;
      if (y >= b) break;
      if (y > a) cuts.push_back(y);
    }
  }
  cuts.push_back(b);

  auto by_error = [](const detail::Panel& l, const detail::Panel& r) { return l.error < r.error; };
  std::vector<detail::Panel> heap;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double width = (cuts[i + 1] - cuts[i]) / static_cast<double>(spec.initial_panels);
    for (std::size_t j = 0; j < spec.initial_panels; ++j) {
      const double lo = cuts[i] + width * static_cast<double>(j);
      const double hi = (j + 1 == spec.initial_panels) ? cuts[i + 1] : lo + width;
      heap.push_back(detail::gauss_kronrod_15(f, lo, hi));
    }
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  auto totals = [&heap] {
    CompensatedSum value, error;
    for (const auto& p : heap) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value.value(), error.value()};
  };

  for (std::size_t iter = 0;; ++iter) {
    const auto [value, error] = totals();
    if (!std::isfinite(value)) throw ToleranceNotMet("integrate: non-finite integrand value");
    if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) return value;
    if (iter >= spec.max_subdivisions)
      throw ToleranceNotMet("integrate: tolerance not met after " + std::to_string(spec.max_subdivisions) +
                            " subdivisions (error estimate " + std::to_string(error) + ")");
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const detail::Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw ToleranceNotMet("integrate: panel width reached machine resolution");
    heap.push_back(detail::gauss_kronrod_15(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(detail::gauss_kronrod_15(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), by_error);
  }
}

// ---------------------------------------------------------------------------
// Extrapolation and fitting

/// Value at h = 0 of the interpolating polynomial through (h_i, f_i) (Neville).
inline double extrapolate_to_zero(std::span<const double> h, std::span<const double> f) {
  if (h.size() != f.size() || h.empty())
    throw std::invalid_argument("extrapolate_to_zero: need matching, non-empty samples");
  std::vector<double> p(f.begin(), f.end());
  const std::size_t n = p.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
  return p[0];
}

/// Slope of the least-squares line through (x_i, y_i).
inline double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InsufficientSamples("least_squares_slope: need two or more points");
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double xm = sx.value() / static_cast<double>(x.size());
  const double ym = sy.value() / static_cast<double>(x.size());
  CompensatedSum sxx, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx.value() > 0.0)) throw InsufficientSamples("least_squares_slope: all abscissae coincide");
  return sxy.value() / sxx.value();
}

struct PowerLawSample {
  double t;
  double value;
};

struct FitWindow {
  double t_min;
  double t_max;
};

struct FitReport {
  double exponent = 0.0;  ///< k in value ~ amplitude * t^{-k}
  double amplitude = 0.0;
  double residual_rms = 0.0; ///< rms of log-space residuals
  FitWindow window{0.0, 0.0};
  std::size_t samples_used = 0;
};

inline constexpr std::size_t min_fit_samples = 8;

/// Least-squares fit of ln value = ln amplitude - exponent * ln t over the window.
inline FitReport fit_power_law(std::span<const PowerLawSample> samples, FitWindow window) {
  if (!(window.t_min < window.t_max)) throw std::invalid_argument("fit_power_law: empty window");
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    if (s.t < window.t_min || s.t > window.t_max) continue;
    if (!(s.t > 0.0)) throw NonPositiveValue("fit_power_law: t must be > 0");
    if (!(s.value > 0.0)) throw NonPositiveValue("fit_power_law: value must be > 0");
    xs.push_back(std::log(s.t));
    ys.push_back(std::log(s.value));
  }
  if (xs.size() < min_fit_samples)
    throw InsufficientSamples("fit_power_law: " + std::to_string(xs.size()) + " samples in window, need " +
                              std::to_string(min_fit_samples));
  const auto n = static_cast<double>(xs.size());
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double xbar = sx.value() / n;
  const double ybar = sy.value() / n;
  CompensatedSum sxx, sxy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (!(sxx.value() > 0.0)) throw InsufficientSamples("fit_power_law: all samples share one t");
  const double slope = sxy.value() / sxx.value();
  const double intercept = ybar - slope * xbar;
  CompensatedSum ss;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss += r * r;
  }
  FitReport rep;
  rep.exponent = -slope;
  rep.amplitude = std::exp(intercept);
  rep.residual_rms = std::sqrt(ss.value() / n);
  rep.window = window;
  rep.samples_used = xs.size();
  return rep;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw std::invalid_argument("linspace: need at least two points");
  std::vector<double> v(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + h * static_cast<double>(i);
  v.back() = b;
  return v;
}

inline std::vector<double> logspace(double a, double b, std::size_t n) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("logspace: endpoints must be > 0");
  auto v = linspace(std::log(a), std::log(b), n);
  for (auto& x : v) x = std::exp(x);
  v.front() = a;
  v.back() = b;
  return v;
}

} // namespace lutt

#endif
