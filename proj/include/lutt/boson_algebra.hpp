#ifndef LUTT_BOSON_ALGEBRA_HPP
#define LUTT_BOSON_ALGEBRA_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "model.hpp"
#include "numerics.hpp"

namespace lutt {

enum class Branch { one = 1, two = 2 };
/// Sign s of the density mode rho_w(s p), p > 0.
enum class Sign { plus, minus };
/// psi^- or psi^+.
enum class FermionSign { minus, plus };

/// epsilon_1 = +1, epsilon_2 = -1.
inline double chirality(Branch b) { return b == Branch::one ? 1.0 : -1.0; }
inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

/// rho_1(-p) and rho_2(p) annihilate the vacuum; rho_1(p) and rho_2(-p) create.
inline bool is_annihilator(Branch b, Sign s) {
  return (b == Branch::one && s == Sign::minus) || (b == Branch::two && s == Sign::plus);
}

/// exp(log_prefactor) * exp(sum_{w,s,n} c_{w,s}(p_n) rho_w(s p_n)) on a finite mode grid.
/// The exponential is the plain (not normal-ordered) one.
class BosonExponent {
public:
  explicit BosonExponent(const ModeGrid& grid, complex log_prefactor = 0.0)
      : grid_(grid), log_prefactor_(log_prefactor) {
    for (auto& v : coeffs_) v.assign(grid.n_max(), complex{});
  }

  const ModeGrid& grid() const { return grid_; }
  complex log_prefactor() const { return log_prefactor_; }
  void set_log_prefactor(complex v) { log_prefactor_ = v; }

  /// n is 1-based, as for ModeGrid::momentum.
  complex coeff(Branch b, Sign s, std::size_t n) const { return coeffs_[slot(b, s)].at(n - 1); }
  complex& coeff(Branch b, Sign s, std::size_t n) { return coeffs_[slot(b, s)].at(n - 1); }

  std::span<const complex> coeffs(Branch b, Sign s) const { return coeffs_[slot(b, s)]; }
  std::span<complex> coeffs(Branch b, Sign s) { return coeffs_[slot(b, s)]; }

  bool has_annihilation_part() const {
    return nonzero(coeffs_[slot(Branch::one, Sign::minus)]) || nonzero(coeffs_[slot(Branch::two, Sign::plus)]);
  }
  bool has_creation_part() const {
    return nonzero(coeffs_[slot(Branch::one, Sign::plus)]) || nonzero(coeffs_[slot(Branch::two, Sign::minus)]);
  }

  /// Adds linear forms and prefactors. This is the product only for commuting elements.
  BosonExponent& operator+=(const BosonExponent& o) {
    require_same_grid(o);
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t i = 0; i < coeffs_[k].size(); ++i) coeffs_[k][i] += o.coeffs_[k][i];
    log_prefactor_ += o.log_prefactor_;
    return *this;
  }
  friend BosonExponent operator+(BosonExponent a, const BosonExponent& b) { return a += b; }

  BosonExponent scaled(complex f) const {
    BosonExponent r = *this;
    for (auto& v : r.coeffs_)
      for (auto& c : v) c *= f;
    r.log_prefactor_ *= f;
    return r;
  }

  /// Largest coefficient difference; prefactors are ignored.
  double max_abs_difference(const BosonExponent& o) const {
    require_same_grid(o);
    double m = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t i = 0; i < coeffs_[k].size(); ++i) m = std::max(m, std::abs(coeffs_[k][i] - o.coeffs_[k][i]));
    return m;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& v : coeffs_)
      for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
  }

  void require_same_grid(const BosonExponent& o) const {
    if (!grid_.same_modes(o.grid_)) throw GridMismatch("boson exponents live on different mode grids");
  }

private:
  static std::size_t slot(Branch b, Sign s) {
    return (b == Branch::one ? 0u : 2u) + (s == Sign::plus ? 0u : 1u);
  }
  static bool nonzero(const std::vector<complex>& v) {
    for (const auto& c : v)
      if (c != complex{}) return true;
    return false;
  }

  ModeGrid grid_;
  std::array<std::vector<complex>, 4> coeffs_;
  complex log_prefactor_;
};

/// Contraction rules of the vacuum: [rho_1(-p), rho_1(p)] = [rho_2(p), rho_2(-p)] = p L / 2 pi.
struct VacuumRules {
  ModeGrid grid;

  explicit VacuumRules(const ModeGrid& g) : grid(g) {}
  /// p_n L / 2 pi, which is n.
  double commutator_scale(std::size_t n) const { return static_cast<double>(n); }
};

/// log < 0 | F_1 F_2 ... F_k | 0 >. Each plain exponential contributes its self
/// contraction K(D_i, C_i) / 2 and each ordered pair i < j contributes K(D_i, C_j).
inline complex vacuum_log_expectation(std::span<const BosonExponent> factors, const VacuumRules& rules) {
  CompensatedComplexSum total;
  for (const auto& f : factors) {
    if (!f.grid().same_modes(rules.grid)) throw GridMismatch("factor grid differs from the vacuum rules grid");
    total += f.log_prefactor();
  }
  const std::size_t k = factors.size();
  for (std::size_t n = 1; n <= rules.grid.n_max(); ++n) {
    complex suffix1{}, suffix2{};
    complex mode_sum{};
    for (std::size_t i = k; i-- > 0;) {
      const auto& f = factors[i];
      const complex d1 = f.coeff(Branch::one, Sign::minus, n);
      const complex d2 = f.coeff(Branch::two, Sign::plus, n);
      const complex c1 = f.coeff(Branch::one, Sign::plus, n);
      const complex c2 = f.coeff(Branch::two, Sign::minus, n);
      mode_sum += d1 * (0.5 * c1 + suffix1) + d2 * (0.5 * c2 + suffix2);
      suffix1 += c1;
      suffix2 += c2;
    }
    total += rules.commutator_scale(n) * mode_sum;
  }
  return total.value();
}

inline complex vacuum_log_expectation(std::span<const BosonExponent> factors) {
  if (factors.empty()) return 0.0;
  return vacuum_log_expectation(factors, VacuumRules(factors.front().grid()));
}

inline complex vacuum_expectation(std::span<const BosonExponent> factors, const VacuumRules& rules) {
  return std::exp(vacuum_log_expectation(factors, rules));
}

inline complex vacuum_expectation(std::span<const BosonExponent> factors) {
  return std::exp(vacuum_log_expectation(factors));
}

// ---------------------------------------------------------------------------
// Conjugation maps

/// rho_{1,2}(s p) -> cosh(phi') rho_{1,2}(s p) + sinh(phi') rho_{2,1}(s p), phi' = direction * scale * phi(p).
inline BosonExponent conjugate_bogoliubov(const BosonExponent& e, const ModelParams& params, int direction,
                                          double scale = 1.0) {
  if (direction != 1 && direction != -1) throw std::invalid_argument("conjugate_bogoliubov: direction must be +1 or -1");
  BosonExponent r = e;
  const ModeGrid& g = e.grid();
  for (std::size_t n = 1; n <= g.n_max(); ++n) {
    const double phi = static_cast<double>(direction) * scale * dispersion(params, g.momentum(n)).phi;
    if (phi == 0.0) continue;
    const double ch = std::cosh(phi);
    const double sh = std::sinh(phi);
    for (Sign s : {Sign::plus, Sign::minus}) {
      const complex c1 = e.coeff(Branch::one, s, n);
      const complex c2 = e.coeff(Branch::two, s, n);
      r.coeff(Branch::one, s, n) = ch * c1 + sh * c2;
      r.coeff(Branch::two, s, n) = ch * c2 + sh * c1;
    }
  }
  return r;
}

namespace detail {

template <class Velocity>
BosonExponent evolve(const BosonExponent& e, double t, Velocity&& velocity) {
  BosonExponent r = e;
  if (t == 0.0) return r;
  const ModeGrid& g = e.grid();
  for (std::size_t n = 1; n <= g.n_max(); ++n) {
    const double p = g.momentum(n);
    const double arg = velocity(p) * p * t;
    for (Branch b : {Branch::one, Branch::two}) {
      const double eps = chirality(b);
      r.coeff(b, Sign::plus, n) *= std::polar(1.0, eps * arg);
      r.coeff(b, Sign::minus, n) *= std::polar(1.0, -eps * arg);
    }
  }
  return r;
}

} // namespace detail

/// Time evolution by H_0 (free) or H_0 + D (renormalized, velocity sigma + 1):
/// the coefficient on rho_w(s p) gains exp(i s eps_w omega p t).
inline BosonExponent conjugate_evolution(const BosonExponent& e, const ModelParams& params, double t,
                                         bool renormalized) {
  if (!renormalized) return detail::evolve(e, t, [](double) { return 1.0; });
  return detail::evolve(e, t, [&params](double p) { return dispersion(params, p).omega; });
}

inline BosonExponent evolve_free(const BosonExponent& e, double t) {
  return detail::evolve(e, t, [](double) { return 1.0; });
}

/// Heisenberg evolution under the interacting Hamiltonian.
inline BosonExponent heisenberg_evolution(const BosonExponent& e, const ModelParams& params, double t) {
  return conjugate_bogoliubov(conjugate_evolution(conjugate_bogoliubov(e, params, +1), params, t, true), params, -1);
}

// ---------------------------------------------------------------------------
// Vertex operators

/// N_delta^2 = 1 / (L (1 - exp(-4 pi delta / L))).
inline double normalization_sq(double L, double delta) {
  return 1.0 / (L * -std::expm1(-2.0 * two_pi * delta / L));
}

/// Bosonized fermion field psi^-_w(x) (or psi^+_w(x)) freely evolved to time t:
/// coefficients eps_w (2 pi / L p) e^{-delta p} [e^{-ipx} on rho_w(p), -e^{ipx} on rho_w(-p)],
/// negated for psi^+, with log prefactor ln N_delta. Klein factors contribute 1.
inline BosonExponent vertex_factor(Branch w, FermionSign sign, double x, double t, double delta,
                                   const ModeGrid& grid) {
  if (!(delta > 0.0)) throw std::invalid_argument("vertex_factor: delta must be > 0");
  BosonExponent e(grid, 0.5 * std::log(normalization_sq(grid.L(), delta)));
  const double overall = chirality(w) * (sign == FermionSign::minus ? 1.0 : -1.0);
  for (std::size_t n = 1; n <= grid.n_max(); ++n) {
    const double p = grid.momentum(n);
    const double weight = overall * std::exp(-delta * p) / static_cast<double>(n);
    e.coeff(w, Sign::plus, n) = weight * std::polar(1.0, -p * x);
    e.coeff(w, Sign::minus, n) = -weight * std::polar(1.0, p * x);
  }
  return evolve_free(e, t);
}

// ---------------------------------------------------------------------------
// Factor tables of the long calculation

namespace detail {

struct AngleData {
  double ch, sh;         // cosh(phi), sinh(phi)
  double ch_eps, sh_eps; // cosh(eps phi), sinh(eps phi)
  double sigma, omega;
};

inline AngleData angles(const ModelParams& params, double p, double eps) {
  const auto d = dispersion(params, p);
  return {std::cosh(d.phi), std::sinh(d.phi), std::cosh(eps * d.phi), std::sinh(eps * d.phi), d.sigma, d.omega};
}

/// Builds an exponent on one branch from per-mode coefficients of rho(p) and rho(-p),
/// each multiplied by (2 pi / L p) e^{-delta p}.
template <class Plus, class Minus>
BosonExponent branch_form(const ModeGrid& grid, Branch b, Plus&& on_plus, Minus&& on_minus) {
  BosonExponent e(grid);
  for (std::size_t n = 1; n <= grid.n_max(); ++n) {
    const double p = grid.momentum(n);
    const double w = std::exp(-grid.delta() * p) / static_cast<double>(n);
    e.coeff(b, Sign::plus, n) = w * on_plus(n, p);
    e.coeff(b, Sign::minus, n) = w * on_minus(n, p);
  }
  return e;
}

inline complex cis(double a) { return std::polar(1.0, a); }

} // namespace detail

using FactorMap = std::map<std::string, BosonExponent>;

/// The factors of the two conjugated vertex operators, coefficient by coefficient as
/// tabulated. Branch-2 factors use s for the time argument. z_a and z_b are scalars and
/// carry only a log prefactor.
inline FactorMap appendix_factors(const ModelParams& params, double x, double z, double t, double s,
                                  double eps, const ModeGrid& grid) {
  using detail::cis;
  const std::size_t nm = grid.n_max();
  std::vector<detail::AngleData> ang(nm + 1);
  for (std::size_t n = 1; n <= nm; ++n) ang[n] = detail::angles(params, grid.momentum(n), eps);
  auto A = [&](std::size_t n) -> const detail::AngleData& { return ang[n]; };
  const Branch b1 = Branch::one, b2 = Branch::two;

  FactorMap f;
  CompensatedComplexSum za;
  for (std::size_t n = 1; n <= nm; ++n)
    za += (cis(-grid.momentum(n) * A(n).sigma * t) - 1.0) / static_cast<double>(n);
  f.emplace("z_a", BosonExponent(grid, za.value()));
  f.emplace("z_b", BosonExponent(grid, -za.value()));

  f.emplace("A_1+", detail::branch_form(grid, b1,
      [&](std::size_t n, double p) { return A(n).ch_eps * (-cis(-p * x + p * t) + cis(-p * x + p * t * A(n).omega)); },
      [&](std::size_t, double) { return complex{}; }));
  f.emplace("A_1-", detail::branch_form(grid, b1,
      [&](std::size_t, double) { return complex{}; },
      [&](std::size_t n, double p) { return A(n).ch_eps * (cis(p * x - p * t) - cis(p * x - p * t * A(n).omega)); }));
  f.emplace("A_2+", detail::branch_form(grid, b2,
      [&](std::size_t n, double p) { return A(n).sh_eps * (cis(-p * x + p * t) - cis(-p * x + p * t * A(n).omega)); },
      [&](std::size_t, double) { return complex{}; }));
  f.emplace("A_2-", detail::branch_form(grid, b2,
      [&](std::size_t, double) { return complex{}; },
      [&](std::size_t n, double p) { return -A(n).sh_eps * (cis(p * x - p * t) - cis(p * x - p * t * A(n).omega)); }));

  f.emplace("B_1+", detail::branch_form(grid, b1,
      [&](std::size_t n, double p) { return A(n).sh_eps * (cis(-p * z - p * s) - cis(-p * z - p * s * A(n).omega)); },
      [&](std::size_t, double) { return complex{}; }));
  f.emplace("B_1-", detail::branch_form(grid, b1,
      [&](std::size_t, double) { return complex{}; },
      [&](std::size_t n, double p) { return A(n).sh_eps * (cis(p * z + p * s) - cis(p * z + p * s * A(n).omega)); }));
  f.emplace("B_2+", detail::branch_form(grid, b2,
      [&](std::size_t n, double p) { return A(n).ch_eps * (cis(-p * z - p * s * A(n).omega) - cis(-p * z - p * s)); },
      [&](std::size_t, double) { return complex{}; }));
  f.emplace("B_2-", detail::branch_form(grid, b2,
      [&](std::size_t, double) { return complex{}; },
      [&](std::size_t n, double p) { return A(n).ch_eps * (-cis(p * z + p * s * A(n).omega) + cis(p * z + p * s)); }));

  f.emplace("Wtilde_1^-1", detail::branch_form(grid, b1,
      [&](std::size_t n, double p) { return (A(n).ch_eps - 1.0) * cis(-p * z + p * t); },
      [&](std::size_t n, double p) { return -(A(n).ch_eps - 1.0) * cis(p * z - p * t); }));
  f.emplace("Rtilde_1^-1", detail::branch_form(grid, b2,
      [&](std::size_t n, double p) { return -A(n).sh_eps * cis(-p * z + p * t); },
      [&](std::size_t n, double p) { return A(n).sh_eps * cis(p * z - p * t); }));
  f.emplace("Wbar_1^-1", detail::branch_form(grid, b1,
      [&](std::size_t n, double p) { return (A(n).ch - 1.0) * A(n).ch_eps * cis(-p * z + p * A(n).omega * t); },
      [&](std::size_t n, double p) { return -(A(n).ch - 1.0) * A(n).ch_eps * cis(p * z - p * A(n).omega * t); }));
  f.emplace("Rbar_1^-1", detail::branch_form(grid, b2,
      [&](std::size_t n, double p) { return -(A(n).ch - 1.0) * A(n).sh_eps * cis(-p * z + p * A(n).omega * t); },
      [&](std::size_t n, double p) { return (A(n).ch - 1.0) * A(n).sh_eps * cis(p * z - p * A(n).omega * t); }));
  f.emplace("What_1^-1", detail::branch_form(grid, b1,
      [&](std::size_t n, double p) { return -A(n).sh * A(n).sh_eps * cis(-p * x - p * t * A(n).omega); },
      [&](std::size_t n, double p) { return A(n).sh * A(n).sh_eps * cis(p * x + p * t * A(n).omega); }));
  f.emplace("Rhat_1^-1", detail::branch_form(grid, b2,
      [&](std::size_t n, double p) { return A(n).sh * A(n).ch_eps * cis(-p * x - p * t * A(n).omega); },
      [&](std::size_t n, double p) { return -A(n).sh * A(n).ch_eps * cis(p * x + p * t * A(n).omega); }));

  f.emplace("Wtilde_2", detail::branch_form(grid, b1,
      [&](std::size_t n, double p) { return -A(n).sh_eps * cis(-p * z - p * s); },
      [&](std::size_t n, double p) { return A(n).sh_eps * cis(p * z + p * s); }));
  f.emplace("Rtilde_2", detail::branch_form(grid, b2,
      [&](std::size_t n, double p) { return (A(n).ch_eps - 1.0) * cis(-p * z - p * s); },
      [&](std::size_t n, double p) { return -(A(n).ch_eps - 1.0) * cis(p * z + p * s); }));
  f.emplace("Wbar_2", detail::branch_form(grid, b1,
      [&](std::size_t n, double p) { return A(n).sh * A(n).ch_eps * cis(-p * z + p * A(n).omega * s); },
      [&](std::size_t n, double p) { return -A(n).sh * A(n).ch_eps * cis(p * z - p * A(n).omega * s); }));
  f.emplace("What_2", detail::branch_form(grid, b1,
      [&](std::size_t n, double p) { return -(A(n).ch - 1.0) * A(n).sh_eps * cis(-p * z - p * s * A(n).omega); },
      [&](std::size_t n, double p) { return (A(n).ch - 1.0) * A(n).sh_eps * cis(p * z + p * s * A(n).omega); }));
  f.emplace("Rbar_2", detail::branch_form(grid, b2,
      [&](std::size_t n, double p) { return -A(n).sh * A(n).sh_eps * cis(-p * z + p * s * A(n).omega); },
      [&](std::size_t n, double p) { return A(n).sh * A(n).sh_eps * cis(p * z - p * s * A(n).omega); }));
  f.emplace("Rhat_2", detail::branch_form(grid, b2,
      [&](std::size_t n, double p) { return (A(n).ch - 1.0) * A(n).ch_eps * cis(-p * z - p * s * A(n).omega); },
      [&](std::size_t n, double p) { return -(A(n).ch - 1.0) * A(n).ch_eps * cis(p * z + p * s * A(n).omega); }));
  return f;
}

/// Conjugated vertex operators built from the maps: the Bogoliubov conjugation,
/// renormalized evolution, then the inverse conjugation with angle eps * phi.
inline BosonExponent conjugated_vertex(Branch w, FermionSign sign, const ModelParams& params, double z, double t,
                                       double eps, const ModeGrid& grid) {
  const BosonExponent v = vertex_factor(w, sign, z, 0.0, grid.delta(), grid);
  return conjugate_bogoliubov(conjugate_evolution(conjugate_bogoliubov(v, params, +1), params, t, true), params, -1,
                              eps);
}

struct AppendixResidual {
  double first = 0.0;  ///< conjugated psi^+_1(z): tabulated factors vs maps
  double second = 0.0; ///< conjugated psi^-_2(z)
};

/// Largest coefficient mismatch between the sum of the tabulated factors' linear forms
/// and the linear form produced by the conjugation maps.
inline AppendixResidual appendix_residual(const ModelParams& params, double x, double z, double t, double s,
                                          double eps, const ModeGrid& grid) {
  const FactorMap f = appendix_factors(params, x, z, t, s, eps, grid);
  BosonExponent first = vertex_factor(Branch::one, FermionSign::plus, z, t, grid.delta(), grid);
  for (const char* k : {"A_1+", "A_1-", "A_2+", "A_2-", "Wtilde_1^-1", "Rtilde_1^-1", "Wbar_1^-1", "Rbar_1^-1",
                        "What_1^-1", "Rhat_1^-1"})
    first += f.at(k);
  BosonExponent second = vertex_factor(Branch::two, FermionSign::minus, z, s, grid.delta(), grid);
  for (const char* k : {"Wbar_2", "Rbar_2", "What_2", "Rhat_2", "Wtilde_2", "Rtilde_2", "B_1-", "B_1+", "B_2-",
                        "B_2+"})
    second += f.at(k);
  AppendixResidual r;
  r.first = first.max_abs_difference(conjugated_vertex(Branch::one, FermionSign::plus, params, z, t, eps, grid));
  r.second = second.max_abs_difference(conjugated_vertex(Branch::two, FermionSign::minus, params, z, s, eps, grid));
  return r;
}

/// Exponent of the interacting four-point function
/// < psi^-_1(x) psi^+_1(z, t) psi^-_2(z, t) psi^+_2(x) > divided by the two free
/// two-point functions, obtained mechanically from the operator algebra.
inline complex derive_main1_exponent(const ModelParams& params, double x, double z, double t, const ModeGrid& grid) {
  check_stability(params);
  const double delta = grid.delta();
  const BosonExponent v1 = vertex_factor(Branch::one, FermionSign::minus, x, 0.0, delta, grid);
  const BosonExponent v4 = vertex_factor(Branch::two, FermionSign::plus, x, 0.0, delta, grid);
  const std::vector<BosonExponent> full{
      v1, heisenberg_evolution(vertex_factor(Branch::one, FermionSign::plus, z, 0.0, delta, grid), params, t),
      heisenberg_evolution(vertex_factor(Branch::two, FermionSign::minus, z, 0.0, delta, grid), params, t), v4};
  const std::vector<BosonExponent> free1{v1, vertex_factor(Branch::one, FermionSign::plus, z, t, delta, grid)};
  const std::vector<BosonExponent> free2{vertex_factor(Branch::two, FermionSign::minus, z, t, delta, grid), v4};
  const VacuumRules rules(grid);
  return vacuum_log_expectation(full, rules) - vacuum_log_expectation(free1, rules) -
         vacuum_log_expectation(free2, rules);
}

} // namespace lutt

#endif
