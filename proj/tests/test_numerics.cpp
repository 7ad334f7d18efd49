#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lutt/numerics.hpp"
#include "lutt/oracles.hpp"

using namespace lutt;

// Reference values computed independently with 30-digit adaptive quadrature.
struct CinRef {
  double u;
  double value;
};
const CinRef cin_refs[] = {
    {1e-3, 2.4999998958333357522e-7}, {1.0, 0.23981174200056472594}, {2.0, 0.84738201668661317433},
    {8.0, 2.5342233240493592316},     {20.0, 3.5285281176101705375}, {100.0, 5.1875346760322347208},
};

TEST(Cin, FrozenValues) {
  for (const auto& r : cin_refs) EXPECT_NEAR(cin(r.u), r.value, 4e-15 * std::max(1.0, r.value)) << "u = " << r.u;
}

TEST(Cin, ZeroAndSmallArgument) {
  EXPECT_EQ(cin(0.0), 0.0);
  const double u = 1e-3;
  EXPECT_LT(std::abs(cin(u) - u * u / 4.0) / (u * u / 4.0), 1e-6);
  EXPECT_THROW(cin(-1.0), std::invalid_argument);
}

TEST(Cin, QuadratureOracleAtOne) {
  EXPECT_NEAR(cin_by_quadrature(1.0), 0.23981174200056472594, 1e-12);
  EXPECT_NEAR(cin(1.0), cin_by_quadrature(1.0), 1e-12);
}

TEST(Cin, CrossoverIsContinuous) {
  const double below = detail::cin_series(8.0);
  const double above = euler_gamma + std::log(8.0) - detail::cisi_continued_fraction(8.0).first;
  EXPECT_NEAR(below, above, 1e-13);
}

TEST(Cin, MonotoneOnZeroToPi) {
  double prev = 0.0;
  for (double u = 0.0; u <= pi; u += pi / 500.0) {
    const double v = cin(u);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Cin, LogarithmicGrowthBounded) {
  for (double u : logspace(10.0, 1e4, 60)) EXPECT_LT(std::abs(cin(u) - std::log(u) - euler_gamma), 1.0);
}

TEST(Cin, TailIdentity) {
  // int_u^inf cos(y)/y dy = -Ci(u) ... = -C - ln u + Cin(u)
  for (double u : {0.5, 3.0, 12.0}) EXPECT_NEAR(-cosine_integral(u), -euler_gamma - std::log(u) + cin(u), 1e-14);
}

TEST(Integrate, Textbook) {
  EXPECT_NEAR(integrate([](double y) { return std::sin(y); }, 0.0, pi), 2.0, 1e-12);
  EXPECT_EQ(integrate([](double) { return 1.0; }, 0.0, 0.0), 0.0);
  EXPECT_THROW(integrate([](double y) { return y; }, 1.0, 0.0), std::invalid_argument);
}

TEST(Integrate, AgreesWithCinDefinition) {
  for (double w : {0.3, 2.0, 9.0, 40.0}) {
    QuadratureSpec spec;
    spec.oscillation_period = two_pi;
    const double v = integrate([](double y) { return (std::cos(y) - 1.0) / y; }, 0.0, w, spec);
    EXPECT_NEAR(v, -cin(w), 1e-11) << "w = " << w;
  }
}

TEST(Integrate, HalvingInitialPanelsIsInvariant) {
  auto f = [](double y) { return std::exp(-0.3 * y) * std::cos(5.0 * y) / (1.0 + y * y); };
  QuadratureSpec one, two;
  two.initial_panels = 2;
  const double a = integrate(f, 0.0, 10.0, one);
  const double b = integrate(f, 0.0, 10.0, two);
  EXPECT_NEAR(a, b, 10.0 * one.abs_tol);
}

TEST(Integrate, OscillationSplitting) {
  QuadratureSpec spec;
  spec.oscillation_period = two_pi / 50.0;
  const double v = integrate([](double y) { return std::cos(50.0 * y); }, 0.0, 3.0, spec);
  EXPECT_NEAR(v, std::sin(150.0) / 50.0, 1e-12);
}

TEST(Integrate, ToleranceNotMetIsReported) {
  QuadratureSpec spec;
  spec.max_subdivisions = 3;
  EXPECT_THROW(integrate([](double y) { return 1.0 / std::sqrt(y); }, 0.0, 1.0, spec), ToleranceNotMet);
}

TEST(Integrate, SpecValidation) {
  QuadratureSpec bad;
  bad.abs_tol = 0.0;
  EXPECT_THROW(integrate([](double y) { return y; }, 0.0, 1.0, bad), std::invalid_argument);
  QuadratureSpec bad2;
  bad2.max_subdivisions = 0;
  EXPECT_THROW(bad2.validate(), std::invalid_argument);
}

TEST(FitPowerLaw, ExactPowerLaw) {
  std::vector<PowerLawSample> s;
  for (double t : logspace(1.0, 100.0, 20)) s.push_back({t, std::pow(t, -0.25)});
  const auto r = fit_power_law(s, {1.0, 100.0});
  EXPECT_NEAR(r.exponent, 0.25, 1e-12);
  EXPECT_NEAR(r.amplitude, 1.0, 1e-12);
  EXPECT_LE(r.residual_rms, 1e-12);
  EXPECT_EQ(r.samples_used, 20u);
}

TEST(FitPowerLaw, ConstantSamples) {
  std::vector<PowerLawSample> s;
  for (double t : logspace(1.0, 100.0, 12)) s.push_back({t, 3.0});
  EXPECT_NEAR(fit_power_law(s, {1.0, 100.0}).exponent, 0.0, 1e-14);
}

TEST(FitPowerLaw, ScaleInvariant) {
  std::vector<PowerLawSample> s, scaled;
  for (double t : logspace(2.0, 50.0, 16)) {
    const double v = std::pow(t, -0.7) * (1.0 + 0.1 * std::sin(t));
    s.push_back({t, v});
    scaled.push_back({t, 17.5 * v});
  }
  const auto a = fit_power_law(s, {2.0, 50.0});
  const auto b = fit_power_law(scaled, {2.0, 50.0});
  EXPECT_NEAR(a.exponent, b.exponent, 1e-12);
  EXPECT_NEAR(b.amplitude / a.amplitude, 17.5, 1e-12);
}

TEST(FitPowerLaw, Errors) {
  std::vector<PowerLawSample> few;
  for (double t : {1.0, 2.0, 3.0}) few.push_back({t, t});
  EXPECT_THROW(fit_power_law(few, {0.5, 10.0}), InsufficientSamples);
  std::vector<PowerLawSample> bad;
  for (int i = 1; i <= 10; ++i) bad.push_back({double(i), i == 5 ? 0.0 : 1.0});
  EXPECT_THROW(fit_power_law(bad, {0.5, 20.0}), NonPositiveValue);
  // samples outside the window are ignored, including non-positive ones
  bad.push_back({100.0, -1.0});
  bad[4].value = 1.0;
  EXPECT_NO_THROW(fit_power_law(bad, {0.5, 20.0}));
}

TEST(Extrapolation, PolynomialIsExact) {
  const std::vector<double> h{0.04, 0.01, 0.0025};
  std::vector<double> f;
  for (double x : h) f.push_back(2.0 - 3.0 * x + 5.0 * x * x);
  EXPECT_NEAR(extrapolate_to_zero(h, f), 2.0, 1e-13);
}

TEST(CompensatedSum, RecoversCancelledBits) {
  CompensatedSum s;
  s += 1.0;
  for (int i = 0; i < 1000; ++i) s += 1e-16;
  s += -1.0;
  EXPECT_NEAR(s.value(), 1e-13, 1e-12 * 1e-13);
  double naive = 1.0;
  for (int i = 0; i < 1000; ++i) naive += 1e-16;
  EXPECT_GT(std::abs(naive - 1.0 - 1e-13), 1e-15);
}

TEST(Grids, LinspaceAndLogspace) {
  const auto l = linspace(-1.0, 1.0, 5);
  EXPECT_EQ(l.front(), -1.0);
  EXPECT_EQ(l[2], 0.0);
  EXPECT_EQ(l.back(), 1.0);
  const auto g = logspace(10.0, 1000.0, 3);
  EXPECT_EQ(g.front(), 10.0);
  EXPECT_NEAR(g[1], 100.0, 1e-12);
  EXPECT_EQ(g.back(), 1000.0);
  EXPECT_THROW(linspace(0.0, 1.0, 1), std::invalid_argument);
}
