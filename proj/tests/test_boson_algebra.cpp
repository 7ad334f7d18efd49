#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lutt/boson_algebra.hpp"
#include "lutt/finite_volume.hpp"
#include "support/fock_oracle.hpp"

using namespace lutt;

namespace {

const ModeGrid small_grid(60.0, 16, 0.1);

BosonExponent single(const ModeGrid& g, Branch b, Sign s, std::size_t n, complex c) {
  BosonExponent e(g);
  e.coeff(b, s, n) = c;
  return e;
}

complex log_pair(const BosonExponent& a, const BosonExponent& b) {
  const std::vector<BosonExponent> f{a, b};
  return vacuum_log_expectation(f);
}

double rnd(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

complex random_coefficient(std::mt19937_64& rng) {
  // |c| <= 1
  return std::polar(rnd(rng), two_pi * rnd(rng));
}

} // namespace

TEST(VacuumExpectation, CreationOnlyFactorIsOne) {
  const auto e = single(small_grid, Branch::one, Sign::plus, 3, {0.7, -0.2});
  const std::vector<BosonExponent> f{e};
  EXPECT_EQ(vacuum_expectation(f), complex(1.0));
  const auto e2 = single(small_grid, Branch::two, Sign::minus, 5, {0.1, 0.9});
  const std::vector<BosonExponent> f2{e2};
  EXPECT_EQ(vacuum_expectation(f2), complex(1.0));
}

TEST(VacuumExpectation, AnnihilatorThenCreator) {
  const complex a(0.4, 0.3), b(-0.6, 0.2);
  for (std::size_t n : {1u, 4u}) {
    const auto la = log_pair(single(small_grid, Branch::one, Sign::minus, n, a),
                             single(small_grid, Branch::one, Sign::plus, n, b));
    EXPECT_NEAR(std::abs(la - a * b * double(n)), 0.0, 1e-15);
    const auto lb = log_pair(single(small_grid, Branch::two, Sign::plus, n, a),
                             single(small_grid, Branch::two, Sign::minus, n, b));
    EXPECT_NEAR(std::abs(lb - a * b * double(n)), 0.0, 1e-15);
  }
}

TEST(VacuumExpectation, CreatorBeforeAnnihilatorContractsNothing) {
  const complex a(0.4, 0.3), b(-0.6, 0.2);
  EXPECT_EQ(log_pair(single(small_grid, Branch::one, Sign::plus, 2, b),
                     single(small_grid, Branch::one, Sign::minus, 2, a)),
            complex(0.0));
}

TEST(VacuumExpectation, DifferentBranchesDoNotContract) {
  EXPECT_EQ(log_pair(single(small_grid, Branch::one, Sign::minus, 2, 0.5),
                     single(small_grid, Branch::two, Sign::minus, 2, 0.5)),
            complex(0.0));
}

TEST(VacuumExpectation, MatchesFockOracleForSingleSummands) {
  const complex a(0.4, 0.3), b(-0.6, 0.2);
  const ModeGrid g(two_pi, 1, 0.1); // mode n = 1, commutator 1
  const auto algebra = std::exp(log_pair(single(g, Branch::one, Sign::minus, 1, a), single(g, Branch::one, Sign::plus, 1, b)));
  const auto oracle = fock::vacuum_expectation({{a, 0.0}, {0.0, b}}, 1.0);
  EXPECT_NEAR(std::abs(algebra - oracle), 0.0, 1e-10);
}

TEST(VacuumExpectation, FockOracleProperty) {
  std::mt19937_64 rng(7);
  const ModeGrid g(two_pi, 1, 0.1);
  for (int k = 0; k < 50; ++k) {
    BosonExponent f1(g), f2(g);
    const complex d1 = random_coefficient(rng), c1 = random_coefficient(rng);
    const complex d2 = random_coefficient(rng), c2 = random_coefficient(rng);
    f1.coeff(Branch::one, Sign::minus, 1) = d1;
    f1.coeff(Branch::one, Sign::plus, 1) = c1;
    f2.coeff(Branch::one, Sign::minus, 1) = d2;
    f2.coeff(Branch::one, Sign::plus, 1) = c2;
    const std::vector<BosonExponent> fs{f1, f2};
    const complex algebra = vacuum_expectation(fs);
    const complex oracle = fock::vacuum_expectation({{d1, c1}, {d2, c2}}, 1.0);
    EXPECT_NEAR(std::abs(algebra - oracle), 0.0, 1e-10) << "pair " << k;
  }
}

TEST(VacuumExpectation, GridMismatch) {
  const BosonExponent a(small_grid), b(ModeGrid(61.0, 16, 0.1));
  const std::vector<BosonExponent> f{a, b};
  EXPECT_THROW(vacuum_expectation(f), GridMismatch);
  BosonExponent c(small_grid);
  EXPECT_THROW(c += b, GridMismatch);
}

TEST(VacuumExpectation, RefinementWithZeroModesIsInvariant) {
  std::mt19937_64 rng(11);
  const ModeGrid coarse(60.0, 16, 0.1), fine(60.0, 40, 0.1);
  std::vector<BosonExponent> fc, ff;
  for (int k = 0; k < 3; ++k) {
    BosonExponent ec(coarse, {0.1 * k, 0.0}), ef(fine, {0.1 * k, 0.0});
    for (std::size_t n = 1; n <= 16; ++n)
      for (Branch b : {Branch::one, Branch::two})
        for (Sign s : {Sign::plus, Sign::minus}) {
          const complex c = random_coefficient(rng) / double(n);
          ec.coeff(b, s, n) = c;
          ef.coeff(b, s, n) = c;
        }
    fc.push_back(ec);
    ff.push_back(ef);
  }
  EXPECT_NEAR(std::abs(vacuum_log_expectation(fc) - vacuum_log_expectation(ff)), 0.0, 1e-15);
}

TEST(VacuumExpectation, PureCreationOrAnnihilationGivesPrefactorsOnly) {
  std::mt19937_64 rng(3);
  std::vector<BosonExponent> cre, ann;
  for (int k = 0; k < 4; ++k) {
    BosonExponent c(small_grid, {0.2, 0.1 * k}), a(small_grid, {-0.1, 0.3});
    for (std::size_t n = 1; n <= 16; ++n) {
      c.coeff(Branch::one, Sign::plus, n) = random_coefficient(rng);
      c.coeff(Branch::two, Sign::minus, n) = random_coefficient(rng);
      a.coeff(Branch::one, Sign::minus, n) = random_coefficient(rng);
      a.coeff(Branch::two, Sign::plus, n) = random_coefficient(rng);
    }
    EXPECT_FALSE(c.has_annihilation_part());
    EXPECT_FALSE(a.has_creation_part());
    cre.push_back(c);
    ann.push_back(a);
  }
  EXPECT_NEAR(std::abs(vacuum_log_expectation(cre) - complex(0.8, 0.6)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(vacuum_log_expectation(ann) - complex(-0.4, 1.2)), 0.0, 1e-15);
}

TEST(VertexFactor, CoefficientShape) {
  const double x = 0.7, delta = 0.1;
  const auto v = vertex_factor(Branch::one, FermionSign::minus, x, 0.0, delta, small_grid);
  for (std::size_t n : {1u, 5u, 16u}) {
    const double p = small_grid.momentum(n);
    const double mag = std::exp(-delta * p) * two_pi / (small_grid.L() * p);
    EXPECT_NEAR(std::abs(v.coeff(Branch::one, Sign::plus, n) - mag * std::polar(1.0, -p * x)), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(v.coeff(Branch::one, Sign::minus, n) + mag * std::polar(1.0, p * x)), 0.0, 1e-16);
    EXPECT_EQ(v.coeff(Branch::two, Sign::plus, n), complex(0.0));
  }
  const auto w = vertex_factor(Branch::two, FermionSign::plus, x, 0.0, delta, small_grid);
  const double p = small_grid.momentum(2);
  // psi^+_2 = -eps_2 (...) = +(...)
  EXPECT_NEAR(std::abs(w.coeff(Branch::two, Sign::plus, 2) - std::exp(-delta * p) / 2.0 * std::polar(1.0, -p * x)), 0.0,
              1e-16);
}

TEST(VertexFactor, LargeRegulatorLeavesNormalization) {
  const double delta = 500.0;
  const auto v = vertex_factor(Branch::one, FermionSign::plus, 1.0, 0.0, delta, small_grid);
  EXPECT_LT(v.max_abs_coefficient(), 1e-20);
  EXPECT_NEAR(v.log_prefactor().real(), 0.5 * std::log(normalization_sq(small_grid.L(), delta)), 1e-15);
  EXPECT_THROW(vertex_factor(Branch::one, FermionSign::plus, 1.0, 0.0, 0.0, small_grid), std::invalid_argument);
}

TEST(VertexFactor, TwoPointFunctionIsFiniteVolumePropagator) {
  const ModeGrid g(50.0, 2000, 0.1);
  for (double a : {0.8, -2.5, 4.0}) {
    const std::vector<BosonExponent> f{vertex_factor(Branch::one, FermionSign::minus, a, 0.0, g.delta(), g),
                                       vertex_factor(Branch::one, FermionSign::plus, 0.0, 0.0, g.delta(), g)};
    const complex algebra = vacuum_expectation(f);
    EXPECT_NEAR(std::abs(algebra - free_propagator_modes(a, 0.0, g, Branch::one)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(algebra - free_propagator_finite(a, 0.0, g, Branch::one)), 0.0, 1e-12);
  }
}

TEST(Conjugation, BogoliubovFreeIsIdentity) {
  const auto v = vertex_factor(Branch::one, FermionSign::minus, 0.3, 0.0, 0.1, small_grid);
  EXPECT_EQ(conjugate_bogoliubov(v, ModelParams(0.0, pi), +1).max_abs_difference(v), 0.0);
}

TEST(Conjugation, BogoliubovRoundTrip) {
  const ModelParams P(1.3, pi);
  auto v = vertex_factor(Branch::one, FermionSign::minus, 0.3, 0.0, 0.1, small_grid);
  v += vertex_factor(Branch::two, FermionSign::plus, -1.1, 0.0, 0.1, small_grid);
  const auto back = conjugate_bogoliubov(conjugate_bogoliubov(v, P, +1), P, -1);
  EXPECT_LT(back.max_abs_difference(v), 1e-14);
}

TEST(Conjugation, BogoliubovSingleCoefficient) {
  const ModelParams P(1.0, pi);
  const auto e = single(small_grid, Branch::one, Sign::plus, 3, 1.0);
  const auto r = conjugate_bogoliubov(e, P, +1);
  const double phi = dispersion(P, small_grid.momentum(3)).phi;
  EXPECT_NEAR(std::abs(r.coeff(Branch::one, Sign::plus, 3) - std::cosh(phi)), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(r.coeff(Branch::two, Sign::plus, 3) - std::sinh(phi)), 0.0, 1e-16);
  EXPECT_EQ(r.coeff(Branch::one, Sign::minus, 3), complex(0.0));
  // outside the support the map is the identity
  const auto far = single(small_grid, Branch::one, Sign::plus, 16, 1.0);
  EXPECT_EQ(conjugate_bogoliubov(far, P, +1).max_abs_difference(far), 0.0);
}

TEST(Conjugation, EvolutionIdentities) {
  const ModelParams P(1.0, pi);
  auto v = vertex_factor(Branch::one, FermionSign::minus, 0.3, 0.0, 0.1, small_grid);
  v += vertex_factor(Branch::two, FermionSign::minus, 0.9, 0.0, 0.1, small_grid);
  EXPECT_EQ(conjugate_evolution(v, P, 0.0, true).max_abs_difference(v), 0.0);
  EXPECT_EQ(conjugate_evolution(v, ModelParams(0.0, pi), 1.7, true).max_abs_difference(conjugate_evolution(v, P, 1.7, false)),
            0.0);
  const auto two_steps = conjugate_evolution(conjugate_evolution(v, P, 0.8, true), P, 1.3, true);
  EXPECT_LT(two_steps.max_abs_difference(conjugate_evolution(v, P, 2.1, true)), 1e-14);
}

TEST(Conjugation, EvolutionPhaseConvention) {
  const ModelParams P(1.0, pi);
  const double t = 0.9;
  const auto e = single(small_grid, Branch::two, Sign::plus, 2, 1.0);
  const auto r = conjugate_evolution(e, P, t, true);
  const double p = small_grid.momentum(2);
  EXPECT_NEAR(std::abs(r.coeff(Branch::two, Sign::plus, 2) - std::polar(1.0, -omega0(P) * p * t)), 0.0, 1e-15);
}

TEST(Conjugation, FreeVertexEvolvedMatchesVertexAtTime) {
  const auto v0 = vertex_factor(Branch::one, FermionSign::plus, 0.4, 0.0, 0.1, small_grid);
  const auto vt = vertex_factor(Branch::one, FermionSign::plus, 0.4, 1.5, 0.1, small_grid);
  EXPECT_LT(heisenberg_evolution(v0, ModelParams(0.0, pi), 1.5).max_abs_difference(vt), 1e-15);
}

TEST(Appendix, ScalarFactorsAreInverse) {
  const auto f = appendix_factors(ModelParams(1.0, pi), 0.5, -0.3, 1.2, 1.2, 1.0, small_grid);
  EXPECT_EQ(f.at("z_a").log_prefactor() + f.at("z_b").log_prefactor(), complex(0.0));
  EXPECT_NE(f.at("z_a").log_prefactor(), complex(0.0));
  EXPECT_EQ(f.at("z_a").max_abs_coefficient(), 0.0);
  EXPECT_EQ(f.size(), 22u);
}

TEST(Appendix, FreeLimitFactorsAreIdentity) {
  const auto f = appendix_factors(ModelParams(0.0, pi), 0.5, -0.3, 1.2, 1.2, 1.0, small_grid);
  for (const auto& [name, e] : f) {
    EXPECT_EQ(e.max_abs_coefficient(), 0.0) << name;
    EXPECT_EQ(e.log_prefactor(), complex(0.0)) << name;
  }
  const auto r = appendix_residual(ModelParams(0.0, pi), 0.5, -0.3, 1.2, 1.2, 1.0, small_grid);
  EXPECT_LT(r.first, 1e-15);
  EXPECT_LT(r.second, 1e-15);
}

TEST(Appendix, TabulatedFactorsDoNotComposeAtFiniteCoupling) {
  // diagnostic: the tables miss terms of the conjugated vertices
  const auto r = appendix_residual(ModelParams(1.0, pi), 0.5, -0.3, 1.2, 1.2, 1.0, small_grid);
  EXPECT_GT(r.first, 1e-3);
  EXPECT_GT(r.second, 1e-3);
}

TEST(DeriveMain1, FreeLimitVanishes) {
  for (double t : {0.0, 0.7, 2.0})
    EXPECT_LT(std::abs(derive_main1_exponent(ModelParams(0.0, pi), 1.3, -0.4, t, small_grid)), 1e-14);
}

TEST(DeriveMain1, ZeroTimeVanishes) {
  EXPECT_LT(std::abs(derive_main1_exponent(ModelParams(1.0, pi), 3.0, 0.0, 0.0, small_grid)), 1e-14);
}

TEST(DeriveMain1, MatchesHandDerivedSum) {
  const ModelParams P(1.0, pi);
  const auto hand = exponent_main1(P, 3.0, 1.0, small_grid).total();
  EXPECT_LT(std::abs(derive_main1_exponent(P, 3.0, 0.0, 1.0, small_grid) - hand), 1e-12);
}

TEST(DeriveMain1, TranslationInvariant) {
  const ModelParams P(1.0, pi);
  const auto a = derive_main1_exponent(P, 3.0, 0.0, 1.0, small_grid);
  const auto b = derive_main1_exponent(P, 5.5, 2.5, 1.0, small_grid);
  EXPECT_LT(std::abs(a - b), 1e-12);
}

TEST(DeriveMain1, Stability) {
  EXPECT_THROW(derive_main1_exponent(ModelParams(1.0, pi, Convention::theorem, 0.0, 1.0).with_lambda(2.0), 0, 0, 1,
                                     small_grid),
               StabilityError);
}
