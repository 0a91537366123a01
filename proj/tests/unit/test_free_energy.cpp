#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lyz/errors.hpp"
#include "lyz/free_energy.hpp"

using namespace lyz;

TEST(FreeEnergy, ElectrostaticVsRecursive) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(-kPi, kPi), lr(std::log(0.1), std::log(10.0));
  for (double t : {0.2, 0.5}) {
    const auto zeros = enumerate_zeros(TreeSpec::rooted(10, 2), t);
    for (int i = 0; i < 10; ++i) {
      double r = 1.0;
      while (std::abs(r - 1.0) < 0.05) r = std::exp(lr(rng));
      const auto z = std::polar(r, ang(rng));
      const double fe = free_energy_electrostatic(z, zeros);
      const double fr = free_energy_recursive(z, t, 2, 10);
      EXPECT_LE(std::abs(fe - fr), 1e-3 * (1 + std::abs(fe))) << r;
    }
  }
}

TEST(FreeEnergy, OnAtomThrows) {
  const auto zeros = enumerate_zeros(TreeSpec::rooted(1, 2), 0.5);
  EXPECT_THROW(free_energy_electrostatic(std::polar(1.0, zeros.angles[0]), zeros), DomainError);
}

TEST(Magnetization, Limits) {
  const auto zeros = enumerate_zeros(TreeSpec::rooted(10, 2), 0.5);
  EXPECT_NEAR(std::abs(magnetization({1e-9, 0.0}, zeros, 2) - 2.0), 0.0, 1e-6);
  EXPECT_NEAR(std::abs(magnetization({1e9, 0.0}, zeros, 2) + 2.0), 0.0, 1e-6);
  // Real z inside the gap: conjugate pairs cancel.
  EXPECT_NEAR(magnetization({0.5, 0.0}, zeros, 2).imag(), 0.0, 1e-12);
}

TEST(Singular, RegularOrder) {
  EXPECT_EQ(regular_order(1.0), 0);
  EXPECT_EQ(regular_order(1.9), 0);
  EXPECT_EQ(regular_order(2.0), 0);
  EXPECT_EQ(regular_order(2.409), 1);
  EXPECT_EQ(regular_order(4.5), 2);
}

TEST(Singular, LebesgueClosedForm) {
  const MassFunction leb = [](double z) { return z / kPi; };
  const double d0 = 0.5;
  for (double y : {0.3, 0.05, 0.002}) EXPECT_NEAR(h_singular(leb, y, d0, 0), y / kPi * std::atan(d0 / y), 1e-9);
  std::vector<double> ys;
  for (int j = 4; j <= 10; ++j) ys.push_back(d0 * std::ldexp(1.0, -j));
  const auto fit = singular_exponent(leb, d0, ys, 1.0);
  EXPECT_NEAR(fit.kappa, 1.0, 0.02);
  EXPECT_TRUE(fit.stable);
}

TEST(Singular, PowerLawMass) {
  // Phi = c z^a gives h_sing ~ y^a for 2m < a < 2m + 2.
  const double a = 2.4;
  const MassFunction mass = [a](double z) { return std::pow(z, a); };
  std::vector<double> ys;
  for (int j = 4; j <= 9; ++j) ys.push_back(0.5 * std::ldexp(1.0, -j));
  const auto fit = singular_exponent(mass, 0.5, ys, a);
  EXPECT_EQ(fit.m, 1);
  EXPECT_NEAR(fit.kappa, a, 0.03);
}

TEST(Singular, DecompositionIdentity) {
  const MassFunction mass = [](double z) { return std::pow(z, 2.5) * (1 + z); };
  const double d0 = 0.4, y = 0.03;
  const int m = 1;
  const auto c = regular_coefficients(mass, d0, m);
  const double lhs = h_total(mass, y, d0);
  const double rhs = h_regular(c, y) + (m % 2 == 0 ? -1.0 : 1.0) * h_singular(mass, y, d0, m);
  EXPECT_NEAR(lhs, rhs, 1e-9);
}

TEST(Singular, IntegrationByParts) {
  const auto c = integration_by_parts_check(1.0, 0.3, 2, 12, 0.05, 0.4);
  EXPECT_NEAR(c.atom_sum, c.by_parts, 1e-6 + 10 * c.quadrature_error);
}

TEST(Singular, RejectsOutsideSupport) {
  const double ys[] = {0.1, 0.05, 0.025};
  EXPECT_THROW(singular_exponent(0.0, 0.5, 2, 10, 0.2, ys, 2.0), DomainError);
}
