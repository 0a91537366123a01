#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "lyz/dynamics.hpp"
#include "lyz/errors.hpp"
#include "lyz/spectra.hpp"

using namespace lyz;

TEST(Lyapunov, ClosedFormReference) {
  const ModelParams p(2, 0.2, 0.0);
  EXPECT_NEAR(lyapunov_acim_closed(p), 0.62381071636487, 1e-12);  // w = 7 - 4 sqrt 3, 30-digit check
  EXPECT_NEAR(std::log(2.0) / lyapunov_acim_closed(p), 1.111, 1e-3);
  EXPECT_NEAR(lyapunov_acim_closed(ModelParams(2, 1e-4, 0.4)), std::log(2.0), 1e-3);
  EXPECT_DOUBLE_EQ(lyapunov_acim_closed(ModelParams(3, 0.0, 1.0)), std::log(3.0));
}

TEST(Lyapunov, BirkhoffAgreesWithClosedForm) {
  BirkhoffOptions o;
  o.length = 100000;
  o.seeds = 8;
  for (double phi : {0.0, 1.5}) {
    const ModelParams p(2, 0.3, phi);
    const auto b = lyapunov_acim_birkhoff(p, o);
    EXPECT_TRUE(b.converged);
    EXPECT_EQ(b.per_seed.size(), 8u);
    EXPECT_LE(std::abs(b.value - lyapunov_acim_closed(p)), 2e-3 + 3 * b.std_error);
  }
}

TEST(Lyapunov, BirkhoffDeterministic) {
  BirkhoffOptions o;
  o.length = 20000;
  o.seeds = 4;
  const ModelParams p(2, 0.25, 0.5);
  EXPECT_EQ(lyapunov_acim_birkhoff(p, o).per_seed, lyapunov_acim_birkhoff(p, o).per_seed);
}

TEST(Lyapunov, OrderingAroundLogK) {
  const ModelParams p(2, 0.3, 0.8);
  const auto mme = lyapunov_mme(p, 12);
  EXPECT_LT(lyapunov_acim_closed(p), std::log(2.0));
  EXPECT_GT(mme.value - std::log(2.0), 5 * mme.std_error);
}

TEST(Lyapunov, RejectsAboveCurve) {
  EXPECT_THROW(lyapunov_acim_closed(ModelParams(2, 0.6, 0.1)), DomainError);
  EXPECT_THROW(lyapunov_mme(ModelParams(2, 0.6, 0.1), 8), DomainError);
}

TEST(Preimages, MapBack) {
  const ModelParams p(3, 0.4, 0.6);
  const double theta = 1.2;
  const auto xs = lift_preimages(p, theta);
  ASSERT_EQ(xs.size(), 3u);
  for (double x : xs) EXPECT_NEAR(std::remainder(lift_eval(x, p) - theta, kTwoPi), 0.0, 1e-11);
}

TEST(Dimension, LebesgueNearOne) {
  const auto fit = pointwise_dimension(0.7, 1e-6, 2, 14);
  EXPECT_NEAR(fit.value, 1.0, 0.02);
  EXPECT_GT(fit.r_squared, 0.999);
}

TEST(Dimension, SeparatesTargets) {
  const auto fit = pointwise_dimension(0.0, 0.2, 2, 16);
  EXPECT_GT(fit.value, 1.7);
  EXPECT_EQ(fit.deltas.size(), fit.masses.size());
  EXPECT_THROW(pointwise_dimension(0.0, 0.2, 2, 3), ComputationError);
}

TEST(Kappa, CurveRows) {
  const double grid[] = {0.0, 0.1, 2.0};
  const auto rows = kappa_curve(0.5, 2, grid);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_FALSE(rows[0].in_support);
  EXPECT_FALSE(rows[1].in_support);
  EXPECT_TRUE(rows[2].in_support);
  EXPECT_NEAR(rows[2].kappa, std::log(2.0) / rows[2].chi, 1e-15);
  std::ostringstream os;
  write_kappa_csv(os, 0.5, 2, rows);
  EXPECT_NE(os.str().find("phi,status,w_disk_re,w_disk_im,chi,kappa"), std::string::npos);
  EXPECT_NE(os.str().find("no-support"), std::string::npos);
}

TEST(Report, JsonSchemaTag) {
  SpectralOptions o;
  o.birkhoff.length = 5000;
  o.birkhoff.seeds = 4;
  o.mme_depth = 8;
  o.dimension_level = 12;
  const auto r = spectral_report(ModelParams(2, 0.2, 1.0), o);
  EXPECT_NEAR(r.kappa, std::log(2.0) / r.chi_acim_closed, 1e-15);
  EXPECT_LT(r.hd_mme, 1.0);
  std::ostringstream os;
  write_spectral_json(os, r);
  EXPECT_NE(os.str().find("lyz.spectra.v1"), std::string::npos);
}
