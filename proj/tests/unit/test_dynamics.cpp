#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "lyz/dynamics.hpp"
#include "lyz/errors.hpp"

using namespace lyz;

TEST(Lift, ReferenceValue) {
  // 50-digit evaluation of 2*1 - 4*atan(0.5 sin 1 / (1 + 0.5 cos 1)) + 0.3.
  EXPECT_NEAR(lift_eval(1.0, ModelParams(2, 0.5, 0.3)), 1.0205083583, 1e-9);
}

TEST(Lift, ZeroTemperatureIsMultiplication) {
  for (double th : {-2.0, 0.1, 1.3}) EXPECT_DOUBLE_EQ(lift_eval(th, ModelParams(3, 0.0, 0.25)), 3 * th + 0.25);
}

TEST(Lift, DerivativeMatchesFiniteDifference) {
  const ModelParams p(3, 0.6, 0.7);
  for (double th = -3.0; th <= 3.0; th += 0.37) {
    const double h = 1e-6;
    const double fd = (lift_eval(th + h, p) - lift_eval(th - h, p)) / (2 * h);
    EXPECT_NEAR(lift_derivative(th, p), fd, 1e-6 * std::abs(fd));
  }
}

TEST(Lift, DerivativeBounds) {
  const ModelParams p(2, 0.5, 0.0);
  EXPECT_NEAR(lift_derivative(0.0, p), 2 * 0.5 / 1.5, 1e-15);
  EXPECT_NEAR(lift_derivative(kPi, p), 2 * 1.5 / 0.5, 1e-12);
}

TEST(Lift, OrbitAccumulatesLogDerivative) {
  const ModelParams p(2, 0.3, 1.1);
  const auto r = lift_orbit(3, p, 0.4);
  double th = 0.4, acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    acc += std::log(lift_derivative(th, p));
    th = lift_eval(th, p);
  }
  EXPECT_DOUBLE_EQ(r.final_value, th);
  EXPECT_NEAR(r.log_derivative_sum, acc, 1e-14);
  EXPECT_THROW(lift_orbit(-1, p, 0.0), ParameterError);
}

TEST(Blaschke, ConjugatesTheLift) {
  const double t = 0.4, phi = 0.9;
  const int k = 2;
  for (double th : {-2.5, -0.3, 0.8, 2.9}) {
    const auto w = std::polar(1.0, th);
    const auto b = blaschke(w, std::polar(1.0, phi), t, k);
    EXPECT_NEAR(std::abs(b), 1.0, 1e-14);
    EXPECT_NEAR(std::remainder(std::arg(b) - lift_eval(th, ModelParams(k, t, phi)), kTwoPi), 0.0, 1e-12);
  }
}

TEST(Validation, RejectsBadParameters) {
  EXPECT_THROW(ModelParams(1, 0.2, 0.0), ParameterError);
  EXPECT_THROW(ModelParams(2, 1.0, 0.0), ParameterError);
  EXPECT_THROW(ModelParams(2, -0.1, 0.0), ParameterError);
  EXPECT_THROW(ModelParams(2, std::nan(""), 0.0), ParameterError);
  EXPECT_THROW(AngularLift(65, 0.1), ParameterError);
}

TEST(Tangency, PhiEReference) {
  EXPECT_NEAR(phi_e(0.5, 2), 0.308, 0.01);
  EXPECT_NEAR(phi_e(0.9, 2), 1.873, 0.01);
  EXPECT_DOUBLE_EQ(phi_e(critical_temperature(2), 2), 0.0);
  EXPECT_DOUBLE_EQ(phi_e(1.0, 2), kPi);
  EXPECT_THROW(phi_e(0.2, 2), DomainError);
}

TEST(Tangency, MultipleFixedPoint) {
  for (double t : {0.4, 0.6, 0.8}) {
    const auto d = tangency(t, 2);
    EXPECT_NEAR(std::abs(d.w_bullet), 1.0, 1e-14);
    EXPECT_LT(d.residual, 1e-12);
    // w_bullet is a fixed point of B at z = e^{i phi_e} up to reflection.
    const auto b = blaschke(d.w_bullet, std::polar(1.0, -d.phi_e), t, 2);
    const auto c = blaschke(d.w_bullet, std::polar(1.0, d.phi_e), t, 2);
    EXPECT_LT(std::min(std::abs(b - d.w_bullet), std::abs(c - d.w_bullet)), 1e-10);
  }
}

TEST(Tangency, MonotoneInT) {
  double prev = 0.0;
  for (double t = 0.34; t < 0.995; t += 0.01) {
    const double v = phi_e(t, 2);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(FixedPoints, DiskPointIsAttracting) {
  const ModelParams p(2, 0.2, 0.0);
  const auto w = disk_fixed_point(p);
  EXPECT_LT(std::abs(w), 1.0);
  EXPECT_NEAR(std::abs(blaschke(w, p.z(), p.t(), p.k()) - w), 0.0, 1e-12);
  EXPECT_LT(std::abs(blaschke_derivative(w, p.z(), p.t(), p.k())), 1.0);
  EXPECT_THROW(disk_fixed_point(ModelParams(2, 0.5, 0.1)), DomainError);
}

TEST(FixedPoints, RootCountAndResiduals) {
  const auto fps = fixed_points(ModelParams(3, 0.3, 1.0));
  EXPECT_EQ(fps.roots.size(), 4u);
  for (const auto& r : fps.roots) EXPECT_LT(r.residual, 1e-12);
  EXPECT_TRUE(fixed_points(ModelParams(2, 0.0, 1.0)).exterior_at_infinity);
}

TEST(Expansion, CertificateBelowCurve) {
  const auto c = expansion_certificate(ModelParams(2, 0.2, 0.0), 12, 256);
  EXPECT_GT(c.lambda, 1.0);
  EXPECT_GT(c.c, 0.0);
  EXPECT_THROW(expansion_certificate(ModelParams(2, 0.5, 0.0), 12, 256), DomainError);
}
