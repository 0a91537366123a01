#pragma once

// Blaschke renormalization map B_{z,t,k}(w) = z ((w + t) / (1 + w t))^k,
// its angular lift to the real line, fixed points, the tangency (phi_e)
// curve and expansion checks.

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "lyz/params.hpp"

namespace lyz {

/// t_c = (k - 1) / (k + 1).
double critical_temperature(int k);

/// Angular lift theta -> k theta - 2k atan(t sin theta / (1 + t cos theta)) + phi.
/// The field angle is a call argument so the same object serves the
/// diagonal iteration used for zero counting, where phi ranges over R.
class AngularLift {
 public:
  AngularLift(int k, double t);

  int k() const noexcept { return k_; }
  double t() const noexcept { return t_; }

  double operator()(double theta, double phi) const {
    return k_ * theta - 2.0 * k_ * std::atan2(t_ * std::sin(theta), 1.0 + t_ * std::cos(theta)) + phi;
  }

  /// d/dtheta of the lift; independent of phi, bounded in
  /// [k(1-t)/(1+t), k(1+t)/(1-t)].
  double derivative(double theta) const {
    return k_ * one_minus_t2_ / (1.0 + 2.0 * t_ * std::cos(theta) + t_ * t_);
  }

 private:
  int k_;
  double t_;
  double one_minus_t2_;
};

double lift_eval(double theta, const ModelParams& p);
double lift_derivative(double theta, const ModelParams& p);

struct OrbitResult {
  double final_value = 0.0;
  /// Sum of log lift_derivative over the n points theta_0 .. theta_{n-1}.
  double log_derivative_sum = 0.0;
};

/// n-fold composition of the lift at fixed (phi, t, k) starting from theta0.
OrbitResult lift_orbit(int n, const ModelParams& p, double theta0);

/// B_{z,t,k}(w) and dB/dw in the complex plane.
std::complex<double> blaschke(std::complex<double> w, std::complex<double> z, double t, int k);
std::complex<double> blaschke_derivative(std::complex<double> w, std::complex<double> z, double t,
                                         int k);

enum class FixedPointKind { disk, circle, exterior };

const char* to_string(FixedPointKind kind);

struct FixedPoint {
  std::complex<double> value;
  FixedPointKind kind = FixedPointKind::circle;
  std::complex<double> multiplier;
  /// |P(w)| / (1 + |w|)^(k+1) for P(w) = z (w + t)^k - w (1 + w t)^k.
  double residual = 0.0;
};

struct FixedPointSet {
  std::vector<FixedPoint> roots;
  /// At t = 0 the fixed-point polynomial drops to degree k; the exterior
  /// fixed point sits at infinity and is not listed in roots.
  bool exterior_at_infinity = false;

  std::optional<FixedPoint> disk_point() const;
};

/// Band used to classify roots as lying on the unit circle.
inline constexpr double kCircleBand = 1e-8;

/// All roots of z (w + t)^k - w (1 + w t)^k, via companion-matrix
/// eigenvalues polished by Newton's method.
FixedPointSet fixed_points(const ModelParams& p);

/// The unique attracting fixed point in the open disk. Throws DomainError
/// when (phi, t) is not strictly below the phi_e curve.
std::complex<double> disk_fixed_point(const ModelParams& p);

struct TangencyData {
  std::complex<double> w_bullet;
  double theta_bullet = 0.0;
  double phi_e = 0.0;
  /// |k w (1 - t^2) / ((w + t)(1 + w t)) - 1|
  double residual = 0.0;
};

/// Multiple fixed point on the circle for t_c < t < 1. w_bullet is the root
/// of t w^2 + (1 + t^2 - k(1 - t^2)) w + t = 0 in the upper half plane.
TangencyData tangency(double t, int k);

/// Half-width of the zero-free arc around z = 1. Defined on [t_c, 1]; throws
/// DomainError for t < t_c, where the support is the whole circle.
double phi_e(double t, int k);

/// True when B_{phi,t,k} is expanding on the circle: t < t_c, or t in
/// [t_c, 1) with |phi| > phi_e(t).
bool below_phi_e_curve(double phi, double t, int k);

struct ExpansionCertificate {
  double c = 0.0;
  double lambda = 0.0;
  int n_probe = 0;
  int grid_size = 0;
};

/// Sampled lower bound c * lambda^m on the derivative of the m-th iterate,
/// 1 <= m <= n_probe, over grid_size equally spaced angles. lambda is the
/// growth rate over the second half of the probe window; c is the largest
/// prefactor consistent with every sample. Throws DomainError above the
/// phi_e curve and ComputationError if lambda <= 1 + 1e-3.
ExpansionCertificate expansion_certificate(const ModelParams& p, int n_probe, int grid_size);

}  // namespace lyz
