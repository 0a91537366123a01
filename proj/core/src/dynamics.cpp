#include "lyz/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lyz/errors.hpp"

namespace lyz {

namespace {

using cplx = std::complex<double>;

double binomial(int n, int r) {
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

// Coefficients (ascending powers) of z (w + t)^k - w (1 + w t)^k.
std::vector<cplx> fixed_point_polynomial(cplx z, double t, int k) {
  std::vector<cplx> c(static_cast<std::size_t>(k) + 2, cplx{0.0, 0.0});
  for (int j = 0; j <= k; ++j) {
    const double b = binomial(k, j);
    c[j] += z * b * std::pow(t, k - j);
    c[j + 1] -= b * std::pow(t, j);
  }
  while (c.size() > 1 && c.back() == cplx{0.0, 0.0}) c.pop_back();
  return c;
}

struct HornerValue {
  cplx value;
  cplx slope;
};

HornerValue horner(const std::vector<cplx>& c, cplx w) {
  cplx p = c.back();
  cplx dp{0.0, 0.0};
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    dp = dp * w + p;
    p = p * w + c[i];
  }
  return {p, dp};
}

FixedPointKind classify(cplx w) {
  const double r = std::abs(w);
  if (r < 1.0 - kCircleBand) return FixedPointKind::disk;
  if (r > 1.0 + kCircleBand) return FixedPointKind::exterior;
  return FixedPointKind::circle;
}

}  // namespace

double critical_temperature(int k) {
  validate_branching(k);
  return static_cast<double>(k - 1) / static_cast<double>(k + 1);
}

AngularLift::AngularLift(int k, double t) : k_(k), t_(t), one_minus_t2_(1.0 - t * t) {
  validate_branching(k);
  validate_temperature(t);
}

double lift_eval(double theta, const ModelParams& p) {
  return AngularLift(p.k(), p.t())(theta, p.phi());
}

double lift_derivative(double theta, const ModelParams& p) {
  return AngularLift(p.k(), p.t()).derivative(theta);
}

OrbitResult lift_orbit(int n, const ModelParams& p, double theta0) {
  if (n < 0) throw ParameterError("iterate count must be non-negative");
  const AngularLift lift(p.k(), p.t());
  OrbitResult out{theta0, 0.0};
  for (int i = 0; i < n; ++i) {
    out.log_derivative_sum += std::log(lift.derivative(out.final_value));
    out.final_value = lift(out.final_value, p.phi());
  }
  return out;
}

cplx blaschke(cplx w, cplx z, double t, int k) {
  const cplx m = (w + t) / (1.0 + w * t);
  cplx r = z;
  for (int i = 0; i < k; ++i) r *= m;
  return r;
}

cplx blaschke_derivative(cplx w, cplx z, double t, int k) {
  const cplx num = w + t;
  const cplx den = 1.0 + w * t;
  cplx r = z * static_cast<double>(k) * (1.0 - t * t);
  for (int i = 0; i < k - 1; ++i) r *= num;
  for (int i = 0; i < k + 1; ++i) r /= den;
  return r;
}

const char* to_string(FixedPointKind kind) {
  switch (kind) {
    case FixedPointKind::disk:
      return "disk";
    case FixedPointKind::circle:
      return "circle";
    case FixedPointKind::exterior:
      return "exterior";
  }
  return "unknown";
}

std::optional<FixedPoint> FixedPointSet::disk_point() const {
  for (const auto& r : roots)
    if (r.kind == FixedPointKind::disk) return r;
  return std::nullopt;
}

FixedPointSet fixed_points(const ModelParams& p) {
  const int k = p.k();
  const double t = p.t();
  const cplx z = p.z();
  const auto coeffs = fixed_point_polynomial(z, t, k);
  const int degree = static_cast<int>(coeffs.size()) - 1;

  FixedPointSet out;
  out.exterior_at_infinity = degree == k;

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs[i] / coeffs[degree];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw ComputationError("fixed_points: companion eigenvalue solver did not converge");

  const double scale_exp = k + 1;
  for (int i = 0; i < degree; ++i) {
    cplx w = solver.eigenvalues()[i];
    HornerValue hv = horner(coeffs, w);
    for (int it = 0; it < 8 && hv.slope != cplx{0.0, 0.0}; ++it) {
      const cplx candidate = w - hv.value / hv.slope;
      const HornerValue next = horner(coeffs, candidate);
      if (!(std::abs(next.value) < std::abs(hv.value))) break;
      w = candidate;
      hv = next;
    }
    FixedPoint fp;
    fp.value = w;
    fp.kind = classify(w);
    fp.multiplier = blaschke_derivative(w, z, t, k);
    fp.residual = std::abs(hv.value) / std::pow(1.0 + std::abs(w), scale_exp);
    out.roots.push_back(fp);
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const FixedPoint& a, const FixedPoint& b) {
    if (std::abs(a.value) != std::abs(b.value)) return std::abs(a.value) < std::abs(b.value);
    return std::arg(a.value) < std::arg(b.value);
  });
  return out;
}

cplx disk_fixed_point(const ModelParams& p) {
  if (!below_phi_e_curve(p.phi(), p.t(), p.k()))
    throw DomainError("no attracting disk fixed point: (phi, t) is on or above the phi_e curve");
  const auto fps = fixed_points(p);
  const auto disk = fps.disk_point();
  if (!disk) throw ComputationError("disk fixed point not found below the phi_e curve");
  return disk->value;
}

TangencyData tangency(double t, int k) {
  const double tc = critical_temperature(k);
  if (!(t > tc && t < 1.0))
    throw ParameterError("tangency requires t_c < t < 1 (t_c = " + std::to_string(tc) +
                         "), got t = " + std::to_string(t));
  // t w^2 + b w + t = 0 with b = 1 + t^2 - k (1 - t^2); roots have product 1.
  const double b = 1.0 + t * t - k * (1.0 - t * t);
  const double disc = b * b - 4.0 * t * t;
  if (!(disc < 0.0))
    throw ComputationError("tangency: non-negative discriminant " + std::to_string(disc) +
                           " inside (t_c, 1)");
  TangencyData out;
  out.w_bullet = cplx{-b / (2.0 * t), std::sqrt(-disc) / (2.0 * t)};
  out.theta_bullet = std::arg(out.w_bullet);
  const AngularLift lift(k, t);
  const double raw = out.theta_bullet - lift(out.theta_bullet, 0.0);
  out.phi_e = std::abs(wrap_angle(raw));
  const cplx w = out.w_bullet;
  out.residual = std::abs(static_cast<double>(k) * w * (1.0 - t * t) / ((w + t) * (1.0 + w * t)) - 1.0);
  return out;
}

double phi_e(double t, int k) {
  const double tc = critical_temperature(k);
  if (!std::isfinite(t) || t > 1.0) throw ParameterError("phi_e requires t <= 1");
  if (t < tc) throw DomainError("t < t_c: the support is the whole circle, there is no gap");
  if (t == tc) return 0.0;
  if (t == 1.0) return kPi;
  return tangency(t, k).phi_e;
}

bool below_phi_e_curve(double phi, double t, int k) {
  validate_branching(k);
  if (t < critical_temperature(k)) return t >= 0.0;
  if (t >= 1.0) return false;
  return std::abs(wrap_angle(phi)) > phi_e(t, k);
}

ExpansionCertificate expansion_certificate(const ModelParams& p, int n_probe, int grid_size) {
  if (n_probe < 2 || grid_size < 1)
    throw ParameterError("expansion_certificate needs n_probe >= 2 and grid_size >= 1");
  if (!below_phi_e_curve(p.phi(), p.t(), p.k()))
    throw DomainError(
        "expansion is only guaranteed strictly below the phi_e curve; (phi, t) is on or above it");
  const AngularLift lift(p.k(), p.t());
  std::vector<double> min_log(static_cast<std::size_t>(n_probe) + 1,
                              std::numeric_limits<double>::infinity());
  for (int i = 0; i < grid_size; ++i) {
    double theta = -kPi + kTwoPi * i / grid_size;
    double acc = 0.0;
    for (int m = 1; m <= n_probe; ++m) {
      acc += std::log(lift.derivative(theta));
      theta = wrap_angle(lift(theta, p.phi()));
      min_log[m] = std::min(min_log[m], acc);
    }
  }
  const int half = n_probe / 2;
  const double rate = (min_log[n_probe] - min_log[half]) / (n_probe - half);
  double log_c = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= n_probe; ++m) log_c = std::min(log_c, min_log[m] - m * rate);

  ExpansionCertificate cert{std::exp(log_c), std::exp(rate), n_probe, grid_size};
  if (!(cert.lambda > 1.0 + 1e-3))
    throw ComputationError("expansion_certificate: fitted lambda " + std::to_string(cert.lambda) +
                           " is not above 1");
  return cert;
}

}  // namespace lyz
