#pragma once

#include <complex>
#include <numbers>

namespace lyz {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps any real angle to the representative in (-pi, pi].
double wrap_angle(double angle);

/// Throws ParameterError unless 2 <= k <= kMaxBranching.
void validate_branching(int k);

/// Throws ParameterError unless 0 <= t < 1.
void validate_temperature(double t);

inline constexpr int kMaxBranching = 64;

/// Ising parameters on the Cayley tree: branching number k, temperature
/// variable t = exp(-2J/T) and field angle phi = Arg z with z = exp(-2h/T).
class ModelParams {
 public:
  ModelParams(int k, double t, double phi);

  int k() const noexcept { return k_; }
  double t() const noexcept { return t_; }
  double phi() const noexcept { return phi_; }
  std::complex<double> z() const { return std::polar(1.0, phi_); }

  /// Physical temperature with J = 1, T = -2 / ln t. Requires 0 < t < 1.
  double temperature() const;

 private:
  int k_;
  double t_;
  double phi_;
};

/// T = -2 / ln t for 0 < t < 1.
double temperature_from_t(double t);

}  // namespace lyz
