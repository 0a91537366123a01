#include "lyz/params.hpp"

#include <cmath>
#include <string>

#include "lyz/errors.hpp"

namespace lyz {

double wrap_angle(double angle) {
  double r = std::remainder(angle, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

void validate_branching(int k) {
  if (k < 2 || k > kMaxBranching)
    throw ParameterError("branching number k must satisfy 2 <= k <= " +
                         std::to_string(kMaxBranching) + ", got " + std::to_string(k));
}

void validate_temperature(double t) {
  if (!std::isfinite(t) || t < 0.0 || t >= 1.0)
    throw ParameterError("temperature variable t must satisfy 0 <= t < 1, got " + std::to_string(t));
}

ModelParams::ModelParams(int k, double t, double phi) : k_(k), t_(t), phi_(phi) {
  validate_branching(k);
  validate_temperature(t);
  if (!std::isfinite(phi) || phi <= -kPi || phi > kPi)
    throw ParameterError("field angle phi must lie in (-pi, pi], got " + std::to_string(phi));
}

double ModelParams::temperature() const { return temperature_from_t(t_); }

double temperature_from_t(double t) {
  if (!(t > 0.0 && t < 1.0))
    throw ParameterError("temperature T = -2/ln t needs 0 < t < 1, got t = " + std::to_string(t));
  return -2.0 / std::log(t);
}

}  // namespace lyz
