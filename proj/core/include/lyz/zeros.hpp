#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lyz/dynamics.hpp"
#include "lyz/tree.hpp"

namespace lyz {

/// Lifted angle stored as remainder + 2 pi * turns, remainder in [-pi, pi).
/// Keeping the turn count as an integer preserves the fractional part to full
/// double precision even after many iterates.
struct LiftedAngle {
  std::int64_t turns = 0;
  double remainder = 0.0;
  /// d/dphi of the composed map along the diagonal.
  double slope = 1.0;

  double value() const { return remainder + kTwoPi * static_cast<double>(turns); }
  /// value() - pi * odd, evaluated without cancellation of the turn count.
  double offset_from_odd_multiple(std::int64_t odd) const;
};

/// Composed lift along the diagonal theta_0 = phi:
///   rooted: G(phi) = B~^n_phi(phi)
///   full:   G(phi) = B~_{phi,t,k+1}(B~^{n-1}_phi(phi))
/// e^{i phi} is a Lee-Yang zero iff G(phi) = pi mod 2 pi. G is strictly
/// increasing with G(phi + 2 pi) - G(phi) = 2 pi |V|.
class DiagonalOrbit {
 public:
  DiagonalOrbit(const TreeSpec& tree, double t);

  LiftedAngle sample(double phi) const;
  double value(double phi) const { return sample(phi).value(); }

  /// #{zeros in (-pi, phi]} from floor((G(phi) - pi) / 2 pi); exact integer,
  /// no enumeration.
  std::uint64_t count_at_most(double phi) const;

  const TreeSpec& tree() const noexcept { return tree_; }
  double t() const noexcept { return t_; }

 private:
  TreeSpec tree_;
  double t_;
  AngularLift inner_;
  int inner_steps_;
  std::optional<AngularLift> outer_;  // branching k + 1, full tree only
};

/// Number of Lee-Yang zeros, i.e. |V| of the tree.
std::uint64_t zero_count(const TreeSpec& tree);

struct ZeroSet {
  TreeSpec tree;
  double t = 0.0;
  /// Sorted ascending in (-pi, pi]; a zero on the seam is reported as +pi.
  std::vector<double> angles;
  /// |G(phi) - pi (2m + 1)| / G'(phi) per zero.
  std::vector<double> residuals;
};

struct ZeroOptions {
  double tol = 1e-12;
  unsigned workers = 0;
};

/// All |V| zeros, one monotone solve per branch G(phi) = pi (2m + 1).
/// Throws ParameterError for t outside [0, 1); see zeros_at_t_one.
ZeroSet enumerate_zeros(const TreeSpec& tree, double t, const ZeroOptions& options = {});

/// Zeros with a < phi <= b, for -pi <= a <= b <= pi.
ZeroSet enumerate_zeros_in(const TreeSpec& tree, double t, double a, double b,
                           const ZeroOptions& options = {});

/// t = 1: every zero sits at z = -1.
ZeroSet zeros_at_t_one(const TreeSpec& tree);

/// Smallest strictly positive angle. Throws ParameterError on an empty set.
double min_positive_zero(const ZeroSet& zeros);

/// CSV: index,angle_radians,residual
void write_zeros_csv(std::ostream& out, const ZeroSet& zeros);

}  // namespace lyz
