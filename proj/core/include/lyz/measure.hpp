#pragma once

// Empirical Lee-Yang measure of a finite tree: equal atoms of mass 1/|V| at
// the zero angles. Queries go through the diagonal orbit, so no zero list is
// stored.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "lyz/tree.hpp"
#include "lyz/zeros.hpp"

namespace lyz {

class EmpiricalMeasure {
 public:
  EmpiricalMeasure(const TreeSpec& tree, double t);

  const TreeSpec& tree() const noexcept { return orbit_.tree(); }
  double t() const noexcept { return orbit_.t(); }
  std::uint64_t total() const noexcept { return total_; }

  /// #{zeros in (-pi, phi]}, phi clamped to [-pi, pi].
  std::uint64_t count_at_most(double phi) const;
  /// count_at_most / total.
  double cdf(double phi) const;
  /// (G(phi) - G(-pi)) / (2 pi |V|): the smooth interpolant of cdf.
  double continuum_cdf(double phi) const;

  /// #{zeros in (a, b]} for -pi <= a <= b <= pi.
  std::uint64_t interval_count(double a, double b) const;
  double interval_mass(double a, double b) const;

  /// Mass of the closed arc [phi - delta, phi + delta] for 0 <= delta < pi,
  /// wrapping across the seam.
  double arc_mass(double phi, double delta) const;

 private:
  DiagonalOrbit orbit_;
  std::uint64_t total_;
  double g_minus_pi_;
};

double empirical_cdf(double phi, const EmpiricalMeasure& em);
double interval_mass(double a, double b, const EmpiricalMeasure& em);

/// Largest circular gap between consecutive zeros. For t > t_c the gap that
/// contains z = 1 (the zero-free arc) is left out.
double max_gap(const ZeroSet& zeros, int k);

/// sup over grid of |M_rooted - M_full|, both at level n.
double cdf_distance_rooted_full(int k, int n, double t, std::span<const double> grid, unsigned workers = 0);

/// n equally spaced points -pi + 2 pi (i + 1/2) / n.
std::vector<double> uniform_grid(std::size_t n);

/// CSV: phi,cdf
void write_cdf_csv(std::ostream& out, const EmpiricalMeasure& em, std::span<const double> grid,
                   unsigned workers = 0);

/// CSV: bin_center,mass over `bins` equal bins of (-pi, pi].
void write_histogram_csv(std::ostream& out, const EmpiricalMeasure& em, std::size_t bins);

}  // namespace lyz
