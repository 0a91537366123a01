#include "lyz/measure.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "lyz/dynamics.hpp"
#include "lyz/errors.hpp"
#include "lyz/format.hpp"
#include "lyz/parallel.hpp"

namespace lyz {

EmpiricalMeasure::EmpiricalMeasure(const TreeSpec& tree, double t)
    : orbit_((validate_temperature(t), tree), t), total_(zero_count(tree)), g_minus_pi_(orbit_.value(-kPi)) {}

std::uint64_t EmpiricalMeasure::count_at_most(double phi) const {
  if (std::isnan(phi)) throw ParameterError("cdf query at NaN");
  return orbit_.count_at_most(phi);
}

double EmpiricalMeasure::cdf(double phi) const {
  return static_cast<double>(count_at_most(phi)) / static_cast<double>(total_);
}

double EmpiricalMeasure::continuum_cdf(double phi) const {
  phi = std::clamp(phi, -kPi, kPi);
  return (orbit_.value(phi) - g_minus_pi_) / (kTwoPi * static_cast<double>(total_));
}

std::uint64_t EmpiricalMeasure::interval_count(double a, double b) const {
  if (!(a >= -kPi && b <= kPi && a <= b)) throw ParameterError("interval must satisfy -pi <= a <= b <= pi");
  return count_at_most(b) - count_at_most(a);
}

double EmpiricalMeasure::interval_mass(double a, double b) const {
  return static_cast<double>(interval_count(a, b)) / static_cast<double>(total_);
}

double EmpiricalMeasure::arc_mass(double phi, double delta) const {
  if (!(delta >= 0.0 && delta < kPi)) throw ParameterError("arc half-width must lie in [0, pi)");
  phi = wrap_angle(phi);
  const double lo = phi - delta;
  const double hi = phi + delta;
  // Closed arc [lo, hi]: count (lo^-, hi] via the largest double below lo.
  const auto count_closed = [&](double a, double b) -> std::uint64_t {
    const double a_minus = std::nextafter(a, -kTwoPi);
    return a_minus < -kPi ? count_at_most(b) : count_at_most(b) - count_at_most(a_minus);
  };
  std::uint64_t c = 0;
  if (lo < -kPi)
    c = count_closed(-kPi, hi) + count_closed(lo + kTwoPi, kPi);
  else if (hi > kPi)
    c = count_closed(lo, kPi) + count_closed(-kPi, hi - kTwoPi);
  else
    c = count_closed(lo, hi);
  return static_cast<double>(std::min(c, total_)) / static_cast<double>(total_);
}

double empirical_cdf(double phi, const EmpiricalMeasure& em) { return em.cdf(phi); }

double interval_mass(double a, double b, const EmpiricalMeasure& em) { return em.interval_mass(a, b); }

double max_gap(const ZeroSet& zeros, int k) {
  const auto& a = zeros.angles;
  if (a.empty()) throw ParameterError("max_gap: empty zero set");
  const bool skip_origin_gap = zeros.t > critical_temperature(k);
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double lo = a[i];
    const double hi = i + 1 < a.size() ? a[i + 1] : a[0] + kTwoPi;
    if (skip_origin_gap && lo < 0.0 && hi > 0.0) continue;
    best = std::max(best, hi - lo);
  }
  return best;
}

double cdf_distance_rooted_full(int k, int n, double t, std::span<const double> grid, unsigned workers) {
  if (n < 1) throw ParameterError("cdf_distance_rooted_full needs n >= 1");
  const EmpiricalMeasure rooted(TreeSpec::rooted(n, k), t);
  const EmpiricalMeasure full(TreeSpec::full(n, k), t);
  std::vector<double> diff(grid.size());
  parallel_for(grid.size(), workers,
               [&](std::size_t i) { diff[i] = std::abs(rooted.cdf(grid[i]) - full.cdf(grid[i])); });
  double best = 0.0;
  for (double d : diff) best = std::max(best, d);
  return best;
}

std::vector<double> uniform_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = -kPi + kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return g;
}

void write_cdf_csv(std::ostream& out, const EmpiricalMeasure& em, std::span<const double> grid, unsigned workers) {
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) { values[i] = em.cdf(grid[i]); });
  out << "# lyz cdf v1; tree=" << to_string(em.tree().variant()) << "; k=" << em.tree().k()
      << "; n=" << em.tree().level() << "; t=" << format_double(em.t()) << "\n";
  out << "phi,cdf\n";
  for (std::size_t i = 0; i < grid.size(); ++i) out << format_double(grid[i]) << ',' << format_double(values[i]) << '\n';
}

void write_histogram_csv(std::ostream& out, const EmpiricalMeasure& em, std::size_t bins) {
  if (bins == 0) throw ParameterError("histogram needs at least one bin");
  out << "# lyz histogram v1; tree=" << to_string(em.tree().variant()) << "; k=" << em.tree().k()
      << "; n=" << em.tree().level() << "; t=" << format_double(em.t()) << "\n";
  out << "bin_center,mass\n";
  double prev = -kPi;
  for (std::size_t i = 0; i < bins; ++i) {
    const double next = i + 1 == bins ? kPi : -kPi + kTwoPi * static_cast<double>(i + 1) / static_cast<double>(bins);
    out << format_double(0.5 * (prev + next)) << ',' << format_double(em.interval_mass(prev, next)) << '\n';
    prev = next;
  }
}

}  // namespace lyz
