#pragma once

#include <gmpxx.h>

#include <complex>
#include <span>
#include <vector>

namespace lyz {

inline constexpr int kMaxRootDegree = 4096;

struct PolynomialRoot {
  std::complex<long double> value;
  /// deg * |p(z)| / |p'(z)|: a disk of this radius around value holds a root.
  long double error_bound = 0.0L;
  bool converged = false;
};

/// Simultaneous Aberth-Ehrlich iteration in extended precision.
/// coeffs are in ascending order with a nonzero leading coefficient.
/// Throws ParameterError above kMaxRootDegree.
std::vector<PolynomialRoot> aberth_roots(std::span<const long double> coeffs, int max_iterations = 500);

/// Aberth iteration on exact rational coefficients in GMP floating point,
/// seeded by the extended-precision pass. The working precision starts at
/// 128 bits and doubles until every inclusion radius is below
/// target * max(1, |z|) or max_bits is reached; roots still above the
/// target come back with converged = false.
std::vector<PolynomialRoot> aberth_roots_exact(std::span<const mpq_class> coeffs, long double target = 1e-15L,
                                               unsigned max_bits = 1u << 14);

}  // namespace lyz
