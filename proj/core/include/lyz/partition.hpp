#pragma once

// Cleared-denominator partition polynomial of the Ising model on a finite
// Cayley tree. Coefficient j of z^j sums t^{u} over spin configurations with
// j down spins, u counting unsatisfied edges.

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lyz/tree.hpp"

namespace lyz {

/// Parses "p/q", an integer, or a plain decimal such as "0.125" into an exact
/// rational. Throws ParameterError on anything else.
mpq_class parse_rational(const std::string& text);

/// Nearest double (ties to even); mpq_class::get_d truncates.
double to_double(const mpq_class& q);

struct ExactPartitionPolynomial {
  TreeSpec tree;
  mpq_class t;
  std::vector<mpq_class> coeffs;

  std::vector<long double> to_long_double() const;
};

struct PartitionPolynomial {
  TreeSpec tree;
  long double t = 0.0L;
  std::vector<long double> coeffs;
};

/// Bit budget for intermediate integers in the exact recursion.
inline constexpr std::size_t kDefaultMaxBits = std::size_t{1} << 26;

/// Conditional-pair recursion A' = (A + tB)^k, B' = z (tA + B)^k from the
/// single vertex A = 1, B = z; the full tree finishes with exponent k + 1 on
/// level n - 1. Throws ComputationError naming the level if the integers
/// outgrow max_bits, ParameterError if t is outside [0, 1] or |V| > 10^4.
ExactPartitionPolynomial partition_poly_recursive(const TreeSpec& tree, const mpq_class& t,
                                                  std::size_t max_bits = kDefaultMaxBits);

/// Same recursion in long double with compensated convolution sums. Throws
/// ComputationError naming the level on overflow.
PartitionPolynomial partition_poly_recursive(const TreeSpec& tree, long double t);

inline constexpr std::uint64_t kMaxBruteForceVertices = 22;

/// Direct sum over all 2^|V| spin configurations.
ExactPartitionPolynomial partition_poly_bruteforce(const TreeSpec& tree, const mpq_class& t,
                                                   unsigned workers = 0);

/// Exact evaluation at z.
mpq_class evaluate(const ExactPartitionPolynomial& p, const mpq_class& z);

struct CircleRoot {
  double angle = 0.0;  // (-pi, pi], a root at z = -1 is reported as +pi
  double residual = 0.0;
  double modulus_error = 0.0;  // ||root| - 1|
};

inline constexpr double kUnitCircleTolerance = 1e-9;

/// Roots sorted by angle. Exact (z + 1) factors are divided out before the
/// numeric solve. Throws ComputationError if a root fails to converge or
/// leaves the circle by more than kUnitCircleTolerance.
std::vector<CircleRoot> poly_roots_on_circle(const ExactPartitionPolynomial& p);
std::vector<CircleRoot> poly_roots_on_circle(const PartitionPolynomial& p);

/// {"tree":..., "t":{"num","den"}, "coefficients":[{"num","den"}, ...]}
void write_partition_json(std::ostream& out, const ExactPartitionPolynomial& p);

/// CSV: index,angle_radians,residual,modulus_error
void write_roots_csv(std::ostream& out, const std::vector<CircleRoot>& roots);

}  // namespace lyz
