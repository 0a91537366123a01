#include "lyz/partition.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <ostream>

#include "json.hpp"
#include "lyz/errors.hpp"
#include "lyz/format.hpp"
#include "lyz/parallel.hpp"
#include "lyz/params.hpp"
#include "lyz/polynomial_roots.hpp"
#include "lyz/summation.hpp"

namespace lyz {

namespace {

using ZPoly = std::vector<mpz_class>;

constexpr std::uint64_t kMaxRecursiveVertices = 10000;

ZPoly multiply(const ZPoly& a, const ZPoly& b) {
  ZPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  return out;
}

ZPoly power(const ZPoly& base, int e) {
  ZPoly result{1};
  ZPoly b = base;
  while (e > 0) {
    if (e & 1) result = multiply(result, b);
    e >>= 1;
    if (e > 0) b = multiply(b, b);
  }
  return result;
}

// x * a + y * b, padded to the longer length.
ZPoly combine(const mpz_class& x, const ZPoly& a, const mpz_class& y, const ZPoly& b) {
  ZPoly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += x * a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += y * b[i];
  return out;
}

ZPoly shift(ZPoly p) {
  p.insert(p.begin(), mpz_class(0));
  return p;
}

std::size_t max_bits(const ZPoly& p) {
  std::size_t m = 0;
  for (const auto& c : p) m = std::max(m, mpz_sizeinbase(c.get_mpz_t(), 2));
  return m;
}

void check_t(const TreeSpec& tree, long double t) {
  if (!(t >= 0.0L && t <= 1.0L)) throw ParameterError("partition polynomial needs 0 <= t <= 1");
  if (tree.vertex_count() > kMaxRecursiveVertices)
    throw ParameterError("partition polynomial: " + tree.describe() + " has more than " +
                         std::to_string(kMaxRecursiveVertices) + " vertices");
}

using RPoly = std::vector<long double>;

RPoly multiply(const RPoly& a, const RPoly& b) {
  RPoly out(a.size() + b.size() - 1);
  for (std::size_t m = 0; m < out.size(); ++m) {
    CompensatedSum<long double> acc;
    const std::size_t lo = m >= b.size() ? m - b.size() + 1 : 0;
    const std::size_t hi = std::min(m, a.size() - 1);
    for (std::size_t i = lo; i <= hi; ++i) acc.add(a[i] * b[m - i]);
    out[m] = acc.value();
  }
  return out;
}

RPoly power(const RPoly& base, int e) {
  RPoly result{1.0L};
  RPoly b = base;
  while (e > 0) {
    if (e & 1) result = multiply(result, b);
    e >>= 1;
    if (e > 0) b = multiply(b, b);
  }
  return result;
}

RPoly combine(long double x, const RPoly& a, long double y, const RPoly& b) {
  RPoly out(std::max(a.size(), b.size()), 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += x * a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += y * b[i];
  return out;
}

void check_finite(const RPoly& p, const TreeSpec& tree, int level) {
  for (long double c : p)
    if (!std::isfinite(c))
      throw ComputationError("partition polynomial overflow at level " + std::to_string(level) + " of " +
                             tree.describe());
}

std::vector<CircleRoot> roots_from(const std::vector<PolynomialRoot>& roots, std::size_t seam_roots) {
  std::vector<CircleRoot> out(seam_roots, CircleRoot{kPi, 0.0, 0.0});
  {
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const auto& r = roots[i];
      if (!r.converged)
        throw ComputationError("root " + std::to_string(i) + " of the partition polynomial did not converge");
      CircleRoot c;
      c.angle = static_cast<double>(std::arg(r.value));
      if (c.angle <= -kPi + 1e-12) c.angle = kPi;
      c.residual = static_cast<double>(r.error_bound);
      c.modulus_error = static_cast<double>(std::abs(std::abs(r.value) - 1.0L));
      out.push_back(c);
    }
  }
  double worst = 0.0;
  for (const auto& c : out) worst = std::max(worst, c.modulus_error);
  if (!(worst <= kUnitCircleTolerance))
    throw ComputationError("partition polynomial root off the unit circle by " + format_double(worst));
  std::sort(out.begin(), out.end(), [](const CircleRoot& a, const CircleRoot& b) { return a.angle < b.angle; });
  return out;
}

}  // namespace

double to_double(const mpq_class& q) {
  double best = q.get_d();
  mpq_class best_err = abs(mpq_class(best) - q);
  for (double c : {std::nextafter(best, -HUGE_VAL), std::nextafter(best, HUGE_VAL)}) {
    if (!std::isfinite(c)) continue;
    const mpq_class err = abs(mpq_class(c) - q);
    if (err < best_err || (err == best_err && (std::bit_cast<std::uint64_t>(c) & 1u) == 0)) {
      best = c;
      best_err = err;
    }
  }
  return best;
}

mpq_class parse_rational(const std::string& text) {
  const auto bad = [&] { return ParameterError("cannot parse '" + text + "' as a rational (use p/q or a decimal)"); };
  if (text.empty()) throw bad();
  const auto slash = text.find('/');
  const auto digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    const std::string num_digits = (!num.empty() && num[0] == '-') ? num.substr(1) : num;
    if (!digits(num_digits) || !digits(den)) throw bad();
    mpq_class q{mpz_class(num, 10), mpz_class(den, 10)};
    if (q.get_den() == 0) throw ParameterError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  }
  std::string s = text;
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  const auto dot = s.find('.');
  std::string int_part = dot == std::string::npos ? s : s.substr(0, dot);
  std::string frac_part = dot == std::string::npos ? "" : s.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) throw bad();
  if ((!int_part.empty() && !digits(int_part)) || (!frac_part.empty() && !digits(frac_part))) throw bad();
  mpz_class den = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
  mpq_class q(mpz_class((int_part.empty() ? "0" : int_part) + frac_part, 10), den);
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

std::vector<long double> ExactPartitionPolynomial::to_long_double() const {
  std::vector<long double> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) {
    // Exact ratio rounded through mpf at a precision above long double.
    mpf_class f(c, 128);
    long exp = 0;
    const double mant = mpf_get_d_2exp(&exp, f.get_mpf_t());
    mpf_class rest = f - mpf_class(std::ldexp(mant, static_cast<int>(exp)), 128);
    long exp2 = 0;
    const double mant2 = mpf_get_d_2exp(&exp2, rest.get_mpf_t());
    out.push_back(std::ldexp(static_cast<long double>(mant), static_cast<int>(exp)) +
                  std::ldexp(static_cast<long double>(mant2), static_cast<int>(exp2)));
  }
  return out;
}

ExactPartitionPolynomial partition_poly_recursive(const TreeSpec& tree, const mpq_class& t, std::size_t max_bit_budget) {
  check_t(tree, to_double(t));
  if (t < 0 || t > 1) throw ParameterError("partition polynomial needs 0 <= t <= 1");
  const mpz_class p = t.get_num();
  const mpz_class q = t.get_den();
  const int k = tree.k();

  // Integer pair scaled by q^{|E|} of the current subtree.
  ZPoly a{1};
  ZPoly b{0, 1};
  mpz_class scale = 1;
  const int rooted_steps = tree.variant() == TreeVariant::rooted ? tree.level() : tree.level() - 1;
  for (int level = 1; level <= rooted_steps; ++level) {
    ZPoly na = power(combine(q, a, p, b), k);
    ZPoly nb = shift(power(combine(p, a, q, b), k));
    a = std::move(na);
    b = std::move(nb);
    mpz_class qk;
    mpz_pow_ui(qk.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(k));
    mpz_pow_ui(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<unsigned long>(k));
    scale *= qk;
    if (std::max(max_bits(a), max_bits(b)) > max_bit_budget)
      throw ComputationError("exact partition recursion exceeded " + std::to_string(max_bit_budget) +
                             " bits at level " + std::to_string(level) + " of " + tree.describe());
  }
  if (tree.variant() == TreeVariant::full) {
    const int e = k + 1;
    ZPoly na = power(combine(q, a, p, b), e);
    ZPoly nb = shift(power(combine(p, a, q, b), e));
    a = std::move(na);
    b = std::move(nb);
    mpz_class qe;
    mpz_pow_ui(qe.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<unsigned long>(e));
    scale *= qe;
    if (std::max(max_bits(a), max_bits(b)) > max_bit_budget)
      throw ComputationError("exact partition recursion exceeded " + std::to_string(max_bit_budget) +
                             " bits at level " + std::to_string(tree.level()) + " of " + tree.describe());
  }
  ExactPartitionPolynomial out{tree, t, {}};
  const std::size_t len = std::max(a.size(), b.size());
  out.coeffs.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    mpz_class s = (i < a.size() ? a[i] : mpz_class(0)) + (i < b.size() ? b[i] : mpz_class(0));
    mpq_class c(s, scale);
    c.canonicalize();
    out.coeffs.push_back(c);
  }
  return out;
}

PartitionPolynomial partition_poly_recursive(const TreeSpec& tree, long double t) {
  check_t(tree, t);
  const int k = tree.k();
  RPoly a{1.0L};
  RPoly b{0.0L, 1.0L};
  const auto advance = [&](int e, int level) {
    RPoly na = power(combine(1.0L, a, t, b), e);
    RPoly nb = power(combine(t, a, 1.0L, b), e);
    nb.insert(nb.begin(), 0.0L);
    a = std::move(na);
    b = std::move(nb);
    check_finite(a, tree, level);
    check_finite(b, tree, level);
  };
  const int rooted_steps = tree.variant() == TreeVariant::rooted ? tree.level() : tree.level() - 1;
  for (int level = 1; level <= rooted_steps; ++level) advance(k, level);
  if (tree.variant() == TreeVariant::full) advance(k + 1, tree.level());
  PartitionPolynomial out{tree, t, RPoly(std::max(a.size(), b.size()), 0.0L)};
  for (std::size_t i = 0; i < a.size(); ++i) out.coeffs[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out.coeffs[i] += b[i];
  return out;
}

ExactPartitionPolynomial partition_poly_bruteforce(const TreeSpec& tree, const mpq_class& t, unsigned workers) {
  const std::uint64_t nv = tree.vertex_count();
  if (nv > kMaxBruteForceVertices)
    throw ParameterError("brute-force enumeration is limited to " + std::to_string(kMaxBruteForceVertices) +
                         " vertices; " + tree.describe() + " has " + std::to_string(nv));
  if (t < 0 || t > 1) throw ParameterError("partition polynomial needs 0 <= t <= 1");
  const auto edges = tree.edges();
  const std::size_t ne = edges.size();
  const std::uint64_t configs = std::uint64_t{1} << nv;

  // tally[j * (ne + 1) + u]: configurations with j down spins, u unsatisfied edges.
  const std::size_t cells = (nv + 1) * (ne + 1);
  const std::size_t blocks = std::min<std::uint64_t>(64, configs);
  const std::uint64_t per_block = configs / blocks;
  std::vector<std::vector<std::uint64_t>> partial(blocks, std::vector<std::uint64_t>(cells, 0));
  parallel_for(blocks, workers, [&](std::size_t blk) {
    auto& tally = partial[blk];
    const std::uint64_t begin = blk * per_block;
    const std::uint64_t end = blk + 1 == blocks ? configs : begin + per_block;
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      const auto j = static_cast<std::size_t>(std::popcount(mask));
      std::size_t u = 0;
      for (const auto& [x, y] : edges) u += ((mask >> x) ^ (mask >> y)) & 1u;
      ++tally[j * (ne + 1) + u];
    }
  });
  std::vector<std::uint64_t> tally(cells, 0);
  for (const auto& part : partial)
    for (std::size_t i = 0; i < cells; ++i) tally[i] += part[i];

  std::vector<mpq_class> tpow(ne + 1);
  tpow[0] = 1;
  for (std::size_t u = 1; u <= ne; ++u) tpow[u] = tpow[u - 1] * t;
  ExactPartitionPolynomial out{tree, t, std::vector<mpq_class>(nv + 1)};
  for (std::size_t j = 0; j <= nv; ++j) {
    mpq_class c = 0;
    for (std::size_t u = 0; u <= ne; ++u) {
      const std::uint64_t n = tally[j * (ne + 1) + u];
      if (n != 0) c += mpq_class(mpz_class(std::to_string(n))) * tpow[u];
    }
    c.canonicalize();
    out.coeffs[j] = c;
  }
  return out;
}

mpq_class evaluate(const ExactPartitionPolynomial& p, const mpq_class& z) {
  mpq_class v = 0;
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) v = v * z + *it;
  return v;
}

std::vector<CircleRoot> poly_roots_on_circle(const ExactPartitionPolynomial& p) {
  std::vector<mpq_class> c = p.coeffs;
  if (c.empty() || c.back() == 0) throw ParameterError("partition polynomial has a zero leading coefficient");
  std::size_t seam = 0;
  // Divide out (z + 1) while z = -1 is an exact root.
  while (c.size() > 1) {
    mpq_class at_minus_one = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) at_minus_one = -at_minus_one + *it;
    if (at_minus_one != 0) break;
    // Synthetic division: c(z) = (z + 1) quot(z).
    std::vector<mpq_class> quot(c.size() - 1);
    mpq_class r = 0;
    for (std::size_t i = c.size() - 1; i >= 1; --i) {
      r = c[i] - r;
      quot[i - 1] = r;
    }
    c = std::move(quot);
    ++seam;
  }
  ExactPartitionPolynomial reduced{p.tree, p.t, std::move(c)};
  return roots_from(aberth_roots_exact(reduced.coeffs), seam);
}

std::vector<CircleRoot> poly_roots_on_circle(const PartitionPolynomial& p) {
  for (long double c : p.coeffs)
    if (!std::isfinite(c)) throw ParameterError("partition polynomial has non-finite coefficients");
  std::vector<long double> c = p.coeffs;
  std::size_t seam = 0;
  const std::size_t degree = c.size() - 1;
  bool palindromic = true;
  for (std::size_t i = 0; i <= degree; ++i) palindromic = palindromic && c[i] == c[degree - i];
  if (palindromic && degree % 2 == 1) {
    // Odd palindromes vanish at z = -1; divide that factor out.
    std::vector<long double> quot(degree);
    long double r = 0.0L;
    for (std::size_t i = degree; i >= 1; --i) {
      r = c[i] - r;
      quot[i - 1] = r;
    }
    c = std::move(quot);
    seam = 1;
  }
  return roots_from(aberth_roots(c), seam);
}

void write_partition_json(std::ostream& out, const ExactPartitionPolynomial& p) {
  nlohmann::ordered_json j;
  j["schema"] = "lyz.partition.v1";
  j["tree"] = {{"variant", to_string(p.tree.variant())}, {"k", p.tree.k()}, {"n", p.tree.level()},
               {"vertices", p.tree.vertex_count()}};
  j["t"] = {{"num", p.t.get_num().get_str()}, {"den", p.t.get_den().get_str()}};
  auto coeffs = nlohmann::ordered_json::array();
  for (const auto& c : p.coeffs) coeffs.push_back({{"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
  j["coefficients"] = std::move(coeffs);
  out << j.dump(2) << '\n';
}

void write_roots_csv(std::ostream& out, const std::vector<CircleRoot>& roots) {
  out << "# lyz roots v1\n";
  out << "index,angle_radians,residual,modulus_error\n";
  for (std::size_t i = 0; i < roots.size(); ++i)
    out << i << ',' << format_double(roots[i].angle) << ',' << format_double(roots[i].residual) << ','
        << format_double(roots[i].modulus_error) << '\n';
}

}  // namespace lyz
