#include "lyz/polynomial_roots.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <numbers>

#include "lyz/errors.hpp"

namespace lyz {

namespace {

using cld = std::complex<long double>;

struct Eval {
  cld p;
  cld dp;
  long double magnitude;  // sum |c_i| |z|^i, scale of the rounding error in p
};

Eval horner(std::span<const long double> c, cld z) {
  const long double r = std::abs(z);
  cld p = c.back();
  cld dp{0.0L, 0.0L};
  long double m = std::abs(c.back());
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
    m = m * r + std::abs(c[i]);
  }
  return {p, dp, m};
}

// Complex numbers over mpf_class with a fixed working precision. Every
// value is created through make() so temporaries never fall back to the
// default precision.
class MpComplexOps {
 public:
  explicit MpComplexOps(mp_bitcnt_t bits) : bits_(bits) {}

  struct C {
    mpf_class re;
    mpf_class im;
  };

  mpf_class real(double v = 0.0) const { return mpf_class(v, bits_); }
  C make(long double re, long double im) const {
    C c{real(), real()};
    set_ld(c.re, re);
    set_ld(c.im, im);
    return c;
  }
  // a * b
  C mul(const C& a, const C& b) const {
    C r{real(), real()};
    r.re = a.re * b.re;
    r.re -= a.im * b.im;
    r.im = a.re * b.im;
    r.im += a.im * b.re;
    return r;
  }
  // a / b
  C div(const C& a, const C& b) const {
    mpf_class den = real();
    den = b.re * b.re;
    den += b.im * b.im;
    C r{real(), real()};
    r.re = a.re * b.re;
    r.re += a.im * b.im;
    r.re /= den;
    r.im = a.im * b.re;
    r.im -= a.re * b.im;
    r.im /= den;
    return r;
  }
  mpf_class abs(const C& a) const {
    mpf_class r = real();
    r = a.re * a.re;
    r += a.im * a.im;
    return sqrt(r);
  }
  std::complex<long double> to_ld(const C& a) const { return {to_ld(a.re), to_ld(a.im)}; }
  static long double to_ld(const mpf_class& x) {
    // Two doubles capture the 64-bit long double mantissa.
    const double hi = x.get_d();
    mpf_class rest(x);
    rest -= hi;
    return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
  }

 private:
  void set_ld(mpf_class& out, long double v) const {
    const double hi = static_cast<double>(v);
    out = hi;
    out += static_cast<double>(v - static_cast<long double>(hi));
  }
  mp_bitcnt_t bits_;
};

}  // namespace

std::vector<PolynomialRoot> aberth_roots_exact(std::span<const mpq_class> coeffs, long double target,
                                               unsigned max_bits) {
  if (coeffs.size() < 2) return {};
  const int degree = static_cast<int>(coeffs.size()) - 1;
  if (degree > kMaxRootDegree)
    throw ParameterError("aberth_roots_exact: degree " + std::to_string(degree) + " exceeds the cap of " +
                         std::to_string(kMaxRootDegree));
  if (coeffs.back() == 0) throw ParameterError("aberth_roots_exact: leading coefficient is zero");
  if (coeffs.front() == 0) throw ParameterError("aberth_roots_exact: polynomial has a root at zero");

  // Seeds: the extended-precision pass, rescaled so the coefficients fit in
  // a long double.
  std::vector<long double> scaled(coeffs.size());
  {
    long max_exp = LONG_MIN;
    for (const auto& c : coeffs) {
      if (c == 0) continue;
      long e = 0;
      mpf_class f(c, 64);
      mpf_get_d_2exp(&e, f.get_mpf_t());
      max_exp = std::max(max_exp, e);
    }
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      mpf_class f(coeffs[i], 128);
      mpf_div_2exp(f.get_mpf_t(), f.get_mpf_t(), static_cast<mp_bitcnt_t>(std::max(0L, max_exp)));
      scaled[i] = MpComplexOps::to_ld(f);
    }
  }
  std::vector<std::complex<long double>> seeds;
  if (scaled.front() != 0.0L && scaled.back() != 0.0L) {
    for (const auto& r : aberth_roots(scaled)) seeds.push_back(r.value);
  } else {
    for (int i = 0; i < degree; ++i)
      seeds.push_back(std::polar(1.0L, 2.0L * std::numbers::pi_v<long double> * i / degree + 0.4L));
  }
  // Coincident seeds would make the Aberth correction singular.
  for (std::size_t i = 0; i < seeds.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (seeds[i] == seeds[j]) seeds[i] *= std::polar(1.0L + 1e-12L * static_cast<long double>(i), 1e-9L);

  std::vector<PolynomialRoot> out(static_cast<std::size_t>(degree));
  for (unsigned bits = 128;; bits *= 2) {
    const MpComplexOps ops(bits);
    using C = MpComplexOps::C;
    std::vector<mpf_class> a;
    a.reserve(coeffs.size());
    for (const auto& c : coeffs) a.emplace_back(c, bits);
    std::vector<C> z;
    for (const auto& s : seeds) z.push_back(ops.make(s.real(), s.imag()));

    mpf_class floor_eps = ops.real(1.0);
    mpf_div_2exp(floor_eps.get_mpf_t(), floor_eps.get_mpf_t(), bits - 8);
    struct Eval {
      C p, dp;
      mpf_class magnitude;
    };
    const auto horner = [&](const C& x) {
      Eval e{C{a.back(), ops.real()}, C{ops.real(), ops.real()}, abs(a.back())};
      const mpf_class r = ops.abs(x);
      for (std::size_t i = a.size() - 1; i-- > 0;) {
        e.dp = ops.mul(e.dp, x);
        e.dp.re += e.p.re;
        e.dp.im += e.p.im;
        e.p = ops.mul(e.p, x);
        e.p.re += a[i];
        e.magnitude *= r;
        e.magnitude += abs(a[i]);
      }
      return e;
    };

    std::vector<char> done(static_cast<std::size_t>(degree), 0);
    for (int it = 0; it < 200; ++it) {
      bool all_done = true;
      for (int i = 0; i < degree; ++i) {
        if (done[i]) continue;
        const Eval e = horner(z[i]);
        const mpf_class pa = ops.abs(e.p);
        if (pa == 0 || pa <= floor_eps * e.magnitude) {
          done[i] = 1;
          continue;
        }
        if (ops.abs(e.dp) == 0) {
          z[i].re *= 1 + 1e-12;
          all_done = false;
          continue;
        }
        const C ratio = ops.div(e.p, e.dp);
        C sum{ops.real(), ops.real()};
        for (int j = 0; j < degree; ++j) {
          if (j == i) continue;
          C diff{ops.real(), ops.real()};
          diff.re = z[i].re - z[j].re;
          diff.im = z[i].im - z[j].im;
          if (diff.re == 0 && diff.im == 0) continue;
          const C inv = ops.div(C{ops.real(1.0), ops.real()}, diff);
          sum.re += inv.re;
          sum.im += inv.im;
        }
        C den = ops.mul(ratio, sum);
        den.re = 1 - den.re;
        den.im = -den.im;
        if (den.re == 0 && den.im == 0) {
          all_done = false;
          continue;
        }
        const C step = ops.div(ratio, den);
        z[i].re -= step.re;
        z[i].im -= step.im;
        if (ops.abs(step) <= floor_eps * ops.abs(z[i]))
          done[i] = 1;
        else
          all_done = false;
      }
      if (all_done) break;
    }

    bool all_within = true;
    for (int i = 0; i < degree; ++i) {
      const Eval e = horner(z[i]);
      const mpf_class dpa = ops.abs(e.dp);
      mpf_class radius = ops.real();
      if (dpa == 0) {
        radius = 1e300;
      } else {
        radius = ops.abs(e.p);
        radius *= degree;
        radius /= dpa;
      }
      const long double rz = MpComplexOps::to_ld(ops.abs(z[i]));
      out[i].value = ops.to_ld(z[i]);
      out[i].error_bound = MpComplexOps::to_ld(radius);
      out[i].converged = out[i].error_bound <= target * std::max(1.0L, rz);
      all_within = all_within && out[i].converged;
      seeds[i] = out[i].value;
    }
    if (all_within || bits * 2 > max_bits) return out;
  }
}

std::vector<PolynomialRoot> aberth_roots(std::span<const long double> coeffs, int max_iterations) {
  if (coeffs.size() < 2) return {};
  const int degree = static_cast<int>(coeffs.size()) - 1;
  if (degree > kMaxRootDegree)
    throw ParameterError("aberth_roots: degree " + std::to_string(degree) + " exceeds the cap of " +
                         std::to_string(kMaxRootDegree));
  if (coeffs.back() == 0.0L) throw ParameterError("aberth_roots: leading coefficient is zero");
  if (coeffs.front() == 0.0L) throw ParameterError("aberth_roots: polynomial has a root at zero");

  const long double radius =
      std::pow(std::abs(coeffs.front() / coeffs.back()), 1.0L / static_cast<long double>(degree));
  std::vector<PolynomialRoot> roots(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) {
    const long double angle = 2.0L * std::numbers::pi_v<long double> * i / degree + 0.4L;
    roots[i].value = std::polar(radius, angle);
  }

  const long double eps = std::numeric_limits<long double>::epsilon();
  for (int it = 0; it < max_iterations; ++it) {
    bool all_done = true;
    for (int i = 0; i < degree; ++i) {
      if (roots[i].converged) continue;
      const cld z = roots[i].value;
      const Eval e = horner(coeffs, z);
      if (e.p == cld{0.0L, 0.0L}) {
        roots[i].converged = true;
        continue;
      }
      const cld ratio = e.p / e.dp;
      cld sum{0.0L, 0.0L};
      for (int j = 0; j < degree; ++j)
        if (j != i) sum += 1.0L / (z - roots[j].value);
      const cld step = ratio / (1.0L - ratio * sum);
      roots[i].value = z - step;
      // Small step, or z already at the rounding floor of p.
      if (std::abs(step) <= 4.0L * eps * std::abs(roots[i].value) || std::abs(e.p) <= 8.0L * eps * e.magnitude)
        roots[i].converged = true;
      else
        all_done = false;
    }
    if (all_done) break;
  }

  for (auto& r : roots) {
    // One polishing Newton step when it reduces the residual.
    Eval e = horner(coeffs, r.value);
    if (e.dp != cld{0.0L, 0.0L}) {
      const cld cand = r.value - e.p / e.dp;
      const Eval ec = horner(coeffs, cand);
      if (std::abs(ec.p) < std::abs(e.p)) {
        r.value = cand;
        e = ec;
      }
    }
    r.error_bound = e.dp == cld{0.0L, 0.0L} ? std::numeric_limits<long double>::infinity()
                                           : degree * std::abs(e.p) / std::abs(e.dp);
  }
  return roots;
}

}  // namespace lyz
