#include "lyz/free_energy.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <ostream>

#include "lyz/dynamics.hpp"
#include "lyz/errors.hpp"
#include "lyz/fit.hpp"
#include "lyz/format.hpp"
#include "lyz/measure.hpp"
#include "lyz/spectra.hpp"
#include "lyz/summation.hpp"

namespace lyz {

namespace {

using cplx = std::complex<double>;
using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

void require_field(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ParameterError("field z must be finite");
  if (z == cplx{0.0, 0.0}) throw ParameterError("field z must be nonzero");
}

double temperature_checked(double t) {
  if (!(t > 0.0 && t < 1.0)) throw ParameterError("free energy needs 0 < t < 1");
  return temperature_from_t(t);
}

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& q,
                 double* error = nullptr) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  const double v = GK::integrate(f, a, b, q.max_depth, q.tol, &err);
  if (error) *error += err;
  return v;
}

// Integral over [0, b] split into dyadic pieces [b 2^-(i+1), b 2^-i]; the
// integrands behave like a power of z at 0, which a single Gauss-Kronrod
// panel resolves poorly.
constexpr int kDyadicPieces = 30;

double integrate_from_zero(const std::function<double(double)>& f, double b, const QuadratureOptions& q) {
  double sum = integrate(f, 0.0, std::ldexp(b, -kDyadicPieces), q);
  for (int i = kDyadicPieces; i-- > 0;) sum += integrate(f, std::ldexp(b, -i - 1), std::ldexp(b, -i), q);
  return sum;
}

cplx ipow(cplx b, int e) {
  cplx r{1.0, 0.0};
  while (e > 0) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e > 0) b *= b;
  }
  return r;
}

bool on_support(cplx z, double t, int k) {
  if (std::abs(std::abs(z) - 1.0) >= 1e-9) return false;
  if (t <= critical_temperature(k)) return true;
  return std::abs(std::arg(z)) >= phi_e(t, k);
}

MassFunction mass_of(const EmpiricalMeasure& em, double phi) {
  return [&em, phi](double zeta) { return em.arc_mass(phi, std::min(zeta, std::nextafter(kPi, 0.0))); };
}

}  // namespace

double edge_vertex_ratio(const TreeSpec&) { return 1.0; }

double free_energy_electrostatic(cplx z, const ZeroSet& zeros) {
  require_field(z);
  const double temp = temperature_checked(zeros.t);
  if (zeros.angles.empty()) throw ParameterError("free energy needs a non-empty zero set");
  CompensatedSum<double> acc;
  for (double a : zeros.angles) {
    const double d = std::abs(z - std::polar(1.0, a));
    if (!(d > 1e-300)) throw DomainError("z coincides with a Lee-Yang zero; the potential is infinite there");
    acc.add(std::log(d));
  }
  const double n = static_cast<double>(zeros.angles.size());
  return -2.0 * temp * acc.value() / n +
         temp * (std::log(std::abs(z)) + edge_vertex_ratio(zeros.tree) * std::log(zeros.t));
}

double free_energy_electrostatic(cplx z, double t, int k, int n, TreeVariant variant, unsigned workers) {
  require_field(z);
  temperature_checked(t);
  ZeroOptions opts;
  opts.workers = workers;
  return free_energy_electrostatic(z, enumerate_zeros(TreeSpec(variant, n, k), t, opts));
}

double free_energy_recursive(cplx z, double t, int k, int n, TreeVariant variant) {
  require_field(z);
  const double temp = temperature_checked(t);
  const TreeSpec tree(variant, n, k);
  cplx a{1.0, 0.0};
  cplx b = z;
  double scale = -0.5 * std::log(std::abs(z));
  const double log_t = std::log(t);
  const auto advance = [&](int e) {
    const cplx na = ipow(a + t * b, e);
    const cplx nb = z * ipow(t * a + b, e);
    scale = e * scale - 0.5 * std::log(std::abs(z)) - 0.5 * e * log_t;
    const double m = std::max(std::abs(na), std::abs(nb));
    if (!(m > 0.0) || !std::isfinite(m)) throw ComputationError("free energy recursion lost the conditional pair");
    a = na / m;
    b = nb / m;
    scale += std::log(m);
  };
  const int steps = variant == TreeVariant::rooted ? n : n - 1;
  for (int i = 0; i < steps; ++i) advance(k);
  if (variant == TreeVariant::full) advance(k + 1);
  const double s = std::abs(a + b);
  if (s < 1e-12 * std::max(std::abs(a), std::abs(b)))
    throw ComputationError("free energy recursion: |Z+ + Z-| cancels to " + format_double(s) +
                           " relative; z is too close to a zero");
  const auto nv = static_cast<double>(tree.vertex_count());
  return -2.0 * temp * (std::log(s) + scale) / nv;
}

cplx magnetization(cplx z, const ZeroSet& zeros, int k) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ParameterError("field z must be finite");
  if (zeros.angles.empty()) throw ParameterError("magnetization needs a non-empty zero set");
  if (on_support(z, zeros.t, k)) throw DomainError("magnetization is undefined on the support of the zero measure");
  CompensatedSum<double> re;
  CompensatedSum<double> im;
  for (double a : zeros.angles) {
    // z / (z - zeta) stays bounded as |z| grows.
    const cplx zeta = std::polar(1.0, a);
    const cplx term = std::abs(z) > 1.0 ? 1.0 / (1.0 - zeta / z) : z / (z - zeta);
    re.add(term.real());
    im.add(term.imag());
  }
  const double n = static_cast<double>(zeros.angles.size());
  return -4.0 * cplx{re.value(), im.value()} / n + 2.0;
}

cplx magnetization(cplx z, double t, int k, int n, TreeVariant variant, unsigned workers) {
  validate_temperature(t);
  if (on_support(z, t, k)) throw DomainError("magnetization is undefined on the support of the zero measure");
  ZeroOptions opts;
  opts.workers = workers;
  return magnetization(z, enumerate_zeros(TreeSpec(variant, n, k), t, opts), k);
}

int regular_order(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ParameterError("kappa must be positive and finite");
  return static_cast<int>(std::ceil(kappa / 2.0)) - 1;
}

double h_total(const MassFunction& mass, double y, double delta0, const QuadratureOptions& q) {
  const auto f = [&](double z) { return z * mass(z) / (z * z + y * y); };
  const double split = std::min(y, delta0);
  return integrate_from_zero(f, split, q) + integrate(f, split, delta0, q);
}

double h_singular(const MassFunction& mass, double y, double delta0, int m, const QuadratureOptions& q) {
  if (!(y > 0.0 && delta0 > 0.0) || m < 0) throw ParameterError("h_singular needs y > 0, delta0 > 0, m >= 0");
  const auto f = [&](double z) {
    const double phi = mass(z);
    if (phi == 0.0) return 0.0;
    return z * phi / (z * z + y * y) * std::pow(y / z, 2 * m + 2);
  };
  const double split = std::min(y, delta0);
  return integrate_from_zero(f, split, q) + integrate(f, split, delta0, q);
}

std::vector<double> regular_coefficients(const MassFunction& mass, double delta0, int m, const QuadratureOptions& q) {
  std::vector<double> c;
  for (int j = 0; j <= m; ++j) {
    const auto f = [&](double z) {
      const double phi = mass(z);
      return phi == 0.0 ? 0.0 : phi / std::pow(z, 2 * j + 1);
    };
    c.push_back(integrate_from_zero(f, delta0, q));
  }
  return c;
}

double h_regular(std::span<const double> coefficients, double y) {
  double s = 0.0;
  double sign = 1.0;
  double y2j = 1.0;
  for (double c : coefficients) {
    s += sign * y2j * c;
    sign = -sign;
    y2j *= y * y;
  }
  return s;
}

SingularFit singular_exponent(const MassFunction& mass, double delta0, std::span<const double> y_grid,
                              double kappa_hat, const SingularOptions& options) {
  if (y_grid.size() < 3) throw ParameterError("singular_exponent needs at least three y values");
  if (!(delta0 > 0.0 && delta0 < kPi)) throw ParameterError("delta0 must lie in (0, pi)");
  SingularFit fit;
  fit.m = regular_order(kappa_hat);
  std::vector<double> xs;
  std::vector<double> ys;
  for (double y : y_grid) {
    if (!(y > 0.0 && y < delta0)) throw ParameterError("y grid must lie in (0, delta0)");
    const double h = h_singular(mass, y, delta0, fit.m, options.quadrature);
    if (!(h > 0.0)) throw ComputationError("h_singular vanished at y = " + format_double(y));
    fit.ys.push_back(y);
    fit.h_sing.push_back(h);
    xs.push_back(std::log(y));
    ys.push_back(std::log(h));
  }
  const auto lf = linear_fit(xs, ys);
  fit.kappa = lf.slope;
  fit.r_squared = lf.r_squared;
  fit.stable = lf.r_squared >= options.min_r_squared;
  return fit;
}

SingularFit singular_exponent(double phi, double t, int k, int n, double delta0, std::span<const double> y_grid,
                              double kappa_hat, const SingularOptions& options) {
  validate_temperature(t);
  if (!(support_margin(phi, t, k) > 0.0)) throw DomainError("singular_exponent: phi lies in the zero-free arc");
  const EmpiricalMeasure em(TreeSpec(options.variant, n, k), t);
  return singular_exponent(mass_of(em, wrap_angle(phi)), delta0, y_grid, kappa_hat, options);
}

IntegrationByPartsCheck integration_by_parts_check(double phi, double t, int k, int n, double y, double delta0,
                                                   const SingularOptions& options) {
  validate_temperature(t);
  if (!(y > 0.0 && delta0 > 0.0 && delta0 < kPi)) throw ParameterError("need y > 0 and 0 < delta0 < pi");
  phi = wrap_angle(phi);
  const TreeSpec tree(options.variant, n, k);
  const EmpiricalMeasure em(tree, t);
  const auto f = [y](double s) { return std::log(s * s + y * y); };

  // Zeros within distance delta0 of phi, one window per side of the seam.
  std::vector<std::pair<double, double>> windows;
  const double lo = phi - delta0;
  const double hi = phi + delta0;
  const double lo_open = std::nextafter(lo, -kTwoPi);
  if (lo_open < -kPi) {
    windows.emplace_back(-kPi, hi);
    windows.emplace_back(std::max(-kPi, lo_open + kTwoPi), kPi);
  } else if (hi > kPi) {
    windows.emplace_back(lo_open, kPi);
    windows.emplace_back(-kPi, hi - kTwoPi);
  } else {
    windows.emplace_back(lo_open, hi);
  }
  CompensatedSum<double> atoms;
  ZeroOptions zopts;
  for (const auto& [a, b] : windows) {
    const auto zs = enumerate_zeros_in(tree, t, a, b, zopts);
    for (double ang : zs.angles) {
      double d = std::abs(ang - phi);
      d = std::min(d, kTwoPi - d);
      if (d <= delta0) atoms.add(f(d));
    }
  }
  IntegrationByPartsCheck out;
  out.atom_sum = atoms.value() / static_cast<double>(em.total());
  const MassFunction mass = mass_of(em, phi);
  const auto fprime_phi = [&](double s) { return 2.0 * s / (s * s + y * y) * mass(s); };
  double err = 0.0;
  const double split = std::min(y, delta0);
  const double integral = integrate(fprime_phi, 0.0, split, options.quadrature, &err) +
                          integrate(fprime_phi, split, delta0, options.quadrature, &err);
  out.by_parts = f(delta0) * mass(delta0) - f(0.0) * mass(0.0) - integral;
  out.quadrature_error = err;
  return out;
}

void write_singular_csv(std::ostream& out, const SingularFit& fit) {
  out << "# lyz singular v1; m=" << fit.m << "; kappa=" << format_double(fit.kappa)
      << "; r_squared=" << format_double(fit.r_squared) << "; stable=" << (fit.stable ? "true" : "false") << "\n";
  out << "y,h_sing,fit\n";
  // Fitted line through the centroid of the log-log points.
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < fit.ys.size(); ++i) {
    mx += std::log(fit.ys[i]);
    my += std::log(fit.h_sing[i]);
  }
  mx /= static_cast<double>(fit.ys.size());
  my /= static_cast<double>(fit.ys.size());
  for (std::size_t i = 0; i < fit.ys.size(); ++i) {
    const double line = std::exp(my + fit.kappa * (std::log(fit.ys[i]) - mx));
    out << format_double(fit.ys[i]) << ',' << format_double(fit.h_sing[i]) << ',' << format_double(line) << '\n';
  }
}

void write_radial_scan_csv(std::ostream& out, double phi, double t, int k, int n, std::span<const double> radii,
                           TreeVariant variant, unsigned workers) {
  temperature_checked(t);
  ZeroOptions opts;
  opts.workers = workers;
  const auto zeros = enumerate_zeros(TreeSpec(variant, n, k), t, opts);
  out << "# lyz radial v1; tree=" << to_string(variant) << "; k=" << k << "; n=" << n << "; t=" << format_double(t)
      << "; phi=" << format_double(phi) << "\n";
  out << "r,f_electrostatic,f_recursive\n";
  for (double r : radii) {
    const cplx z = std::polar(r, phi);
    out << format_double(r) << ',' << format_double(free_energy_electrostatic(z, zeros)) << ','
        << format_double(free_energy_recursive(z, t, k, n, variant)) << '\n';
  }
}

}  // namespace lyz
