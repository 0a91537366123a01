// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lyz/dynamics.hpp"
#include "lyz/format.hpp"
#include "lyz/free_energy.hpp"
#include "lyz/measure.hpp"
#include "lyz/partition.hpp"
#include "lyz/spectra.hpp"
#include "lyz/verify.hpp"
#include "lyz/zeros.hpp"

using namespace lyz;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "[fail] " << what << "; ";
    }
  }
  void note(const std::string& what) { detail << what << "; "; }
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

const double kLog2 = std::log(2.0);
const double kDim0 = std::log(2.0) / std::log(4.0 / 3.0);

// 1. zeros vs exact polynomial roots.
void oracle_equivalence(Outcome& o) {
  double worst_angle = 0.0, worst_modulus = 0.0;
  for (int n = 1; n <= 3; ++n)
    for (const char* ts : {"1/5", "1/2"})
      for (auto v : {TreeVariant::rooted, TreeVariant::full}) {
        const TreeSpec tree(v, n, 2);
        const mpq_class t = parse_rational(ts);
        const auto roots = poly_roots_on_circle(partition_poly_recursive(tree, t));
        const auto zeros = enumerate_zeros(tree, to_double(t));
        if (roots.size() != zeros.angles.size()) {
          o.check(false, tree.describe() + " root count");
          continue;
        }
        for (std::size_t i = 0; i < roots.size(); ++i) {
          worst_angle = std::max(worst_angle, std::abs(roots[i].angle - zeros.angles[i]));
          worst_modulus = std::max(worst_modulus, roots[i].modulus_error);
        }
      }
  o.check(worst_angle <= 1e-8, "angle mismatch " + fmt(worst_angle));
  o.check(worst_modulus <= 1e-9, "modulus error " + fmt(worst_modulus));
  o.note("max |angle diff| " + fmt(worst_angle, 3) + ", max ||root|-1| " + fmt(worst_modulus, 3));
}

// 2. exact recursion vs brute force for every tree with |V| <= 22.
void recursion_vs_bruteforce(Outcome& o) {
  const mpq_class t(1, 5);
  int trees = 0;
  for (int k = 2; k <= kMaxBranching; ++k)
    for (auto v : {TreeVariant::rooted, TreeVariant::full})
      for (int n = v == TreeVariant::full ? 1 : 0;; ++n) {
        const TreeSpec tree(v, n, k);
        if (tree.vertex_count() > kMaxBruteForceVertices) break;
        ++trees;
        const bool same =
            partition_poly_recursive(tree, t).coeffs == partition_poly_bruteforce(tree, t).coeffs;
        o.check(same, tree.describe() + " differs");
      }
  o.note(std::to_string(trees) + " trees compared exactly");
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// 3. zero counts against the closed-form vertex counts as stated.
void counting(Outcome& o) {
  for (int k : {2, 3})
    for (int n = 0; n <= 6; ++n) {
      const std::uint64_t kk = k;
      const std::uint64_t rooted = (ipow(kk, n + 1) - 1) / (kk - 1);
      const auto zr = enumerate_zeros(TreeSpec::rooted(n, k), 0.3).angles.size();
      o.check(zr == rooted, "rooted k=" + std::to_string(k) + " n=" + std::to_string(n) + ": " +
                                std::to_string(zr) + " vs " + std::to_string(rooted));
      if (n == 0) continue;
      const std::uint64_t full = (ipow(kk, n + 1) + kk - 2) / (kk - 1);
      const auto zf = enumerate_zeros(TreeSpec::full(n, k), 0.3).angles.size();
      o.check(zf == full, "full k=" + std::to_string(k) + " n=" + std::to_string(n) + ": " + std::to_string(zf) +
                              " zeros vs formula " + std::to_string(full));
    }
}

// 4. zero-free arc.
void gap(Outcome& o) {
  const double pe05 = phi_e(0.5, 2), pe09 = phi_e(0.9, 2);
  o.check(std::abs(pe05 - 0.308) <= 0.01, "phi_e(0.5) = " + fmt(pe05));
  o.check(std::abs(pe09 - 1.873) <= 0.01, "phi_e(0.9) = " + fmt(pe09));
  double worst = 1e300;
  for (double t : {0.4, 0.5, 0.7, 0.9}) {
    const double pe = phi_e(t, 2);
    for (int n = 1; n <= 12; ++n)
      for (auto v : {TreeVariant::rooted, TreeVariant::full}) {
        const double m = min_positive_zero(enumerate_zeros(TreeSpec(v, n, 2), t));
        worst = std::min(worst, m - pe);
        o.check(m >= pe - 1e-6, "t=" + fmt(t) + " n=" + std::to_string(n) + " " + to_string(v));
      }
  }
  o.note("phi_e(0.5)=" + fmt(pe05) + ", phi_e(0.9)=" + fmt(pe09) + ", min(zero - phi_e)=" + fmt(worst, 3));
}

// 5. density.
void density(Outcome& o) {
  double g[3];
  int i = 0;
  for (int n : {6, 10, 16}) g[i++] = max_gap(enumerate_zeros(TreeSpec::rooted(n, 2), 0.2), 2);
  o.check(g[2] < g[1] && g[1] < g[0], "not strictly decreasing");
  o.note("max_gap n=6,10,16: " + fmt(g[0]) + ", " + fmt(g[1]) + ", " + fmt(g[2]));
}

// 6. rooted vs full CDF.
void rooted_equals_full(Outcome& o) {
  const auto grid = uniform_grid(10000);
  for (double t : {0.2, 0.5}) {
    const double d = cdf_distance_rooted_full(2, 14, t, grid);
    o.check(d <= 0.01, "t=" + fmt(t) + " distance " + fmt(d));
    o.note("t=" + fmt(t) + ": " + fmt(d, 3));
  }
}

// 7. closed form vs Birkhoff.
void lyapunov_cross_check(Outcome& o) {
  const double ts[] = {0.05, 0.15, 0.25, 0.4, 0.6};
  const double phis[] = {0.0, 0.8, 1.6, 2.4, 3.1};
  double worst = 0.0;
  int points = 0;
  for (double t : ts)
    for (double phi0 : phis) {
      // Points above the phi_e curve have no ACIM; move them just below it.
      double phi = phi0;
      if (!below_phi_e_curve(phi, t, 2)) phi = std::min(kPi, phi_e(t, 2) + 0.3);
      const ModelParams p(2, t, phi);
      const double closed = lyapunov_acim_closed(p);
      const auto b = lyapunov_acim_birkhoff(p);
      const double allowed = 2e-3 + 3.0 * b.std_error;
      const double diff = std::abs(closed - b.value);
      worst = std::max(worst, diff / allowed);
      ++points;
      o.check(diff <= allowed, "(t=" + fmt(t) + ", phi=" + fmt(phi) + ") diff " + fmt(diff) + " > " + fmt(allowed));
    }
  const ModelParams ref(2, 0.2, 0.0);
  const double chi = lyapunov_acim_closed(ref);
  const double kappa = kLog2 / chi;
  o.check(std::abs(chi - 0.6239) <= 2e-3, "chi(0.2, 0) = " + fmt(chi));
  o.check(std::abs(kappa - 1.111) <= 5e-4, "kappa(0.2, 0) = " + fmt(kappa));
  const double chi_small = lyapunov_acim_closed(ModelParams(2, 1e-4, 1.0));
  o.check(std::abs(chi_small - kLog2) <= 1e-3, "chi(1e-4) = " + fmt(chi_small));
  o.note(std::to_string(points) + " points, worst diff/allowance " + fmt(worst, 3) + ", chi=" + fmt(chi) +
         ", kappa=" + fmt(kappa) + ", |chi(1e-4)-log 2|=" + fmt(std::abs(chi_small - kLog2), 3));
}

// 8. chi_acim < log k < chi_mme.
void ordering(Outcome& o) {
  const double ts[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.85, 0.9};
  double min_sigma_acim = 1e300, min_sigma_mme = 1e300, max_hd = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double t = ts[i];
    const double lo = t > critical_temperature(2) ? phi_e(t, 2) : 0.0;
    const double phi = lo + (kPi - lo) * (0.2 + 0.06 * i);
    const ModelParams p(2, t, phi);
    const auto acim = lyapunov_acim_birkhoff(p);
    const auto mme = lyapunov_mme(p, 16);
    const double s_acim = (kLog2 - acim.value) / acim.std_error;
    const double s_mme = (mme.value - kLog2) / mme.std_error;
    const double hd = kLog2 / mme.value;
    min_sigma_acim = std::min(min_sigma_acim, s_acim);
    min_sigma_mme = std::min(min_sigma_mme, s_mme);
    max_hd = std::max(max_hd, hd);
    const std::string where = "(t=" + fmt(t) + ", phi=" + fmt(phi) + ")";
    o.check(lyapunov_acim_closed(p) < kLog2, where + " closed chi_acim >= log 2");
    o.check(s_acim >= 5.0, where + " acim margin " + fmt(s_acim, 3) + " sigma");
    o.check(s_mme >= 5.0, where + " mme margin " + fmt(s_mme, 3) + " sigma");
    o.check(hd < 1.0, where + " HD(MME) " + fmt(hd));
  }
  o.note("min margins: acim " + fmt(min_sigma_acim, 3) + " sigma, mme " + fmt(min_sigma_mme, 3) +
         " sigma; max HD(MME) " + fmt(max_hd, 4));
}

// 9. pointwise dimension.
void pointwise(Outcome& o) {
  const auto f0 = pointwise_dimension(0.0, 0.2, 2, 20);
  const double err0 = f0.value / kDim0 - 1.0;
  o.check(std::abs(err0) <= 0.10, "phi=0 n=20: " + fmt(f0.value) + " (" + fmt(100 * err0, 3) + "%)");
  o.check(std::abs(f0.value - kDim0) < std::abs(f0.value - 1.111), "phi=0 estimate closer to 1.111 than 2.409");
  o.note("phi=0 n=20 j=" + std::to_string(f0.j_min) + ".." + std::to_string(f0.j_max) + ": " + fmt(f0.value) +
         " vs " + fmt(kDim0) + " (" + fmt(100 * err0, 3) + "%)");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> draw(-kPi, kPi);
  for (int i = 0; i < 5; ++i) {
    const double phi = draw(rng);
    const double target = kLog2 / lyapunov_acim_closed(ModelParams(2, 0.2, phi));
    const auto f = pointwise_dimension(phi, 0.2, 2, 30);
    const double err = f.value / target - 1.0;
    o.check(std::abs(err) <= 0.10, "phi=" + fmt(phi) + " n=30: " + fmt(f.value) + " vs " + fmt(target));
    o.note("phi=" + fmt(phi, 4) + ": " + fmt(f.value, 4) + " vs " + fmt(target, 4) + " (" + fmt(100 * err, 3) + "%)");
  }
}

// 10. singular exponent.
void singular(Outcome& o) {
  const double d0 = 0.5;
  std::vector<double> ys0;
  for (int j = 4; j <= 10; ++j) ys0.push_back(d0 * std::ldexp(1.0, -j));
  const auto leb = singular_exponent(1.0, 0.0, 2, 16, d0, ys0, 1.0);
  o.check(std::abs(leb.kappa - 1.0) <= 0.02, "t=0 slope " + fmt(leb.kappa));
  o.check(leb.r_squared >= 0.98, "t=0 R^2 " + fmt(leb.r_squared));

  std::vector<double> ys;
  for (int j = 2; j <= 6; ++j) ys.push_back(d0 * std::ldexp(1.0, -j));
  const double kappa_hat = pointwise_dimension(0.0, 0.2, 2, 20).value;
  const auto fit = singular_exponent(0.0, 0.2, 2, 20, d0, ys, kappa_hat);
  const double err = fit.kappa / kDim0 - 1.0;
  o.check(std::abs(err) <= 0.15, "phi=0 slope " + fmt(fit.kappa));
  o.check(fit.r_squared >= 0.98, "phi=0 R^2 " + fmt(fit.r_squared));
  o.note("t=0: " + fmt(leb.kappa) + " (R^2 " + fmt(leb.r_squared, 5) + "); phi=0,t=0.2: " + fmt(fit.kappa) + " (" +
         fmt(100 * err, 3) + "%, m=" + std::to_string(fit.m) + ", R^2 " + fmt(fit.r_squared, 5) + ")");
}

// 11. structural identities over randomized cases.
void structural(Outcome& o) {
  constexpr int kCases = 1000;
  std::mt19937_64 rng(20240607);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto pick = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  int bad_period = 0, bad_degree = 0, bad_palin = 0, bad_conj = 0;
  for (int i = 0; i < kCases; ++i) {
    const int k = pick(2, 6);
    const ModelParams p(k, uni(0.0, 0.99), uni(-kPi, kPi));
    const double th = uni(-10.0, 10.0);
    if (std::abs(lift_eval(th + kTwoPi, p) - lift_eval(th, p) - kTwoPi * k) > 1e-12 * k * (1 + std::abs(th)))
      ++bad_period;

    const TreeSpec tree(pick(0, 1) ? TreeVariant::rooted : TreeVariant::full, pick(1, 10), 2);
    const DiagonalOrbit orbit(tree, uni(0.0, 0.95));
    const double phi = uni(-kPi, kPi);
    const double expected = kTwoPi * static_cast<double>(tree.vertex_count());
    if (std::abs(orbit.value(phi + kTwoPi) - orbit.value(phi) - expected) > 1e-9 * expected) ++bad_degree;

    const TreeSpec small(pick(0, 1) ? TreeVariant::rooted : TreeVariant::full, pick(1, 3), pick(2, 3));
    const auto poly = partition_poly_recursive(small, mpq_class(pick(0, 99), 100));
    const std::size_t d = poly.coeffs.size() - 1;
    for (std::size_t j = 0; j <= d; ++j)
      if (poly.coeffs[j] != poly.coeffs[d - j]) {
        ++bad_palin;
        break;
      }

    const auto z = enumerate_zeros(small, uni(0.0, 0.95));
    const std::size_t m = z.angles.size();
    const std::size_t paired = m % 2 == 1 ? m - 1 : m;
    bool ok = m % 2 == 0 || z.angles.back() == kPi;
    for (std::size_t j = 0; j < paired; ++j) ok = ok && std::abs(z.angles[j] + z.angles[paired - 1 - j]) <= 1e-11;
    if (!ok) ++bad_conj;
  }
  o.check(bad_period == 0, std::to_string(bad_period) + " periodicity failures");
  o.check(bad_degree == 0, std::to_string(bad_degree) + " degree-identity failures");
  o.check(bad_palin == 0, std::to_string(bad_palin) + " palindrome failures");
  o.check(bad_conj == 0, std::to_string(bad_conj) + " conjugate-symmetry failures");
  o.note(std::to_string(kCases) + " cases per identity");
}

// 12. verify determinism.
void determinism(Outcome& o) {
  VerifyOptions v;
  v.seed = 12345;
  const auto a = run_verification(v);
  const auto b = run_verification(v);
  o.check(a.hash == b.hash, "hash " + a.hash + " vs " + b.hash);
  o.check(a.to_json() == b.to_json(), "report bodies differ");
  o.note("hash " + a.hash + (a.all_passed ? ", all checks passed" : ", some checks failed"));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"recursion vs brute force", recursion_vs_bruteforce},
      {"counting", counting},
      {"gap", gap},
      {"density", density},
      {"rooted = full", rooted_equals_full},
      {"Lyapunov cross-check", lyapunov_cross_check},
      {"ordering", ordering},
      {"pointwise dimension", pointwise},
      {"singular exponent", singular},
      {"structural identities", structural},
      {"determinism", determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.passed) ++failures;
    std::printf("%s %2d %s (%.1fs): %s\n", o.passed ? "PASS" : "FAIL", index, name, secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
