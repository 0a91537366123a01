#include "lyz/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lyz/dynamics.hpp"
#include "lyz/errors.hpp"
#include "lyz/format.hpp"
#include "lyz/free_energy.hpp"
#include "lyz/measure.hpp"
#include "lyz/partition.hpp"
#include "lyz/spectra.hpp"
#include "lyz/zeros.hpp"

namespace lyz {

namespace {

using Outcome = std::pair<bool, std::string>;

class Suite {
 public:
  void run(const std::string& name, const std::function<Outcome()>& body) {
    CheckResult r{name, false, {}};
    try {
      auto [ok, detail] = body();
      r.passed = ok;
      r.detail = std::move(detail);
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  }
  std::vector<CheckResult> results;
};

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

std::string fmt(double v) { return format_double(v); }

nlohmann::ordered_json body_json(const VerifyReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = "lyz.verify.v1";
  j["mode"] = r.quick ? "quick" : "full";
  j["seed"] = r.seed;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = std::move(checks);
  j["all_passed"] = r.all_passed;
  return j;
}

}  // namespace

std::string VerifyReport::to_json() const {
  auto j = body_json(*this);
  j["hash"] = hash;
  return j.dump(2) + "\n";
}

VerifyReport run_verification(const VerifyOptions& options) {
  Suite s;
  const bool quick = options.quick;
  const unsigned workers = options.workers;

  s.run("lift_periodicity", [&] {
    auto rng = make_rng(options.seed, 1);
    std::uniform_real_distribution<double> th(-10.0, 10.0), ph(-kPi, kPi), tt(0.0, 0.99);
    std::uniform_int_distribution<int> kk(2, 6);
    double worst = 0.0;
    const int cases = quick ? 1000 : 10000;
    for (int i = 0; i < cases; ++i) {
      const int k = kk(rng);
      const AngularLift lift(k, tt(rng));
      const double x = th(rng), phi = ph(rng);
      worst = std::max(worst, std::abs(lift(x + kTwoPi, phi) - lift(x, phi) - kTwoPi * k) / (1.0 + std::abs(x)));
    }
    return Outcome{worst <= 1e-12, "max scaled deviation " + fmt(worst)};
  });

  s.run("orbit_degree_identity", [&] {
    auto rng = make_rng(options.seed, 2);
    std::uniform_real_distribution<double> tt(0.0, 0.95), ph(-kPi, kPi);
    double worst = 0.0;
    for (int i = 0; i < (quick ? 200 : 2000); ++i) {
      const int n = 1 + static_cast<int>(rng() % 8);
      const TreeSpec tree = (rng() & 1) ? TreeSpec::rooted(n, 2) : TreeSpec::full(n, 2);
      const DiagonalOrbit g(tree, tt(rng));
      const double phi = ph(rng);
      const auto a = g.sample(phi);
      const auto b = g.sample(phi + kTwoPi);
      const double lhs = static_cast<double>(b.turns - a.turns) * kTwoPi + (b.remainder - a.remainder);
      worst = std::max(worst, std::abs(lhs / (kTwoPi * static_cast<double>(tree.vertex_count())) - 1.0));
    }
    return Outcome{worst <= 1e-12, "max relative deviation " + fmt(worst)};
  });

  s.run("zero_counts", [&] {
    for (int k = 2; k <= 3; ++k)
      for (int n = 1; n <= (quick ? 4 : 6); ++n)
        for (const auto& tree : {TreeSpec::rooted(n, k), TreeSpec::full(n, k)}) {
          const auto z = enumerate_zeros(tree, 0.3);
          if (z.angles.size() != tree.vertex_count()) return Outcome{false, tree.describe()};
        }
    return Outcome{true, "zero count equals |V| for k in {2,3}"};
  });

  s.run("oracle_equivalence", [&] {
    double worst = 0.0, modulus = 0.0;
    for (const char* tq : {"1/5", "1/2"})
      for (int n = 1; n <= (quick ? 2 : 3); ++n) {
        const mpq_class t = parse_rational(tq);
        const TreeSpec tree = TreeSpec::rooted(n, 2);
        const auto roots = poly_roots_on_circle(partition_poly_recursive(tree, t));
        const auto zeros = enumerate_zeros(tree, to_double(t));
        if (roots.size() != zeros.angles.size()) return Outcome{false, "size mismatch at " + tree.describe()};
        for (std::size_t i = 0; i < roots.size(); ++i) {
          worst = std::max(worst, std::abs(roots[i].angle - zeros.angles[i]));
          modulus = std::max(modulus, roots[i].modulus_error);
        }
      }
    return Outcome{worst <= 1e-8 && modulus <= 1e-9, "angle " + fmt(worst) + ", modulus " + fmt(modulus)};
  });

  s.run("recursion_vs_bruteforce", [&] {
    const mpq_class t = parse_rational("1/5");
    std::vector<TreeSpec> trees{TreeSpec::rooted(0, 2), TreeSpec::rooted(1, 2), TreeSpec::rooted(2, 2),
                                TreeSpec::full(1, 2), TreeSpec::full(2, 2), TreeSpec::rooted(1, 3)};
    if (!quick) trees.insert(trees.end(), {TreeSpec::rooted(3, 2), TreeSpec::full(2, 3), TreeSpec::rooted(2, 3)});
    for (const auto& tree : trees) {
      const auto a = partition_poly_recursive(tree, t);
      const auto b = partition_poly_bruteforce(tree, t, workers);
      if (a.coeffs != b.coeffs) return Outcome{false, "mismatch at " + tree.describe()};
      for (std::size_t j = 0; j < a.coeffs.size(); ++j)
        if (a.coeffs[j] != a.coeffs[a.coeffs.size() - 1 - j] || a.coeffs[j] <= 0)
          return Outcome{false, "palindrome/positivity at " + tree.describe()};
    }
    return Outcome{true, std::to_string(trees.size()) + " trees identical"};
  });

  s.run("phi_e_tangency", [&] {
    const double a = phi_e(0.5, 2), b = phi_e(0.9, 2);
    return Outcome{std::abs(a - 0.308) <= 0.01 && std::abs(b - 1.873) <= 0.01, fmt(a) + ", " + fmt(b)};
  });

  s.run("gap_respected", [&] {
    double worst = kPi;
    for (double t : {0.4, 0.5, 0.7, 0.9})
      for (int n = 1; n <= (quick ? 8 : 12); ++n)
        for (const auto& tree : {TreeSpec::rooted(n, 2), TreeSpec::full(n, 2)})
          worst = std::min(worst, min_positive_zero(enumerate_zeros(tree, t, {1e-12, workers})) - phi_e(t, 2));
    return Outcome{worst >= -1e-6, "min(first zero - phi_e) " + fmt(worst)};
  });

  s.run("conjugate_symmetry", [&] {
    double worst = 0.0;
    for (double t : {0.2, 0.5, 0.8}) {
      const auto z = enumerate_zeros(TreeSpec::rooted(quick ? 8 : 12, 2), t, {1e-12, workers});
      const auto& a = z.angles;
      // a ascending with +pi last; the rest pairs as a[i] = -a[m - 1 - i].
      const std::size_t m = a.size() - (a.back() == kPi ? 1 : 0);
      for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(a[i] + a[m - 1 - i]));
    }
    return Outcome{worst <= 1e-10, "max |a_i + a_{-i}| " + fmt(worst)};
  });

  s.run("cdf_matches_enumeration", [&] {
    auto rng = make_rng(options.seed, 3);
    std::uniform_real_distribution<double> ph(-kPi, kPi);
    const TreeSpec tree = TreeSpec::full(quick ? 6 : 10, 2);
    const auto zeros = enumerate_zeros(tree, 0.45);
    const EmpiricalMeasure em(tree, 0.45);
    for (int i = 0; i < 1000; ++i) {
      const double phi = ph(rng);
      const auto expect = static_cast<std::uint64_t>(
          std::upper_bound(zeros.angles.begin(), zeros.angles.end(), phi) - zeros.angles.begin());
      if (em.count_at_most(phi) != expect) return Outcome{false, "count mismatch at phi " + fmt(phi)};
    }
    return Outcome{true, "1000 random queries agree"};
  });

  s.run("lyapunov_closed_vs_birkhoff", [&] {
    BirkhoffOptions bo;
    bo.workers = workers;
    bo.base_seed = options.seed;
    if (quick) {
      bo.length = 100000;
      bo.seeds = 8;
    }
    const ModelParams p(2, 0.2, 0.0);
    const double closed = lyapunov_acim_closed(p);
    const auto b = lyapunov_acim_birkhoff(p, bo);
    const bool ok = std::abs(closed - b.value) <= 2e-3 + 3.0 * b.std_error && std::abs(closed - 0.6239) <= 1e-3;
    return Outcome{ok, "closed " + fmt(closed) + ", birkhoff " + fmt(b.value) + " +- " + fmt(b.std_error)};
  });

  s.run("lyapunov_ordering", [&] {
    const ModelParams p(2, 0.5, 2.0);
    const double acim = lyapunov_acim_closed(p);
    const auto mme = lyapunov_mme(p, quick ? 12 : 16, workers);
    const bool ok = acim < std::log(2.0) && mme.value - std::log(2.0) > 5.0 * mme.std_error;
    return Outcome{ok, "acim " + fmt(acim) + ", mme " + fmt(mme.value) + " +- " + fmt(mme.std_error)};
  });

  s.run("free_energy_cross_method", [&] {
    const int n = quick ? 10 : 16;
    double worst = 0.0;
    for (double t : {0.2, 0.5}) {
      const auto zeros = enumerate_zeros(TreeSpec::rooted(n, 2), t, {1e-12, workers});
      for (std::complex<double> z : {std::complex<double>(2.0, 0.0), std::complex<double>(0.3, 0.2),
                                     std::polar(5.0, 2.5)}) {
        const double fe = free_energy_electrostatic(z, zeros);
        const double fr = free_energy_recursive(z, t, 2, n);
        worst = std::max(worst, std::abs(fe - fr) / (1.0 + std::abs(fe)));
      }
    }
    return Outcome{worst <= 1e-3, "max scaled difference " + fmt(worst)};
  });

  s.run("magnetization_limits", [&] {
    const auto zeros = enumerate_zeros(TreeSpec::rooted(8, 2), 0.5);
    const auto lo = magnetization({1e-9, 0.0}, zeros, 2);
    const auto hi = magnetization({1e9, 0.0}, zeros, 2);
    const double a = std::abs(lo - 2.0), b = std::abs(hi + 2.0);
    return Outcome{a <= 1e-6 && b <= 1e-6, fmt(a) + ", " + fmt(b)};
  });

  VerifyReport r;
  r.quick = quick;
  r.seed = options.seed;
  r.checks = std::move(s.results);
  r.all_passed = std::all_of(r.checks.begin(), r.checks.end(), [](const CheckResult& c) { return c.passed; });
  r.hash = hex64(fnv1a64(body_json(r).dump()));
  return r;
}

}  // namespace lyz
