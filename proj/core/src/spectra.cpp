#include "lyz/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "json.hpp"
#include "lyz/dynamics.hpp"
#include "lyz/errors.hpp"
#include "lyz/fit.hpp"
#include "lyz/format.hpp"
#include "lyz/measure.hpp"
#include "lyz/parallel.hpp"

namespace lyz {

namespace {

using cplx = std::complex<double>;

cplx ipow(cplx b, int e) {
  cplx r{1.0, 0.0};
  while (e > 0) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e > 0) b *= b;
  }
  return r;
}

void require_below_curve(const ModelParams& p, const char* what) {
  if (!below_phi_e_curve(p.phi(), p.t(), p.k()))
    throw DomainError(std::string(what) + ": (phi, t) = (" + format_double(p.phi()) + ", " + format_double(p.t()) +
                      ") is not strictly below the phi_e curve");
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_error_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

// Solves lift(x) = v on [-pi, pi] with v in [lift(-pi), lift(pi)].
double solve_lift(const AngularLift& lift, double phi, double v) {
  double lo = -kPi;
  double hi = kPi;
  double x = std::clamp((v - phi) / lift.k(), lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double f = lift(x, phi) - v;
    if (f == 0.0) return x;
    if (f < 0.0)
      lo = x;
    else
      hi = x;
    double next = x - f / lift.derivative(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * (1.0 + std::abs(x)) || hi - lo <= 1e-15) return next;
    x = next;
  }
  return x;
}

struct Node {
  double theta;
  double log_sum;
};

class Pullback {
 public:
  Pullback(const ModelParams& p, int depth) : p_(p), lift_(p.k(), p.t()), depth_(depth) {}

  void children(const Node& parent, std::vector<Node>& out) const {
    out.clear();
    const double base = -lift_.k() * kPi + p_.phi();
    const double j0 = std::ceil((base - parent.theta) / kTwoPi);
    for (int i = 0; i < lift_.k(); ++i) {
      const double v = parent.theta + kTwoPi * (j0 + i);
      const double x = std::min(solve_lift(lift_, p_.phi(), v), std::nextafter(kPi, 0.0));
      out.push_back({x, parent.log_sum + std::log(lift_.derivative(x))});
    }
  }

  struct Sums {
    double full = 0.0;   // sum over leaves of the whole-path average
    double below = 0.0;  // sum over leaves of the average below `start_level`
  };

  // Leaves under `node` (at `level`); `start_sum` is log_sum at the batch root.
  Sums leaf_sums(const Node& node, int level, int start_level, double start_sum, bool terminal) const {
    if (level == depth_) {
      if (terminal) {
        const double v = std::log(lift_.derivative(node.theta));
        return {v, v};
      }
      return {node.log_sum / depth_, (node.log_sum - start_sum) / (depth_ - start_level)};
    }
    std::vector<Node> kids;
    children(node, kids);
    Sums s;
    for (const auto& c : kids) {
      const Sums cs = leaf_sums(c, level + 1, start_level, start_sum, terminal);
      s.full += cs.full;
      s.below += cs.below;
    }
    return s;
  }

  std::vector<Node> frontier(int level) const {
    std::vector<Node> nodes{{kPi, 0.0}};
    std::vector<Node> kids;
    for (int d = 0; d < level; ++d) {
      std::vector<Node> next;
      next.reserve(nodes.size() * lift_.k());
      for (const auto& n : nodes) {
        children(n, kids);
        next.insert(next.end(), kids.begin(), kids.end());
      }
      nodes = std::move(next);
    }
    return nodes;
  }

 private:
  ModelParams p_;
  AngularLift lift_;
  int depth_;
};

std::uint64_t leaf_count(int k, int depth) {
  std::uint64_t n = 1;
  for (int i = 0; i < depth; ++i) {
    n *= static_cast<std::uint64_t>(k);
    if (n > kMaxPullbackLeaves)
      throw ParameterError("pullback depth " + std::to_string(depth) + " at k = " + std::to_string(k) +
                           " exceeds the limit of " + std::to_string(kMaxPullbackLeaves) + " preimages");
  }
  return n;
}

struct BatchResult {
  double value = 0.0;
  std::vector<double> batches;
};

// value: uniform average over all leaves. batches: one estimate per subtree
// rooted at batch_level, using only the levels below its root, so each batch
// is a pullback started from a different point.
BatchResult pullback_estimate(const ModelParams& p, int depth, unsigned workers, bool terminal) {
  if (depth < 1) throw ParameterError("pullback depth must be at least 1");
  const std::uint64_t leaves = leaf_count(p.k(), depth);
  const int batch_level = std::clamp(std::min(6, depth / 2), depth == 1 ? 0 : 1, depth - 1);
  const Pullback pb(p, depth);
  const auto roots = pb.frontier(batch_level);
  const double per_batch = static_cast<double>(leaves) / static_cast<double>(roots.size());
  std::vector<double> full(roots.size());
  BatchResult out;
  out.batches.resize(roots.size());
  parallel_for(roots.size(), workers, [&](std::size_t i) {
    const auto s = pb.leaf_sums(roots[i], batch_level, batch_level, roots[i].log_sum, terminal);
    full[i] = s.full / per_batch;
    out.batches[i] = s.below / per_batch;
  });
  double total = 0.0;
  for (double f : full) total += f;
  out.value = total / static_cast<double>(roots.size());
  return out;
}

}  // namespace

double lyapunov_acim_closed(const ModelParams& p) {
  const cplx w = disk_fixed_point(p);
  const double t = p.t();
  return std::log(p.k() * (1.0 - t * t) / std::norm(1.0 + w * t));
}

double lyapunov_acim_2pi_form(const ModelParams& p) {
  const cplx w = disk_fixed_point(p);
  const double t = p.t();
  const cplx num = static_cast<double>(p.k()) * (1.0 - t * t) * w * (1.0 - w * t);
  const cplx den = (w + t) * (1.0 + w * t) * (t - w);
  return kTwoPi * std::log(std::abs(num / den));
}

BirkhoffEstimate lyapunov_acim_birkhoff(const ModelParams& p, const BirkhoffOptions& options) {
  require_below_curve(p, "lyapunov_acim_birkhoff");
  if (options.seeds == 0 || options.length == 0) throw ParameterError("Birkhoff average needs seeds and length > 0");
  const int k = p.k();
  const double t = p.t();
  const cplx z = p.z();
  const double scale = k * (1.0 - t * t);
  constexpr std::uint64_t kBlock = 16;

  BirkhoffEstimate out;
  out.per_seed.assign(options.seeds, 0.0);
  parallel_for(options.seeds, options.workers, [&](std::size_t s) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.base_seed), static_cast<std::uint32_t>(options.base_seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    cplx w = std::polar(1.0, angle(rng));
    const auto advance = [&] {
      w = z * ipow((w + t) / (1.0 + t * w), k);
      w /= std::abs(w);
    };
    for (std::uint64_t i = 0; i < options.burn_in; ++i) advance();
    double acc = 0.0;
    double prod = 1.0;
    for (std::uint64_t i = 0; i < options.length; ++i) {
      prod *= scale / std::norm(1.0 + t * w);
      advance();
      if ((i + 1) % kBlock == 0) {
        acc += std::log(prod);
        prod = 1.0;
      }
    }
    acc += std::log(prod);
    out.per_seed[s] = acc / static_cast<double>(options.length);
  });
  out.value = mean_of(out.per_seed);
  out.std_error = std_error_of(out.per_seed, out.value);
  out.converged = out.std_error <= options.max_std_error;
  return out;
}

Estimate lyapunov_acim(const ModelParams& p, AcimMethod method, const BirkhoffOptions& options) {
  if (method == AcimMethod::closed) return {lyapunov_acim_closed(p), 0.0};
  const auto b = lyapunov_acim_birkhoff(p, options);
  if (!b.converged)
    throw ComputationError("Birkhoff average did not converge: std error " + format_double(b.std_error));
  return {b.value, b.std_error};
}

std::vector<double> lift_preimages(const ModelParams& p, double theta) {
  std::vector<Node> kids;
  Pullback(p, 1).children({theta, 0.0}, kids);
  std::vector<double> out;
  for (const auto& c : kids) out.push_back(c.theta);
  return out;
}

Estimate lyapunov_mme(const ModelParams& p, int depth, unsigned workers) {
  require_below_curve(p, "lyapunov_mme");
  const auto r = pullback_estimate(p, depth, workers, false);
  return {r.value, std_error_of(r.batches, mean_of(r.batches))};
}

double lyapunov_mme_terminal(const ModelParams& p, int depth, unsigned workers) {
  require_below_curve(p, "lyapunov_mme_terminal");
  return pullback_estimate(p, depth, workers, true).value;
}

double support_margin(double phi, double t, int k) {
  validate_branching(k);
  validate_temperature(t);
  if (t <= critical_temperature(k)) return kPi;
  const double a = std::abs(wrap_angle(phi));
  const double e = phi_e(t, k);
  return std::min(a - e, kTwoPi - a - e);
}

DimensionFit pointwise_dimension(double phi, double t, int k, int n, const DimensionOptions& options) {
  if (options.j_min < 1 || options.j_max < 0 || (options.j_max != 0 && options.j_max < options.j_min))
    throw ParameterError("pointwise_dimension: need 1 <= j_min <= j_max (j_max = 0 means as fine as resolved)");
  const double margin = support_margin(phi, t, k);
  if (!(margin > 0.0)) throw DomainError("pointwise_dimension: phi lies in the zero-free arc");
  const TreeSpec tree(options.variant, n, k);
  const EmpiricalMeasure em(tree, t);
  const double need = static_cast<double>(options.min_zeros) / static_cast<double>(em.total());

  DimensionFit fit;
  const int j_cap = options.j_max == 0 ? 60 : options.j_max;
  std::vector<double> xs;
  std::vector<double> ys;
  int first = 0;
  int last = 0;
  for (int j = options.j_min; j <= j_cap; ++j) {
    const double delta = std::ldexp(1.0, -j);
    if (delta > margin) continue;
    const double mass = em.arc_mass(phi, delta);
    if (mass < need) break;
    if (first == 0) first = j;
    last = j;
    fit.deltas.push_back(delta);
    fit.masses.push_back(mass);
    xs.push_back(std::log(2.0 * delta));
    ys.push_back(std::log(mass));
  }
  if (xs.size() < 3)
    throw ComputationError("pointwise_dimension: only " + std::to_string(xs.size()) +
                           " resolvable scales at level " + std::to_string(n) + "; increase n");
  fit.j_min = first;
  fit.j_max = last;
  if (first != options.j_min || (options.j_max != 0 && last != options.j_max))
    fit.warning = "scale range narrowed to 2^-" + std::to_string(first) + " .. 2^-" + std::to_string(last) +
                  " (support margin " + format_double(margin) + ", resolution " + std::to_string(options.min_zeros) +
                  " zeros)";
  const auto lf = linear_fit(xs, ys);
  fit.value = lf.slope;
  fit.r_squared = lf.r_squared;
  return fit;
}

std::vector<KappaRow> kappa_curve(double t, int k, std::span<const double> phi_grid) {
  validate_branching(k);
  if (!(t > 0.0 && t < 1.0)) throw ParameterError("kappa_curve needs 0 < t < 1");
  std::vector<KappaRow> rows;
  rows.reserve(phi_grid.size());
  for (double phi : phi_grid) {
    KappaRow r;
    r.phi = wrap_angle(phi);
    r.in_support = below_phi_e_curve(r.phi, t, k);
    if (r.in_support) {
      const ModelParams p(k, t, r.phi);
      r.w_disk = disk_fixed_point(p);
      r.chi = lyapunov_acim_closed(p);
      r.kappa = std::log(static_cast<double>(k)) / r.chi;
    }
    rows.push_back(r);
  }
  return rows;
}

void write_kappa_csv(std::ostream& out, double t, int k, const std::vector<KappaRow>& rows) {
  out << "# lyz kappa v1; k=" << k << "; t=" << format_double(t) << "\n";
  out << "phi,status,w_disk_re,w_disk_im,chi,kappa\n";
  for (const auto& r : rows) {
    out << format_double(r.phi) << ',';
    if (r.in_support)
      out << "ok," << format_double(r.w_disk.real()) << ',' << format_double(r.w_disk.imag()) << ','
          << format_double(r.chi) << ',' << format_double(r.kappa) << '\n';
    else
      out << "no-support,,,,\n";
  }
}

SpectralReport spectral_report(const ModelParams& p, const SpectralOptions& options) {
  require_below_curve(p, "spectral_report");
  SpectralReport r;
  r.phi = p.phi();
  r.t = p.t();
  r.k = p.k();
  r.chi_acim_closed = lyapunov_acim_closed(p);
  r.chi_acim_2pi_form = lyapunov_acim_2pi_form(p);
  r.chi_acim_birkhoff = lyapunov_acim_birkhoff(p, options.birkhoff);
  r.chi_mme = lyapunov_mme(p, options.mme_depth, options.birkhoff.workers);
  r.dim_pointwise = pointwise_dimension(p.phi(), p.t(), p.k(), options.dimension_level, options.dimension);
  r.kappa = std::log(static_cast<double>(p.k())) / r.chi_acim_closed;
  r.hd_mme = std::log(static_cast<double>(p.k())) / r.chi_mme.value;
  return r;
}

void write_spectral_json(std::ostream& out, const SpectralReport& r) {
  // nlohmann prints the shortest representation that round-trips.
  const auto num = [](double v) { return nlohmann::ordered_json(v); };
  nlohmann::ordered_json j;
  j["schema"] = "lyz.spectra.v1";
  j["phi"] = num(r.phi);
  j["t"] = num(r.t);
  j["k"] = r.k;
  j["chi_acim_closed"] = num(r.chi_acim_closed);
  j["chi_acim_2pi_form"] = num(r.chi_acim_2pi_form);
  j["chi_acim_birkhoff"] = {{"value", num(r.chi_acim_birkhoff.value)},
                            {"std_error", num(r.chi_acim_birkhoff.std_error)},
                            {"converged", r.chi_acim_birkhoff.converged}};
  j["chi_mme"] = {{"value", num(r.chi_mme.value)}, {"std_error", num(r.chi_mme.std_error)}};
  auto deltas = nlohmann::ordered_json::array();
  auto masses = nlohmann::ordered_json::array();
  for (double d : r.dim_pointwise.deltas) deltas.push_back(num(d));
  for (double m : r.dim_pointwise.masses) masses.push_back(num(m));
  j["dim_pointwise"] = {{"value", num(r.dim_pointwise.value)},
                        {"r_squared", num(r.dim_pointwise.r_squared)},
                        {"deltas", deltas},
                        {"masses", masses},
                        {"warning", r.dim_pointwise.warning}};
  j["kappa"] = num(r.kappa);
  j["hd_mme"] = num(r.hd_mme);
  out << j.dump(2) << '\n';
}

}  // namespace lyz
