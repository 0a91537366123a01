#include "lyz/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include "lyz/errors.hpp"
#include "lyz/format.hpp"
#include "lyz/parallel.hpp"

namespace lyz {

namespace {

// v = r + 2 pi j with r in [-pi, pi).
void reduce(double v, std::int64_t& turns, double& remainder) {
  auto j = static_cast<std::int64_t>(std::floor((v + kPi) / kTwoPi));
  double r = v - kTwoPi * static_cast<double>(j);
  if (r >= kPi) {
    r -= kTwoPi;
    ++j;
  } else if (r < -kPi) {
    r += kTwoPi;
    --j;
  }
  turns = j;
  remainder = r;
}

void step(const AngularLift& lift, double phi, LiftedAngle& s) {
  const double d = lift.derivative(s.remainder);
  std::int64_t j = 0;
  double r = 0.0;
  reduce(lift(s.remainder, phi), j, r);
  s.turns = s.turns * lift.k() + j;
  s.remainder = r;
  s.slope = d * s.slope + 1.0;
}

// floor((-N - 1) / 2) for N >= 1.
std::int64_t lowest_branch_floor(std::int64_t n) { return n % 2 == 1 ? -(n + 1) / 2 : -n / 2 - 1; }

constexpr std::size_t kChunk = 2048;

class BranchSolver {
 public:
  BranchSolver(const DiagonalOrbit& orbit, double tol, std::int64_t n_total)
      : orbit_(orbit), tol_(tol), n_total_(n_total), first_odd_(n_total % 2 == 1 ? -n_total + 2 : -n_total + 1) {}

  std::int64_t odd_for(std::int64_t index) const { return first_odd_ + 2 * index; }

  // Solves G(phi) = pi * odd_for(index) on (lo, hi]; g_lo, g_hi are G at the
  // bracket ends and only seed the first guess.
  void solve_one(std::int64_t index, double lo, double hi, double g_lo, double g_hi, double& angle,
                 double& residual) const {
    const std::int64_t odd = odd_for(index);
    if (odd == n_total_) {
      // G(pi) = pi |V| exactly by the odd symmetry of the lift.
      angle = kPi;
      const LiftedAngle s = orbit_.sample(kPi);
      residual = std::abs(s.offset_from_odd_multiple(odd)) / s.slope;
      return;
    }
    const double target = kPi * static_cast<double>(odd);
    double x = 0.5 * (lo + hi);
    if (g_hi > g_lo) {
      const double guess = lo + (hi - lo) * (target - g_lo) / (g_hi - g_lo);
      if (guess > lo && guess < hi) x = guess;
    }
    double dx_old = hi - lo;
    double dx = dx_old;
    LiftedAngle s;
    double f = 0.0;
    bool fresh = false;  // s was sampled at the current x
    for (int it = 0; it < 400; ++it) {
      s = orbit_.sample(x);
      f = s.offset_from_odd_multiple(odd);
      fresh = true;
      if (f == 0.0) break;
      if (f < 0.0)
        lo = x;
      else
        hi = x;
      if (std::abs(f / s.slope) <= 1e-3 * tol_) break;
      fresh = false;
      const double newton = x - f / s.slope;
      if (newton > lo && newton < hi && std::abs(2.0 * f) < std::abs(dx_old * s.slope)) {
        dx_old = dx;
        dx = f / s.slope;
        x = newton;
      } else {
        dx_old = dx;
        dx = 0.5 * (hi - lo);
        x = lo + dx;
      }
      if (std::abs(dx) <= 1e-3 * tol_ || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(x)))
        break;
    }
    if (!fresh) {
      s = orbit_.sample(x);
      f = s.offset_from_odd_multiple(odd);
    }
    angle = x;
    residual = std::abs(f) / s.slope;
    if (!(residual <= tol_))
      throw ComputationError("zero enumeration: branch " + std::to_string(odd) + " of " + orbit_.tree().describe() +
                             " failed to converge (residual " + format_double(residual) + ")");
  }

  // Recursive bisection over the branch index range [first, last].
  void solve_range(std::int64_t first, std::int64_t last, double lo, double hi, double g_lo, double g_hi,
                   std::int64_t offset, std::vector<double>& angles, std::vector<double>& residuals) const {
    while (first <= last) {
      const std::int64_t mid = first + (last - first) / 2;
      double& a = angles[static_cast<std::size_t>(mid - offset)];
      double& r = residuals[static_cast<std::size_t>(mid - offset)];
      solve_one(mid, lo, hi, g_lo, g_hi, a, r);
      const double g_mid = kPi * static_cast<double>(odd_for(mid));
      solve_range(first, mid - 1, lo, a, g_lo, g_mid, offset, angles, residuals);
      first = mid + 1;
      lo = a;
      g_lo = g_mid;
    }
  }

  double g_at(std::int64_t index) const { return kPi * static_cast<double>(odd_for(index)); }

 private:
  const DiagonalOrbit& orbit_;
  double tol_;
  std::int64_t n_total_;
  std::int64_t first_odd_;
};

ZeroSet solve_window(const TreeSpec& tree, double t, double a, double b, const ZeroOptions& options) {
  if (!(options.tol > 0.0)) throw ParameterError("zero tolerance must be positive");
  if (!(a >= -kPi && b <= kPi && a <= b)) throw ParameterError("zero window must satisfy -pi <= a <= b <= pi");
  const DiagonalOrbit orbit(tree, t);
  const auto n_total = static_cast<std::int64_t>(zero_count(tree));
  const auto first = static_cast<std::int64_t>(orbit.count_at_most(a));
  const auto end = static_cast<std::int64_t>(orbit.count_at_most(b));

  ZeroSet out{tree, t, {}, {}};
  const auto count = static_cast<std::size_t>(end - first);
  out.angles.assign(count, 0.0);
  out.residuals.assign(count, 0.0);
  if (count == 0) return out;

  const BranchSolver solver(orbit, options.tol, n_total);
  const double g_a = orbit.value(a);
  const double g_b = orbit.value(b);
  if (count <= kChunk) {
    solver.solve_range(first, end - 1, a, b, g_a, g_b, first, out.angles, out.residuals);
    return out;
  }

  // Fixed chunk boundaries keep every solve (and its bracket) independent of
  // the worker count, so output is bit-identical across --workers settings.
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<std::int64_t> boundary;
  for (std::size_t c = 1; c < chunks; ++c) boundary.push_back(first + static_cast<std::int64_t>(c * kChunk));
  {
    // Boundary zeros, solved in sorted order with the previous one as bracket.
    double lo = a;
    for (std::size_t c = 0; c < boundary.size(); ++c) {
      const auto idx = static_cast<std::size_t>(boundary[c] - first);
      solver.solve_one(boundary[c], lo, b, c == 0 ? g_a : solver.g_at(boundary[c - 1]), g_b, out.angles[idx],
                       out.residuals[idx]);
      lo = out.angles[idx];
    }
  }
  parallel_for(chunks, options.workers, [&](std::size_t c) {
    const std::int64_t lo_idx = first + static_cast<std::int64_t>(c * kChunk);
    const std::int64_t hi_idx = std::min<std::int64_t>(end, lo_idx + static_cast<std::int64_t>(kChunk));
    const double lo = c == 0 ? a : out.angles[static_cast<std::size_t>(lo_idx - first)];
    const double hi = c + 1 == chunks ? b : out.angles[static_cast<std::size_t>(hi_idx - first)];
    const double g_lo = c == 0 ? g_a : solver.g_at(lo_idx);
    const double g_hi = c + 1 == chunks ? g_b : solver.g_at(hi_idx);
    const std::int64_t solve_first = c == 0 ? lo_idx : lo_idx + 1;
    solver.solve_range(solve_first, hi_idx - 1, lo, hi, g_lo, g_hi, first, out.angles, out.residuals);
  });
  return out;
}

}  // namespace

double LiftedAngle::offset_from_odd_multiple(std::int64_t odd) const {
  return remainder + kPi * static_cast<double>(2 * turns - odd);
}

DiagonalOrbit::DiagonalOrbit(const TreeSpec& tree, double t)
    : tree_(tree),
      t_(t),
      inner_(tree.k(), t),
      inner_steps_(tree.variant() == TreeVariant::rooted ? tree.level() : tree.level() - 1) {
  if (tree.variant() == TreeVariant::full) outer_.emplace(tree.k() + 1, t);
}

LiftedAngle DiagonalOrbit::sample(double phi) const {
  LiftedAngle s;
  reduce(phi, s.turns, s.remainder);
  s.slope = 1.0;
  for (int i = 0; i < inner_steps_; ++i) step(inner_, phi, s);
  if (outer_) step(*outer_, phi, s);
  return s;
}

std::uint64_t DiagonalOrbit::count_at_most(double phi) const {
  const auto n = static_cast<std::int64_t>(tree_.vertex_count());
  if (phi >= kPi) return static_cast<std::uint64_t>(n);
  if (phi <= -kPi) return 0;
  const LiftedAngle s = sample(phi);
  const std::int64_t c = s.turns - 1 - lowest_branch_floor(n);
  return static_cast<std::uint64_t>(std::clamp<std::int64_t>(c, 0, n));
}

std::uint64_t zero_count(const TreeSpec& tree) { return tree.vertex_count(); }

ZeroSet enumerate_zeros(const TreeSpec& tree, double t, const ZeroOptions& options) {
  validate_temperature(t);
  return solve_window(tree, t, -kPi, kPi, options);
}

ZeroSet enumerate_zeros_in(const TreeSpec& tree, double t, double a, double b, const ZeroOptions& options) {
  validate_temperature(t);
  return solve_window(tree, t, a, b, options);
}

ZeroSet zeros_at_t_one(const TreeSpec& tree) {
  const auto n = static_cast<std::size_t>(zero_count(tree));
  return ZeroSet{tree, 1.0, std::vector<double>(n, kPi), std::vector<double>(n, 0.0)};
}

double min_positive_zero(const ZeroSet& zeros) {
  if (zeros.angles.empty()) throw ParameterError("min_positive_zero: empty zero set");
  for (double a : zeros.angles)
    if (a > 0.0) return a;
  throw ComputationError("min_positive_zero: no positive zero");
}

void write_zeros_csv(std::ostream& out, const ZeroSet& zeros) {
  out << "# lyz zeros v1; tree=" << to_string(zeros.tree.variant()) << "; k=" << zeros.tree.k()
      << "; n=" << zeros.tree.level() << "; t=" << format_double(zeros.t) << "\n";
  out << "index,angle_radians,residual\n";
  for (std::size_t i = 0; i < zeros.angles.size(); ++i)
    out << i << ',' << format_double(zeros.angles[i]) << ',' << format_double(zeros.residuals[i]) << '\n';
}

}  // namespace lyz
