#pragma once

// Lyapunov exponents of the circle map for its absolutely continuous
// invariant measure (ACIM) and its measure of maximal entropy (MME), local
// dimension of the zero measure, and the critical exponent kappa = log k / chi.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lyz/params.hpp"
#include "lyz/tree.hpp"

namespace lyz {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// log(k (1 - t^2) / |1 + w_D t|^2), w_D the attracting disk fixed point.
/// Throws DomainError above the phi_e curve.
double lyapunov_acim_closed(const ModelParams& p);

/// 2 pi log|k(1-t^2) w (1 - w t) / ((w + t)(1 + w t)(t - w))| at w = w_D.
/// Kept for comparison only; it is not the exponent (it gives 2 pi log 2 at
/// t -> 0 instead of log 2).
double lyapunov_acim_2pi_form(const ModelParams& p);

struct BirkhoffOptions {
  std::uint64_t burn_in = 1000;
  std::uint64_t length = 1000000;
  unsigned seeds = 32;
  std::uint64_t base_seed = 20240607;
  /// Estimates with std_error above this are reported as non-converged.
  double max_std_error = 1e-2;
  unsigned workers = 0;
};

struct BirkhoffEstimate : Estimate {
  bool converged = true;
  std::vector<double> per_seed;
};

/// Time average of log|B'| along orbits from uniform random starts, averaged
/// over independent seeds; std_error from the seed-to-seed spread.
BirkhoffEstimate lyapunov_acim_birkhoff(const ModelParams& p, const BirkhoffOptions& options = {});

enum class AcimMethod { closed, birkhoff };

Estimate lyapunov_acim(const ModelParams& p, AcimMethod method, const BirkhoffOptions& options = {});

/// Preimage trees beyond this many leaves are refused.
inline constexpr std::uint64_t kMaxPullbackLeaves = std::uint64_t{1} << 24;

/// Uniform average over the k^depth depth-level preimages x of theta = pi of
/// (1/depth) sum_{i < depth} log L'(f^i x). std_error comes from batch means:
/// each subtree rooted at depth b = min(6, depth / 2) gives its own estimate
/// from the depth - b levels below its root.
Estimate lyapunov_mme(const ModelParams& p, int depth, unsigned workers = 0);

/// Mean of log L' over the depth-level preimages only.
double lyapunov_mme_terminal(const ModelParams& p, int depth, unsigned workers = 0);

/// The k preimages of theta under the lift, in [-pi, pi), ascending.
std::vector<double> lift_preimages(const ModelParams& p, double theta);

struct DimensionOptions {
  TreeVariant variant = TreeVariant::rooted;
  /// Requested scale exponents: delta_j = 2^-j for j_min <= j <= j_max.
  int j_min = 1;
  int j_max = 0;  // 0: as fine as the zero count resolves
  /// Each scale must hold at least this many zeros.
  std::uint64_t min_zeros = 50;
};

struct DimensionFit {
  double value = 0.0;
  double r_squared = 0.0;
  std::vector<double> deltas;
  std::vector<double> masses;
  int j_min = 0;
  int j_max = 0;
  /// Non-empty when the requested range had to be narrowed.
  std::string warning;
};

/// Slope of log mu([phi - delta, phi + delta]) against log 2 delta for the
/// level-n empirical measure. Scales that leave the support or hold fewer
/// than min_zeros zeros are dropped. Throws ComputationError when fewer than
/// three scales remain, DomainError when phi is in the zero-free arc.
DimensionFit pointwise_dimension(double phi, double t, int k, int n, const DimensionOptions& options = {});

/// Largest delta with [phi - delta, phi + delta] inside the support:
/// pi for t <= t_c, |phi| - phi_e(t) above it.
double support_margin(double phi, double t, int k);

struct KappaRow {
  double phi = 0.0;
  bool in_support = false;
  std::complex<double> w_disk;
  double chi = 0.0;
  double kappa = 0.0;
};

/// Per phi: disk fixed point, closed-form chi and kappa = log k / chi.
/// Points at or inside the zero-free arc are returned with in_support false.
std::vector<KappaRow> kappa_curve(double t, int k, std::span<const double> phi_grid);

/// CSV: phi,status,w_disk_re,w_disk_im,chi,kappa; status is ok or no-support.
void write_kappa_csv(std::ostream& out, double t, int k, const std::vector<KappaRow>& rows);

struct SpectralOptions {
  BirkhoffOptions birkhoff;
  int mme_depth = 16;
  int dimension_level = 16;
  DimensionOptions dimension;
};

struct SpectralReport {
  double phi = 0.0;
  double t = 0.0;
  int k = 2;
  double chi_acim_closed = 0.0;
  double chi_acim_2pi_form = 0.0;
  BirkhoffEstimate chi_acim_birkhoff;
  Estimate chi_mme;
  DimensionFit dim_pointwise;
  double kappa = 0.0;
  double hd_mme = 0.0;
};

SpectralReport spectral_report(const ModelParams& p, const SpectralOptions& options = {});

void write_spectral_json(std::ostream& out, const SpectralReport& report);

}  // namespace lyz
