#pragma once

// Free energy and magnetization from the zero measure (logarithmic potential)
// and from the conditional partition-function recursion, plus the radial
// critical exponent from the singular part of the potential integral.
// Units: J = 1, T = -2 / ln t.

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "lyz/tree.hpp"
#include "lyz/zeros.hpp"

namespace lyz {

/// Limiting |E| / |V| used in the potential formula. Every finite tree has
/// |E| = |V| - 1, so the limit is 1.
double edge_vertex_ratio(const TreeSpec& tree);

/// -2T (1/N) sum log|z - zeta_i| + T (log|z| + log t). Throws DomainError
/// when z sits on a zero (the potential is infinite there).
double free_energy_electrostatic(std::complex<double> z, const ZeroSet& zeros);
double free_energy_electrostatic(std::complex<double> z, double t, int k, int n,
                                 TreeVariant variant = TreeVariant::rooted, unsigned workers = 0);

/// -(2T / N) log|Z_n(z)| from the conditional pair recursion with a running
/// log scale. Uses the exact |E| = N - 1, so it differs from the potential
/// formula by T log t / N. Throws ComputationError when |Z+ + Z-| cancels
/// below 1e-12 of its parts.
double free_energy_recursive(std::complex<double> z, double t, int k, int n,
                             TreeVariant variant = TreeVariant::rooted);

/// -4z (1/N) sum 1/(z - zeta_i) + 2. Throws DomainError on the support:
/// ||z| - 1| < 1e-9 outside the zero-free arc.
std::complex<double> magnetization(std::complex<double> z, const ZeroSet& zeros, int k);
std::complex<double> magnetization(std::complex<double> z, double t, int k, int n,
                                   TreeVariant variant = TreeVariant::rooted, unsigned workers = 0);

/// Symmetric mass function Phi(zeta) = mu([phi - zeta, phi + zeta]).
using MassFunction = std::function<double(double)>;

/// Largest integer m with 2m < kappa.
int regular_order(double kappa);

struct QuadratureOptions {
  double tol = 1e-8;
  unsigned max_depth = 10;
};

/// int_0^delta0 zeta Phi / (zeta^2 + y^2) dzeta.
double h_total(const MassFunction& mass, double y, double delta0, const QuadratureOptions& q = {});
/// int_0^delta0 zeta Phi / (zeta^2 + y^2) (y / zeta)^{2m+2} dzeta, split at zeta = y.
double h_singular(const MassFunction& mass, double y, double delta0, int m, const QuadratureOptions& q = {});
/// int_0^delta0 Phi / zeta^{2j+1} dzeta for j = 0..m.
std::vector<double> regular_coefficients(const MassFunction& mass, double delta0, int m,
                                         const QuadratureOptions& q = {});
/// sum_j (-1)^j y^{2j} coefficient_j; h_total = h_regular + (-1)^{m+1} h_singular.
double h_regular(std::span<const double> coefficients, double y);

struct SingularOptions {
  TreeVariant variant = TreeVariant::rooted;
  QuadratureOptions quadrature;
  double min_r_squared = 0.98;
};

struct SingularFit {
  double kappa = 0.0;
  double r_squared = 0.0;
  int m = 0;
  bool stable = false;
  std::vector<double> ys;
  std::vector<double> h_sing;
};

/// Log-log slope of h_singular(y) over y_grid for the level-n zero measure
/// around phi. m is derived from kappa_hat (a prior, e.g. the pointwise
/// dimension). stable is false when R^2 < min_r_squared.
SingularFit singular_exponent(double phi, double t, int k, int n, double delta0, std::span<const double> y_grid,
                              double kappa_hat, const SingularOptions& options = {});

/// Same fit for an arbitrary mass function.
SingularFit singular_exponent(const MassFunction& mass, double delta0, std::span<const double> y_grid,
                              double kappa_hat, const SingularOptions& options = {});

struct IntegrationByPartsCheck {
  double atom_sum = 0.0;      // int f dPhi over [0, delta0] as a sum over zeros
  double by_parts = 0.0;      // f(delta0) Phi(delta0) - f(0) Phi(0) - int f' Phi
  double quadrature_error = 0.0;
};

/// f(zeta) = log(zeta^2 + y^2) against the level-n zero measure around phi.
IntegrationByPartsCheck integration_by_parts_check(double phi, double t, int k, int n, double y, double delta0,
                                                   const SingularOptions& options = {});

/// CSV: y,h_sing,fit
void write_singular_csv(std::ostream& out, const SingularFit& fit);

/// CSV: r,f_electrostatic,f_recursive at z = r e^{i phi}.
void write_radial_scan_csv(std::ostream& out, double phi, double t, int k, int n, std::span<const double> radii,
                           TreeVariant variant = TreeVariant::rooted, unsigned workers = 0);

}  // namespace lyz
