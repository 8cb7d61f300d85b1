#pragma once

#include <limits>

#include "zk/common.hpp"
#include "zk/grid.hpp"

namespace zk {

// Quadrature geometry for the pointwise fractional-difference transform
//
//   (D^b f)(x) = ( int_{|y-x| <= R} |f(x) - f(y)|^2 / |x-y|^{2+2b} dy )^{1/2}.
//
// The disk around each point is split at near_radius: the inner disk is
// integrated in polar coordinates with an r = rho * s^2 substitution (the
// |f(x)-f(y)|^2 ~ |x-y|^2 cancellation makes the radial integrand bounded),
// the outer annulus in log-spaced radial shells.  The angle uses the midpoint
// rule, which is spectrally accurate for the smooth periodic integrand.  Off-
// lattice samples of f come from bilinear interpolation on the periodic grid.
// The same node set serves every grid point, so pointwise inequalities proved
// by Minkowski's inequality hold for the discrete values as well.
struct SteinQuadratureConfig {
  double near_radius = 0.0;  // rho; 0 selects 2 * max(dx, dy)
  double far_radius = 0.0;   // R; 0 selects min(Lx, Ly) / 2
  int radial_panels = 8;     // near-field radial panels (and per-octave far count)
  int angular_panels = 64;   // angular midpoints per radial node
  // The part of the integral beyond R is bounded by
  //   2 sup|f|^2 * (2 pi / (2b)) * R^{-2b}
  // (reported by stein_tail_bound).  If that bound exceeds this tolerance the
  // operation refuses with Err::truncation; the default never refuses and the
  // caller folds the bound into its own error budget.
  double tail_tolerance = std::numeric_limits<double>::infinity();
};

// Closed-form bound on the tail of the squared integral beyond radius R:
// 2 sup|f|^2 * (2 pi / (2b)) * R^{-2b}.
double stein_tail_bound(double sup_abs_f, double b, double R);

// Pointwise D^b f on the grid.  Requires b in (0,1) and a field that is smooth
// at grid scale (Nyquist-band energy fraction below 1e-6, else Err::resolution).
// Throws Err::truncation when the recorded tail bound exceeds the tolerance.
Field2D stein_derivative(const Field2D& f, double b, const SteinQuadratureConfig& cfg = {});

// Single-point evaluation with the same contract; exposed so callers can
// refine the quadrature at one point (oracle duty) without paying for the
// whole grid.
double stein_derivative_at(const Field2D& f, int ix, int iy, double b,
                           const SteinQuadratureConfig& cfg = {});

// Pointwise bound bracket for the cubic phase e^{i t x1^3}:
//   t^{b/3} + t^{(b+1)/3} + t^{b/3} |x1|^b + (t^{1/3+2b/3} + t^{2b/3}) |x1|^{2b}.
// Requires t > 0 (Err::invalid_input otherwise) and b in (0, 1/2].
double stein_phase_bound(double t, double x1, double b);

// Measured D^b(e^{i t x1^3}) at x1, computed through the one-dimensional
// reduction: the phase is constant in the second coordinate, so the planar
// integral collapses to
//   c_b * int |e^{i t x1^3} - e^{i t y^3}|^2 / |x1-y|^{1+2b} dy,
//   c_b = sqrt(pi) Gamma(b+1/2) / Gamma(1+b),
// with |e^{ia}-e^{ic}|^2 evaluated as 2 - 2 cos(a-c) to avoid cancellation.
// The oscillatory far field is integrated over phase-uniform panels out to a
// radius where the integration-by-parts remainder is negligible; the
// non-oscillatory part of the far field is added in closed form.
double stein_phase_value(double t, double x1, double b);

// RHS bracket of the weighted group bound, assembled from the three norms of
// one field:
//   (1 + t^{b/3} + t^{(b+1)/3}) l2
//     + (t^{b/3} + t^{1/3+2b/3} + t^{2b/3}) d2b
//     + wnorm.
// Requires nonnegative norms, t >= 0, b in (0, 1/2].
double weighted_group_bound_rhs(double l2, double d2b, double wnorm, double t, double b);

// Both sides of the p = 2 norm equivalence: jb = ||J^b f||_2 and
// l2_plus_stein = ||f||_2 + ||D^b f||_2, for ratio analysis by the caller.
struct NormEquivalence {
  double jb = 0.0;
  double l2_plus_stein = 0.0;
};
NormEquivalence norm_equivalence_check(const Field2D& f, double b,
                                       const SteinQuadratureConfig& cfg = {});

}  // namespace zk
