#pragma once

#include <array>
#include <vector>

#include "zk/grid.hpp"

namespace zk {

// ---------------------------------------------------------------------------
// Weighted L2 norms, Sobolev norms, truncated weights, mixed space-time
// norms, the ten-component trajectory norm, and the interpolation / Leibniz
// inequality evaluators.
// ---------------------------------------------------------------------------

// Weight multiplying |u|^2 inside the L2 integral:
//   polynomial(r)    -> (1 + x^2 + y^2)^r
//   absolute_sum(b)  -> (|x| + |y|)^(2b)
//   truncated(N, s)  -> (w_N(sqrt(x^2 + y^2)))^(2s), bounded by (2N)^(2s)
struct WeightSpec {
  enum class Kind { polynomial, absolute_sum, truncated };
  Kind kind = Kind::polynomial;
  double order = 0.0;  // r, b, or s per the kind
  int N = 1;           // truncated only; positive

  static WeightSpec polynomial(double r) { return {Kind::polynomial, r, 1}; }
  static WeightSpec absolute_sum(double b) { return {Kind::absolute_sum, b, 1}; }
  static WeightSpec truncated(int N, double s) { return {Kind::truncated, s, N}; }
};

// Pointwise weight value; validates the spec (truncated needs N >= 1).
double weight_value(const WeightSpec& w, double x, double y);

// sqrt( sum w(x_i, y_j) |u|^2 dx dy ) over the periodic grid.  A growing
// weight (polynomial r > 0 or absolute_sum b > 0) requires the field to be
// small near the box boundary (relative magnitude below 1e-6), otherwise
// the truncated-domain surrogate of the plane integral is meaningless and
// Err::precondition is thrown.  For the absolute_sum weight the cell sum is
// augmented with the closed-form derivative-jump correction along the axis
// node lines (the weight has a gradient kink across x = 0 and y = 0), which
// restores the accuracy the plain trapezoid rule loses to the kink.
double weighted_l2_norm(const Field2D& f, const WeightSpec& w);

// The truncated weight w_N:
//   w_N(r) = sqrt(1 + r^2)        for |r| <= N,
//          = 2N                   for |r| >= 3N,
// and a smooth nondecreasing transition in between, built by integrating
// w' = g'(u) H(u) + c B(u) where g = sqrt(1+u^2), H is a smooth step that is
// 1 (to all orders) at u = N and 0 from u = 2N on, B is a smooth bump
// vanishing to all orders at both region ends, and c >= 0 closes the value
// gap so that w(3N) = 2N exactly.  Monotone because both terms are >= 0;
// derivative bounds |w^(j)| <= c_j / w^(j-1) hold with N-independent c_j.
double truncated_weight_value(int N, double r);

// || (1 + xi^2 + eta^2)^(s/2) f_hat ||_2 via the frequency-side sum.
// s < 0 -> Err::unsupported.
double sobolev_norm(const Field2D& f, double s);

// A time-indexed family of snapshots on one grid.  times are strictly
// increasing with times[0] = 0.
struct Trajectory {
  Grid2D grid;
  std::vector<double> times;
  std::vector<Field2D> snapshots;
};

// Throws Err::invalid_input unless the trajectory is well formed.
void check_trajectory(const Trajectory& traj);

// Nested mixed norms over {x, y, t} with per-axis exponent 2 or infinity,
// evaluated innermost (last element) first.  L2 in x or y is the periodic
// cell sum, L2 in t the trapezoid over the stored times, L-infinity the max
// over samples.  The exponent list must name each axis exactly once and its
// first entry must match outer_axis.
enum class Axis { x, y, t };
struct AxisExponent {
  Axis axis;
  double p;  // 2.0 or INFINITY
};
double mixed_norm(const Trajectory& traj, Axis outer_axis,
                  const std::vector<AxisExponent>& spec);

// The ten components of the trajectory norm and their sum.
struct NormReport {
  std::array<double, 10> component{};
  double total = 0.0;
};

// component[0] = sup_T H^s, component[1..2] = x-local smoothing norms of
// d_x v (D_x^s, D_y^s), component[3] = L2_T sup_xy of d_x v,
// component[4] = L2_x sup_yT of v, component[5..7] = the y-counterparts,
// component[8] = L2_y sup_xT of v, component[9] = sup_T of the
// (|x|+|y|)^s-weighted L2 norm.  total is the sum.  When s = 1 the
// fractional factors D_x^s, D_y^s are replaced by plain d_x, d_y.
// Requires s > 3/4.
NormReport triple_norm(const Trajectory& traj, double s);

// Two-sided data for the weighted interpolation inequality
//   || W^(theta b) J^((1-theta) a) f ||_2 <= C || W^b f ||_2^theta
//                                              || J^a f ||_2^(1-theta),
// with W = (1 + x^2 + y^2)^(1/2) (bracket) or W = w_N(sqrt(x^2+y^2))
// (truncated).  Returns (lhs, rhs_product); the constant C is whatever
// ratio the caller observes.  Requires a, b > 0 and theta in (0,1).
struct InterpolationWeight {
  enum class Kind { bracket, truncated };
  Kind kind = Kind::bracket;
  int N = 1;  // truncated only

  static InterpolationWeight bracket() { return {Kind::bracket, 1}; }
  static InterpolationWeight truncated(int N) { return {Kind::truncated, N}; }
};
struct InterpolationCheck {
  double lhs = 0.0;
  double rhs_product = 0.0;
};
InterpolationCheck interpolation_check(const Field2D& f, double a, double b,
                                       double theta,
                                       const InterpolationWeight& weight);

// One-dimensional periodic grid on [-L, L) with n points, for the
// one-dimensional fractional Leibniz defect below.
struct Grid1D {
  int n = 0;
  double L = 0.0;

  Grid1D() = default;
  Grid1D(int n_, double L_);
  double dx() const { return 2.0 * L / n; }
  double x(int i) const { return -L + i * dx(); }
};

// defect       = || D^alpha(fg) - f D^alpha g - g D^alpha f ||_2,
// bound_factor = sup|g| * || D^alpha f ||_2,
// with D^alpha the |xi|^alpha multiplier on the periodic line.  Requires
// alpha in (0,1); only p = 2 is supported.
struct LeibnizDefect {
  double defect = 0.0;
  double bound_factor = 0.0;
};
LeibnizDefect leibniz_defect(const Grid1D& grid, const std::vector<double>& f,
                             const std::vector<double>& g, double alpha, int p);

}  // namespace zk
