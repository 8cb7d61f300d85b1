#include "zk/stein.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "zk/norms.hpp"
#include "zk/spectral.hpp"

namespace zk {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGl4X[] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                            0.8611363115940526};
constexpr double kGl4W[] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                            0.3478548451374538};
constexpr double kGl5X[] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                            0.9061798459386640};
constexpr double kGl5W[] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                            0.4786286704993665, 0.2369268850561891};
constexpr double kGl7X[] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
                            0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
constexpr double kGl7W[] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                            0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                            0.1294849661688697};

// One quadrature node of the planar difference integral: a fixed offset from
// the evaluation point, pre-resolved to bilinear corners on the periodic grid
// (integer offsets in [0, n) plus corner weights) and the quadrature weight.
struct Node {
  int ix0, ix1, iy0, iy1;
  double w00, w10, w01, w11;
  double qw;
};

int wrap(long i, int n) {
  long m = i % n;
  return static_cast<int>(m < 0 ? m + n : m);
}

void push_node(std::vector<Node>& nodes, const Grid2D& g, double zx, double zy, double qw) {
  const double u = zx / g.dx();
  const double v = zy / g.dy();
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const double a = u - fu;
  const double c = v - fv;
  Node n;
  n.ix0 = wrap(static_cast<long>(fu), g.nx);
  n.ix1 = wrap(static_cast<long>(fu) + 1, g.nx);
  n.iy0 = wrap(static_cast<long>(fv), g.ny);
  n.iy1 = wrap(static_cast<long>(fv) + 1, g.ny);
  n.w00 = (1.0 - a) * (1.0 - c);
  n.w10 = a * (1.0 - c);
  n.w01 = (1.0 - a) * c;
  n.w11 = a * c;
  n.qw = qw;
  nodes.push_back(n);
}

struct ResolvedConfig {
  double rho;
  double R;
  int nr;
  int na;
};

ResolvedConfig resolve_config(const Grid2D& g, const SteinQuadratureConfig& cfg) {
  ResolvedConfig r;
  r.rho = cfg.near_radius > 0.0 ? cfg.near_radius : 2.0 * std::max(g.dx(), g.dy());
  r.R = cfg.far_radius > 0.0 ? cfg.far_radius : 0.5 * std::min(g.Lx, g.Ly);
  require(r.rho > 0.0 && r.R > r.rho, Err::invalid_input,
          "stein quadrature: need 0 < near_radius < far_radius");
  require(r.R <= std::min(g.Lx, g.Ly), Err::invalid_input,
          "stein quadrature: far_radius exceeds the box; offsets would wrap");
  require(cfg.radial_panels >= 1, Err::invalid_input,
          "stein quadrature: radial_panels must be positive");
  require(cfg.angular_panels >= 4 && cfg.angular_panels % 2 == 0, Err::invalid_input,
          "stein quadrature: angular_panels must be even and at least 4 (an even "
          "count keeps the node set symmetric under grid reflections)");
  r.nr = cfg.radial_panels;
  r.na = cfg.angular_panels;
  return r;
}

// Quadrature nodes for int_{|z|<=R} |f(x)-f(x+z)|^2 |z|^{-2-2b} dz, shared by
// every evaluation point.  In polar coordinates the integrand carries
// r^{-1-2b} dr dtheta.  Near field: r = rho s^2 turns that into
// 2 rho^{-2b} s^{-1-4b} ds with |f(x)-f(x+z)|^2 = O(s^4), bounded for b < 3/4.
// Far field: r = rho e^u gives r^{-2b} du on log-spaced panels.
std::vector<Node> build_nodes(const Grid2D& g, double b, const ResolvedConfig& rc) {
  std::vector<Node> nodes;
  const double dtheta = 2.0 * M_PI / rc.na;
  std::vector<double> cth(rc.na), sth(rc.na);
  for (int j = 0; j < rc.na; ++j) {
    const double th = dtheta * (j + 0.5);
    cth[j] = std::cos(th);
    sth[j] = std::sin(th);
  }
  nodes.reserve(static_cast<size_t>(rc.na) * 4 *
                (rc.nr + rc.nr * static_cast<int>(std::ceil(std::log2(rc.R / rc.rho))) + 4));

  auto add_ring = [&](double r, double radial_w) {
    const double qw = radial_w * dtheta;
    for (int j = 0; j < rc.na; ++j) push_node(nodes, g, r * cth[j], r * sth[j], qw);
  };

  // Near disk, s in [0,1] split into nr panels, 4-node Gauss each.
  for (int p = 0; p < rc.nr; ++p) {
    const double s0 = static_cast<double>(p) / rc.nr;
    const double s1 = static_cast<double>(p + 1) / rc.nr;
    const double half = 0.5 * (s1 - s0);
    const double mid = 0.5 * (s0 + s1);
    for (int q = 0; q < 4; ++q) {
      const double s = mid + half * kGl4X[q];
      const double r = rc.rho * s * s;
      add_ring(r, kGl4W[q] * half * 2.0 * std::pow(rc.rho, -2.0 * b) *
                      std::pow(s, -1.0 - 4.0 * b));
    }
  }

  // Far annulus, u = log(r/rho) in [0, log(R/rho)], nr panels per octave.
  const double umax = std::log(rc.R / rc.rho);
  const int far_panels = std::max(1, static_cast<int>(std::ceil(umax / M_LN2 * rc.nr)));
  for (int p = 0; p < far_panels; ++p) {
    const double u0 = umax * p / far_panels;
    const double u1 = umax * (p + 1) / far_panels;
    const double half = 0.5 * (u1 - u0);
    const double mid = 0.5 * (u0 + u1);
    for (int q = 0; q < 4; ++q) {
      const double u = mid + half * kGl4X[q];
      const double r = rc.rho * std::exp(u);
      add_ring(r, kGl4W[q] * half * std::pow(r, -2.0 * b));
    }
  }
  return nodes;
}

double point_sq(const Field2D& f, int ix, int iy, const std::vector<Node>& nodes) {
  const Grid2D& g = f.grid;
  const double* d = f.data.data();
  const int nx = g.nx;
  const int ny = g.ny;
  const double fp = d[static_cast<size_t>(iy) * nx + ix];
  double acc = 0.0;
  for (const Node& n : nodes) {
    int jx0 = ix + n.ix0;
    if (jx0 >= nx) jx0 -= nx;
    int jx1 = ix + n.ix1;
    if (jx1 >= nx) jx1 -= nx;
    int jy0 = iy + n.iy0;
    if (jy0 >= ny) jy0 -= ny;
    int jy1 = iy + n.iy1;
    if (jy1 >= ny) jy1 -= ny;
    const double* r0 = d + static_cast<size_t>(jy0) * nx;
    const double* r1 = d + static_cast<size_t>(jy1) * nx;
    const double fi = n.w00 * r0[jx0] + n.w10 * r0[jx1] + n.w01 * r1[jx0] + n.w11 * r1[jx1];
    const double dlt = fp - fi;
    acc += n.qw * dlt * dlt;
  }
  return acc;
}

void check_inputs(const Field2D& f, double b, const SteinQuadratureConfig& cfg,
                  const ResolvedConfig& rc) {
  require(b > 0.0 && b < 1.0, Err::invalid_input,
          "stein derivative: order b must lie in (0, 1)");
  require(high_frequency_energy_fraction(f) < 1e-6, Err::resolution,
          "stein derivative: field has Nyquist-band energy; refine the grid");
  double sup = 0.0;
  for (double v : f.data) sup = std::max(sup, std::abs(v));
  const double tail = stein_tail_bound(sup, b, rc.R);
  if (!(tail <= cfg.tail_tolerance)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "stein derivative: truncation tail bound %.6e exceeds tolerance %.6e",
                  tail, cfg.tail_tolerance);
    fail(Err::truncation, msg);
  }
}

}  // namespace

double stein_tail_bound(double sup_abs_f, double b, double R) {
  require(sup_abs_f >= 0.0, Err::invalid_input, "tail bound: sup|f| must be nonnegative");
  require(b > 0.0 && b < 1.0, Err::invalid_input, "tail bound: order b must lie in (0, 1)");
  require(R > 0.0, Err::invalid_input, "tail bound: radius must be positive");
  return 2.0 * sup_abs_f * sup_abs_f * (2.0 * M_PI / (2.0 * b)) * std::pow(R, -2.0 * b);
}

Field2D stein_derivative(const Field2D& f, double b, const SteinQuadratureConfig& cfg) {
  const ResolvedConfig rc = resolve_config(f.grid, cfg);
  check_inputs(f, b, cfg, rc);
  const std::vector<Node> nodes = build_nodes(f.grid, b, rc);
  Field2D out(f.grid);
  for (int iy = 0; iy < f.grid.ny; ++iy)
    for (int ix = 0; ix < f.grid.nx; ++ix)
      out.at(ix, iy) = std::sqrt(point_sq(f, ix, iy, nodes));
  return out;
}

double stein_derivative_at(const Field2D& f, int ix, int iy, double b,
                           const SteinQuadratureConfig& cfg) {
  require(ix >= 0 && ix < f.grid.nx && iy >= 0 && iy < f.grid.ny, Err::invalid_input,
          "stein derivative: point index outside the grid");
  const ResolvedConfig rc = resolve_config(f.grid, cfg);
  check_inputs(f, b, cfg, rc);
  const std::vector<Node> nodes = build_nodes(f.grid, b, rc);
  return std::sqrt(point_sq(f, ix, iy, nodes));
}

double stein_phase_bound(double t, double x1, double b) {
  require(t > 0.0, Err::invalid_input, "phase bound: stated for t > 0 only");
  require(b > 0.0 && b <= 0.5, Err::invalid_input, "phase bound: order b must lie in (0, 1/2]");
  const double ax = std::abs(x1);
  return std::pow(t, b / 3.0) + std::pow(t, (b + 1.0) / 3.0) +
         std::pow(t, b / 3.0) * std::pow(ax, b) +
         (std::pow(t, 1.0 / 3.0 + 2.0 * b / 3.0) + std::pow(t, 2.0 * b / 3.0)) *
             std::pow(ax, 2.0 * b);
}

double stein_phase_value(double t, double x1, double b) {
  require(t > 0.0, Err::invalid_input, "phase value: stated for t > 0 only");
  require(b > 0.0 && b <= 0.5, Err::invalid_input, "phase value: order b must lie in (0, 1/2]");
  const double cb = std::sqrt(M_PI) * std::tgamma(b + 0.5) / std::tgamma(1.0 + b);
  const auto phase = [&](double y) { return t * (y * y * y - x1 * x1 * x1); };

  // Near field |y - x1| <= r0: 2 - 2cos(phase) vanishes quadratically at
  // y = x1, so u = +-r0 s^2 leaves a bounded integrand.  r0 is chosen so the
  // phase stays O(1) across the near region.
  const double r0 = std::min(1.0, 1.0 / (1.0 + 3.0 * t * x1 * x1));
  double near = 0.0;
  const int near_panels = 24;
  for (int side = 0; side < 2; ++side) {
    const double sgn = side == 0 ? 1.0 : -1.0;
    for (int p = 0; p < near_panels; ++p) {
      const double s0 = static_cast<double>(p) / near_panels;
      const double s1 = static_cast<double>(p + 1) / near_panels;
      const double half = 0.5 * (s1 - s0);
      const double mid = 0.5 * (s0 + s1);
      for (int q = 0; q < 7; ++q) {
        const double s = mid + half * kGl7X[q];
        const double y = x1 + sgn * r0 * s * s;
        const double F = 2.0 - 2.0 * std::cos(phase(y));
        near += kGl7W[q] * half * F * 2.0 * std::pow(r0, -2.0 * b) *
                std::pow(s, -1.0 - 4.0 * b);
      }
    }
  }

  // Far field: the non-oscillatory part of (2 - 2cos) integrates in closed
  // form; the cosine part is integrated over phase-uniform panels out to a
  // radius where the integration-by-parts remainder is below 5e-7.
  const double smooth_far = 2.0 * std::pow(r0, -2.0 * b) / b;

  const auto cutoff = [&](double sign) {
    double Y = std::max(std::abs(x1) + r0 + 1.0, 2.0);
    for (int i = 0; i < 200; ++i) {
      const double dist = std::abs(sign * Y - x1);
      const double rem = 4.0 * std::pow(dist, -1.0 - 2.0 * b) / (3.0 * t * Y * Y);
      if (rem <= 5e-7) break;
      Y *= 1.5;
    }
    return Y;
  };

  const auto osc_side = [&](double ya, double yb) {
    // Integrates 2 cos(phase(y)) |y - x1|^{-1-2b} over [ya, yb] (ya < yb)
    // with panel boundaries uniform in the phase (never wider than pi).
    double acc = 0.0;
    double lo = ya;
    const double total_span = std::abs(phase(yb) - phase(ya));
    const long panels = std::max(1L, static_cast<long>(std::ceil(total_span / M_PI)));
    for (long k = 1; k <= panels; ++k) {
      const double target = phase(ya) + (phase(yb) - phase(ya)) * (static_cast<double>(k) / panels);
      const double hi = k == panels ? yb : std::cbrt(x1 * x1 * x1 + target / t);
      const double half = 0.5 * (hi - lo);
      const double mid = 0.5 * (lo + hi);
      for (int q = 0; q < 5; ++q) {
        const double y = mid + half * kGl5X[q];
        acc += kGl5W[q] * half * 2.0 * std::cos(phase(y)) *
               std::pow(std::abs(y - x1), -1.0 - 2.0 * b);
      }
      lo = hi;
    }
    return acc;
  };

  const double osc = osc_side(x1 + r0, cutoff(1.0)) + osc_side(-cutoff(-1.0), x1 - r0);
  const double integral = near + smooth_far - osc;
  require(integral > 0.0, Err::internal, "phase value: quadrature produced a nonpositive value");
  return std::sqrt(cb * integral);
}

double weighted_group_bound_rhs(double l2, double d2b, double wnorm, double t, double b) {
  require(l2 >= 0.0 && d2b >= 0.0 && wnorm >= 0.0, Err::invalid_input,
          "group bound: norms must be nonnegative");
  require(t >= 0.0, Err::invalid_input, "group bound: time must be nonnegative");
  require(b > 0.0 && b <= 0.5, Err::invalid_input, "group bound: order b must lie in (0, 1/2]");
  const double tb3 = std::pow(t, b / 3.0);
  return (1.0 + tb3 + std::pow(t, (b + 1.0) / 3.0)) * l2 +
         (tb3 + std::pow(t, 1.0 / 3.0 + 2.0 * b / 3.0) + std::pow(t, 2.0 * b / 3.0)) * d2b +
         wnorm;
}

NormEquivalence norm_equivalence_check(const Field2D& f, double b,
                                       const SteinQuadratureConfig& cfg) {
  require(b > 0.0 && b < 1.0, Err::invalid_input,
          "norm equivalence: order b must lie in (0, 1)");
  NormEquivalence out;
  out.jb = sobolev_norm(f, b);
  out.l2_plus_stein = l2_norm(f) + l2_norm(stein_derivative(f, b, cfg));
  return out;
}

}  // namespace zk
