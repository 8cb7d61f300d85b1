#include "zk/norms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

#include "zk/common.hpp"
#include "zk/spectral.hpp"

namespace zk {

namespace {

void validate_weight(const WeightSpec& w) {
  switch (w.kind) {
    case WeightSpec::Kind::polynomial:
      return;
    case WeightSpec::Kind::absolute_sum:
      require(w.order >= 0.0, Err::invalid_input,
              "weight: the |x|+|y| exponent must be nonnegative (the weight is "
              "singular at the origin otherwise)");
      return;
    case WeightSpec::Kind::truncated:
      require(w.N >= 1, Err::invalid_input, "weight: truncation index must be positive");
      return;
  }
  fail(Err::invalid_input, "weight: unknown kind");
}

bool weight_grows(const WeightSpec& w) {
  switch (w.kind) {
    case WeightSpec::Kind::polynomial:
      return w.order > 0.0;
    case WeightSpec::Kind::absolute_sum:
      return w.order > 0.0;
    case WeightSpec::Kind::truncated:
      return false;  // bounded by (2N)^(2s)
  }
  return false;
}

// --- truncated weight -------------------------------------------------------

double g_val(double u) { return std::sqrt(1.0 + u * u); }
double g_prime(double u) { return u / std::sqrt(1.0 + u * u); }

// Transition-region derivative pieces for w_N on [N, 3N].
struct TransitionShape {
  double N;
  double step(double u) const {  // 1 at u=N (to all orders), 0 from u=2N on
    if (u >= 2.0 * N) return 0.0;
    return smooth_step((2.0 * N - u) / N);
  }
  double bump(double u) const {  // flat-zero contact at u=N and u=3N
    const double a = smooth_step((u - N) / N);
    const double b = smooth_step((3.0 * N - u) / N);
    const double m = a * b;
    return m * m * m;
  }
  double base(double u) const { return g_prime(u) * step(u); }
};

// Cumulative quadrature of the transition derivative, panelised so that
// point evaluations only integrate a sub-panel.
struct TransitionTable {
  double N = 0.0;
  double coeff = 0.0;  // c multiplying the bump
  double h = 0.0;      // panel width
  std::vector<double> cum;  // cum[k] = int_N^{N+k h} (g'H + cB)
};

constexpr int kPanels = 4096;

// 4-point Gauss-Legendre on [a, b].
template <typename F>
double gl4(const F& f, double a, double b) {
  static const double n1 = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  static const double n2 = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  static const double w1 = (18.0 + std::sqrt(30.0)) / 36.0;
  static const double w2 = (18.0 - std::sqrt(30.0)) / 36.0;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  return half * (w1 * (f(mid - half * n1) + f(mid + half * n1)) +
                 w2 * (f(mid - half * n2) + f(mid + half * n2)));
}

const TransitionTable& transition_table(int N) {
  static std::mutex m;
  static std::map<int, TransitionTable> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;

  TransitionShape shape{static_cast<double>(N)};
  TransitionTable tab;
  tab.N = shape.N;
  tab.h = 2.0 * shape.N / kPanels;

  // One pass of per-panel integrals for the step part and the bump part;
  // the closing coefficient is computed from the same sums so the endpoint
  // value 2N is hit to rounding.
  std::vector<double> base_panel(kPanels), bump_panel(kPanels);
  double base_total = 0.0, bump_total = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double a = shape.N + k * tab.h;
    const double b = a + tab.h;
    base_panel[k] = gl4([&](double u) { return shape.base(u); }, a, b);
    bump_panel[k] = gl4([&](double u) { return shape.bump(u); }, a, b);
    base_total += base_panel[k];
    bump_total += bump_panel[k];
  }
  const double rise = 2.0 * shape.N - g_val(shape.N);
  require(bump_total > 0.0, Err::internal, "truncated weight: degenerate bump");
  tab.coeff = (rise - base_total) / bump_total;
  require(tab.coeff >= 0.0, Err::internal,
          "truncated weight: transition would lose monotonicity");

  tab.cum.resize(kPanels + 1);
  tab.cum[0] = 0.0;
  for (int k = 0; k < kPanels; ++k)
    tab.cum[k + 1] = tab.cum[k] + base_panel[k] + tab.coeff * bump_panel[k];

  return cache.emplace(N, std::move(tab)).first->second;
}

// --- mixed-norm cube ---------------------------------------------------------

struct Cube {
  // Row-major over dims in order; dims shrink as axes get reduced away.
  std::vector<std::pair<Axis, int>> dims;
  std::vector<double> data;
};

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  const int n = static_cast<int>(t.size());
  std::vector<double> w(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    const double half = 0.5 * (t[i + 1] - t[i]);
    w[i] += half;
    w[i + 1] += half;
  }
  return w;
}

// Reduce one axis of the cube with either the weighted L2 sum or the sup.
Cube reduce_axis(const Cube& in, Axis axis, double p, const Grid2D& grid,
                 const std::vector<double>& times) {
  int pos = -1;
  for (int i = 0; i < static_cast<int>(in.dims.size()); ++i)
    if (in.dims[i].first == axis) pos = i;
  require(pos >= 0, Err::internal, "mixed norm: axis already reduced");

  const int n_axis = in.dims[pos].second;
  std::vector<double> weights;
  if (p == 2.0) {
    if (axis == Axis::x)
      weights.assign(n_axis, grid.dx());
    else if (axis == Axis::y)
      weights.assign(n_axis, grid.dy());
    else
      weights = trapezoid_weights(times);
  }

  // Strides in the input cube.
  std::vector<long> stride(in.dims.size(), 1);
  for (int i = static_cast<int>(in.dims.size()) - 2; i >= 0; --i)
    stride[i] = stride[i + 1] * in.dims[i + 1].second;

  Cube out;
  long out_size = 1;
  for (int i = 0; i < static_cast<int>(in.dims.size()); ++i)
    if (i != pos) {
      out.dims.push_back(in.dims[i]);
      out_size *= in.dims[i].second;
    }
  out.data.assign(out_size, 0.0);

  std::vector<long> out_stride(out.dims.size(), 1);
  for (int i = static_cast<int>(out.dims.size()) - 2; i >= 0; --i)
    out_stride[i] = out_stride[i + 1] * out.dims[i + 1].second;

  for (long o = 0; o < out_size; ++o) {
    // Decode the remaining indices and rebuild the input base offset.
    long rem = o, base = 0;
    int oi = 0;
    for (int i = 0; i < static_cast<int>(in.dims.size()); ++i) {
      if (i == pos) continue;
      const long idx = rem / out_stride[oi];
      rem %= out_stride[oi];
      base += idx * stride[i];
      ++oi;
    }
    double acc = 0.0;
    if (p == 2.0) {
      for (int k = 0; k < n_axis; ++k) {
        const double v = in.data[base + k * stride[pos]];
        acc += weights[k] * v * v;
      }
      acc = std::sqrt(acc);
    } else {
      for (int k = 0; k < n_axis; ++k)
        acc = std::max(acc, std::abs(in.data[base + k * stride[pos]]));
    }
    out.data[o] = acc;
  }
  return out;
}

Trajectory map_snapshots(const Trajectory& traj, const MultiplierSpec& spec) {
  Trajectory out;
  out.grid = traj.grid;
  out.times = traj.times;
  out.snapshots.reserve(traj.snapshots.size());
  for (const Field2D& f : traj.snapshots)
    out.snapshots.push_back(inverse_transform(apply_multiplier(transform(f), spec)));
  return out;
}

// --- 1D spectral helper ------------------------------------------------------

struct Plan1D {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

Plan1D& plan_1d(int n) {
  static std::mutex m;
  static std::map<int, Plan1D> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) {
    Plan1D p;
    p.buf = fftw_alloc_complex(n);
    require(p.buf != nullptr, Err::internal, "fft: allocation failed");
    p.fwd = fftw_plan_dft_1d(n, p.buf, p.buf, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_1d(n, p.buf, p.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    require(p.fwd != nullptr && p.bwd != nullptr, Err::internal, "fft: plan creation failed");
    it = cache.emplace(n, p).first;
  }
  return it->second;
}

// Apply the |xi|^alpha multiplier on the periodic line [-L, L).
std::vector<double> fractional_derivative_1d(const Grid1D& grid,
                                             const std::vector<double>& f, double alpha) {
  const int n = grid.n;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  Plan1D& plan = plan_1d(n);
  for (int i = 0; i < n; ++i) {
    plan.buf[i][0] = f[i];
    plan.buf[i][1] = 0.0;
  }
  fftw_execute(plan.fwd);
  const double dxi = M_PI / grid.L;
  for (int i = 0; i < n; ++i) {
    const int mode = i < n / 2 ? i : i - n;
    const double xi = std::abs(mode) * dxi;
    const double mult = xi == 0.0 ? 0.0 : std::pow(xi, alpha);
    plan.buf[i][0] *= mult;
    plan.buf[i][1] *= mult;
  }
  fftw_execute(plan.bwd);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = plan.buf[i][0] / n;
  return out;
}

}  // namespace

double weight_value(const WeightSpec& w, double x, double y) {
  validate_weight(w);
  switch (w.kind) {
    case WeightSpec::Kind::polynomial:
      return std::pow(1.0 + x * x + y * y, w.order);
    case WeightSpec::Kind::absolute_sum: {
      const double s = std::abs(x) + std::abs(y);
      if (s == 0.0) return w.order == 0.0 ? 1.0 : 0.0;
      return std::pow(s, 2.0 * w.order);
    }
    case WeightSpec::Kind::truncated: {
      const double r = std::sqrt(x * x + y * y);
      return std::pow(truncated_weight_value(w.N, r), 2.0 * w.order);
    }
  }
  fail(Err::invalid_input, "weight: unknown kind");
}

double weighted_l2_norm(const Field2D& f, const WeightSpec& w) {
  validate_weight(w);
  if (weight_grows(w)) check_boundary_decay(f, 1e-6);
  const Grid2D& g = f.grid;
  double acc = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    const double y = g.y(iy);
    for (int ix = 0; ix < g.nx; ++ix) {
      const double v = f.data[static_cast<size_t>(iy) * g.nx + ix];
      acc += weight_value(w, g.x(ix), y) * v * v;
    }
  }
  acc *= g.dx() * g.dy();
  if (w.kind == WeightSpec::Kind::absolute_sum && w.order > 0.0) {
    // The weight (|x|+|y|)^{2b} has a gradient kink along the node lines
    // x = 0 and y = 0, so the plain cell sum carries an O(h^2) deficit of
    // (h^2/12) * (jump of the normal derivative) integrated along each line.
    // The jump is 4b(|x|+|y|)^{2b-1} in closed form; adding it back restores
    // smooth-integrand accuracy.  The origin node is skipped when the jump
    // profile itself is singular there (2b < 1).
    const double b = w.order;
    const double e = 2.0 * b - 1.0;
    const int ix0 = g.nx / 2;  // node with x == 0
    const int iy0 = g.ny / 2;  // node with y == 0
    double line_x = 0.0;       // along x = 0, integrate over y
    for (int iy = 0; iy < g.ny; ++iy) {
      const double y = g.y(iy);
      if (y == 0.0 && e < 0.0) continue;
      const double v = f.at(ix0, iy);
      line_x += 4.0 * b * std::pow(std::abs(y), e) * v * v;
    }
    double line_y = 0.0;  // along y = 0, integrate over x
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = g.x(ix);
      if (x == 0.0 && e < 0.0) continue;
      const double v = f.at(ix, iy0);
      line_y += 4.0 * b * std::pow(std::abs(x), e) * v * v;
    }
    acc += (g.dx() * g.dx() / 12.0) * line_x * g.dy() +
           (g.dy() * g.dy() / 12.0) * line_y * g.dx();
  }
  return std::sqrt(acc);
}

double truncated_weight_value(int N, double r) {
  require(N >= 1, Err::invalid_input, "truncated weight: index must be positive");
  const double a = std::abs(r);
  const double n = static_cast<double>(N);
  if (a <= n) return g_val(a);
  if (a >= 3.0 * n) return 2.0 * n;
  const TransitionTable& tab = transition_table(N);
  TransitionShape shape{n};
  int k = static_cast<int>((a - n) / tab.h);
  k = std::min(k, kPanels - 1);
  const double left = n + k * tab.h;
  const double partial = gl4(
      [&](double u) { return shape.base(u) + tab.coeff * shape.bump(u); }, left, a);
  return g_val(n) + tab.cum[k] + partial;
}

double sobolev_norm(const Field2D& f, double s) {
  require(s >= 0.0, Err::unsupported, "sobolev norm: negative order not supported");
  Spectrum2D sp = transform(f);
  const Grid2D& g = f.grid;
  double acc = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    const double eta = g.eta(iy);
    for (int ix = 0; ix < g.nx; ++ix) {
      const double xi = g.xi(ix);
      acc += std::pow(1.0 + xi * xi + eta * eta, s) *
             std::norm(sp.coef[static_cast<size_t>(iy) * g.nx + ix]);
    }
  }
  return std::sqrt(acc * g.dxi() * (M_PI / g.Ly));
}

void check_trajectory(const Trajectory& traj) {
  require(!traj.snapshots.empty(), Err::invalid_input, "trajectory: no snapshots");
  require(traj.times.size() == traj.snapshots.size(), Err::invalid_input,
          "trajectory: times and snapshots must pair up");
  require(traj.times.front() == 0.0, Err::invalid_input,
          "trajectory: times must start at 0");
  for (size_t i = 1; i < traj.times.size(); ++i)
    require(traj.times[i] > traj.times[i - 1], Err::invalid_input,
            "trajectory: times must be strictly increasing");
  for (const Field2D& f : traj.snapshots) {
    require(f.grid == traj.grid, Err::invalid_input,
            "trajectory: snapshot grid mismatch");
    require(f.data.size() == static_cast<size_t>(traj.grid.size()), Err::invalid_input,
            "trajectory: snapshot size mismatch");
  }
}

double mixed_norm(const Trajectory& traj, Axis outer_axis,
                  const std::vector<AxisExponent>& spec) {
  check_trajectory(traj);
  require(spec.size() == 3, Err::invalid_input,
          "mixed norm: exponent list must name x, y and t exactly once");
  bool seen[3] = {false, false, false};
  for (const AxisExponent& e : spec) {
    const int i = static_cast<int>(e.axis);
    require(i >= 0 && i < 3 && !seen[i], Err::invalid_input,
            "mixed norm: exponent list must name x, y and t exactly once");
    seen[i] = true;
    require(e.p == 2.0 || std::isinf(e.p), Err::invalid_input,
            "mixed norm: exponents must be 2 or infinity");
  }
  require(spec.front().axis == outer_axis, Err::invalid_input,
          "mixed norm: outer axis must match the first exponent entry");

  const Grid2D& g = traj.grid;
  const int nt = static_cast<int>(traj.times.size());
  Cube cube;
  cube.dims = {{Axis::t, nt}, {Axis::y, g.ny}, {Axis::x, g.nx}};
  cube.data.resize(static_cast<size_t>(nt) * g.size());
  for (int it = 0; it < nt; ++it)
    std::copy(traj.snapshots[it].data.begin(), traj.snapshots[it].data.end(),
              cube.data.begin() + static_cast<size_t>(it) * g.size());

  for (int i = 2; i >= 0; --i)
    cube = reduce_axis(cube, spec[i].axis, spec[i].p, g, traj.times);
  require(cube.data.size() == 1, Err::internal, "mixed norm: reduction incomplete");
  return cube.data[0];
}

NormReport triple_norm(const Trajectory& traj, double s) {
  check_trajectory(traj);
  require(s > 0.75, Err::invalid_input, "trajectory norm: needs order above 3/4");

  const double inf = std::numeric_limits<double>::infinity();
  MultiplierSpec ddx{MultiplierSpec::Kind::derivative_x, 1.0, 0.0,
                     MultiplierSpec::Form::symmetrized};
  MultiplierSpec ddy{MultiplierSpec::Kind::derivative_y, 1.0, 0.0,
                     MultiplierSpec::Form::symmetrized};
  // When s = 1 the fractional factors degenerate to plain derivatives.
  MultiplierSpec frac_x{s == 1.0 ? MultiplierSpec::Kind::derivative_x
                                 : MultiplierSpec::Kind::fractional_x,
                        s, 0.0, MultiplierSpec::Form::symmetrized};
  MultiplierSpec frac_y{s == 1.0 ? MultiplierSpec::Kind::derivative_y
                                 : MultiplierSpec::Kind::fractional_y,
                        s, 0.0, MultiplierSpec::Form::symmetrized};

  Trajectory vx = map_snapshots(traj, ddx);
  Trajectory vy = map_snapshots(traj, ddy);
  Trajectory dsx_vx = map_snapshots(vx, frac_x);
  Trajectory dsy_vx = map_snapshots(vx, frac_y);
  Trajectory dsx_vy = map_snapshots(vy, frac_x);
  Trajectory dsy_vy = map_snapshots(vy, frac_y);

  NormReport rep;
  for (const Field2D& f : traj.snapshots)
    rep.component[0] = std::max(rep.component[0], sobolev_norm(f, s));
  rep.component[1] = mixed_norm(dsx_vx, Axis::x,
                                {{Axis::x, inf}, {Axis::y, 2.0}, {Axis::t, 2.0}});
  rep.component[2] = mixed_norm(dsy_vx, Axis::x,
                                {{Axis::x, inf}, {Axis::y, 2.0}, {Axis::t, 2.0}});
  rep.component[3] = mixed_norm(vx, Axis::t,
                                {{Axis::t, 2.0}, {Axis::x, inf}, {Axis::y, inf}});
  rep.component[4] = mixed_norm(traj, Axis::x,
                                {{Axis::x, 2.0}, {Axis::y, inf}, {Axis::t, inf}});
  rep.component[5] = mixed_norm(dsx_vy, Axis::y,
                                {{Axis::y, inf}, {Axis::x, 2.0}, {Axis::t, 2.0}});
  rep.component[6] = mixed_norm(dsy_vy, Axis::y,
                                {{Axis::y, inf}, {Axis::x, 2.0}, {Axis::t, 2.0}});
  rep.component[7] = mixed_norm(vy, Axis::t,
                                {{Axis::t, 2.0}, {Axis::x, inf}, {Axis::y, inf}});
  rep.component[8] = mixed_norm(traj, Axis::y,
                                {{Axis::y, 2.0}, {Axis::x, inf}, {Axis::t, inf}});
  for (const Field2D& f : traj.snapshots)
    rep.component[9] =
        std::max(rep.component[9], weighted_l2_norm(f, WeightSpec::absolute_sum(s / 2.0)));

  rep.total = 0.0;
  for (double c : rep.component) rep.total += c;
  return rep;
}

InterpolationCheck interpolation_check(const Field2D& f, double a, double b,
                                       double theta,
                                       const InterpolationWeight& weight) {
  require(a > 0.0 && b > 0.0, Err::invalid_input,
          "interpolation check: orders must be positive");
  require(theta > 0.0 && theta < 1.0, Err::invalid_input,
          "interpolation check: theta must lie strictly between 0 and 1");

  const bool truncated = weight.kind == InterpolationWeight::Kind::truncated;
  if (truncated)
    require(weight.N >= 1, Err::invalid_input,
            "interpolation check: truncation index must be positive");
  auto weight_spec = [&](double exponent) {
    return truncated ? WeightSpec::truncated(weight.N, exponent)
                     : WeightSpec::polynomial(exponent);
  };

  MultiplierSpec smooth{MultiplierSpec::Kind::bessel, (1.0 - theta) * a, 0.0,
                        MultiplierSpec::Form::symmetrized};
  Field2D jf = inverse_transform(apply_multiplier(transform(f), smooth));

  InterpolationCheck out;
  out.lhs = weighted_l2_norm(jf, weight_spec(theta * b));
  out.rhs_product = std::pow(weighted_l2_norm(f, weight_spec(b)), theta) *
                    std::pow(sobolev_norm(f, a), 1.0 - theta);
  return out;
}

Grid1D::Grid1D(int n_, double L_) : n(n_), L(L_) {
  require(n >= 8 && n % 2 == 0, Err::invalid_input,
          "1d grid: need an even point count of at least 8");
  require(L > 0.0, Err::invalid_input, "1d grid: half-length must be positive");
}

LeibnizDefect leibniz_defect(const Grid1D& grid, const std::vector<double>& f,
                             const std::vector<double>& g, double alpha, int p) {
  require(p == 2, Err::unsupported, "leibniz defect: only the L2 case is supported");
  require(alpha > 0.0 && alpha < 1.0, Err::invalid_input,
          "leibniz defect: order must lie strictly between 0 and 1");
  require(grid.n > 0, Err::invalid_input, "leibniz defect: empty grid");
  require(f.size() == static_cast<size_t>(grid.n) && g.size() == f.size(),
          Err::invalid_input, "leibniz defect: sample count must match the grid");

  const int n = grid.n;
  std::vector<double> fg(n);
  for (int i = 0; i < n; ++i) fg[i] = f[i] * g[i];
  std::vector<double> d_fg = fractional_derivative_1d(grid, fg, alpha);
  std::vector<double> d_f = fractional_derivative_1d(grid, f, alpha);
  std::vector<double> d_g = fractional_derivative_1d(grid, g, alpha);

  double acc = 0.0, sup_g = 0.0, df_l2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double defect = d_fg[i] - f[i] * d_g[i] - g[i] * d_f[i];
    acc += defect * defect;
    sup_g = std::max(sup_g, std::abs(g[i]));
    df_l2 += d_f[i] * d_f[i];
  }
  LeibnizDefect out;
  out.defect = std::sqrt(acc * grid.dx());
  out.bound_factor = sup_g * std::sqrt(df_l2 * grid.dx());
  return out;
}

}  // namespace zk
