#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "zk/common.hpp"
#include "zk/norms.hpp"
#include "zk/propagator.hpp"
#include "zk/spectral.hpp"

using namespace zk;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Field2D constant_field(const Grid2D& g, double v) {
  Field2D f(g);
  std::fill(f.data.begin(), f.data.end(), v);
  return f;
}

Trajectory free_evolution(const Field2D& v0, const std::vector<double>& times) {
  Trajectory traj;
  traj.grid = v0.grid;
  traj.times = times;
  for (double t : times)
    traj.snapshots.push_back(free_evolve(v0, t, MultiplierSpec::Form::symmetrized));
  return traj;
}

}  // namespace

TEST_CASE("weight values match their closed forms") {
  CHECK(std::abs(weight_value(WeightSpec::polynomial(1.5), 1.0, 2.0) -
                 std::pow(6.0, 1.5)) < 1e-12);
  CHECK(weight_value(WeightSpec::polynomial(0.0), 3.0, -4.0) == 1.0);
  CHECK(std::abs(weight_value(WeightSpec::absolute_sum(0.5), 1.0, -2.0) - 3.0) < 1e-12);
  CHECK(weight_value(WeightSpec::absolute_sum(0.75), 0.0, 0.0) == 0.0);
  CHECK(weight_value(WeightSpec::truncated(3, 1.0), 0.0, 0.0) == 1.0);
  // (w_N(5N))^{2s} with s = 0.5 is exactly 2N.
  CHECK(std::abs(weight_value(WeightSpec::truncated(2, 0.5), 10.0, 0.0) - 4.0) < 1e-12);
  CHECK(oracle::throws_code(Err::invalid_input, [] {
    weight_value(WeightSpec::absolute_sum(-0.5), 1.0, 1.0);
  }));
  CHECK(oracle::throws_code(Err::invalid_input, [] {
    weight_value(WeightSpec::truncated(0, 1.0), 1.0, 1.0);
  }));
}

TEST_CASE("weighted L2 norm: unit weight equals the plain norm") {
  Grid2D g(64, 64, 10.0, 10.0);
  Field2D f = oracle::make_gaussian(g, 1.1, 0.8, 0.5, -0.3, 1.7);
  CHECK(std::abs(weighted_l2_norm(f, WeightSpec::polynomial(0.0)) - l2_norm(f)) < 1e-12);

  Field2D zero(g);
  CHECK(weighted_l2_norm(zero, WeightSpec::absolute_sum(0.5)) == 0.0);
}

TEST_CASE("weighted L2 norm of a Gaussian matches continuous quadrature") {
  Grid2D g(384, 384, 14.0, 14.0);
  Field2D f = oracle::sample(g, [](double x, double y) {
    return std::exp(-(x * x + y * y) / 2.0);
  });
  const double num = weighted_l2_norm(f, WeightSpec::absolute_sum(0.5));

  // Nested adaptive quadrature of the continuous integral
  // int (|x|+|y|) e^{-(x^2+y^2)} dx dy (which is 2 sqrt(pi) in closed form),
  // folded onto one quadrant where the integrand is smooth.
  const double integral = 4.0 * oracle::adaptive_simpson(
      [](double y) {
        return oracle::adaptive_simpson(
            [y](double x) { return (x + y) * std::exp(-(x * x + y * y)); },
            0.0, 14.0, 1e-12);
      },
      0.0, 14.0, 1e-11);
  const double ref = std::sqrt(integral);
  CHECK(std::abs(num - ref) / ref < 1e-6);
  CHECK(std::abs(integral - 2.0 * std::sqrt(M_PI)) < 1e-7);
}

TEST_CASE("growing weight on a non-decaying field is rejected") {
  Grid2D g(64, 64, 10.0, 10.0);
  Field2D ones = constant_field(g, 1.0);
  CHECK(oracle::throws_code(Err::precondition, [&] {
    weighted_l2_norm(ones, WeightSpec::polynomial(1.0));
  }));
  CHECK(oracle::throws_code(Err::precondition, [&] {
    weighted_l2_norm(ones, WeightSpec::absolute_sum(0.5));
  }));
  // Bounded weights are fine on the same field.
  CHECK(weighted_l2_norm(ones, WeightSpec::truncated(2, 0.5)) > 0.0);
  CHECK(weighted_l2_norm(ones, WeightSpec::polynomial(-1.0)) > 0.0);
}

TEST_CASE("truncated weight hits its closed-form regions exactly") {
  for (int N : {1, 3, 7}) {
    for (double r : {0.0, 0.3 * N, 0.9999 * N, 1.0 * N}) {
      CHECK(std::abs(truncated_weight_value(N, r) - std::sqrt(1.0 + r * r)) < 1e-12);
      CHECK(std::abs(truncated_weight_value(N, -r) - std::sqrt(1.0 + r * r)) < 1e-12);
    }
    for (double r : {3.0 * N + 1e-9, 4.5 * N, 5.0 * N, 100.0 * N})
      CHECK(std::abs(truncated_weight_value(N, r) - 2.0 * N) < 1e-12);
  }
  CHECK(oracle::throws_code(Err::invalid_input, [] { truncated_weight_value(0, 1.0); }));
}

TEST_CASE("truncated weight is monotone, below the bracket, and N-monotone") {
  for (int N : {1, 2, 5}) {
    double prev = 0.0;
    for (int i = 0; i <= 3000; ++i) {
      const double r = i * (4.0 * N) / 3000.0;
      const double w = truncated_weight_value(N, r);
      CHECK(w >= prev - 1e-12);
      CHECK(w <= std::sqrt(1.0 + r * r) + 1e-12);
      CHECK(w <= 2.0 * N + 1e-12);
      prev = w;
    }
  }
  for (auto [n1, n2] : {std::pair{1, 2}, {2, 3}, {4, 5}, {8, 16}}) {
    for (int i = 0; i <= 2000; ++i) {
      const double r = i * (4.0 * n2) / 2000.0;
      CHECK(truncated_weight_value(n1, r) <= truncated_weight_value(n2, r) + 1e-12);
    }
  }
}

TEST_CASE("truncated weight derivative bounds are N-independent") {
  // |w'| <= c1, |w''| <= c2/w, |w'''| <= c3/w^2, constants stable in N.
  double c1[3], c2[3], c3[3];
  int idx = 0;
  for (int N : {2, 8, 32}) {
    const double h = 0.005 * N;
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double r = 0.5 * N + i * (2.7 * N) / 2000.0;
      auto w = [&](double u) { return truncated_weight_value(N, u); };
      const double w0 = w(r);
      const double d1 = (w(r + h) - w(r - h)) / (2 * h);
      const double d2 = (w(r + h) - 2 * w0 + w(r - h)) / (h * h);
      const double d3 =
          (w(r + 2 * h) - 2 * w(r + h) + 2 * w(r - h) - w(r - 2 * h)) / (2 * h * h * h);
      m1 = std::max(m1, std::abs(d1));
      m2 = std::max(m2, std::abs(d2) * w0);
      m3 = std::max(m3, std::abs(d3) * w0 * w0);
    }
    CHECK(m1 < 1.1);
    CHECK(m2 < 5.0);
    CHECK(m3 < 70.0);
    c1[idx] = m1;
    c2[idx] = m2;
    c3[idx] = m3;
    ++idx;
  }
  // Stability across a 16x range of N: within 25%.
  CHECK(c1[2] < 1.25 * std::max(c1[0], c1[1]));
  CHECK(c2[2] < 1.25 * std::max(c2[0], c2[1]));
  CHECK(c3[2] < 1.25 * std::max(c3[0], c3[1]));
}

TEST_CASE("truncated-weight norms increase in N and reach the bracket limit") {
  Grid2D g(128, 128, 12.0, 12.0);
  Field2D f = oracle::make_gaussian(g, 1.0, 1.0, 0.0, 0.0, 1.0);
  const double s = 0.8;
  double prev = 0.0;
  for (int N : {1, 2, 4, 8, 16}) {
    const double v = weighted_l2_norm(f, WeightSpec::truncated(N, s));
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  // Once the transition starts beyond the field's effective support the
  // truncated value matches the polynomial((2*(s/2)) = s) analog.
  const double bracket = weighted_l2_norm(f, WeightSpec::polynomial(s));
  CHECK(std::abs(prev - bracket) / bracket < 1e-6);
}

TEST_CASE("sobolev norm basics") {
  Grid2D g(16, 16, M_PI, M_PI);
  Field2D mode = oracle::sample(g, [](double x, double) { return std::cos(x); });
  for (double s : {0.5, 1.7}) {
    const double ratio = sobolev_norm(mode, s) / l2_norm(mode);
    CHECK(std::abs(ratio - std::pow(2.0, s / 2.0)) < 1e-12);
  }

  Grid2D g2(128, 128, 12.0, 12.0);
  Field2D f = oracle::make_gaussian(g2, 1.3, 0.9, 0.4, -0.2, 2.0);
  CHECK(std::abs(sobolev_norm(f, 0.0) - l2_norm(f)) < 1e-12);

  // Unit Gaussian: ||f||_{H^1}^2 = ||f||_2^2 + ||grad f||_2^2 = pi + pi.
  Field2D gauss = oracle::sample(g2, [](double x, double y) {
    return std::exp(-(x * x + y * y) / 2.0);
  });
  CHECK(std::abs(sobolev_norm(gauss, 1.0) - std::sqrt(2.0 * M_PI)) < 1e-8);

  CHECK(oracle::throws_code(Err::unsupported, [&] { sobolev_norm(f, -0.5); }));

  // Monotone in the order.
  CHECK(sobolev_norm(f, 0.3) <= sobolev_norm(f, 1.1));
}

TEST_CASE("mixed norm: all-L2 case equals the direct space-time sum") {
  Grid2D g(32, 32, 6.0, 6.0);
  Trajectory traj;
  traj.grid = g;
  traj.times = {0.0, 0.5, 1.5, 2.0};
  for (double t : traj.times) {
    Field2D f = oracle::sample(g, [t](double x, double y) {
      return std::exp(-t) * std::exp(-(x * x + y * y) / 3.0) + 0.1 * std::sin(x + t);
    });
    traj.snapshots.push_back(f);
  }
  double direct = 0.0;
  std::vector<double> wt = {0.25, 0.75, 0.75, 0.25};
  for (size_t it = 0; it < traj.times.size(); ++it) {
    double sq = 0.0;
    for (double v : traj.snapshots[it].data) sq += v * v;
    direct += wt[it] * sq * g.dx() * g.dy();
  }
  const double nested = mixed_norm(traj, Axis::t,
                                   {{Axis::t, 2.0}, {Axis::y, 2.0}, {Axis::x, 2.0}});
  CHECK(std::abs(nested - std::sqrt(direct)) < 1e-12);

  // Any nesting order of all-2 exponents gives the same value (Fubini).
  const double other = mixed_norm(traj, Axis::x,
                                  {{Axis::x, 2.0}, {Axis::t, 2.0}, {Axis::y, 2.0}});
  CHECK(std::abs(nested - other) < 1e-12);
}

TEST_CASE("mixed norm factorizes on separable data") {
  Grid2D g(48, 40, 7.0, 5.0);
  Trajectory traj;
  traj.grid = g;
  traj.times = {0.0, 0.3, 0.7, 1.0, 1.6};
  auto a = [](double x) { return std::exp(-x * x / 2.0) + 0.2; };
  auto b = [](double y) { return std::cos(0.7 * y) + 1.5; };
  auto c = [](double t) { return 1.0 / (1.0 + t); };
  for (double t : traj.times) {
    Field2D f = oracle::sample(g, [&](double x, double y) { return a(x) * b(y) * c(t); });
    traj.snapshots.push_back(f);
  }
  double sup_a = 0.0, b_sq = 0.0, c_sq = 0.0;
  for (int i = 0; i < g.nx; ++i) sup_a = std::max(sup_a, std::abs(a(g.x(i))));
  for (int j = 0; j < g.ny; ++j) b_sq += b(g.y(j)) * b(g.y(j)) * g.dy();
  std::vector<double> wt = {0.15, 0.35, 0.35, 0.45, 0.3};
  for (size_t i = 0; i < traj.times.size(); ++i)
    c_sq += wt[i] * c(traj.times[i]) * c(traj.times[i]);
  const double expected = sup_a * std::sqrt(b_sq) * std::sqrt(c_sq);
  const double nested = mixed_norm(traj, Axis::x,
                                   {{Axis::x, kInf}, {Axis::y, 2.0}, {Axis::t, 2.0}});
  CHECK(std::abs(nested - expected) < 1e-10);
}

TEST_CASE("mixed norm of the unit field over a unit window is one") {
  Grid2D g(16, 16, 3.0, 3.0);
  Trajectory traj;
  traj.grid = g;
  traj.times = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (size_t i = 0; i < traj.times.size(); ++i)
    traj.snapshots.push_back(constant_field(g, 1.0));
  const double v = mixed_norm(traj, Axis::t,
                              {{Axis::t, 2.0}, {Axis::x, kInf}, {Axis::y, kInf}});
  CHECK(std::abs(v - 1.0) < 1e-14);
}

TEST_CASE("mixed norm rejects malformed exponent lists") {
  Grid2D g(16, 16, 3.0, 3.0);
  Trajectory traj;
  traj.grid = g;
  traj.times = {0.0, 1.0};
  traj.snapshots = {constant_field(g, 1.0), constant_field(g, 1.0)};
  CHECK(oracle::throws_code(Err::invalid_input, [&] {
    mixed_norm(traj, Axis::x, {{Axis::x, 2.0}, {Axis::x, 2.0}, {Axis::t, 2.0}});
  }));
  CHECK(oracle::throws_code(Err::invalid_input, [&] {
    mixed_norm(traj, Axis::x, {{Axis::x, 2.0}, {Axis::y, 2.0}});
  }));
  CHECK(oracle::throws_code(Err::invalid_input, [&] {
    mixed_norm(traj, Axis::x, {{Axis::x, 3.0}, {Axis::y, 2.0}, {Axis::t, 2.0}});
  }));
  CHECK(oracle::throws_code(Err::invalid_input, [&] {
    mixed_norm(traj, Axis::y, {{Axis::x, 2.0}, {Axis::y, 2.0}, {Axis::t, 2.0}});
  }));
}

TEST_CASE("sup-in-space norm dominates the value at any fixed point") {
  Grid2D g(32, 32, 6.0, 6.0);
  Trajectory traj;
  traj.grid = g;
  traj.times = {0.0, 0.4, 1.0};
  for (double t : traj.times)
    traj.snapshots.push_back(oracle::sample(g, [t](double x, double y) {
      return std::sin(x + t) * std::exp(-y * y / 4.0);
    }));
  const double lhs = mixed_norm(traj, Axis::t,
                                {{Axis::t, 2.0}, {Axis::x, kInf}, {Axis::y, kInf}});
  const int ix = 11, iy = 20;
  std::vector<double> wt = {0.2, 0.5, 0.3};
  double fixed_sq = 0.0;
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const double v = traj.snapshots[i].data[static_cast<size_t>(iy) * g.nx + ix];
    fixed_sq += wt[i] * v * v;
  }
  CHECK(lhs >= std::sqrt(fixed_sq) - 1e-14);
}

TEST_CASE("trajectory norm: zero input gives a zero report") {
  Grid2D g(32, 32, 8.0, 8.0);
  Trajectory traj;
  traj.grid = g;
  traj.times = {0.0, 0.5, 1.0};
  for (int i = 0; i < 3; ++i)
    traj.snapshots.push_back(Field2D(g));
  NormReport rep = triple_norm(traj, 0.9);
  for (double c : rep.component) CHECK(c == 0.0);
  CHECK(rep.total == 0.0);
}

TEST_CASE("trajectory norm: free evolution preserves the H^s component") {
  // Dispersion sends algebraic tails toward the box edge; the box is sized
  // so they stay below the weighted-norm decay precondition over the window.
  Grid2D g(128, 128, 28.0, 28.0);
  Field2D v0 = oracle::make_gaussian(g, 1.5, 1.5, 0.0, 0.0, 1.0);
  Trajectory traj = free_evolution(v0, {0.0, 0.125, 0.25});
  const double s = 0.9;
  NormReport rep = triple_norm(traj, s);
  CHECK(std::abs(rep.component[0] - sobolev_norm(v0, s)) < 1e-10);
  double sum = 0.0;
  for (double c : rep.component) {
    CHECK(c >= 0.0);
    sum += c;
  }
  CHECK(rep.total == doctest::Approx(sum).epsilon(1e-14));

  CHECK(oracle::throws_code(Err::invalid_input, [&] { triple_norm(traj, 0.75); }));
}

TEST_CASE("trajectory norm components converge under grid refinement") {
  std::vector<double> times;
  for (int i = 0; i <= 8; ++i) times.push_back(i / 32.0);
  Grid2D fine(128, 128, 28.0, 28.0);
  Grid2D coarse(64, 64, 28.0, 28.0);
  Field2D v0f = oracle::make_gaussian(fine, 1.5, 1.5, 0.0, 0.0, 1.0);
  Field2D v0c = oracle::make_gaussian(coarse, 1.5, 1.5, 0.0, 0.0, 1.0);
  NormReport rf = triple_norm(free_evolution(v0f, times), 0.9);
  NormReport rc = triple_norm(free_evolution(v0c, times), 0.9);
  for (int i = 0; i < 10; ++i) {
    CHECK(rf.component[i] > 0.0);
    CHECK(std::abs(rf.component[i] - rc.component[i]) / rf.component[i] < 0.01);
  }
}

TEST_CASE("trajectory norm is componentwise subadditive under concatenation") {
  Grid2D g(64, 64, 28.0, 28.0);
  Field2D v0 = oracle::make_gaussian(g, 1.5, 1.5, 0.0, 0.0, 1.0);
  Trajectory full = free_evolution(v0, {0.0, 0.05, 0.1, 0.15, 0.2});

  Trajectory a;
  a.grid = g;
  a.times = {0.0, 0.05, 0.1};
  a.snapshots = {full.snapshots[0], full.snapshots[1], full.snapshots[2]};
  Trajectory b;
  b.grid = g;
  b.times = {0.0, 0.05, 0.1};  // second half, shifted to start at 0
  b.snapshots = {full.snapshots[2], full.snapshots[3], full.snapshots[4]};

  const double s = 0.9;
  NormReport rf = triple_norm(full, s);
  NormReport ra = triple_norm(a, s);
  NormReport rb = triple_norm(b, s);
  for (int i = 0; i < 10; ++i)
    CHECK(rf.component[i] <= ra.component[i] + rb.component[i] + 1e-10);
  // The sup-in-time components are exact maxima across the two halves.
  for (int i : {0, 9})
    CHECK(std::abs(rf.component[i] - std::max(ra.component[i], rb.component[i])) < 1e-12);
}

TEST_CASE("interpolation check: boundary, homogeneity and weight kinds") {
  // J^a output decays like e^{-r} (Bessel-kernel tail), not like a Gaussian;
  // the box keeps that tail under the weighted-norm precondition.
  Grid2D g(128, 128, 24.0, 24.0);
  Field2D f = oracle::make_gaussian(g, 1.0, 1.0, 0.0, 0.0, 1.0);

  InterpolationCheck near_one =
      interpolation_check(f, 2.0, 1.0, 1.0 - 1e-9, InterpolationWeight::bracket());
  CHECK(std::abs(near_one.lhs / near_one.rhs_product - 1.0) < 1e-6);

  InterpolationCheck base =
      interpolation_check(f, 2.0, 1.0, 0.5, InterpolationWeight::bracket());
  Field2D f2 = f;
  for (double& v : f2.data) v *= 2.0;
  InterpolationCheck doubled =
      interpolation_check(f2, 2.0, 1.0, 0.5, InterpolationWeight::bracket());
  CHECK(std::abs(doubled.lhs - 2.0 * base.lhs) < 1e-12 * doubled.lhs + 1e-14);
  CHECK(std::abs(doubled.rhs_product - 2.0 * base.rhs_product) <
        1e-12 * doubled.rhs_product + 1e-14);

  // A truncation radius beyond the box reproduces the bracket weight exactly.
  InterpolationCheck far_trunc =
      interpolation_check(f, 2.0, 1.0, 0.5, InterpolationWeight::truncated(64));
  CHECK(std::abs(far_trunc.lhs - base.lhs) < 1e-12);
  CHECK(std::abs(far_trunc.rhs_product - base.rhs_product) < 1e-12);
  // A tight radius gives a strictly smaller weighted side.
  InterpolationCheck tight_trunc =
      interpolation_check(f, 2.0, 1.0, 0.5, InterpolationWeight::truncated(1));
  CHECK(tight_trunc.lhs < base.lhs);

  CHECK(oracle::throws_code(Err::invalid_input, [&] {
    interpolation_check(f, 2.0, 1.0, 0.0, InterpolationWeight::bracket());
  }));
  CHECK(oracle::throws_code(Err::invalid_input, [&] {
    interpolation_check(f, 2.0, 1.0, 1.0, InterpolationWeight::bracket());
  }));
  CHECK(oracle::throws_code(Err::invalid_input, [&] {
    interpolation_check(f, -1.0, 1.0, 0.5, InterpolationWeight::bracket());
  }));
}

TEST_CASE("leibniz defect: constant factor and zero field are exact") {
  Grid1D g(256, 10.0);
  std::vector<double> f(g.n), ones(g.n, 1.0), zero(g.n, 0.0);
  for (int i = 0; i < g.n; ++i) f[i] = std::exp(-g.x(i) * g.x(i) / 2.0);

  LeibnizDefect unit = leibniz_defect(g, f, ones, 0.5, 2);
  CHECK(unit.defect < 1e-12);

  LeibnizDefect null = leibniz_defect(g, zero, f, 0.5, 2);
  CHECK(null.defect < 1e-13);
  CHECK(null.bound_factor == 0.0);

  CHECK(oracle::throws_code(Err::invalid_input, [&] { leibniz_defect(g, f, f, 0.0, 2); }));
  CHECK(oracle::throws_code(Err::invalid_input, [&] { leibniz_defect(g, f, f, 1.0, 2); }));
  CHECK(oracle::throws_code(Err::unsupported, [&] { leibniz_defect(g, f, f, 0.5, 3); }));
}

TEST_CASE("leibniz defect is controlled for separated bumps") {
  Grid1D g(512, 12.0);
  std::vector<double> f(g.n), h(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    f[i] = std::exp(-(x + 2.5) * (x + 2.5) / 0.98);
    h[i] = std::exp(-(x - 2.5) * (x - 2.5) / 0.98);
  }
  LeibnizDefect d = leibniz_defect(g, f, h, 0.5, 2);
  CHECK(d.defect > 0.0);
  CHECK(d.bound_factor > 0.0);
  // The inequality holds with a modest constant on this pair.
  CHECK(d.defect <= 4.0 * d.bound_factor);
}
