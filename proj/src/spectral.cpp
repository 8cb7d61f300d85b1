#include "zk/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace zk {

namespace {

// ---------------------------------------------------------------------------
// FFT engine: cached FFTW plans per grid shape.  FFTW_ESTIMATE keeps plan
// selection deterministic run to run (FFTW_MEASURE races the clock and can
// pick different algorithms, changing results in the last bits).  The cache
// owns aligned buffers; callers copy in and out under the lock.
// ---------------------------------------------------------------------------
struct PlanEntry {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

PlanEntry& plan_for(int nx, int ny) {
  static std::map<std::pair<int, int>, PlanEntry> cache;
  auto key = std::make_pair(nx, ny);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  PlanEntry e;
  e.buf = fftw_alloc_complex(static_cast<std::size_t>(nx) * ny);
  require(e.buf != nullptr, Err::internal, "fft: allocation failed");
  // FFTW's first dimension is the slow one; our layout is data[iy*nx + ix].
  e.fwd = fftw_plan_dft_2d(ny, nx, e.buf, e.buf, FFTW_FORWARD, FFTW_ESTIMATE);
  e.bwd = fftw_plan_dft_2d(ny, nx, e.buf, e.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  require(e.fwd && e.bwd, Err::internal, "fft: plan creation failed");
  return cache.emplace(key, e).first->second;
}

// Run one in-place transform of `io` (size nx*ny) with the given sign.
void run_fft(int nx, int ny, std::vector<std::complex<double>>& io, int sign) {
  std::lock_guard<std::mutex> lock(plan_mutex());
  PlanEntry& e = plan_for(nx, ny);
  const std::size_t n = static_cast<std::size_t>(nx) * ny;
  for (std::size_t i = 0; i < n; ++i) {
    e.buf[i][0] = io[i].real();
    e.buf[i][1] = io[i].imag();
  }
  fftw_execute(sign == FFTW_FORWARD ? e.fwd : e.bwd);
  for (std::size_t i = 0; i < n; ++i) io[i] = {e.buf[i][0], e.buf[i][1]};
}

inline double checker(int ix, int iy) { return ((ix + iy) & 1) ? -1.0 : 1.0; }

// Sample points sit at x = -L + i*dx, so the continuous-frequency kernel
// e^{-i xi x} picks up e^{+i pi m} relative to the raw DFT kernel: a (-1)^m
// checkerboard on the coefficient side (mode parity == bin parity, n even).
void apply_checkerboard(const Grid2D& g, std::vector<std::complex<double>>& a) {
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) a[static_cast<std::size_t>(iy) * g.nx + ix] *= checker(ix, iy);
}

}  // namespace

Spectrum2D transform(const Field2D& f) {
  const Grid2D& g = f.grid;
  require(g.size() == f.data.size(), Err::invalid_input, "transform: field/grid size mismatch");
  std::vector<std::complex<double>> work(f.data.begin(), f.data.end());
  run_fft(g.nx, g.ny, work, FFTW_FORWARD);
  apply_checkerboard(g, work);
  const double scale = g.dx() * g.dy() / (2.0 * M_PI);
  Spectrum2D out(g);
  for (std::size_t i = 0; i < work.size(); ++i) out.coef[i] = work[i] * scale;
  return out;
}

Field2D inverse_transform(const Spectrum2D& s) {
  const Grid2D& g = s.grid;
  require(g.size() == s.coef.size(), Err::invalid_input, "inverse_transform: size mismatch");
  std::vector<std::complex<double>> work = s.coef;
  apply_checkerboard(g, work);
  run_fft(g.nx, g.ny, work, FFTW_BACKWARD);
  const double scale = g.dxi() * g.deta() / (2.0 * M_PI);
  Field2D out(g);
  for (std::size_t i = 0; i < work.size(); ++i) out.data[i] = work[i].real() * scale;
  return out;
}

Spectrum2D transform_complex(const Spectrum2D& samples) {
  const Grid2D& g = samples.grid;
  require(g.size() == samples.coef.size(), Err::invalid_input, "transform: size mismatch");
  std::vector<std::complex<double>> work = samples.coef;
  run_fft(g.nx, g.ny, work, FFTW_FORWARD);
  apply_checkerboard(g, work);
  const double scale = g.dx() * g.dy() / (2.0 * M_PI);
  Spectrum2D out(g);
  for (std::size_t i = 0; i < work.size(); ++i) out.coef[i] = work[i] * scale;
  return out;
}

Spectrum2D inverse_transform_complex(const Spectrum2D& coefs) {
  const Grid2D& g = coefs.grid;
  require(g.size() == coefs.coef.size(), Err::invalid_input, "inverse_transform: size mismatch");
  std::vector<std::complex<double>> work = coefs.coef;
  apply_checkerboard(g, work);
  run_fft(g.nx, g.ny, work, FFTW_BACKWARD);
  const double scale = g.dxi() * g.deta() / (2.0 * M_PI);
  Spectrum2D out(g);
  for (std::size_t i = 0; i < work.size(); ++i) out.coef[i] = work[i] * scale;
  return out;
}

double l2_norm(const Field2D& f) {
  double s = 0.0;
  for (double v : f.data) s += v * v;
  return std::sqrt(s * f.grid.dx() * f.grid.dy());
}

// ---------------------------------------------------------------------------
// Multipliers
// ---------------------------------------------------------------------------

namespace {

std::complex<double> integer_derivative_symbol(double base, int k) {
  // (i*base)^k without going through complex pow (exact at base == 0).
  double mag = 1.0;
  for (int j = 0; j < k; ++j) mag *= base;
  switch (k & 3) {
    case 0: return {mag, 0.0};
    case 1: return {0.0, mag};
    case 2: return {-mag, 0.0};
    default: return {0.0, -mag};
  }
}

double fractional_power(double base, double s) {
  // base >= 0.  Negative exponents vanish on the symbol's singular set
  // (base == 0) by convention; the zero mode of an inverse derivative
  // carries no information on a periodic box.
  if (base == 0.0) return s < 0.0 ? 0.0 : (s == 0.0 ? 1.0 : 0.0);
  return std::pow(base, s);
}

int integer_order(const MultiplierSpec& spec, const char* what) {
  double r = std::nearbyint(spec.order);
  require(r == spec.order && r >= 0.0, Err::invalid_input,
          std::string(what) + ": order must be a nonnegative integer");
  return static_cast<int>(r);
}

}  // namespace

std::complex<double> multiplier_symbol(const MultiplierSpec& spec, double xi, double eta) {
  using Kind = MultiplierSpec::Kind;
  switch (spec.kind) {
    case Kind::fractional_x:
      return fractional_power(std::abs(xi), spec.order);
    case Kind::fractional_y:
      return fractional_power(std::abs(eta), spec.order);
    case Kind::isotropic:
      return fractional_power(xi * xi + eta * eta, spec.order / 2.0);
    case Kind::bessel:
      return std::pow(1.0 + xi * xi + eta * eta, spec.order / 2.0);
    case Kind::derivative_x:
      return integer_derivative_symbol(xi, integer_order(spec, "derivative_x"));
    case Kind::derivative_y:
      return integer_derivative_symbol(eta, integer_order(spec, "derivative_y"));
    case Kind::propagator: {
      const double phase = spec.form == MultiplierSpec::Form::original
                               ? spec.time * (xi * xi * xi + xi * eta * eta)
                               : spec.time * (xi * xi * xi + eta * eta * eta);
      return std::polar(1.0, phase);  // exact unit modulus at every point
    }
    case Kind::dyadic:
      return dyadic_partition_value(integer_order(spec, "dyadic"), xi, eta);
  }
  fail(Err::internal, "multiplier_symbol: unknown kind");
}

namespace {

void validate_multiplier(const MultiplierSpec& spec) {
  using Kind = MultiplierSpec::Kind;
  if (spec.kind == Kind::fractional_x || spec.kind == Kind::fractional_y ||
      spec.kind == Kind::isotropic || spec.kind == Kind::bessel) {
    require(spec.order >= -1.0, Err::unsupported,
            "multiplier: fractional orders below -1 are not supported");
    require(std::isfinite(spec.order), Err::invalid_input, "multiplier: order must be finite");
  }
}

}  // namespace

Spectrum2D apply_multiplier(const Spectrum2D& s, const MultiplierSpec& spec) {
  validate_multiplier(spec);
  const Grid2D& g = s.grid;
  Spectrum2D out(g);
  for (int iy = 0; iy < g.ny; ++iy) {
    const double eta = g.eta(iy);
    for (int ix = 0; ix < g.nx; ++ix) {
      const std::size_t idx = static_cast<std::size_t>(iy) * g.nx + ix;
      out.coef[idx] = multiplier_symbol(spec, g.xi(ix), eta) * s.coef[idx];
    }
  }
  return out;
}

Field2D fractional_derivative(const Field2D& f, MultiplierSpec::Kind kind, double s) {
  MultiplierSpec spec;
  spec.kind = kind;
  spec.order = s;
  return inverse_transform(apply_multiplier(transform(f), spec));
}

// ---------------------------------------------------------------------------
// Smooth step and dyadic partition
// ---------------------------------------------------------------------------

namespace {

constexpr int kStepTableN = 4096;  // intervals; values at i/N for i = 0..N

struct StepTable {
  std::vector<double> v;  // node values
  std::vector<double> s;  // node slopes (d/d theta)
};

const StepTable& step_table() {
  static const StepTable table = [] {
    StepTable t;
    t.v.assign(kStepTableN + 1, 0.0);
    t.s.assign(kStepTableN + 1, 0.0);
    auto bump = [](double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); };
    for (int i = 0; i <= kStepTableN / 2; ++i) {
      const double x = static_cast<double>(i) / kStepTableN;
      const double b0 = bump(x), b1 = bump(1.0 - x);
      t.v[i] = (b0 + b1) == 0.0 ? 0.0 : b0 / (b0 + b1);
      if (i > 0) t.v[i] = std::max(t.v[i], t.v[i - 1]);  // keep the table monotone
      t.v[kStepTableN - i] = 1.0 - t.v[i];  // complement identity, exact
    }
    // Harmonic-mean slopes (monotone Hermite); mirrored like the values so
    // the complement identity carries over to the interpolant.  Flat tails
    // get zero end slopes.
    for (int i = 1; i <= kStepTableN / 2; ++i) {
      const double dm = (t.v[i] - t.v[i - 1]) * kStepTableN;
      const double dp = (t.v[i + 1] - t.v[i]) * kStepTableN;
      t.s[i] = (dm <= 0.0 || dp <= 0.0) ? 0.0 : 2.0 * dm * dp / (dm + dp);
      t.s[kStepTableN - i] = t.s[i];
    }
    return t;
  }();
  return table;
}

}  // namespace

double smooth_step(double theta) {
  if (theta <= 0.0) return 0.0;
  if (theta >= 1.0) return 1.0;
  const StepTable& t = step_table();
  const double ug = theta * kStepTableN;
  int k = static_cast<int>(std::floor(ug));
  k = std::clamp(k, 0, kStepTableN - 1);
  const double u = ug - k;
  const double p1 = t.v[k], p2 = t.v[k + 1];
  const double s1 = t.s[k], s2 = t.s[k + 1];
  const double h = 1.0 / kStepTableN;
  const double um = 1.0 - u;
  const double h00 = (1.0 + 2.0 * u) * um * um;
  const double h10 = u * um * um;
  const double h01 = u * u * (3.0 - 2.0 * u);
  const double h11 = u * u * (u - 1.0);
  // Basis mirror (h00(1-u) = h01(u), h10(1-u) = -h11(u)) plus the mirrored
  // table gives p(theta) + p(1-theta) == 1 up to rounding; harmonic-mean
  // slopes keep each piece monotone, and the endpoint clamp makes that
  // robust against last-bit wiggle without breaking the mirror.
  const double p = h00 * p1 + h01 * p2 + h * (h10 * s1 + h11 * s2);
  return std::clamp(p, p1, p2);
}

namespace {

// Smooth indicator of the dyadic box: 1 for |v| <= 2^{k+1}-1, 0 for |v| >= 2^{k+1}.
double box_cut(int k, double v) { return smooth_step(std::ldexp(1.0, k + 1) - std::abs(v)); }

}  // namespace

double dyadic_partition_value(int k, double xi, double eta) {
  require(k >= 0, Err::invalid_input, "dyadic partition: index must be nonnegative");
  const double outer = box_cut(k, xi) * box_cut(k, eta);
  if (k == 0) return outer;
  // box_cut(k, .) == 1 on the support of box_cut(k-1, .), so these members
  // telescope exactly: sum over k <= K equals box_cut(K,xi)*box_cut(K,eta).
  return outer - box_cut(k - 1, xi) * box_cut(k - 1, eta);
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

double boundary_magnitude(const Field2D& f, double radius) {
  const Grid2D& g = f.grid;
  double worst = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    const double y = g.y(iy);
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = g.x(ix);
      if (x * x + y * y >= radius * radius)
        worst = std::max(worst, std::abs(f.at(ix, iy)));
    }
  }
  return worst;
}

void check_boundary_decay(const Field2D& f, double tol_rel) {
  const Grid2D& g = f.grid;
  double peak = 0.0;
  for (double v : f.data) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return;
  const double radius = 0.5 * std::min(g.Lx, g.Ly);
  const double edge = boundary_magnitude(f, radius);
  require(edge <= tol_rel * peak, Err::precondition,
          "field has visible mass near the box boundary; enlarge the box or "
          "shrink the envelope");
}

double high_frequency_energy_fraction(const Field2D& f) {
  const Grid2D& g = f.grid;
  Spectrum2D s = transform(f);
  double total = 0.0, high = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double e = std::norm(s.at(ix, iy));
      total += e;
      if (std::abs(g.mode_x(ix)) * 3 >= g.nx || std::abs(g.mode_y(iy)) * 3 >= g.ny) high += e;
    }
  }
  return total == 0.0 ? 0.0 : high / total;
}

}  // namespace zk
