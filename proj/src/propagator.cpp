#include "zk/propagator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <sstream>

namespace zk {

Field2D free_evolve(const Field2D& f, double t, MultiplierSpec::Form form) {
  MultiplierSpec spec;
  spec.kind = MultiplierSpec::Kind::propagator;
  spec.time = t;
  spec.form = form;
  return inverse_transform(apply_multiplier(transform(f), spec));
}

namespace {

// Gauss-Kronrod (7,15) nodes and weights, positive half (QUADPACK values).
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.0};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct Panel {
  double err = 0.0;
  double a = 0.0, b = 0.0;
  std::complex<double> val{0.0, 0.0};
  bool operator<(const Panel& o) const { return err < o.err; }
};

struct Integrand {
  double t, z, eps, cutoff;
  mutable long evaluations = 0;

  std::complex<double> operator()(double xi) const {
    ++evaluations;
    const double chi = smooth_step((cutoff - std::abs(xi)) / (0.2 * cutoff));
    if (chi == 0.0) return {0.0, 0.0};
    double amp = 1.0;
    if (eps > 0.0) amp = std::pow(std::abs(xi), eps);
    const double phase = t * xi * xi * xi + z * xi;
    return std::polar(amp * chi, phase);
  }

  double phase_at(double xi) const { return t * xi * xi * xi + z * xi; }
};

Panel gk15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const std::complex<double> fc = f(c);
  std::complex<double> k15 = kWgk[7] * fc;
  std::complex<double> g7 = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const std::complex<double> pair = f(c + h * kXgk[i]) + f(c - h * kXgk[i]);
    k15 += kWgk[i] * pair;
    if (i % 2 == 1) g7 += kWg[i / 2] * pair;  // odd slots are the Gauss nodes
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.val = h * k15;
  p.err = std::abs(h * (k15 - g7));
  return p;
}

}  // namespace

QuadResult oscillatory_factor(double t, double z, double eps, double cutoff, double abs_tol,
                              int max_panels) {
  require(t > 0.0, Err::invalid_input, "oscillatory integral: t must be positive");
  require(eps >= 0.0 && eps <= 0.5, Err::invalid_input,
          "oscillatory integral: fractional exponent must lie in [0,1/2]");
  require(cutoff > 0.0, Err::invalid_input, "oscillatory integral: cutoff must be positive");
  require(abs_tol > 0.0 && max_panels >= 16, Err::invalid_input,
          "oscillatory integral: tolerance and panel budget must be positive");

  Integrand f{t, z, eps, cutoff};

  // Seed boundaries: support edges, the amplitude kink at 0, stationary
  // points of the phase, then enough uniform splits per monotone-phase
  // segment to keep the per-panel phase swing near pi.
  std::vector<double> bounds = {-cutoff, -0.8 * cutoff, 0.0, 0.8 * cutoff, cutoff};
  if (z < 0.0) {
    const double s = std::sqrt(-z / (3.0 * t));
    if (s < cutoff) {
      bounds.push_back(s);
      bounds.push_back(-s);
    }
  }
  std::sort(bounds.begin(), bounds.end());
  std::vector<double> seeds;
  seeds.push_back(bounds.front());
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    const double a = bounds[i], b = bounds[i + 1];
    if (b <= a) continue;
    const double swing = std::abs(f.phase_at(b) - f.phase_at(a));
    int n = static_cast<int>(std::ceil(swing / M_PI));
    n = std::clamp(n, 1, std::max(1, max_panels / 4));
    for (int j = 1; j <= n; ++j) seeds.push_back(a + (b - a) * j / n);
  }

  std::priority_queue<Panel> heap;
  std::complex<double> total{0.0, 0.0};
  double total_err = 0.0;
  int panels = 0;
  auto push = [&](double a, double b) {
    Panel p = gk15(f, a, b);
    total += p.val;
    total_err += p.err;
    heap.push(p);
    ++panels;
  };
  for (std::size_t i = 0; i + 1 < seeds.size(); ++i) push(seeds[i], seeds[i + 1]);

  while (total_err > abs_tol && panels < max_panels) {
    Panel worst = heap.top();
    if (worst.err <= 0.0 || worst.b - worst.a < 1e-14 * cutoff) break;
    heap.pop();
    total -= worst.val;
    total_err -= worst.err;
    --panels;
    const double mid = 0.5 * (worst.a + worst.b);
    push(worst.a, mid);
    push(mid, worst.b);
  }

  if (total_err > abs_tol) {
    std::ostringstream msg;
    msg << "oscillatory integral did not converge: error estimate " << total_err
        << " exceeds tolerance " << abs_tol << " at the panel budget (" << panels << " panels)";
    fail(Err::quadrature, msg.str());
  }

  QuadResult r;
  r.value = total;
  r.error_estimate = total_err;
  r.evaluations = f.evaluations;
  return r;
}

QuadResult oscillatory_integral(const OscillatoryIntegralSpec& spec) {
  const double eps_x =
      spec.kind == OscillatoryIntegralSpec::Kind::x_weighted ? spec.eps : 0.0;
  const double eps_y =
      spec.kind == OscillatoryIntegralSpec::Kind::y_weighted ? spec.eps : 0.0;
  QuadResult fx =
      oscillatory_factor(spec.t, spec.x, eps_x, spec.cutoff, spec.abs_tol, spec.max_panels);
  QuadResult fy =
      oscillatory_factor(spec.t, spec.y, eps_y, spec.cutoff, spec.abs_tol, spec.max_panels);
  QuadResult r;
  r.value = fx.value * fy.value;
  r.error_estimate = std::abs(fx.value) * fy.error_estimate +
                     std::abs(fy.value) * fx.error_estimate +
                     fx.error_estimate * fy.error_estimate;
  r.evaluations = fx.evaluations + fy.evaluations;
  return r;
}

namespace {

void run_fft_1d(std::vector<std::complex<double>>& io) {
  static std::mutex m;
  static std::map<int, std::pair<fftw_complex*, fftw_plan>> cache;
  std::lock_guard<std::mutex> lock(m);
  const int n = static_cast<int>(io.size());
  auto it = cache.find(n);
  if (it == cache.end()) {
    fftw_complex* buf = fftw_alloc_complex(n);
    require(buf != nullptr, Err::internal, "fft: allocation failed");
    fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    require(plan != nullptr, Err::internal, "fft: plan creation failed");
    it = cache.emplace(n, std::make_pair(buf, plan)).first;
  }
  fftw_complex* buf = it->second.first;
  for (int i = 0; i < n; ++i) {
    buf[i][0] = io[i].real();
    buf[i][1] = io[i].imag();
  }
  fftw_execute(it->second.second);
  for (int i = 0; i < n; ++i) io[i] = {buf[i][0], buf[i][1]};
}

}  // namespace

KernelProfile kernel_profile(double t, double eps, double cutoff, int samples) {
  require(t > 0.0, Err::invalid_input, "kernel profile: t must be positive");
  require(eps >= 0.0 && eps <= 0.5, Err::invalid_input,
          "kernel profile: fractional exponent must lie in [0,1/2]");
  require(cutoff > 0.0, Err::invalid_input, "kernel profile: cutoff must be positive");
  require(samples >= 64 && samples % 2 == 0, Err::invalid_input,
          "kernel profile: need an even sample count of at least 64");

  const int m = samples;
  const double dxi = 2.0 * cutoff / m;
  Integrand f{t, 0.0, eps, cutoff};
  // value(x_j) = dxi * sum_m g(xi_m) e^{i xi_m x_j}, xi_m = m' dxi, x_j = j pi/K:
  // exactly an inverse DFT once modes and samples are laid out in bin order.
  std::vector<std::complex<double>> bins(m, {0.0, 0.0});
  for (int k = -m / 2; k < m / 2; ++k) bins[(k + m) % m] = f(k * dxi);
  run_fft_1d(bins);
  KernelProfile p;
  p.dx = M_PI / cutoff;
  p.x0 = -(m / 2) * p.dx;
  p.values.resize(m);
  for (int i = 0; i < m; ++i) {
    const int j = i - m / 2;
    p.values[i] = dxi * bins[(j + m) % m];
  }
  return p;
}

DecayFit decay_exponent_fit(const std::vector<double>& t,
                            const std::vector<double>& magnitude) {
  require(t.size() == magnitude.size() && t.size() >= 4, Err::invalid_input,
          "decay fit: need at least four matched samples");
  const int n = static_cast<int>(t.size());
  double mx = 0.0, my = 0.0;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    require(t[i] > 0.0 && magnitude[i] > 0.0, Err::invalid_input,
            "decay fit: samples must be positive");
    xs[i] = std::log(t[i]);
    ys[i] = std::log(magnitude[i]);
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  require(sxx > 0.0, Err::invalid_input, "decay fit: time samples must not be identical");
  DecayFit fit;
  fit.slope = sxy / sxx;
  const double ss_res = syy - fit.slope * sxy;
  // Constant samples (variance at rounding level): the flat line is exact.
  if (syy <= 1e-24 * n * (1.0 + my * my)) {
    fit.slope = 0.0;
    fit.r_squared = 1.0;
  } else {
    fit.r_squared = std::max(0.0, 1.0 - ss_res / syy);
  }
  return fit;
}

}  // namespace zk
