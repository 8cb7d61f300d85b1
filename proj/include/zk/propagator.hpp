#pragma once

#include <complex>
#include <vector>

#include "zk/spectral.hpp"

namespace zk {

// Apply the free group e^{tL} of the linearized equation to a real field.
// Unit-modulus symbol, so the L2 norm is conserved to machine precision; the
// imaginary residue of the unpaired Nyquist modes is projected away (callers
// feed band-limited data, making the projection exact).
Field2D free_evolve(const Field2D& f, double t, MultiplierSpec::Form form);

// ---------------------------------------------------------------------------
// Oscillatory kernel integrals
//
// The dispersive kernel estimates all reduce to the separable model integral
//
//   P(t, x, y) = (int amp(xi) chi_K(xi) e^{i(t xi^3 + x xi)} dxi)
//              * (int amp'(eta) chi_K(eta) e^{i(t eta^3 + y eta)} deta)
//
// where chi_K(v) = smooth_step((K - |v|)/(0.2 K)) is a smooth frequency
// cutoff and exactly one factor carries a fractional amplitude weight:
// |xi|^eps on the x factor (x_weighted) or |eta|^eps on the y factor
// (y_weighted).  The other factor has unit amplitude.
// ---------------------------------------------------------------------------

struct OscillatoryIntegralSpec {
  enum class Kind { x_weighted, y_weighted };
  Kind kind = Kind::x_weighted;
  double eps = 0.0;      // fractional amplitude exponent, in [0, 1/2]
  double cutoff = 8.0;   // K
  double t = 1.0;        // must be > 0
  double x = 0.0, y = 0.0;
  double abs_tol = 1e-9;
  int max_panels = 4000;  // refinement budget per 1D factor
};

struct QuadResult {
  std::complex<double> value{0.0, 0.0};
  double error_estimate = 0.0;
  long evaluations = 0;
};

// One separable factor: int amp(xi) chi_K(xi) e^{i(t xi^3 + z xi)} dxi with
// amp = |xi|^eps.  Adaptive Gauss-Kronrod (7,15) with oscillation-aware
// panel seeding; throws Err::quadrature (message carries the running error
// estimate) when the panel budget cannot reach abs_tol.
QuadResult oscillatory_factor(double t, double z, double eps, double cutoff, double abs_tol,
                              int max_panels);

// Full separable integral per the spec above.  t <= 0 is rejected.
QuadResult oscillatory_integral(const OscillatoryIntegralSpec& spec);

// Values of one 1D factor on a uniform x-grid via a dense FFT of the
// frequency-side integrand (trapezoid in xi).  Spectrally accurate for
// eps == 0; for eps > 0 the amplitude kink at the origin limits accuracy to
// O(dxi^{1+eps}) absolute — ample for scanning sup_x, not for tight oracle
// comparisons (use oscillatory_factor for those).
struct KernelProfile {
  double x0 = 0.0;      // first sample point
  double dx = 0.0;      // spacing
  std::vector<std::complex<double>> values;
  double x(int i) const { return x0 + i * dx; }
};

KernelProfile kernel_profile(double t, double eps, double cutoff, int samples);

// Least-squares line through (log t, log magnitude): slope and coefficient
// of determination.  A pure power law magnitude = C t^p gives slope = p and
// r_squared = 1; constant samples give slope 0 with r_squared defined as 1
// (the zero-variance fit is exact).  Requires at least 4 samples, all t > 0
// and all magnitudes > 0 (Err::invalid_input otherwise).
struct DecayFit {
  double slope = 0.0;      // d log(magnitude) / d log(t)
  double r_squared = 1.0;  // 1 - SS_res / SS_tot (1 when SS_tot ~ 0)
};

DecayFit decay_exponent_fit(const std::vector<double>& t,
                            const std::vector<double>& magnitude);

}  // namespace zk
