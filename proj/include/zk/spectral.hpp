#pragma once

#include <complex>
#include <functional>
#include <string>

#include "zk/grid.hpp"

namespace zk {

// ---------------------------------------------------------------------------
// Discrete Fourier transform pair (unitary convention)
//
//   forward :  F(xi,eta)   = (dx*dy/2pi)  * sum_{x,y} f(x,y) e^{-i(xi x + eta y)}
//   inverse :  f(x,y)      = (dxi*deta/2pi) * sum_{xi,eta} F(xi,eta) e^{+i(xi x + eta y)}
//
// With xi = pi*m/Lx this pair is exactly unitary on the grid: inverse(forward)
// is the identity and sum |F|^2 dxi deta == sum |f|^2 dx dy (Parseval) to
// machine precision.  Coefficients of a real field satisfy F(-k) = conj(F(k)).
// ---------------------------------------------------------------------------

Spectrum2D transform(const Field2D& f);
Field2D inverse_transform(const Spectrum2D& s);

// Complex-to-complex pair used internally (solver state, convolution kernels).
Spectrum2D transform_complex(const Spectrum2D& samples);
Spectrum2D inverse_transform_complex(const Spectrum2D& coefs);

// L2 norm of a sample field under the box measure: sqrt(sum f^2 dx dy).
double l2_norm(const Field2D& f);

// ---------------------------------------------------------------------------
// Fourier multipliers
// ---------------------------------------------------------------------------

struct MultiplierSpec {
  enum class Kind {
    fractional_x,   // |xi|^order
    fractional_y,   // |eta|^order
    isotropic,      // (xi^2 + eta^2)^{order/2}
    bessel,         // (1 + xi^2 + eta^2)^{order/2}
    derivative_x,   // (i xi)^k, k = round(order) >= 0
    derivative_y,   // (i eta)^k
    propagator,     // exp(i t symbol), see Form below
    dyadic,         // frequency partition member, index = round(order) >= 0
  };
  // Dispersion symbol of the group the multiplier exponentiates.
  enum class Form {
    original,     // xi^3 + xi eta^2   (third x-derivative plus mixed term)
    symmetrized,  // xi^3 + eta^3     (after the rotation-scaling change of frame)
  };

  Kind kind = Kind::isotropic;
  double order = 0.0;   // exponent s, derivative count, or partition index
  double time = 0.0;    // propagator only
  Form form = Form::symmetrized;
};

// Evaluate the multiplier symbol at physical frequency (xi, eta).
std::complex<double> multiplier_symbol(const MultiplierSpec& spec, double xi, double eta);

// Apply a multiplier in frequency space: out_hat = symbol * in_hat.
Spectrum2D apply_multiplier(const Spectrum2D& s, const MultiplierSpec& spec);

// Convenience: transform, multiply, inverse-transform, project to real part.
// Fractional kinds with order < -1 are rejected (unsupported); negative
// orders evaluate the symbol as 0 on its singular set.
Field2D fractional_derivative(const Field2D& f, MultiplierSpec::Kind kind, double s);

// ---------------------------------------------------------------------------
// Smooth cutoffs and the dyadic partition of unity
// ---------------------------------------------------------------------------

// C-infinity step: 0 for theta <= 0, 1 for theta >= 1, strictly monotone
// between, built from e^{-1/theta} bump quotients.  Satisfies
// smooth_step(theta) + smooth_step(1 - theta) == 1 exactly.
double smooth_step(double theta);

// Member k >= 0 of the smooth dyadic frequency decomposition used by the
// norm layer.  Block 0 covers |xi|,|eta| <~ 1; block k lives on the dyadic
// corona 2^{k-1} <~ max(|xi|,|eta|) <~ 2^k.  Partial sums telescope:
// sum_{k<=K} psi_k == 1 wherever max(|xi|,|eta|) <= 2^K - 1.
double dyadic_partition_value(int k, double xi, double eta);

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

// Largest |f| sampled on lattice points at distance >= radius from the
// origin (Euclidean, no periodic wrap).  Used to enforce the "compactly
// supported well inside the box" precondition of weighted measurements.
double boundary_magnitude(const Field2D& f, double radius);

// Throws Err::precondition when the field has visible mass near the box
// boundary: max_{|x|>=r} |f| > tol_rel * max|f| with r = min(Lx,Ly)/2.
void check_boundary_decay(const Field2D& f, double tol_rel = 1e-12);

// Fraction of spectral energy carried by the top third of the frequency
// range in either axis; the Nyquist-safety precondition used by quadrature
// front-ends.  Returns 0 for the zero field.
double high_frequency_energy_fraction(const Field2D& f);

}  // namespace zk
