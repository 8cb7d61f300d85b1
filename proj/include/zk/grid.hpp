#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "zk/common.hpp"

namespace zk {

// Uniform periodic grid on the square box [-Lx, Lx) x [-Ly, Ly).
// Sample points x_i = -Lx + i*dx, i = 0..nx-1 (and likewise in y), so the
// left edge is a sample and the right edge is its periodic image.  Frequency
// modes are the usual FFT integers m in [-n/2, n/2), mapped to physical
// wavenumbers xi = pi*m/Lx (the box has period 2Lx).
struct Grid2D {
  int nx = 0, ny = 0;
  double Lx = 0.0, Ly = 0.0;

  Grid2D() = default;
  Grid2D(int nx_, int ny_, double Lx_, double Ly_) : nx(nx_), ny(ny_), Lx(Lx_), Ly(Ly_) {
    require(nx >= 8 && ny >= 8, Err::invalid_input, "grid: nx and ny must be at least 8");
    require(nx % 2 == 0 && ny % 2 == 0, Err::invalid_input, "grid: nx and ny must be even");
    require(Lx > 0.0 && Ly > 0.0, Err::invalid_input, "grid: box half-lengths must be positive");
  }

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  double dx() const { return 2.0 * Lx / nx; }
  double dy() const { return 2.0 * Ly / ny; }
  double x(int i) const { return -Lx + i * dx(); }
  double y(int j) const { return -Ly + j * dy(); }

  // Signed integer mode for FFT bin i (natural FFT ordering).
  int mode_x(int i) const { return i < nx / 2 ? i : i - nx; }
  int mode_y(int j) const { return j < ny / 2 ? j : j - ny; }
  double dxi() const { return M_PI / Lx; }   // frequency spacing
  double deta() const { return M_PI / Ly; }
  double xi(int i) const { return dxi() * mode_x(i); }
  double eta(int j) const { return deta() * mode_y(j); }

  bool operator==(const Grid2D& o) const {
    return nx == o.nx && ny == o.ny && Lx == o.Lx && Ly == o.Ly;
  }
  bool operator!=(const Grid2D& o) const { return !(*this == o); }
};

// Real-valued sample field, row-major with x fastest: data[iy*nx + ix].
struct Field2D {
  Grid2D grid;
  std::vector<double> data;

  Field2D() = default;
  explicit Field2D(const Grid2D& g) : grid(g), data(g.size(), 0.0) {}

  double& at(int ix, int iy) { return data[static_cast<std::size_t>(iy) * grid.nx + ix]; }
  double at(int ix, int iy) const { return data[static_cast<std::size_t>(iy) * grid.nx + ix]; }
};

// Complex Fourier coefficients in natural FFT bin order, same layout as
// Field2D: coef[iy*nx + ix] is the coefficient of mode (mode_x(ix), mode_y(iy)).
struct Spectrum2D {
  Grid2D grid;
  std::vector<std::complex<double>> coef;

  Spectrum2D() = default;
  explicit Spectrum2D(const Grid2D& g) : grid(g), coef(g.size(), {0.0, 0.0}) {}

  std::complex<double>& at(int ix, int iy) {
    return coef[static_cast<std::size_t>(iy) * grid.nx + ix];
  }
  std::complex<double> at(int ix, int iy) const {
    return coef[static_cast<std::size_t>(iy) * grid.nx + ix];
  }
};

}  // namespace zk
