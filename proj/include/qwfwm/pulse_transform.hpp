#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "qwfwm/spectral_response.hpp"

// Fourier machinery with the convention fixed by the pump pair: forward kernel
// e^{+i omega t}, unitary 1/sqrt(2*pi) normalization, eta = omega*tau. Under
// this convention a Gaussian pump Omega_p0 * e^{-(t/tau)^2} transforms to
// (Omega_p0*tau/sqrt(2)) * e^{-eta^2/4} exactly. Grids come in centered pairs
// with dt * deta = 2*pi/N.

namespace qwfwm {

namespace detail {

inline bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// In-place radix-2 transform: x_k <- sum_n x_n e^{sign * 2*pi*i*k*n/N}.
inline void fft_core(std::vector<cplx>& x, int sign) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / double(len);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0);
      for (std::size_t h = 0; h < len / 2; ++h) {
        const cplx u = x[i + h];
        const cplx v = x[i + h + len / 2] * w;
        x[i + h] = u + v;
        x[i + h + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

inline void require_uniform_centered(const std::vector<double>& g, const char* what) {
  const std::size_t n = g.size();
  // n >= 4 keeps the centering phase e^{i pi N/2} real (+1).
  if (n < 4 || !is_pow2(n))
    throw config_error(std::string(what) + ": grid length must be a power of two >= 4");
  const double d = g[1] - g[0];
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs((g[i] - g[i - 1]) - d) > 1e-9 * std::abs(d))
      throw config_error(std::string(what) + ": non-uniform grid rejected");
  if (std::abs(g[n / 2]) > 1e-9 * std::abs(d))
    throw config_error(std::string(what) + ": grid must be centered (zero at index N/2)");
}

}  // namespace detail

// Time-domain field samples: t in units of tau, values are Omega*tau/hbar.
struct TimeField {
  double z_um = 0;
  std::vector<double> t_grid;
  std::vector<cplx> values;
  bool any_pole = false;
};

inline std::vector<double> paired_time_grid(const std::vector<double>& eta_grid) {
  detail::require_uniform_centered(eta_grid, "paired_time_grid");
  const std::size_t n = eta_grid.size();
  const double deta = eta_grid[1] - eta_grid[0];
  const double dt = 2.0 * M_PI / (double(n) * deta);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = (double(i) - double(n / 2)) * dt;
  return t;
}

// W(eta_k) = dt/sqrt(2 pi) * sum_n Omega(t_n) e^{+i eta_k t_n}
inline SpectralField forward(const TimeField& time) {
  detail::require_uniform_centered(time.t_grid, "forward");
  if (time.t_grid.size() != time.values.size()) throw config_error("forward: size mismatch");
  const std::size_t n = time.t_grid.size();
  const double dt = time.t_grid[1] - time.t_grid[0];
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (i % 2 ? -time.values[i] : time.values[i]);
  detail::fft_core(x, +1);
  SpectralField out;
  out.z_um = time.z_um;
  const double deta = 2.0 * M_PI / (double(n) * dt);
  out.grid.resize(n);
  out.values.resize(n);
  out.pole_flags.assign(n, false);
  const double scale = dt / std::sqrt(2.0 * M_PI);
  for (std::size_t k = 0; k < n; ++k) {
    out.grid[k] = (double(k) - double(n / 2)) * deta;
    out.values[k] = (k % 2 ? -x[k] : x[k]) * scale;
  }
  return out;
}

// Omega(t_n) = deta/sqrt(2 pi) * sum_k W(eta_k) e^{-i eta_k t_n}
inline TimeField inverse(const SpectralField& spec) {
  detail::require_uniform_centered(spec.grid, "inverse");
  if (spec.grid.size() != spec.values.size()) throw config_error("inverse: size mismatch");
  const std::size_t n = spec.grid.size();
  const double deta = spec.grid[1] - spec.grid[0];
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (i % 2 ? -spec.values[i] : spec.values[i]);
  detail::fft_core(x, -1);
  TimeField out;
  out.z_um = spec.z_um;
  out.any_pole = spec.any_pole();
  const double dt = 2.0 * M_PI / (double(n) * deta);
  out.t_grid.resize(n);
  out.values.resize(n);
  const double scale = deta / std::sqrt(2.0 * M_PI);
  for (std::size_t k = 0; k < n; ++k) {
    out.t_grid[k] = (double(k) - double(n / 2)) * dt;
    out.values[k] = (k % 2 ? -x[k] : x[k]) * scale;
  }
  return out;
}

// Pump spectrum at the entrance: W_p(0,eta) = (Op0tau/sqrt(2)) e^{-eta^2/4}.
inline SpectralField gaussian_pump(double omega_p0_tau, const std::vector<double>& grid) {
  SpectralField f;
  f.z_um = 0.0;
  f.grid = grid;
  f.values.resize(grid.size());
  f.pole_flags.assign(grid.size(), false);
  const double a = omega_p0_tau / std::sqrt(2.0);
  for (std::size_t i = 0; i < grid.size(); ++i)
    f.values[i] = a * std::exp(-0.25 * grid[i] * grid[i]);
  return f;
}

// Time-domain generated FWM pulse at distance z: inverse transform of the
// closed-form spectrum fed by the Gaussian pump.
inline TimeField generated_pulse(double z_um, const DimensionlessSystem& sys,
                                 double omega_p0_tau, const std::vector<double>& grid) {
  const SpectralField pump = gaussian_pump(omega_p0_tau, grid);
  const SpectralField wm = wm_spectrum(z_um, sys, pump);
  return inverse(wm);
}

}  // namespace qwfwm
