#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qwfwm/params.hpp"

// Frequency-domain response of the five-subband structure at weak pump and
// two-photon drive: the polynomials D, D_p, D_m, the phase factor B, the
// amplitude responses, and the closed-form generated FWM spectrum W_m(z, eta).

namespace qwfwm {

inline constexpr double pole_threshold = 1e-300;

// D(eta)   = (eta+d2)(eta+d3)(eta+d4) - [(eta+d4) + q^2 (eta+d3)] (Oc*tau)^2
inline cplx poly_D(double eta, const DimensionlessSystem& s) {
  const cplx e2 = eta + s.d2, e3 = eta + s.d3, e4 = eta + s.d4;
  const double oc2 = s.omega_c_tau * s.omega_c_tau;
  return e2 * e3 * e4 - (e4 + s.q * s.q * e3) * oc2;
}

// D_p(eta) = (eta+d2)[(eta+d4) + m^2 (eta+d3)] - (q-m)^2 (Oc*tau)^2
inline cplx poly_Dp(double eta, const DimensionlessSystem& s) {
  const cplx e2 = eta + s.d2, e3 = eta + s.d3, e4 = eta + s.d4;
  const double oc2 = s.omega_c_tau * s.omega_c_tau;
  return e2 * (e4 + s.m * s.m * e3) - (s.q - s.m) * (s.q - s.m) * oc2;
}

// D_m(eta) = (eta+d2)[(eta+d4) + m k (eta+d3)] - (q-k)(q-m) (Oc*tau)^2
inline cplx poly_Dm(double eta, const DimensionlessSystem& s) {
  const cplx e2 = eta + s.d2, e3 = eta + s.d3, e4 = eta + s.d4;
  const double oc2 = s.omega_c_tau * s.omega_c_tau;
  return e2 * (e4 + s.m * s.k * e3) - (s.q - s.k) * (s.q - s.m) * oc2;
}

// Expanded coefficient forms, low order first. Used by the degree/leading
// checks and for analytic eta-derivatives.
inline std::array<cplx, 4> coeffs_D(const DimensionlessSystem& s) {
  const cplx a = s.d2, b = s.d3, c = s.d4;
  const double oc2 = s.omega_c_tau * s.omega_c_tau, q2 = s.q * s.q;
  return {a * b * c - oc2 * (c + q2 * b),
          a * b + a * c + b * c - oc2 * (1.0 + q2),
          a + b + c,
          cplx(1.0)};
}

inline std::array<cplx, 3> coeffs_Dp(const DimensionlessSystem& s) {
  const cplx a = s.d2, b = s.d3, c = s.d4;
  const double oc2 = s.omega_c_tau * s.omega_c_tau, m2 = s.m * s.m;
  return {a * (c + m2 * b) - (s.q - s.m) * (s.q - s.m) * oc2,
          (c + m2 * b) + a * (1.0 + m2),
          cplx(1.0 + m2)};
}

inline std::array<cplx, 3> coeffs_Dm(const DimensionlessSystem& s) {
  const cplx a = s.d2, b = s.d3, c = s.d4;
  const double oc2 = s.omega_c_tau * s.omega_c_tau, mk = s.m * s.k;
  return {a * (c + mk * b) - (s.q - s.k) * (s.q - s.m) * oc2,
          (c + mk * b) + a * (1.0 + mk),
          cplx(1.0 + mk)};
}

template <std::size_t N>
inline cplx eval_poly(const std::array<cplx, N>& c, double eta) {
  cplx acc = 0.0;
  for (std::size_t i = N; i-- > 0;) acc = acc * eta + c[i];
  return acc;
}

template <std::size_t N>
inline cplx eval_poly_deriv(const std::array<cplx, N>& c, double eta) {
  cplx acc = 0.0;
  for (std::size_t i = N; i-- > 1;) acc = acc * eta + double(i) * c[i];
  return acc;
}

// One point of the response: polynomials, effective wavenumber contributions
// Kp/Km (per c*tau) and the phase factor B = dk*c*tau + Kp - Km.
struct ResponseEval {
  double eta = 0;
  cplx D, Dp, Dm;
  cplx Kp, Km;
  cplx B;
  bool pole = false;  // |D| underflow: parameters sit on a dark-resonance zero
};

inline ResponseEval evaluate_response(double eta, const DimensionlessSystem& s) {
  ResponseEval r;
  r.eta = eta;
  r.D = poly_D(eta, s);
  r.Dp = poly_Dp(eta, s);
  r.Dm = poly_Dm(eta, s);
  r.pole = std::abs(r.D) < pole_threshold || std::abs(eta + s.d5) < pole_threshold;
  if (!r.pole) {
    r.Kp = eta - s.kappa_p_ctau2 * r.Dp / r.D;
    r.Km = eta - s.kappa_m_ctau2 / (eta + s.d5);
    r.B = s.delta_k_ctau + r.Kp - r.Km;
  }
  return r;
}

// B = dk*c*tau + kappa_m*c*tau^2/(eta+d5) - kappa_p*c*tau^2 * Dp/D
inline cplx phase_B(double eta, const DimensionlessSystem& s) {
  return evaluate_response(eta, s).B;
}

// Steady amplitude responses driven by pump/FWM spectra at one eta:
//   alpha3 + m*alpha4 = -Wp * Dp/D
//   alpha5 = -Wm/(eta+d5) + Wp * Od2tau * e^{i dk z} * Dm / ((eta+d5) D)
// The spectra here are transforms of the dimensionless Rabi envelopes
// Omega*tau, so no stray tau factors appear.
struct AmpResponse {
  cplx alpha34;  // alpha3 + m*alpha4
  cplx alpha5;
  bool pole = false;
};

inline AmpResponse amp_response(double eta, const DimensionlessSystem& s, cplx Wp, cplx Wm,
                                double z_um = 0.0) {
  AmpResponse a;
  const cplx D = poly_D(eta, s);
  const cplx e5 = eta + s.d5;
  if (std::abs(D) < pole_threshold || std::abs(e5) < pole_threshold) {
    a.pole = true;
    return a;
  }
  const double dk_z = s.delta_k_ctau * s.zeta(z_um);
  a.alpha34 = -Wp * poly_Dp(eta, s) / D;
  a.alpha5 = -Wm / e5 + Wp * s.omega_d2_tau * std::polar(1.0, dk_z) * poly_Dm(eta, s) / (e5 * D);
  return a;
}

// Complex spectrum samples on a uniform eta grid at one propagation distance.
struct SpectralField {
  double z_um = 0;
  std::vector<double> grid;
  std::vector<cplx> values;
  std::vector<bool> pole_flags;  // annotated, never silently dropped

  bool any_pole() const {
    for (bool f : pole_flags)
      if (f) return true;
    return false;
  }
};

inline std::vector<double> make_eta_grid(std::size_t n = 2048, double eta_min = -8.0,
                                         double eta_max = 8.0) {
  if (n < 2 || !(eta_max > eta_min)) throw config_error("make_eta_grid: bad grid request");
  std::vector<double> g(n);
  const double d = (eta_max - eta_min) / double(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = eta_min + d * double(i);
  return g;
}

// Closed-form generated FWM spectrum,
//   W_m(z,eta) = kappa_m*c*tau^2 * Od2tau * Dm * W_p(0,eta) / ((eta+d5) D)
//                * (e^{iBz'} - 1)/B * e^{i z' (eta - kappa_m*c*tau^2/(eta+d5))},
// evaluated as C * [e^{i(dk ctau + Kp) z'} - e^{i Km z'}]/B, which is
// algebraically identical, free of the removable 1/eta, and cannot overflow
// for passive parameters (both exponents decay). Near B = 0 the ratio switches
// to its two-term Taylor form.
inline cplx wm_value(double eta, const DimensionlessSystem& s, cplx Wp0, double zeta,
                     bool* pole = nullptr) {
  const ResponseEval r = evaluate_response(eta, s);
  if (pole) *pole = r.pole;
  if (r.pole) return cplx(0.0);
  const cplx e5 = eta + s.d5;
  const cplx C = s.kappa_m_ctau2 * s.omega_d2_tau * r.Dm / (e5 * r.D);
  const cplx i(0.0, 1.0);
  cplx core;
  if (std::abs(r.B) * zeta < 1e-8 * std::max(1.0, zeta)) {
    core = std::exp(i * r.Km * zeta) * (i * zeta) * (1.0 + i * r.B * zeta * 0.5);
  } else {
    core = (std::exp(i * (s.delta_k_ctau + r.Kp) * zeta) - std::exp(i * r.Km * zeta)) / r.B;
  }
  return C * Wp0 * core;
}

inline SpectralField wm_spectrum(double z_um, const DimensionlessSystem& s,
                                 const SpectralField& pump) {
  if (pump.grid.size() != pump.values.size())
    throw config_error("wm_spectrum: pump grid/value size mismatch");
  SpectralField out;
  out.z_um = z_um;
  out.grid = pump.grid;
  out.values.resize(pump.grid.size());
  out.pole_flags.assign(pump.grid.size(), false);
  const double zeta = s.zeta(z_um);
  for (std::size_t i = 0; i < pump.grid.size(); ++i) {
    bool pole = false;
    out.values[i] = wm_value(pump.grid[i], s, pump.values[i], zeta, &pole);
    if (pole) out.pole_flags[i] = true;
    if (!pole && !std::isfinite(std::abs(out.values[i])))
      throw numerical_error("wm_spectrum: non-finite value at eta=" + std::to_string(pump.grid[i]));
  }
  return out;
}

// Conversion efficiency rho = | mu31 W_m / (mu51 * Od2tau * Op0tau/sqrt(2)) |^2.
inline double efficiency_from_wm(cplx wm, double mu_ratio_31_51, double omega_d2_tau,
                                 double omega_p0_tau) {
  if (omega_d2_tau <= 0.0 || omega_p0_tau <= 0.0)
    throw config_error("efficiency: omega_d2 and omega_p0 must be > 0");
  const cplx r = mu_ratio_31_51 * wm / (omega_d2_tau * omega_p0_tau / std::sqrt(2.0));
  return std::norm(r);
}

// rho at one (z, eta) point for a Gaussian pump entering at z = 0. Both views
// of the figures -- rho(eta) at fixed z and rho(z) at fixed eta -- sample this
// one function.
inline double efficiency(double z_um, double eta, const DimensionlessSystem& s,
                         double mu_ratio_31_51, bool* pole = nullptr) {
  const cplx Wp0 = s.omega_p0_tau / std::sqrt(2.0) * std::exp(-0.25 * eta * eta);
  const cplx wm = wm_value(eta, s, Wp0, s.zeta(z_um), pole);
  return efficiency_from_wm(wm, mu_ratio_31_51, s.omega_d2_tau, s.omega_p0_tau);
}

}  // namespace qwfwm
