#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "qwfwm/spectral_response.hpp"

// Linear response analysis: pump/FWM effective wavenumbers, pump attenuation
// spectra, group velocities from the analytic dK/deta, and the root finder
// locating the FWM detuning that matches the two group velocities.

namespace qwfwm {

struct Wavenumbers {
  cplx Kp, Km;
  bool pole = false;
};

inline Wavenumbers wavenumbers(double eta, const DimensionlessSystem& s) {
  const ResponseEval r = evaluate_response(eta, s);
  return {r.Kp, r.Km, r.pole};
}

// Analytic derivatives dK/deta, via the coefficient forms of D and Dp.
inline cplx dKp_deta(double eta, const DimensionlessSystem& s) {
  const auto cD = coeffs_D(s);
  const auto cDp = coeffs_Dp(s);
  const cplx D = eval_poly(cD, eta), dD = eval_poly_deriv(cD, eta);
  const cplx Dp = eval_poly(cDp, eta), dDp = eval_poly_deriv(cDp, eta);
  return 1.0 - s.kappa_p_ctau2 * (dDp * D - Dp * dD) / (D * D);
}

inline cplx dKm_deta(double eta, const DimensionlessSystem& s) {
  const cplx e5 = eta + s.d5;
  return 1.0 + s.kappa_m_ctau2 / (e5 * e5);
}

enum class Branch { pump, fwm };

struct GroupVelocity {
  double vg_over_c = 0;      // 1 / Re(dK/deta)
  bool anomalous = false;    // Re(dK/deta) <= 0
};

inline GroupVelocity group_velocity(Branch b, double eta, const DimensionlessSystem& s) {
  const double slope =
      (b == Branch::pump ? dKp_deta(eta, s) : dKm_deta(eta, s)).real();
  GroupVelocity g;
  if (slope <= 0.0) {
    g.anomalous = true;
    return g;
  }
  g.vg_over_c = 1.0 / slope;
  return g;
}

// Pump attenuation per unit z' = z/(c*tau): the field decays as
// e^{-Im(Kp) z'}.  Im(Kp) >= 0 for passive parameters.
inline std::vector<double> absorption_spectrum(const std::vector<double>& grid,
                                               const DimensionlessSystem& s) {
  std::vector<double> a(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) a[i] = wavenumbers(grid[i], s).Kp.imag();
  return a;
}

// Solves Re dKm/deta(0; delta_m) = Re dKp/deta(0) for delta_m by a 1 ueV scan
// over [-1, 1] meV followed by bisection. Returns all roots found (the
// structure of Km makes them come in a +/- pair when the pump slope is
// attainable).
struct MatchResult {
  std::vector<double> roots_meV;
  double pump_slope = 0;    // Re dKp/deta at eta = 0
  double vg_pump_over_c = 0;
};

inline MatchResult match_detuning(const MediumSpec& med, const DriveSpec& drv,
                                  double scan_min_meV = -1.0, double scan_max_meV = 1.0,
                                  double scan_step_meV = 1e-3) {
  MatchResult res;
  const DimensionlessSystem base = to_dimensionless(med, drv);
  res.pump_slope = dKp_deta(0.0, base).real();
  if (res.pump_slope > 0.0) res.vg_pump_over_c = 1.0 / res.pump_slope;

  const double s = drv.tau_ps / hbar_meV_ps;
  auto h = [&](double dm_meV) {
    const cplx d5 = cplx(dm_meV, med.gamma5_meV) * s;
    const cplx e5sq = d5 * d5;
    return (1.0 + base.kappa_m_ctau2 / e5sq).real() - res.pump_slope;
  };

  const int n = int(std::round((scan_max_meV - scan_min_meV) / scan_step_meV));
  double prev_x = scan_min_meV, prev_h = h(prev_x);
  for (int i = 1; i <= n; ++i) {
    const double x = scan_min_meV + scan_step_meV * double(i);
    const double hx = h(x);
    if (prev_h == 0.0) res.roots_meV.push_back(prev_x);
    if (prev_h * hx < 0.0) {
      double a = prev_x, b = x, ha = prev_h;
      while (b - a > 1e-13) {
        const double mid = 0.5 * (a + b);
        const double hm = h(mid);
        if (ha * hm <= 0.0) {
          b = mid;
        } else {
          a = mid;
          ha = hm;
        }
      }
      res.roots_meV.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_h = hx;
  }
  return res;
}

}  // namespace qwfwm
