#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qwfwm/constants.hpp"

namespace qwfwm {

using cplx = std::complex<double>;
using json = nlohmann::json;

struct Layer {
  double x;             // aluminum fraction
  double thickness_nm;
};

// Quantum-well structure: subband energies, decay rates, dipole data and the
// tunneling dipole ratios m, q, k.
struct MediumSpec {
  double omega1_meV = 0, omega2_meV = 0, omega3_meV = 0, omega4_meV = 0, omega5_meV = 0;
  double gamma2_meV = 0, gamma3_meV = 0, gamma4_meV = 0, gamma5_meV = 0;
  double mu31_enm = 0, mu32_enm = 0, mu51_enm = 0;
  double m = 0, q = 0, k = 0;
  double delta_meV = 0;      // |3>-|4> splitting, must equal omega4 - omega3
  double N_per_m3 = 0;
  std::vector<Layer> layers;

  void validate() const {
    auto bad = [](double v) { return !std::isfinite(v); };
    for (double v : {omega1_meV, omega2_meV, omega3_meV, omega4_meV, omega5_meV,
                     gamma2_meV, gamma3_meV, gamma4_meV, gamma5_meV, mu31_enm,
                     mu32_enm, mu51_enm, m, q, k, delta_meV, N_per_m3})
      if (bad(v)) throw config_error("MediumSpec: non-finite field");
    if (!(gamma2_meV > 0 && gamma3_meV > 0 && gamma4_meV > 0 && gamma5_meV > 0))
      throw config_error("MediumSpec: decay rates gamma2..gamma5 must be > 0");
    if (!(N_per_m3 > 0)) throw config_error("MediumSpec: electron density N must be > 0");
    if (!(std::abs(mu31_enm) > 0 && std::abs(mu32_enm) > 0 && std::abs(mu51_enm) > 0))
      throw config_error("MediumSpec: dipole magnitudes must be > 0");
    if (!(omega1_meV < omega2_meV && omega2_meV < omega3_meV &&
          omega3_meV < omega4_meV && omega4_meV < omega5_meV))
      throw config_error("MediumSpec: subband energies must be strictly increasing");
    if (std::abs(delta_meV - (omega4_meV - omega3_meV)) > 1e-9 * std::max(1.0, std::abs(delta_meV)))
      throw config_error("MediumSpec: delta must equal omega4 - omega3");
    for (const auto& l : layers) {
      if (!(l.thickness_nm > 0)) throw config_error("MediumSpec: layer thickness must be > 0");
      if (!(l.x >= 0.0 && l.x <= 0.45))
        throw config_error("MediumSpec: aluminum fraction outside [0, 0.45]");
    }
  }
};

// Laser configuration. omega_c/omega_d2/omega_p0 are Rabi half-frequencies in
// meV; detunings in meV; delta_k in 1/m; tau is the pump duration in ps.
struct DriveSpec {
  double omega_c_meV = 0, omega_d2_meV = 0, omega_p0_meV = 0;
  double delta_p_meV = 0, delta_c_meV = 0, delta_m_meV = 0;
  double delta_k_per_m = 0;
  double tau_ps = 0;

  void validate() const {
    for (double v : {omega_c_meV, omega_d2_meV, omega_p0_meV, delta_p_meV,
                     delta_c_meV, delta_m_meV, delta_k_per_m, tau_ps})
      if (!std::isfinite(v)) throw config_error("DriveSpec: non-finite field");
    if (!(tau_ps > 0)) throw config_error("DriveSpec: tau must be > 0");
    if (omega_c_meV < 0 || omega_d2_meV < 0 || omega_p0_meV < 0)
      throw config_error("DriveSpec: Rabi frequencies must be >= 0");
  }

  // The analytic spectrum is first order in the pump and two-photon drives.
  bool weak_drive() const {
    const double s = tau_ps / hbar_meV_ps;
    return omega_p0_meV * s <= 0.05 && omega_d2_meV * s <= 0.05;
  }
};

// Everything the response algebra needs, made dimensionless with eta = omega*tau:
// complex detunings d_j*tau, drive strengths Omega*tau, propagation strengths
// kappa*c*tau^2 and the mismatch delta_k*c*tau.
struct DimensionlessSystem {
  cplx d2, d3, d4, d5;
  double omega_c_tau = 0, omega_d2_tau = 0, omega_p0_tau = 0;
  double kappa_p_ctau2 = 0, kappa_m_ctau2 = 0;
  double delta_k_ctau = 0;
  double m = 0, q = 0, k = 0;
  double tau_ps = 0;

  // z in um -> dimensionless propagation coordinate z/(c*tau)
  double zeta(double z_um) const { return z_um / (c_um_per_ps * tau_ps); }
};

// kappa = N * omega * |mu|^2 / (hbar eps0 c), evaluated in SI, returned as the
// dimensionless combination kappa*c*tau^2.
inline double kappa_ctau2(double N_per_m3, double omega_meV, double mu_enm, double tau_ps) {
  const double omega_rad_s = omega_meV * meV_J / hbar_J_s;
  const double mu_Cm = mu_enm * elementary_charge_C * 1e-9;
  const double kappa = N_per_m3 * omega_rad_s * mu_Cm * mu_Cm / (hbar_J_s * eps0_F_per_m * c_m_per_s);
  const double tau_s = tau_ps * 1e-12;
  return kappa * c_m_per_s * tau_s * tau_s;
}

inline DimensionlessSystem to_dimensionless(const MediumSpec& med, const DriveSpec& drv) {
  med.validate();
  drv.validate();
  const double s = drv.tau_ps / hbar_meV_ps;
  DimensionlessSystem sys;
  sys.d2 = cplx(drv.delta_p_meV - drv.delta_c_meV, med.gamma2_meV) * s;
  sys.d3 = cplx(drv.delta_p_meV, med.gamma3_meV) * s;
  sys.d4 = cplx(drv.delta_p_meV - med.delta_meV, med.gamma4_meV) * s;
  sys.d5 = cplx(drv.delta_m_meV, med.gamma5_meV) * s;
  sys.omega_c_tau = drv.omega_c_meV * s;
  sys.omega_d2_tau = drv.omega_d2_meV * s;
  sys.omega_p0_tau = drv.omega_p0_meV * s;
  sys.kappa_p_ctau2 =
      kappa_ctau2(med.N_per_m3, med.omega3_meV - med.omega1_meV, med.mu31_enm, drv.tau_ps);
  sys.kappa_m_ctau2 =
      kappa_ctau2(med.N_per_m3, med.omega5_meV - med.omega1_meV, med.mu51_enm, drv.tau_ps);
  sys.delta_k_ctau = drv.delta_k_per_m * c_m_per_s * drv.tau_ps * 1e-12;
  sys.m = med.m;
  sys.q = med.q;
  sys.k = med.k;
  sys.tau_ps = drv.tau_ps;
  return sys;
}

// Detunings/rates recovered from a DimensionlessSystem; used to verify that
// the conversion is invertible.
struct RecoveredDetunings {
  double delta_p_meV, delta_c_meV, delta_m_meV, delta_meV;
  double gamma2_meV, gamma3_meV, gamma4_meV, gamma5_meV;
};

inline RecoveredDetunings recover_detunings(const DimensionlessSystem& sys) {
  const double inv = hbar_meV_ps / sys.tau_ps;
  RecoveredDetunings r;
  r.delta_p_meV = sys.d3.real() * inv;
  r.delta_c_meV = r.delta_p_meV - sys.d2.real() * inv;
  r.delta_m_meV = sys.d5.real() * inv;
  r.delta_meV = r.delta_p_meV - sys.d4.real() * inv;
  r.gamma2_meV = sys.d2.imag() * inv;
  r.gamma3_meV = sys.d3.imag() * inv;
  r.gamma4_meV = sys.d4.imag() * inv;
  r.gamma5_meV = sys.d5.imag() * inv;
  return r;
}

// Reference operating point for the asymmetric double well. tau, gamma2, the
// absolute dipoles, delta_k, the FWM detuning and the weak-drive amplitudes
// have no pinned reference value; their defaults are documented in the README
// and freely overridable.
inline std::pair<MediumSpec, DriveSpec> default_parameters() {
  MediumSpec med;
  med.omega1_meV = 34.5;
  med.omega2_meV = 62.3;
  med.omega3_meV = 135.5;
  med.omega4_meV = 141.5;
  med.omega5_meV = 296.3;
  med.gamma2_meV = 0.001;  // long-lived lower subbands
  med.gamma3_meV = 1.0;
  med.gamma4_meV = 1.0;
  med.gamma5_meV = 0.1;
  med.mu31_enm = 2.0;
  med.mu32_enm = 2.0;
  med.mu51_enm = 1.5;
  med.m = -0.42;
  med.q = 1.63;
  med.k = -1.12;
  med.delta_meV = 6.0;
  med.N_per_m3 = 1e23;
  med.layers = {{0.04, 11.0}, {0.40, 3.8}, {0.0, 9.5}};

  DriveSpec drv;
  drv.omega_c_meV = 2.0;
  drv.tau_ps = 2.0;  // pump spectral width ~hbar/tau sits inside the EIT window
  // weak-drive defaults: Omega*tau/hbar = 0.01
  drv.omega_p0_meV = 0.01 * hbar_meV_ps / drv.tau_ps;
  drv.omega_d2_meV = 0.01 * hbar_meV_ps / drv.tau_ps;
  drv.delta_p_meV = 0.5;
  drv.delta_c_meV = 3.0;
  drv.delta_m_meV = 0.0725;
  drv.delta_k_per_m = 0.0;
  return {med, drv};
}

// ---------------------------------------------------------------------------
// JSON loading. One object per parameter group, keys named after the symbols;
// any unknown key is rejected.

namespace detail {
inline void check_keys(const json& j, const std::set<std::string>& allowed, const char* what) {
  if (!j.is_object()) throw config_error(std::string(what) + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw config_error(std::string(what) + ": unknown key \"" + it.key() + "\"");
}
inline double num(const json& j, const char* key, double fallback, bool* present = nullptr) {
  if (!j.contains(key)) {
    if (present) *present = false;
    return fallback;
  }
  if (present) *present = true;
  if (!j.at(key).is_number()) throw config_error(std::string("key \"") + key + "\" must be a number");
  return j.at(key).get<double>();
}
}  // namespace detail

inline MediumSpec medium_from_json(const json& j) {
  static const std::set<std::string> keys = {
      "omega1_meV", "omega2_meV", "omega3_meV", "omega4_meV", "omega5_meV",
      "gamma2_meV", "gamma3_meV", "gamma4_meV", "gamma5_meV",
      "mu31_enm", "mu32_enm", "mu51_enm", "m", "q", "k",
      "delta_meV", "N_per_m3", "layers"};
  detail::check_keys(j, keys, "medium");
  MediumSpec d = default_parameters().first;
  using detail::num;
  d.omega1_meV = num(j, "omega1_meV", d.omega1_meV);
  d.omega2_meV = num(j, "omega2_meV", d.omega2_meV);
  d.omega3_meV = num(j, "omega3_meV", d.omega3_meV);
  d.omega4_meV = num(j, "omega4_meV", d.omega4_meV);
  d.omega5_meV = num(j, "omega5_meV", d.omega5_meV);
  d.gamma2_meV = num(j, "gamma2_meV", d.gamma2_meV);
  d.gamma3_meV = num(j, "gamma3_meV", d.gamma3_meV);
  d.gamma4_meV = num(j, "gamma4_meV", d.gamma4_meV);
  d.gamma5_meV = num(j, "gamma5_meV", d.gamma5_meV);
  d.mu31_enm = num(j, "mu31_enm", d.mu31_enm);
  d.mu32_enm = num(j, "mu32_enm", d.mu32_enm);
  d.mu51_enm = num(j, "mu51_enm", d.mu51_enm);
  d.m = num(j, "m", d.m);
  d.q = num(j, "q", d.q);
  d.k = num(j, "k", d.k);
  bool has_delta = false;
  d.delta_meV = num(j, "delta_meV", d.delta_meV, &has_delta);
  if (!has_delta) d.delta_meV = d.omega4_meV - d.omega3_meV;
  d.N_per_m3 = num(j, "N_per_m3", d.N_per_m3);
  if (j.contains("layers")) {
    if (!j.at("layers").is_array()) throw config_error("medium: layers must be an array");
    d.layers.clear();
    for (const auto& e : j.at("layers")) {
      detail::check_keys(e, {"x", "thickness_nm"}, "layer");
      Layer l;
      l.x = detail::num(e, "x", 0.0);
      l.thickness_nm = detail::num(e, "thickness_nm", 0.0);
      d.layers.push_back(l);
    }
  }
  d.validate();
  return d;
}

inline DriveSpec drive_from_json(const json& j) {
  static const std::set<std::string> keys = {
      "omega_c_meV", "omega_d2_meV", "omega_p0_meV",
      "delta_p_meV", "delta_c_meV", "delta_m_meV",
      "delta_k_per_m", "tau_ps"};
  detail::check_keys(j, keys, "drive");
  DriveSpec d = default_parameters().second;
  using detail::num;
  d.omega_c_meV = num(j, "omega_c_meV", d.omega_c_meV);
  d.omega_d2_meV = num(j, "omega_d2_meV", d.omega_d2_meV);
  d.omega_p0_meV = num(j, "omega_p0_meV", d.omega_p0_meV);
  d.delta_p_meV = num(j, "delta_p_meV", d.delta_p_meV);
  d.delta_c_meV = num(j, "delta_c_meV", d.delta_c_meV);
  d.delta_m_meV = num(j, "delta_m_meV", d.delta_m_meV);
  d.delta_k_per_m = num(j, "delta_k_per_m", d.delta_k_per_m);
  d.tau_ps = num(j, "tau_ps", d.tau_ps);
  d.validate();
  return d;
}

inline json to_json(const MediumSpec& d) {
  json layers = json::array();
  for (const auto& l : d.layers) layers.push_back({{"x", l.x}, {"thickness_nm", l.thickness_nm}});
  return json{{"omega1_meV", d.omega1_meV}, {"omega2_meV", d.omega2_meV},
              {"omega3_meV", d.omega3_meV}, {"omega4_meV", d.omega4_meV},
              {"omega5_meV", d.omega5_meV}, {"gamma2_meV", d.gamma2_meV},
              {"gamma3_meV", d.gamma3_meV}, {"gamma4_meV", d.gamma4_meV},
              {"gamma5_meV", d.gamma5_meV}, {"mu31_enm", d.mu31_enm},
              {"mu32_enm", d.mu32_enm},     {"mu51_enm", d.mu51_enm},
              {"m", d.m},                   {"q", d.q},
              {"k", d.k},                   {"delta_meV", d.delta_meV},
              {"N_per_m3", d.N_per_m3},     {"layers", layers}};
}

inline json to_json(const DriveSpec& d) {
  return json{{"omega_c_meV", d.omega_c_meV},   {"omega_d2_meV", d.omega_d2_meV},
              {"omega_p0_meV", d.omega_p0_meV}, {"delta_p_meV", d.delta_p_meV},
              {"delta_c_meV", d.delta_c_meV},   {"delta_m_meV", d.delta_m_meV},
              {"delta_k_per_m", d.delta_k_per_m}, {"tau_ps", d.tau_ps}};
}

}  // namespace qwfwm
