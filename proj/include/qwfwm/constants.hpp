#pragma once

#include <stdexcept>
#include <string>

// Unit conventions used throughout: energies and Rabi half-frequencies in meV,
// times in ps, lengths in um (nm inside the band-structure solver), electron
// density in m^-3, dipole moments in units of e*nm. All response math runs on
// dimensionless quantities after params::to_dimensionless; the single bridge
// constant is hbar in meV*ps.

namespace qwfwm {

inline constexpr double hbar_meV_ps = 0.6582119569;
inline constexpr double c_um_per_ps = 299.792458;

// SI values, needed once when forming the propagation constants kappa_{p,m}.
inline constexpr double elementary_charge_C = 1.602176634e-19;
inline constexpr double eps0_F_per_m       = 8.8541878128e-12;
inline constexpr double hbar_J_s           = 1.054571817e-34;
inline constexpr double c_m_per_s          = 299792458.0;
inline constexpr double electron_mass_kg   = 9.1093837015e-31;
inline constexpr double meV_J              = 1e-3 * elementary_charge_C;

// hbar^2/(2 m0) in meV*nm^2, for the effective-mass Schroedinger solver.
inline constexpr double hbar2_over_2m0_meV_nm2 =
    hbar_J_s * hbar_J_s / (2.0 * electron_mass_kg) / meV_J * 1e18;

// Invalid configuration or parameter input (CLI exit code 2).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure in a solver or integrator (CLI exit code 3).
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qwfwm
