#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qwfwm/dispersion.hpp"
#include "qwfwm/pulse_transform.hpp"

// Reproduction driver for the efficiency scans: rho(eta) at fixed distances,
// rho(z) at fixed eta slices, and the control-field-off variant, each with the
// no-tunneling baseline (m = q = k = 0) on the identical axis. Work items are
// independent; fan-out across threads is order-preserving and bit-identical
// for any worker count.

namespace qwfwm {

inline constexpr double enhancement_floor = 1e-30;  // rho_base below this -> undefined

struct ScanRow {
  double eta = 0, z_um = 0;
  double rho_tunneling = 0, rho_baseline = 0;
  std::optional<double> enhancement;
  bool pole = false;
};

struct ScanResult {
  std::string axis;  // name of the varying column
  std::vector<ScanRow> rows;
  json snapshot;     // reproduces the scan bit-exactly
  json diagnostics = json::object();
};

namespace detail {

inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned nw = std::min<unsigned>(threads, unsigned(n));
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (unsigned w = 0; w < nw; ++w)
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += nw) fn(i);
    });
  for (auto& t : pool) t.join();
}

inline MediumSpec baseline_medium(MediumSpec med) {
  med.m = med.q = med.k = 0.0;  // decouples |4>
  return med;
}

inline json scan_snapshot(const char* engine, const MediumSpec& med, const DriveSpec& drv,
                          const json& extra) {
  json s;
  s["engine"] = engine;
  s["medium"] = to_json(med);
  s["drive"] = to_json(drv);
  s["args"] = extra;
  return s;
}

}  // namespace detail

// rho(eta) for each listed distance, tunneling and (optionally) baseline.
inline ScanResult eta_scan(const MediumSpec& med, const DriveSpec& drv,
                           const std::vector<double>& z_list_um,
                           const std::vector<double>& grid, bool include_baseline = true,
                           unsigned threads = 1) {
  if (!drv.weak_drive())
    throw config_error("eta_scan: drive outside the weak-drive regime of the analytic branch");
  if (grid.size() < 2) throw config_error("eta_scan: need at least two grid samples");
  const DimensionlessSystem sys_t = to_dimensionless(med, drv);
  const DimensionlessSystem sys_b = to_dimensionless(detail::baseline_medium(med), drv);
  const double mu_ratio = med.mu31_enm / med.mu51_enm;

  ScanResult res;
  res.axis = "eta";
  res.rows.resize(z_list_um.size() * grid.size());
  for (std::size_t zi = 0; zi < z_list_um.size(); ++zi) {
    const double z = z_list_um[zi];
    detail::parallel_for(grid.size(), threads, [&, zi, z](std::size_t i) {
      ScanRow& row = res.rows[zi * grid.size() + i];
      row.eta = grid[i];
      row.z_um = z;
      bool pole_t = false, pole_b = false;
      row.rho_tunneling = efficiency(z, grid[i], sys_t, mu_ratio, &pole_t);
      if (include_baseline) {
        row.rho_baseline = efficiency(z, grid[i], sys_b, mu_ratio, &pole_b);
        if (row.rho_baseline > enhancement_floor)
          row.enhancement = row.rho_tunneling / row.rho_baseline;
      } else {
        row.rho_baseline = std::numeric_limits<double>::quiet_NaN();
      }
      row.pole = pole_t || pole_b;
    });
  }
  res.snapshot = detail::scan_snapshot(
      "eta-scan", med, drv,
      json{{"z_um", z_list_um},
           {"grid", {{"n", grid.size()}, {"min", grid.front()},
                     {"max", grid.front() + (grid[1] - grid[0]) * double(grid.size())}}},
           {"include_baseline", include_baseline}});
  return res;
}

// rho(z) for each eta slice.
inline ScanResult distance_scan(const MediumSpec& med, const DriveSpec& drv,
                                const std::vector<double>& eta_list,
                                const std::vector<double>& z_grid_um,
                                bool include_baseline = true, unsigned threads = 1) {
  if (!drv.weak_drive())
    throw config_error("distance_scan: drive outside the weak-drive regime");
  const DimensionlessSystem sys_t = to_dimensionless(med, drv);
  const DimensionlessSystem sys_b = to_dimensionless(detail::baseline_medium(med), drv);
  const double mu_ratio = med.mu31_enm / med.mu51_enm;

  ScanResult res;
  res.axis = "z_um";
  res.rows.resize(eta_list.size() * z_grid_um.size());
  for (std::size_t ei = 0; ei < eta_list.size(); ++ei) {
    const double eta = eta_list[ei];
    detail::parallel_for(z_grid_um.size(), threads, [&, ei, eta](std::size_t i) {
      ScanRow& row = res.rows[ei * z_grid_um.size() + i];
      row.eta = eta;
      row.z_um = z_grid_um[i];
      bool pole_t = false, pole_b = false;
      row.rho_tunneling = efficiency(row.z_um, eta, sys_t, mu_ratio, &pole_t);
      if (include_baseline) {
        row.rho_baseline = efficiency(row.z_um, eta, sys_b, mu_ratio, &pole_b);
        if (row.rho_baseline > enhancement_floor)
          row.enhancement = row.rho_tunneling / row.rho_baseline;
      } else {
        row.rho_baseline = std::numeric_limits<double>::quiet_NaN();
      }
      row.pole = pole_t || pole_b;
    });
  }
  res.snapshot = detail::scan_snapshot("distance-scan", med, drv,
                                       json{{"eta", eta_list},
                                            {"z_um", z_grid_um},
                                            {"include_baseline", include_baseline}});
  return res;
}

// Control field off. Same scan as eta_scan with omega_c forced to zero, plus
// the tunneling-induced-transparency diagnostic: the pump attenuation minimum
// near eta = 0 against the single-path (m = 0) resonance peak, and the
// group-velocity matching report at the solver's detuning roots.
inline ScanResult no_control_scan(const MediumSpec& med, const DriveSpec& drv_in,
                                  const std::vector<double>& z_list_um,
                                  const std::vector<double>& grid, bool include_baseline = true,
                                  unsigned threads = 1) {
  DriveSpec drv = drv_in;
  drv.omega_c_meV = 0.0;
  ScanResult res = eta_scan(med, drv, z_list_um, grid, include_baseline, threads);
  res.snapshot["engine"] = "no-control-scan";

  const DimensionlessSystem sys_t = to_dimensionless(med, drv);
  const DimensionlessSystem sys_b = to_dimensionless(detail::baseline_medium(med), drv);
  const int nsc = 2001;
  std::vector<double> att(nsc);
  for (int i = 0; i < nsc; ++i)
    att[i] = wavenumbers(-1.0 + 2.0 * double(i) / double(nsc - 1), sys_t).Kp.imag();
  int imin = 0;
  bool interior_min = false;
  for (int i = 0; i < nsc; ++i) {
    if (att[i] < att[imin]) imin = i;
    if (i > 0 && i + 1 < nsc && att[i] < att[i - 1] && att[i] < att[i + 1]) interior_min = true;
  }
  const double amin = att[imin];
  const double eta_at = -1.0 + 2.0 * double(imin) / double(nsc - 1);
  // single-path resonance peak sits at eta = -Re(d3)
  const double single_peak = wavenumbers(-sys_b.d3.real(), sys_b).Kp.imag();
  res.diagnostics["tit"] = {{"attenuation_min", amin},
                            {"eta_at_min", eta_at},
                            {"interior_local_min", interior_min},
                            {"single_path_peak", single_peak},
                            {"min_over_peak", amin / single_peak}};
  const MatchResult mr = match_detuning(med, drv);
  json roots = json::array();
  for (double r : mr.roots_meV) {
    DriveSpec d2 = drv;
    d2.delta_m_meV = r;
    const DimensionlessSystem s2 = to_dimensionless(med, d2);
    roots.push_back({{"delta_m_meV", r},
                     {"vg_m_over_c", group_velocity(Branch::fwm, 0.0, s2).vg_over_c}});
  }
  res.diagnostics["velocity_match"] = {{"vg_p_over_c", mr.vg_pump_over_c}, {"roots", roots}};
  return res;
}

// Local maxima of a sampled curve, ignoring entries below floor_rel times the
// curve maximum (interference residues far below that are numerical dust).
inline int count_local_maxima(const std::vector<double>& v, double floor_rel = 1e-6) {
  double mx = 0;
  for (double x : v) mx = std::max(mx, x);
  const double floor = floor_rel * mx;
  int count = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] > v[i + 1] && v[i] >= floor) ++count;
  return count;
}

// Re-run a scan from its own snapshot (replay determinism contract).
inline ScanResult scan_from_snapshot(const json& snapshot, unsigned threads = 1) {
  const MediumSpec med = medium_from_json(snapshot.at("medium"));
  const DriveSpec drv = drive_from_json(snapshot.at("drive"));
  const json& a = snapshot.at("args");
  const std::string engine = snapshot.at("engine").get<std::string>();
  if (engine == "eta-scan" || engine == "no-control-scan") {
    const auto g = a.at("grid");
    const std::size_t n = g.at("n").get<std::size_t>();
    const auto grid = make_eta_grid(n, g.at("min").get<double>(), g.at("max").get<double>());
    const auto z = a.at("z_um").get<std::vector<double>>();
    const bool base = a.at("include_baseline").get<bool>();
    return engine == "eta-scan" ? eta_scan(med, drv, z, grid, base, threads)
                                : no_control_scan(med, drv, z, grid, base, threads);
  }
  if (engine == "distance-scan") {
    return distance_scan(med, drv, a.at("eta").get<std::vector<double>>(),
                         a.at("z_um").get<std::vector<double>>(),
                         a.at("include_baseline").get<bool>(), threads);
  }
  throw config_error("scan_from_snapshot: unknown engine \"" + engine + "\"");
}

}  // namespace qwfwm
