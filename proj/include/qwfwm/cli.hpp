#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwfwm/bandstructure.hpp"
#include "qwfwm/io.hpp"
#include "qwfwm/maxwell_bloch.hpp"
#include "qwfwm/scan_engine.hpp"

// Command-line front end. Subcommands: eta-scan, distance-scan,
// no-control-scan, oracle-compare, group-velocity, bandstructure, pulse,
// plot, reproduce {fig2,fig3,fig4}. Exit codes: 0 success, 2 configuration
// error, 3 numerical failure.

namespace qwfwm::cli {

namespace fs = std::filesystem;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  unsigned threads = 1;
};

inline std::string resolve_out_dir(const std::string& flag_value) {
  std::string dir = flag_value;
  if (dir.empty()) {
    if (const char* env = std::getenv("QWFWM_OUT_DIR")) dir = env;
  }
  if (dir.empty()) dir = ".";
  fs::create_directories(dir);
  return dir;
}

inline std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

inline std::pair<MediumSpec, DriveSpec> load_params(const std::string& config_path) {
  if (config_path.empty()) return default_parameters();
  std::ifstream f(config_path);
  if (!f) throw config_error("cannot open config file " + config_path);
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  detail::check_keys(j, {"medium", "drive"}, "config");
  MediumSpec med = j.contains("medium") ? medium_from_json(j.at("medium"))
                                        : default_parameters().first;
  DriveSpec drv = j.contains("drive") ? drive_from_json(j.at("drive"))
                                      : default_parameters().second;
  return {med, drv};
}

// Positive group-velocity-matched detuning root.
inline double matched_delta_m(const MediumSpec& med, const DriveSpec& drv) {
  const MatchResult mr = match_detuning(med, drv);
  for (double r : mr.roots_meV)
    if (r > 0) return r;
  throw numerical_error("group-velocity matching found no root in [-1, 1] meV");
}

inline void report(const std::string& path, std::size_t rows) {
  std::cout << "wrote " << path << " (" << rows << " rows)\n";
}

inline int run(std::vector<std::string> args) {
  CLI::App app{"tunneling-enhanced four-wave mixing in an asymmetric double quantum well"};
  app.require_subcommand(1);

  CommonOpts common;
  constexpr char driver_comma = ',';
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON parameter file (medium/drive)");
    sub->add_option("--out-dir", common.out_dir,
                    "output directory (default: $QWFWM_OUT_DIR or .)");
    sub->add_option("--threads", common.threads, "worker threads for scans");
  };

  // ---- eta-scan ----
  std::vector<double> opt_z = {1.0, 10.0, 20.0};
  std::size_t opt_samples = 2048;
  double opt_eta_min = -8.0, opt_eta_max = 8.0;
  bool opt_no_baseline = false, opt_matched = false, opt_svg = false;
  double opt_delta_m = std::numeric_limits<double>::quiet_NaN();
  std::string opt_name;
  auto* sc_eta = app.add_subcommand("eta-scan", "conversion efficiency vs eta at fixed z");
  add_common(sc_eta);
  sc_eta->add_option("--z", opt_z, "propagation distances in um")->delimiter(driver_comma);
  sc_eta->add_option("--samples", opt_samples, "eta grid samples (power of two)");
  sc_eta->add_option("--eta-min", opt_eta_min);
  sc_eta->add_option("--eta-max", opt_eta_max);
  sc_eta->add_flag("--no-baseline", opt_no_baseline, "skip the m=q=k=0 baseline");
  sc_eta->add_flag("--matched-dm", opt_matched, "set delta_m to the solver-matched root");
  sc_eta->add_option("--delta-m-meV", opt_delta_m, "override the FWM detuning");
  sc_eta->add_flag("--svg", opt_svg, "also write an SVG chart");
  sc_eta->add_option("--name", opt_name, "artifact base name");

  // ---- distance-scan ----
  std::vector<double> opt_eta_slices = {0.75, -0.75};
  double opt_z_max = 20.0;
  std::size_t opt_z_samples = 801;
  auto* sc_dist = app.add_subcommand("distance-scan", "conversion efficiency vs z at fixed eta");
  add_common(sc_dist);
  sc_dist->add_option("--eta", opt_eta_slices, "eta slices")->delimiter(driver_comma);
  sc_dist->add_option("--z-max", opt_z_max, "largest distance in um");
  sc_dist->add_option("--z-samples", opt_z_samples);
  sc_dist->add_flag("--no-baseline", opt_no_baseline);
  sc_dist->add_flag("--matched-dm", opt_matched);
  sc_dist->add_option("--delta-m-meV", opt_delta_m);
  sc_dist->add_flag("--svg", opt_svg);
  sc_dist->add_option("--name", opt_name);

  // ---- no-control-scan ----
  double opt_delta_p = 4.0;
  auto* sc_noc = app.add_subcommand("no-control-scan",
                                    "efficiency vs eta with the control field off");
  add_common(sc_noc);
  sc_noc->add_option("--z", opt_z, "propagation distances in um")->delimiter(driver_comma);
  sc_noc->add_option("--samples", opt_samples);
  sc_noc->add_option("--eta-min", opt_eta_min);
  sc_noc->add_option("--eta-max", opt_eta_max);
  sc_noc->add_option("--delta-p-meV", opt_delta_p, "pump detuning (TIT point)");
  sc_noc->add_flag("--no-baseline", opt_no_baseline);
  sc_noc->add_flag("--matched-dm", opt_matched);
  sc_noc->add_option("--delta-m-meV", opt_delta_m);
  sc_noc->add_flag("--svg", opt_svg);
  sc_noc->add_option("--name", opt_name);

  // ---- oracle-compare ----
  double opt_oc_z = 10.0, opt_omega_p = 0.01, opt_omega_d2 = 0.01;
  double opt_t_span = 16.0, opt_dz = 0.01;
  std::size_t opt_nt = 8192, opt_stride = 100;
  bool opt_full = false, opt_alt_tp = false;
  std::string opt_dump;
  auto* sc_oc = app.add_subcommand(
      "oracle-compare", "time-domain integrator vs the closed-form spectrum");
  add_common(sc_oc);
  sc_oc->add_option("--z", opt_oc_z, "propagation distance in um");
  sc_oc->add_option("--omega-p", opt_omega_p, "pump peak, units of hbar/tau");
  sc_oc->add_option("--omega-d2", opt_omega_d2, "two-photon drive, units of hbar/tau");
  sc_oc->add_option("--nt", opt_nt, "time samples (power of two)");
  sc_oc->add_option("--t-span", opt_t_span, "half-width of the t'/tau window");
  sc_oc->add_option("--dz", opt_dz, "z step in um");
  sc_oc->add_option("--store-stride", opt_stride);
  sc_oc->add_flag("--full", opt_full, "evolve b1 too (default: undepleted)");
  sc_oc->add_flag("--alt-two-photon", opt_alt_tp,
                  "couple the two-photon drive to (b2 + k b5) instead of (b3 + k b4)");
  sc_oc->add_option("--dump", opt_dump, "dump the propagation solution (basename)");
  sc_oc->add_option("--delta-m-meV", opt_delta_m);
  sc_oc->add_flag("--matched-dm", opt_matched);

  // ---- group-velocity ----
  auto* sc_gv = app.add_subcommand("group-velocity",
                                   "pump/FWM group velocities and matching detunings");
  add_common(sc_gv);
  sc_gv->add_option("--name", opt_name);

  // ---- bandstructure ----
  double opt_dx = 0.05;
  int opt_states = 6;
  bool opt_wavefunctions = false;
  auto* sc_bs = app.add_subcommand("bandstructure",
                                   "subband energies, wavefunctions and dipole ratios");
  add_common(sc_bs);
  sc_bs->add_option("--dx", opt_dx, "grid step in nm (<= 0.05)");
  sc_bs->add_option("--states", opt_states, "number of bound states");
  sc_bs->add_flag("--wavefunctions", opt_wavefunctions, "also write psi(x) CSV");
  sc_bs->add_option("--name", opt_name);

  // ---- pulse ----
  double opt_pulse_z = 10.0;
  auto* sc_pulse = app.add_subcommand("pulse", "time-domain pump and generated FWM pulse");
  add_common(sc_pulse);
  sc_pulse->add_option("--z", opt_pulse_z, "propagation distance in um");
  sc_pulse->add_option("--samples", opt_samples);
  sc_pulse->add_option("--eta-min", opt_eta_min);
  sc_pulse->add_option("--eta-max", opt_eta_max);
  sc_pulse->add_option("--delta-m-meV", opt_delta_m);
  sc_pulse->add_flag("--matched-dm", opt_matched);
  sc_pulse->add_option("--name", opt_name);

  // ---- plot ----
  std::string opt_plot_in, opt_plot_out;
  auto* sc_plot = app.add_subcommand("plot", "render one of our CSV artifacts as SVG");
  sc_plot->add_option("--input", opt_plot_in, "CSV path")->required();
  sc_plot->add_option("--output", opt_plot_out, "SVG path (default: input with .svg)");

  // ---- reproduce ----
  std::string opt_fig;
  auto* sc_rep = app.add_subcommand("reproduce", "emit the preset figure data sets");
  add_common(sc_rep);
  sc_rep->add_option("figure", opt_fig, "fig2 | fig3 | fig4")->required();
  sc_rep->add_option("--samples", opt_samples);

  std::vector<const char*> argv;
  argv.push_back("qwfwm");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const std::string out = resolve_out_dir(common.out_dir);
    auto [med, drv] = load_params(common.config_path);
    // the no-control scan re-derives its matched root with the control off
    if (opt_matched && !*sc_noc) drv.delta_m_meV = matched_delta_m(med, drv);
    if (!std::isnan(opt_delta_m)) drv.delta_m_meV = opt_delta_m;

    auto scan_name = [&](const char* fallback) {
      return opt_name.empty() ? std::string(fallback) : opt_name;
    };
    auto emit_scan = [&](const ScanResult& res, const std::string& base) {
      const std::string csv = join(out, base + ".csv");
      write_csv(res, csv);
      report(csv, res.rows.size());
      if (opt_svg) {
        const std::string svg = join(out, base + ".svg");
        write_svg(res, base, svg);
        std::cout << "wrote " << svg << "\n";
      }
    };

    if (*sc_eta) {
      const auto grid = make_eta_grid(opt_samples, opt_eta_min, opt_eta_max);
      emit_scan(eta_scan(med, drv, opt_z, grid, !opt_no_baseline, common.threads),
                scan_name("eta_scan"));
      return 0;
    }

    if (*sc_dist) {
      std::vector<double> zg(opt_z_samples);
      for (std::size_t i = 0; i < opt_z_samples; ++i)
        zg[i] = opt_z_max * double(i) / double(opt_z_samples - 1);
      emit_scan(distance_scan(med, drv, opt_eta_slices, zg, !opt_no_baseline, common.threads),
                scan_name("distance_scan"));
      return 0;
    }

    if (*sc_noc) {
      DriveSpec d = drv;
      d.delta_p_meV = opt_delta_p;
      d.omega_c_meV = 0.0;
      if (opt_matched && std::isnan(opt_delta_m)) d.delta_m_meV = matched_delta_m(med, d);
      const auto grid = make_eta_grid(opt_samples, opt_eta_min, opt_eta_max);
      const ScanResult res = no_control_scan(med, d, opt_z, grid, !opt_no_baseline, common.threads);
      emit_scan(res, scan_name("no_control_scan"));
      const std::string diag = join(out, scan_name("no_control_scan") + "_diagnostics.json");
      std::ofstream jf(diag, std::ios::binary);
      jf << res.diagnostics.dump(2) << "\n";
      std::cout << "wrote " << diag << "\n";
      std::cout << "TIT attenuation min/peak = "
                << res.diagnostics["tit"]["min_over_peak"].get<double>() << "\n";
      return 0;
    }

    if (*sc_oc) {
      DriveSpec d = drv;
      d.omega_p0_meV = opt_omega_p * hbar_meV_ps / d.tau_ps;
      d.omega_d2_meV = opt_omega_d2 * hbar_meV_ps / d.tau_ps;
      MbGrids g;
      g.nt = opt_nt;
      g.t_span_tau = opt_t_span;
      g.dz_um = opt_dz;
      g.store_stride = opt_stride;
      const PropagationSolution sol =
          integrate(med, d, opt_oc_z, g, opt_full ? MbMode::full : MbMode::undepleted,
                    opt_alt_tp);
      const DimensionlessSystem sys = to_dimensionless(med, d);
      const double mu_ratio = med.mu31_enm / med.mu51_enm;
      const OracleEfficiency oe =
          oracle_efficiency(sol, opt_oc_z, mu_ratio, sys.omega_d2_tau, sys.omega_p0_tau);
      // analytic rho on the oracle's grid over |eta| <= 2
      std::ofstream f(join(out, "oracle_compare.csv"), std::ios::binary);
      f << "eta,z_um,rho_analytic,rho_oracle,rel_dev\n";
      double peak_a = 0, peak_o = 0, l2n = 0, l2d = 0;
      std::size_t rows = 0;
      for (std::size_t i = 0; i < oe.eta.size(); ++i) {
        if (std::abs(oe.eta[i]) > 2.0) continue;
        const double ra = efficiency(opt_oc_z, oe.eta[i], sys, mu_ratio);
        const double ro = oe.rho[i];
        if (ra > peak_a) {
          peak_a = ra;
          peak_o = ro;
        }
        l2n += (ro - ra) * (ro - ra);
        l2d += ra * ra;
        f << format_full(oe.eta[i]) << ',' << format_full(opt_oc_z) << ',' << format_full(ra)
          << ',' << format_full(ro) << ','
          << format_full(ra > 0 ? std::abs(ro - ra) / ra : 0.0) << '\n';
        ++rows;
      }
      report(join(out, "oracle_compare.csv"), rows);
      const double peak_dev = peak_a > 0 ? std::abs(peak_o - peak_a) / peak_a : 0.0;
      std::cout << "peak rho (analytic) = " << peak_a << ", relative deviation at peak = "
                << peak_dev << ", L2 relative = " << std::sqrt(l2n / l2d) << "\n";
      if (!opt_dump.empty()) {
        dump_solution(sol, join(out, opt_dump));
        std::cout << "wrote " << join(out, opt_dump) << ".bin/.json\n";
      }
      return 0;
    }

    if (*sc_gv) {
      const DimensionlessSystem sys = to_dimensionless(med, drv);
      const MatchResult mr = match_detuning(med, drv);
      const std::string path = join(out, scan_name("group_velocity") + ".csv");
      std::ofstream f(path, std::ios::binary);
      f << "delta_m_meV,vg_p_over_c,vg_m_over_c,vg_mismatch_rel\n";
      for (double r : mr.roots_meV) {
        DriveSpec d2 = drv;
        d2.delta_m_meV = r;
        const double vgm =
            group_velocity(Branch::fwm, 0.0, to_dimensionless(med, d2)).vg_over_c;
        f << format_full(r) << ',' << format_full(mr.vg_pump_over_c) << ',' << format_full(vgm)
          << ',' << format_full(std::abs(vgm - mr.vg_pump_over_c) / mr.vg_pump_over_c) << '\n';
      }
      report(path, mr.roots_meV.size());
      const GroupVelocity gm = group_velocity(Branch::fwm, 0.0, sys);
      std::cout << "vg_p/c = " << mr.vg_pump_over_c << " at eta=0 (current delta_m gives ";
      if (gm.anomalous)
        std::cout << "anomalous dispersion on the FWM branch)\n";
      else
        std::cout << "vg_m/c = " << gm.vg_over_c << ")\n";
      if (mr.roots_meV.empty())
        std::cout << "no matching root in [-1, 1] meV\n";
      else
        for (double r : mr.roots_meV) std::cout << "matched delta_m = " << r * 1000 << " ueV\n";
      return 0;
    }

    if (*sc_bs) {
      const StructureAnalysis a = analyze_structure(med.layers, opt_dx, opt_states);
      const std::string path = join(out, scan_name("bandstructure") + ".json");
      std::ofstream f(path, std::ios::binary);
      f << to_json(a).dump(2) << "\n";
      std::cout << "wrote " << path << "\n";
      std::cout << "energies (meV):";
      for (double e : a.sol.energies_meV) std::cout << " " << e;
      std::cout << "\nratios: m = " << a.ratios.m << ", q = " << a.ratios.q
                << ", k = " << a.ratios.k << " (FWM state rank " << a.sol.fwm_index + 1 << ")\n";
      if (opt_wavefunctions) {
        const std::string wf = join(out, scan_name("bandstructure") + "_psi.csv");
        std::ofstream wff(wf, std::ios::binary);
        wff << "x_nm";
        for (std::size_t s = 0; s < a.sol.psi.size(); ++s) wff << ",psi" << s + 1;
        wff << "\n";
        for (std::size_t i = 0; i < a.sol.x_nm.size(); ++i) {
          wff << format_full(a.sol.x_nm[i]);
          for (const auto& p : a.sol.psi) wff << ',' << format_full(p[i]);
          wff << "\n";
        }
        report(wf, a.sol.x_nm.size());
      }
      return 0;
    }

    if (*sc_pulse) {
      const DimensionlessSystem sys = to_dimensionless(med, drv);
      const auto grid = make_eta_grid(opt_samples, opt_eta_min, opt_eta_max);
      const TimeField fwm = generated_pulse(opt_pulse_z, sys, sys.omega_p0_tau, grid);
      // transmitted pump: W_p(z) = W_p(0) e^{i Kp zeta}
      SpectralField wp = gaussian_pump(sys.omega_p0_tau, grid);
      wp.z_um = opt_pulse_z;
      const double zeta = sys.zeta(opt_pulse_z);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto K = wavenumbers(grid[i], sys);
        wp.values[i] *= std::exp(cplx(0, 1) * K.Kp * zeta);
      }
      const TimeField pump = inverse(wp);
      const std::string path = join(out, scan_name("pulse") + ".csv");
      std::ofstream f(path, std::ios::binary);
      f << "t_over_tau,re_omega_p,im_omega_p,abs_omega_p,re_omega_m,im_omega_m,abs_omega_m\n";
      for (std::size_t i = 0; i < fwm.t_grid.size(); ++i) {
        f << format_full(fwm.t_grid[i]) << ',' << format_full(pump.values[i].real()) << ','
          << format_full(pump.values[i].imag()) << ',' << format_full(std::abs(pump.values[i]))
          << ',' << format_full(fwm.values[i].real()) << ',' << format_full(fwm.values[i].imag())
          << ',' << format_full(std::abs(fwm.values[i])) << '\n';
      }
      report(path, fwm.t_grid.size());
      return 0;
    }

    if (*sc_plot) {
      const CsvTable t = parse_csv(opt_plot_in);
      if (t.header.empty()) throw config_error("plot: empty CSV");
      std::string outp = opt_plot_out;
      if (outp.empty()) outp = fs::path(opt_plot_in).replace_extension(".svg").string();
      if (t.header.size() == 5 && t.header[0] == "eta" && t.header[1] == "z_um" &&
          t.header[2] == "rho_tunneling") {
        ScanResult res;
        // distance scans vary z within a slice; detect by comparing columns
        bool eta_varies = t.rows.size() > 1 && t.rows[0][0] != t.rows[1][0];
        res.axis = eta_varies ? "eta" : "z_um";
        for (const auto& r : t.rows) {
          ScanRow row;
          row.eta = r[0];
          row.z_um = r[1];
          row.rho_tunneling = r[2];
          row.rho_baseline = r[3];
          if (!std::isnan(r[4])) row.enhancement = r[4];
          res.rows.push_back(row);
        }
        write_svg(res, fs::path(opt_plot_in).filename().string(), outp);
      } else {
        std::vector<SvgSeries> series(t.header.size() - 1);
        for (std::size_t c = 1; c < t.header.size(); ++c) series[c - 1].label = t.header[c];
        for (const auto& r : t.rows)
          for (std::size_t c = 1; c < r.size() && c < t.header.size(); ++c) {
            series[c - 1].x.push_back(r[0]);
            series[c - 1].y.push_back(r[c]);
          }
        write_svg(series, t.header[0], "value", fs::path(opt_plot_in).filename().string(), outp);
      }
      std::cout << "wrote " << outp << "\n";
      return 0;
    }

    if (*sc_rep) {
      const auto grid = make_eta_grid(opt_samples, -8.0, 8.0);
      if (opt_fig == "fig2") {
        const double root = matched_delta_m(med, drv);
        for (int sign : {+1, -1}) {
          DriveSpec d = drv;
          d.delta_m_meV = sign * root;
          const ScanResult res =
              eta_scan(med, d, {1.0, 10.0, 20.0}, grid, true, common.threads);
          const std::string base = sign > 0 ? "fig2_dm_plus" : "fig2_dm_minus";
          write_csv(res, join(out, base + ".csv"));
          report(join(out, base + ".csv"), res.rows.size());
          write_svg(res, base, join(out, base + ".svg"));
          std::cout << "wrote " << join(out, base + ".svg") << "\n";
        }
        return 0;
      }
      if (opt_fig == "fig3") {
        const double root = matched_delta_m(med, drv);
        std::vector<double> zg(801);
        for (std::size_t i = 0; i < zg.size(); ++i) zg[i] = 20.0 * double(i) / 800.0;
        for (int sign : {+1, -1}) {
          DriveSpec d = drv;
          d.delta_m_meV = sign * root;
          const ScanResult res =
              distance_scan(med, d, {0.75, -0.75}, zg, true, common.threads);
          const std::string base = sign > 0 ? "fig3_dm_plus" : "fig3_dm_minus";
          write_csv(res, join(out, base + ".csv"));
          report(join(out, base + ".csv"), res.rows.size());
          write_svg(res, base, join(out, base + ".svg"));
          std::cout << "wrote " << join(out, base + ".svg") << "\n";
        }
        return 0;
      }
      if (opt_fig == "fig4") {
        DriveSpec d = drv;
        d.omega_c_meV = 0.0;
        d.delta_p_meV = 4.0;
        const double root = matched_delta_m(med, d);
        for (int sign : {+1, -1}) {
          DriveSpec d2 = d;
          d2.delta_m_meV = sign * root;
          const ScanResult res =
              no_control_scan(med, d2, {1.0, 10.0, 20.0}, grid, true, common.threads);
          const std::string base = sign > 0 ? "fig4_dm_plus" : "fig4_dm_minus";
          write_csv(res, join(out, base + ".csv"));
          report(join(out, base + ".csv"), res.rows.size());
          write_svg(res, base, join(out, base + ".svg"));
          std::cout << "wrote " << join(out, base + ".svg") << "\n";
          const std::string diag = join(out, base + "_diagnostics.json");
          std::ofstream jf(diag, std::ios::binary);
          jf << res.diagnostics.dump(2) << "\n";
          std::cout << "wrote " << diag << "\n";
        }
        return 0;
      }
      throw config_error("reproduce: unknown figure \"" + opt_fig + "\" (fig2|fig3|fig4)");
    }
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace qwfwm::cli
