#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "qwfwm/pulse_transform.hpp"

// Independent time-domain integrator of the full model: the five amplitude
// equations coupled to the two propagation equations, in the retarded frame
// t' = t - z/c where the field equations become pure z-ODEs per time sample.
// Amplitudes are integrated in t' with classic RK4 (fields at half steps from
// 4-point interpolation); z-marching is a 2nd-order predictor-corrector.
//
// The b1 equation is closed with conjugated field couplings so that the
// gamma=0 system is Hermitian and conserves the total norm for complex
// envelopes; for real fields the conjugation is invisible.
//
// The two-photon term in the b5 equation couples to (b3 + k b4), consistent
// with the b3/b4 equations and the frequency-domain response. The alternative
// (b2 + k b5) coupling stays available behind a flag for comparison.

namespace qwfwm {

enum class MbMode { undepleted, full };

struct MbGrids {
  std::size_t nt = 4096;     // time samples (power of two)
  double t_span_tau = 8.0;   // grid covers [-t_span, +t_span) in units of tau
  double dz_um = 0.01;       // z step
  std::size_t store_stride = 50;  // keep every k-th slice (plus first/last)
};

struct PropagationSolution {
  std::vector<double> z_um;      // stored slices
  std::vector<double> t_grid;    // t'/tau
  std::vector<std::vector<cplx>> omega_p, omega_m;   // [slice][t]
  std::array<std::vector<std::vector<cplx>>, 5> b;   // b1..b5, [slice][t]
  std::vector<double> norm_dev;  // per stored slice: max |sum|b_i|^2 - 1|
  double dz_um = 0, dt_tau = 0;
  MbMode mode = MbMode::undepleted;
};

namespace detail {

struct MbWork {
  const DimensionlessSystem* s;
  bool full;          // evolve b1
  bool alt_two_photon;
  double dk_phase;    // delta_k * c*tau * zeta at current z
  // RK4 sweep over the time grid. Fields are sampled arrays; midpoints via
  // cubic interpolation. Outputs polarization arrays and amplitude history.
  void sweep(const std::vector<cplx>& Op, const std::vector<cplx>& Om, double dt,
             std::vector<cplx>& Pp, std::vector<cplx>& Pm,
             std::array<std::vector<cplx>, 5>* hist, double* norm_dev) const {
    const std::size_t nt = Op.size();
    const cplx I(0.0, 1.0);
    const cplx eneg = std::polar(1.0, -dk_phase), epos = std::polar(1.0, dk_phase);
    std::array<cplx, 5> bb{cplx(1.0), 0.0, 0.0, 0.0, 0.0};
    auto rhs = [&](const std::array<cplx, 5>& b, cplx op, cplx om) {
      std::array<cplx, 5> f;
      const cplx two_photon = alt_two_photon ? (b[1] + s->k * b[4]) : (b[2] + s->k * b[3]);
      f[0] = full ? I * (std::conj(op) * (b[2] + s->m * b[3]) + std::conj(om) * b[4])
                  : cplx(0.0);
      f[1] = I * (s->d2 * b[1] + s->omega_c_tau * (b[2] + s->q * b[3]));
      f[2] = I * (s->d3 * b[2] + op * b[0] + s->omega_c_tau * b[1] +
                  s->omega_d2_tau * eneg * b[4]);
      f[3] = I * (s->d4 * b[3] + s->m * op * b[0] + s->q * s->omega_c_tau * b[1] +
                  s->k * s->omega_d2_tau * eneg * b[4]);
      f[4] = I * (s->d5 * b[4] + om * b[0] + s->omega_d2_tau * epos * two_photon);
      return f;
    };
    auto mid = [&](const std::vector<cplx>& f, std::size_t i) {
      // 4-point (cubic) interpolation at i + 1/2
      const cplx fm1 = i > 0 ? f[i - 1] : f[i];
      const cplx fp2 = i + 2 < nt ? f[i + 2] : f[i + 1 < nt ? i + 1 : i];
      const cplx f0 = f[i];
      const cplx fp1 = i + 1 < nt ? f[i + 1] : f[i];
      return (-fm1 + 9.0 * f0 + 9.0 * fp1 - fp2) / 16.0;
    };
    double nd = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      Pp[i] = (bb[2] + s->m * bb[3]) * std::conj(bb[0]);
      Pm[i] = bb[4] * std::conj(bb[0]);
      if (hist)
        for (int j = 0; j < 5; ++j) (*hist)[j][i] = bb[j];
      if (norm_dev) {
        double nrm = 0;
        for (const auto& v : bb) nrm += std::norm(v);
        nd = std::max(nd, std::abs(nrm - 1.0));
      }
      const cplx op0 = Op[i], om0 = Om[i];
      const cplx oph = mid(Op, i), omh = mid(Om, i);
      const cplx op1 = i + 1 < nt ? Op[i + 1] : Op[i];
      const cplx om1 = i + 1 < nt ? Om[i + 1] : Om[i];
      const auto k1 = rhs(bb, op0, om0);
      std::array<cplx, 5> tmp;
      for (int j = 0; j < 5; ++j) tmp[j] = bb[j] + 0.5 * dt * k1[j];
      const auto k2 = rhs(tmp, oph, omh);
      for (int j = 0; j < 5; ++j) tmp[j] = bb[j] + 0.5 * dt * k2[j];
      const auto k3 = rhs(tmp, oph, omh);
      for (int j = 0; j < 5; ++j) tmp[j] = bb[j] + dt * k3[j];
      const auto k4 = rhs(tmp, op1, om1);
      for (int j = 0; j < 5; ++j)
        bb[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    if (norm_dev) *norm_dev = nd;
  }
};

}  // namespace detail

inline PropagationSolution integrate(const MediumSpec& med, const DriveSpec& drv, double z_um,
                                     const MbGrids& g, MbMode mode, bool alt_two_photon = false) {
  if (!(z_um >= 0)) throw config_error("integrate: negative propagation distance");
  if (!(g.dz_um > 0)) throw config_error("integrate: z step must be > 0");
  if (!detail::is_pow2(g.nt) || g.nt < 8)
    throw config_error("integrate: nt must be a power of two >= 8");
  const DimensionlessSystem sys = to_dimensionless(med, drv);
  const std::size_t nz = std::size_t(std::llround(z_um / g.dz_um));
  if (nz > 50'000'000) throw config_error("integrate: z step underflow (too many steps)");
  const double dzeta = sys.zeta(g.dz_um);
  const double dt = 2.0 * g.t_span_tau / double(g.nt);
  const bool gamma_free = med.gamma2_meV < 1e-12 && med.gamma3_meV < 1e-12 &&
                          med.gamma4_meV < 1e-12 && med.gamma5_meV < 1e-12;

  PropagationSolution sol;
  sol.mode = mode;
  sol.dz_um = g.dz_um;
  sol.dt_tau = dt;
  sol.t_grid.resize(g.nt);
  for (std::size_t i = 0; i < g.nt; ++i)
    sol.t_grid[i] = -g.t_span_tau + dt * double(i);

  std::vector<cplx> Op(g.nt), Om(g.nt, cplx(0.0));
  for (std::size_t i = 0; i < g.nt; ++i)
    Op[i] = sys.omega_p0_tau * std::exp(-sol.t_grid[i] * sol.t_grid[i]);

  detail::MbWork work;
  work.s = &sys;
  work.full = mode == MbMode::full;
  work.alt_two_photon = alt_two_photon;

  std::vector<cplx> Pp(g.nt), Pm(g.nt), Pp1(g.nt), Pm1(g.nt);
  std::vector<cplx> Opp(g.nt), Omp(g.nt);
  std::array<std::vector<cplx>, 5> hist;
  for (auto& hh : hist) hh.resize(g.nt);

  auto store = [&](std::size_t iz, const std::vector<cplx>& op, const std::vector<cplx>& om) {
    work.dk_phase = sys.delta_k_ctau * dzeta * double(iz);
    double nd = 0;
    work.sweep(op, om, dt, Pp, Pm, &hist, &nd);
    sol.z_um.push_back(g.dz_um * double(iz));
    sol.omega_p.push_back(op);
    sol.omega_m.push_back(om);
    for (int j = 0; j < 5; ++j) sol.b[j].push_back(hist[j]);
    sol.norm_dev.push_back(nd);
    if (gamma_free && mode == MbMode::full && nd > 1e-3)
      throw numerical_error("integrate: norm blow-up, |sum|b|^2 - 1| = " + std::to_string(nd));
  };

  store(0, Op, Om);
  const cplx I(0.0, 1.0);
  for (std::size_t iz = 0; iz < nz; ++iz) {
    work.dk_phase = sys.delta_k_ctau * dzeta * double(iz);
    work.sweep(Op, Om, dt, Pp, Pm, nullptr, nullptr);
    for (std::size_t i = 0; i < g.nt; ++i) {
      Opp[i] = Op[i] + dzeta * I * sys.kappa_p_ctau2 * Pp[i];
      Omp[i] = Om[i] + dzeta * I * sys.kappa_m_ctau2 * Pm[i];
    }
    work.dk_phase = sys.delta_k_ctau * dzeta * double(iz + 1);
    work.sweep(Opp, Omp, dt, Pp1, Pm1, nullptr, nullptr);
    for (std::size_t i = 0; i < g.nt; ++i) {
      Op[i] += 0.5 * dzeta * I * sys.kappa_p_ctau2 * (Pp[i] + Pp1[i]);
      Om[i] += 0.5 * dzeta * I * sys.kappa_m_ctau2 * (Pm[i] + Pm1[i]);
      if (!std::isfinite(std::abs(Op[i])) || !std::isfinite(std::abs(Om[i])))
        throw numerical_error("integrate: non-finite field at z = " +
                              std::to_string(g.dz_um * double(iz + 1)) + " um");
    }
    if ((iz + 1) % g.store_stride == 0 || iz + 1 == nz) store(iz + 1, Op, Om);
  }
  return sol;
}

inline std::size_t nearest_slice(const PropagationSolution& sol, double z_um) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < sol.z_um.size(); ++i)
    if (std::abs(sol.z_um[i] - z_um) < std::abs(sol.z_um[best] - z_um)) best = i;
  return best;
}

// rho(eta) from the oracle's generated field: forward transform of
// Omega_m(z, t'), normalized per the conversion-efficiency definition. (The
// retarded frame contributes only the phase e^{i eta z'}, which drops out.)
struct OracleEfficiency {
  double z_um = 0;
  std::vector<double> eta;
  std::vector<double> rho;
};

inline OracleEfficiency oracle_efficiency(const PropagationSolution& sol, double z_um,
                                          double mu_ratio_31_51, double omega_d2_tau,
                                          double omega_p0_tau) {
  if (omega_d2_tau <= 0.0 || omega_p0_tau <= 0.0)
    throw config_error("oracle_efficiency: omega_d2 and omega_p0 must be > 0");
  const std::size_t i = nearest_slice(sol, z_um);
  TimeField f;
  f.z_um = sol.z_um[i];
  f.t_grid = sol.t_grid;
  f.values = sol.omega_m[i];
  const SpectralField W = forward(f);
  OracleEfficiency out;
  out.z_um = f.z_um;
  out.eta = W.grid;
  out.rho.resize(W.values.size());
  for (std::size_t j = 0; j < W.values.size(); ++j)
    out.rho[j] = efficiency_from_wm(W.values[j], mu_ratio_31_51, omega_d2_tau, omega_p0_tau);
  return out;
}

// Flat little-endian float64 dump (re/im interleaved, slice-major) plus a
// JSON sidecar describing shapes and grids.
inline void dump_solution(const PropagationSolution& sol, const std::string& basename) {
  std::ofstream bin(basename + ".bin", std::ios::binary);
  if (!bin) throw config_error("dump_solution: cannot open " + basename + ".bin");
  auto put = [&](const std::vector<std::vector<cplx>>& arr) {
    for (const auto& row : arr)
      for (const cplx& v : row) {
        const double re = v.real(), im = v.imag();
        bin.write(reinterpret_cast<const char*>(&re), sizeof(double));
        bin.write(reinterpret_cast<const char*>(&im), sizeof(double));
      }
  };
  put(sol.omega_p);
  put(sol.omega_m);
  for (int j = 0; j < 5; ++j) put(sol.b[j]);
  bin.close();

  json side;
  side["arrays"] = {"omega_p", "omega_m", "b1", "b2", "b3", "b4", "b5"};
  side["shape"] = {sol.z_um.size(), sol.t_grid.size()};
  side["dtype"] = "complex128 (little-endian, re/im interleaved)";
  side["z_um"] = sol.z_um;
  side["t_over_tau"] = sol.t_grid;
  side["dz_um"] = sol.dz_um;
  side["dt_tau"] = sol.dt_tau;
  side["mode"] = sol.mode == MbMode::full ? "full" : "undepleted";
  std::ofstream js(basename + ".json");
  if (!js) throw config_error("dump_solution: cannot open " + basename + ".json");
  js << side.dump(2) << "\n";
}

}  // namespace qwfwm
