#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qwfwm/params.hpp"

// 1D effective-mass solver for the layered Al(x)Ga(1-x)As conduction-band
// profile. Material model (not from the structure data itself, see README):
// conduction-band offset 0.65 * 1247 * x meV (valid x < 0.45) and effective
// mass m*(x) = 0.067 + 0.083 x. Kinetic operator in BenDaniel-Duke form,
// -(hbar^2/2) d/dx [ (1/m*) d/dx ] + V, discretized with symmetric finite
// differences, which keeps the matrix symmetric under the plain l2 inner
// product.

namespace qwfwm {

inline double band_offset_meV(double x) {
  if (x < 0.0 || x > 0.45) throw config_error("band_offset: aluminum fraction outside [0, 0.45]");
  return 0.65 * 1247.0 * x;
}

inline double effective_mass(double x) { return 0.067 + 0.083 * x; }

struct PotentialProfile {
  std::vector<double> x_nm;    // uniform grid including both ends
  std::vector<double> V_meV;   // conduction band edge
  std::vector<double> mass;    // m*(x) in units of m0
  double dx_nm = 0;
  double barrier_top_meV = 0;  // bound-state ceiling
};

inline PotentialProfile build_profile(const std::vector<Layer>& layers, double dx_nm = 0.05,
                                      double pad_nm = 15.0, double pad_x = 0.4) {
  if (layers.empty()) throw config_error("build_profile: no layers");
  if (pad_nm < 15.0) throw config_error("build_profile: outer barriers must be padded >= 15 nm");
  if (!(dx_nm > 0) || dx_nm > 0.05 + 1e-12)
    throw config_error("build_profile: grid step must be in (0, 0.05] nm");
  std::vector<Layer> stack;
  stack.push_back({pad_x, pad_nm});
  for (const auto& l : layers) {
    if (!(l.thickness_nm > 0)) throw config_error("build_profile: negative or zero thickness");
    stack.push_back(l);
  }
  stack.push_back({pad_x, pad_nm});

  double total = 0;
  for (const auto& l : stack) total += l.thickness_nm;
  const std::size_t n = std::size_t(std::round(total / dx_nm)) + 1;

  PotentialProfile p;
  p.dx_nm = total / double(n - 1);
  p.barrier_top_meV = band_offset_meV(pad_x);
  p.x_nm.resize(n);
  p.V_meV.resize(n);
  p.mass.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = p.dx_nm * double(i);
    p.x_nm[i] = x;
    // layer lookup; points landing exactly on an interface take the left layer
    double acc = 0;
    double frac = stack.back().x;
    for (const auto& l : stack) {
      if (x <= acc + l.thickness_nm + 1e-9) {
        frac = l.x;
        break;
      }
      acc += l.thickness_nm;
    }
    p.V_meV[i] = band_offset_meV(frac);
    p.mass[i] = effective_mass(frac);
  }
  return p;
}

namespace detail {

// Eigenvalue count below lambda for a symmetric tridiagonal matrix
// (Sturm sequence via the LDL^T pivots).
inline int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double lambda) {
  constexpr double pivmin = 1e-280;
  int cnt = 0;
  double piv = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off = (i == 0) ? 0.0 : e[i - 1] * e[i - 1] / piv;
    piv = d[i] - lambda - off;
    if (std::abs(piv) < pivmin) piv = -pivmin;
    if (piv < 0.0) ++cnt;
  }
  return cnt;
}

// k-th (0-based) eigenvalue by bisection.
inline double tridiag_eigenvalue(const std::vector<double>& d, const std::vector<double>& e, int k) {
  double lo = d[0], hi = d[0];
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < d.size() ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-11 * std::max(1.0, std::abs(hi)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(d, e, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Solve (T - lambda I) x = b for tridiagonal T with partial pivoting.
inline void solve_shifted(const std::vector<double>& d, const std::vector<double>& e,
                          double lambda, std::vector<double>& x) {
  const std::size_t n = d.size();
  std::vector<double> a(n), b(n, 0.0), c(n, 0.0);  // diag, super, super2
  std::vector<double> sub(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = d[i] - lambda;
    if (i + 1 < n) {
      b[i] = e[i];
      sub[i] = e[i];
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(sub[i]) > std::abs(a[i])) {
      std::swap(a[i], sub[i]);
      std::swap(b[i], a[i + 1]);
      std::swap(c[i], b[i + 1]);
      std::swap(x[i], x[i + 1]);
    }
    if (a[i] == 0.0) a[i] = 1e-280;
    const double f = sub[i] / a[i];
    a[i + 1] -= f * b[i];
    b[i + 1] -= f * c[i];
    x[i + 1] -= f * x[i];
  }
  if (a[n - 1] == 0.0) a[n - 1] = 1e-280;
  x[n - 1] /= a[n - 1];
  if (n >= 2) x[n - 2] = (x[n - 2] - b[n - 2] * x[n - 1]) / (a[n - 2] == 0.0 ? 1e-280 : a[n - 2]);
  for (std::size_t ii = n - 2; ii-- > 0;) {
    x[ii] = (x[ii] - b[ii] * x[ii + 1] - c[ii] * x[ii + 2]) / (a[ii] == 0.0 ? 1e-280 : a[ii]);
  }
}

}  // namespace detail

// Eigenenergies, normalized wavefunctions (including the zero boundary
// nodes) and the position dipole matrix.
struct SubbandSolution {
  std::vector<double> energies_meV;
  std::vector<std::vector<double>> psi;  // psi[state][node], normalized, real
  std::vector<double> x_nm;
  double dx_nm = 0;
  std::vector<std::vector<double>> mu_enm;  // mu[i][j] = <psi_i| x |psi_j>
  double m = 0, q = 0, k = 0;
  int fwm_index = 4;  // state used as |5> in the ratios
};

// Lowest n eigenpairs of the BenDaniel-Duke operator on the profile.
// Sign convention: each wavefunction has a positive first antinode (rises
// positively out of the left barrier).
inline SubbandSolution solve_subbands(const PotentialProfile& p, int nstates) {
  const std::size_t n = p.x_nm.size();
  if (n < 8) throw config_error("solve_subbands: profile too coarse");
  const std::size_t ni = n - 2;  // interior nodes, Dirichlet ends
  const double dx = p.dx_nm;
  std::vector<double> w(n - 1);  // 1/m* at half nodes
  for (std::size_t i = 0; i + 1 < n; ++i) w[i] = 2.0 / (p.mass[i] + p.mass[i + 1]);
  std::vector<double> diag(ni), off(ni - 1);
  const double t = hbar2_over_2m0_meV_nm2 / (dx * dx);
  for (std::size_t i = 1; i + 1 <= ni; ++i) off[i - 1] = -t * w[i];
  for (std::size_t i = 1; i <= ni; ++i) diag[i - 1] = t * (w[i - 1] + w[i]) + p.V_meV[i];

  int nbound = detail::sturm_count(diag, off, p.barrier_top_meV);
  if (nbound < nstates)
    throw numerical_error("solve_subbands: only " + std::to_string(nbound) +
                          " bound states below the barrier, " + std::to_string(nstates) +
                          " requested");

  SubbandSolution sol;
  sol.x_nm = p.x_nm;
  sol.dx_nm = dx;
  sol.energies_meV.resize(nstates);
  sol.psi.assign(nstates, std::vector<double>(n, 0.0));

  for (int kst = 0; kst < nstates; ++kst) {
    const double lam = detail::tridiag_eigenvalue(diag, off, kst);
    sol.energies_meV[kst] = lam;
    // inverse iteration from a deterministic pseudo-random start
    std::vector<double> v(ni);
    unsigned long long state = 0x9e3779b97f4a7c15ULL + 0x1000193ULL * (unsigned long long)kst;
    for (std::size_t i = 0; i < ni; ++i) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      v[i] = double((state >> 11) & 0xFFFFFF) / double(0xFFFFFF) - 0.5;
    }
    for (int it = 0; it < 4; ++it) {
      detail::solve_shifted(diag, off, lam + 1e-10 * std::max(1.0, std::abs(lam)), v);
      // orthogonalize against lower states
      for (int j = 0; j < kst; ++j) {
        double dot = 0;
        for (std::size_t i = 0; i < ni; ++i) dot += v[i] * sol.psi[j][i + 1];
        dot *= dx;
        for (std::size_t i = 0; i < ni; ++i) v[i] -= dot * sol.psi[j][i + 1];
      }
      double nrm = 0;
      for (double val : v) nrm += val * val;
      nrm = std::sqrt(nrm * dx);
      if (!(nrm > 0) || !std::isfinite(nrm))
        throw numerical_error("solve_subbands: inverse iteration failed");
      for (double& val : v) val /= nrm;
    }
    for (std::size_t i = 0; i < ni; ++i) sol.psi[kst][i + 1] = v[i];
    // sign convention: first antinode positive
    double mx = 0;
    for (double val : sol.psi[kst]) mx = std::max(mx, std::abs(val));
    std::size_t i0 = 0;
    while (i0 < n && std::abs(sol.psi[kst][i0]) < 0.05 * mx) ++i0;
    std::size_t ie = i0;
    while (ie + 1 < n && std::abs(sol.psi[kst][ie + 1]) >= std::abs(sol.psi[kst][ie])) ++ie;
    if (sol.psi[kst][ie] < 0)
      for (double& val : sol.psi[kst]) val = -val;
  }

  sol.mu_enm.assign(nstates, std::vector<double>(nstates, 0.0));
  for (int i = 0; i < nstates; ++i)
    for (int j = 0; j < nstates; ++j) {
      double acc = 0;
      for (std::size_t g = 0; g < n; ++g) acc += sol.psi[i][g] * p.x_nm[g] * sol.psi[j][g];
      sol.mu_enm[i][j] = acc * dx;
    }
  return sol;
}

struct DipoleRatios {
  double m = 0, q = 0, k = 0;
  bool small_denominator = false;  // |mu31|, |mu32| or |mu53| below 1e-3 e nm
};

// m = mu41/mu31, q = mu42/mu32, k = mu54/mu53 with |5> = sol.fwm_index.
inline DipoleRatios dipole_ratios(const SubbandSolution& sol) {
  if (sol.energies_meV.size() < 5 || sol.fwm_index < 4 ||
      sol.fwm_index >= int(sol.energies_meV.size()))
    throw config_error("dipole_ratios: need at least five states");
  const auto& mu = sol.mu_enm;
  const int f = sol.fwm_index;
  DipoleRatios r;
  const double mu31 = mu[2][0], mu41 = mu[3][0], mu32 = mu[2][1], mu42 = mu[3][1];
  const double mu53 = mu[f][2], mu54 = mu[f][3];
  if (std::abs(mu31) < 1e-3 || std::abs(mu32) < 1e-3 || std::abs(mu53) < 1e-3)
    r.small_denominator = true;
  r.m = mu41 / mu31;
  r.q = mu42 / mu32;
  r.k = mu54 / mu53;
  return r;
}

// Full analysis of the two-well stack: coupled solve, isolated-well solves
// (each with the other well replaced by barrier material), FWM-state
// selection by deep-well second-excited character, and the ratios.
struct StructureAnalysis {
  SubbandSolution sol;
  SubbandSolution deep_only, shallow_only;
  int deep_layer = -1, shallow_layer = -1;  // indices into the input layers
  DipoleRatios ratios;
  double fwm_overlap = 0;  // |<psi_fwm | deep-well 2nd excited>|
};

inline StructureAnalysis analyze_structure(const std::vector<Layer>& layers, double dx_nm = 0.05,
                                           int nstates = 6, double pad_nm = 15.0,
                                           double pad_x = 0.4) {
  StructureAnalysis a;
  // identify the two wells: layers below the padding barrier composition
  std::vector<int> wells;
  for (std::size_t i = 0; i < layers.size(); ++i)
    if (layers[i].x < pad_x - 1e-12) wells.push_back(int(i));
  if (wells.size() != 2)
    throw config_error("analyze_structure: expected exactly two well layers");
  a.deep_layer = layers[wells[0]].x < layers[wells[1]].x ? wells[0] : wells[1];
  a.shallow_layer = a.deep_layer == wells[0] ? wells[1] : wells[0];

  const PotentialProfile p = build_profile(layers, dx_nm, pad_nm, pad_x);
  a.sol = solve_subbands(p, nstates);

  auto isolated = [&](int keep) {
    std::vector<Layer> iso = layers;
    for (int wi : wells)
      if (wi != keep) iso[wi].x = pad_x;
    return solve_subbands(build_profile(iso, dx_nm, pad_nm, pad_x), 3);
  };
  a.deep_only = isolated(a.deep_layer);
  a.shallow_only = isolated(a.shallow_layer);

  // |5> of the mixing scheme is the deep well's second excited subband; pick
  // the computed state (above the doublet) with the largest overlap onto it.
  const std::size_t n = p.x_nm.size();
  double best = -1.0;
  int best_idx = 4;
  for (int s = 4; s < nstates; ++s) {
    double ov = 0;
    for (std::size_t g = 0; g < n; ++g) ov += a.sol.psi[s][g] * a.deep_only.psi[2][g];
    ov = std::abs(ov * p.dx_nm);
    if (ov > best) {
      best = ov;
      best_idx = s;
    }
  }
  a.sol.fwm_index = best_idx;
  a.fwm_overlap = best;
  a.ratios = dipole_ratios(a.sol);
  a.sol.m = a.ratios.m;
  a.sol.q = a.ratios.q;
  a.sol.k = a.ratios.k;
  return a;
}

// JSON export for feeding parameter overrides.
inline json to_json(const StructureAnalysis& a) {
  json energies = json::array();
  for (double e : a.sol.energies_meV) energies.push_back(e);
  const auto& mu = a.sol.mu_enm;
  const int f = a.sol.fwm_index;
  return json{{"energies_meV", energies},
              {"m", a.ratios.m},
              {"q", a.ratios.q},
              {"k", a.ratios.k},
              {"fwm_state_rank", f + 1},
              {"fwm_state_overlap_deep2e", a.fwm_overlap},
              {"mu31_enm", mu[2][0]},
              {"mu32_enm", mu[2][1]},
              {"mu41_enm", mu[3][0]},
              {"mu42_enm", mu[3][1]},
              {"mu51_enm", mu[f][0]},
              {"mu53_enm", mu[f][2]},
              {"mu54_enm", mu[f][3]}};
}

}  // namespace qwfwm
