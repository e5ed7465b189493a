#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "qwfwm/dispersion.hpp"
#include "support/test_oracles.hpp"

using namespace qwfwm;
using Catch::Approx;

namespace {
DimensionlessSystem default_sys() {
  auto [med, drv] = default_parameters();
  return to_dimensionless(med, drv);
}
}  // namespace

TEST_CASE("wavenumbers", "[dispersion]") {
  SECTION("vacuum limit: Kp = Km = eta") {
    auto s = default_sys();
    s.kappa_p_ctau2 = 0.0;
    s.kappa_m_ctau2 = 0.0;
    for (double eta : {-2.0, 0.0, 1.5}) {
      const Wavenumbers w = wavenumbers(eta, s);
      CHECK(w.Kp == cplx(eta));
      CHECK(w.Km == cplx(eta));
    }
  }

  SECTION("B decomposition identity on random parameter draws") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> un(0.1, 3.0);
    auto [med, drv] = default_parameters();
    for (int t = 0; t < 40; ++t) {
      MediumSpec m2 = med;
      DriveSpec d2 = drv;
      m2.gamma3_meV = un(rng);
      m2.gamma4_meV = un(rng);
      m2.gamma5_meV = 0.1 * un(rng);
      m2.m = -un(rng) / 2;
      m2.q = un(rng);
      m2.k = -un(rng);
      d2.delta_p_meV = un(rng) - 1.5;
      d2.delta_c_meV = un(rng);
      d2.delta_k_per_m = (un(rng) - 1.5) * 1e4;
      const auto s = to_dimensionless(m2, d2);
      const double eta = 3.0 * (un(rng) - 1.5);
      const Wavenumbers w = wavenumbers(eta, s);
      const cplx B = phase_B(eta, s);
      CHECK(std::abs(B - (s.delta_k_ctau + w.Kp - w.Km)) <= 1e-12 * std::abs(B));
    }
  }

  SECTION("frozen Kp at the defaults") {
    const auto s = default_sys();
    const cplx want(257.40525186402307089, 272.13348456783859812);
    CHECK(testor::rel_err(wavenumbers(0.0, s).Kp, want) < 1e-12);
  }

  SECTION("passive parameters attenuate: Im Kp >= 0 on the grid") {
    const auto s = default_sys();
    for (double a : absorption_spectrum(make_eta_grid(256), s)) CHECK(a >= 0.0);
  }
}

TEST_CASE("analytic derivative matches finite differences", "[dispersion]") {
  const auto s = default_sys();
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> un(-8.0, 8.0);
  const double h = 1e-4;
  for (int i = 0; i < 100; ++i) {
    const double eta = un(rng);
    const cplx fd_p =
        (wavenumbers(eta + h, s).Kp - wavenumbers(eta - h, s).Kp) / (2.0 * h);
    const cplx an_p = dKp_deta(eta, s);
    CHECK(std::abs(fd_p - an_p) < 1e-6 * std::max(1.0, std::abs(an_p)));
    const cplx fd_m =
        (wavenumbers(eta + h, s).Km - wavenumbers(eta - h, s).Km) / (2.0 * h);
    const cplx an_m = dKm_deta(eta, s);
    CHECK(std::abs(fd_m - an_m) < 1e-6 * std::max(1.0, std::abs(an_m)));
  }
}

TEST_CASE("group velocity", "[dispersion]") {
  SECTION("K = eta gives vg = c") {
    auto s = default_sys();
    s.kappa_p_ctau2 = 0.0;
    s.kappa_m_ctau2 = 0.0;
    CHECK(group_velocity(Branch::pump, 0.0, s).vg_over_c == Approx(1.0));
    CHECK(group_velocity(Branch::fwm, 0.3, s).vg_over_c == Approx(1.0));
  }

  SECTION("slope 3 gives c/3") {
    // kappa_m/e5^2 real and equal to 2 at eta=0: d5 = i*g, slope 1 - km/g^2
    auto s = default_sys();
    s.kappa_p_ctau2 = 0.0;
    s.d5 = cplx(0.0, 1.0);
    s.kappa_m_ctau2 = -2.0;  // synthetic: 1 + (-2)/(i)^2 = 3
    CHECK(group_velocity(Branch::fwm, 0.0, s).vg_over_c == Approx(1.0 / 3.0));
  }

  SECTION("pump branch at the defaults is deep in the slow-light band") {
    const auto s = default_sys();
    const GroupVelocity g = group_velocity(Branch::pump, 0.0, s);
    CHECK_FALSE(g.anomalous);
    CHECK(g.vg_over_c > 1e-4);
    CHECK(g.vg_over_c < 1e-1);  // operating point is a few times 1e-3 c
  }

  SECTION("anomalous dispersion is reported") {
    // FWM branch right on resonance: Re dKm/deta = 1 - km/g^2 < 0
    auto [med, drv] = default_parameters();
    drv.delta_m_meV = 0.0;
    const auto s = to_dimensionless(med, drv);
    CHECK(group_velocity(Branch::fwm, 0.0, s).anomalous);
  }
}

TEST_CASE("matched detuning roots", "[dispersion]") {
  auto [med, drv] = default_parameters();

  SECTION("defaults give a +/- pair verified against a brute-force scan") {
    const MatchResult mr = match_detuning(med, drv);
    REQUIRE(mr.roots_meV.size() == 2);
    CHECK(mr.roots_meV[0] == Approx(-mr.roots_meV[1]).epsilon(1e-9));

    // residual |vgp - vgm|/vgp < 1e-6 at the returned roots
    for (double r : mr.roots_meV) {
      DriveSpec d2 = drv;
      d2.delta_m_meV = r;
      const auto s2 = to_dimensionless(med, d2);
      const double vgm = group_velocity(Branch::fwm, 0.0, s2).vg_over_c;
      CHECK(std::abs(vgm - mr.vg_pump_over_c) / mr.vg_pump_over_c < 1e-6);
    }

    // brute force: the scan minimum of |slope difference| brackets each root
    const auto s = to_dimensionless(med, drv);
    const double target = dKp_deta(0.0, s).real();
    for (double r : mr.roots_meV) {
      auto slope = [&](double dm) {
        DriveSpec d2 = drv;
        d2.delta_m_meV = dm;
        return dKm_deta(0.0, to_dimensionless(med, d2)).real() - target;
      };
      CHECK(slope(r - 1e-3) * slope(r + 1e-3) < 0.0);
      CHECK(std::abs(slope(r)) < 1e-4 * std::abs(target));
    }
  }

  SECTION("equal kappas keep the +/- pairing") {
    MediumSpec m2 = med;
    m2.mu51_enm = m2.mu31_enm;
    m2.omega5_meV = m2.omega3_meV + 1.0;  // fails ordering; restore
    m2.omega5_meV = 296.3;
    const MatchResult mr = match_detuning(m2, drv);
    REQUIRE(mr.roots_meV.size() >= 2);
    CHECK(mr.roots_meV.front() == Approx(-mr.roots_meV.back()).epsilon(1e-9));
  }

  SECTION("unattainable pump slope reports no roots") {
    MediumSpec m2 = med;
    m2.mu31_enm = 60.0;  // pump slope far beyond what the Km branch can reach
    const MatchResult mr = match_detuning(m2, drv);
    CHECK(mr.roots_meV.empty());
  }
}

TEST_CASE("absorption spectra", "[dispersion]") {
  auto [med, drv] = default_parameters();

  SECTION("lossless limit: attenuation vanishes away from the two poles") {
    MediumSpec m2 = med;
    m2.gamma3_meV = 1e-9;
    m2.gamma4_meV = 1e-9;
    DriveSpec d2 = drv;
    d2.omega_c_meV = 0.0;
    const auto s = to_dimensionless(m2, d2);
    // resonances at eta = -Re d3, -Re d4; pick etas well away from both
    for (double eta : {0.0, 3.0, -25.0, 60.0}) {
      const double a = wavenumbers(eta, s).Kp.imag();
      CHECK(a >= 0.0);
      CHECK(a < 1e-3);
    }
  }

  SECTION("control off at the interference detuning: deep minimum near eta = 0") {
    DriveSpec d2 = drv;
    d2.omega_c_meV = 0.0;
    d2.delta_p_meV = 4.0;
    const auto s_tun = to_dimensionless(med, d2);
    MediumSpec m0 = med;
    m0.m = m0.q = m0.k = 0.0;
    const auto s_sgl = to_dimensionless(m0, d2);

    double amin = 1e300;
    int imin = -1;
    const int n = 2001;
    std::vector<double> att(n);
    for (int i = 0; i < n; ++i) {
      const double eta = -1.0 + 2.0 * i / double(n - 1);
      att[i] = wavenumbers(eta, s_tun).Kp.imag();
      if (att[i] < amin) {
        amin = att[i];
        imin = i;
      }
    }
    CHECK(imin > 0);
    CHECK(imin < n - 1);  // interior local minimum near eta = 0
    const double eta_min = -1.0 + 2.0 * imin / double(n - 1);
    CHECK(std::abs(eta_min) < 0.25);

    // single-path peak attenuation (on resonance at eta = -Re d3)
    const double peak = wavenumbers(-s_sgl.d3.real(), s_sgl).Kp.imag();
    CHECK(amin < 0.20 * peak);

    // the m = 0 curve is monotone over the same window: no such dip
    bool mono = true;
    double prev = wavenumbers(-1.0, s_sgl).Kp.imag();
    for (int i = 1; i < n; ++i) {
      const double a = wavenumbers(-1.0 + 2.0 * i / double(n - 1), s_sgl).Kp.imag();
      if (a > prev) mono = false;
      prev = a;
    }
    CHECK(mono);
  }

  SECTION("control on: transparency window of width ~Oc between the dressed peaks") {
    const auto s = to_dimensionless(med, drv);
    const int n = 4001;
    std::vector<double> eta(n), a(n);
    for (int i = 0; i < n; ++i) {
      eta[i] = -10.0 + 20.0 * i / double(n - 1);
      a[i] = wavenumbers(eta[i], s).Kp.imag();
    }
    // interior local minimum close to the pump carrier
    int imin = -1;
    for (int i = 1; i + 1 < n; ++i)
      if (a[i] < a[i - 1] && a[i] < a[i + 1] && std::abs(eta[i]) < 2.0) imin = i;
    REQUIRE(imin > 0);
    // nearest absorption peaks on either side
    int il = imin, ir = imin;
    while (il > 1 && !(a[il] > a[il - 1] && a[il] > a[il + 1])) --il;
    while (ir + 2 < n && !(a[ir] > a[ir - 1] && a[ir] > a[ir + 1])) ++ir;
    CHECK(a[imin] < 0.2 * a[il]);
    CHECK(a[imin] < 0.2 * a[ir]);
    // window half-width on the Oc*tau scale
    CHECK(eta[imin] - eta[il] > 0.5 * s.omega_c_tau);
    CHECK(eta[imin] - eta[il] < 1.5 * s.omega_c_tau);
    CHECK(eta[ir] - eta[imin] > 0.5 * s.omega_c_tau);
    CHECK(eta[ir] - eta[imin] < 1.5 * s.omega_c_tau);
  }
}
