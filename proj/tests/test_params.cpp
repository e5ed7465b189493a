#include <catch2/catch_amalgamated.hpp>

#include "qwfwm/params.hpp"

using namespace qwfwm;
using Catch::Approx;

TEST_CASE("dimensionless detunings follow the definitions", "[params]") {
  auto [med, drv] = default_parameters();

  SECTION("d2*tau at the worked example") {
    // (-2.5 + 0.001i) * 2 / hbar, frozen from a 40-digit evaluation
    const DimensionlessSystem s = to_dimensionless(med, drv);
    CHECK(s.d2.real() == Approx(-7.5963372399806370032).epsilon(1e-14));
    CHECK(s.d2.imag() == Approx(0.0030385348959922548013).epsilon(1e-14));
  }

  SECTION("two-photon resonance zeroes Re(d2)") {
    drv.delta_c_meV = drv.delta_p_meV;
    const DimensionlessSystem s = to_dimensionless(med, drv);
    CHECK(s.d2.real() == 0.0);
    CHECK(s.d2.imag() > 0.0);
  }

  SECTION("d4 uses delta_p - delta") {
    const DimensionlessSystem s = to_dimensionless(med, drv);
    CHECK(s.d4.real() ==
          Approx((0.5 - 6.0) * drv.tau_ps / hbar_meV_ps).epsilon(1e-14));
  }

  SECTION("decay enters with positive imaginary part") {
    const DimensionlessSystem s = to_dimensionless(med, drv);
    for (const cplx& d : {s.d2, s.d3, s.d4, s.d5}) CHECK(d.imag() > 0.0);
  }
}

TEST_CASE("default parameters carry the reference operating point", "[params]") {
  auto [med, drv] = default_parameters();
  CHECK(med.m == -0.42);
  CHECK(med.q == 1.63);
  CHECK(med.k == -1.12);
  CHECK(med.gamma3_meV == 1.0);
  CHECK(med.gamma4_meV == 1.0);
  CHECK(med.gamma5_meV == 0.1);
  CHECK(med.delta_meV == Approx(141.5 - 135.5));
  CHECK(med.N_per_m3 == 1e23);
  CHECK(drv.delta_p_meV == 0.5);
  CHECK(drv.delta_c_meV == 3.0);
  CHECK(drv.omega_c_meV == 2.0);
  REQUIRE(med.layers.size() == 3);
  CHECK(med.layers[0].x == 0.04);
  CHECK(med.layers[0].thickness_nm == 11.0);
  CHECK(med.layers[1].x == 0.40);
  CHECK(med.layers[1].thickness_nm == 3.8);
  CHECK(med.layers[2].x == 0.0);
  CHECK(med.layers[2].thickness_nm == 9.5);
  CHECK(drv.weak_drive());
  CHECK_NOTHROW(med.validate());
  CHECK_NOTHROW(drv.validate());
}

TEST_CASE("propagation constants from the SI evaluation", "[params]") {
  auto [med, drv] = default_parameters();
  const DimensionlessSystem s = to_dimensionless(med, drv);
  // frozen 40-digit values for mu31 = 2.0 e nm, mu51 = 1.5 e nm, tau = 2 ps
  CHECK(s.kappa_p_ctau2 == Approx(6749.4982044113878146).epsilon(1e-13));
  CHECK(s.kappa_m_ctau2 == Approx(9841.0691022488316638).epsilon(1e-13));

  SECTION("kappa*c*tau^2 scales linearly in N, quadratically in mu and tau") {
    MediumSpec m2 = med;
    m2.N_per_m3 *= 3.0;
    CHECK(to_dimensionless(m2, drv).kappa_p_ctau2 == Approx(3.0 * s.kappa_p_ctau2));
    MediumSpec m3 = med;
    m3.mu31_enm *= 2.0;
    CHECK(to_dimensionless(m3, drv).kappa_p_ctau2 == Approx(4.0 * s.kappa_p_ctau2));
    DriveSpec d2 = drv;
    d2.tau_ps *= 2.0;
    CHECK(to_dimensionless(med, d2).kappa_p_ctau2 == Approx(4.0 * s.kappa_p_ctau2));
  }
}

TEST_CASE("round trip back to the physical detunings", "[params]") {
  auto [med, drv] = default_parameters();
  med.gamma2_meV = 0.0137;
  drv.delta_p_meV = 0.731;
  drv.delta_c_meV = 2.417;
  drv.delta_m_meV = -0.0525;
  drv.tau_ps = 1.3;
  const RecoveredDetunings r = recover_detunings(to_dimensionless(med, drv));
  CHECK(r.delta_p_meV == Approx(drv.delta_p_meV).epsilon(1e-12));
  CHECK(r.delta_c_meV == Approx(drv.delta_c_meV).epsilon(1e-12));
  CHECK(r.delta_m_meV == Approx(drv.delta_m_meV).epsilon(1e-12));
  CHECK(r.delta_meV == Approx(med.delta_meV).epsilon(1e-12));
  CHECK(r.gamma2_meV == Approx(med.gamma2_meV).epsilon(1e-12));
  CHECK(r.gamma3_meV == Approx(med.gamma3_meV).epsilon(1e-12));
  CHECK(r.gamma4_meV == Approx(med.gamma4_meV).epsilon(1e-12));
  CHECK(r.gamma5_meV == Approx(med.gamma5_meV).epsilon(1e-12));
}

TEST_CASE("validation rejects bad inputs", "[params]") {
  auto [med, drv] = default_parameters();

  SECTION("tau <= 0") {
    drv.tau_ps = 0.0;
    CHECK_THROWS_AS(to_dimensionless(med, drv), config_error);
    drv.tau_ps = -1.0;
    CHECK_THROWS_AS(to_dimensionless(med, drv), config_error);
  }
  SECTION("non-finite inputs") {
    drv.delta_p_meV = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(to_dimensionless(med, drv), config_error);
  }
  SECTION("energies must increase") {
    med.omega3_meV = med.omega4_meV + 1.0;
    CHECK_THROWS_AS(med.validate(), config_error);
  }
  SECTION("delta consistency") {
    med.delta_meV = 5.0;
    CHECK_THROWS_AS(med.validate(), config_error);
  }
  SECTION("decay rates positive") {
    med.gamma5_meV = 0.0;
    CHECK_THROWS_AS(med.validate(), config_error);
  }
  SECTION("layer fraction range") {
    med.layers[0].x = 0.6;
    CHECK_THROWS_AS(med.validate(), config_error);
  }
  SECTION("negative Rabi") {
    drv.omega_c_meV = -1.0;
    CHECK_THROWS_AS(drv.validate(), config_error);
  }
}

TEST_CASE("weak drive flag", "[params]") {
  auto drv = default_parameters().second;
  CHECK(drv.weak_drive());
  drv.omega_p0_meV = 0.2;  // 0.2 * 2 / 0.658 ~ 0.6 > 0.05
  CHECK_FALSE(drv.weak_drive());
}

TEST_CASE("json loading honors symbol keys and rejects unknown ones", "[params]") {
  const json good = {
      {"medium", {{"gamma3_meV", 0.8}, {"m", -0.3}}},
      {"drive", {{"omega_c_meV", 1.5}, {"tau_ps", 1.0}}},
  };
  const MediumSpec med = medium_from_json(good.at("medium"));
  CHECK(med.gamma3_meV == 0.8);
  CHECK(med.m == -0.3);
  CHECK(med.q == 1.63);  // untouched keys keep defaults
  const DriveSpec drv = drive_from_json(good.at("drive"));
  CHECK(drv.omega_c_meV == 1.5);
  CHECK(drv.tau_ps == 1.0);

  CHECK_THROWS_AS(medium_from_json(json{{"gamma3", 0.8}}), config_error);
  CHECK_THROWS_AS(drive_from_json(json{{"omega_c_meV", 1.0}, {"bogus", 1}}), config_error);
  CHECK_THROWS_AS(medium_from_json(json::array()), config_error);

  SECTION("layers array") {
    const json j = {{"layers", {{{"x", 0.1}, {"thickness_nm", 5.0}},
                                {{"x", 0.4}, {"thickness_nm", 3.0}},
                                {{"x", 0.0}, {"thickness_nm", 7.0}}}}};
    const MediumSpec m = medium_from_json(j);
    REQUIRE(m.layers.size() == 3);
    CHECK(m.layers[0].x == 0.1);
    CHECK(m.layers[2].thickness_nm == 7.0);
    CHECK_THROWS_AS(medium_from_json(json{{"layers", {{{"x", 0.1}, {"nm", 1.0}}}}}),
                    config_error);
  }

  SECTION("serialization round trip") {
    auto [dm, dd] = default_parameters();
    const MediumSpec m2 = medium_from_json(to_json(dm));
    const DriveSpec d2 = drive_from_json(to_json(dd));
    CHECK(m2.omega5_meV == dm.omega5_meV);
    CHECK(m2.k == dm.k);
    CHECK(m2.layers.size() == dm.layers.size());
    CHECK(d2.omega_p0_meV == dd.omega_p0_meV);
    CHECK(d2.delta_m_meV == dd.delta_m_meV);
  }
}
