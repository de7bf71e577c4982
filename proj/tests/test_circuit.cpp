#include <doctest.h>

#include <cmath>
#include <random>

#include "paracz/circuit.hpp"
#include "paracz/error.hpp"

using namespace paracz;
using doctest::Approx;

namespace {
const CircuitParams kDevice = CircuitParams::fitted_device();
}

TEST_CASE("squid inductance: zero flux, half flux, periodic and even") {
  CHECK(squid_inductance(kDevice, {0.0}) == Approx(0.23e-9).epsilon(1e-14));
  CHECK(squid_inductance(kDevice, {1.0}) == Approx(0.23e-9).epsilon(1e-12));
  // L_s(0) / d with d = (1 - 0.75) / (1 + 0.75) = 1/7
  CHECK(squid_inductance(kDevice, {0.5}) == Approx(1.61e-9).epsilon(1e-12));
  CHECK(kDevice.squid_asymmetry() == Approx(1.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("transmon frequencies and anharmonicities of the fitted device") {
  // 30-digit evaluation of the closed forms with the fitted values.
  CHECK(hertz(charging_frequency(kDevice, Qubit::L)) == Approx(232.034371402241574e6).epsilon(1e-12));
  CHECK(hertz(transmon_frequency(kDevice, Qubit::L, {0.0})) ==
        Approx(6.02110417025965297e9).epsilon(1e-12));
  CHECK(hertz(transmon_frequency(kDevice, Qubit::R, {0.0})) ==
        Approx(6.63516315548813011e9).epsilon(1e-12));
  CHECK(hertz(anharmonicity(kDevice, Qubit::L, {0.0})) ==
        Approx(-209.297410524803635e6).epsilon(1e-12));
  CHECK(hertz(anharmonicity(kDevice, Qubit::R, {0.0})) ==
        Approx(-265.161224715796549e6).epsilon(1e-12));
  for (Qubit k : {Qubit::L, Qubit::R}) {
    CHECK(transmon_frequency(kDevice, k, {0.0}) > transmon_frequency(kDevice, k, {0.5}));
    CHECK(std::abs(anharmonicity(kDevice, k, {0.5})) < std::abs(anharmonicity(kDevice, k, {0.0})));
  }
}

TEST_CASE("bare transmon limit of the anharmonicity") {
  CircuitParams p = kDevice;
  p.geometric_inductance = {1e-18, 1e-18};
  p.squid_inductance_zero_flux = 1e-18;
  CHECK(anharmonicity(p, Qubit::L, {0.0}) ==
        Approx(-charging_frequency(p, Qubit::L)).epsilon(1e-8));
}

TEST_CASE("static couplings") {
  const Couplings c = static_couplings(kDevice, {0.0});
  CHECK(hertz(c.inductive) == Approx(93.9869489854841535e6).epsilon(1e-12));
  CHECK(hertz(c.capacitive) == Approx(285.890773234549676e6).epsilon(1e-12));
  CHECK(c.total == Approx(c.inductive - c.capacitive).epsilon(1e-15));

  CircuitParams no_cap = kDevice;
  no_cap.mutual_capacitance = 0.0;
  const Couplings n = static_couplings(no_cap, {0.2});
  CHECK(n.capacitive == 0.0);
  CHECK(n.total == n.inductive);

  CircuitParams no_squid = kDevice;
  no_squid.squid_inductance_zero_flux = 1e-20;
  CHECK(std::abs(static_couplings(no_squid, {0.3}).inductive) < MHz(1e-6));
}

TEST_CASE("cancellation flux") {
  const double phi_c = cancellation_flux(kDevice).phi;
  CHECK(phi_c == Approx(0.411026850926736).epsilon(1e-7));
  CHECK(std::abs(phi_c - 0.41) < 0.05);
  CHECK(std::abs(static_couplings(kDevice, {phi_c}).total) < kHz(1.0));
  CHECK(static_couplings(kDevice, {phi_c - 0.05}).total *
            static_couplings(kDevice, {phi_c + 0.05}).total < 0.0);

  CircuitParams more_cap = kDevice;
  more_cap.mutual_capacitance *= 2.0;
  CHECK(cancellation_flux(more_cap).phi > phi_c);

  CircuitParams no_cap = kDevice;
  no_cap.mutual_capacitance = 0.0;
  CHECK_THROWS_AS(cancellation_flux(no_cap), NoSignChangeError);
}

TEST_CASE("static ZZ formula") {
  CHECK(zz_static(0.0, GHz(0.5), MHz(-210), MHz(-210)) == 0.0);
  CHECK(hertz(zz_static(MHz(50), GHz(0.5), GHz(-0.21), GHz(-0.21))) ==
        Approx(-10.199125789218067e6).epsilon(1e-12));
  CHECK_THROWS_AS(zz_static(MHz(50), MHz(-210.5), MHz(-210), MHz(-250)), DivergenceError);
  CHECK_THROWS_AS(zz_static(MHz(50), MHz(250.2), MHz(-210), MHz(-250)), DivergenceError);
  CHECK_NOTHROW(zz_static(MHz(50), MHz(-212), MHz(-210), MHz(-250)));
}

TEST_CASE("parametric strength") {
  const FluxBias phi_c = cancellation_flux(kDevice);
  CHECK(parametric_strength(kDevice, phi_c, 0.0).g_p == 0.0);
  const double g1 = parametric_strength(kDevice, phi_c, 0.004).g_p;
  CHECK(parametric_strength(kDevice, phi_c, 0.008).g_p == Approx(2.0 * g1).epsilon(1e-12));
  // 1/2 |dg_s/dphi| at phi_c
  CHECK(hertz(parametric_strength(kDevice, phi_c, 1.0).g_p) ==
        Approx(1081.04795415307e6).epsilon(1e-6));
  for (double phi = 0.3; phi <= 0.4501; phi += 0.025) {
    const ParametricStrength s = parametric_strength(kDevice, {phi}, 0.005);
    const double ratio = s.g_p / s.slope_product_estimate;
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);
  }
}

TEST_CASE("flux dephasing") {
  const double a = 4.1e-6;
  CHECK(flux_dephasing_rate(kDevice, Qubit::L, {0.0}, a, 1.0, 1e-5) == Approx(0.0).epsilon(1e-6));
  const double r1 = flux_dephasing_rate(kDevice, Qubit::R, {0.3}, a, kTwoPi, 1e-5);
  const double r2 = flux_dephasing_rate(kDevice, Qubit::R, {0.3}, 2.0 * a, kTwoPi, 1e-5);
  CHECK(r1 > 0.0);
  CHECK(r2 == Approx(2.0 * r1).epsilon(1e-12));
}

TEST_CASE("flux dependence is periodic and even") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 64; ++i) {
    const double phi = u(rng);
    const DerivedSpectrum a = derived_spectrum(kDevice, {phi});
    const DerivedSpectrum b = derived_spectrum(kDevice, {phi + 1.0});
    const DerivedSpectrum c = derived_spectrum(kDevice, {-phi});
    for (int k = 0; k < 2; ++k) {
      CHECK(b.omega[k] == Approx(a.omega[k]).epsilon(1e-11));
      CHECK(c.omega[k] == Approx(a.omega[k]).epsilon(1e-11));
      CHECK(b.anharmonicity[k] == Approx(a.anharmonicity[k]).epsilon(1e-11));
      CHECK(c.anharmonicity[k] == Approx(a.anharmonicity[k]).epsilon(1e-11));
    }
    CHECK(b.g_static == Approx(a.g_static).epsilon(1e-9).scale(MHz(1)));
    CHECK(c.g_static == Approx(a.g_static).epsilon(1e-9).scale(MHz(1)));
  }
}

TEST_CASE("frequencies decrease monotonically towards half flux") {
  for (Qubit k : {Qubit::L, Qubit::R}) {
    double prev = transmon_frequency(kDevice, k, {0.0});
    for (int i = 1; i <= 100; ++i) {
      const double w = transmon_frequency(kDevice, k, {0.005 * i});
      CHECK(w < prev);
      prev = w;
    }
  }
}

TEST_CASE("circuit validation") {
  CircuitParams p = kDevice;
  p.shunt_capacitance[0] = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = kDevice;
  p.squid_junction_ratio = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = kDevice;
  p.junction_inductance[1] = -1e-9;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}
