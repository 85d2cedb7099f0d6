#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ltir/physics.hpp"
#include "ltir/rng.hpp"
#include "ltir/scene.hpp"

#include <cmath>

using namespace ltir;

TEST_CASE("vertical resolution") {
    // c*T/(2*sqrt(eps_r)) for a 1 ps pulse in eps_r = 4.
    CHECK(vertical_resolution(1e-12, 4.0) == doctest::Approx(7.49481145e-5).epsilon(1e-12));
    CHECK(vertical_resolution(1e-12, 4.0) == doctest::Approx(0.075e-3).epsilon(0.01));
    // Halving the pulse halves the resolution cell.
    CHECK(vertical_resolution(0.5e-12, 4.0) ==
          doctest::Approx(0.5 * vertical_resolution(1e-12, 4.0)));
}

TEST_CASE("horizontal resolution") {
    CHECK(horizontal_resolution(1.5e12, 4.0, 0.02) ==
          doctest::Approx(8.969254614832492e-3).epsilon(1e-12));
    CHECK(horizontal_resolution(1.5e12, 4.0, 0.02) == doctest::Approx(9e-3).epsilon(0.01));
}

TEST_CASE("wave velocity") {
    CHECK(wave_velocity(1.0) == doctest::Approx(constants::c));
    CHECK(wave_velocity(4.0) == doctest::Approx(constants::c / 2.0));
}

TEST_CASE("two-way delay through the canonical stack") {
    const Scene s = canonical_scene();
    CHECK(two_way_delay(s, 0.0) == doctest::Approx(3.3356409519815207e-10).epsilon(1e-12));
    CHECK(two_way_delay(s, 0.005) == doctest::Approx(5.162646745119807e-10).epsilon(1e-12));
    CHECK(two_way_delay(s, 0.025) == doctest::Approx(7.831159506705023e-10).epsilon(1e-12));
    CHECK(two_way_delay(s, 0.030) == doctest::Approx(8.498287697101327e-10).epsilon(1e-12));
}

TEST_CASE("estimate_depth inverts the in-material delay") {
    const Scene s = canonical_scene();
    const double frp_top = 0.005;
    const double surface = two_way_delay(s, frp_top);
    GaussianRng rng(11);
    for (int i = 0; i < 200; ++i) {
        const double depth_in_frp = rng.next_unit() * 0.025;
        const double dt = two_way_delay(s, frp_top + depth_in_frp) - surface;
        CHECK(estimate_depth(dt, 4.0) ==
              doctest::Approx(depth_in_frp).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("fresnel reflection") {
    CHECK(fresnel_reflection(1.0, 30.0) ==
          doctest::Approx(-0.6912258224102302).epsilon(1e-12));
    CHECK(fresnel_reflection(30.0, 4.0) ==
          doctest::Approx(0.46504221922282135).epsilon(1e-12));
    CHECK(fresnel_reflection(4.0, 4.0) == doctest::Approx(0.0));
    // Antisymmetry and bounds over random permittivity pairs.
    GaussianRng rng(5);
    for (int i = 0; i < 500; ++i) {
        const double a = 1.0 + 80.0 * rng.next_unit();
        const double b = 1.0 + 80.0 * rng.next_unit();
        const double r = fresnel_reflection(a, b);
        CHECK(r == doctest::Approx(-fresnel_reflection(b, a)).epsilon(1e-12));
        CHECK(std::abs(r) <= 1.0);
    }
}

TEST_CASE("attenuation models") {
    CHECK(attenuation_dielectric(1e12, 4.0, 0.001) ==
          doctest::Approx(182.04300276170113).epsilon(1e-9));
    CHECK(attenuation_conductive(30.0, 0.005) ==
          doctest::Approx(1.4935659770453842).epsilon(1e-4));
    // Dielectric absorption is linear in frequency and loss tangent.
    CHECK(attenuation_dielectric(2e12, 4.0, 0.001) ==
          doctest::Approx(2.0 * attenuation_dielectric(1e12, 4.0, 0.001)));
    CHECK(attenuation_dielectric(1e12, 4.0, 0.002) ==
          doctest::Approx(2.0 * attenuation_dielectric(1e12, 4.0, 0.001)));
    const Material frp{"FRP", 4.0, 0.001, 0.0};
    CHECK(material_attenuation_db_per_m(frp, 1e12) ==
          doctest::Approx(attenuation_dielectric(1e12, 4.0, 0.001)));
}

TEST_CASE("thermal noise and reference SNR") {
    const double ktb = noise_power(1e9, 290.0);
    CHECK(ktb == doctest::Approx(4.0038821e-12).epsilon(1e-12));
    const double snr_db = 10.0 * std::log10(0.15e-9 / ktb);
    CHECK(snr_db == doctest::Approx(15.736099784784916).epsilon(1e-9));
    CHECK(std::abs(snr_db - 15.5) <= 0.5);
}

TEST_CASE("rcs model names") {
    CHECK(rcs_model_from_string("geometric") == RcsModel::geometric);
    CHECK(rcs_model_from_string("flat_plate") == RcsModel::flat_plate);
    CHECK_THROWS_AS(rcs_model_from_string("corner"), std::invalid_argument);
    CHECK(rcs_model_from_string(to_string(RcsModel::flat_plate)) == RcsModel::flat_plate);
}

TEST_CASE("link budget: canonical scene lands near the reference received power") {
    const Scene s = canonical_scene();
    const Antenna a{7.0, 0.6981317007977318, 1e12};
    const BudgetLedger ledger =
        link_budget(s, a, s.defects().front(), 1e-3, 60.0, 10.0, RcsModel::geometric, 1e9,
                    290.0);
    CHECK(ledger.tx_power_w == doctest::Approx(1e-3));
    CHECK(ledger.noise_power_w == doctest::Approx(4.0038821e-12).epsilon(1e-9));
    // Within +-10 dB of the 0.15 nW reference figure.
    const double gap_db = 10.0 * std::log10(ledger.received_power_w / 0.15e-9);
    CHECK(std::abs(gap_db) <= 10.0);
    // Every contribution is itemized with a non-negative magnitude.
    CHECK(ledger.items.size() >= 8);
    for (const BudgetItem& item : ledger.items) {
        CHECK(item.value_db >= 0.0);
        CHECK(!item.label.empty());
    }
}

TEST_CASE("link budget: dB-sum consistency on randomized inputs") {
    GaussianRng rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        const double standoff = 0.01 + 0.2 * rng.next_unit();
        const double mud_eps = 2.0 + 40.0 * rng.next_unit();
        const double frp_eps = 2.0 + 6.0 * rng.next_unit();
        const double frp_thick = 0.01 + 0.04 * rng.next_unit();
        const double mud_thick = 0.002 + 0.01 * rng.next_unit();
        const double depth = mud_thick + (0.1 + 0.8 * rng.next_unit()) * frp_thick;
        const Scene s(standoff,
                      {{{"mud", mud_eps, 0.0, 0.01 * rng.next_unit()}, mud_thick},
                       {{"FRP", frp_eps, 0.002 * rng.next_unit(), 0.0}, frp_thick}},
                      {{DefectKind::crack, depth, 0.0, 0.001 + 0.004 * rng.next_unit(), 0.3}},
                      200.0 * rng.next_unit());
        const Antenna a{3.0 + 10.0 * rng.next_unit(), 0.6981317007977318,
                        0.5e12 + 1.5e12 * rng.next_unit()};
        const RcsModel model = (trial & 1) ? RcsModel::geometric : RcsModel::flat_plate;
        const double amp = 70.0 * rng.next_unit();
        const double loss = 20.0 * rng.next_unit();
        const BudgetLedger ledger = link_budget(s, a, s.defects().front(), 1e-3, amp, loss,
                                                model, 1e9, 290.0);
        // tx_dBm + signed item sum reproduces rx_dBm exactly.
        const double tx_dbm = 10.0 * std::log10(ledger.tx_power_w * 1e3);
        const double rx_dbm = 10.0 * std::log10(ledger.received_power_w * 1e3);
        CHECK(tx_dbm + ledger.signed_sum_db() ==
              doctest::Approx(rx_dbm).epsilon(1e-9).scale(100.0));
        // Monotonicity: extra loss never raises the received power.
        const BudgetLedger lossier = link_budget(s, a, s.defects().front(), 1e-3, amp,
                                                 loss + 3.0, model, 1e9, 290.0);
        CHECK(lossier.received_power_w <= ledger.received_power_w);
        // SNR follows received power over noise.
        CHECK(ledger.snr_db ==
              doctest::Approx(10.0 * std::log10(ledger.received_power_w /
                                                ledger.noise_power_w))
                  .epsilon(1e-9));
    }
}

TEST_CASE("RCS models differ only in the spreading item") {
    const Scene s = canonical_scene();
    const Antenna a{7.0, 0.6981317007977318, 1e12};
    const BudgetLedger geo = link_budget(s, a, s.defects().front(), 1e-3, 60.0, 10.0,
                                         RcsModel::geometric, 1e9, 290.0);
    const BudgetLedger plate = link_budget(s, a, s.defects().front(), 1e-3, 60.0, 10.0,
                                           RcsModel::flat_plate, 1e9, 290.0);
    REQUIRE(geo.items.size() == plate.items.size());
    std::size_t differing = 0;
    for (std::size_t i = 0; i < geo.items.size(); ++i) {
        if (geo.items[i].value_db != plate.items[i].value_db) {
            ++differing;
            CHECK(geo.items[i].label.find("RCS") != std::string::npos);
        }
    }
    CHECK(differing == 1);
}

TEST_CASE("link budget rejects a target that is not in the scene") {
    const Scene s = canonical_scene();
    const Antenna a;
    Defect stranger{DefectKind::void_, 0.01, 0.1, 0.001, 0.2};
    CHECK_THROWS_AS(link_budget(s, a, stranger, 1e-3, 60.0, 10.0, RcsModel::geometric, 1e9,
                                290.0),
                    std::invalid_argument);
}
