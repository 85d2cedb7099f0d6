#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ltir/dsp.hpp"
#include "ltir/physics.hpp"
#include "ltir/rng.hpp"

#include <cmath>
#include <numbers>

using namespace ltir;

namespace {

std::vector<double> scan_positions(double start, double stop, std::size_t count) {
    std::vector<double> positions(count);
    for (std::size_t i = 0; i < count; ++i)
        positions[i] = start + (stop - start) * double(i) / double(count - 1);
    return positions;
}

} // namespace

TEST_CASE("spectrum satisfies Parseval and labels the axis") {
    Waveform w;
    w.sample_rate = 20e12;
    w.samples.resize(4096);
    GaussianRng rng(17);
    for (double& v : w.samples) v = rng.next_gaussian();

    const Spectrum s = spectrum(w);
    REQUIRE(s.values.size() == w.size() / 2 + 1);
    CHECK(s.frequency_axis.front() == 0.0);
    CHECK(s.frequency_axis.back() == doctest::Approx(w.sample_rate / 2.0));
    CHECK(s.source_sample_rate == w.sample_rate);

    // Parseval: sum |x|^2 == (1/N) [ |X0|^2 + |XN/2|^2 + 2 sum |Xk|^2 ].
    double time_energy = 0.0;
    for (double v : w.samples) time_energy += v * v;
    double freq_energy = std::norm(s.values.front()) + std::norm(s.values.back());
    for (std::size_t k = 1; k + 1 < s.values.size(); ++k)
        freq_energy += 2.0 * std::norm(s.values[k]);
    freq_energy /= double(w.size());
    CHECK(freq_energy == doctest::Approx(time_energy).epsilon(1e-9));
}

TEST_CASE("rescale_to_thz shifts the axis by the LO") {
    Waveform w;
    w.sample_rate = 6.4e9;
    w.samples.assign(256, 0.0);
    w.samples[10] = 1.0;
    const Spectrum base = spectrum(w);
    const Spectrum shifted = rescale_to_thz(base, 1.4985e12);
    for (std::size_t k = 0; k < base.frequency_axis.size(); ++k) {
        CHECK(shifted.frequency_axis[k] ==
              doctest::Approx(base.frequency_axis[k] + 1.4985e12));
        CHECK(shifted.values[k] == base.values[k]);
    }
    CHECK_THROWS_AS(rescale_to_thz(base, -1.0), std::invalid_argument);
}

TEST_CASE("build_bscan is deterministic and schedule independent") {
    const Scene scene = canonical_scene();
    const Antenna antenna;
    const Pulse pulse;
    const std::vector<double> positions = scan_positions(-0.01, 0.01, 9);

    BscanOptions sequential;
    sequential.parallel = false;
    BscanOptions parallel;
    parallel.parallel = true;

    const Radargram a = build_bscan(scene, antenna, pulse, positions, 1e-3, 7, parallel);
    const Radargram b = build_bscan(scene, antenna, pulse, positions, 1e-3, 7, sequential);
    const Radargram c = build_bscan(scene, antenna, pulse, positions, 1e-3, 7, parallel);
    REQUIRE(a.amplitudes.size() == b.amplitudes.size());
    CHECK(a.amplitudes == b.amplitudes); // bit identical across schedules
    CHECK(a.amplitudes == c.amplitudes); // bit identical across runs
    CHECK(a.time_axis == b.time_axis);

    // Different rows get independent noise.
    CHECK(a.amplitudes[0] != a.amplitudes[1]);

    CHECK_THROWS_AS(build_bscan(scene, antenna, pulse, {0.0}, 0.0, 1, sequential),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        build_bscan(scene, antenna, pulse, {0.0, 0.001, 0.003}, 0.0, 1, sequential),
        std::invalid_argument); // non-uniform spacing
}

TEST_CASE("clutter removal exactly nulls position-invariant data") {
    const Scene scene(0.05, {{{"FRP", 4.0, 0.001, 0.0}, 0.025}}, {}, 100.0);
    const Antenna antenna;
    const Pulse pulse;
    BscanOptions options;
    options.parallel = false;
    const Radargram r = build_bscan(scene, antenna, pulse,
                                    scan_positions(-0.005, 0.005, 5), 0.0, 0, options);
    const Radargram cleaned = remove_clutter(r);
    CHECK(cleaned.processed == Processing::clutter_removed);
    for (const auto& row : cleaned.amplitudes)
        for (double v : row) CHECK(v == 0.0); // exact null, no tolerance

    CHECK_THROWS_AS(remove_clutter(cleaned), std::logic_error);
}

TEST_CASE("envelope recovers the modulation magnitude") {
    Radargram r;
    r.positions = {0.0, 0.001};
    const std::size_t n = 4096;
    r.time_axis.resize(n);
    r.amplitudes.assign(2, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = double(i) / 20e12;
        r.time_axis[i] = t;
        // Carrier under a slow raised-cosine envelope.
        const double env = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(i) / n));
        r.amplitudes[0][i] = env * std::cos(2.0 * std::numbers::pi * 1.5e12 * t);
        r.amplitudes[1][i] = env * std::sin(2.0 * std::numbers::pi * 1.5e12 * t);
    }
    const Radargram e = envelope(r);
    CHECK(e.processed == Processing::envelope);
    for (std::size_t i = n / 8; i < 7 * n / 8; ++i) {
        const double env = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(i) / n));
        CHECK(e.amplitudes[0][i] == doctest::Approx(env).epsilon(0.01).scale(1.0));
        CHECK(e.amplitudes[1][i] == doctest::Approx(env).epsilon(0.01).scale(1.0));
    }
}

TEST_CASE("noiseless canonical scan yields exactly the crack") {
    const Scene scene = canonical_scene();
    const Antenna antenna;
    const Pulse pulse;
    BscanOptions options;
    const Radargram r = build_bscan(scene, antenna, pulse,
                                    scan_positions(-0.02, 0.02, 41), 0.0, 0, options);
    const std::vector<Detection> hits = detect_defects(remove_clutter(r), scene, 5.0);
    REQUIRE(hits.size() == 1);
    CHECK(std::abs(hits[0].lateral_position) <= 0.001);
    CHECK(hits[0].echo_delay == doctest::Approx(7.831159506705023e-10).epsilon(2e-3));
    // Depth is measured below the FRP surface: 20 mm +- 0.08 mm.
    CHECK(std::abs(hits[0].estimated_depth - 0.020) <= 0.08e-3);
    CHECK_FALSE(hits[0].above_frp_surface);
    CHECK(hits[0].snr_db > 20.0);

    CHECK_THROWS_AS(detect_defects(r, scene, 5.0), std::logic_error);
}

TEST_CASE("brightest post-clutter cell sits at the defect's lateral position") {
    const Scene scene = canonical_scene();
    const Antenna antenna;
    const Pulse pulse;
    const Radargram cleaned = envelope(remove_clutter(build_bscan(
        scene, antenna, pulse, scan_positions(-0.02, 0.02, 41), 0.0, 21, {})));
    double best = 0.0;
    std::size_t best_row = 0;
    for (std::size_t i = 0; i < cleaned.amplitudes.size(); ++i)
        for (double v : cleaned.amplitudes[i])
            if (std::abs(v) > best) {
                best = std::abs(v);
                best_row = i;
            }
    // Defect at lateral 0. Mean-trace removal dents the apex rows slightly
    // more than their neighbours (they share time bins with the mean), so the
    // brightest cell can sit one step off the apex; two steps bounds it.
    CHECK(std::abs(cleaned.positions[best_row]) <= 0.002 + 1e-12);
}

TEST_CASE("noisy scan still yields a single localized detection") {
    const Scene scene = canonical_scene();
    const Antenna antenna;
    const Pulse pulse;
    const Radargram r = build_bscan(scene, antenna, pulse,
                                    scan_positions(-0.02, 0.02, 41), 0.00196, 12345, {});
    const std::vector<Detection> hits = detect_defects(remove_clutter(r), scene, 5.0);
    REQUIRE(hits.size() == 1);
    CHECK(std::abs(hits[0].lateral_position) <= 0.001);
    CHECK(std::abs(hits[0].estimated_depth - 0.020) <= 0.08e-3);
}

TEST_CASE("defect-free scan yields no detections") {
    const Scene scene(0.05,
                      {{{"mud", 30.0, 0.0, 0.005}, 0.005}, {{"FRP", 4.0, 0.001, 0.0}, 0.025}},
                      {}, 100.0);
    const Antenna antenna;
    const Pulse pulse;
    const Radargram r = build_bscan(scene, antenna, pulse,
                                    scan_positions(-0.02, 0.02, 41), 0.00196, 777, {});
    CHECK(detect_defects(remove_clutter(r), scene, 5.0).empty());
}

TEST_CASE("two separated defects are resolved with a narrow beam") {
    const Scene scene(0.05,
                      {{{"mud", 30.0, 0.0, 0.005}, 0.005}, {{"FRP", 4.0, 0.001, 0.0}, 0.025}},
                      {{DefectKind::crack, 0.025, -0.012, 0.0025, 0.3},
                       {DefectKind::void_, 0.015, 0.012, 0.0025, 0.3}},
                      100.0);
    const Antenna narrow{9.3, 10.0 * std::numbers::pi / 180.0, 1.5e12};
    const Pulse pulse;
    const Radargram r = build_bscan(scene, narrow, pulse,
                                    scan_positions(-0.02, 0.02, 41), 0.0005, 4, {});
    const std::vector<Detection> hits = detect_defects(remove_clutter(r), scene, 5.0);
    REQUIRE(hits.size() == 2);
    // Sorted by lateral position.
    CHECK(std::abs(hits[0].lateral_position - -0.012) <= 0.002);
    CHECK(std::abs(hits[1].lateral_position - 0.012) <= 0.002);
    CHECK(std::abs(hits[0].estimated_depth - 0.020) <= 0.5e-3);
    CHECK(std::abs(hits[1].estimated_depth - 0.010) <= 0.5e-3);
}
