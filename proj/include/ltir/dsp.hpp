#pragma once

#include "ltir/receiver.hpp"
#include "ltir/scene.hpp"
#include "ltir/synth.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace ltir {

struct Spectrum {
    std::vector<double> frequency_axis;        // Hz, uniform, ascending
    std::vector<std::complex<double>> values;  // one-sided
    double source_sample_rate = 0.0;
};

enum class Processing { raw, clutter_removed, envelope };

struct Radargram {
    std::vector<double> positions;              // m, uniform
    std::vector<double> time_axis;              // s, uniform
    std::vector<std::vector<double>> amplitudes; // [position][time]
    Processing processed = Processing::raw;
};

struct Detection {
    double lateral_position = 0.0; // m
    double echo_delay = 0.0;       // s
    double estimated_depth = 0.0;  // m below the FRP surface
    double peak_amplitude = 0.0;   // V
    double snr_db = 0.0;
    bool above_frp_surface = false; // echo earlier than the FRP surface; depth clamped to 0
};

// One-sided DFT of the waveform.
Spectrum spectrum(const Waveform& w);

// Shift the frequency axis up by the LO; values untouched.
Spectrum rescale_to_thz(const Spectrum& s, double lo_frequency);

struct BscanOptions {
    double sample_rate = 20e12; // Hz
    double window = 0.0;        // s; 0 = auto from the latest echo
    bool parallel = true;
    const ChainConfig* chain = nullptr; // when set, rows pass through run_chain
};

// One A-scan per scan position; per-row noise seeds derived from
// (seed, row index). Deterministic and schedule-independent.
Radargram build_bscan(const Scene& scene, const Antenna& antenna, const Pulse& pulse,
                      const std::vector<double>& positions, double noise_rms,
                      std::uint64_t seed, const BscanOptions& options = {});

// Mean-trace subtraction; exactly nulls position-invariant content.
Radargram remove_clutter(const Radargram& r);

// Per-row analytic-signal magnitude.
Radargram envelope(const Radargram& r);

// Threshold the envelope of a clutter-removed radargram at
// threshold_factor times a robust noise scale, cluster with
// 8-connectivity, and report one detection per cluster.
std::vector<Detection> detect_defects(const Radargram& r, const Scene& scene,
                                      double threshold_factor,
                                      std::size_t min_cluster_cells = 8);

} // namespace ltir
