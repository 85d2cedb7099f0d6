#pragma once

#include "ltir/scene.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ltir {

struct Pulse {
    double width = 1e-12;             // s, FWHM of the envelope
    double carrier_frequency = 1.5e12; // Hz
    double amplitude = 1.0;           // V
    double prf = 1e6;                 // Hz
};

struct Echo {
    double delay = 0.0;     // s
    double amplitude = 0.0; // signed fraction of the transmitted amplitude
    std::vector<std::string> path; // interface labels, antenna outward
};

struct Waveform {
    double sample_rate = 0.0; // Hz
    double t0 = 0.0;          // s
    std::vector<double> samples; // V
    std::size_t saturation_count = 0; // filled in by ADC quantization

    std::size_t size() const { return samples.size(); }
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) / sample_rate; }
};

// Carrier-modulated Gaussian pulse centered in the window. FWHM of the
// envelope equals pulse.width; peak sample magnitude equals the amplitude.
Waveform generate_pulse(const Pulse& pulse, double sample_rate, double window);

// First-order reflections: one echo per material interface plus one per
// defect inside the beam footprint, with the hyperbolic delay and Gaussian
// beam taper at the given antenna scan position. Echoes below -120 dB of
// the transmitted amplitude are dropped.
std::vector<Echo> enumerate_echoes(const Scene& scene, const Antenna& antenna,
                                   double lateral_offset);

// Superposition of pulse copies at each echo delay plus seeded Gaussian
// noise. Bit-identical for identical inputs.
Waveform synthesize_ascan(const Scene& scene, const Antenna& antenna, const Pulse& pulse,
                          double sample_rate, double window, double lateral_offset,
                          double noise_rms, std::uint64_t seed);

} // namespace ltir
