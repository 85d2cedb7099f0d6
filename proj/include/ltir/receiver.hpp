#pragma once

#include "ltir/synth.hpp"

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ltir {

enum class FilterKind { ideal_brickwall, elliptic };

struct FilterSpec {
    int order = 7;
    FilterKind kind = FilterKind::elliptic;
    double f_low = 1e9;  // Hz
    double f_high = 2e9; // Hz
    double passband_ripple_db = 0.5;
    double stopband_attenuation_db = 60.0;
    // Stopband edges where the attenuation must be met.
    double stop_low() const { return f_low / 1.3; }
    double stop_high() const { return f_high * 1.3; }
};

struct AdcSpec {
    int bits = 12;
    double sample_rate = 6.4e9; // Hz
    double full_scale = 1.0;    // V peak
};

struct ChainConfig {
    FilterSpec thz_filter{1, FilterKind::ideal_brickwall, 1e12, 2e12, 0.0, 0.0};
    double thz_gain_db = 30.0;
    double lo_frequency = 1.4985e12; // puts a 1.5 THz carrier at 1.5 GHz
    FilterSpec rf_filter{};
    double aga_gain_db = 30.0;
    AdcSpec adc{};
};

class DesignError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Sos {
    double b0, b1, b2; // numerator
    double a1, a2;     // denominator, a0 == 1
};

// Immutable second-order-section cascade.
class IirFilter {
public:
    IirFilter(std::vector<Sos> sections, double sample_rate)
        : sections_(std::move(sections)), sample_rate_(sample_rate) {}

    const std::vector<Sos>& sections() const { return sections_; }
    double sample_rate() const { return sample_rate_; }

    std::complex<double> response(double frequency) const;
    double magnitude_db(double frequency) const;
    std::vector<double> pole_magnitudes() const;

    Waveform apply(const Waveform& w) const;

    // One section per row: b0,b1,b2,a1,a2.
    void export_csv(std::ostream& out) const;

private:
    std::vector<Sos> sections_;
    double sample_rate_;
};

// Frequency-domain brick-wall band-pass; length and rate unchanged.
Waveform bandpass_ideal(const Waveform& w, double f_low, double f_high);

// Digital elliptic band-pass meeting the spec's ripple/attenuation mask,
// order = spec.order (prototype order; 2*order poles).
IirFilter design_elliptic_bandpass(const FilterSpec& spec, double sample_rate);

// cos(2 pi f_lo t) product, image rejection via ideal band-pass, then
// integer decimation to a rate >= max(2.5*f_high, min_output_rate).
Waveform mix_downconvert(const Waveform& w, double lo_frequency, double f_low, double f_high,
                         double min_output_rate = 0.0);

Waveform apply_gain(const Waveform& w, double gain_db);

// Anti-aliased nearest-sample decimation to the ADC rate, clip to full
// scale, uniform mid-rise quantization. Clipping increments saturation_count.
Waveform adc_quantize(const Waveform& w, const AdcSpec& adc);

struct ChainResult {
    Waveform out;
    std::vector<std::pair<std::string, double>> stage_rms;
};

// Block-diagram order: THz BPF, THz gain, mixer, RF elliptic BPF, AGA, ADC.
ChainResult run_chain(const Waveform& w, const ChainConfig& cfg);

} // namespace ltir
