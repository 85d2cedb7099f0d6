#include "ltir/receiver.hpp"

#include "ltir/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace ltir {

namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

double rms(const std::vector<double>& x) {
    if (x.empty()) return 0.0;
    double sum = 0.0;
    for (double v : x) sum += v * v;
    return std::sqrt(sum / static_cast<double>(x.size()));
}

// ---- Jacobi elliptic machinery (Landen / AGM form) ----------------------

// Descending Landen sequence k_1.. starting from modulus k.
std::vector<double> landen(double k) {
    std::vector<double> v;
    while (k > 1e-16 && v.size() < 32) {
        const double kp = std::sqrt(1.0 - k * k);
        k = std::pow(k / (1.0 + kp), 2);
        v.push_back(k);
    }
    return v;
}

double complete_k(double k) {
    double result = pi / 2.0;
    for (double kn : landen(k)) result *= 1.0 + kn;
    return result;
}

// cd(u*K, k) with u in units of the quarter period; u may be complex.
cplx cde(cplx u, double k) {
    const std::vector<double> v = landen(k);
    cplx w = std::cos(u * (pi / 2.0));
    for (auto it = v.rbegin(); it != v.rend(); ++it) w = (1.0 + *it) * w / (1.0 + *it * w * w);
    return w;
}

cplx sne(cplx u, double k) {
    const std::vector<double> v = landen(k);
    cplx w = std::sin(u * (pi / 2.0));
    for (auto it = v.rbegin(); it != v.rend(); ++it) w = (1.0 + *it) * w / (1.0 + *it * w * w);
    return w;
}

// Inverse of sne, result in units of K.
cplx asne(cplx w, double k) {
    double kprev = k;
    for (double kn : landen(k)) {
        w = 2.0 * w / ((1.0 + kn) * (1.0 + std::sqrt(1.0 - kprev * kprev * w * w)));
        kprev = kn;
    }
    return 2.0 / pi * std::asin(w);
}

double nome(double k) {
    const double kp = std::sqrt(1.0 - k * k);
    return std::exp(-pi * complete_k(kp) / complete_k(k));
}

// Solve the degree equation for the selectivity k given order N and k1.
double ellipdeg(int n, double k1) {
    const double q = std::pow(nome(k1), 1.0 / n);
    double theta2 = 0.0;
    for (int m = 0; m < 10; ++m) theta2 += std::pow(q, m * (m + 1));
    theta2 *= 2.0 * std::pow(q, 0.25);
    double theta3 = 1.0;
    for (int m = 1; m < 10; ++m) theta3 += 2.0 * std::pow(q, m * m);
    return std::pow(theta2 / theta3, 2);
}

struct AnalogPrototype {
    std::vector<cplx> zeros;
    std::vector<cplx> poles;
};

// Elliptic lowpass prototype, passband edge 1, ripple ap dB, stop as dB.
AnalogPrototype elliptic_prototype(int n, double ap, double as) {
    const double ep = std::sqrt(std::pow(10.0, ap / 10.0) - 1.0);
    const double es = std::sqrt(std::pow(10.0, as / 10.0) - 1.0);
    const double k1 = ep / es;
    const double k = ellipdeg(n, k1);
    const int pairs = n / 2;
    const double v0 = (-cplx(0, 1) * asne(cplx(0, 1.0 / ep), k1) / double(n)).real();

    AnalogPrototype proto;
    for (int i = 1; i <= pairs; ++i) {
        const double ui = (2.0 * i - 1.0) / n;
        const double zeta = cde(cplx(ui, 0.0), k).real();
        const cplx zero(0.0, 1.0 / (k * zeta));
        proto.zeros.push_back(zero);
        proto.zeros.push_back(std::conj(zero));
        const cplx pole = cplx(0, 1) * cde(cplx(ui, -v0), k);
        proto.poles.push_back(pole);
        proto.poles.push_back(std::conj(pole));
    }
    if (n % 2) proto.poles.push_back(cplx(0, 1) * sne(cplx(0, v0), k));
    return proto;
}

// ---- lowpass -> bandpass -> bilinear ------------------------------------

std::vector<cplx> lp_to_bp(const std::vector<cplx>& roots, double w0sq, double bw) {
    std::vector<cplx> out;
    out.reserve(roots.size() * 2);
    for (const cplx& r : roots) {
        const cplx rb = r * bw;
        const cplx d = std::sqrt(rb * rb / 4.0 - w0sq);
        out.push_back(rb / 2.0 + d);
        out.push_back(rb / 2.0 - d);
    }
    return out;
}

cplx bilinear(const cplx& s) { return (1.0 + s) / (1.0 - s); }

std::vector<Sos> zp_to_sos(int n, const std::vector<cplx>& dzeros,
                           const std::vector<cplx>& dpoles) {
    // Keep one root per conjugate pair; real roots (a low-order prototype's
    // real pole can map to two real bandpass poles) are paired up separately.
    auto partition = [](const std::vector<cplx>& roots) {
        std::pair<std::vector<cplx>, std::vector<double>> out;
        for (const cplx& r : roots) {
            if (r.imag() > 1e-12) out.first.push_back(r);
            else if (r.imag() >= -1e-12) out.second.push_back(r.real());
        }
        std::sort(out.first.begin(), out.first.end(),
                  [](const cplx& a, const cplx& b) { return std::arg(a) < std::arg(b); });
        std::sort(out.second.begin(), out.second.end());
        return out;
    };
    const auto [upper_poles, real_poles] = partition(dpoles);
    const auto [upper_zeros, real_zeros] = partition(dzeros);

    std::vector<std::pair<double, double>> denominators; // a1, a2
    for (const cplx& p : upper_poles) denominators.emplace_back(-2.0 * p.real(), std::norm(p));
    for (std::size_t i = 0; i + 1 < real_poles.size(); i += 2)
        denominators.emplace_back(-(real_poles[i] + real_poles[i + 1]),
                                  real_poles[i] * real_poles[i + 1]);

    std::vector<Sos> sections;
    const std::size_t mid = denominators.size() / 2;
    std::size_t zi = 0;
    std::size_t ri = 0;
    for (std::size_t i = 0; i < denominators.size(); ++i) {
        Sos s{};
        if (n % 2 && i == mid) {
            // The prototype's zero pair at infinity maps to z = +1 and z = -1.
            s.b0 = 1.0;
            s.b1 = 0.0;
            s.b2 = -1.0;
        } else if (zi < upper_zeros.size()) {
            const cplx z = upper_zeros[zi++];
            s.b0 = 1.0;
            s.b1 = -2.0 * z.real();
            s.b2 = std::norm(z);
        } else {
            const double z0 = real_zeros.at(ri);
            const double z1 = real_zeros.at(ri + 1);
            ri += 2;
            s.b0 = 1.0;
            s.b1 = -(z0 + z1);
            s.b2 = z0 * z1;
        }
        s.a1 = denominators[i].first;
        s.a2 = denominators[i].second;
        sections.push_back(s);
    }
    return sections;
}

IirFilter design_elliptic_with(int n, double ap, double as, double f1, double f2,
                               double sample_rate) {
    const AnalogPrototype proto = elliptic_prototype(n, ap, as);
    const double w1 = std::tan(pi * f1 / sample_rate);
    const double w2 = std::tan(pi * f2 / sample_rate);
    const double w0sq = w1 * w2;
    const double bw = w2 - w1;

    std::vector<cplx> bp_zeros = lp_to_bp(proto.zeros, w0sq, bw);
    std::vector<cplx> bp_poles = lp_to_bp(proto.poles, w0sq, bw);
    std::vector<cplx> dzeros;
    std::vector<cplx> dpoles;
    for (const cplx& s : bp_zeros) dzeros.push_back(bilinear(s));
    for (const cplx& s : bp_poles) dpoles.push_back(bilinear(s));

    IirFilter filter(zp_to_sos(n, dzeros, dpoles), sample_rate);
    // Odd-order elliptic lowpass has unit gain at DC, so the bandpass is
    // normalized to 0 dB at the warped geometric center.
    const double f_center = sample_rate / pi * std::atan(std::sqrt(w0sq));
    const double gain = std::abs(filter.response(f_center));
    std::vector<Sos> sections = filter.sections();
    sections.front().b0 /= gain;
    sections.front().b1 /= gain;
    sections.front().b2 /= gain;
    return IirFilter(std::move(sections), sample_rate);
}

bool meets_mask(const IirFilter& filter, const FilterSpec& spec, std::string& violation) {
    for (int i = 0; i < 64; ++i) {
        const double f = spec.f_low + (spec.f_high - spec.f_low) * i / 63.0;
        const double mag = filter.magnitude_db(f);
        if (mag < -spec.passband_ripple_db - 1e-9 || mag > 1e-9) {
            violation = "passband ripple exceeded at " + std::to_string(f) + " Hz";
            return false;
        }
    }
    for (double f : {spec.stop_low(), spec.stop_high()}) {
        if (filter.magnitude_db(f) > -spec.stopband_attenuation_db) {
            violation = "stopband attenuation not met at " + std::to_string(f) + " Hz";
            return false;
        }
    }
    for (double m : filter.pole_magnitudes()) {
        if (m >= 1.0) {
            violation = "unstable pole";
            return false;
        }
    }
    return true;
}

} // namespace

std::complex<double> IirFilter::response(double frequency) const {
    const cplx zinv = std::exp(cplx(0.0, -2.0 * pi * frequency / sample_rate_));
    cplx h = 1.0;
    for (const Sos& s : sections_)
        h *= (s.b0 + s.b1 * zinv + s.b2 * zinv * zinv) /
             (1.0 + s.a1 * zinv + s.a2 * zinv * zinv);
    return h;
}

double IirFilter::magnitude_db(double frequency) const {
    return 20.0 * std::log10(std::abs(response(frequency)) + 1e-300);
}

std::vector<double> IirFilter::pole_magnitudes() const {
    std::vector<double> mags;
    for (const Sos& s : sections_) {
        const double disc = s.a1 * s.a1 - 4.0 * s.a2;
        if (disc < 0.0) {
            // conjugate pair, |p|^2 = a2
            mags.push_back(std::sqrt(s.a2));
            mags.push_back(std::sqrt(s.a2));
        } else {
            mags.push_back(std::abs((-s.a1 + std::sqrt(disc)) / 2.0));
            mags.push_back(std::abs((-s.a1 - std::sqrt(disc)) / 2.0));
        }
    }
    return mags;
}

Waveform IirFilter::apply(const Waveform& w) const {
    Waveform out = w;
    for (const Sos& s : sections_) {
        double z1 = 0.0, z2 = 0.0; // direct form II transposed state
        for (double& x : out.samples) {
            const double y = s.b0 * x + z1;
            z1 = s.b1 * x - s.a1 * y + z2;
            z2 = s.b2 * x - s.a2 * y;
            x = y;
        }
    }
    return out;
}

void IirFilter::export_csv(std::ostream& out) const {
    out << "b0,b1,b2,a1,a2\n";
    char line[160];
    for (const Sos& s : sections_) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.b0, s.b1, s.b2,
                      s.a1, s.a2);
        out << line;
    }
}

Waveform bandpass_ideal(const Waveform& w, double f_low, double f_high) {
    if (f_low < 0.0 || f_high <= f_low || f_high > w.sample_rate / 2.0)
        throw std::invalid_argument("band outside the Nyquist range");
    const std::size_t n = w.size();
    if (n == 0) return w;
    std::vector<std::complex<double>> spectrum = fft::forward_real(w.samples);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t mirror = k <= n / 2 ? k : n - k;
        const double f = static_cast<double>(mirror) * w.sample_rate / static_cast<double>(n);
        if (f < f_low || f > f_high) spectrum[k] = 0.0;
    }
    const std::vector<std::complex<double>> filtered = fft::inverse(spectrum);
    Waveform out = w;
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = filtered[i].real();
    return out;
}

IirFilter design_elliptic_bandpass(const FilterSpec& spec, double sample_rate) {
    if (spec.kind != FilterKind::elliptic)
        throw DesignError("design_elliptic_bandpass requires an elliptic spec");
    if (spec.order < 1) throw DesignError("order must be >= 1");
    if (spec.f_low <= 0.0 || spec.f_high <= spec.f_low)
        throw DesignError("band edges must satisfy 0 < f_low < f_high");
    if (spec.f_high >= sample_rate / 2.0)
        throw DesignError("f_high must be below Nyquist");
    if (spec.passband_ripple_db <= 0.0 || spec.stopband_attenuation_db <= 0.0)
        throw DesignError("ripple and attenuation must be > 0");

    // Design with a small implementation margin so the mask is met with
    // slack rather than equality at the equiripple extrema; fall back to
    // the exact spec if the margined design is infeasible.
    std::string violation;
    for (const auto& [ap, as] :
         {std::pair{0.95 * spec.passband_ripple_db, spec.stopband_attenuation_db + 5.0},
          std::pair{spec.passband_ripple_db, spec.stopband_attenuation_db}}) {
        IirFilter filter =
            design_elliptic_with(spec.order, ap, as, spec.f_low, spec.f_high, sample_rate);
        if (meets_mask(filter, spec, violation)) return filter;
    }
    throw DesignError("infeasible filter spec: " + violation);
}

Waveform mix_downconvert(const Waveform& w, double lo_frequency, double f_low, double f_high,
                         double min_output_rate) {
    if (lo_frequency <= 0.0) throw std::invalid_argument("lo_frequency must be > 0");
    Waveform mixed = w;
    for (std::size_t i = 0; i < mixed.size(); ++i)
        mixed.samples[i] *= std::cos(2.0 * pi * lo_frequency * mixed.time_at(i));
    mixed = bandpass_ideal(mixed, f_low, f_high);

    const double target_rate = std::max(2.5 * f_high, min_output_rate);
    const auto factor = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(w.sample_rate / target_rate)));
    const double out_rate = w.sample_rate / static_cast<double>(factor);
    if (f_high > out_rate / 2.0)
        throw std::invalid_argument("output band above the decimated Nyquist");
    Waveform out;
    out.sample_rate = out_rate;
    out.t0 = mixed.t0;
    out.samples.reserve(mixed.size() / factor + 1);
    for (std::size_t i = 0; i < mixed.size(); i += factor) out.samples.push_back(mixed.samples[i]);
    return out;
}

Waveform apply_gain(const Waveform& w, double gain_db) {
    Waveform out = w;
    const double gain = std::pow(10.0, gain_db / 20.0);
    for (double& sample : out.samples) sample *= gain;
    return out;
}

Waveform adc_quantize(const Waveform& w, const AdcSpec& adc) {
    if (adc.bits < 2 || adc.bits > 24) throw std::invalid_argument("adc bits outside [2, 24]");
    if (adc.sample_rate <= 0.0 || adc.full_scale <= 0.0)
        throw std::invalid_argument("adc sample_rate and full_scale must be > 0");
    if (w.sample_rate < adc.sample_rate)
        throw std::invalid_argument("waveform sample rate below the ADC rate");

    Waveform resampled;
    if (w.sample_rate == adc.sample_rate) {
        resampled = w;
    } else {
        const Waveform filtered = bandpass_ideal(w, 0.0, adc.sample_rate / 2.0);
        resampled.sample_rate = adc.sample_rate;
        resampled.t0 = w.t0;
        const double ratio = w.sample_rate / adc.sample_rate;
        const auto count = static_cast<std::size_t>(
            std::floor(static_cast<double>(w.size() - 1) / ratio)) + 1;
        resampled.samples.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            const auto src = static_cast<std::size_t>(std::llround(i * ratio));
            resampled.samples.push_back(filtered.samples[std::min(src, w.size() - 1)]);
        }
    }

    const double step = 2.0 * adc.full_scale / std::pow(2.0, adc.bits);
    const long max_code = static_cast<long>(std::pow(2.0, adc.bits - 1)) - 1;
    const long min_code = -static_cast<long>(std::pow(2.0, adc.bits - 1));
    resampled.saturation_count = 0;
    for (double& sample : resampled.samples) {
        long code = static_cast<long>(std::floor(sample / step));
        if (code > max_code || code < min_code) {
            ++resampled.saturation_count;
            code = std::clamp(code, min_code, max_code);
        }
        sample = (static_cast<double>(code) + 0.5) * step;
    }
    return resampled;
}

ChainResult run_chain(const Waveform& w, const ChainConfig& cfg) {
    if (cfg.rf_filter.f_high >= cfg.lo_frequency)
        throw std::invalid_argument("RF band must lie below the LO frequency");
    if (cfg.adc.sample_rate < 2.0 * cfg.rf_filter.f_high)
        throw std::invalid_argument("ADC rate below Nyquist for the RF band");

    ChainResult result;
    Waveform stage = bandpass_ideal(w, cfg.thz_filter.f_low, cfg.thz_filter.f_high);
    result.stage_rms.emplace_back("thz_bpf", rms(stage.samples));
    stage = apply_gain(stage, cfg.thz_gain_db);
    result.stage_rms.emplace_back("thz_gain", rms(stage.samples));
    stage = mix_downconvert(stage, cfg.lo_frequency, cfg.rf_filter.f_low, cfg.rf_filter.f_high,
                            cfg.adc.sample_rate);
    result.stage_rms.emplace_back("mixer", rms(stage.samples));
    const IirFilter rf = design_elliptic_bandpass(cfg.rf_filter, stage.sample_rate);
    stage = rf.apply(stage);
    result.stage_rms.emplace_back("rf_bpf", rms(stage.samples));
    stage = apply_gain(stage, cfg.aga_gain_db);
    result.stage_rms.emplace_back("aga", rms(stage.samples));
    stage = adc_quantize(stage, cfg.adc);
    result.stage_rms.emplace_back("adc", rms(stage.samples));
    result.out = std::move(stage);
    return result;
}

} // namespace ltir
