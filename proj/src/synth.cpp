#include "ltir/synth.hpp"

#include "ltir/physics.hpp"
#include "ltir/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ltir {

namespace {

constexpr double kFourLn2 = 2.772588722239781; // 4 ln 2
constexpr double kAmplitudeFloor = 1e-6;       // -120 dB relative cutoff
constexpr double kRenderSupportWidths = 8.0;   // Gaussian support per side

void validate_pulse(const Pulse& pulse) {
    if (pulse.width <= 0.0) throw std::invalid_argument("pulse width must be > 0");
    if (pulse.carrier_frequency <= 0.0)
        throw std::invalid_argument("carrier_frequency must be > 0");
    if (pulse.prf <= 0.0) throw std::invalid_argument("prf must be > 0");
}

// Adds amplitude * exp(-4 ln2 (t-center)^2 / w^2) * cos(2 pi f (t-center)).
void render_pulse(Waveform& w, const Pulse& pulse, double center, double amplitude) {
    const double support = kRenderSupportWidths * pulse.width;
    const double rate = w.sample_rate;
    const auto n0 = static_cast<std::ptrdiff_t>(std::ceil((center - support - w.t0) * rate));
    const auto n1 = static_cast<std::ptrdiff_t>(std::floor((center + support - w.t0) * rate));
    const auto lo = std::max<std::ptrdiff_t>(n0, 0);
    const auto hi = std::min<std::ptrdiff_t>(n1, static_cast<std::ptrdiff_t>(w.size()) - 1);
    for (std::ptrdiff_t n = lo; n <= hi; ++n) {
        const double t = w.t0 + static_cast<double>(n) / rate - center;
        const double envelope = std::exp(-kFourLn2 * t * t / (pulse.width * pulse.width));
        w.samples[static_cast<std::size_t>(n)] +=
            amplitude * envelope * std::cos(2.0 * std::numbers::pi * pulse.carrier_frequency * t);
    }
}

} // namespace

Waveform generate_pulse(const Pulse& pulse, double sample_rate, double window) {
    validate_pulse(pulse);
    if (sample_rate < 10.0 / pulse.width)
        throw std::invalid_argument("sample_rate must be >= 10/width");
    if (window < 4.0 * pulse.width)
        throw std::invalid_argument("window must be >= 4*width");
    Waveform w;
    w.sample_rate = sample_rate;
    w.t0 = 0.0;
    w.samples.assign(static_cast<std::size_t>(std::llround(window * sample_rate)), 0.0);
    render_pulse(w, pulse, window / 2.0, pulse.amplitude);
    return w;
}

std::vector<Echo> enumerate_echoes(const Scene& scene, const Antenna& antenna,
                                   double lateral_offset) {
    const double f = antenna.center_frequency;
    std::vector<Echo> echoes;

    // Interface echoes: flat layering, so no lateral dependence.
    double transmission = 1.0; // product of two-way power transmission, as amplitude
    double loss_db = 2.0 * scene.standoff() * scene.air_attenuation_db_per_m();
    double depth = 0.0;
    double eps_above = 1.0;
    std::vector<std::string> path{"air"};
    const auto& layers = scene.layers();
    for (std::size_t i = 0; i <= layers.size(); ++i) {
        const double eps_below = i < layers.size() ? layers[i].material.eps_r : 1.0;
        const std::string below_name = i < layers.size() ? layers[i].material.name : "air";
        const double gamma = fresnel_reflection(eps_above, eps_below);
        Echo echo;
        echo.delay = two_way_delay(scene, depth);
        echo.amplitude = gamma * transmission * std::pow(10.0, -loss_db / 20.0);
        echo.path = path;
        echo.path.push_back(below_name);
        if (std::abs(echo.amplitude) >= kAmplitudeFloor) echoes.push_back(std::move(echo));
        if (i < layers.size()) {
            transmission *= 1.0 - gamma * gamma;
            loss_db += 2.0 * layers[i].thickness * material_attenuation_db_per_m(layers[i].material, f);
            depth += layers[i].thickness;
            eps_above = eps_below;
            path.push_back(below_name);
        }
    }

    // Defect echoes: specular point targets with hyperbolic moveout and
    // Gaussian beam taper.
    for (const Defect& defect : scene.defects()) {
        double trans = 1.0;
        double loss = 2.0 * scene.standoff() * scene.air_attenuation_db_per_m();
        double remaining = defect.depth;
        double eps_prev = 1.0;
        std::vector<std::string> dpath{"air"};
        for (const Layer& layer : layers) {
            if (remaining <= 0.0) break;
            const double gamma = fresnel_reflection(eps_prev, layer.material.eps_r);
            trans *= 1.0 - gamma * gamma;
            const double segment = std::min(remaining, layer.thickness);
            loss += 2.0 * segment * material_attenuation_db_per_m(layer.material, f);
            remaining -= segment;
            eps_prev = layer.material.eps_r;
            dpath.push_back(layer.material.name);
        }
        const double offset = lateral_offset - defect.lateral_position;
        const double vertical = defect.depth + scene.standoff();
        const double theta = std::atan(std::abs(offset) / vertical);
        const double taper =
            std::exp(-kFourLn2 * theta * theta / (antenna.hpbw * antenna.hpbw));
        Echo echo;
        echo.delay = two_way_delay(scene, defect.depth) *
                     std::sqrt(1.0 + (offset / vertical) * (offset / vertical));
        echo.amplitude =
            defect.reflection_coefficient * trans * std::pow(10.0, -loss / 20.0) * taper;
        dpath.push_back(to_string(defect.kind));
        echo.path = std::move(dpath);
        if (std::abs(echo.amplitude) >= kAmplitudeFloor) echoes.push_back(std::move(echo));
    }

    std::sort(echoes.begin(), echoes.end(),
              [](const Echo& a, const Echo& b) { return a.delay < b.delay; });
    return echoes;
}

Waveform synthesize_ascan(const Scene& scene, const Antenna& antenna, const Pulse& pulse,
                          double sample_rate, double window, double lateral_offset,
                          double noise_rms, std::uint64_t seed) {
    validate_pulse(pulse);
    const std::vector<Echo> echoes = enumerate_echoes(scene, antenna, lateral_offset);
    double max_delay = 0.0;
    for (const Echo& echo : echoes) max_delay = std::max(max_delay, echo.delay);
    if (window < max_delay + 4.0 * pulse.width)
        throw std::invalid_argument("window too short for the latest echo");
    if (pulse.prf * max_delay >= 1.0)
        throw std::invalid_argument("prf causes inter-pulse ambiguity for this scene");

    Waveform w;
    w.sample_rate = sample_rate;
    w.t0 = 0.0;
    w.samples.assign(static_cast<std::size_t>(std::llround(window * sample_rate)), 0.0);
    for (const Echo& echo : echoes)
        render_pulse(w, pulse, echo.delay, pulse.amplitude * echo.amplitude);
    if (noise_rms > 0.0) {
        GaussianRng rng(seed);
        for (double& sample : w.samples) sample += noise_rms * rng.next_gaussian();
    }
    return w;
}

} // namespace ltir
