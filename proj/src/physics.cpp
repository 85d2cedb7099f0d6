#include "ltir/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ltir {

namespace {

constexpr double kNeperToDb = 8.6859; // 20/ln(10)

double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
double power_to_db(double w) { return 10.0 * std::log10(w); }

} // namespace

RcsModel rcs_model_from_string(std::string_view text) {
    if (text == "geometric") return RcsModel::geometric;
    if (text == "flat_plate") return RcsModel::flat_plate;
    throw std::invalid_argument("unknown RCS model: " + std::string(text));
}

const char* to_string(RcsModel model) {
    return model == RcsModel::geometric ? "geometric" : "flat_plate";
}

double BudgetLedger::signed_sum_db() const {
    double sum = 0.0;
    for (const BudgetItem& item : items) sum += item.is_gain ? item.value_db : -item.value_db;
    return sum;
}

double vertical_resolution(double t_pulse, double eps_r) {
    if (t_pulse < 0.0) throw std::invalid_argument("t_pulse must be >= 0");
    if (eps_r < 1.0) throw std::invalid_argument("eps_r must be >= 1");
    return constants::c * t_pulse / (2.0 * std::sqrt(eps_r));
}

double horizontal_resolution(double f, double eps_r, double depth) {
    if (f <= 0.0) throw std::invalid_argument("f must be > 0");
    if (eps_r < 1.0) throw std::invalid_argument("eps_r must be >= 1");
    if (depth < 0.0) throw std::invalid_argument("depth must be >= 0");
    return constants::c / (4.0 * f * std::sqrt(eps_r)) + depth / std::sqrt(eps_r + 1.0);
}

double wave_velocity(double eps_r) {
    if (eps_r < 1.0) throw std::invalid_argument("eps_r must be >= 1");
    return constants::c / std::sqrt(eps_r);
}

double two_way_delay(const Scene& scene, double depth) {
    if (depth < 0.0 || depth > total_depth(scene))
        throw std::invalid_argument("depth outside layer stack");
    double delay = 2.0 * scene.standoff() / constants::c;
    double remaining = depth;
    for (const Layer& layer : scene.layers()) {
        const double segment = std::min(remaining, layer.thickness);
        if (segment <= 0.0) break;
        delay += 2.0 * segment * std::sqrt(layer.material.eps_r) / constants::c;
        remaining -= segment;
    }
    return delay;
}

double estimate_depth(double delta_t, double eps_r) {
    if (delta_t < 0.0) throw std::invalid_argument("delta_t must be >= 0");
    if (eps_r < 1.0) throw std::invalid_argument("eps_r must be >= 1");
    return constants::c * delta_t / (2.0 * std::sqrt(eps_r));
}

double fresnel_reflection(double eps_a, double eps_b) {
    if (eps_a < 1.0 || eps_b < 1.0) throw std::invalid_argument("eps must be >= 1");
    const double na = std::sqrt(eps_a);
    const double nb = std::sqrt(eps_b);
    return (na - nb) / (na + nb);
}

double attenuation_dielectric(double f, double eps_r, double tan_delta) {
    if (f <= 0.0) throw std::invalid_argument("f must be > 0");
    if (eps_r < 1.0) throw std::invalid_argument("eps_r must be >= 1");
    if (tan_delta < 0.0) throw std::invalid_argument("tan_delta must be >= 0");
    return kNeperToDb * std::numbers::pi * f * std::sqrt(eps_r) * tan_delta / constants::c;
}

double attenuation_conductive(double eps_r, double sigma) {
    if (eps_r < 1.0) throw std::invalid_argument("eps_r must be >= 1");
    if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
    return kNeperToDb * sigma * constants::eta_0 / (2.0 * std::sqrt(eps_r));
}

double noise_power(double bandwidth, double temperature) {
    if (bandwidth <= 0.0) throw std::invalid_argument("bandwidth must be > 0");
    if (temperature <= 0.0) throw std::invalid_argument("temperature must be > 0");
    return constants::k_B * temperature * bandwidth;
}

double material_attenuation_db_per_m(const Material& material, double f) {
    return attenuation_dielectric(f, material.eps_r, material.loss_tangent) +
           attenuation_conductive(material.eps_r, material.conductivity);
}

BudgetLedger link_budget(const Scene& scene, const Antenna& antenna, const Defect& target,
                         double tx_power_w, double amp_gain_db, double misc_loss_db,
                         RcsModel rcs_model, double bandwidth, double temperature) {
    if (tx_power_w <= 0.0) throw std::invalid_argument("tx_power_w must be > 0");
    if (std::find(scene.defects().begin(), scene.defects().end(), target) ==
        scene.defects().end())
        throw std::invalid_argument("target defect does not belong to scene");

    BudgetLedger ledger;
    ledger.tx_power_w = tx_power_w;

    ledger.items.push_back({"Tx antenna gain", antenna.gain_dbi, true});
    ledger.items.push_back({"Rx antenna gain", antenna.gain_dbi, true});

    const double lambda = constants::c / antenna.center_frequency;
    const double area = std::numbers::pi * (target.diameter / 2.0) * (target.diameter / 2.0);
    const double sigma = rcs_model == RcsModel::geometric
                             ? area
                             : 4.0 * std::numbers::pi * area * area / (lambda * lambda);
    const double range = scene.standoff() + target.depth; // one-way geometric path
    const double spreading_db =
        10.0 * std::log10(lambda * lambda * sigma /
                          (std::pow(4.0 * std::numbers::pi, 3) * std::pow(range, 4)));
    ledger.items.push_back({std::string("spreading (") + to_string(rcs_model) + " RCS)",
                            -spreading_db, false});

    ledger.items.push_back(
        {"air attenuation (two-way)", 2.0 * scene.standoff() * scene.air_attenuation_db_per_m(),
         false});

    double remaining = target.depth;
    double eps_above = 1.0;
    for (const Layer& layer : scene.layers()) {
        if (remaining <= 0.0) break;
        // Boundary crossed on the way down and back up: power transmission both ways.
        const double gamma = fresnel_reflection(eps_above, layer.material.eps_r);
        const double trans_db = -10.0 * std::log10(1.0 - gamma * gamma);
        ledger.items.push_back({"boundary into " + layer.material.name + " (two-way)",
                                2.0 * trans_db, false});
        const double segment = std::min(remaining, layer.thickness);
        const double alpha =
            material_attenuation_db_per_m(layer.material, antenna.center_frequency);
        ledger.items.push_back(
            {layer.material.name + " attenuation (two-way)", 2.0 * segment * alpha, false});
        remaining -= segment;
        eps_above = layer.material.eps_r;
    }

    ledger.items.push_back({"amplifier gain", amp_gain_db, true});
    ledger.items.push_back({"misc loss", misc_loss_db, false});

    const double tx_dbm = power_to_db(tx_power_w * 1e3);
    ledger.received_power_w = db_to_power(tx_dbm + ledger.signed_sum_db()) * 1e-3;
    ledger.noise_power_w = noise_power(bandwidth, temperature);
    ledger.snr_db = power_to_db(ledger.received_power_w / ledger.noise_power_w);
    return ledger;
}

} // namespace ltir
