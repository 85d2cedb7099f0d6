#pragma once

#include "ltir/scene.hpp"

#include <string>
#include <vector>

namespace ltir {

namespace constants {
inline constexpr double c = 2.99792458e8;       // m/s
inline constexpr double k_B = 1.380649e-23;     // J/K
inline constexpr double eta_0 = 376.730;        // ohm, free-space impedance
} // namespace constants

enum class RcsModel { geometric, flat_plate };

RcsModel rcs_model_from_string(std::string_view text);
const char* to_string(RcsModel model);

struct BudgetItem {
    std::string label;
    double value_db = 0.0; // magnitude, always >= 0
    bool is_gain = false;  // sign applied when summing
};

struct BudgetLedger {
    std::vector<BudgetItem> items;
    double tx_power_w = 0.0;
    double received_power_w = 0.0;
    double noise_power_w = 0.0;
    double snr_db = 0.0;

    // Sum of items with gains positive and losses negative, in dB.
    double signed_sum_db() const;
};

// Vertical (range) resolution c*t/(2 sqrt(eps_r)).
double vertical_resolution(double t_pulse, double eps_r);

// Lateral resolution c/(4 f sqrt(eps_r)) + depth/sqrt(eps_r + 1).
double horizontal_resolution(double f, double eps_r, double depth);

// Phase velocity in a lossless dielectric.
double wave_velocity(double eps_r);

// Round-trip travel time from the antenna down to `depth` below the top
// of the layer stack, splitting the containing layer at that point.
double two_way_delay(const Scene& scene, double depth);

// Inverse of the in-material part of two_way_delay.
double estimate_depth(double delta_t, double eps_r);

// Normal-incidence amplitude reflection coefficient going from eps_a into eps_b.
double fresnel_reflection(double eps_a, double eps_b);

// Low-loss dielectric absorption, dB/m.
double attenuation_dielectric(double f, double eps_r, double tan_delta);

// Low-loss conduction absorption, dB/m.
double attenuation_conductive(double eps_r, double sigma);

// Thermal noise power kTB.
double noise_power(double bandwidth, double temperature);

// One-way dB/m absorption of a material at frequency f (dielectric + conductive).
double material_attenuation_db_per_m(const Material& material, double f);

// Itemized radar-equation ledger down to `target` and back. The target must
// be one of the scene's defects.
BudgetLedger link_budget(const Scene& scene, const Antenna& antenna, const Defect& target,
                         double tx_power_w, double amp_gain_db, double misc_loss_db,
                         RcsModel rcs_model, double bandwidth, double temperature);

} // namespace ltir
