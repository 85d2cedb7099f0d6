#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ltir {

// Dielectric description valid at the carrier frequency (no dispersion).
struct Material {
    std::string name;
    double eps_r = 1.0;        // relative permittivity, >= 1
    double loss_tangent = 0.0; // dimensionless, >= 0
    double conductivity = 0.0; // S/m, >= 0

    bool operator==(const Material&) const = default;
};

struct Layer {
    Material material;
    double thickness = 0.0; // m, > 0

    bool operator==(const Layer&) const = default;
};

enum class DefectKind { crack, delamination, void_ };

const char* to_string(DefectKind kind);
DefectKind defect_kind_from_string(std::string_view text);

struct Defect {
    DefectKind kind = DefectKind::crack;
    double depth = 0.0;            // m below the top of the layer stack
    double lateral_position = 0.0; // m along the scan axis
    double diameter = 0.0;         // m, > 0
    double reflection_coefficient = 0.3; // in [-1, 1]

    bool operator==(const Defect&) const = default;
};

struct Antenna {
    double gain_dbi = 9.3;
    double hpbw = 0.6981317007977318; // 40 degrees, radians
    double center_frequency = 1.5e12; // Hz
};

// Immutable after construction; the constructor validates all invariants
// and throws std::invalid_argument naming the offending field.
class Scene {
public:
    Scene(double standoff, std::vector<Layer> layers, std::vector<Defect> defects,
          double air_attenuation_db_per_m);

    double standoff() const { return standoff_; }
    const std::vector<Layer>& layers() const { return layers_; }
    const std::vector<Defect>& defects() const { return defects_; }
    double air_attenuation_db_per_m() const { return air_attenuation_db_per_m_; }

    bool operator==(const Scene&) const;

private:
    double standoff_;
    std::vector<Layer> layers_;
    std::vector<Defect> defects_;
    double air_attenuation_db_per_m_;
};

// Sum of layer thicknesses.
double total_depth(const Scene& scene);

// The reference inspection scenario: 5 cm air standoff, 5 mm mud over
// 25 mm FRP, one 2.5 mm crack 20 mm into the FRP.
Scene canonical_scene();

} // namespace ltir
