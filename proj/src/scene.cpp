#include "ltir/scene.hpp"

#include <stdexcept>
#include <utility>

namespace ltir {

const char* to_string(DefectKind kind) {
    switch (kind) {
    case DefectKind::crack: return "crack";
    case DefectKind::delamination: return "delamination";
    case DefectKind::void_: return "void";
    }
    return "unknown";
}

DefectKind defect_kind_from_string(std::string_view text) {
    if (text == "crack") return DefectKind::crack;
    if (text == "delamination") return DefectKind::delamination;
    if (text == "void") return DefectKind::void_;
    throw std::invalid_argument("unknown defect kind: " + std::string(text));
}

Scene::Scene(double standoff, std::vector<Layer> layers, std::vector<Defect> defects,
             double air_attenuation_db_per_m)
    : standoff_(standoff),
      layers_(std::move(layers)),
      defects_(std::move(defects)),
      air_attenuation_db_per_m_(air_attenuation_db_per_m) {
    if (standoff_ < 0.0)
        throw std::invalid_argument("standoff must be >= 0");
    if (layers_.empty())
        throw std::invalid_argument("layers must be non-empty");
    if (air_attenuation_db_per_m_ < 0.0)
        throw std::invalid_argument("air_attenuation_db_per_m must be >= 0");
    double total = 0.0;
    for (const Layer& layer : layers_) {
        if (layer.thickness <= 0.0)
            throw std::invalid_argument("layer thickness must be > 0");
        if (layer.material.eps_r < 1.0)
            throw std::invalid_argument("eps_r must be >= 1");
        if (layer.material.loss_tangent < 0.0)
            throw std::invalid_argument("loss_tangent must be >= 0");
        if (layer.material.conductivity < 0.0)
            throw std::invalid_argument("conductivity must be >= 0");
        total += layer.thickness;
    }
    for (const Defect& defect : defects_) {
        if (defect.depth < 0.0 || defect.depth >= total)
            throw std::invalid_argument("defect depth_m outside layer stack");
        if (defect.diameter <= 0.0)
            throw std::invalid_argument("defect diameter_m must be > 0");
        if (defect.reflection_coefficient < -1.0 || defect.reflection_coefficient > 1.0)
            throw std::invalid_argument("defect reflection coefficient outside [-1, 1]");
    }
}

bool Scene::operator==(const Scene& other) const {
    return standoff_ == other.standoff_ && layers_ == other.layers_ &&
           defects_ == other.defects_ &&
           air_attenuation_db_per_m_ == other.air_attenuation_db_per_m_;
}

double total_depth(const Scene& scene) {
    double total = 0.0;
    for (const Layer& layer : scene.layers()) total += layer.thickness;
    return total;
}

Scene canonical_scene() {
    Material mud{"mud", 30.0, 0.0, 0.005};
    Material frp{"FRP", 4.0, 0.001, 0.0};
    std::vector<Layer> layers{{mud, 0.005}, {frp, 0.025}};
    // Crack 20 mm into the FRP, i.e. 25 mm below the top of the stack.
    Defect crack{DefectKind::crack, 0.025, 0.0, 0.0025, 0.3};
    return Scene(0.05, std::move(layers), {crack}, 100.0);
}

} // namespace ltir
