#include "ltir/scene_io.hpp"

#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>
#include <vector>

namespace ltir {

namespace {

struct PendingLayer {
    std::optional<std::string> name;
    std::optional<double> thickness;
    std::optional<double> eps_r;
    double loss_tangent = 0.0;
    double conductivity = 0.0;
    std::size_t line = 0;
};

struct PendingDefect {
    std::optional<DefectKind> kind;
    std::optional<double> depth;
    double lateral = 0.0;
    std::optional<double> diameter;
    double reflection = 0.3;
    std::size_t line = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view value, std::size_t line) {
    const std::string text(value);
    char* end = nullptr;
    const double parsed = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw ParseError(line, "not a number: '" + text + "'");
    return parsed;
}

std::string fmt(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

} // namespace

Scene parse_scene_config(const std::string& text) {
    enum class Section { none, scene, layer, defect };
    Section section = Section::none;
    bool seen_scene = false;
    std::optional<double> standoff;
    double air_atten = 0.0;
    std::vector<PendingLayer> layers;
    std::vector<PendingDefect> defects;

    std::istringstream stream(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = trim(line.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line == "[scene]") {
                if (seen_scene) throw ParseError(line_no, "duplicate [scene] section");
                seen_scene = true;
                section = Section::scene;
            } else if (line == "[layer]") {
                layers.push_back({});
                layers.back().line = line_no;
                section = Section::layer;
            } else if (line == "[defect]") {
                defects.push_back({});
                defects.back().line = line_no;
                section = Section::defect;
            } else {
                throw ParseError(line_no, "unknown section " + std::string(line));
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        switch (section) {
        case Section::none:
            throw ParseError(line_no, "key outside any section");
        case Section::scene:
            if (key == "standoff_m") standoff = parse_number(value, line_no);
            else if (key == "air_atten_db_per_m") air_atten = parse_number(value, line_no);
            else throw ParseError(line_no, "unknown key '" + key + "' in [scene]");
            break;
        case Section::layer: {
            PendingLayer& layer = layers.back();
            if (key == "name") layer.name = std::string(value);
            else if (key == "thickness_m") layer.thickness = parse_number(value, line_no);
            else if (key == "eps_r") layer.eps_r = parse_number(value, line_no);
            else if (key == "loss_tangent") layer.loss_tangent = parse_number(value, line_no);
            else if (key == "conductivity_s_per_m")
                layer.conductivity = parse_number(value, line_no);
            else throw ParseError(line_no, "unknown key '" + key + "' in [layer]");
            break;
        }
        case Section::defect: {
            PendingDefect& defect = defects.back();
            if (key == "kind") {
                try {
                    defect.kind = defect_kind_from_string(value);
                } catch (const std::invalid_argument& e) {
                    throw ParseError(line_no, e.what());
                }
            } else if (key == "depth_m") defect.depth = parse_number(value, line_no);
            else if (key == "lateral_m") defect.lateral = parse_number(value, line_no);
            else if (key == "diameter_m") defect.diameter = parse_number(value, line_no);
            else if (key == "reflection") defect.reflection = parse_number(value, line_no);
            else throw ParseError(line_no, "unknown key '" + key + "' in [defect]");
            break;
        }
        }
    }

    if (!seen_scene) throw ParseError("no [scene] section");
    if (!standoff) throw ParseError("missing standoff_m in [scene]");

    std::vector<Layer> built_layers;
    for (const PendingLayer& layer : layers) {
        if (!layer.name) throw ParseError(layer.line, "[layer] missing name");
        if (!layer.thickness) throw ParseError(layer.line, "[layer] missing thickness_m");
        if (!layer.eps_r) throw ParseError(layer.line, "[layer] missing eps_r");
        built_layers.push_back(
            {{*layer.name, *layer.eps_r, layer.loss_tangent, layer.conductivity},
             *layer.thickness});
    }
    std::vector<Defect> built_defects;
    for (const PendingDefect& defect : defects) {
        if (!defect.kind) throw ParseError(defect.line, "[defect] missing kind");
        if (!defect.depth) throw ParseError(defect.line, "[defect] missing depth_m");
        if (!defect.diameter) throw ParseError(defect.line, "[defect] missing diameter_m");
        built_defects.push_back({*defect.kind, *defect.depth, defect.lateral, *defect.diameter,
                                 defect.reflection});
    }
    return Scene(*standoff, std::move(built_layers), std::move(built_defects), air_atten);
}

std::string serialize_scene(const Scene& scene) {
    std::ostringstream out;
    out << "[scene]\n";
    out << "standoff_m = " << fmt(scene.standoff()) << "\n";
    out << "air_atten_db_per_m = " << fmt(scene.air_attenuation_db_per_m()) << "\n";
    for (const Layer& layer : scene.layers()) {
        out << "\n[layer]\n";
        out << "name = " << layer.material.name << "\n";
        out << "thickness_m = " << fmt(layer.thickness) << "\n";
        out << "eps_r = " << fmt(layer.material.eps_r) << "\n";
        out << "loss_tangent = " << fmt(layer.material.loss_tangent) << "\n";
        out << "conductivity_s_per_m = " << fmt(layer.material.conductivity) << "\n";
    }
    for (const Defect& defect : scene.defects()) {
        out << "\n[defect]\n";
        out << "kind = " << to_string(defect.kind) << "\n";
        out << "depth_m = " << fmt(defect.depth) << "\n";
        out << "lateral_m = " << fmt(defect.lateral_position) << "\n";
        out << "diameter_m = " << fmt(defect.diameter) << "\n";
        out << "reflection = " << fmt(defect.reflection_coefficient) << "\n";
    }
    return out.str();
}

} // namespace ltir
