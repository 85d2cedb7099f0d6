#pragma once

#include "ltir/scene.hpp"

#include <stdexcept>
#include <string>

namespace ltir {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    explicit ParseError(const std::string& message) : std::runtime_error(message), line_(0) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Line-based scene config: a [scene] section followed by repeated [layer]
// and [defect] sections, top of the stack first. '#' starts a comment.
// Unknown keys are errors. Semantic violations surface as
// std::invalid_argument from Scene construction.
Scene parse_scene_config(const std::string& text);

// Inverse of parse_scene_config; parse(serialize(s)) == s bit-exactly.
std::string serialize_scene(const Scene& scene);

} // namespace ltir
