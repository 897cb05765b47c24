#pragma once

#include <string>

#include "ancap/geometry.hpp"

namespace ancap {

/// Parses the JSON geometry format:
///   {"components": [{"type": "circle", "center": [x, y], "radius": r, "label": "E"}, ...]}
/// Component types are circle, ellipse (center, major, angle, ratio),
/// polygon (vertices) and slit (a, b). Slits cannot be mixed with curves.
/// Throws Error(io_error) for malformed text and invalid_geometry for
/// geometrically invalid input.
CompactSetSpec parse_geometry(const std::string& text);

/// Reads and parses a geometry file.
CompactSetSpec load_geometry(const std::string& path);

}  // namespace ancap
