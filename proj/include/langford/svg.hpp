#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "langford/vec3.hpp"

namespace langford {

/// Phase-portrait projection: fixed 800x800 viewport, axes autoscaled
/// with a 5% margin, one polyline, plain-text axis labels. Coordinates
/// are rounded to 1e-6 so output is byte-stable.
void write_phase_svg(const std::filesystem::path& file, const std::vector<Vec3>& points,
                     int axis_h, int axis_v, const std::string& label_h,
                     const std::string& label_v);

}  // namespace langford
