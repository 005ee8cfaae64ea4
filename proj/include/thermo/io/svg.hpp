#pragma once

#include <string>
#include <vector>

#include "thermo/core/grid.hpp"

namespace thermo {

// Middle-row temperature profiles of ground truth and estimate.
std::string line_profile_svg(const std::string& title, const Grid2D& gt, const Grid2D& est);

// |est - gt| as a heat map (block-averaged down to at most 160 cells per side).
std::string error_map_svg(const std::string& title, const Grid2D& gt, const Grid2D& est);

// Plain table; the first row is the header.
std::string table_svg(const std::string& title, const std::vector<std::vector<std::string>>& rows);

std::string xml_escape(const std::string& text);

}  // namespace thermo
