#pragma once

#include <string>
#include <utility>
#include <vector>

#include "palm/geometry.hpp"

namespace palm {

struct SvgOptions {
  int width_px = 800;
  bool shade_density = false;
  double point_radius_px = 1.2;
};

/// Standalone SVG of a partition: the frame of S, inner boundaries as
/// polylines, optional per-rect density shading (fill opacity scaled to the
/// maximum density) and an optional point overlay.
std::string render_svg(const Partition& partition, const DensityVector* densities,
                       const std::vector<std::pair<double, double>>* points,
                       const SvgOptions& options = {});

}  // namespace palm
