#include "palm/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "palm/eval.hpp"

namespace palm {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const Partition& partition, const DensityVector* densities,
                       const std::vector<std::pair<double, double>>* points,
                       const SvgOptions& options) {
  const auto& g = partition.grid;
  double w = options.width_px;
  double h = w * g.extent_y() / g.extent_x();
  double sx = w / static_cast<double>(g.width);
  double sy = h / static_cast<double>(g.height);
  auto px = [&](double units) { return units * sx; };
  auto py = [&](double units) { return h - units * sy; };  // y grows upward in data space

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
         "\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
         "\" fill=\"white\"/>\n";

  if (options.shade_density && densities && !densities->values.empty()) {
    double max_density = *std::max_element(densities->values.begin(), densities->values.end());
    if (max_density > 0.0) {
      for (size_t j = 0; j < partition.regions.size(); ++j) {
        double opacity = densities->values[j] / max_density;
        for (const auto& r : partition.regions[j].rects) {
          out += "<rect x=\"" + fmt(px(static_cast<double>(r.x0))) + "\" y=\"" +
                 fmt(py(static_cast<double>(r.y1))) + "\" width=\"" +
                 fmt(px(static_cast<double>(r.width()))) + "\" height=\"" +
                 fmt(sy * static_cast<double>(r.height())) +
                 "\" fill=\"#d62728\" fill-opacity=\"" + fmt(opacity) + "\" stroke=\"none\"/>\n";
        }
      }
    }
  }

  if (points) {
    for (const auto& [x, y] : *points) {
      double ux = (x - g.origin_x) / g.epsilon;
      double uy = (y - g.origin_y) / g.epsilon;
      out += "<circle cx=\"" + fmt(px(ux)) + "\" cy=\"" + fmt(py(uy)) + "\" r=\"" +
             fmt(options.point_radius_px) + "\" fill=\"black\" fill-opacity=\"0.45\"/>\n";
    }
  }

  for (const auto& seg : inner_segments(partition)) {
    double x1, y1, x2, y2;
    if (seg.vertical) {
      x1 = x2 = px(static_cast<double>(seg.pos));
      y1 = py(static_cast<double>(seg.lo));
      y2 = py(static_cast<double>(seg.hi));
    } else {
      y1 = y2 = py(static_cast<double>(seg.pos));
      x1 = px(static_cast<double>(seg.lo));
      x2 = px(static_cast<double>(seg.hi));
    }
    out += "<polyline points=\"" + fmt(x1) + "," + fmt(y1) + " " + fmt(x2) + "," + fmt(y2) +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  }

  out += "<rect x=\"0\" y=\"0\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace palm
