#include "rppg/roi_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace rppg {

bool point_in_polygon(const Polygon& poly, double px, double py) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = poly[j];
    const auto& b = poly[i];
    if ((a.y() > py) != (b.y() > py)) {
      const double xc = a.x() + (py - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (px < xc) inside = !inside;
    }
  }
  return inside;
}

Mask rasterize_polygon(const Polygon& poly, int height, int width) {
  Mask mask = Mask::Constant(height, width, false);
  if (poly.size() < 3) return mask;
  double y_min = poly[0].y(), y_max = poly[0].y();
  for (const auto& v : poly) {
    y_min = std::min(y_min, v.y());
    y_max = std::max(y_max, v.y());
  }
  const int row_lo = std::max(0, static_cast<int>(std::floor(y_min - 0.5)));
  const int row_hi = std::min(height - 1, static_cast<int>(std::ceil(y_max)));

  std::vector<double> crossings;
  const std::size_t n = poly.size();
  for (int y = row_lo; y <= row_hi; ++y) {
    const double yc = y + 0.5;
    crossings.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const auto& a = poly[j];
      const auto& b = poly[i];
      if ((a.y() > yc) != (b.y() > yc)) {
        crossings.push_back(a.x() + (yc - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
      }
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      // Centers x+0.5 in [crossings[k], crossings[k+1]).
      const int x_first = std::max(0, static_cast<int>(std::ceil(crossings[k] - 0.5)));
      const int x_last =
          std::min(width - 1, static_cast<int>(std::ceil(crossings[k + 1] - 0.5)) - 1);
      for (int x = x_first; x <= x_last; ++x) mask(y, x) = true;
    }
  }
  return mask;
}

RoiMaskSet rasterize_roi_masks(const FramePolygons& polygons, int height, int width) {
  RoiMaskSet masks;
  for (int i = 0; i < kRoiCount; ++i) {
    masks[i] = rasterize_polygon(polygons[i], height, width);
    if (!masks[i].any()) {
      throw NumericError(std::string("degenerate ROI: ") + kRoiNames[i] +
                         " rasterizes to zero pixels");
    }
  }
  return masks;
}

std::array<int, 63> enumerate_subsets() {
  std::array<int, 63> out;
  for (int s = 1; s <= 63; ++s) out[s - 1] = s;
  return out;
}

Mask union_mask(int subset, const RoiMaskSet& masks) {
  if (subset < 1 || subset > 63) throw NumericError("union_mask: subset index out of range");
  Mask out = Mask::Constant(masks[0].rows(), masks[0].cols(), false);
  for (int i = 0; i < kRoiCount; ++i) {
    if (subset & (1 << i)) out = out || masks[i];
  }
  return out;
}

Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> membership_pattern(
    const RoiMaskSet& masks) {
  Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> pattern =
      Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(masks[0].rows(),
                                                                       masks[0].cols());
  for (int i = 0; i < kRoiCount; ++i) {
    pattern += masks[i].cast<std::uint8_t>() * static_cast<std::uint8_t>(1 << i);
  }
  return pattern;
}

}  // namespace rppg
