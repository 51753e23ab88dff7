#pragma once

#include "rppg/types.hpp"

#include <array>
#include <cstdint>

namespace rppg {

/// Even-odd ray-cast inside test (crossings strictly to the right of the point).
bool point_in_polygon(const Polygon& poly, double px, double py);

/// Scanline even-odd fill. Pixel (x, y) is set iff its center (x+0.5, y+0.5)
/// lies inside the polygon. Deterministic for self-intersecting input.
Mask rasterize_polygon(const Polygon& poly, int height, int width);

/// Rasterizes all six ROI polygons. Throws NumericError when any ROI covers
/// zero pixels.
RoiMaskSet rasterize_roi_masks(const FramePolygons& polygons, int height, int width);

/// The 63 non-empty ROI subsets in ascending index order. Bit i (LSB =
/// forehead) selects kRoiNames[i]; this order defines map row order.
std::array<int, 63> enumerate_subsets();

/// Pixelwise OR of the masks selected by the subset's bits.
Mask union_mask(int subset, const RoiMaskSet& masks);

/// Per-pixel membership pattern: bit i set iff the pixel lies in ROI i.
/// Pattern m belongs to subset s exactly when (m & s) != 0, which lets all 63
/// subset pools be assembled from at most 64 pattern accumulators.
Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> membership_pattern(
    const RoiMaskSet& masks);

}  // namespace rppg
