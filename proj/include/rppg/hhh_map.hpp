#pragma once

#include "rppg/types.hpp"

namespace rppg {

/// Physiology-free negative map: per channel of the stacked RGB+YUV
/// representation, the 3-D Haar HHH subband is pooled over each ROI subset by
/// root-mean-square, row value sqrt(mean of squared subband values over the
/// subset's pixels), with masks taken from the same frame. All values >= 0;
/// a static clip maps to exactly zero.
SpatioTemporalMap build_hhh_map(const VideoTensor& video, const RoiPolygonTrack& landmarks);

}  // namespace rppg
