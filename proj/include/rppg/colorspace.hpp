#pragma once

#include "rppg/types.hpp"

namespace rppg {

// BT.601 full-range luma/chroma from RGB in [0,1]:
//   Y = 0.299 R + 0.587 G + 0.114 B
//   U = 0.492 (B - Y)
//   V = 0.877 (R - Y)
// giving Y in [0,1], |U| <= 0.435912, |V| <= 0.614777.

inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;
inline constexpr double kChromaU = 0.492;
inline constexpr double kChromaV = 0.877;

inline Plane luma(const Plane& r, const Plane& g, const Plane& b) {
  return kLumaR * r + kLumaG * g + kLumaB * b;
}

/// Expands RGB planes with the derived Y, U, V planes.
Frame6 expand_frame(const RgbFrame& rgb);

/// Hexcone HSV. Hue in degrees [0,360) (0 where the pixel is achromatic),
/// saturation (max-min)/max with 0 at black, value max(R,G,B).
HsvFrame rgb_to_hsv(const RgbFrame& rgb);

/// Scalar versions used by tests and the synthetic generator.
void rgb_to_yuv_scalar(double r, double g, double b, double& y, double& u, double& v);
void rgb_to_hsv_scalar(double r, double g, double b, double& h, double& s, double& v);

}  // namespace rppg
