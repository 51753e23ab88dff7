#include "rppg/colorspace.hpp"

#include <algorithm>
#include <cmath>

namespace rppg {

void rgb_to_yuv_scalar(double r, double g, double b, double& y, double& u, double& v) {
  y = kLumaR * r + kLumaG * g + kLumaB * b;
  u = kChromaU * (b - y);
  v = kChromaV * (r - y);
}

void rgb_to_hsv_scalar(double r, double g, double b, double& h, double& s, double& v) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  v = mx;
  s = (mx > 0.0) ? delta / mx : 0.0;
  if (delta <= 0.0) {
    h = 0.0;
    return;
  }
  if (mx == r) {
    h = 60.0 * ((g - b) / delta);
  } else if (mx == g) {
    h = 60.0 * (2.0 + (b - r) / delta);
  } else {
    h = 60.0 * (4.0 + (r - g) / delta);
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
}

Frame6 expand_frame(const RgbFrame& rgb) {
  Frame6 out;
  out.r = rgb.r;
  out.g = rgb.g;
  out.b = rgb.b;
  out.y = luma(rgb.r, rgb.g, rgb.b);
  out.u = kChromaU * (rgb.b - out.y);
  out.v = kChromaV * (rgb.r - out.y);
  return out;
}

HsvFrame rgb_to_hsv(const RgbFrame& rgb) {
  const auto rows = rgb.r.rows();
  const auto cols = rgb.r.cols();
  HsvFrame out;
  out.hue.resize(rows, cols);
  out.sat.resize(rows, cols);
  out.val.resize(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      rgb_to_hsv_scalar(rgb.r(i, j), rgb.g(i, j), rgb.b(i, j), out.hue(i, j), out.sat(i, j),
                        out.val(i, j));
    }
  }
  return out;
}

}  // namespace rppg
