#pragma once

#include <Eigen/Core>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace rppg {

using Real = double;

/// Dense image plane, H rows by W columns; element (y, x) addresses row y, column x.
template <class Scalar>
using PlaneT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Plane = PlaneT<Real>;

/// Binary pixel mask with the same indexing as Plane.
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using VecT = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
using Vec = VecT<Real>;

// ---------------------------------------------------------------------------
// Errors. The CLI maps these onto its exit-code taxonomy:
//   UsageError -> 2, FormatError -> 3, NumericError -> 4.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad flags or malformed invocation.
struct UsageError : Error {
  using Error::Error;
};

/// A file failed structural validation (magic, version, sizes, schema).
struct FormatError : Error {
  using Error::Error;
};

/// Degenerate or numerically invalid data (empty ROI, zero in-band power,
/// non-convergence, preconditions on sizes).
struct NumericError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Video and frames
// ---------------------------------------------------------------------------

struct RgbFrame {
  Plane r, g, b;
};

/// Frame stack with samples in [0,1] and a fixed frame rate.
struct VideoTensor {
  std::vector<RgbFrame> frames;
  double fps = 0.0;

  int frame_count() const { return static_cast<int>(frames.size()); }
  int height() const { return frames.empty() ? 0 : static_cast<int>(frames[0].r.rows()); }
  int width() const { return frames.empty() ? 0 : static_cast<int>(frames[0].r.cols()); }
};

/// Channel order of the stacked representation used by the maps.
enum class Channel : int { R = 0, G = 1, B = 2, Y = 3, U = 4, V = 5 };

/// RGB planes plus their BT.601 full-range YUV counterparts.
/// R,G,B,Y lie in [0,1]; U in [-0.436, 0.436]; V in [-0.615, 0.615].
struct Frame6 {
  Plane r, g, b, y, u, v;

  const Plane& channel(int c) const {
    switch (c) {
      case 0: return r;
      case 1: return g;
      case 2: return b;
      case 3: return y;
      case 4: return u;
      default: return v;
    }
  }
};

/// Hexcone HSV planes: hue in degrees [0,360), saturation and value in [0,1].
struct HsvFrame {
  Plane hue, sat, val;
};

// ---------------------------------------------------------------------------
// ROI geometry
// ---------------------------------------------------------------------------

inline constexpr int kRoiCount = 6;
inline constexpr std::array<const char*, kRoiCount> kRoiNames = {
    "forehead", "mouth", "left_cheek_1", "left_cheek_2", "right_cheek_1", "right_cheek_2"};

/// Closed polygon; vertices in pixel coordinates (x right, y down).
using Polygon = std::vector<Eigen::Vector2d>;
using FramePolygons = std::array<Polygon, kRoiCount>;

/// Per-frame ROI polygons for one clip, with the frame bounds they live in.
struct RoiPolygonTrack {
  int width = 0;
  int height = 0;
  std::vector<FramePolygons> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
};

using RoiMaskSet = std::array<Mask, kRoiCount>;

// ---------------------------------------------------------------------------
// Spatio-temporal maps
// ---------------------------------------------------------------------------

/// R x T x C grid of pooled channel values. Row r (0-based) holds the ROI
/// subset with index r+1; bit i of the subset index selects kRoiNames[i].
struct SpatioTemporalMap {
  static constexpr int kRows = 63;
  static constexpr int kChannels = 6;

  std::array<Eigen::ArrayXXd, kChannels> channels;  // each kRows x T
  double fps = 0.0;

  int frame_count() const { return static_cast<int>(channels[0].cols()); }

  static SpatioTemporalMap zeros(int frames, double fps) {
    SpatioTemporalMap m;
    m.fps = fps;
    for (auto& ch : m.channels) ch = Eigen::ArrayXXd::Zero(kRows, frames);
    return m;
  }
};

// ---------------------------------------------------------------------------
// 1-D signals and spectra
// ---------------------------------------------------------------------------

struct Trace {
  Vec samples;
  double fps = 0.0;

  int size() const { return static_cast<int>(samples.size()); }
};

/// Mean RGB per frame over the six-ROI union, one row per frame.
struct RgbTrace {
  Eigen::MatrixX3d values;  // T x 3
  double fps = 0.0;

  int size() const { return static_cast<int>(values.rows()); }
};

/// One-sided power spectrum. `normalized` means the axis was restricted to
/// [f_lo, f_hi] and the powers sum to one.
struct Psd {
  Vec freq_hz;
  Vec power;
  double f_lo = 0.5;
  double f_hi = 3.0;
  bool normalized = false;

  int size() const { return static_cast<int>(freq_hz.size()); }
};

inline constexpr double kBandLowHz = 0.5;
inline constexpr double kBandHighHz = 3.0;

}  // namespace rppg
