#include "rppg/hhh_map.hpp"

#include "rppg/colorspace.hpp"
#include "rppg/parallel.hpp"
#include "rppg/roi_geometry.hpp"
#include "rppg/wavelet.hpp"

#include <array>
#include <cmath>
#include <exception>
#include <mutex>
#include <vector>

namespace rppg {

SpatioTemporalMap build_hhh_map(const VideoTensor& video, const RoiPolygonTrack& landmarks) {
  const int t_len = video.frame_count();
  if (t_len < 2) throw NumericError("build_hhh_map: need at least 2 frames");
  if (landmarks.frame_count() != t_len) {
    throw NumericError("build_hhh_map: landmark frame count does not match video");
  }
  const int h = video.height();
  const int w = video.width();
  if (landmarks.width != w || landmarks.height != h) {
    throw NumericError("build_hhh_map: landmark bounds do not match video dimensions");
  }

  std::vector<Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>> patterns(t_len);
  for (int t = 0; t < t_len; ++t) {
    patterns[t] = membership_pattern(rasterize_roi_masks(landmarks.frames[t], h, w));
  }

  std::vector<Frame6> stack(t_len);
  for (int t = 0; t < t_len; ++t) stack[t] = expand_frame(video.frames[t]);

  SpatioTemporalMap map = SpatioTemporalMap::zeros(t_len, video.fps);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  parallel_for(0, SpatioTemporalMap::kChannels, [&](int c) {
    try {
      std::vector<Plane> channel(t_len);
      for (int t = 0; t < t_len; ++t) channel[t] = stack[t].channel(c);
      const std::vector<Plane> hhh = swt3d_hhh(channel);
      for (int t = 0; t < t_len; ++t) {
        std::array<double, 64> sum_sq{};
        std::array<std::int64_t, 64> count{};
        const auto& pattern = patterns[t];
        for (int x = 0; x < w; ++x) {
          for (int y = 0; y < h; ++y) {
            const std::uint8_t m = pattern(y, x);
            if (m == 0) continue;
            const double v = hhh[t](y, x);
            sum_sq[m] += v * v;
            ++count[m];
          }
        }
        for (int s = 1; s <= 63; ++s) {
          double total_sq = 0.0;
          std::int64_t total_n = 0;
          for (int m = 1; m < 64; ++m) {
            if ((m & s) == 0) continue;
            total_sq += sum_sq[m];
            total_n += count[m];
          }
          if (total_n == 0) throw NumericError("build_hhh_map: empty subset");
          map.channels[c](s - 1, t) = std::sqrt(total_sq / static_cast<double>(total_n));
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  return map;
}

}  // namespace rppg
