#include "rppg/reliability.hpp"

#include "rppg/colorspace.hpp"
#include "rppg/parallel.hpp"
#include "rppg/roi_geometry.hpp"
#include "rppg/wavelet.hpp"

#include <array>
#include <cmath>
#include <exception>
#include <mutex>

namespace rppg {
namespace {

/// Accumulates the 6-channel pool for all 63 subsets in one pass using the
/// per-pixel membership pattern: pixels sharing a pattern m contribute to
/// subset s exactly when (m & s) != 0.
void pool_all_subsets(const Frame6& frame, const Plane& weights, const RoiMaskSet& masks,
                      int frame_idx, SpatioTemporalMap& map) {
  const auto pattern = membership_pattern(masks);
  std::array<double, 64> sum_w{};
  std::array<std::array<double, 6>, 64> sum_wi{};
  const int h = static_cast<int>(pattern.rows());
  const int w = static_cast<int>(pattern.cols());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint8_t m = pattern(y, x);
      if (m == 0) continue;
      const double wt = weights(y, x);
      sum_w[m] += wt;
      sum_wi[m][0] += wt * frame.r(y, x);
      sum_wi[m][1] += wt * frame.g(y, x);
      sum_wi[m][2] += wt * frame.b(y, x);
      sum_wi[m][3] += wt * frame.y(y, x);
      sum_wi[m][4] += wt * frame.u(y, x);
      sum_wi[m][5] += wt * frame.v(y, x);
    }
  }
  for (int s = 1; s <= 63; ++s) {
    double tw = 0.0;
    std::array<double, 6> ti{};
    for (int m = 1; m < 64; ++m) {
      if ((m & s) == 0 || sum_w[m] == 0.0) continue;
      tw += sum_w[m];
      for (int c = 0; c < 6; ++c) ti[c] += sum_wi[m][c];
    }
    if (!(tw > 0.0)) throw NumericError("pool: zero total weight for a subset");
    for (int c = 0; c < 6; ++c) map.channels[c](s - 1, frame_idx) = ti[c] / tw;
  }
}

SpatioTemporalMap build_map(const VideoTensor& video, const RoiPolygonTrack& landmarks,
                            const Thresholds& thresholds, bool weighted) {
  const int t_len = video.frame_count();
  if (t_len == 0) throw NumericError("build map: empty video");
  if (landmarks.frame_count() != t_len) {
    throw NumericError("build map: landmark frame count does not match video");
  }
  const int h = video.height();
  const int w = video.width();
  if (landmarks.width != w || landmarks.height != h) {
    throw NumericError("build map: landmark bounds do not match video dimensions");
  }
  SpatioTemporalMap map = SpatioTemporalMap::zeros(t_len, video.fps);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  parallel_for(0, t_len, [&](int t) {
    try {
      const Frame6 frame = expand_frame(video.frames[t]);
      const RoiMaskSet masks = rasterize_roi_masks(landmarks.frames[t], h, w);
      if (weighted) {
        const Mask domain = union_mask(63, masks);
        const HsvFrame hsv = rgb_to_hsv(video.frames[t]);
        const WeightField field = compute_weight_field(frame, hsv, domain, thresholds);
        pool_all_subsets(frame, field.pool, masks, t, map);
      } else {
        pool_all_subsets(frame, Plane::Ones(h, w), masks, t, map);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  return map;
}

}  // namespace

ChromaModel fit_chroma_model(const Frame6& frame, const Mask& domain) {
  const Eigen::Index count = domain.count();
  if (count < 8) throw NumericError("fit_chroma_model: fewer than 8 domain pixels");
  double su = 0.0, sv = 0.0;
  for (Eigen::Index j = 0; j < domain.cols(); ++j) {
    for (Eigen::Index i = 0; i < domain.rows(); ++i) {
      if (!domain(i, j)) continue;
      su += frame.u(i, j);
      sv += frame.v(i, j);
    }
  }
  const double n = static_cast<double>(count);
  const double mu = su / n;
  const double mv = sv / n;
  double cuu = 0.0, cuv = 0.0, cvv = 0.0;
  for (Eigen::Index j = 0; j < domain.cols(); ++j) {
    for (Eigen::Index i = 0; i < domain.rows(); ++i) {
      if (!domain(i, j)) continue;
      const double du = frame.u(i, j) - mu;
      const double dv = frame.v(i, j) - mv;
      cuu += du * du;
      cuv += du * dv;
      cvv += dv * dv;
    }
  }
  ChromaModel model;
  model.mean << mu, mv;
  model.covariance << cuu / n + ChromaModel::kEpsilon, cuv / n, cuv / n,
      cvv / n + ChromaModel::kEpsilon;
  return model;
}

Plane skin_weight(const Frame6& frame, const ChromaModel& model) {
  const double a = model.covariance(0, 0);
  const double b = model.covariance(0, 1);
  const double d = model.covariance(1, 1);
  const double det = a * d - b * b;
  const double i00 = d / det;
  const double i01 = -b / det;
  const double i11 = a / det;
  const Plane du = frame.u - model.mean(0);
  const Plane dv = frame.v - model.mean(1);
  return (-(i00 * du.square() + 2.0 * i01 * du * dv + i11 * dv.square())).exp();
}

Plane edge_weight(const Plane& luma) {
  const SwtSubbands2D bands = swt2d(luma);
  return (-(bands.hl.square() + bands.lh.square() + bands.hh.square()).sqrt()).exp();
}

Plane reflection_weight(const HsvFrame& hsv, double tau_r) {
  const Plane spec = (1.0 - hsv.sat) * hsv.val;
  return (-(spec - tau_r).max(0.0)).exp();
}

Plane shadow_weight(const Plane& luma, double tau_s) {
  return (-((1.0 - luma) - tau_s).max(0.0)).exp();
}

Plane aggregate_weights(const Plane& skin, const Plane& edge, const Plane& reflection,
                        const Plane& shadow, const Mask& domain, Eigen::Vector4d* alpha_out) {
  const std::array<const Plane*, 4> comps = {&skin, &edge, &reflection, &shadow};
  const Eigen::Index count = domain.count();
  if (count < 1) throw NumericError("aggregate_weights: empty domain");
  Eigen::Vector4d variances = Eigen::Vector4d::Zero();
  const double n = static_cast<double>(count);
  for (int k = 0; k < 4; ++k) {
    double sum = 0.0, sum2 = 0.0;
    const Plane& p = *comps[k];
    for (Eigen::Index j = 0; j < domain.cols(); ++j) {
      for (Eigen::Index i = 0; i < domain.rows(); ++i) {
        if (!domain(i, j)) continue;
        sum += p(i, j);
        sum2 += p(i, j) * p(i, j);
      }
    }
    const double mean = sum / n;
    variances(k) = std::max(0.0, sum2 / n - mean * mean);
  }
  Eigen::Vector4d alpha;
  if (variances.maxCoeff() < 1e-12) {
    alpha.setConstant(0.25);
  } else {
    alpha = variances / variances.sum();
  }
  if (alpha_out) *alpha_out = alpha;
  return alpha(0) * skin + alpha(1) * edge + alpha(2) * reflection + alpha(3) * shadow;
}

WeightField compute_weight_field(const Frame6& frame, const HsvFrame& hsv, const Mask& domain,
                                 const Thresholds& thresholds) {
  WeightField field;
  const ChromaModel model = fit_chroma_model(frame, domain);
  field.skin = skin_weight(frame, model);
  field.edge = edge_weight(frame.y);
  field.reflection = reflection_weight(hsv, thresholds.tau_reflection);
  field.shadow = shadow_weight(frame.y, thresholds.tau_shadow);
  field.fused = aggregate_weights(field.skin, field.edge, field.reflection, field.shadow, domain,
                                  &field.alpha);
  double max_w = 0.0;
  for (Eigen::Index j = 0; j < domain.cols(); ++j) {
    for (Eigen::Index i = 0; i < domain.rows(); ++i) {
      if (domain(i, j) && field.fused(i, j) > max_w) max_w = field.fused(i, j);
    }
  }
  if (!(max_w > 0.0)) throw NumericError("compute_weight_field: fused weights not positive");
  field.pool = field.fused / max_w;
  return field;
}

Eigen::Array<double, 6, 1> weighted_pool(const Frame6& frame, const Plane& weights,
                                         const Mask& mask) {
  double sum_w = 0.0;
  Eigen::Array<double, 6, 1> sum_wi = Eigen::Array<double, 6, 1>::Zero();
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      if (!mask(i, j)) continue;
      const double wt = weights(i, j);
      sum_w += wt;
      sum_wi(0) += wt * frame.r(i, j);
      sum_wi(1) += wt * frame.g(i, j);
      sum_wi(2) += wt * frame.b(i, j);
      sum_wi(3) += wt * frame.y(i, j);
      sum_wi(4) += wt * frame.u(i, j);
      sum_wi(5) += wt * frame.v(i, j);
    }
  }
  if (!(sum_w > 0.0)) throw NumericError("weighted_pool: zero total weight");
  return sum_wi / sum_w;
}

SpatioTemporalMap build_wmst_map(const VideoTensor& video, const RoiPolygonTrack& landmarks,
                                 const Thresholds& thresholds) {
  return build_map(video, landmarks, thresholds, true);
}

SpatioTemporalMap build_mst_map(const VideoTensor& video, const RoiPolygonTrack& landmarks) {
  return build_map(video, landmarks, Thresholds{}, false);
}

}  // namespace rppg
