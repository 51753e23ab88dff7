#pragma once

#include "rppg/types.hpp"

#include <Eigen/Dense>

namespace rppg {

/// Chrominance Gaussian fitted over the ROI union; covariance carries the
/// +epsilon*I regularizer so it is always invertible.
struct ChromaModel {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();
  static constexpr double kEpsilon = 1e-6;
};

struct Thresholds {
  double tau_reflection = 0.3;
  double tau_shadow = 0.7;
};

/// Per-pixel reliability planes for one frame. `fused` is the
/// variance-adaptive convex combination of the four components; `pool` is
/// `fused` rescaled by its maximum over the ROI union, which is the plane the
/// map builder actually pools with. Rescaling by a positive constant leaves
/// every weighted mean unchanged; it pins the identity pool == 1 wherever the
/// frame carries no penalty, so uncorrupted regions pool bit-identically to
/// the unweighted baseline.
struct WeightField {
  Plane skin, edge, reflection, shadow, fused, pool;
  Eigen::Vector4d alpha = Eigen::Vector4d::Constant(0.25);
};

/// Sample mean/covariance (denominator N) of (U, V) over the masked pixels,
/// plus epsilon*I. Requires at least 8 pixels.
ChromaModel fit_chroma_model(const Frame6& frame, const Mask& domain);

/// w = exp(-(z - mu)' Sigma^{-1} (z - mu)) per pixel, z = (U, V).
Plane skin_weight(const Frame6& frame, const ChromaModel& model);

/// w = exp(-sqrt(HL^2 + LH^2 + HH^2)) from the level-1 Haar subbands of the
/// luminance plane.
Plane edge_weight(const Plane& luma);

/// s = (1 - S) * V; w = exp(-max(0, s - tau_r)).
Plane reflection_weight(const HsvFrame& hsv, double tau_r = 0.3);

/// w = exp(-max(0, (1 - Y) - tau_s)).
Plane shadow_weight(const Plane& luma, double tau_s = 0.7);

/// Variance-adaptive fusion: alpha_k = Var(w_k) / sum_j Var(w_j) with
/// population variances over the domain mask; equal coefficients when every
/// variance is below 1e-12. Returns the fused plane; alpha_out receives the
/// coefficients when non-null.
Plane aggregate_weights(const Plane& skin, const Plane& edge, const Plane& reflection,
                        const Plane& shadow, const Mask& domain,
                        Eigen::Vector4d* alpha_out = nullptr);

/// All weight planes for one frame (components, fused, pool).
WeightField compute_weight_field(const Frame6& frame, const HsvFrame& hsv, const Mask& domain,
                                 const Thresholds& thresholds = {});

/// Weighted mean of each of the six channels over the masked pixels:
/// sum(w * I) / sum(w). Weights must be positive on the mask.
Eigen::Array<double, 6, 1> weighted_pool(const Frame6& frame, const Plane& weights,
                                         const Mask& mask);

/// Reliability-weighted map: 63 subset rows by T frames by 6 channels.
SpatioTemporalMap build_wmst_map(const VideoTensor& video, const RoiPolygonTrack& landmarks,
                                 const Thresholds& thresholds = {});

/// Unweighted baseline map built by the identical pipeline with unit weights.
SpatioTemporalMap build_mst_map(const VideoTensor& video, const RoiPolygonTrack& landmarks);

}  // namespace rppg
