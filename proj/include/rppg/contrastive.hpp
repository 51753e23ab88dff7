#pragma once

#include "rppg/types.hpp"

#include <cstdint>
#include <vector>

namespace rppg {

/// arctanh inputs are clamped to +-(1 - 1e-6), bounding the similarity score
/// at 2*arctanh(1 - 1e-6) = 14.508657... while preserving ordering.
inline constexpr double kSimilarityClamp = 1.0 - 1e-6;

/// Centered cosine (Pearson correlation) between two spectra on one grid.
/// Throws NumericError on grid mismatch or zero variance.
double pearson_similarity(const Psd& a, const Psd& b);

/// h = 2 * arctanh(clamp(r)).
double arctanh_similarity(double r);

struct LossReport {
  double loss = 0.0;
  Vec grad_anchor;
  std::vector<Vec> grad_positives;
  std::vector<Vec> grad_negatives;
};

/// Temperature-free InfoNCE: per positive i,
///   l_i = -log( exp(h(y, y+_i)) / sum_k exp(h(y, y-_k)) ),
/// loss = mean_i l_i, with the denominator over negatives only and the
/// log-sum-exp evaluated stably. Gradients are analytic with respect to every
/// input spectrum (clamped similarities contribute zero slope).
LossReport info_nce(const Psd& anchor, const std::vector<Psd>& positives,
                    const std::vector<Psd>& negatives);

struct PairLossReport {
  double loss = 0.0;
  Vec grad_pred;
  Vec grad_target;
};

/// || P(y) - P(y_t) ||_1 + lambda * (1 - r(P(y), P(y_t))) with analytic
/// gradients; the L1 subgradient is sign, zero at ties.
PairLossReport pretrain_loss(const Psd& pred, const Psd& target, double lambda = 0.05);

/// Linear interpolation along time to round(T * factor) samples, endpoints
/// aligned; the sample rate is rescaled by (T'-1)/(T-1) so spectral content
/// keeps its physical frequency. factor in [0.5, 2]; resulting T >= 4.
SpatioTemporalMap temporal_resize(const SpatioTemporalMap& map, double factor);

/// Seeded uniform permutation of the 63 subset rows, same for all channels.
SpatioTemporalMap roi_shuffle(const SpatioTemporalMap& map, std::uint64_t seed);

/// Reduces a map to one trace (mean over rows and channels per frame),
/// band-passes it, and returns its normalized in-band spectrum. fps_override
/// reinterprets the samples at a different rate (used to place augmented
/// maps on a common grid); n_fft = 0 picks the default for the length.
Psd map_psd(const SpatioTemporalMap& map, double fps_override = 0.0, int n_fft = 0);

/// Negative pool for one anchor: the spectrum of every foreign map, the
/// spectrum of a temporally resized copy of every foreign map (factor drawn
/// per map from the seed), and the anchor video's HHH-map spectrum. All
/// spectra are evaluated at the anchor's sample rate on one grid, so the
/// resized copies genuinely differ in shape. Pool size 2*|foreign| + 1.
std::vector<Psd> make_negative_pool(const std::vector<const SpatioTemporalMap*>& foreign,
                                    const SpatioTemporalMap& anchor_hhh, double anchor_fps,
                                    std::uint64_t seed);

}  // namespace rppg
