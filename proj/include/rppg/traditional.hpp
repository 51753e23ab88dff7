#pragma once

#include "rppg/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace rppg {

/// Blood-volume signature direction (unit norm) used by the pbv extractor.
Eigen::Vector3d default_pbv_direction();

/// Per-frame unweighted mean RGB over the union of the six ROIs.
RgbTrace spatial_rgb_trace(const VideoTensor& video, const RoiPolygonTrack& landmarks);

/// Chrominance-combination pulse signal: per 1.6 s Hann window with 50%
/// overlap, channels are mean-normalized, X = 3R - 2G and Y = 1.5R + G - 1.5B
/// are combined as X - (sigma_X / sigma_Y) Y, overlap-added, then band-passed.
Trace chrom(const RgbTrace& trace);

/// Plane-orthogonal-to-skin pulse signal: same windowing; S1 = G - B,
/// S2 = G + B - 2R on mean-normalized channels, h = S1 + (sigma1/sigma2) S2,
/// mean-removed per window and overlap-added.
Trace pos(const RgbTrace& trace);

/// Signature-based extraction: W = Sigma^{-1} pbv on globally mean-normalized
/// channels (ridge 1e-9), output scaled so the signature direction maps to 1.
Trace pbv(const RgbTrace& trace, const Eigen::Vector3d& pbv_direction);
Trace pbv(const RgbTrace& trace);

/// Projects the mean-normalized trace onto the complement of its dominant
/// right-singular direction (which captures common illumination), then keeps
/// the remaining component with the most in-band spectral power.
Trace lgi(const RgbTrace& trace);

/// Eigendecomposition of the centered channel covariance; returns the
/// component whose PSD concentrates most of its power in one in-band bin.
Trace pca_rppg(const RgbTrace& trace);

/// FastICA (tanh contrast, symmetric decorrelation, 200 iteration cap,
/// tolerance 1e-6, seeded initialization) on the centered, whitened channels;
/// component selection as for PCA. Deterministic for a fixed seed.
Trace ica_rppg(const RgbTrace& trace, std::uint64_t seed);

enum class Method { Ica, Pca, Chrom, Pbv, Pos, Lgi };

/// Parses "ica", "pca", "chrom", "pbv", "pos", "lgi"; throws UsageError.
Method parse_method(const std::string& name);
const char* method_name(Method method);

Trace extract(Method method, const RgbTrace& trace, std::uint64_t seed = 1);

}  // namespace rppg
