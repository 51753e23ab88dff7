#pragma once

#include "rppg/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace rppg {

struct SpecularParams {
  int count = 0;
  double radius = 3.0;
  double intensity = 0.6;
};

struct ShadowParams {
  double depth = 0.0;
  double drift_speed = 0.0;  // pixels per second
};

struct JitterParams {
  double px_sigma = 0.0;
};

struct NoiseParams {
  double sigma = 0.0;
};

/// Everything a clip needs to be regenerated bit-for-bit: one seed drives
/// texture, corruption placement, jitter path, and sensor noise.
struct SynthConfig {
  int width = 48;
  int height = 48;
  double fps = 30.0;
  double duration_s = 15.0;
  double hr_bpm = 72.0;
  double pulse_amplitude = 0.004;  // relative modulation depth along pbv_direction
  Eigen::Vector3d pbv_direction = Eigen::Vector3d(0.33, 0.78, 0.53).normalized();
  Eigen::Vector3d base_skin_rgb = Eigen::Vector3d(0.72, 0.46, 0.28);
  Eigen::Vector3d background_rgb = Eigen::Vector3d(0.20, 0.20, 0.20);
  double texture_amplitude = 0.0;
  SpecularParams specular;
  ShadowParams shadow;
  JitterParams jitter;
  NoiseParams sensor_noise;
  std::uint64_t seed = 1;
};

struct GroundTruth {
  Trace bvp;
  double hr_bpm = 0.0;
  std::vector<Mask> specular_masks;  // per frame; empty when no blobs injected
  std::vector<Mask> shadow_masks;    // per frame; empty when no shadow injected
};

struct SynthClip {
  VideoTensor video;
  RoiPolygonTrack landmarks;
  GroundTruth truth;
};

/// The fixed six-ROI rectangle layout for a W x H frame.
FramePolygons roi_layout(int width, int height);

/// Pulse waveform: sin(2 pi f t) + 0.4 sin(4 pi f t + 0.7).
double bvp_waveform(double hr_bpm, double t_seconds);

struct MaskedInjection {
  VideoTensor video;
  std::vector<Mask> masks;
};

/// Brightens `count` disk blobs toward white: p' = p + intensity * (1 - p).
/// Blob centers are seeded positions inside randomly chosen ROIs and static
/// over time. count = 0 returns the input untouched.
MaskedInjection inject_specular(const VideoTensor& video, const RoiPolygonTrack& landmarks,
                                const SpecularParams& params, std::uint64_t seed);

/// Multiplies a vertical band (width 0.125 * W, wrapping, drifting at
/// drift_speed px/s from a seeded start) by (1 - depth). The band is kept
/// narrow relative to the face so clean pixels always dominate the per-frame
/// chroma fit. depth = 0 is identity.
MaskedInjection inject_shadow(const VideoTensor& video, const ShadowParams& params,
                              std::uint64_t seed);

struct JitterInjection {
  VideoTensor video;
  RoiPolygonTrack landmarks;
  std::vector<Eigen::Vector2i> offsets;  // per-frame (dx, dy), clamped to +-2
};

/// Translates every frame and its ROI polygons by an independent seeded
/// integer offset per frame (replicate border). px_sigma = 0 is identity.
JitterInjection inject_jitter(const VideoTensor& video, const RoiPolygonTrack& landmarks,
                              const JitterParams& params, std::uint64_t seed);

/// Shifts per-frame masks by the jitter offsets so ground truth stays aligned.
std::vector<Mask> translate_masks(const std::vector<Mask>& masks,
                                  const std::vector<Eigen::Vector2i>& offsets);

/// Adds sigma * (unit normal field) and clips to [0, 1]. The unit field
/// depends only on the seed, so scaling sigma rescales one fixed realization.
/// sigma = 0 is identity.
VideoTensor inject_sensor_noise(const VideoTensor& video, double sigma, std::uint64_t seed);

/// Deterministic clip: textured flat-patch face over a darker background,
/// pulse modulating the skin color relative to baseline along the signature
/// direction (channel c swings by amplitude * direction_c of its resting
/// level), then the injectors in order specular, shadow, jitter, sensor
/// noise.
SynthClip generate_clip(const SynthConfig& config);

/// Mixed-corruption corpus configuration: every clip carries specular blobs,
/// a drifting shadow, jitter, and sensor noise, with seeded variation in HR
/// and corruption strength.
std::vector<SynthConfig> corpus_configs(int count, std::uint64_t seed);

}  // namespace rppg
