#include "rppg/synthetic.hpp"

#include "rppg/parallel.hpp"
#include "rppg/rng.hpp"
#include "rppg/roi_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rppg {
namespace {

constexpr int kMaxJitterPx = 2;

Polygon rect_polygon(double x0, double y0, double x1, double y1) {
  return {Eigen::Vector2d(x0, y0), Eigen::Vector2d(x1, y0), Eigen::Vector2d(x1, y1),
          Eigen::Vector2d(x0, y1)};
}

struct RectF {
  double x0, y0, x1, y1;
};

RectF roi_rect(int index, int width, int height) {
  const double w = width, h = height;
  switch (index) {
    case 0: return {0.15 * w, 0.08 * h, 0.85 * w, 0.30 * h};  // forehead
    case 1: return {0.38 * w, 0.66 * h, 0.62 * w, 0.84 * h};  // mouth
    case 2: return {0.10 * w, 0.38 * h, 0.30 * w, 0.56 * h};  // left_cheek_1
    case 3: return {0.10 * w, 0.60 * h, 0.30 * w, 0.78 * h};  // left_cheek_2
    case 4: return {0.70 * w, 0.38 * h, 0.90 * w, 0.56 * h};  // right_cheek_1
    default: return {0.70 * w, 0.60 * h, 0.90 * w, 0.78 * h};  // right_cheek_2
  }
}

double clip01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

void validate(const SynthConfig& cfg) {
  if (cfg.width < 32 || cfg.height < 32) throw NumericError("synth: frame smaller than 32x32");
  if (!(cfg.fps > 0.0)) throw NumericError("synth: fps must be positive");
  if (!(cfg.duration_s > 0.0)) throw NumericError("synth: duration must be positive");
  if (cfg.hr_bpm < 30.0 || cfg.hr_bpm > 180.0) throw NumericError("synth: hr outside [30,180]");
  const double swing = 1.4 * cfg.pulse_amplitude;  // waveform peak magnitude
  for (int c = 0; c < 3; ++c) {
    const double hi = cfg.base_skin_rgb(c) *
                      (1.0 + swing * std::abs(cfg.pbv_direction(c))) *
                      (1.0 + cfg.texture_amplitude);
    const double lo = cfg.base_skin_rgb(c) *
                      (1.0 - swing * std::abs(cfg.pbv_direction(c))) *
                      (1.0 - cfg.texture_amplitude);
    if (hi > 1.0 || lo < 0.0) throw NumericError("synth: pulse amplitude leaves [0,1]");
  }
}

}  // namespace

FramePolygons roi_layout(int width, int height) {
  FramePolygons polys;
  for (int i = 0; i < kRoiCount; ++i) {
    const RectF r = roi_rect(i, width, height);
    polys[i] = rect_polygon(r.x0, r.y0, r.x1, r.y1);
  }
  return polys;
}

double bvp_waveform(double hr_bpm, double t_seconds) {
  const double f = hr_bpm / 60.0;
  return std::sin(2.0 * M_PI * f * t_seconds) +
         0.4 * std::sin(4.0 * M_PI * f * t_seconds + 0.7);
}

MaskedInjection inject_specular(const VideoTensor& video, const RoiPolygonTrack& landmarks,
                                const SpecularParams& params, std::uint64_t seed) {
  MaskedInjection out;
  out.video = video;
  if (params.count <= 0) return out;
  const int h = video.height();
  const int w = video.width();
  Rng rng(seed);
  Mask blob_mask = Mask::Constant(h, w, false);
  for (int b = 0; b < params.count; ++b) {
    const int roi = static_cast<int>(rng.uniform_int(0, kRoiCount - 1));
    const RectF r = roi_rect(roi, landmarks.width, landmarks.height);
    const double margin = params.radius + 2.0;
    double cx, cy;
    if (r.x1 - r.x0 > 2.0 * margin && r.y1 - r.y0 > 2.0 * margin) {
      cx = rng.uniform(r.x0 + margin, r.x1 - margin);
      cy = rng.uniform(r.y0 + margin, r.y1 - margin);
    } else {
      cx = 0.5 * (r.x0 + r.x1);
      cy = 0.5 * (r.y0 + r.y1);
    }
    const double r2 = params.radius * params.radius;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double dx = x + 0.5 - cx;
        const double dy = y + 0.5 - cy;
        if (dx * dx + dy * dy <= r2) blob_mask(y, x) = true;
      }
    }
  }
  const double a = params.intensity;
  for (auto& frame : out.video.frames) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!blob_mask(y, x)) continue;
        frame.r(y, x) += a * (1.0 - frame.r(y, x));
        frame.g(y, x) += a * (1.0 - frame.g(y, x));
        frame.b(y, x) += a * (1.0 - frame.b(y, x));
      }
    }
  }
  out.masks.assign(video.frames.size(), blob_mask);
  return out;
}

MaskedInjection inject_shadow(const VideoTensor& video, const ShadowParams& params,
                              std::uint64_t seed) {
  MaskedInjection out;
  out.video = video;
  if (!(params.depth > 0.0)) return out;
  const int h = video.height();
  const int w = video.width();
  const int t_len = video.frame_count();
  Rng rng(seed);
  const double x_start = rng.uniform(0.0, static_cast<double>(w));
  // Narrow relative to the face so the clean pixels always dominate the
  // per-frame chroma fit even at full overlap with the ROI union.
  const double band_width = 0.125 * w;
  const double factor = 1.0 - params.depth;
  out.masks.resize(t_len);
  for (int t = 0; t < t_len; ++t) {
    const double x0 = x_start + params.drift_speed * t / video.fps;
    Mask mask = Mask::Constant(h, w, false);
    RgbFrame& frame = out.video.frames[t];
    for (int x = 0; x < w; ++x) {
      double rel = std::fmod(x + 0.5 - x0, static_cast<double>(w));
      if (rel < 0.0) rel += w;
      if (rel >= band_width) continue;
      mask.col(x).setConstant(true);
      frame.r.col(x) *= factor;
      frame.g.col(x) *= factor;
      frame.b.col(x) *= factor;
    }
    out.masks[t] = std::move(mask);
  }
  return out;
}

JitterInjection inject_jitter(const VideoTensor& video, const RoiPolygonTrack& landmarks,
                              const JitterParams& params, std::uint64_t seed) {
  JitterInjection out;
  out.video = video;
  out.landmarks = landmarks;
  const int t_len = video.frame_count();
  out.offsets.assign(t_len, Eigen::Vector2i::Zero());
  if (!(params.px_sigma > 0.0)) return out;
  const int h = video.height();
  const int w = video.width();
  Rng rng(seed);
  for (int t = 0; t < t_len; ++t) {
    const int dx = static_cast<int>(std::clamp<long>(
        std::lround(rng.normal(0.0, params.px_sigma)), -kMaxJitterPx, kMaxJitterPx));
    const int dy = static_cast<int>(std::clamp<long>(
        std::lround(rng.normal(0.0, params.px_sigma)), -kMaxJitterPx, kMaxJitterPx));
    out.offsets[t] = Eigen::Vector2i(dx, dy);
    if (dx == 0 && dy == 0) continue;
    const RgbFrame& src = video.frames[t];
    RgbFrame dst;
    dst.r.resize(h, w);
    dst.g.resize(h, w);
    dst.b.resize(h, w);
    for (int y = 0; y < h; ++y) {
      const int sy = std::clamp(y - dy, 0, h - 1);
      for (int x = 0; x < w; ++x) {
        const int sx = std::clamp(x - dx, 0, w - 1);
        dst.r(y, x) = src.r(sy, sx);
        dst.g(y, x) = src.g(sy, sx);
        dst.b(y, x) = src.b(sy, sx);
      }
    }
    out.video.frames[t] = std::move(dst);
    for (auto& poly : out.landmarks.frames[t]) {
      for (auto& v : poly) v += Eigen::Vector2d(dx, dy);
    }
  }
  return out;
}

std::vector<Mask> translate_masks(const std::vector<Mask>& masks,
                                  const std::vector<Eigen::Vector2i>& offsets) {
  std::vector<Mask> out(masks.size());
  for (std::size_t t = 0; t < masks.size(); ++t) {
    const int dx = offsets[t].x();
    const int dy = offsets[t].y();
    if (dx == 0 && dy == 0) {
      out[t] = masks[t];
      continue;
    }
    const int h = static_cast<int>(masks[t].rows());
    const int w = static_cast<int>(masks[t].cols());
    Mask shifted = Mask::Constant(h, w, false);
    for (int y = 0; y < h; ++y) {
      const int sy = std::clamp(y - dy, 0, h - 1);
      for (int x = 0; x < w; ++x) {
        shifted(y, x) = masks[t](sy, std::clamp(x - dx, 0, w - 1));
      }
    }
    out[t] = std::move(shifted);
  }
  return out;
}

VideoTensor inject_sensor_noise(const VideoTensor& video, double sigma, std::uint64_t seed) {
  if (!(sigma > 0.0)) return video;
  VideoTensor out = video;
  const int h = video.height();
  const int w = video.width();
  const Rng root(seed);
  parallel_for(0, video.frame_count(), [&](int t) {
    Rng rng = root.split(std::to_string(t));
    RgbFrame& frame = out.frames[t];
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        frame.r(y, x) = clip01(frame.r(y, x) + sigma * rng.normal());
        frame.g(y, x) = clip01(frame.g(y, x) + sigma * rng.normal());
        frame.b(y, x) = clip01(frame.b(y, x) + sigma * rng.normal());
      }
    }
  });
  return out;
}

SynthClip generate_clip(const SynthConfig& config) {
  validate(config);
  const int w = config.width;
  const int h = config.height;
  const int t_len = static_cast<int>(std::lround(config.duration_s * config.fps));
  if (t_len < 8) throw NumericError("synth: clip shorter than 8 frames");

  const Rng root(config.seed);

  // Static per-pixel albedo; the face patch sits over a darker background.
  Plane albedo = Plane::Ones(h, w);
  if (config.texture_amplitude > 0.0) {
    Rng rng = root.split("texture");
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        albedo(y, x) = 1.0 + config.texture_amplitude * rng.uniform(-1.0, 1.0);
      }
    }
  }
  const double fx0 = 0.05 * w, fx1 = 0.95 * w, fy0 = 0.04 * h, fy1 = 0.90 * h;

  VideoTensor base;
  base.fps = config.fps;
  base.frames.resize(t_len);
  Vec bvp(t_len);
  for (int t = 0; t < t_len; ++t) bvp(t) = bvp_waveform(config.hr_bpm, t / config.fps);
  parallel_for(0, t_len, [&](int t) {
    RgbFrame& frame = base.frames[t];
    frame.r.resize(h, w);
    frame.g.resize(h, w);
    frame.b.resize(h, w);
    // The pulse modulates skin color relative to its baseline (the signature
    // direction lives in AC/DC space), so each channel swings in proportion
    // to its own resting level. An additive swing would hand the chrominance
    // extractors a normalized direction they cancel exactly.
    const Eigen::Vector3d face = config.base_skin_rgb.cwiseProduct(
        Eigen::Vector3d::Ones() + config.pulse_amplitude * bvp(t) * config.pbv_direction);
    for (int y = 0; y < h; ++y) {
      const bool in_y = y + 0.5 >= fy0 && y + 0.5 < fy1;
      for (int x = 0; x < w; ++x) {
        const bool in_face = in_y && x + 0.5 >= fx0 && x + 0.5 < fx1;
        const Eigen::Vector3d& color = in_face ? face : config.background_rgb;
        const double a = albedo(y, x);
        frame.r(y, x) = clip01(a * color(0));
        frame.g(y, x) = clip01(a * color(1));
        frame.b(y, x) = clip01(a * color(2));
      }
    }
  });

  RoiPolygonTrack track;
  track.width = w;
  track.height = h;
  track.frames.assign(t_len, roi_layout(w, h));

  MaskedInjection spec = inject_specular(base, track, config.specular,
                                         root.split("specular").next_u64());
  MaskedInjection shad =
      inject_shadow(spec.video, config.shadow, root.split("shadow").next_u64());
  JitterInjection jit =
      inject_jitter(shad.video, track, config.jitter, root.split("jitter").next_u64());
  VideoTensor noisy = inject_sensor_noise(jit.video, config.sensor_noise.sigma,
                                          root.split("noise").next_u64());

  SynthClip clip;
  clip.video = std::move(noisy);
  clip.landmarks = std::move(jit.landmarks);
  clip.truth.hr_bpm = config.hr_bpm;
  clip.truth.bvp.fps = config.fps;
  clip.truth.bvp.samples = bvp;
  if (!spec.masks.empty()) clip.truth.specular_masks = translate_masks(spec.masks, jit.offsets);
  if (!shad.masks.empty()) clip.truth.shadow_masks = translate_masks(shad.masks, jit.offsets);
  return clip;
}

std::vector<SynthConfig> corpus_configs(int count, std::uint64_t seed) {
  if (count < 1) throw NumericError("corpus_configs: count must be positive");
  Rng root(seed);
  std::vector<SynthConfig> configs;
  configs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng = root.split("clip-" + std::to_string(i));
    SynthConfig cfg;
    cfg.width = 48;
    cfg.height = 48;
    cfg.fps = 30.0;
    cfg.duration_s = 15.0;
    cfg.hr_bpm = rng.uniform(48.0, 150.0);
    cfg.pulse_amplitude = 0.010;
    cfg.texture_amplitude = 0.02;
    cfg.specular.count = 2;
    cfg.specular.radius = rng.uniform(2.5, 4.5);
    cfg.specular.intensity = rng.uniform(0.60, 0.85);
    cfg.shadow.depth = rng.uniform(0.50, 0.70);
    cfg.shadow.drift_speed = rng.uniform(2.0, 6.0);
    cfg.jitter.px_sigma = 0.5;
    cfg.sensor_noise.sigma = 0.008;
    cfg.seed = rng.next_u64();
    configs.push_back(cfg);
  }
  return configs;
}

}  // namespace rppg
