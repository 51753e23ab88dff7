// Acceptance runner: executes the project's nine release checks end to end
// and prints one PASS/FAIL line per check, exiting nonzero if any fails.
// argv[1] is the path to the CLI binary, consumed by the determinism check.

#include "frozen_stats.hpp"
#include "oracles.hpp"

#include "rppg/colorspace.hpp"
#include "rppg/contrastive.hpp"
#include "rppg/hhh_map.hpp"
#include "rppg/reliability.hpp"
#include "rppg/rng.hpp"
#include "rppg/roi_geometry.hpp"
#include "rppg/spectral.hpp"
#include "rppg/stats_tests.hpp"
#include "rppg/synthetic.hpp"
#include "rppg/traditional.hpp"
#include "rppg/types.hpp"
#include "rppg/wavelet.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <clocale>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace rppg;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void track(double& worst, double value) { worst = std::max(worst, std::abs(value)); }

Plane random_plane(Rng& rng, int h, int w, double lo, double hi) {
  Plane p(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) p(y, x) = rng.uniform(lo, hi);
  return p;
}

RgbFrame random_rgb(Rng& rng, int h, int w) {
  RgbFrame f;
  f.r = random_plane(rng, h, w, 0.05, 0.95);
  f.g = random_plane(rng, h, w, 0.05, 0.95);
  f.b = random_plane(rng, h, w, 0.05, 0.95);
  return f;
}

Mask random_mask(Rng& rng, int h, int w) {
  Mask m(h, w);
  int count = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      m(y, x) = rng.uniform() < 0.5;
      count += m(y, x) ? 1 : 0;
    }
  for (int i = 0; count < 8 && i < h * w; ++i) {
    if (!m(i / w, i % w)) {
      m(i / w, i % w) = true;
      ++count;
    }
  }
  return m;
}

Vec random_vec(Rng& rng, int n, double lo, double hi) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

double inband_peak_power(const Psd& p) {
  double best = 0.0;
  for (int k = 0; k < p.size(); ++k) {
    if (p.freq_hz(k) >= kBandLowHz && p.freq_hz(k) <= kBandHighHz)
      best = std::max(best, p.power(k));
  }
  return best;
}

Trace map_g_row(const SpatioTemporalMap& map, int row) {
  Trace t;
  t.fps = map.fps;
  t.samples = map.channels[1].row(row).transpose();
  return t;
}

// ---------------------------------------------------------------------------
// Checks 1 and 8 share one pass over the corrupted corpus: the maps feed the
// SNR comparison, and the sampled weight fields feed the targeting check.
// ---------------------------------------------------------------------------

Verdict run_corpus_gain(Verdict& targeting_out) {
  Stopwatch watch;
  const std::vector<SynthConfig> configs = corpus_configs(60, 2026);

  std::vector<SpatioTemporalMap> weighted, baseline;
  std::vector<double> refs;
  weighted.reserve(configs.size());
  baseline.reserve(configs.size());

  int targeting_failures = 0;
  double worst_specular_margin = std::numeric_limits<double>::infinity();
  double worst_shadow_margin = std::numeric_limits<double>::infinity();

  for (const SynthConfig& config : configs) {
    const SynthClip clip = generate_clip(config);
    weighted.push_back(build_wmst_map(clip.video, clip.landmarks));
    baseline.push_back(build_mst_map(clip.video, clip.landmarks));
    refs.push_back(clip.truth.hr_bpm);

    // Fused-weight means inside and outside the injected corruption, sampled
    // every tenth frame over the ROI union.
    double sum_spec = 0.0, sum_shad = 0.0, sum_clean = 0.0;
    long n_spec = 0, n_shad = 0, n_clean = 0;
    const int h = clip.video.height();
    const int w = clip.video.width();
    for (int t = 0; t < clip.video.frame_count(); t += 10) {
      const Frame6 f6 = expand_frame(clip.video.frames[static_cast<std::size_t>(t)]);
      const HsvFrame hsv = rgb_to_hsv(clip.video.frames[static_cast<std::size_t>(t)]);
      const RoiMaskSet masks =
          rasterize_roi_masks(clip.landmarks.frames[static_cast<std::size_t>(t)], h, w);
      const Mask domain = union_mask(63, masks);
      const WeightField field = compute_weight_field(f6, hsv, domain);
      const Mask& spec = clip.truth.specular_masks[static_cast<std::size_t>(t)];
      const Mask& shad = clip.truth.shadow_masks[static_cast<std::size_t>(t)];
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!domain(y, x)) continue;
          const double wgt = field.fused(y, x);
          const bool in_spec = spec(y, x);
          const bool in_shad = shad(y, x);
          if (in_spec) {
            sum_spec += wgt;
            ++n_spec;
          }
          if (in_shad) {
            sum_shad += wgt;
            ++n_shad;
          }
          if (!in_spec && !in_shad) {
            sum_clean += wgt;
            ++n_clean;
          }
        }
      }
    }
    if (n_spec == 0 || n_shad == 0 || n_clean == 0) {
      ++targeting_failures;
      continue;
    }
    const double mean_spec = sum_spec / static_cast<double>(n_spec);
    const double mean_shad = sum_shad / static_cast<double>(n_shad);
    const double mean_clean = sum_clean / static_cast<double>(n_clean);
    worst_specular_margin = std::min(worst_specular_margin, mean_clean - mean_spec);
    worst_shadow_margin = std::min(worst_shadow_margin, mean_clean - mean_shad);
    if (!(mean_spec < mean_clean && mean_shad < mean_clean)) ++targeting_failures;
  }

  targeting_out.pass = targeting_failures == 0;
  targeting_out.detail =
      fmt("60/60 clips, clean-minus-corrupted fused-weight margins: specular >= %.3f, "
          "shadow >= %.3f",
          worst_specular_margin, worst_shadow_margin);
  if (targeting_failures > 0)
    targeting_out.detail = fmt("%d of 60 clips missed the strict ordering; %s",
                               targeting_failures, targeting_out.detail.c_str());

  const SnrComparison cmp = snr_compare(weighted, baseline, refs);
  double mean_delta = 0.0;
  int negatives = 0;
  for (double d : cmp.deltas) {
    mean_delta += d;
    if (d < 0.0) ++negatives;
  }
  mean_delta /= static_cast<double>(cmp.deltas.size());

  const double elapsed = watch.seconds();
  Verdict v;
  v.pass = mean_delta > 0.0 && cmp.t_test.p_value < 0.05 && cmp.wilcoxon.p_value < 0.05 &&
           elapsed <= 300.0;
  v.detail = fmt("n=60, mean dSNR %+.2f dB, t p=%.3g, signed-rank p=%.3g, %d/60 negative, "
                 "%.1f s (limit 300)",
                 mean_delta, cmp.t_test.p_value, cmp.wilcoxon.p_value, negatives, elapsed);
  return v;
}

// ---------------------------------------------------------------------------
// Check 2: heart-rate recovery on clean clips.
// ---------------------------------------------------------------------------

Verdict run_hr_recovery() {
  Stopwatch watch;
  const double tolerance_bpm = 0.88;
  double worst = 0.0;
  std::string worst_label = "none";

  const Method methods[6] = {Method::Ica, Method::Pca, Method::Chrom,
                             Method::Pbv, Method::Pos, Method::Lgi};
  int idx = 0;
  for (double hr : {48.0, 72.0, 95.0, 140.0}) {
    SynthConfig cfg;
    cfg.width = 48;
    cfg.height = 48;
    cfg.fps = 30.0;
    cfg.duration_s = 20.0;
    cfg.hr_bpm = hr;
    cfg.pulse_amplitude = 0.012;
    cfg.texture_amplitude = 0.02;
    cfg.seed = 2100 + static_cast<std::uint64_t>(idx++);
    const SynthClip clip = generate_clip(cfg);

    auto note = [&](double estimate, const char* label) {
      const double err = std::abs(estimate - hr);
      if (err > worst) {
        worst = err;
        worst_label = fmt("%s at %.0f bpm", label, hr);
      }
    };

    const SpatioTemporalMap map = build_wmst_map(clip.video, clip.landmarks);
    note(estimate_hr_bpm(psd(map_g_row(map, 62))), "map G row");

    const RgbTrace trace = spatial_rgb_trace(clip.video, clip.landmarks);
    for (Method m : methods) {
      const Trace pulse = extract(m, trace, 1);
      note(estimate_hr_bpm(psd(pulse)), method_name(m));
    }
  }

  const double elapsed = watch.seconds();
  Verdict v;
  v.pass = worst <= tolerance_bpm && elapsed <= 60.0;
  v.detail = fmt("4 rates x (map row + 6 extractors), max |error| %.3f bpm (%s), "
                 "tolerance %.2f, %.1f s (limit 60)",
                 worst, worst_label.c_str(), tolerance_bpm, elapsed);
  return v;
}

// ---------------------------------------------------------------------------
// Check 3: weight, fusion, pooling, and subband equations against the
// brute-force oracles, 200 seeded random cases per family.
// ---------------------------------------------------------------------------

Verdict run_component_oracles() {
  Stopwatch watch;
  const int cases = 200;
  const int h = 16, w = 16;
  double worst = 0.0;
  Rng root(3001);

  // Skin weight with the chroma fit.
  for (int k = 0; k < cases; ++k) {
    Rng rng = root.split("skin-" + std::to_string(k));
    const Frame6 f6 = expand_frame(random_rgb(rng, h, w));
    const Mask mask = random_mask(rng, h, w);
    const ChromaModel model = fit_chroma_model(f6, mask);
    const oracle::Gaussian2 ref = oracle::fit_uv(f6.u, f6.v, mask, ChromaModel::kEpsilon);
    track(worst, model.mean(0) - ref.mu);
    track(worst, model.mean(1) - ref.mv);
    track(worst, model.covariance(0, 0) - ref.cuu);
    track(worst, model.covariance(0, 1) - ref.cuv);
    track(worst, model.covariance(1, 1) - ref.cvv);
    const Plane weight = skin_weight(f6, model);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        track(worst, weight(y, x) - oracle::skin_weight(f6.u(y, x), f6.v(y, x), ref));
  }

  // Edge weight from the spatial subband magnitudes.
  for (int k = 0; k < cases; ++k) {
    Rng rng = root.split("edge-" + std::to_string(k));
    const Plane luma_plane = random_plane(rng, h, w, 0.0, 1.0);
    const Plane weight = edge_weight(luma_plane);
    const Plane hl = oracle::swt2d_hl(luma_plane);
    const Plane lh = oracle::swt2d_lh(luma_plane);
    const Plane hh = oracle::swt2d_hh(luma_plane);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double mag = std::sqrt(hl(y, x) * hl(y, x) + lh(y, x) * lh(y, x) +
                                     hh(y, x) * hh(y, x));
        track(worst, weight(y, x) - std::exp(-mag));
      }
  }

  // Reflection weight.
  for (int k = 0; k < cases; ++k) {
    Rng rng = root.split("reflection-" + std::to_string(k));
    const RgbFrame rgb = random_rgb(rng, h, w);
    const Plane weight = reflection_weight(rgb_to_hsv(rgb), 0.3);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        track(worst, weight(y, x) -
                         oracle::reflection_weight(rgb.r(y, x), rgb.g(y, x), rgb.b(y, x), 0.3));
  }

  // Shadow weight.
  for (int k = 0; k < cases; ++k) {
    Rng rng = root.split("shadow-" + std::to_string(k));
    const RgbFrame rgb = random_rgb(rng, h, w);
    const Plane weight = shadow_weight(luma(rgb.r, rgb.g, rgb.b), 0.7);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        track(worst, weight(y, x) -
                         oracle::shadow_weight(rgb.r(y, x), rgb.g(y, x), rgb.b(y, x), 0.7));
  }

  // Variance-adaptive fusion.
  for (int k = 0; k < cases; ++k) {
    Rng rng = root.split("fusion-" + std::to_string(k));
    Plane planes[4];
    for (auto& p : planes) p = random_plane(rng, h, w, 0.0, 1.0);
    const Mask mask = random_mask(rng, h, w);
    Eigen::Vector4d alpha;
    const Plane fused = aggregate_weights(planes[0], planes[1], planes[2], planes[3], mask, &alpha);
    double ref_alpha[4];
    const Plane ref = oracle::fuse_weights(planes, mask, ref_alpha);
    for (int i = 0; i < 4; ++i) track(worst, alpha(i) - ref_alpha[i]);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (mask(y, x)) track(worst, fused(y, x) - ref(y, x));
  }

  // Weighted pooling over all six channels.
  for (int k = 0; k < cases; ++k) {
    Rng rng = root.split("pool-" + std::to_string(k));
    const Frame6 f6 = expand_frame(random_rgb(rng, h, w));
    const Plane weights = random_plane(rng, h, w, 0.05, 2.0);
    const Mask mask = random_mask(rng, h, w);
    const Eigen::Array<double, 6, 1> pooled = weighted_pool(f6, weights, mask);
    for (int c = 0; c < 6; ++c)
      track(worst, pooled(c) - oracle::pooled_mean(f6.channel(c), weights, mask));
  }

  // Weighted and unweighted map rows rebuilt from scratch.
  {
    const FramePolygons layout = roi_layout(w, h);
    const RoiMaskSet masks = rasterize_roi_masks(layout, h, w);
    const Mask domain = union_mask(63, masks);
    const Plane unit = Plane::Ones(h, w);
    for (int k = 0; k < cases; ++k) {
      Rng rng = root.split("maprow-" + std::to_string(k));
      const int t_len = 8;
      VideoTensor video;
      video.fps = 20.0;
      for (int t = 0; t < t_len; ++t) video.frames.push_back(random_rgb(rng, h, w));
      RoiPolygonTrack trackpts;
      trackpts.width = w;
      trackpts.height = h;
      trackpts.frames.assign(t_len, layout);

      const SpatioTemporalMap wmst = build_wmst_map(video, trackpts);
      const SpatioTemporalMap mst = build_mst_map(video, trackpts);
      const int subsets[3] = {1, 1 + (k % 63), 63};
      for (int t = 0; t < t_len; ++t) {
        const Frame6 f6 = expand_frame(video.frames[static_cast<std::size_t>(t)]);
        const HsvFrame hsv = rgb_to_hsv(video.frames[static_cast<std::size_t>(t)]);
        const oracle::Gaussian2 fit = oracle::fit_uv(f6.u, f6.v, domain, ChromaModel::kEpsilon);
        Plane planes[4];
        planes[0].resize(h, w);
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x)
            planes[0](y, x) = oracle::skin_weight(f6.u(y, x), f6.v(y, x), fit);
        const Plane hl = oracle::swt2d_hl(f6.y);
        const Plane lh = oracle::swt2d_lh(f6.y);
        const Plane hh = oracle::swt2d_hh(f6.y);
        planes[1] = (-(hl.square() + lh.square() + hh.square()).sqrt()).exp();
        planes[2].resize(h, w);
        planes[3].resize(h, w);
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x) {
            const double r = video.frames[static_cast<std::size_t>(t)].r(y, x);
            const double g = video.frames[static_cast<std::size_t>(t)].g(y, x);
            const double b = video.frames[static_cast<std::size_t>(t)].b(y, x);
            planes[2](y, x) = oracle::reflection_weight(r, g, b, 0.3);
            planes[3](y, x) = oracle::shadow_weight(r, g, b, 0.7);
          }
        (void)hsv;
        double alpha[4];
        const Plane fused = oracle::fuse_weights(planes, domain, alpha);
        for (int s : subsets) {
          const Mask sub = union_mask(s, masks);
          for (int c = 0; c < 6; ++c) {
            track(worst, wmst.channels[static_cast<std::size_t>(c)](s - 1, t) -
                             oracle::pooled_mean(f6.channel(c), fused, sub));
            track(worst, mst.channels[static_cast<std::size_t>(c)](s - 1, t) -
                             oracle::pooled_mean(f6.channel(c), unit, sub));
          }
        }
      }
    }
  }

  // Spatio-temporal HHH subband and its pooled map rows.
  {
    const FramePolygons layout = roi_layout(w, h);
    const RoiMaskSet masks = rasterize_roi_masks(layout, h, w);
    for (int k = 0; k < cases; ++k) {
      Rng rng = root.split("hhh-" + std::to_string(k));
      // Raw subband on a random 16x16x16 stack.
      std::vector<Plane> stack(16);
      for (auto& p : stack) p = random_plane(rng, h, w, -1.0, 1.0);
      const std::vector<Plane> lib = swt3d_hhh(stack);
      const std::vector<Plane> ref = oracle::swt3d_hhh(stack);
      for (std::size_t t = 0; t < stack.size(); ++t)
        track(worst, (lib[t] - ref[t]).abs().maxCoeff());

      // Pooled rows of the motion map.
      const int t_len = 8;
      VideoTensor video;
      video.fps = 20.0;
      for (int t = 0; t < t_len; ++t) video.frames.push_back(random_rgb(rng, h, w));
      RoiPolygonTrack trackpts;
      trackpts.width = w;
      trackpts.height = h;
      trackpts.frames.assign(t_len, layout);
      const SpatioTemporalMap map = build_hhh_map(video, trackpts);

      const int channel = k % 6;
      std::vector<Plane> chan(static_cast<std::size_t>(t_len));
      for (int t = 0; t < t_len; ++t)
        chan[static_cast<std::size_t>(t)] =
            expand_frame(video.frames[static_cast<std::size_t>(t)]).channel(channel);
      const std::vector<Plane> hhh = oracle::swt3d_hhh(chan);
      const int subsets[3] = {1, 1 + (k % 63), 63};
      for (int s : subsets) {
        const Mask sub = union_mask(s, masks);
        for (int t = 0; t < t_len; ++t)
          track(worst, map.channels[static_cast<std::size_t>(channel)](s - 1, t) -
                           oracle::rms(hhh[static_cast<std::size_t>(t)], sub));
      }
    }
  }

  Verdict v;
  v.pass = worst <= 1e-9;
  v.detail = fmt("8 families x %d cases, max |deviation| %.2e (tolerance 1e-9), %.1f s",
                 cases, worst, watch.seconds());
  return v;
}

// ---------------------------------------------------------------------------
// Check 4: contrastive loss values and analytic gradients.
// ---------------------------------------------------------------------------

Psd random_spectrum(Rng& rng, int n) {
  Psd p;
  p.freq_hz = Vec::LinSpaced(n, kBandLowHz, kBandHighHz);
  p.power = random_vec(rng, n, 0.05, 1.0);
  p.power /= p.power.sum();
  p.f_lo = kBandLowHz;
  p.f_hi = kBandHighHz;
  p.normalized = true;
  return p;
}

Verdict run_loss_checks() {
  Stopwatch watch;
  Rng root(4001);

  // Identical negatives collapse the loss to log K exactly.
  double worst_logk = 0.0;
  for (int k_count : {1, 2, 5, 16, 63}) {
    Rng rng = root.split("logk-" + std::to_string(k_count));
    const Psd anchor = random_spectrum(rng, 24);
    const Psd other = random_spectrum(rng, 24);
    const std::vector<Psd> negatives(static_cast<std::size_t>(k_count), other);
    const LossReport rep = info_nce(anchor, {other}, negatives);
    track(worst_logk, rep.loss - std::log(static_cast<double>(k_count)));
  }

  // Analytic gradients against central differences at 100 seeded points.
  const int points = 100;
  const int n = 12;
  const double eps = 1e-6;
  double worst_rel = 0.0;
  auto rel_gap = [](double grad, double fd) {
    return std::abs(grad - fd) / std::max(std::abs(fd), 1e-3);
  };

  for (int k = 0; k < points; ++k) {
    Rng rng = root.split("fd-" + std::to_string(k));
    Psd anchor = random_spectrum(rng, n);
    std::vector<Psd> positives = {random_spectrum(rng, n), random_spectrum(rng, n)};
    std::vector<Psd> negatives = {random_spectrum(rng, n), random_spectrum(rng, n),
                                  random_spectrum(rng, n)};
    const LossReport rep = info_nce(anchor, positives, negatives);

    auto probe = [&](Vec& powers, const Vec& grad) {
      for (int j = 0; j < n; ++j) {
        const double save = powers(j);
        powers(j) = save + eps;
        const double up = info_nce(anchor, positives, negatives).loss;
        powers(j) = save - eps;
        const double down = info_nce(anchor, positives, negatives).loss;
        powers(j) = save;
        worst_rel = std::max(worst_rel, rel_gap(grad(j), (up - down) / (2.0 * eps)));
      }
    };
    probe(anchor.power, rep.grad_anchor);
    for (std::size_t i = 0; i < positives.size(); ++i)
      probe(positives[i].power, rep.grad_positives[i]);
    for (std::size_t i = 0; i < negatives.size(); ++i)
      probe(negatives[i].power, rep.grad_negatives[i]);

    // Pairwise pretraining loss; the pair is regenerated until every bin gap
    // clears the finite-difference step so the probe never crosses an L1 tie.
    Psd pred = random_spectrum(rng, n);
    Psd target = random_spectrum(rng, n);
    while ((pred.power - target.power).abs().minCoeff() < 1e-4)
      target = random_spectrum(rng, n);
    const PairLossReport pair = pretrain_loss(pred, target, 0.05);
    auto probe_pair = [&](Vec& powers, const Vec& grad) {
      for (int j = 0; j < n; ++j) {
        const double save = powers(j);
        powers(j) = save + eps;
        const double up = pretrain_loss(pred, target, 0.05).loss;
        powers(j) = save - eps;
        const double down = pretrain_loss(pred, target, 0.05).loss;
        powers(j) = save;
        worst_rel = std::max(worst_rel, rel_gap(grad(j), (up - down) / (2.0 * eps)));
      }
    };
    probe_pair(pred.power, pair.grad_pred);
    probe_pair(target.power, pair.grad_target);
  }

  Verdict v;
  v.pass = worst_logk <= 1e-12 && worst_rel <= 1e-5;
  v.detail = fmt("log-K gap %.2e (tolerance 1e-12); %d points, max gradient gap %.2e "
                 "(tolerance 1e-5), %.1f s",
                 worst_logk, points, worst_rel, watch.seconds());
  return v;
}

// ---------------------------------------------------------------------------
// Check 5: subband transform invariants and the static-clip zero map.
// ---------------------------------------------------------------------------

Vec rotate_vec(const Vec& x, int s) {
  const int n = static_cast<int>(x.size());
  Vec out(n);
  for (int i = 0; i < n; ++i) out(i) = x((i + s) % n);
  return out;
}

Plane rotate_plane(const Plane& p, int sy, int sx) {
  const int h = static_cast<int>(p.rows());
  const int w = static_cast<int>(p.cols());
  Plane out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out(y, x) = p((y + sy) % h, (x + sx) % w);
  return out;
}

Verdict run_wavelet_invariants() {
  Stopwatch watch;
  double worst = 0.0;
  Rng root(5001);
  const int trials = 25;

  for (int k = 0; k < trials; ++k) {
    Rng rng = root.split("trial-" + std::to_string(k));
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);

    // 1-D: linearity, circular shift equivariance, constant annihilation.
    {
      const int n = 8 + static_cast<int>(rng.uniform_int(0, 25));
      const Vec x = random_vec(rng, n, -1.0, 1.0);
      const Vec y = random_vec(rng, n, -1.0, 1.0);
      Vec ax1, dx1, ay1, dy1, am, dm;
      haar_swt1d(x, ax1, dx1);
      haar_swt1d(y, ay1, dy1);
      const Vec mix = a * x + b * y;
      haar_swt1d(mix, am, dm);
      track(worst, (am - (a * ax1 + b * ay1)).abs().maxCoeff());
      track(worst, (dm - (a * dx1 + b * dy1)).abs().maxCoeff());

      const int s = 1 + static_cast<int>(rng.uniform_int(0, n - 2));
      Vec ar, dr;
      haar_swt1d(Vec(rotate_vec(x, s)), ar, dr);
      track(worst, (ar - rotate_vec(ax1, s)).abs().maxCoeff());
      track(worst, (dr - rotate_vec(dx1, s)).abs().maxCoeff());

      Vec ac, dc;
      haar_swt1d(Vec(Vec::Constant(n, 0.73)), ac, dc);
      track(worst, dc.abs().maxCoeff());
    }

    // 2-D: the same three properties over all subbands.
    {
      const int h = 8 + static_cast<int>(rng.uniform_int(0, 12));
      const int w = 8 + static_cast<int>(rng.uniform_int(0, 12));
      const Plane p = random_plane(rng, h, w, -1.0, 1.0);
      const Plane q = random_plane(rng, h, w, -1.0, 1.0);
      const SwtSubbands2D sp = swt2d(p);
      const SwtSubbands2D sq = swt2d(q);
      const SwtSubbands2D sm = swt2d(Plane(a * p + b * q));
      track(worst, (sm.ll - (a * sp.ll + b * sq.ll)).abs().maxCoeff());
      track(worst, (sm.lh - (a * sp.lh + b * sq.lh)).abs().maxCoeff());
      track(worst, (sm.hl - (a * sp.hl + b * sq.hl)).abs().maxCoeff());
      track(worst, (sm.hh - (a * sp.hh + b * sq.hh)).abs().maxCoeff());

      const int sy = 1 + static_cast<int>(rng.uniform_int(0, h - 2));
      const int sx = 1 + static_cast<int>(rng.uniform_int(0, w - 2));
      const SwtSubbands2D sr = swt2d(rotate_plane(p, sy, sx));
      track(worst, (sr.ll - rotate_plane(sp.ll, sy, sx)).abs().maxCoeff());
      track(worst, (sr.lh - rotate_plane(sp.lh, sy, sx)).abs().maxCoeff());
      track(worst, (sr.hl - rotate_plane(sp.hl, sy, sx)).abs().maxCoeff());
      track(worst, (sr.hh - rotate_plane(sp.hh, sy, sx)).abs().maxCoeff());

      const SwtSubbands2D sc = swt2d(Plane(Plane::Constant(h, w, -0.41)));
      track(worst, sc.lh.abs().maxCoeff());
      track(worst, sc.hl.abs().maxCoeff());
      track(worst, sc.hh.abs().maxCoeff());
    }

    // 3-D HHH: linearity, temporal shift equivariance, constant annihilation.
    {
      const int t_len = 4 + static_cast<int>(rng.uniform_int(0, 6));
      const int h = 6 + static_cast<int>(rng.uniform_int(0, 6));
      const int w = 6 + static_cast<int>(rng.uniform_int(0, 6));
      std::vector<Plane> sx(static_cast<std::size_t>(t_len)), sy(static_cast<std::size_t>(t_len)),
          mix(static_cast<std::size_t>(t_len));
      for (int t = 0; t < t_len; ++t) {
        sx[static_cast<std::size_t>(t)] = random_plane(rng, h, w, -1.0, 1.0);
        sy[static_cast<std::size_t>(t)] = random_plane(rng, h, w, -1.0, 1.0);
        mix[static_cast<std::size_t>(t)] =
            a * sx[static_cast<std::size_t>(t)] + b * sy[static_cast<std::size_t>(t)];
      }
      const std::vector<Plane> hx = swt3d_hhh(sx);
      const std::vector<Plane> hy = swt3d_hhh(sy);
      const std::vector<Plane> hm = swt3d_hhh(mix);
      for (int t = 0; t < t_len; ++t)
        track(worst, (hm[static_cast<std::size_t>(t)] -
                      (a * hx[static_cast<std::size_t>(t)] + b * hy[static_cast<std::size_t>(t)]))
                         .abs()
                         .maxCoeff());

      const int st = 1 + static_cast<int>(rng.uniform_int(0, t_len - 2));
      std::vector<Plane> shifted(static_cast<std::size_t>(t_len));
      for (int t = 0; t < t_len; ++t)
        shifted[static_cast<std::size_t>(t)] = sx[static_cast<std::size_t>((t + st) % t_len)];
      const std::vector<Plane> hs = swt3d_hhh(shifted);
      for (int t = 0; t < t_len; ++t)
        track(worst, (hs[static_cast<std::size_t>(t)] -
                      hx[static_cast<std::size_t>((t + st) % t_len)])
                         .abs()
                         .maxCoeff());

      const std::vector<Plane> flat(static_cast<std::size_t>(t_len),
                                    Plane::Constant(h, w, 0.27));
      for (const Plane& plane : swt3d_hhh(flat)) track(worst, plane.abs().maxCoeff());
    }
  }

  // A static clip maps to exactly zero.
  Rng rng = root.split("static");
  const int w = 36, h = 32, t_len = 12;
  VideoTensor video;
  video.fps = 20.0;
  const RgbFrame still = random_rgb(rng, h, w);
  video.frames.assign(t_len, still);
  RoiPolygonTrack trackpts;
  trackpts.width = w;
  trackpts.height = h;
  trackpts.frames.assign(t_len, roi_layout(w, h));
  const SpatioTemporalMap map = build_hhh_map(video, trackpts);
  double static_max = 0.0;
  for (const auto& ch : map.channels) static_max = std::max(static_max, ch.abs().maxCoeff());

  Verdict v;
  v.pass = worst <= 1e-12 && static_max == 0.0;
  v.detail = fmt("%d trials x {1-D, 2-D, 3-D} x {linearity, shift, constant}, max residual "
                 "%.2e (tolerance 1e-12); static-clip map max %.1f, %.1f s",
                 trials, worst, static_max, watch.seconds());
  return v;
}

// ---------------------------------------------------------------------------
// Check 6: the motion map must not inherit the pulse.
// ---------------------------------------------------------------------------

Verdict run_pulse_rejection() {
  Stopwatch watch;
  SynthConfig cfg;
  cfg.width = 48;
  cfg.height = 48;
  cfg.fps = 30.0;
  cfg.duration_s = 20.0;
  cfg.hr_bpm = 72.0;
  cfg.pulse_amplitude = 0.012;
  cfg.texture_amplitude = 0.0;  // pulse is the only temporal variation
  cfg.seed = 60;
  const SynthClip clip = generate_clip(cfg);

  const SpatioTemporalMap wmst = build_wmst_map(clip.video, clip.landmarks);
  const SpatioTemporalMap hhh = build_hhh_map(clip.video, clip.landmarks);

  const double pulse_peak = inband_peak_power(psd(map_g_row(wmst, 62)));
  const double motion_peak = inband_peak_power(psd(map_g_row(hhh, 62)));

  const double suppression_db =
      motion_peak > 0.0 ? 10.0 * std::log10(pulse_peak / motion_peak)
                        : std::numeric_limits<double>::infinity();

  Verdict v;
  v.pass = pulse_peak > 0.0 && motion_peak <= 0.01 * pulse_peak;
  v.detail = fmt("in-band peak power: pulse map %.3e, motion map %.3e, suppression %s dB "
                 "(needs >= 20), %.1f s",
                 pulse_peak, motion_peak,
                 std::isinf(suppression_db) ? "inf" : fmt("%.1f", suppression_db).c_str(),
                 watch.seconds());
  return v;
}

// ---------------------------------------------------------------------------
// Check 7: statistical machinery against frozen references and exact
// enumeration.
// ---------------------------------------------------------------------------

Verdict run_stat_references() {
  Stopwatch watch;
  double worst_fixture = 0.0;
  for (int k = 0; k < 50; ++k) {
    const frozen::TCase& c = frozen::kTCases[k];
    const TestReport report = paired_t_one_sided(frozen::formula_dataset(k, c.n));
    track(worst_fixture, report.statistic - c.t);
    track(worst_fixture, report.p_value - c.p);
  }

  double worst_exact = 0.0;
  int exact_count = 0;
  Rng root(7001);
  for (int n = 6; n <= 12; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      Rng rng = root.split(fmt("exact-%d-%d", n, trial));
      std::vector<double> deltas(static_cast<std::size_t>(n));
      Vec v(n);
      for (int i = 0; i < n; ++i) {
        double x = rng.normal() + 0.3;
        if (x == 0.0) x = 0.25;
        deltas[static_cast<std::size_t>(i)] = x;
        v(i) = x;
      }
      const double exact = oracle::wilcoxon_exact_p(deltas);
      const TestReport report = wilcoxon_one_sided(v);
      track(worst_exact, report.p_value - exact);
      ++exact_count;
    }
  }

  Verdict v;
  v.pass = worst_fixture <= 1e-9 && worst_exact <= 0.01;
  v.detail = fmt("50 fixtures, max |gap| %.2e (tolerance 1e-9); %d enumerated rank tests, "
                 "max |p gap| %.4f (tolerance 0.01), %.1f s",
                 worst_fixture, exact_count, worst_exact, watch.seconds());
  return v;
}

// ---------------------------------------------------------------------------
// Check 9: repeated CLI invocations produce byte-identical artifacts.
// ---------------------------------------------------------------------------

bool read_bytes(const std::filesystem::path& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

Verdict run_cli_determinism(const std::string& cli) {
  Stopwatch watch;
  if (cli.empty()) return {false, "no CLI binary path supplied as argv[1]"};

  namespace fs = std::filesystem;
  const fs::path base = "acceptance_cli";
  std::error_code ec;
  fs::remove_all(base, ec);

  const std::string quoted = "'" + cli + "'";
  for (const char* run : {"a", "b"}) {
    const fs::path dir = base / run;
    fs::create_directories(dir);
    const std::string d = dir.string();
    const std::string commands[] = {
        quoted + " synth --out " + d + "/clip --width 48 --height 48 --fps 30 --duration 6" +
            " --hr 80 --amplitude 0.012 --texture 0.02 --specular-count 2" +
            " --specular-radius 3 --specular-intensity 0.5 --shadow-depth 0.5" +
            " --shadow-drift 3 --jitter-sigma 0.5 --noise-sigma 0.008 --seed 7" +
            " > " + d + "/synth.log",
        quoted + " map --video " + d + "/clip.rpgv --landmarks " + d + "/clip.landmarks.json" +
            " --kind wmst --out " + d + "/map.rpgm > " + d + "/map.log",
        quoted + " trad --video " + d + "/clip.rpgv --landmarks " + d + "/clip.landmarks.json" +
            " --method pos --out " + d + "/pulse.csv > " + d + "/trad.log",
        quoted + " compare --count 5 --seed 11 --out-csv " + d + "/compare.csv > " + d +
            "/compare.log",
        quoted + " plot --kind line --in " + d + "/pulse.csv --out " + d + "/pulse.svg > " + d +
            "/plot_line.log",
        quoted + " plot --kind violin --in " + d + "/compare.csv --column 3 --out " + d +
            "/delta.svg > " + d + "/plot_violin.log",
    };
    for (const std::string& cmd : commands) {
      if (std::system(cmd.c_str()) != 0)
        return {false, fmt("CLI invocation exited nonzero: %s", cmd.c_str())};
    }
  }

  const char* artifacts[] = {"clip.rpgv",   "clip.landmarks.json", "clip.bvp.csv",
                             "clip.specular.rpgv", "clip.shadow.rpgv", "map.rpgm",
                             "pulse.csv",   "compare.csv",         "pulse.svg",
                             "delta.svg"};
  int compared = 0;
  for (const char* name : artifacts) {
    std::string bytes_a, bytes_b;
    if (!read_bytes(base / "a" / name, bytes_a) || !read_bytes(base / "b" / name, bytes_b))
      return {false, fmt("missing artifact: %s", name)};
    if (bytes_a != bytes_b) return {false, fmt("artifact differs between runs: %s", name)};
    ++compared;
  }

  Verdict v;
  v.pass = true;
  v.detail = fmt("%d artifacts byte-identical across two full pipeline runs, %.1f s",
                 compared, watch.seconds());
  return v;
}

Verdict guarded(const std::function<Verdict()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {false, fmt("threw: %s", e.what())};
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  const std::string cli = argc > 1 ? argv[1] : "";

  const char* names[9] = {
      "corpus-snr-gain",          "clean-clip-hr-recovery",  "weight-and-pooling-oracles",
      "loss-values-and-gradients", "wavelet-invariants",      "motion-map-pulse-rejection",
      "statistical-references",   "corruption-weight-targeting", "cli-byte-determinism",
  };

  std::array<Verdict, 9> verdicts;
  Verdict targeting;
  verdicts[0] = guarded([&] { return run_corpus_gain(targeting); });
  verdicts[7] = targeting.detail.empty()
                    ? Verdict{false, "corpus pass did not complete"}
                    : targeting;
  verdicts[1] = guarded(run_hr_recovery);
  verdicts[2] = guarded(run_component_oracles);
  verdicts[3] = guarded(run_loss_checks);
  verdicts[4] = guarded(run_wavelet_invariants);
  verdicts[5] = guarded(run_pulse_rejection);
  verdicts[6] = guarded(run_stat_references);
  verdicts[8] = guarded([&] { return run_cli_determinism(cli); });

  int failures = 0;
  for (int i = 0; i < 9; ++i) {
    const Verdict& v = verdicts[static_cast<std::size_t>(i)];
    std::printf("check %d %-29s %s  %s\n", i + 1, names[i], v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    if (!v.pass) ++failures;
  }
  std::printf("%d/9 checks passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
