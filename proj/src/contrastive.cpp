#include "rppg/contrastive.hpp"

#include "rppg/rng.hpp"
#include "rppg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rppg {
namespace {

void require_same_grid(const Psd& a, const Psd& b) {
  if (a.size() != b.size()) throw NumericError("spectra live on different grids (size)");
  for (int k = 0; k < a.size(); ++k) {
    if (std::abs(a.freq_hz(k) - b.freq_hz(k)) > 1e-9) {
      throw NumericError("spectra live on different grids (frequency axis)");
    }
  }
}

struct Similarity {
  double r = 0.0;
  Vec dr_da;
  Vec dr_db;
};

/// r plus its gradient with respect to both inputs.
Similarity pearson_with_grad(const Vec& a, const Vec& b) {
  const Vec ac = a - a.mean();
  const Vec bc = b - b.mean();
  const double sab = (ac * bc).sum();
  const double sa = std::sqrt(ac.square().sum());
  const double sb = std::sqrt(bc.square().sum());
  if (!(sa > 0.0) || !(sb > 0.0)) throw NumericError("pearson: zero-variance spectrum");
  Similarity sim;
  sim.r = sab / (sa * sb);
  // d r / d a_j = (bc_j / sb - r * ac_j / sa) / sa; the centering terms cancel
  // because bc and ac both sum to zero.
  sim.dr_da = (bc / sb - sim.r * ac / sa) / sa;
  sim.dr_db = (ac / sa - sim.r * bc / sb) / sb;
  return sim;
}

/// h(r) and dh/dr, zero slope once the clamp saturates.
void arctanh_with_grad(double r, double& h, double& dh_dr) {
  if (r >= kSimilarityClamp) {
    h = 2.0 * std::atanh(kSimilarityClamp);
    dh_dr = 0.0;
  } else if (r <= -kSimilarityClamp) {
    h = -2.0 * std::atanh(kSimilarityClamp);
    dh_dr = 0.0;
  } else {
    h = 2.0 * std::atanh(r);
    dh_dr = 2.0 / (1.0 - r * r);
  }
}

}  // namespace

double pearson_similarity(const Psd& a, const Psd& b) {
  require_same_grid(a, b);
  return pearson_with_grad(a.power, b.power).r;
}

double arctanh_similarity(double r) {
  const double clamped = std::clamp(r, -kSimilarityClamp, kSimilarityClamp);
  return 2.0 * std::atanh(clamped);
}

LossReport info_nce(const Psd& anchor, const std::vector<Psd>& positives,
                    const std::vector<Psd>& negatives) {
  if (positives.empty()) throw NumericError("info_nce: no positives");
  if (negatives.empty()) throw NumericError("info_nce: no negatives");
  for (const auto& p : positives) require_same_grid(anchor, p);
  for (const auto& n : negatives) require_same_grid(anchor, n);

  const std::size_t np = positives.size();
  const std::size_t nn = negatives.size();

  std::vector<Similarity> pos_sim(np), neg_sim(nn);
  std::vector<double> pos_h(np), pos_dh(np), neg_h(nn), neg_dh(nn);
  for (std::size_t i = 0; i < np; ++i) {
    pos_sim[i] = pearson_with_grad(anchor.power, positives[i].power);
    arctanh_with_grad(pos_sim[i].r, pos_h[i], pos_dh[i]);
  }
  for (std::size_t k = 0; k < nn; ++k) {
    neg_sim[k] = pearson_with_grad(anchor.power, negatives[k].power);
    arctanh_with_grad(neg_sim[k].r, neg_h[k], neg_dh[k]);
  }

  const double h_max = *std::max_element(neg_h.begin(), neg_h.end());
  double exp_sum = 0.0;
  for (std::size_t k = 0; k < nn; ++k) exp_sum += std::exp(neg_h[k] - h_max);
  const double log_sum = h_max + std::log(exp_sum);

  LossReport report;
  const double mean_pos_h = std::accumulate(pos_h.begin(), pos_h.end(), 0.0) /
                            static_cast<double>(np);
  report.loss = -mean_pos_h + log_sum;

  // d loss / d h+_i = -1/P; d loss / d h-_k = softmax over negatives.
  report.grad_anchor = Vec::Zero(anchor.size());
  report.grad_positives.resize(np);
  report.grad_negatives.resize(nn);
  for (std::size_t i = 0; i < np; ++i) {
    const double dl_dh = -1.0 / static_cast<double>(np);
    const double chain = dl_dh * pos_dh[i];
    report.grad_positives[i] = chain * pos_sim[i].dr_db;
    report.grad_anchor += chain * pos_sim[i].dr_da;
  }
  for (std::size_t k = 0; k < nn; ++k) {
    const double softmax = std::exp(neg_h[k] - log_sum);
    const double chain = softmax * neg_dh[k];
    report.grad_negatives[k] = chain * neg_sim[k].dr_db;
    report.grad_anchor += chain * neg_sim[k].dr_da;
  }
  return report;
}

PairLossReport pretrain_loss(const Psd& pred, const Psd& target, double lambda) {
  require_same_grid(pred, target);
  const Vec diff = pred.power - target.power;
  const Similarity sim = pearson_with_grad(pred.power, target.power);

  PairLossReport report;
  report.loss = diff.abs().sum() + lambda * (1.0 - sim.r);
  const Vec sign = diff.sign();
  report.grad_pred = sign - lambda * sim.dr_da;
  report.grad_target = -sign - lambda * sim.dr_db;
  return report;
}

SpatioTemporalMap temporal_resize(const SpatioTemporalMap& map, double factor) {
  if (!(factor >= 0.5 && factor <= 2.0)) {
    throw NumericError("temporal_resize: factor outside [0.5, 2]");
  }
  const int t_in = map.frame_count();
  const int t_out = static_cast<int>(std::lround(t_in * factor));
  if (t_out < 4) throw NumericError("temporal_resize: result shorter than 4 frames");
  if (t_out == t_in) return map;
  SpatioTemporalMap out = SpatioTemporalMap::zeros(t_out, map.fps);
  out.fps = map.fps * static_cast<double>(t_out - 1) / static_cast<double>(t_in - 1);
  const double step = static_cast<double>(t_in - 1) / static_cast<double>(t_out - 1);
  for (int c = 0; c < SpatioTemporalMap::kChannels; ++c) {
    for (int j = 0; j < t_out; ++j) {
      const double x = j * step;
      const int lo = std::min(static_cast<int>(x), t_in - 2);
      const double frac = x - lo;
      out.channels[c].col(j) =
          (1.0 - frac) * map.channels[c].col(lo) + frac * map.channels[c].col(lo + 1);
    }
  }
  return out;
}

SpatioTemporalMap roi_shuffle(const SpatioTemporalMap& map, std::uint64_t seed) {
  std::array<int, SpatioTemporalMap::kRows> perm;
  for (int i = 0; i < SpatioTemporalMap::kRows; ++i) perm[i] = i;
  Rng rng(seed);
  for (int i = SpatioTemporalMap::kRows - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_int(0, i));
    std::swap(perm[i], perm[j]);
  }
  SpatioTemporalMap out = SpatioTemporalMap::zeros(map.frame_count(), map.fps);
  for (int c = 0; c < SpatioTemporalMap::kChannels; ++c) {
    for (int r = 0; r < SpatioTemporalMap::kRows; ++r) {
      out.channels[c].row(r) = map.channels[c].row(perm[r]);
    }
  }
  return out;
}

Psd map_psd(const SpatioTemporalMap& map, double fps_override, int n_fft) {
  Trace reduced;
  reduced.fps = fps_override > 0.0 ? fps_override : map.fps;
  reduced.samples = Vec::Zero(map.frame_count());
  for (int c = 0; c < SpatioTemporalMap::kChannels; ++c) {
    reduced.samples += map.channels[c].colwise().mean().transpose();
  }
  reduced.samples /= static_cast<double>(SpatioTemporalMap::kChannels);
  const Trace banded = bandpass(reduced);
  return normalize_psd(psd(banded, n_fft));
}

std::vector<Psd> make_negative_pool(const std::vector<const SpatioTemporalMap*>& foreign,
                                    const SpatioTemporalMap& anchor_hhh, double anchor_fps,
                                    std::uint64_t seed) {
  if (foreign.empty()) throw NumericError("make_negative_pool: no foreign maps");
  int n_fft = default_nfft(anchor_hhh.frame_count());
  for (const auto* m : foreign) {
    n_fft = std::max(n_fft, default_nfft(m->frame_count()));
    n_fft = std::max(n_fft,
                     default_nfft(static_cast<int>(std::lround(m->frame_count() * 2.0))));
  }
  Rng rng(seed);
  std::vector<Psd> pool;
  pool.reserve(2 * foreign.size() + 1);
  for (const auto* m : foreign) {
    pool.push_back(map_psd(*m, anchor_fps, n_fft));
    const double factor = rng.uniform(0.5, 2.0);
    pool.push_back(map_psd(temporal_resize(*m, factor), anchor_fps, n_fft));
  }
  pool.push_back(map_psd(anchor_hhh, anchor_fps, n_fft));
  return pool;
}

}  // namespace rppg
