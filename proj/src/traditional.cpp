#include "rppg/traditional.hpp"

#include "rppg/colorspace.hpp"
#include "rppg/reliability.hpp"
#include "rppg/rng.hpp"
#include "rppg/roi_geometry.hpp"
#include "rppg/spectral.hpp"

#include <cmath>
#include <vector>

namespace rppg {
namespace {

struct WindowPlan {
  std::vector<int> starts;
  int length = 0;
};

WindowPlan plan_windows(int t_len, double fps) {
  if (t_len < 2 || !(fps > 0.0)) throw NumericError("window plan: invalid trace");
  int len = static_cast<int>(std::lround(1.6 * fps));
  len += len & 1;
  if (len < 4) len = 4;
  if (len > t_len) len = t_len - (t_len & 1);
  WindowPlan plan;
  plan.length = len;
  const int hop = len / 2;
  int start = 0;
  for (; start + len <= t_len; start += hop) plan.starts.push_back(start);
  const int covered = plan.starts.empty() ? 0 : plan.starts.back() + len;
  if (covered < t_len) plan.starts.push_back(t_len - len);
  return plan;
}

Eigen::ArrayXd hann(int len) {
  Eigen::ArrayXd w(len);
  for (int n = 0; n < len; ++n) {
    w(n) = 0.5 * (1.0 - std::cos(2.0 * M_PI * n / len));
  }
  return w;
}

void require_length(const RgbTrace& trace) {
  if (trace.size() < static_cast<int>(2.0 * trace.fps)) {
    throw NumericError("rgb trace shorter than 2 seconds");
  }
  if (!(trace.fps > 0.0)) throw NumericError("rgb trace fps must be positive");
}

Trace finalize(Eigen::ArrayXd samples, double fps) {
  if (!samples.isFinite().all()) throw NumericError("extractor produced non-finite samples");
  samples -= samples.mean();
  Trace out;
  out.fps = fps;
  out.samples = samples;
  return out;
}

/// Columns mean-normalized (C / mean) over the given rows; zero mean maps to
/// an all-ones column being impossible for valid [0,1] data, so it errors.
Eigen::MatrixX3d mean_normalize(const Eigen::MatrixX3d& block) {
  Eigen::MatrixX3d out(block.rows(), 3);
  for (int c = 0; c < 3; ++c) {
    const double mu = block.col(c).mean();
    if (!(std::abs(mu) > 0.0)) throw NumericError("mean-normalization over a zero-mean channel");
    out.col(c) = block.col(c) / mu;
  }
  return out;
}

double stddev(const Eigen::ArrayXd& x) {
  const double mu = x.mean();
  return std::sqrt((x - mu).square().mean());
}

/// Index of the candidate whose PSD is most concentrated: largest ratio of
/// the in-band peak bin to the total power. Ties go to the lower index.
int pick_by_band_concentration(const std::vector<Eigen::ArrayXd>& candidates, double fps) {
  int best = -1;
  double best_ratio = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    Trace t;
    t.fps = fps;
    t.samples = candidates[i];
    const Psd spectrum = psd(t);
    const double total = spectrum.power.sum();
    if (!(total > 0.0)) continue;
    double peak = 0.0;
    for (int k = 0; k < spectrum.size(); ++k) {
      const double f = spectrum.freq_hz(k);
      if (f >= spectrum.f_lo && f <= spectrum.f_hi) peak = std::max(peak, spectrum.power(k));
    }
    const double ratio = peak / total;
    if (ratio > best_ratio + 1e-15) {
      best_ratio = ratio;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw NumericError("component selection: all candidates have zero power");
  return best;
}

/// Flips the component so the extraction vector's largest-magnitude entry is
/// positive; resolves the inherent sign ambiguity deterministically.
void normalize_sign(Eigen::Vector3d& vec, Eigen::ArrayXd& component) {
  int arg = 0;
  vec.cwiseAbs().maxCoeff(&arg);
  if (vec(arg) < 0.0) {
    vec = -vec;
    component = -component;
  }
}

Eigen::Matrix3d inverse_sqrt_spd(const Eigen::Matrix3d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m);
  Eigen::Vector3d inv_sqrt = eig.eigenvalues().cwiseMax(1e-18).cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

Eigen::Vector3d default_pbv_direction() {
  Eigen::Vector3d v(0.33, 0.78, 0.53);
  return v / v.norm();
}

RgbTrace spatial_rgb_trace(const VideoTensor& video, const RoiPolygonTrack& landmarks) {
  const int t_len = video.frame_count();
  if (t_len == 0) throw NumericError("spatial_rgb_trace: empty video");
  if (landmarks.frame_count() != t_len) {
    throw NumericError("spatial_rgb_trace: landmark frame count does not match video");
  }
  RgbTrace out;
  out.fps = video.fps;
  out.values.resize(t_len, 3);
  for (int t = 0; t < t_len; ++t) {
    const RoiMaskSet masks =
        rasterize_roi_masks(landmarks.frames[t], video.height(), video.width());
    const Mask domain = union_mask(63, masks);
    double sr = 0.0, sg = 0.0, sb = 0.0;
    std::int64_t n = 0;
    const RgbFrame& f = video.frames[t];
    for (Eigen::Index j = 0; j < domain.cols(); ++j) {
      for (Eigen::Index i = 0; i < domain.rows(); ++i) {
        if (!domain(i, j)) continue;
        sr += f.r(i, j);
        sg += f.g(i, j);
        sb += f.b(i, j);
        ++n;
      }
    }
    out.values(t, 0) = sr / static_cast<double>(n);
    out.values(t, 1) = sg / static_cast<double>(n);
    out.values(t, 2) = sb / static_cast<double>(n);
  }
  return out;
}

Trace chrom(const RgbTrace& trace) {
  require_length(trace);
  const int t_len = trace.size();
  const WindowPlan plan = plan_windows(t_len, trace.fps);
  const Eigen::ArrayXd taper = hann(plan.length);
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(t_len);
  for (const int start : plan.starts) {
    const Eigen::MatrixX3d block = trace.values.middleRows(start, plan.length);
    const Eigen::MatrixX3d cn = mean_normalize(block);
    const Eigen::ArrayXd xs = 3.0 * cn.col(0).array() - 2.0 * cn.col(1).array();
    const Eigen::ArrayXd ys =
        1.5 * cn.col(0).array() + cn.col(1).array() - 1.5 * cn.col(2).array();
    const double sy = stddev(ys);
    const double alpha = sy > 0.0 ? stddev(xs) / sy : 0.0;
    Eigen::ArrayXd s = xs - alpha * ys;
    s -= s.mean();
    out.segment(start, plan.length) += s * taper;
  }
  Trace combined;
  combined.fps = trace.fps;
  combined.samples = out;
  return finalize(bandpass(combined).samples, trace.fps);
}

Trace pos(const RgbTrace& trace) {
  require_length(trace);
  const int t_len = trace.size();
  const WindowPlan plan = plan_windows(t_len, trace.fps);
  const Eigen::ArrayXd taper = hann(plan.length);
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(t_len);
  for (const int start : plan.starts) {
    const Eigen::MatrixX3d block = trace.values.middleRows(start, plan.length);
    const Eigen::MatrixX3d cn = mean_normalize(block);
    const Eigen::ArrayXd s1 = cn.col(1).array() - cn.col(2).array();
    const Eigen::ArrayXd s2 = cn.col(1).array() + cn.col(2).array() - 2.0 * cn.col(0).array();
    const double sigma2 = stddev(s2);
    const double ratio = sigma2 > 0.0 ? stddev(s1) / sigma2 : 0.0;
    Eigen::ArrayXd h = s1 + ratio * s2;
    h -= h.mean();
    out.segment(start, plan.length) += h * taper;
  }
  return finalize(out, trace.fps);
}

Trace pbv(const RgbTrace& trace, const Eigen::Vector3d& pbv_direction) {
  require_length(trace);
  const Eigen::MatrixX3d cn = mean_normalize(trace.values);
  Eigen::MatrixX3d centered = cn;
  for (int c = 0; c < 3; ++c) centered.col(c).array() -= cn.col(c).mean();
  Eigen::Matrix3d cov =
      centered.transpose() * centered / static_cast<double>(centered.rows());
  cov += 1e-9 * Eigen::Matrix3d::Identity();
  const Eigen::Vector3d dir = pbv_direction / pbv_direction.norm();
  const Eigen::Vector3d w = cov.ldlt().solve(dir);
  const double scale = dir.dot(w);
  if (!(std::abs(scale) > 0.0)) throw NumericError("pbv: degenerate covariance");
  const Eigen::ArrayXd s = (centered * w).array() / scale;
  return finalize(s, trace.fps);
}

Trace pbv(const RgbTrace& trace) { return pbv(trace, default_pbv_direction()); }

Trace lgi(const RgbTrace& trace) {
  require_length(trace);
  const Eigen::MatrixX3d m = mean_normalize(trace.values);
  Eigen::JacobiSVD<Eigen::MatrixX3d> svd(m, Eigen::ComputeThinV);
  if (!(svd.singularValues()(0) > 0.0)) throw NumericError("lgi: rank-0 trace");
  const Eigen::Matrix3d v = svd.matrixV();
  std::vector<Eigen::ArrayXd> candidates;
  std::vector<Eigen::Vector3d> directions;
  for (int i = 1; i < 3; ++i) {
    candidates.push_back((m * v.col(i)).array());
    directions.push_back(v.col(i));
  }
  // In-band total power selects between the two residual directions.
  int best = 0;
  double best_power = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    Eigen::ArrayXd centered = candidates[i] - candidates[i].mean();
    if (centered.abs().maxCoeff() == 0.0) continue;
    Trace t;
    t.fps = trace.fps;
    t.samples = centered;
    const Psd spectrum = psd(t);
    double in_band = 0.0;
    for (int k = 0; k < spectrum.size(); ++k) {
      const double f = spectrum.freq_hz(k);
      if (f >= spectrum.f_lo && f <= spectrum.f_hi) in_band += spectrum.power(k);
    }
    if (in_band > best_power + 1e-18) {
      best_power = in_band;
      best = static_cast<int>(i);
    }
  }
  Eigen::Vector3d dir = directions[best];
  Eigen::ArrayXd component = candidates[best];
  normalize_sign(dir, component);
  return finalize(component, trace.fps);
}

Trace pca_rppg(const RgbTrace& trace) {
  require_length(trace);
  Eigen::MatrixX3d centered = trace.values;
  for (int c = 0; c < 3; ++c) centered.col(c).array() -= trace.values.col(c).mean();
  const Eigen::Matrix3d cov =
      centered.transpose() * centered / static_cast<double>(centered.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  std::vector<Eigen::ArrayXd> candidates;
  std::vector<Eigen::Vector3d> vectors;
  for (int i = 2; i >= 0; --i) {  // descending eigenvalue order
    vectors.push_back(eig.eigenvectors().col(i));
    candidates.push_back((centered * eig.eigenvectors().col(i)).array());
  }
  const int best = pick_by_band_concentration(candidates, trace.fps);
  Eigen::Vector3d dir = vectors[best];
  Eigen::ArrayXd component = candidates[best];
  normalize_sign(dir, component);
  return finalize(component, trace.fps);
}

Trace ica_rppg(const RgbTrace& trace, std::uint64_t seed) {
  require_length(trace);
  const int t_len = trace.size();
  Eigen::MatrixX3d centered = trace.values;
  for (int c = 0; c < 3; ++c) centered.col(c).array() -= trace.values.col(c).mean();
  const Eigen::Matrix3d cov =
      centered.transpose() * centered / static_cast<double>(t_len);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);

  // Rank-adaptive whitening: keep directions carrying real variance.
  const double lambda_max = eig.eigenvalues().maxCoeff();
  if (!(lambda_max > 0.0)) throw NumericError("ica: rank-0 trace");
  std::vector<int> kept;
  for (int i = 2; i >= 0; --i) {
    if (eig.eigenvalues()(i) > 1e-10 * lambda_max) kept.push_back(i);
  }
  const int k = static_cast<int>(kept.size());
  Eigen::MatrixXd whiten(k, 3);
  for (int i = 0; i < k; ++i) {
    whiten.row(i) =
        eig.eigenvectors().col(kept[i]).transpose() / std::sqrt(eig.eigenvalues()(kept[i]));
  }
  const Eigen::MatrixXd z = centered * whiten.transpose();  // T x k, identity covariance

  Rng rng(seed);
  Eigen::MatrixXd w(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) w(i, j) = rng.normal();
  }
  auto decorrelate = [](const Eigen::MatrixXd& m) -> Eigen::MatrixXd {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e(m * m.transpose());
    const Eigen::VectorXd inv_sqrt = e.eigenvalues().cwiseMax(1e-18).cwiseSqrt().cwiseInverse();
    return e.eigenvectors() * inv_sqrt.asDiagonal() * e.eigenvectors().transpose() * m;
  };
  w = decorrelate(w);

  const int max_iter = 200;
  bool converged = false;
  int used_iter = 0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    const Eigen::MatrixXd proj = z * w.transpose();          // T x k
    const Eigen::MatrixXd g = proj.array().tanh().matrix();  // tanh contrast
    const Eigen::ArrayXXd gprime = 1.0 - g.array().square();
    Eigen::MatrixXd w_new(k, k);
    for (int i = 0; i < k; ++i) {
      const Eigen::VectorXd ez_g = (z.transpose() * g.col(i)) / static_cast<double>(t_len);
      const double eg_prime = gprime.col(i).mean();
      w_new.row(i) = (ez_g - eg_prime * w.row(i).transpose()).transpose();
    }
    w_new = decorrelate(w_new);
    double delta = 0.0;
    for (int i = 0; i < k; ++i) {
      delta = std::max(delta, std::abs(1.0 - std::abs(w_new.row(i).dot(w.row(i)))));
    }
    w = w_new;
    used_iter = iter;
    if (delta < 1e-6) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NumericError("ica: FastICA did not converge in " + std::to_string(used_iter) +
                       " iterations");
  }

  const Eigen::MatrixXd sources = z * w.transpose();  // T x k
  std::vector<Eigen::ArrayXd> candidates;
  std::vector<Eigen::Vector3d> vectors;
  for (int i = 0; i < k; ++i) {
    candidates.push_back(sources.col(i).array());
    vectors.push_back((whiten.transpose() * w.row(i).transpose()).eval());
  }
  const int best = pick_by_band_concentration(candidates, trace.fps);
  Eigen::Vector3d dir = vectors[best];
  Eigen::ArrayXd component = candidates[best];
  normalize_sign(dir, component);
  return finalize(component, trace.fps);
}

Method parse_method(const std::string& name) {
  if (name == "ica") return Method::Ica;
  if (name == "pca") return Method::Pca;
  if (name == "chrom") return Method::Chrom;
  if (name == "pbv") return Method::Pbv;
  if (name == "pos") return Method::Pos;
  if (name == "lgi") return Method::Lgi;
  throw UsageError("unknown method '" + name + "', expected ica|pca|chrom|pbv|pos|lgi");
}

const char* method_name(Method method) {
  switch (method) {
    case Method::Ica: return "ica";
    case Method::Pca: return "pca";
    case Method::Chrom: return "chrom";
    case Method::Pbv: return "pbv";
    case Method::Pos: return "pos";
    case Method::Lgi: return "lgi";
  }
  return "?";
}

Trace extract(Method method, const RgbTrace& trace, std::uint64_t seed) {
  switch (method) {
    case Method::Ica: return ica_rppg(trace, seed);
    case Method::Pca: return pca_rppg(trace);
    case Method::Chrom: return chrom(trace);
    case Method::Pbv: return pbv(trace);
    case Method::Pos: return pos(trace);
    case Method::Lgi: return lgi(trace);
  }
  throw UsageError("extract: bad method");
}

}  // namespace rppg
