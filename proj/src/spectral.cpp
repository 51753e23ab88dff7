#include "rppg/spectral.hpp"

#include <Eigen/Sparse>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace rppg {
namespace {

using Cplx = std::complex<double>;

Eigen::VectorXcd fft_forward(const Eigen::VectorXcd& in) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd out;
  fft.fwd(out, in);
  return out;
}

Eigen::VectorXcd fft_inverse(const Eigen::VectorXcd& in) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd out;
  fft.inv(out, in);
  return out;
}

}  // namespace

Trace detrend(const Trace& trace, double lambda) {
  const int n = trace.size();
  if (n < 3) throw NumericError("detrend: need at least 3 samples");
  using Sp = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n) * 5);
  // A = I + lambda^2 D2' D2 assembled directly from the pentadiagonal stencil.
  const double l2 = lambda * lambda;
  auto add = [&](int i, int j, double v) {
    if (j >= 0 && j < n) trips.emplace_back(i, j, v);
  };
  for (int i = 0; i < n; ++i) add(i, i, 1.0);
  for (int k = 0; k < n - 2; ++k) {
    // Row k of D2 is [1, -2, 1] at columns k, k+1, k+2.
    add(k, k, l2);
    add(k, k + 1, -2.0 * l2);
    add(k, k + 2, l2);
    add(k + 1, k, -2.0 * l2);
    add(k + 1, k + 1, 4.0 * l2);
    add(k + 1, k + 2, -2.0 * l2);
    add(k + 2, k, l2);
    add(k + 2, k + 1, -2.0 * l2);
    add(k + 2, k + 2, l2);
  }
  Sp a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Sp> solver(a);
  if (solver.info() != Eigen::Success) throw NumericError("detrend: factorization failed");
  const Eigen::VectorXd y = trace.samples.matrix();
  const Eigen::VectorXd smooth = solver.solve(y);
  Trace out;
  out.fps = trace.fps;
  out.samples = (y - smooth).array();
  return out;
}

Trace bandpass(const Trace& trace, double f_lo, double f_hi) {
  const int n = trace.size();
  if (n < 2) throw NumericError("bandpass: need at least 2 samples");
  if (!(trace.fps > 2.0 * f_hi)) {
    throw NumericError("bandpass: sample rate below Nyquist requirement for the band");
  }
  Eigen::VectorXcd in(n);
  for (int i = 0; i < n; ++i) in(i) = Cplx(trace.samples(i), 0.0);
  Eigen::VectorXcd spec = fft_forward(in);
  for (int k = 0; k < n; ++k) {
    const double f = (k <= n / 2 ? k : k - n) * trace.fps / n;
    const double af = std::abs(f);
    if (af < f_lo || af > f_hi) spec(k) = Cplx(0.0, 0.0);
  }
  const Eigen::VectorXcd back = fft_inverse(spec);
  Trace out;
  out.fps = trace.fps;
  out.samples = back.real().array();
  return out;
}

int default_nfft(int t_len) {
  int n = 2048;
  while (n < t_len) n *= 2;
  return n;
}

Psd psd(const Trace& trace, int n_fft) {
  const int t_len = trace.size();
  if (t_len < 4) throw NumericError("psd: need at least 4 samples");
  if (!(trace.fps > 0.0)) throw NumericError("psd: fps must be positive");
  if (n_fft == 0) n_fft = default_nfft(t_len);
  if (n_fft < t_len) throw NumericError("psd: n_fft smaller than the signal");
  const double mean = trace.samples.mean();
  Eigen::VectorXcd in = Eigen::VectorXcd::Zero(n_fft);
  for (int i = 0; i < t_len; ++i) in(i) = Cplx(trace.samples(i) - mean, 0.0);
  const Eigen::VectorXcd spec = fft_forward(in);
  const int half = n_fft / 2;
  Psd out;
  out.freq_hz.resize(half + 1);
  out.power.resize(half + 1);
  for (int k = 0; k <= half; ++k) {
    out.freq_hz(k) = k * trace.fps / n_fft;
    const double doubling = (k == 0 || k == half) ? 1.0 : 2.0;
    out.power(k) = doubling * std::norm(spec(k)) / (static_cast<double>(n_fft) * t_len);
  }
  return out;
}

Psd normalize_psd(const Psd& in) {
  int lo = -1, hi = -1;
  for (int k = 0; k < in.size(); ++k) {
    if (in.freq_hz(k) >= in.f_lo && in.freq_hz(k) <= in.f_hi) {
      if (lo < 0) lo = k;
      hi = k;
    }
  }
  if (lo < 0) throw NumericError("normalize_psd: no bins inside the band");
  const int count = hi - lo + 1;
  const double total = in.power.segment(lo, count).sum();
  if (!(total > 0.0)) throw NumericError("normalize_psd: zero in-band power");
  Psd out;
  out.f_lo = in.f_lo;
  out.f_hi = in.f_hi;
  out.normalized = true;
  out.freq_hz = in.freq_hz.segment(lo, count);
  out.power = in.power.segment(lo, count) / total;
  return out;
}

double estimate_hr_bpm(const Psd& spectrum) {
  double best_power = 0.0;
  double best_freq = -1.0;
  for (int k = 0; k < spectrum.size(); ++k) {
    const double f = spectrum.freq_hz(k);
    if (f < spectrum.f_lo || f > spectrum.f_hi) continue;
    if (spectrum.power(k) > best_power) {
      best_power = spectrum.power(k);
      best_freq = f;
    }
  }
  if (best_freq < 0.0 || !(best_power > 0.0)) {
    throw NumericError("estimate_hr_bpm: zero in-band power");
  }
  return 60.0 * best_freq;
}

double snr_db(const Psd& spectrum, double ref_hr_bpm) {
  double f0;
  if (ref_hr_bpm > 0.0) {
    if (ref_hr_bpm < 30.0 || ref_hr_bpm > 180.0) {
      throw NumericError("snr_db: reference HR outside [30,180] bpm");
    }
    f0 = ref_hr_bpm / 60.0;
  } else {
    f0 = estimate_hr_bpm(spectrum) / 60.0;
  }
  double p_sig = 0.0;
  double p_noise = 0.0;
  for (int k = 0; k < spectrum.size(); ++k) {
    const double f = spectrum.freq_hz(k);
    const bool in_band = f >= spectrum.f_lo && f <= spectrum.f_hi;
    const bool fundamental = in_band && std::abs(f - f0) <= 0.1;
    const bool harmonic = std::abs(f - 2.0 * f0) <= 0.2;
    if (fundamental || harmonic) {
      p_sig += spectrum.power(k);
    } else if (in_band) {
      p_noise += spectrum.power(k);
    }
  }
  if (!(p_noise > 0.0)) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(p_sig / p_noise);
}

}  // namespace rppg
