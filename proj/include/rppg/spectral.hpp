#pragma once

#include "rppg/types.hpp"

namespace rppg {

/// Smoothness-priors detrend: subtracts the low-frequency component
/// (I + lambda^2 D2' D2)^{-1} y, with D2 the second-difference operator,
/// via an exact sparse solve. Removes slow drift, passes the pulse band.
Trace detrend(const Trace& trace, double lambda = 100.0);

/// Zero-phase ideal band-pass: zeroes every FFT bin with |f| outside
/// [f_lo, f_hi], inverse-transforms, keeps the real part.
Trace bandpass(const Trace& trace, double f_lo = kBandLowHz, double f_hi = kBandHighHz);

/// max(2048, next power of two >= t_len). Pins PSD resolution to about
/// 0.88 bpm at 30 fps.
int default_nfft(int t_len);

/// One-sided periodogram of the zero-meaned, zero-padded signal on
/// [0, fps/2]. Powers sum to signal energy divided by sample count
/// (one-sided doubling except DC/Nyquist). n_fft = 0 picks default_nfft.
Psd psd(const Trace& trace, int n_fft = 0);

/// Restricts the axis to [f_lo, f_hi] and scales powers to sum to one.
Psd normalize_psd(const Psd& in);

/// HR = 60 * argmax of in-band power, ties broken toward lower frequency.
double estimate_hr_bpm(const Psd& spectrum);

/// Ratio (dB) of power near the pulse to the remaining in-band power.
/// Signal = bins within 0.1 Hz of f0 (clipped to the band) plus bins within
/// 0.2 Hz of 2*f0 (anywhere on the axis); noise = other in-band bins.
/// ref_hr_bpm = 0 falls back to the dominant in-band peak. Returns +inf
/// when the noise power is exactly zero.
double snr_db(const Psd& spectrum, double ref_hr_bpm = 0.0);

}  // namespace rppg
