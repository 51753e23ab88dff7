#pragma once

#include "rppg/types.hpp"

#include <vector>

namespace rppg {

// Level-1 undecimated Haar transforms with periodic extension and orthonormal
// 1/sqrt(2) scaling. Outputs keep the input size (no decimation).
//
// Orientation convention for 2-D subbands: HL carries the detail along x
// (horizontal detail) with approximation along y; LH is the transpose pairing.

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

namespace detail {

template <class S>
VecT<S> rotate1(const VecT<S>& x) {
  const Eigen::Index n = x.size();
  VecT<S> out(n);
  out.head(n - 1) = x.tail(n - 1);
  out(n - 1) = x(0);
  return out;
}

template <class S>
PlaneT<S> rotate_x(const PlaneT<S>& p) {
  const Eigen::Index w = p.cols();
  PlaneT<S> out(p.rows(), w);
  out.leftCols(w - 1) = p.rightCols(w - 1);
  out.col(w - 1) = p.col(0);
  return out;
}

template <class S>
PlaneT<S> rotate_y(const PlaneT<S>& p) {
  const Eigen::Index h = p.rows();
  PlaneT<S> out(h, p.cols());
  out.topRows(h - 1) = p.bottomRows(h - 1);
  out.row(h - 1) = p.row(0);
  return out;
}

}  // namespace detail

/// approx[n] = (x[n] + x[n+1 mod N]) / sqrt2, detail[n] = (x[n] - x[n+1 mod N]) / sqrt2.
template <class S>
void haar_swt1d(const VecT<S>& x, VecT<S>& approx, VecT<S>& det) {
  if (x.size() < 2) throw NumericError("haar_swt1d: signal shorter than 2 samples");
  const VecT<S> next = detail::rotate1(x);
  approx = (x + next) * static_cast<S>(kInvSqrt2);
  det = (x - next) * static_cast<S>(kInvSqrt2);
}

template <class S>
struct SwtSubbands2DT {
  PlaneT<S> ll, lh, hl, hh;
};
using SwtSubbands2D = SwtSubbands2DT<Real>;

/// Separable 2-D transform. HL = detail along x / approx along y,
/// LH = approx along x / detail along y, HH = detail along both.
template <class S>
SwtSubbands2DT<S> swt2d(const PlaneT<S>& p) {
  if (p.rows() < 2 || p.cols() < 2) throw NumericError("swt2d: plane smaller than 2x2");
  const S c = static_cast<S>(kInvSqrt2);
  const PlaneT<S> px = detail::rotate_x(p);
  const PlaneT<S> ax = (p + px) * c;
  const PlaneT<S> dx = (p - px) * c;
  SwtSubbands2DT<S> out;
  out.ll = (ax + detail::rotate_y(ax)) * c;
  out.lh = (ax - detail::rotate_y(ax)) * c;
  out.hl = (dx + detail::rotate_y(dx)) * c;
  out.hh = (dx - detail::rotate_y(dx)) * c;
  return out;
}

/// Spatial HH subband alone (detail along both x and y).
template <class S>
PlaneT<S> swt2d_hh(const PlaneT<S>& p) {
  if (p.rows() < 2 || p.cols() < 2) throw NumericError("swt2d_hh: plane smaller than 2x2");
  const S c = static_cast<S>(kInvSqrt2);
  const PlaneT<S> dx = (p - detail::rotate_x(p)) * c;
  return (dx - detail::rotate_y(dx)) * c;
}

/// HHH subband of a plane stack: detail along x, y, and the stack axis,
/// all with periodic wrap. Output has the same shape as the input.
template <class S>
std::vector<PlaneT<S>> swt3d_hhh(const std::vector<PlaneT<S>>& stack) {
  const int t_len = static_cast<int>(stack.size());
  if (t_len < 2) throw NumericError("swt3d_hhh: fewer than 2 frames");
  std::vector<PlaneT<S>> hh(t_len);
  for (int t = 0; t < t_len; ++t) hh[t] = swt2d_hh(stack[t]);
  const S c = static_cast<S>(kInvSqrt2);
  std::vector<PlaneT<S>> out(t_len);
  for (int t = 0; t < t_len; ++t) out[t] = (hh[t] - hh[(t + 1) % t_len]) * c;
  return out;
}

}  // namespace rppg
