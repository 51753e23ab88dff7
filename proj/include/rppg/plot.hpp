#pragma once

#include "rppg/types.hpp"

#include <string>
#include <vector>

namespace rppg::plot {

// One labelled curve for a line chart.
struct Series {
  std::string label;
  Vec x;
  Vec y;
};

// One labelled sample for a violin chart.
struct ViolinGroup {
  std::string label;
  Vec values;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 480;
};

// Silverman's rule of thumb: 0.9 * min(sd, iqr/1.34) * n^(-1/5), with the
// sample standard deviation (n-1 denominator) and linearly interpolated
// quartiles. Returns 0 when the sample has no spread or fewer than two
// points; callers treat that as the degenerate (tick) case.
double silverman_bandwidth(const Vec& sample);

// Gaussian kernel density estimate of `sample` evaluated at each entry of
// `at`. Requires bandwidth > 0 and a non-empty sample.
Vec gaussian_kde(const Vec& sample, const Vec& at, double bandwidth);

// Self-contained SVG line chart. Throws UsageError when `series` is empty,
// any series is empty, or x/y lengths disagree. Output bytes depend only on
// the inputs.
std::string render_line_svg(const std::vector<Series>& series, const PlotOptions& options);

// Self-contained SVG violin chart: one mirrored kernel-density polygon per
// group (Gaussian kernel, Silverman bandwidth). Groups without spread are
// drawn as a horizontal tick at their value. Throws UsageError when `groups`
// is empty or any group has no values. Output bytes depend only on the
// inputs.
std::string render_violin_svg(const std::vector<ViolinGroup>& groups, const PlotOptions& options);

}  // namespace rppg::plot
