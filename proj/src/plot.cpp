#include "rppg/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace rppg::plot {

namespace {

constexpr int kKdeGridPoints = 129;
constexpr double kKdePadding = 3.0;  // grid extends this many bandwidths past the data

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kPaletteSize = 6;

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// Pixel-space coordinate with fixed precision so output bytes are stable.
std::string px(double v) { return fmt(v, "%.2f"); }

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0;
  double hi = 1;
};

// Expand a degenerate or empty range so the axis always has extent.
Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo) * 0.5);
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

double nice_step(double span, int target_ticks) {
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double nice = 10;
  if (frac <= 1)
    nice = 1;
  else if (frac <= 2)
    nice = 2;
  else if (frac <= 5)
    nice = 5;
  return nice * mag;
}

std::vector<double> axis_ticks(const Range& r, int target) {
  const double step = nice_step(r.hi - r.lo, target);
  std::vector<double> ticks;
  double t = std::ceil(r.lo / step) * step;
  for (; t <= r.hi + step * 1e-9; t += step) {
    // snap values that should be zero
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

struct Frame {
  int width;
  int height;
  double left = 64;
  double right = 16;
  double top = 30;
  double bottom = 46;
  Range xr;
  Range yr;

  double x(double v) const {
    return left + (v - xr.lo) / (xr.hi - xr.lo) * (width - left - right);
  }
  double y(double v) const {
    return height - bottom - (v - yr.lo) / (yr.hi - yr.lo) * (height - top - bottom);
  }
};

void open_svg(std::string& svg, const PlotOptions& opt) {
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  svg += std::to_string(opt.width);
  svg += "\" height=\"";
  svg += std::to_string(opt.height);
  svg += "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " + std::to_string(opt.height) +
         "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  if (!opt.title.empty()) {
    svg += "<text x=\"" + px(opt.width / 2.0) +
           "\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
           escape_xml(opt.title) + "</text>\n";
  }
}

void draw_axes(std::string& svg, const Frame& f, const PlotOptions& opt, bool x_numeric) {
  svg += "<g stroke=\"#333333\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<path d=\"M" + px(f.left) + " " + px(f.top) + " V" + px(f.height - f.bottom) + " H" +
         px(f.width - f.right) + "\"/>\n";
  svg += "</g>\n";

  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  if (x_numeric) {
    for (double t : axis_ticks(f.xr, 6)) {
      const double gx = f.x(t);
      svg += "<line x1=\"" + px(gx) + "\" y1=\"" + px(f.height - f.bottom) + "\" x2=\"" + px(gx) +
             "\" y2=\"" + px(f.height - f.bottom + 4) + "\" stroke=\"#333333\"/>\n";
      svg += "<text x=\"" + px(gx) + "\" y=\"" + px(f.height - f.bottom + 16) +
             "\" text-anchor=\"middle\">" + fmt(t) + "</text>\n";
    }
  }
  for (double t : axis_ticks(f.yr, 6)) {
    const double gy = f.y(t);
    svg += "<line x1=\"" + px(f.left - 4) + "\" y1=\"" + px(gy) + "\" x2=\"" + px(f.left) +
           "\" y2=\"" + px(gy) + "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + px(f.left - 7) + "\" y=\"" + px(gy + 3.5) +
           "\" text-anchor=\"end\">" + fmt(t) + "</text>\n";
  }
  if (!opt.x_label.empty()) {
    svg += "<text x=\"" + px((f.left + f.width - f.right) / 2.0) + "\" y=\"" +
           px(f.height - 8.0) + "\" text-anchor=\"middle\">" + escape_xml(opt.x_label) +
           "</text>\n";
  }
  if (!opt.y_label.empty()) {
    const double cy = (f.top + f.height - f.bottom) / 2.0;
    svg += "<text x=\"14\" y=\"" + px(cy) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           px(cy) + ")\">" + escape_xml(opt.y_label) + "</text>\n";
  }
  svg += "</g>\n";
}

}  // namespace

double silverman_bandwidth(const Vec& sample) {
  const Eigen::Index n = sample.size();
  if (n < 2) return 0.0;
  const double mean = sample.mean();
  const double var = (sample - mean).square().sum() / static_cast<double>(n - 1);
  const double sd = std::sqrt(var);

  std::vector<double> sorted(sample.data(), sample.data() + n);
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double p) {
    const double idx = p * static_cast<double>(n - 1);
    const auto lo = static_cast<Eigen::Index>(std::floor(idx));
    const auto hi = std::min(lo + 1, n - 1);
    const double w = idx - static_cast<double>(lo);
    return sorted[static_cast<std::size_t>(lo)] * (1.0 - w) +
           sorted[static_cast<std::size_t>(hi)] * w;
  };
  const double iqr = quantile(0.75) - quantile(0.25);

  double spread = sd;
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
  if (!(spread > 0.0)) return 0.0;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

Vec gaussian_kde(const Vec& sample, const Vec& at, double bandwidth) {
  if (sample.size() == 0) throw UsageError("kernel density estimate needs a non-empty sample");
  if (!(bandwidth > 0.0)) throw UsageError("kernel density estimate needs a positive bandwidth");
  const double norm =
      1.0 / (static_cast<double>(sample.size()) * bandwidth * std::sqrt(2.0 * M_PI));
  Vec out = Vec::Zero(at.size());
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    const Vec z = (sample - at(i)) / bandwidth;
    out(i) = norm * (-0.5 * z.square()).exp().sum();
  }
  return out;
}

std::string render_line_svg(const std::vector<Series>& series, const PlotOptions& options) {
  if (series.empty()) throw UsageError("line plot needs at least one series");
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (const Series& s : series) {
    if (s.x.size() == 0 || s.x.size() != s.y.size())
      throw UsageError("line plot series '" + s.label + "' needs matching non-empty x and y");
    if (first) {
      xmin = s.x.minCoeff();
      xmax = s.x.maxCoeff();
      ymin = s.y.minCoeff();
      ymax = s.y.maxCoeff();
      first = false;
    } else {
      xmin = std::min(xmin, s.x.minCoeff());
      xmax = std::max(xmax, s.x.maxCoeff());
      ymin = std::min(ymin, s.y.minCoeff());
      ymax = std::max(ymax, s.y.maxCoeff());
    }
  }

  Frame f{options.width, options.height};
  f.xr = padded(xmin, xmax);
  f.yr = padded(ymin, ymax);

  std::string svg;
  open_svg(svg, options);
  draw_axes(svg, f, options, true);

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % kPaletteSize];
    std::string d;
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
      d += (i == 0 ? "M" : " L");
      d += px(f.x(s.x(i))) + " " + px(f.y(s.y(i)));
    }
    svg += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
  }

  // legend, top-right inside the frame
  double ly = f.top + 14;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k].label.empty()) continue;
    const double lx = f.width - f.right - 150;
    svg += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" + px(lx + 18) +
           "\" y2=\"" + px(ly - 4) + "\" stroke=\"" + kPalette[k % kPaletteSize] +
           "\" stroke-width=\"1.5\"/>\n";
    svg += "<text x=\"" + px(lx + 23) + "\" y=\"" + px(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">" +
           escape_xml(series[k].label) + "</text>\n";
    ly += 15;
  }

  svg += "</svg>\n";
  return svg;
}

std::string render_violin_svg(const std::vector<ViolinGroup>& groups,
                              const PlotOptions& options) {
  if (groups.empty()) throw UsageError("violin plot needs at least one group");
  for (const ViolinGroup& g : groups)
    if (g.values.size() == 0)
      throw UsageError("violin plot group '" + g.label + "' has no values");

  double ymin = groups[0].values.minCoeff();
  double ymax = groups[0].values.maxCoeff();
  std::vector<double> bandwidths(groups.size());
  for (std::size_t k = 0; k < groups.size(); ++k) {
    bandwidths[k] = silverman_bandwidth(groups[k].values);
    ymin = std::min(ymin, groups[k].values.minCoeff() - kKdePadding * bandwidths[k]);
    ymax = std::max(ymax, groups[k].values.maxCoeff() + kKdePadding * bandwidths[k]);
  }

  Frame f{options.width, options.height};
  f.xr = {0.0, static_cast<double>(groups.size())};
  f.yr = padded(ymin, ymax);

  std::string svg;
  open_svg(svg, options);
  draw_axes(svg, f, options, false);

  const double slot = (f.width - f.left - f.right) / static_cast<double>(groups.size());
  const double half_width = slot * 0.38;

  for (std::size_t k = 0; k < groups.size(); ++k) {
    const ViolinGroup& g = groups[k];
    const char* color = kPalette[k % kPaletteSize];
    const double cx = f.left + slot * (static_cast<double>(k) + 0.5);

    if (bandwidths[k] > 0.0) {
      const double lo = g.values.minCoeff() - kKdePadding * bandwidths[k];
      const double hi = g.values.maxCoeff() + kKdePadding * bandwidths[k];
      const Vec grid = Vec::LinSpaced(kKdeGridPoints, lo, hi);
      const Vec density = gaussian_kde(g.values, grid, bandwidths[k]);
      const double peak = density.maxCoeff();

      std::string d;
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double w = half_width * density(i) / peak;
        d += (i == 0 ? "M" : " L");
        d += px(cx + w) + " " + px(f.y(grid(i)));
      }
      for (Eigen::Index i = grid.size() - 1; i >= 0; --i) {
        const double w = half_width * density(i) / peak;
        d += " L" + px(cx - w) + " " + px(f.y(grid(i)));
      }
      d += " Z";
      svg += "<path d=\"" + d + "\" fill=\"" + color + "\" fill-opacity=\"0.45\" stroke=\"" +
             color + "\" stroke-width=\"1\"/>\n";

      const double med_y = f.y([&] {
        std::vector<double> sorted(g.values.data(), g.values.data() + g.values.size());
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
      }());
      svg += "<line x1=\"" + px(cx - half_width * 0.5) + "\" y1=\"" + px(med_y) + "\" x2=\"" +
             px(cx + half_width * 0.5) + "\" y2=\"" + px(med_y) +
             "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    } else {
      // no spread: the density degenerates, draw a horizontal tick at the value
      const double gy = f.y(g.values(0));
      svg += "<line x1=\"" + px(cx - half_width * 0.5) + "\" y1=\"" + px(gy) + "\" x2=\"" +
             px(cx + half_width * 0.5) + "\" y2=\"" + px(gy) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
    }

    svg += "<text x=\"" + px(cx) + "\" y=\"" + px(f.height - f.bottom + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#333333\">" +
           escape_xml(g.label) + "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace rppg::plot
