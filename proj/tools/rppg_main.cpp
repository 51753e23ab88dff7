// Command-line surface for the rPPG map pipeline. Every command is a pure
// function of its inputs and flags: identical invocations produce
// byte-identical outputs. Exit codes: 0 ok, 2 usage, 3 format, 4 numeric.

#include "rppg/contrastive.hpp"
#include "rppg/hhh_map.hpp"
#include "rppg/io_formats.hpp"
#include "rppg/plot.hpp"
#include "rppg/reliability.hpp"
#include "rppg/spectral.hpp"
#include "rppg/stats_tests.hpp"
#include "rppg/synthetic.hpp"
#include "rppg/traditional.hpp"
#include "rppg/types.hpp"

#include <CLI11.hpp>

#include <clocale>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace rppg;

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw FormatError("write failed: " + path);
}

std::string file_stem(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = base.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

int channel_index(const std::string& name) {
  const std::string names[] = {"r", "g", "b", "y", "u", "v"};
  for (int i = 0; i < 6; ++i)
    if (name == names[i]) return i;
  throw UsageError("unknown channel '" + name + "' (expected one of r,g,b,y,u,v)");
}

Trace map_row_trace(const SpatioTemporalMap& map, int row, int channel) {
  if (row < 0 || row >= SpatioTemporalMap::kRows)
    throw UsageError("row out of range [0, 62]: " + std::to_string(row));
  Trace trace;
  trace.fps = map.fps;
  trace.samples = map.channels[static_cast<std::size_t>(channel)].row(row).transpose();
  return trace;
}

struct CsvTable {
  std::vector<std::string> fields;
  std::vector<std::vector<double>> rows;  // rows[i].size() == fields.size()
};

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open: " + path);

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
      if (c == ',') {
        cells.push_back(cell);
        cell.clear();
      } else if (c != '\r') {
        cell += c;
      }
    }
    cells.push_back(cell);
    return cells;
  };

  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty CSV: " + path);
  table.fields = split(line);

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.fields.size())
      throw FormatError(path + ": row has " + std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(table.fields.size()));
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const char* text = cells[i].c_str();
      char* end = nullptr;
      row[i] = std::strtod(text, &end);
      if (end == text || *end != '\0')
        throw FormatError(path + ": cell '" + cells[i] + "' is not numeric");
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw FormatError("no data rows: " + path);
  return table;
}

Vec table_column(const CsvTable& table, std::size_t column) {
  Vec out(static_cast<Eigen::Index>(table.rows.size()));
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = table.rows[i][column];
  return out;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
  SynthConfig config;
  std::string out_prefix = "clip";
};

VideoTensor mask_video(const std::vector<Mask>& masks, double fps) {
  VideoTensor video;
  video.fps = fps;
  video.frames.reserve(masks.size());
  for (const Mask& m : masks) {
    RgbFrame frame;
    frame.r = m.cast<double>();
    frame.g = frame.r;
    frame.b = frame.r;
    video.frames.push_back(std::move(frame));
  }
  return video;
}

void run_synth(const SynthArgs& args) {
  const SynthClip clip = generate_clip(args.config);

  const std::string video_path = args.out_prefix + ".rpgv";
  const std::string landmarks_path = args.out_prefix + ".landmarks.json";
  const std::string bvp_path = args.out_prefix + ".bvp.csv";
  write_raw_video(clip.video, video_path);
  write_landmarks(clip.landmarks, landmarks_path);
  write_trace(clip.truth.bvp, bvp_path);
  std::cout << video_path << "\n" << landmarks_path << "\n" << bvp_path << "\n";

  if (!clip.truth.specular_masks.empty()) {
    const std::string path = args.out_prefix + ".specular.rpgv";
    write_raw_video(mask_video(clip.truth.specular_masks, clip.video.fps), path);
    std::cout << path << "\n";
  }
  if (!clip.truth.shadow_masks.empty()) {
    const std::string path = args.out_prefix + ".shadow.rpgv";
    write_raw_video(mask_video(clip.truth.shadow_masks, clip.video.fps), path);
    std::cout << path << "\n";
  }
  std::cout << "hr_bpm=" << g17(clip.truth.hr_bpm) << "\n";
}

// ---------------------------------------------------------------------------
// map / hhh
// ---------------------------------------------------------------------------

struct MapArgs {
  std::string video_path;
  std::string landmarks_path;
  std::string kind = "wmst";
  std::string out_path;
};

void run_map(const MapArgs& args) {
  const VideoTensor video = read_raw_video(args.video_path);
  const RoiPolygonTrack landmarks = read_landmarks(args.landmarks_path);
  SpatioTemporalMap map;
  if (args.kind == "wmst")
    map = build_wmst_map(video, landmarks);
  else if (args.kind == "mst")
    map = build_mst_map(video, landmarks);
  else
    throw UsageError("unknown map kind '" + args.kind + "' (expected wmst or mst)");
  write_map(map, args.out_path);
  std::cout << args.out_path << "\n";
}

void run_hhh(const MapArgs& args) {
  const VideoTensor video = read_raw_video(args.video_path);
  const RoiPolygonTrack landmarks = read_landmarks(args.landmarks_path);
  write_map(build_hhh_map(video, landmarks), args.out_path);
  std::cout << args.out_path << "\n";
}

// ---------------------------------------------------------------------------
// trad
// ---------------------------------------------------------------------------

struct TradArgs {
  std::string video_path;
  std::string landmarks_path;
  std::string method = "pos";
  std::uint64_t seed = 1;
  std::string out_path;
};

void run_trad(const TradArgs& args) {
  const VideoTensor video = read_raw_video(args.video_path);
  const RoiPolygonTrack landmarks = read_landmarks(args.landmarks_path);
  const RgbTrace trace = spatial_rgb_trace(video, landmarks);
  const Trace pulse = extract(parse_method(args.method), trace, args.seed);
  write_trace(pulse, args.out_path);
  std::cout << args.out_path << "\n";
}

// ---------------------------------------------------------------------------
// hr / snr
// ---------------------------------------------------------------------------

struct SpectrumArgs {
  std::string map_path;
  std::string trace_path;
  int row = SpatioTemporalMap::kRows - 1;
  std::string channel = "g";
  double ref_bpm = 0.0;
};

Trace load_spectrum_input(const SpectrumArgs& args) {
  const bool has_map = !args.map_path.empty();
  const bool has_trace = !args.trace_path.empty();
  if (has_map == has_trace) throw UsageError("pass exactly one of --map or --trace");
  if (has_trace) return read_trace(args.trace_path);
  return map_row_trace(read_map(args.map_path), args.row, channel_index(args.channel));
}

void run_hr(const SpectrumArgs& args) {
  const Trace trace = load_spectrum_input(args);
  std::cout << "hr_bpm=" << g17(estimate_hr_bpm(psd(trace))) << "\n";
}

void run_snr(const SpectrumArgs& args) {
  const Trace trace = load_spectrum_input(args);
  std::cout << "snr_db=" << g17(snr_db(psd(trace), args.ref_bpm)) << "\n";
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

struct CompareArgs {
  int count = 12;
  std::uint64_t seed = 2026;
  std::string out_csv;
};

void run_compare(const CompareArgs& args) {
  if (args.count < 5) throw UsageError("--count must be at least 5 for the rank test");
  const std::vector<SynthConfig> configs = corpus_configs(args.count, args.seed);

  std::vector<SpatioTemporalMap> weighted, baseline;
  std::vector<double> refs;
  weighted.reserve(configs.size());
  baseline.reserve(configs.size());
  for (const SynthConfig& config : configs) {
    const SynthClip clip = generate_clip(config);
    weighted.push_back(build_wmst_map(clip.video, clip.landmarks));
    baseline.push_back(build_mst_map(clip.video, clip.landmarks));
    refs.push_back(clip.truth.hr_bpm);
  }

  const SnrComparison report = snr_compare(weighted, baseline, refs);

  if (!args.out_csv.empty()) {
    std::string csv = "clip,snr_wmst,snr_mst,delta\n";
    for (std::size_t i = 0; i < report.deltas.size(); ++i) {
      csv += std::to_string(i) + "," + g17(report.snr_weighted[i]) + "," +
             g17(report.snr_baseline[i]) + "," + g17(report.deltas[i]) + "\n";
    }
    write_text(args.out_csv, csv);
    std::cout << args.out_csv << "\n";
  }

  double mean_delta = 0.0;
  for (double d : report.deltas) mean_delta += d;
  mean_delta /= static_cast<double>(report.deltas.size());

  std::cout << "n=" << report.deltas.size() << "\n";
  std::cout << "mean_delta_db=" << g17(mean_delta) << "\n";
  std::cout << "paired_t_statistic=" << g17(report.t_test.statistic) << "\n";
  std::cout << "paired_t_p=" << g17(report.t_test.p_value) << "\n";
  std::cout << "wilcoxon_statistic=" << g17(report.wilcoxon.statistic) << "\n";
  std::cout << "wilcoxon_p=" << g17(report.wilcoxon.p_value) << "\n";
}

// ---------------------------------------------------------------------------
// loss
// ---------------------------------------------------------------------------

struct LossArgs {
  std::string anchor_path;
  std::vector<std::string> positive_paths;
  std::vector<std::string> negative_paths;
  double lambda = 0.05;
};

void run_loss(const LossArgs& args) {
  const SpatioTemporalMap anchor = read_map(args.anchor_path);
  std::vector<SpatioTemporalMap> positives, negatives;
  for (const std::string& path : args.positive_paths) positives.push_back(read_map(path));
  for (const std::string& path : args.negative_paths) negatives.push_back(read_map(path));
  if (positives.empty()) throw UsageError("loss needs at least one --positive map");

  int n_fft = default_nfft(anchor.frame_count());
  for (const auto& m : positives) n_fft = std::max(n_fft, default_nfft(m.frame_count()));
  for (const auto& m : negatives) n_fft = std::max(n_fft, default_nfft(m.frame_count()));

  const Psd anchor_psd = map_psd(anchor, 0.0, n_fft);
  std::vector<Psd> positive_psds, negative_psds;
  for (const auto& m : positives) positive_psds.push_back(map_psd(m, anchor.fps, n_fft));
  for (const auto& m : negatives) negative_psds.push_back(map_psd(m, anchor.fps, n_fft));

  const PairLossReport pair = pretrain_loss(anchor_psd, positive_psds[0], args.lambda);
  std::cout << "pretrain_loss=" << g17(pair.loss) << "\n";
  if (!negative_psds.empty()) {
    const LossReport nce = info_nce(anchor_psd, positive_psds, negative_psds);
    std::cout << "info_nce_loss=" << g17(nce.loss) << "\n";
  }
}

// ---------------------------------------------------------------------------
// plot
// ---------------------------------------------------------------------------

struct PlotArgs {
  std::string kind = "line";
  std::vector<std::string> inputs;
  std::vector<int> columns;  // empty: every column but the first
  std::string out_path;
  plot::PlotOptions options;
};

std::vector<std::size_t> selected_columns(const PlotArgs& args, const CsvTable& table,
                                          const std::string& path) {
  std::vector<std::size_t> cols;
  if (args.columns.empty()) {
    for (std::size_t c = 1; c < table.fields.size(); ++c) cols.push_back(c);
    if (cols.empty()) throw UsageError(path + ": only one column; pass --column 0 to plot it");
  } else {
    for (int c : args.columns) {
      if (c < 0 || static_cast<std::size_t>(c) >= table.fields.size())
        throw UsageError(path + ": column " + std::to_string(c) + " out of range");
      cols.push_back(static_cast<std::size_t>(c));
    }
  }
  return cols;
}

void run_plot(const PlotArgs& args) {
  if (args.inputs.empty()) throw UsageError("plot needs at least one --in CSV");

  std::string svg;
  if (args.kind == "line") {
    std::vector<plot::Series> series;
    for (const std::string& path : args.inputs) {
      const CsvTable table = read_csv_table(path);
      const Vec x = table_column(table, 0);
      for (std::size_t c : selected_columns(args, table, path)) {
        plot::Series s;
        s.label = args.inputs.size() > 1 ? file_stem(path) + ":" + table.fields[c]
                                         : table.fields[c];
        s.x = x;
        s.y = table_column(table, c);
        series.push_back(std::move(s));
      }
    }
    svg = plot::render_line_svg(series, args.options);
  } else if (args.kind == "violin") {
    std::vector<plot::ViolinGroup> groups;
    for (const std::string& path : args.inputs) {
      const CsvTable table = read_csv_table(path);
      for (std::size_t c : selected_columns(args, table, path)) {
        plot::ViolinGroup g;
        g.label = args.inputs.size() > 1 ? file_stem(path) + ":" + table.fields[c]
                                         : table.fields[c];
        g.values = table_column(table, c);
        groups.push_back(std::move(g));
      }
    }
    svg = plot::render_violin_svg(groups, args.options);
  } else {
    throw UsageError("unknown plot kind '" + args.kind + "' (expected line or violin)");
  }

  write_text(args.out_path, svg);
  std::cout << args.out_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{"Reliability-weighted spatio-temporal rPPG maps"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Generate a deterministic synthetic clip");
  synth->add_option("--out", synth_args.out_prefix, "Output path prefix");
  synth->add_option("--width", synth_args.config.width, "Frame width (>= 32)");
  synth->add_option("--height", synth_args.config.height, "Frame height (>= 32)");
  synth->add_option("--fps", synth_args.config.fps, "Frame rate");
  synth->add_option("--duration", synth_args.config.duration_s, "Clip length in seconds");
  synth->add_option("--hr", synth_args.config.hr_bpm, "Ground-truth heart rate in bpm");
  synth->add_option("--amplitude", synth_args.config.pulse_amplitude, "Pulse amplitude");
  synth->add_option("--texture", synth_args.config.texture_amplitude, "Static texture amplitude");
  synth->add_option("--specular-count", synth_args.config.specular.count, "Highlight blob count");
  synth->add_option("--specular-radius", synth_args.config.specular.radius, "Blob radius in px");
  synth->add_option("--specular-intensity", synth_args.config.specular.intensity,
                    "Blob brightening in [0, 1]");
  synth->add_option("--shadow-depth", synth_args.config.shadow.depth, "Shadow attenuation");
  synth->add_option("--shadow-drift", synth_args.config.shadow.drift_speed,
                    "Shadow drift in px/s");
  synth->add_option("--jitter-sigma", synth_args.config.jitter.px_sigma, "Jitter sigma in px");
  synth->add_option("--noise-sigma", synth_args.config.sensor_noise.sigma, "Sensor noise sigma");
  synth->add_option("--seed", synth_args.config.seed, "Master seed");
  synth->callback([&] { run_synth(synth_args); });

  MapArgs map_args;
  CLI::App* map_cmd = app.add_subcommand("map", "Build a pooled spatio-temporal map");
  map_cmd->add_option("--video", map_args.video_path, "Input .rpgv")->required();
  map_cmd->add_option("--landmarks", map_args.landmarks_path, "Input landmark JSON")->required();
  map_cmd->add_option("--kind", map_args.kind, "wmst (reliability-weighted) or mst (unweighted)");
  map_cmd->add_option("--out", map_args.out_path, "Output .rpgm")->required();
  map_cmd->callback([&] { run_map(map_args); });

  MapArgs hhh_args;
  CLI::App* hhh_cmd = app.add_subcommand("hhh", "Build the high-frequency wavelet map");
  hhh_cmd->add_option("--video", hhh_args.video_path, "Input .rpgv")->required();
  hhh_cmd->add_option("--landmarks", hhh_args.landmarks_path, "Input landmark JSON")->required();
  hhh_cmd->add_option("--out", hhh_args.out_path, "Output .rpgm")->required();
  hhh_cmd->callback([&] { run_hhh(hhh_args); });

  TradArgs trad_args;
  CLI::App* trad = app.add_subcommand("trad", "Run a classical pulse extractor");
  trad->add_option("--video", trad_args.video_path, "Input .rpgv")->required();
  trad->add_option("--landmarks", trad_args.landmarks_path, "Input landmark JSON")->required();
  trad->add_option("--method", trad_args.method, "ica, pca, chrom, pbv, pos, or lgi");
  trad->add_option("--seed", trad_args.seed, "Seed for the stochastic methods");
  trad->add_option("--out", trad_args.out_path, "Output trace CSV")->required();
  trad->callback([&] { run_trad(trad_args); });

  SpectrumArgs hr_args;
  CLI::App* hr_cmd = app.add_subcommand("hr", "Estimate heart rate from a map row or trace");
  hr_cmd->add_option("--map", hr_args.map_path, "Input .rpgm");
  hr_cmd->add_option("--trace", hr_args.trace_path, "Input trace CSV");
  hr_cmd->add_option("--row", hr_args.row, "Map row (0-based; 62 = all-ROI union)");
  hr_cmd->add_option("--channel", hr_args.channel, "Map channel: r,g,b,y,u,v");
  hr_cmd->callback([&] { run_hr(hr_args); });

  SpectrumArgs snr_args;
  CLI::App* snr_cmd = app.add_subcommand("snr", "Spectral SNR of a map row or trace");
  snr_cmd->add_option("--map", snr_args.map_path, "Input .rpgm");
  snr_cmd->add_option("--trace", snr_args.trace_path, "Input trace CSV");
  snr_cmd->add_option("--row", snr_args.row, "Map row (0-based; 62 = all-ROI union)");
  snr_cmd->add_option("--channel", snr_args.channel, "Map channel: r,g,b,y,u,v");
  snr_cmd->add_option("--ref-bpm", snr_args.ref_bpm,
                      "Reference heart rate; 0 uses the dominant in-band peak");
  snr_cmd->callback([&] { run_snr(snr_args); });

  CompareArgs compare_args;
  CLI::App* compare =
      app.add_subcommand("compare", "Weighted vs unweighted SNR on a seeded corpus");
  compare->add_option("--count", compare_args.count, "Number of corpus clips (>= 5)");
  compare->add_option("--seed", compare_args.seed, "Corpus master seed");
  compare->add_option("--out-csv", compare_args.out_csv, "Per-clip SNR table output");
  compare->callback([&] { run_compare(compare_args); });

  LossArgs loss_args;
  CLI::App* loss = app.add_subcommand("loss", "Contrastive and pretraining losses over maps");
  loss->add_option("--anchor", loss_args.anchor_path, "Anchor .rpgm")->required();
  loss->add_option("--positive", loss_args.positive_paths, "Positive .rpgm (repeatable)");
  loss->add_option("--negative", loss_args.negative_paths, "Negative .rpgm (repeatable)");
  loss->add_option("--lambda", loss_args.lambda, "Similarity weight of the pretraining loss");
  loss->callback([&] { run_loss(loss_args); });

  PlotArgs plot_args;
  CLI::App* plot_cmd = app.add_subcommand("plot", "Render CSV columns as an SVG chart");
  plot_cmd->add_option("--kind", plot_args.kind, "line or violin");
  plot_cmd->add_option("--in", plot_args.inputs, "Input CSV (repeatable)");
  plot_cmd->add_option("--column", plot_args.columns,
                       "Column index to plot (repeatable; default: all but the first)");
  plot_cmd->add_option("--out", plot_args.out_path, "Output SVG")->required();
  plot_cmd->add_option("--title", plot_args.options.title, "Chart title");
  plot_cmd->add_option("--xlabel", plot_args.options.x_label, "X axis label");
  plot_cmd->add_option("--ylabel", plot_args.options.y_label, "Y axis label");
  plot_cmd->callback([&] { run_plot(plot_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
