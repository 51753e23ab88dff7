#include "rppg/io_formats.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace rppg {
namespace {

void put_u16(std::string& buf, std::uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& buf, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(buf, bits);
}

struct ByteReader {
  const std::string& data;
  std::size_t pos = 0;

  void need(std::size_t n, const char* what) {
    if (pos + n > data.size()) throw FormatError(std::string("truncated file: ") + what);
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return static_cast<std::uint8_t>(data[pos++]);
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    std::uint16_t v = static_cast<std::uint8_t>(data[pos]) |
                      (static_cast<std::uint16_t>(static_cast<std::uint8_t>(data[pos + 1])) << 8);
    pos += 2;
    return v;
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(data[pos + i])) << (8 * i);
    }
    pos += 4;
    return v;
  }
  float f32(const char* what) {
    const std::uint32_t bits = u32(what);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open file for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write failed: " + path);
}

}  // namespace

VideoTensor read_raw_video(const std::string& path) {
  const std::string bytes = slurp(path);
  ByteReader r{bytes};
  r.need(4, "magic");
  if (bytes.compare(0, 4, "RPGV") != 0) throw FormatError("bad magic, expected RPGV: " + path);
  r.pos = 4;
  const std::uint16_t version = r.u16("version");
  if (version != 1) throw FormatError("unsupported RPGV version " + std::to_string(version));
  const std::uint32_t width = r.u32("width");
  const std::uint32_t height = r.u32("height");
  const std::uint32_t frames = r.u32("frames");
  const std::uint8_t channels = r.u8("channels");
  if (channels != 3) throw FormatError("RPGV channels must be 3");
  const float fps = r.f32("fps");
  if (!(fps > 0.0f)) throw FormatError("RPGV fps must be positive");
  if (width < 8 || height < 8) throw FormatError("RPGV frame smaller than 8x8");
  const std::size_t expect = static_cast<std::size_t>(frames) * height * width * 3;
  if (bytes.size() - r.pos != expect) {
    throw FormatError("RPGV payload size mismatch: have " + std::to_string(bytes.size() - r.pos) +
                      ", header implies " + std::to_string(expect));
  }
  VideoTensor v;
  v.fps = static_cast<double>(fps);
  v.frames.resize(frames);
  const std::uint8_t* p = reinterpret_cast<const std::uint8_t*>(bytes.data()) + r.pos;
  for (std::uint32_t t = 0; t < frames; ++t) {
    RgbFrame& f = v.frames[t];
    f.r.resize(height, width);
    f.g.resize(height, width);
    f.b.resize(height, width);
    for (std::uint32_t y = 0; y < height; ++y) {
      for (std::uint32_t x = 0; x < width; ++x) {
        f.r(y, x) = *p++ / 255.0;
        f.g(y, x) = *p++ / 255.0;
        f.b(y, x) = *p++ / 255.0;
      }
    }
  }
  return v;
}

void write_raw_video(const VideoTensor& video, const std::string& path) {
  const int h = video.height();
  const int w = video.width();
  const int t_len = video.frame_count();
  if (w < 8 || h < 8) throw NumericError("write_raw_video: frame smaller than 8x8");
  if (!(video.fps > 0.0)) throw NumericError("write_raw_video: fps must be positive");
  std::string bytes;
  bytes.reserve(23 + static_cast<std::size_t>(t_len) * h * w * 3);
  bytes += "RPGV";
  put_u16(bytes, 1);
  put_u32(bytes, static_cast<std::uint32_t>(w));
  put_u32(bytes, static_cast<std::uint32_t>(h));
  put_u32(bytes, static_cast<std::uint32_t>(t_len));
  bytes.push_back(static_cast<char>(3));
  put_f32(bytes, static_cast<float>(video.fps));
  auto quantize = [](double v) {
    const double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    return static_cast<char>(static_cast<int>(std::lround(c * 255.0)));
  };
  for (int t = 0; t < t_len; ++t) {
    const RgbFrame& f = video.frames[t];
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        bytes.push_back(quantize(f.r(y, x)));
        bytes.push_back(quantize(f.g(y, x)));
        bytes.push_back(quantize(f.b(y, x)));
      }
    }
  }
  dump(path, bytes);
}

RoiPolygonTrack read_landmarks(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("landmark JSON parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("width") || !doc.contains("height") ||
      !doc.contains("frames") || !doc["frames"].is_array()) {
    throw FormatError("landmark JSON must be an object with width, height, frames");
  }
  RoiPolygonTrack track;
  track.width = doc["width"].get<int>();
  track.height = doc["height"].get<int>();
  if (track.width <= 0 || track.height <= 0) throw FormatError("landmark bounds must be positive");
  track.frames.reserve(doc["frames"].size());
  int frame_idx = 0;
  for (const auto& frame : doc["frames"]) {
    if (!frame.is_object() || frame.size() != static_cast<std::size_t>(kRoiCount)) {
      throw FormatError("landmark frame " + std::to_string(frame_idx) +
                        " must have exactly 6 ROI keys");
    }
    FramePolygons polys;
    for (int i = 0; i < kRoiCount; ++i) {
      if (!frame.contains(kRoiNames[i])) {
        throw FormatError("landmark frame " + std::to_string(frame_idx) + " missing ROI '" +
                          kRoiNames[i] + "'");
      }
      const auto& verts = frame[kRoiNames[i]];
      if (!verts.is_array() || verts.size() < 3) {
        throw FormatError("landmark frame " + std::to_string(frame_idx) + " ROI '" +
                          kRoiNames[i] + "' needs at least 3 vertices");
      }
      Polygon poly;
      poly.reserve(verts.size());
      for (const auto& v : verts) {
        if (!v.is_array() || v.size() != 2) {
          throw FormatError("landmark vertex must be [x, y]");
        }
        const double x = v[0].get<double>();
        const double y = v[1].get<double>();
        if (!(x >= 0.0 && x <= track.width && y >= 0.0 && y <= track.height)) {
          throw FormatError("landmark frame " + std::to_string(frame_idx) + " ROI '" +
                            kRoiNames[i] + "' vertex out of bounds");
        }
        poly.emplace_back(x, y);
      }
      polys[i] = std::move(poly);
    }
    track.frames.push_back(std::move(polys));
    ++frame_idx;
  }
  return track;
}

void write_landmarks(const RoiPolygonTrack& track, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["width"] = track.width;
  doc["height"] = track.height;
  nlohmann::ordered_json frames = nlohmann::ordered_json::array();
  for (const auto& polys : track.frames) {
    nlohmann::ordered_json frame;
    for (int i = 0; i < kRoiCount; ++i) {
      nlohmann::ordered_json verts = nlohmann::ordered_json::array();
      for (const auto& v : polys[i]) {
        verts.push_back(nlohmann::ordered_json::array({v.x(), v.y()}));
      }
      frame[kRoiNames[i]] = std::move(verts);
    }
    frames.push_back(std::move(frame));
  }
  doc["frames"] = std::move(frames);
  dump(path, doc.dump(2) + "\n");
}

SpatioTemporalMap read_map(const std::string& path) {
  const std::string bytes = slurp(path);
  ByteReader r{bytes};
  r.need(4, "magic");
  if (bytes.compare(0, 4, "RPGM") != 0) throw FormatError("bad magic, expected RPGM: " + path);
  r.pos = 4;
  const std::uint16_t version = r.u16("version");
  if (version != 1) throw FormatError("unsupported RPGM version " + std::to_string(version));
  const std::uint32_t rows = r.u32("rows");
  const std::uint32_t frames = r.u32("frames");
  const std::uint32_t channels = r.u32("channels");
  if (rows != SpatioTemporalMap::kRows) throw FormatError("RPGM rows must be 63");
  if (channels != SpatioTemporalMap::kChannels) throw FormatError("RPGM channels must be 6");
  const float fps = r.f32("fps");
  if (!(fps > 0.0f)) throw FormatError("RPGM fps must be positive");
  const std::size_t expect = static_cast<std::size_t>(rows) * frames * channels * 4;
  if (bytes.size() - r.pos != expect) {
    throw FormatError("RPGM payload size mismatch: have " + std::to_string(bytes.size() - r.pos) +
                      ", header implies " + std::to_string(expect));
  }
  SpatioTemporalMap m = SpatioTemporalMap::zeros(static_cast<int>(frames), fps);
  for (std::uint32_t row = 0; row < rows; ++row) {
    for (std::uint32_t t = 0; t < frames; ++t) {
      for (std::uint32_t c = 0; c < channels; ++c) {
        const float v = r.f32("payload");
        if (!std::isfinite(v)) throw FormatError("RPGM payload contains non-finite value");
        m.channels[c](row, t) = static_cast<double>(v);
      }
    }
  }
  return m;
}

void write_map(const SpatioTemporalMap& map, const std::string& path) {
  const int t_len = map.frame_count();
  std::string bytes;
  bytes.reserve(22 + static_cast<std::size_t>(SpatioTemporalMap::kRows) * t_len *
                         SpatioTemporalMap::kChannels * 4);
  bytes += "RPGM";
  put_u16(bytes, 1);
  put_u32(bytes, SpatioTemporalMap::kRows);
  put_u32(bytes, static_cast<std::uint32_t>(t_len));
  put_u32(bytes, SpatioTemporalMap::kChannels);
  put_f32(bytes, static_cast<float>(map.fps));
  for (int row = 0; row < SpatioTemporalMap::kRows; ++row) {
    for (int t = 0; t < t_len; ++t) {
      for (int c = 0; c < SpatioTemporalMap::kChannels; ++c) {
        const double v = map.channels[c](row, t);
        if (!std::isfinite(v)) throw NumericError("write_map: non-finite map value");
        put_f32(bytes, static_cast<float>(v));
      }
    }
  }
  dump(path, bytes);
}

Trace read_trace(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  if (!std::getline(in, line) || (line != "t,value" && line != "t,value\r")) {
    throw FormatError("trace CSV must start with header 't,value'");
  }
  std::vector<double> times, values;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    double t, v;
    if (std::sscanf(line.c_str(), "%lf,%lf", &t, &v) != 2) {
      throw FormatError("trace CSV line " + std::to_string(line_no) + " is not 't,value'");
    }
    times.push_back(t);
    values.push_back(v);
  }
  if (times.size() < 2) throw FormatError("trace CSV needs at least 2 samples");
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw FormatError("trace CSV times must be strictly increasing");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    if (!(step > 0.0)) throw FormatError("trace CSV times must be strictly increasing");
    if (std::abs(step - dt) > 1e-9) {
      throw FormatError("trace CSV spacing non-uniform at line " + std::to_string(i + 2));
    }
  }
  Trace trace;
  double fps = 1.0 / dt;
  const double snapped = std::round(fps);
  if (std::abs(fps - snapped) < 1e-6) fps = snapped;
  trace.fps = fps;
  trace.samples = Eigen::Map<const Eigen::ArrayXd>(values.data(),
                                                   static_cast<Eigen::Index>(values.size()));
  return trace;
}

void write_trace(const Trace& trace, const std::string& path) {
  if (!(trace.fps > 0.0)) throw NumericError("write_trace: fps must be positive");
  if (trace.size() < 2) throw NumericError("write_trace: need at least 2 samples");
  std::string out = "t,value\n";
  char buf[64];
  for (int i = 0; i < trace.size(); ++i) {
    const double t = static_cast<double>(i) / trace.fps;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t, trace.samples(i));
    out += buf;
  }
  dump(path, out);
}

}  // namespace rppg
