#pragma once

#include "rppg/types.hpp"

#include <string>

namespace rppg {

// Bit-exact containers. All multi-byte fields little-endian.
//
// .rpgv  magic "RPGV", version u16 (=1), width/height/frames u32, channels u8
//        (=3), fps f32, then frames*height*width*3 bytes of row-major
//        interleaved RGB. Samples map to [0,1] by division by 255.
// .rpgm  magic "RPGM", version u16 (=1), rows/frames/channels u32 (=63/T/6),
//        fps f32, then rows*frames*channels f32 values ordered
//        (row, frame, channel) row-major.
// landmark JSON  {"width", "height", "frames": [ {roi: [[x,y],...], ...} ]}
//        with exactly the six canonical ROI keys per frame.
// trace CSV  header "t,value"; uniformly spaced seconds; fps recovered from
//        the spacing and snapped to an integer rate when within 1e-6.
//
// Readers throw FormatError on any structural violation (magic, version,
// sizes, schema, bounds, non-finite payload, non-uniform spacing).

VideoTensor read_raw_video(const std::string& path);
void write_raw_video(const VideoTensor& video, const std::string& path);

RoiPolygonTrack read_landmarks(const std::string& path);
void write_landmarks(const RoiPolygonTrack& track, const std::string& path);

SpatioTemporalMap read_map(const std::string& path);
void write_map(const SpatioTemporalMap& map, const std::string& path);

Trace read_trace(const std::string& path);
void write_trace(const Trace& trace, const std::string& path);

}  // namespace rppg
