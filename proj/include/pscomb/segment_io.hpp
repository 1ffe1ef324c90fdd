#pragma once

#include <iosfwd>
#include <string>

#include "pscomb/segments.hpp"

namespace pscomb {

/// CSV with header `x1,y1,x2,y2`, one segment per row, 17 significant digits.
void write_segments(std::ostream& out, const SegmentSet& sigma);
void save_segments(const std::string& path, const SegmentSet& sigma);

/// Throws ParameterError on a missing header or malformed row.
SegmentSet read_segments(std::istream& in);
SegmentSet load_segments(const std::string& path);

}  // namespace pscomb
