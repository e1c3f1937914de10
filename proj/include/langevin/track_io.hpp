#pragma once

#include <filesystem>
#include <iosfwd>

#include "langevin/langevin.hpp"

namespace langevin {

// Track CSV: header "t,x,y", one location per row, %.17g precision.
// `time_scale` multiplies the parsed timestamps (e.g. 1/3600 turns seconds
// into hours).
Track read_track_csv(std::istream& in, double time_scale = 1.0);
Track read_track_csv(const std::filesystem::path& path, double time_scale = 1.0);

void write_track_csv(const Track& track, std::ostream& out);
void write_track_csv(const Track& track, const std::filesystem::path& path);

}  // namespace langevin
