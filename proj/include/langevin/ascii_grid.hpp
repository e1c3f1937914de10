#pragma once

#include <filesystem>
#include <iosfwd>

#include "langevin/raster.hpp"

namespace langevin {

// ESRI ASCII grid I/O. The file header references the lower-left cell
// corner; rasters in memory reference the lower-left cell center, so the
// origin shifts by half a cell on the way in and out. The first data row in
// the file is the highest y.
//
// Reading accepts xllcenter/yllcenter as well. A value equal to
// NODATA_value raises NoDataPresent; malformed input raises ParseError.
Raster read_ascii_grid(std::istream& in);
Raster read_ascii_grid(const std::filesystem::path& path);

// Values are written in scientific notation with 15 significant digits.
void write_ascii_grid(const Raster& raster, std::ostream& out);
void write_ascii_grid(const Raster& raster, const std::filesystem::path& path);

}  // namespace langevin
