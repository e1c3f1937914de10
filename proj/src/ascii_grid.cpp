#include "langevin/ascii_grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace langevin {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

std::optional<double> to_double(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) return std::nullopt;
  return value;
}

double require_double(std::string_view token, std::size_t line) {
  if (auto v = to_double(token)) return *v;
  throw ParseError("expected a number, got '" + std::string(token) + "'", line);
}

}  // namespace

Raster read_ascii_grid(std::istream& in) {
  std::map<std::string, std::pair<double, std::size_t>> header;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> pending;
  std::string pending_storage;

  // Header: "key value" lines until the first line starting with a number.
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (to_double(tokens.front())) {
      pending_storage = line;
      break;
    }
    if (tokens.size() != 2)
      throw ParseError("header line must be 'key value'", line_no);
    const std::string key = lower(tokens[0]);
    if (header.count(key)) throw ParseError("duplicate header key '" + key + "'", line_no);
    header[key] = {require_double(tokens[1], line_no), line_no};
  }

  auto get = [&](std::initializer_list<const char*> keys) -> std::optional<std::pair<double, std::size_t>> {
    for (const char* k : keys)
      if (auto it = header.find(k); it != header.end()) return it->second;
    return std::nullopt;
  };
  auto need = [&](const char* key) {
    auto v = get({key});
    if (!v) throw ParseError(std::string("missing header key '") + key + "'", line_no);
    return *v;
  };
  auto as_count = [](std::pair<double, std::size_t> v, const char* key) {
    if (v.first < 2 || v.first != std::floor(v.first))
      throw ParseError(std::string(key) + " must be an integer >= 2", v.second);
    return static_cast<Eigen::Index>(v.first);
  };

  Geometry g;
  g.n_x = as_count(need("ncols"), "ncols");
  g.n_y = as_count(need("nrows"), "nrows");
  const auto cell = need("cellsize");
  if (!(cell.first > 0)) throw ParseError("cellsize must be positive", cell.second);
  g.cell_size = cell.first;

  if (auto c = get({"xllcorner"})) {
    g.x_min = c->first + g.cell_size / 2;
  } else if (auto m = get({"xllcenter"})) {
    g.x_min = m->first;
  } else {
    throw ParseError("missing header key 'xllcorner'", line_no);
  }
  if (auto c = get({"yllcorner"})) {
    g.y_min = c->first + g.cell_size / 2;
  } else if (auto m = get({"yllcenter"})) {
    g.y_min = m->first;
  } else {
    throw ParseError("missing header key 'yllcorner'", line_no);
  }
  const auto nodata = get({"nodata_value"});

  Raster::Values values(g.n_y, g.n_x);
  Eigen::Index count = 0;
  const Eigen::Index total = g.n_x * g.n_y;
  auto consume = [&](const std::string& text) {
    for (auto token : split_ws(text)) {
      if (count >= total) throw ParseError("more values than ncols*nrows", line_no);
      const double v = require_double(token, line_no);
      if (nodata && v == nodata->first)
        throw NoDataPresent("NODATA value at line " + std::to_string(line_no) +
                            "; missing cells are not supported");
      if (!std::isfinite(v)) throw ParseError("non-finite value", line_no);
      const Eigen::Index row = count / g.n_x;
      const Eigen::Index col = count % g.n_x;
      values(g.n_y - 1 - row, col) = v;
      ++count;
    }
  };
  if (!pending_storage.empty()) consume(pending_storage);
  while (std::getline(in, line)) {
    ++line_no;
    consume(line);
  }
  if (count != total)
    throw ParseError("expected " + std::to_string(total) + " values, found " +
                         std::to_string(count),
                     line_no);
  return Raster(g, std::move(values));
}

Raster read_ascii_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_ascii_grid(in);
}

void write_ascii_grid(const Raster& raster, std::ostream& out) {
  const auto& g = raster.geometry();
  const auto& v = raster.values();

  double nodata = -9999.0;
  while ((v.array() == nodata).any()) nodata -= 1.0;

  char buf[64];
  auto num17 = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  out << "ncols " << g.n_x << '\n'
      << "nrows " << g.n_y << '\n'
      << "xllcorner " << num17(g.x_min - g.cell_size / 2) << '\n'
      << "yllcorner " << num17(g.y_min - g.cell_size / 2) << '\n'
      << "cellsize " << num17(g.cell_size) << '\n'
      << "NODATA_value " << num17(nodata) << '\n';
  for (Eigen::Index row = g.n_y - 1; row >= 0; --row) {
    for (Eigen::Index col = 0; col < g.n_x; ++col) {
      std::snprintf(buf, sizeof buf, "%.14e", v(row, col));
      if (col > 0) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

void write_ascii_grid(const Raster& raster, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_ascii_grid(raster, out);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace langevin
