#include "langevin/track_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace langevin {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view token, std::size_t line) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || end != token.data() + token.size() || !std::isfinite(v))
    throw ParseError("bad number '" + std::string(token) + "'", line);
  return v;
}

}  // namespace

Track read_track_csv(std::istream& in, double time_scale) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  const auto header = split_csv(line);
  if (header.size() != 3 || header[0] != "t" || header[1] != "x" || header[2] != "y")
    throw ParseError("track CSV header must be 't,x,y'", line_no);

  std::vector<double> t, x, y;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3) throw ParseError("expected 3 fields", line_no);
    t.push_back(parse_number(fields[0], line_no) * time_scale);
    x.push_back(parse_number(fields[1], line_no));
    y.push_back(parse_number(fields[2], line_no));
  }
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixX2d xy(n, 2);
  xy.col(0) = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  xy.col(1) = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
  return Track(Eigen::Map<const Eigen::VectorXd>(t.data(), n), std::move(xy));
}

Track read_track_csv(const std::filesystem::path& path, double time_scale) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_track_csv(in, time_scale);
}

void write_track_csv(const Track& track, std::ostream& out) {
  out << "t,x,y\n";
  char buf[128];
  for (Eigen::Index k = 0; k < track.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", track.times(k),
                  track.points(k, 0), track.points(k, 1));
    out << buf;
  }
}

void write_track_csv(const Track& track, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_track_csv(track, out);
}

}  // namespace langevin
