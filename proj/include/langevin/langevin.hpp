#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>

#include "langevin/rsf.hpp"

namespace langevin {

// Time-ordered 2-D locations; row k of `points` was observed at times(k).
struct Track {
  Eigen::VectorXd times;
  Eigen::MatrixX2d points;

  Track() = default;
  Track(Eigen::VectorXd t, Eigen::MatrixX2d xy);

  Eigen::Index size() const { return times.size(); }
  Point point(Eigen::Index k) const { return points.row(k).transpose(); }

  // Throws InvalidArgument on length mismatch or non-finite entries and
  // NonIncreasingTimes when timestamps do not strictly increase.
  void validate() const;
};

// Policy when a proposed step leaves the gridded covariates' domain.
enum class EscapePolicy { clamp, error };

struct SimConfig {
  RsfModel model;
  Point x0 = Point::Zero();
  double dt = 0.01;
  Eigen::Index n_steps = 1;
  std::uint64_t seed = 0;
  EscapePolicy escape = EscapePolicy::clamp;
};

struct Simulation {
  Track track;
  std::size_t clamp_count = 0;  // steps projected back onto the domain
};

// x + (gamma2 dt / 2) grad log pi(x) + gamma sqrt(dt) noise.
Point euler_step(const RsfModel& m, const Point& x, double dt, const Vector2& noise);

// n_steps Euler steps from x0 with t_k = k dt. Noise for each step is the
// next two standard normals (x first) from Rng(seed).
Simulation simulate(const SimConfig& cfg);

// Keeps indices 0, stride, 2 stride, ...
Track thin_regular(const Track& track, Eigen::Index stride);

// Random thinning with exponential waiting times of mean `mean_interval`:
// from the last kept time t, draw W and keep the point whose time is
// nearest t + W, at least one point later than the last kept one.
Track thin_irregular(const Track& track, double mean_interval, std::uint64_t seed);

// First `count` locations (or the whole track when shorter).
Track head(const Track& track, Eigen::Index count);

}  // namespace langevin
