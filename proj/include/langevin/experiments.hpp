#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "langevin/inference.hpp"

namespace langevin {

// Runs fn(0..count-1) on a pool of `threads` workers (0 = hardware
// concurrency). Each index must write only its own output slot.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

// 64-bit FNV-1a, used to stamp output tables with their configuration.
std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t v);

struct ReplicationFailure {
  std::size_t replication;
  std::string stage;
  std::string message;
};

// Analytic-covariate benchmark: two wavelets plus squared distance to the
// origin, fitted once with exact gradients and once with the wavelets
// sampled on a coarse grid and interpolated.
struct Scenario1Config {
  std::size_t replications = 100;
  std::uint64_t seed = 1;
  Eigen::Vector3d beta{-1.0, 0.5, -0.05};
  double gamma2 = 1.0;
  double dt = 0.01;
  double interval = 0.5;       // observation interval after thinning
  Eigen::Index points = 300;   // locations kept per replication
  SineAxis second_sine_axis = SineAxis::z1;
  Eigen::Index grid_nodes = 8;      // nodes per side of the discretized grid
  double grid_half_width = 12.0;    // discretized grid spans [-w, w]^2
  double start_half_width = 15.0;   // start locations drawn from the UD on [-w, w]^2
  double start_cell_size = 0.1;
  double alpha = 0.05;
  unsigned threads = 0;
  EscapePolicy escape = EscapePolicy::clamp;

  std::string describe() const;
};

struct Scenario1Replication {
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  std::optional<FitResult> analytic;
  std::optional<FitResult> discretized;
};

struct Scenario1Result {
  std::vector<Scenario1Replication> replications;
  std::vector<ReplicationFailure> failures;
};

std::vector<CovariateProvider> scenario1_covariates(SineAxis axis);
Geometry scenario1_grid(const Scenario1Config& cfg);

Scenario1Result run_scenario1(const Scenario1Config& cfg);

// Long table: replication,mode,parameter,estimate (beta1..3, gamma2).
void write_scenario1_table(const Scenario1Result& result, const Scenario1Config& cfg,
                           std::ostream& out);

// Random-field benchmark: two smoothed uniform fields, tracks simulated at a
// fine step and thinned to several observation intervals.
struct Scenario2Config {
  std::size_t tracks = 50;
  Eigen::Index points = 250;   // locations kept per track and level
  std::vector<double> intervals{0.01, 0.02, 0.05, 0.1, 0.25, 0.5, 1.0};
  Eigen::Vector2d beta{2.0, 4.0};
  double gamma2 = 1.0;
  double dt = 0.01;
  double rho = 10.0;
  double half_width = 50.0;    // fields cover [-w, w]^2
  double cell_size = 1.0;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  unsigned threads = 0;
  EscapePolicy escape = EscapePolicy::clamp;
  bool allow_clamped = false;  // fit tracks even if a step was clamped
  // Common start location for every track; when unset, starts are drawn
  // from the stationary UD.
  std::optional<Point> start = Point::Zero();

  std::string describe() const;
};

struct LevelResult {
  std::string sampling;          // "regular" or "irregular"
  double target_interval = 0;
  double mean_interval = 0;      // realised mean gap over all kept tracks
  double sd_interval = 0;
  std::size_t tracks_used = 0;
  std::size_t locations = 0;
  FitResult fit;
};

struct Scenario2Result {
  std::optional<Raster> c1;
  std::optional<Raster> c2;
  std::vector<LevelResult> levels;
  std::size_t clamped_tracks = 0;
  std::vector<ReplicationFailure> failures;
};

// The two covariate fields, seeded from (seed, field index).
std::pair<Raster, Raster> scenario2_fields(const Scenario2Config& cfg);

// Regular thinning at every interval in cfg.intervals.
Scenario2Result run_scenario2(const Scenario2Config& cfg);

// Regular and irregular thinning of the same fine tracks at each interval
// in cfg.intervals (used as the mean interval for irregular thinning).
Scenario2Result run_irregular(const Scenario2Config& cfg);

// sampling,target_interval,mean_interval,sd_interval,tracks,locations,
// parameter,estimate,se,ci_lo,ci_hi
void write_levels_table(const Scenario2Result& result, const std::string& config_text,
                        std::uint64_t seed, std::ostream& out);

}  // namespace langevin
