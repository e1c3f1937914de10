#include "langevin/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace langevin {

Track::Track(Eigen::VectorXd t, Eigen::MatrixX2d xy)
    : times(std::move(t)), points(std::move(xy)) {
  validate();
}

void Track::validate() const {
  if (times.size() != points.rows())
    throw InvalidArgument("track times and points differ in length");
  if (!times.allFinite() || !points.allFinite())
    throw InvalidArgument("track contains non-finite values");
  for (Eigen::Index k = 1; k < times.size(); ++k)
    if (!(times(k) > times(k - 1)))
      throw NonIncreasingTimes(
          "timestamps must strictly increase (index " + std::to_string(k) + ")",
          static_cast<std::size_t>(k));
}

Point euler_step(const RsfModel& m, const Point& x, double dt, const Vector2& noise) {
  const double g2 = m.gamma2();
  return x + (0.5 * g2 * dt) * grad_log_pi(m, x) + std::sqrt(g2 * dt) * noise;
}

Simulation simulate(const SimConfig& cfg) {
  if (!(cfg.dt > 0)) throw InvalidArgument("dt must be positive");
  if (cfg.n_steps < 1) throw InvalidArgument("n_steps must be at least 1");
  const auto domain = cfg.model.domain();
  if (domain && !domain->contains(cfg.x0)) throw OutOfDomain("x0 outside covariate domain");

  Simulation sim;
  Eigen::VectorXd t(cfg.n_steps + 1);
  Eigen::MatrixX2d xy(cfg.n_steps + 1, 2);
  Rng rng(cfg.seed);
  Point x = cfg.x0;
  t(0) = 0.0;
  xy.row(0) = x.transpose();
  for (Eigen::Index k = 1; k <= cfg.n_steps; ++k) {
    Vector2 noise;
    noise.x() = rng.normal();
    noise.y() = rng.normal();
    x = euler_step(cfg.model, x, cfg.dt, noise);
    if (!x.allFinite())
      throw NonFinite("simulation diverged at step " + std::to_string(k));
    if (domain && !domain->contains(x)) {
      if (cfg.escape == EscapePolicy::error)
        throw DomainEscape("trajectory left the covariate domain at step " +
                               std::to_string(k),
                           static_cast<std::size_t>(k));
      x = domain->clamp(x);
      ++sim.clamp_count;
    }
    t(k) = double(k) * cfg.dt;
    xy.row(k) = x.transpose();
  }
  sim.track.times = std::move(t);
  sim.track.points = std::move(xy);
  return sim;
}

namespace {

Track select(const Track& track, const std::vector<Eigen::Index>& idx) {
  Eigen::VectorXd t(idx.size());
  Eigen::MatrixX2d xy(idx.size(), 2);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    t(k) = track.times(idx[k]);
    xy.row(k) = track.points.row(idx[k]);
  }
  Track out;
  out.times = std::move(t);
  out.points = std::move(xy);
  return out;
}

}  // namespace

Track thin_regular(const Track& track, Eigen::Index stride) {
  if (stride < 1) throw InvalidArgument("stride must be at least 1");
  std::vector<Eigen::Index> idx;
  for (Eigen::Index k = 0; k < track.size(); k += stride) idx.push_back(k);
  return select(track, idx);
}

Track thin_irregular(const Track& track, double mean_interval, std::uint64_t seed) {
  if (!(mean_interval > 0)) throw InvalidArgument("mean_interval must be positive");
  if (track.size() == 0) return track;
  Rng rng(seed);
  std::vector<Eigen::Index> idx{0};
  const double* begin = track.times.data();
  const double* end = begin + track.size();
  Eigen::Index last = 0;
  while (true) {
    const double target = track.times(last) + rng.exponential(mean_interval);
    auto k = static_cast<Eigen::Index>(std::lower_bound(begin, end, target) - begin);
    if (k >= track.size()) break;
    if (k > last + 1 && target - track.times(k - 1) < track.times(k) - target) --k;
    last = std::max(k, last + 1);
    idx.push_back(last);
  }
  return select(track, idx);
}

Track head(const Track& track, Eigen::Index count) {
  const Eigen::Index n = std::min(count, track.size());
  Track out;
  out.times = track.times.head(n);
  out.points = track.points.topRows(n);
  return out;
}

}  // namespace langevin
