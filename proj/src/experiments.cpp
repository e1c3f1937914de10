#include "langevin/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "langevin/random.hpp"

namespace langevin {

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string list(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + g17(v(i));
  return s;
}

const char* escape_name(EscapePolicy p) { return p == EscapePolicy::clamp ? "clamp" : "error"; }

Eigen::Index stride_for(double interval, double dt) {
  const double ratio = interval / dt;
  const auto stride = static_cast<Eigen::Index>(std::llround(ratio));
  if (stride < 1 || std::abs(ratio - double(stride)) > 1e-9 * ratio)
    throw InvalidArgument("interval " + g17(interval) + " is not a multiple of dt " + g17(dt));
  return stride;
}

Geometry square_grid(double half_width, double cell_size) {
  const auto n = static_cast<Eigen::Index>(std::llround(2 * half_width / cell_size)) + 1;
  return {-half_width, -half_width, cell_size, n, n};
}

}  // namespace

// ---------------------------------------------------------------------------
// Scenario 1

std::string Scenario1Config::describe() const {
  std::ostringstream out;
  out << "scenario=1\nreplications=" << replications << "\nseed=" << seed
      << "\nbeta=" << list(beta) << "\ngamma2=" << g17(gamma2) << "\ndt=" << g17(dt)
      << "\ninterval=" << g17(interval) << "\npoints=" << points
      << "\nsecond_sine_axis=" << (second_sine_axis == SineAxis::z1 ? "z1" : "z2")
      << "\ngrid_nodes=" << grid_nodes << "\ngrid_half_width=" << g17(grid_half_width)
      << "\nstart_half_width=" << g17(start_half_width)
      << "\nstart_cell_size=" << g17(start_cell_size) << "\nalpha=" << g17(alpha)
      << "\nescape=" << escape_name(escape) << "\nrng=" << Rng::kVersion << '\n';
  return out.str();
}

std::vector<CovariateProvider> scenario1_covariates(SineAxis axis) {
  return {CovariateProvider::wavelet(scenario1_wavelet(1, axis)),
          CovariateProvider::wavelet(scenario1_wavelet(2, axis)),
          CovariateProvider::squared_distance(Point::Zero())};
}

Geometry scenario1_grid(const Scenario1Config& cfg) {
  if (cfg.grid_nodes < 2) throw InvalidArgument("grid_nodes must be at least 2");
  const double w = cfg.grid_half_width;
  return {-w, -w, 2 * w / double(cfg.grid_nodes - 1), cfg.grid_nodes, cfg.grid_nodes};
}

Scenario1Result run_scenario1(const Scenario1Config& cfg) {
  if (cfg.replications < 1) throw InvalidArgument("replications must be at least 1");
  if (cfg.points < 2) throw InvalidArgument("points must be at least 2");
  const Eigen::Index stride = stride_for(cfg.interval, cfg.dt);

  const auto analytic = scenario1_covariates(cfg.second_sine_axis);
  const RsfModel model(analytic, cfg.beta, cfg.gamma2);
  const Geometry grid = scenario1_grid(cfg);
  const std::vector<CovariateProvider> discretized{
      CovariateProvider::gridded(rasterize(analytic[0], grid)),
      CovariateProvider::gridded(rasterize(analytic[1], grid)), analytic[2]};
  const Raster start_ud =
      ud_raster(model, square_grid(cfg.start_half_width, cfg.start_cell_size));

  Scenario1Result result;
  result.replications.resize(cfg.replications);
  std::vector<std::vector<ReplicationFailure>> failures(cfg.replications);

  parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
    auto& rep = result.replications[r];
    rep.replication = r;
    rep.seed = derive_seed(cfg.seed, r);
    Rng start_rng(derive_seed(rep.seed, 0));
    SimConfig sim{model, sample_from_ud(start_ud, start_rng), cfg.dt,
                  (cfg.points - 1) * stride, derive_seed(rep.seed, 1), cfg.escape};
    Track track;
    try {
      track = head(thin_regular(simulate(sim).track, stride), cfg.points);
    } catch (const Error& e) {
      failures[r].push_back({r, "simulate", e.what()});
      return;
    }
    try {
      rep.analytic = fit_pooled(std::span(&track, 1), analytic, cfg.alpha);
    } catch (const Error& e) {
      failures[r].push_back({r, "analytic", e.what()});
    }
    try {
      rep.discretized = fit_pooled(std::span(&track, 1), discretized, cfg.alpha);
    } catch (const Error& e) {
      failures[r].push_back({r, "discretized", e.what()});
    }
  });
  for (auto& f : failures)
    result.failures.insert(result.failures.end(), f.begin(), f.end());
  return result;
}

void write_scenario1_table(const Scenario1Result& result, const Scenario1Config& cfg,
                           std::ostream& out) {
  const std::string text = cfg.describe();
  out << "# config_hash=" << hex64(fnv1a(text)) << '\n';
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  out << "# replication_seeds=";
  for (std::size_t r = 0; r < result.replications.size(); ++r)
    out << (r ? "," : "") << result.replications[r].seed;
  out << '\n';
  for (const auto& f : result.failures)
    out << "# failure replication=" << f.replication << " stage=" << f.stage << ": "
        << f.message << '\n';
  out << "replication,mode,parameter,estimate\n";
  for (const auto& rep : result.replications) {
    for (const auto& [mode, fit] : {std::pair{"analytic", &rep.analytic},
                                    std::pair{"discretized", &rep.discretized}}) {
      if (!*fit) continue;
      for (Eigen::Index j = 0; j < (*fit)->beta_hat.size(); ++j)
        out << rep.replication << ',' << mode << ",beta" << j + 1 << ','
            << g17((*fit)->beta_hat(j)) << '\n';
      out << rep.replication << ',' << mode << ",gamma2," << g17((*fit)->gamma2_hat) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Scenario 2 and the irregular-sampling study

std::string Scenario2Config::describe() const {
  std::ostringstream out;
  out << "tracks=" << tracks << "\npoints=" << points << "\nintervals=";
  for (std::size_t i = 0; i < intervals.size(); ++i) out << (i ? "," : "") << g17(intervals[i]);
  out << "\nbeta=" << list(beta) << "\ngamma2=" << g17(gamma2) << "\ndt=" << g17(dt)
      << "\nrho=" << g17(rho) << "\nhalf_width=" << g17(half_width)
      << "\ncell_size=" << g17(cell_size) << "\nseed=" << seed << "\nalpha=" << g17(alpha)
      << "\nescape=" << escape_name(escape) << "\nallow_clamped=" << allow_clamped
      << "\nstart=" << (start ? g17(start->x()) + "," + g17(start->y()) : "ud")
      << "\nrng=" << Rng::kVersion << '\n';
  return out.str();
}

std::pair<Raster, Raster> scenario2_fields(const Scenario2Config& cfg) {
  const Geometry g = square_grid(cfg.half_width, cfg.cell_size);
  const std::uint64_t field_master = derive_seed(cfg.seed, 0xF1E1D5ULL);
  return {generate_random_field({g, cfg.rho, derive_seed(field_master, 0)}),
          generate_random_field({g, cfg.rho, derive_seed(field_master, 1)})};
}

namespace {

struct LevelSpec {
  std::string sampling;
  double interval;
  std::size_t index;  // position among all levels, seeds irregular thinning
};

Scenario2Result run_levels(const Scenario2Config& cfg, const std::vector<LevelSpec>& levels) {
  if (cfg.tracks < 1) throw InvalidArgument("tracks must be at least 1");
  if (cfg.points < 2) throw InvalidArgument("points must be at least 2");
  if (levels.empty()) throw InvalidArgument("no thinning levels");

  auto [c1, c2] = scenario2_fields(cfg);
  const std::vector<CovariateProvider> covariates{CovariateProvider::gridded(c1),
                                                  CovariateProvider::gridded(c2)};
  const RsfModel model(covariates, cfg.beta, cfg.gamma2);
  const Raster start_ud = ud_raster(model, c1.geometry());

  // Fine tracks long enough for every level: irregular levels get twice the
  // nominal span so that `points` locations survive random gaps.
  double span = 0;
  for (const auto& l : levels) {
    if (!(l.interval >= cfg.dt)) throw InvalidArgument("interval shorter than dt");
    const double factor = l.sampling == "irregular" ? 2.0 : 1.0;
    span = std::max(span, factor * double(cfg.points - 1) * l.interval);
  }
  const auto n_steps = static_cast<Eigen::Index>(std::ceil(span / cfg.dt - 1e-9));

  // thinned[level][track]
  std::vector<std::vector<std::optional<Track>>> thinned(
      levels.size(), std::vector<std::optional<Track>>(cfg.tracks));
  std::vector<std::vector<ReplicationFailure>> failures(cfg.tracks);
  std::vector<char> clamped(cfg.tracks, 0);

  parallel_for(cfg.tracks, cfg.threads, [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(cfg.seed, r);
    Rng start_rng(derive_seed(seed, 0));
    const Point x0 = cfg.start ? *cfg.start : sample_from_ud(start_ud, start_rng);
    SimConfig sim{model, x0, cfg.dt, n_steps,
                  derive_seed(seed, 1), cfg.escape};
    Simulation fine;
    try {
      fine = simulate(sim);
    } catch (const Error& e) {
      failures[r].push_back({r, "simulate", e.what()});
      return;
    }
    if (fine.clamp_count > 0) {
      clamped[r] = 1;
      if (!cfg.allow_clamped) {
        failures[r].push_back({r, "simulate",
                               std::to_string(fine.clamp_count) +
                                   " clamped steps; track excluded"});
        return;
      }
    }
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const auto& l = levels[k];
      Track t = l.sampling == "irregular"
                    ? thin_irregular(fine.track, l.interval, derive_seed(seed, 2 + l.index))
                    : thin_regular(fine.track, stride_for(l.interval, cfg.dt));
      thinned[k][r] = head(t, cfg.points);
    }
  });

  Scenario2Result result;
  for (auto& f : failures) result.failures.insert(result.failures.end(), f.begin(), f.end());
  for (char c : clamped) result.clamped_tracks += c;

  for (std::size_t k = 0; k < levels.size(); ++k) {
    std::vector<Track> kept;
    for (auto& t : thinned[k])
      if (t && t->size() >= 2) kept.push_back(std::move(*t));
    LevelResult level;
    level.sampling = levels[k].sampling;
    level.target_interval = levels[k].interval;
    level.tracks_used = kept.size();
    double sum = 0, sum2 = 0;
    std::size_t gaps = 0;
    for (const auto& t : kept) {
      level.locations += static_cast<std::size_t>(t.size());
      for (Eigen::Index i = 0; i + 1 < t.size(); ++i) {
        const double g = t.times(i + 1) - t.times(i);
        sum += g;
        sum2 += g * g;
        ++gaps;
      }
    }
    if (gaps > 0) {
      level.mean_interval = sum / double(gaps);
      level.sd_interval =
          std::sqrt(std::max(0.0, (sum2 - sum * sum / double(gaps)) / double(gaps - 1)));
    }
    level.fit = fit_pooled(kept, covariates, cfg.alpha);
    result.levels.push_back(std::move(level));
  }
  result.c1 = std::move(c1);
  result.c2 = std::move(c2);
  return result;
}

}  // namespace

Scenario2Result run_scenario2(const Scenario2Config& cfg) {
  std::vector<LevelSpec> levels;
  for (std::size_t i = 0; i < cfg.intervals.size(); ++i)
    levels.push_back({"regular", cfg.intervals[i], i});
  return run_levels(cfg, levels);
}

Scenario2Result run_irregular(const Scenario2Config& cfg) {
  std::vector<LevelSpec> levels;
  for (std::size_t i = 0; i < cfg.intervals.size(); ++i)
    levels.push_back({"regular", cfg.intervals[i], i});
  for (std::size_t i = 0; i < cfg.intervals.size(); ++i)
    levels.push_back({"irregular", cfg.intervals[i], cfg.intervals.size() + i});
  return run_levels(cfg, levels);
}

void write_levels_table(const Scenario2Result& result, const std::string& config_text,
                        std::uint64_t seed, std::ostream& out) {
  out << "# config_hash=" << hex64(fnv1a(config_text)) << '\n';
  std::istringstream lines(config_text);
  for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  out << "# master_seed=" << seed << " clamped_tracks=" << result.clamped_tracks << '\n';
  for (const auto& f : result.failures)
    out << "# failure track=" << f.replication << " stage=" << f.stage << ": " << f.message
        << '\n';
  out << "sampling,target_interval,mean_interval,sd_interval,tracks,locations,parameter,"
         "estimate,se,ci_lo,ci_hi\n";
  for (const auto& l : result.levels) {
    const std::string prefix = l.sampling + ',' + g17(l.target_interval) + ',' +
                               g17(l.mean_interval) + ',' + g17(l.sd_interval) + ',' +
                               std::to_string(l.tracks_used) + ',' +
                               std::to_string(l.locations) + ',';
    const Eigen::VectorXd se = l.fit.beta_se();
    for (Eigen::Index j = 0; j < l.fit.beta_hat.size(); ++j)
      out << prefix << "beta" << j + 1 << ',' << g17(l.fit.beta_hat(j)) << ',' << g17(se(j))
          << ',' << g17(l.fit.ci_beta[j].lo) << ',' << g17(l.fit.ci_beta[j].hi) << '\n';
    out << prefix << "gamma2," << g17(l.fit.gamma2_hat) << ",," << g17(l.fit.ci_gamma2.lo)
        << ',' << g17(l.fit.ci_gamma2.hi) << '\n';
  }
}

}  // namespace langevin
