#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "langevin/ascii_grid.hpp"
#include "langevin/covariate_spec.hpp"
#include "langevin/experiments.hpp"
#include "langevin/fit_io.hpp"
#include "langevin/random.hpp"
#include "langevin/track_io.hpp"

namespace fs = std::filesystem;
using namespace langevin;

namespace {

struct Common {
  std::uint64_t seed = 1;
  double alpha = 0.05;
  std::string out = ".";
  bool paper_scale = false;
  EscapePolicy escape = EscapePolicy::clamp;
  unsigned threads = 0;
};

const std::map<std::string, EscapePolicy> kEscape{{"clamp", EscapePolicy::clamp},
                                                   {"error", EscapePolicy::error}};
const std::map<std::string, SineAxis> kAxis{{"z1", SineAxis::z1}, {"z2", SineAxis::z2}};

fs::path out_dir(const Common& c) {
  fs::path dir(c.out);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path.string());
  return f;
}

std::vector<CovariateProvider> parse_covariates(const std::vector<std::string>& specs) {
  std::vector<CovariateProvider> out;
  for (const auto& s : specs) out.push_back(parse_covariate_spec(s));
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// "x_min,y_min,cell,n_x,n_y", node-center convention.
Geometry parse_grid(const std::vector<double>& g) {
  if (g.size() != 5) throw InvalidArgument("--grid needs x_min,y_min,cell,n_x,n_y");
  Geometry geo{g[0], g[1], g[2], static_cast<Eigen::Index>(g[3]), static_cast<Eigen::Index>(g[4])};
  geo.validate();
  return geo;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void print_levels(const Scenario2Result& r) {
  std::printf("%-10s %8s %10s %9s %12s %12s %12s %12s %10s\n", "sampling", "interval", "mean_gap",
              "tracks", "beta1", "se1", "beta2", "se2", "gamma2");
  for (const auto& l : r.levels) {
    const Eigen::VectorXd se = l.fit.beta_se();
    std::printf("%-10s %8g %10.4g %9zu %12.5g %12.5g %12.5g %12.5g %10.5g\n", l.sampling.c_str(),
                l.target_interval, l.mean_interval, l.tracks_used, l.fit.beta_hat(0), se(0),
                l.fit.beta_hat(1), se(1), l.fit.gamma2_hat);
  }
  if (r.clamped_tracks) std::printf("tracks excluded after clamping: %zu\n", r.clamped_tracks);
}

// Scenario-2 style options shared by `scenario2` and `irregular`.
struct FieldOptions {
  std::size_t tracks = 50;
  Eigen::Index points = 250;
  std::vector<double> intervals;
  std::vector<double> beta{2.0, 4.0};
  double gamma2 = 1.0;
  double dt = 0.01;
  double rho = 10.0;
  double half_width = 50.0;
  double cell_size = 1.0;
  bool allow_clamped = false;
  std::string start = "0,0";

  void add(CLI::App* cmd) {
    cmd->add_option("--tracks", tracks, "Tracks simulated")->capture_default_str();
    cmd->add_option("--points", points, "Locations kept per track and level")->capture_default_str();
    cmd->add_option("--intervals", intervals, "Observation intervals")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--beta", beta, "True coefficients")->delimiter(',')->capture_default_str();
    cmd->add_option("--gamma2", gamma2, "True speed parameter")->capture_default_str();
    cmd->add_option("--dt", dt, "Simulation step")->capture_default_str();
    cmd->add_option("--rho", rho, "Smoothing radius of the random fields")->capture_default_str();
    cmd->add_option("--half-width", half_width, "Fields cover [-w, w]^2")->capture_default_str();
    cmd->add_option("--cell-size", cell_size, "Field cell size")->capture_default_str();
    cmd->add_flag("--allow-clamped", allow_clamped, "Keep tracks that hit the field boundary");
    cmd->add_option("--start", start, "Start location x,y or 'ud' to draw from the UD")
        ->capture_default_str();
  }

  Scenario2Config config(const Common& c, std::size_t paper_tracks) const {
    Scenario2Config cfg;
    cfg.tracks = c.paper_scale ? paper_tracks : tracks;
    cfg.points = points;
    cfg.intervals = intervals;
    if (beta.size() != 2) throw InvalidArgument("--beta needs two values");
    cfg.beta = Eigen::Vector2d(beta[0], beta[1]);
    cfg.gamma2 = gamma2;
    cfg.dt = dt;
    cfg.rho = rho;
    cfg.half_width = half_width;
    cfg.cell_size = cell_size;
    cfg.seed = c.seed;
    cfg.alpha = c.alpha;
    cfg.threads = c.threads;
    cfg.escape = c.escape;
    cfg.allow_clamped = allow_clamped;
    if (start == "ud") {
      cfg.start.reset();
    } else {
      double x = 0, y = 0;
      char comma = 0;
      std::istringstream in(start);
      if (!(in >> x >> comma >> y) || comma != ',')
        throw InvalidArgument("--start must be x,y or ud");
      cfg.start = Point(x, y);
    }
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Langevin movement model: simulation and closed-form estimation"};
  app.set_config("--config", "", "INI/TOML file with option values (sections per subcommand)");
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--seed", common.seed, "Master seed")->capture_default_str();
  app.add_option("--alpha", common.alpha, "1 - confidence level")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12))
      ->capture_default_str();
  app.add_option("--out", common.out, "Output directory")->capture_default_str();
  app.add_flag("--paper-scale", common.paper_scale, "Full replication counts (600 / 200)");
  app.add_option("--escape-policy", common.escape, "Handling of steps leaving a raster")
      ->transform(CLI::CheckedTransformer(kEscape, CLI::ignore_case))
      ->default_str("clamp");
  app.add_option("--threads", common.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();

  // simulate ---------------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate tracks from an RSF model");
  std::vector<std::string> sim_covs;
  std::vector<double> sim_beta{-1.0, 0.5, -0.05};
  double sim_gamma2 = 1.0, sim_dt = 0.01;
  Eigen::Index sim_steps = 1000;
  std::size_t sim_tracks = 1;
  std::vector<double> sim_x0{0.0, 0.0};
  sim_cmd->add_option("--cov", sim_covs, "Covariate spec (default: the scenario-1 covariates)");
  sim_cmd->add_option("--beta", sim_beta, "Coefficients")->delimiter(',')->capture_default_str();
  sim_cmd->add_option("--gamma2", sim_gamma2, "Speed parameter")->capture_default_str();
  sim_cmd->add_option("--dt", sim_dt, "Time step")->capture_default_str();
  sim_cmd->add_option("--steps", sim_steps, "Number of Euler steps")->capture_default_str();
  sim_cmd->add_option("--tracks", sim_tracks, "Number of tracks")->capture_default_str();
  sim_cmd->add_option("--x0", sim_x0, "Start location x,y")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();

  // fit --------------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "Pooled fit of tracks against covariates");
  std::vector<std::string> fit_tracks, fit_covs, fit_names;
  bool seconds_to_hours = false;
  fit_cmd->add_option("--track", fit_tracks, "Track CSV (t,x,y); repeatable")->required();
  fit_cmd->add_option("--cov", fit_covs, "Covariate spec; repeatable")->required();
  fit_cmd->add_option("--name", fit_names, "Covariate names for the table");
  fit_cmd->add_flag("--seconds-to-hours", seconds_to_hours,
                    "Timestamps are seconds; fit with intervals in hours");

  // ud ---------------------------------------------------------------------
  auto* ud_cmd = app.add_subcommand("ud", "Write the normalized UD and its logarithm");
  std::vector<std::string> ud_covs;
  std::vector<double> ud_beta, ud_grid;
  std::string ud_like;
  ud_cmd->add_option("--cov", ud_covs, "Covariate spec; repeatable")->required();
  ud_cmd->add_option("--beta", ud_beta, "Coefficients")->delimiter(',')->required();
  auto* ud_grid_opt =
      ud_cmd->add_option("--grid", ud_grid, "x_min,y_min,cell,n_x,n_y (cell centers)")
          ->delimiter(',');
  ud_cmd->add_option("--like", ud_like, "Take the geometry from this ASCII grid")
      ->excludes(ud_grid_opt);

  // gen-cov ----------------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("gen-cov", "Generate a covariate raster");
  std::vector<double> gen_grid{-50.0, -50.0, 1.0, 101, 101};
  double gen_rho = 10.0;
  std::string gen_cov, gen_name = "covariate.asc";
  gen_cmd->add_option("--grid", gen_grid, "x_min,y_min,cell,n_x,n_y (cell centers)")
      ->delimiter(',')
      ->capture_default_str();
  gen_cmd->add_option("--rho", gen_rho, "Smoothing radius of the random field")
      ->capture_default_str();
  gen_cmd->add_option("--cov", gen_cov, "Rasterize this analytic spec instead of a random field");
  gen_cmd->add_option("--name", gen_name, "Output file name")->capture_default_str();

  // scenario1 --------------------------------------------------------------
  auto* s1_cmd = app.add_subcommand("scenario1", "Analytic-covariate benchmark");
  Scenario1Config s1;
  s1_cmd->add_option("--replications", s1.replications)->capture_default_str();
  s1_cmd->add_option("--points", s1.points)->capture_default_str();
  s1_cmd->add_option("--interval", s1.interval)->capture_default_str();
  s1_cmd->add_option("--dt", s1.dt)->capture_default_str();
  s1_cmd->add_option("--grid-nodes", s1.grid_nodes)->capture_default_str();
  s1_cmd->add_option("--grid-half-width", s1.grid_half_width)->capture_default_str();
  s1_cmd->add_option("--second-sine-axis", s1.second_sine_axis)
      ->transform(CLI::CheckedTransformer(kAxis))
      ->default_str("z1");

  // scenario2 / irregular --------------------------------------------------
  auto* s2_cmd = app.add_subcommand("scenario2", "Random-field sampling-interval sweep");
  FieldOptions s2;
  s2.intervals = {0.01, 0.02, 0.05, 0.1, 0.25, 0.5, 1.0};
  s2.add(s2_cmd);
  auto* irr_cmd = app.add_subcommand("irregular", "Regular vs random thinning");
  FieldOptions irr;
  irr.intervals = {0.05, 0.5};
  irr.tracks = 200;
  irr.add(irr_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim_cmd) {
      const auto covs = sim_covs.empty() ? scenario1_covariates(SineAxis::z1)
                                         : parse_covariates(sim_covs);
      const RsfModel model(covs, to_vector(sim_beta), sim_gamma2);
      const fs::path dir = out_dir(common);
      auto manifest = open_out(dir / "manifest.csv");
      manifest << "# rng=" << Rng::kVersion << " master_seed=" << common.seed << '\n'
               << "file,track,seed,steps,clamp_count\n";
      for (std::size_t k = 0; k < sim_tracks; ++k) {
        const std::uint64_t seed = derive_seed(common.seed, k);
        const Simulation s = simulate(
            {model, Point(sim_x0[0], sim_x0[1]), sim_dt, sim_steps, seed, common.escape});
        const std::string name = "track_" + std::to_string(k) + ".csv";
        write_track_csv(s.track, dir / name);
        manifest << name << ',' << k << ',' << seed << ',' << sim_steps << ',' << s.clamp_count
                 << '\n';
      }
      std::cout << "wrote " << sim_tracks << " track(s) to " << dir.string() << '\n';
    } else if (*fit_cmd) {
      const auto covs = parse_covariates(fit_covs);
      const double scale = seconds_to_hours ? 1.0 / 3600.0 : 1.0;
      std::vector<Track> tracks;
      for (const auto& p : fit_tracks) tracks.push_back(read_track_csv(fs::path(p), scale));
      FitResult result;
      try {
        // One level containing every track.
        const std::vector<std::vector<Track>> levels{tracks};
        result = profile_fit_per_interval(levels, covs, common.alpha).front();
      } catch (const OutOfDomain& e) {
        std::string msg = e.what();
        if (e.track()) msg += " [" + fit_tracks.at(std::stoul(*e.track())) + "]";
        throw OutOfDomain(msg, e.index(), e.track());
      }
      std::vector<std::string> names = fit_names;
      for (std::size_t j = names.size(); j < fit_covs.size(); ++j)
        names.push_back(fit_covs[j].rfind("raster:", 0) == 0
                            ? covariate_label(fit_covs[j])
                            : covariate_label(fit_covs[j]) + std::to_string(j + 1));
      const fs::path dir = out_dir(common);
      open_out(dir / "fit.json") << to_json(result).dump(2) << '\n';
      open_out(dir / "fit.txt") << to_key_value(result);
      std::cout << "tracks=" << tracks.size() << " increments=" << result.n
                << " covariates=" << result.J << '\n'
                << format_table(result, names);
    } else if (*ud_cmd) {
      Geometry geo;
      if (!ud_like.empty())
        geo = read_ascii_grid(fs::path(ud_like)).geometry();
      else if (*ud_grid_opt)
        geo = parse_grid(ud_grid);
      else
        throw InvalidArgument("ud needs --grid or --like");
      const RsfModel model(parse_covariates(ud_covs), to_vector(ud_beta), 1.0);
      const Raster ud = ud_raster(model, geo);
      const Raster log_ud(geo, ud.values().array().log().matrix());
      const fs::path dir = out_dir(common);
      write_ascii_grid(ud, dir / "ud.asc");
      write_ascii_grid(log_ud, dir / "log_ud.asc");
      std::cout << "wrote ud.asc and log_ud.asc to " << dir.string() << '\n';
    } else if (*gen_cmd) {
      const Geometry geo = parse_grid(gen_grid);
      const Raster r = gen_cov.empty()
                           ? generate_random_field({geo, gen_rho, common.seed})
                           : rasterize(parse_covariate_spec(gen_cov), geo);
      const fs::path dir = out_dir(common);
      write_ascii_grid(r, dir / gen_name);
      std::cout << "wrote " << (dir / gen_name).string() << '\n';
    } else if (*s1_cmd) {
      s1.seed = common.seed;
      s1.alpha = common.alpha;
      s1.threads = common.threads;
      s1.escape = common.escape;
      if (common.paper_scale) s1.replications = 600;
      const Scenario1Result r = run_scenario1(s1);
      const fs::path dir = out_dir(common);
      auto table = open_out(dir / "scenario1.csv");
      write_scenario1_table(r, s1, table);

      std::printf("%-12s %12s %12s %12s %12s %10s\n", "mode", "beta1", "beta2", "beta3",
                  "gamma2", "signs_ok");
      for (const char* mode : {"analytic", "discretized"}) {
        std::vector<std::vector<double>> cols(4);
        std::size_t ok = 0, fitted = 0;
        for (const auto& rep : r.replications) {
          const auto& f = std::string(mode) == "analytic" ? rep.analytic : rep.discretized;
          if (!f) continue;
          ++fitted;
          for (int j = 0; j < 3; ++j) cols[j].push_back(f->beta_hat(j));
          cols[3].push_back(f->gamma2_hat);
          if (((f->beta_hat.array() * s1.beta.array()) > 0).all()) ++ok;
        }
        if (!fitted) continue;
        std::printf("%-12s %12.5g %12.5g %12.5g %12.5g %10.3f\n", mode, median(cols[0]),
                    median(cols[1]), median(cols[2]), median(cols[3]),
                    double(ok) / double(fitted));
      }
      if (!r.failures.empty()) std::printf("failed fits: %zu\n", r.failures.size());
    } else if (*s2_cmd || *irr_cmd) {
      const bool irregular = irr_cmd->parsed();
      const Scenario2Config cfg = (irregular ? irr : s2).config(common, 200);
      const Scenario2Result r = irregular ? run_irregular(cfg) : run_scenario2(cfg);
      const fs::path dir = out_dir(common);
      const std::string text =
          std::string("study=") + (irregular ? "irregular" : "scenario2") + '\n' + cfg.describe();
      auto table = open_out(dir / (irregular ? "irregular.csv" : "scenario2.csv"));
      write_levels_table(r, text, cfg.seed, table);
      write_ascii_grid(*r.c1, dir / "c1.asc");
      write_ascii_grid(*r.c2, dir / "c2.asc");
      print_levels(r);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
