#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "langevin/ascii_grid.hpp"
#include "langevin/track_io.hpp"

namespace fs = std::filesystem;
using namespace langevin;

namespace {

const fs::path kWork = fs::path(LANGEVIN_TEST_WORKDIR) / "cli";

int run(const std::string& args, const std::string& log = "log.txt") {
  fs::create_directories(kWork);
  const std::string cmd = std::string("\"") + LANGEVIN_CLI_PATH + "\" " + args + " > \"" +
                          (kWork / log).string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string dir(const std::string& name) { return "--out \"" + (kWork / name).string() + "\""; }

int data_rows(const fs::path& p) {
  std::ifstream in(p);
  int rows = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') ++rows;
  return rows - 1;
}

void make_fields() {
  static bool done = false;
  if (done) return;
  REQUIRE(run("--seed 3 gen-cov --rho 10 --name c1.asc " + dir("fields")) == 0);
  REQUIRE(run("--seed 4 gen-cov --rho 10 --name c2.asc " + dir("fields")) == 0);
  REQUIRE(run("--seed 5 gen-cov --rho 5 --name c3.asc " + dir("fields")) == 0);
  REQUIRE(run("--seed 6 gen-cov --rho 20 --name c4.asc " + dir("fields")) == 0);
  done = true;
}

std::string field(int k) {
  return "raster:" + (kWork / "fields" / ("c" + std::to_string(k) + ".asc")).string();
}

}  // namespace

TEST_CASE("simulate: row count, manifest and byte-identical reruns") {
  REQUIRE(run("simulate --steps 10 " + dir("sim_a")) == 0);
  REQUIRE(run("simulate --steps 10 " + dir("sim_b")) == 0);
  const Track t = read_track_csv(kWork / "sim_a" / "track_0.csv");
  CHECK(t.size() == 11);
  CHECK(slurp(kWork / "sim_a" / "track_0.csv") == slurp(kWork / "sim_b" / "track_0.csv"));
  CHECK(slurp(kWork / "sim_a" / "manifest.csv") == slurp(kWork / "sim_b" / "manifest.csv"));
}

TEST_CASE("simulate: scenario-1 model with defaults is never clamped") {
  REQUIRE(run("simulate --steps 20000 --tracks 3 " + dir("sim_s1")) == 0);
  std::ifstream in(kWork / "sim_s1" / "manifest.csv");
  int rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#' || line.rfind("file,", 0) == 0) continue;
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(rows == 3);
}

TEST_CASE("ud: flat model, normalization after round trip, log grid") {
  REQUIRE(run("ud --cov sqdist:0,0 --beta 0 --grid=-2,-2,0.5,9,9 " + dir("ud_flat")) == 0);
  const Raster flat = read_ascii_grid(kWork / "ud_flat" / "ud.asc");
  CHECK((flat.values().array() - 1.0 / (4.5 * 4.5)).abs().maxCoeff() < 1e-14);

  make_fields();
  REQUIRE(run("ud --cov " + field(1) + " --cov " + field(2) + " --beta 2,4 --like " +
              (kWork / "fields" / "c1.asc").string() + " " + dir("ud")) == 0);
  const Raster ud = read_ascii_grid(kWork / "ud" / "ud.asc");
  const Raster log_ud = read_ascii_grid(kWork / "ud" / "log_ud.asc");
  const double h = ud.geometry().cell_size;
  CHECK(std::abs(ud.values().sum() * h * h - 1.0) < 1e-9);
  CHECK((log_ud.values().array() - ud.values().array().log()).abs().maxCoeff() < 1e-12);
}

TEST_CASE("fit: pooled four-covariate fit writes a full document") {
  make_fields();
  REQUIRE(run("--seed 11 simulate --cov " + field(1) + " --cov " + field(2) +
              " --beta 2,4 --steps 20000 --tracks 3 " + dir("fit_tracks")) == 0);
  std::string tracks;
  for (int k = 0; k < 3; ++k)
    tracks += " --track " + (kWork / "fit_tracks" / ("track_" + std::to_string(k) + ".csv")).string();
  const std::string covs =
      " --cov " + field(1) + " --cov " + field(2) + " --cov " + field(3) + " --cov " + field(4);
  REQUIRE(run("fit" + tracks + covs + " " + dir("fit"), "fit_log.txt") == 0);

  const auto doc = nlohmann::json::parse(slurp(kWork / "fit" / "fit.json"));
  CHECK(doc["J"] == 4);
  CHECK(doc["alpha"] == 0.05);
  REQUIRE(doc["beta_hat"].size() == 4);
  REQUIRE(doc["ci_beta"].size() == 4);
  for (const auto& ci : doc["ci_beta"]) CHECK(ci[0].get<double>() < ci[1].get<double>());
  CHECK(doc["ci_gamma2"][0].get<double>() < doc["ci_gamma2"][1].get<double>());
  CHECK(doc["beta_hat"][1].get<double>() > 0.0);

  const std::string table = slurp(kWork / "fit_log.txt");
  for (const char* name : {"c1", "c2", "c3", "c4", "gamma2", "95% CI lo"})
    CHECK(table.find(name) != std::string::npos);
}

TEST_CASE("fit: scenario-2 tracks recover the coefficient signs") {
  make_fields();
  REQUIRE(run("--seed 12 simulate --cov " + field(1) + " --cov " + field(2) +
              " --beta 2,4 --steps 25000 --tracks 20 " + dir("fit_sign")) == 0);
  std::string tracks;
  for (int k = 0; k < 20; ++k)
    tracks += " --track " + (kWork / "fit_sign" / ("track_" + std::to_string(k) + ".csv")).string();
  REQUIRE(run("fit" + tracks + " --cov " + field(1) + " --cov " + field(2) + " " + dir("fit_sign_out")) == 0);
  const auto doc = nlohmann::json::parse(slurp(kWork / "fit_sign_out" / "fit.json"));
  CHECK(doc["beta_hat"][0].get<double>() > 0.0);
  CHECK(doc["beta_hat"][1].get<double>() > 0.0);
}

TEST_CASE("fit: out-of-domain locations name the track") {
  make_fields();
  const fs::path bad = kWork / "outside.csv";
  std::ofstream(bad) << "t,x,y\n0,0,0\n1,1,1\n2,80,80\n3,1,1\n";
  CHECK(run("fit --track " + bad.string() + " --cov " + field(1) + " " + dir("fit_bad"),
            "bad_log.txt") != 0);
  const std::string log = slurp(kWork / "bad_log.txt");
  CHECK(log.find("location 2") != std::string::npos);
  CHECK(log.find("outside.csv") != std::string::npos);
}

TEST_CASE("fit: seconds are converted to hours on request") {
  make_fields();
  const fs::path secs = kWork / "secs.csv";
  {
    std::ofstream out(secs);
    out << "t,x,y\n";
    const Track t = read_track_csv(kWork / "fit_sign" / "track_0.csv");
    for (Eigen::Index k = 0; k < t.size(); k += 10)
      out << t.times(k) * 3600.0 << ',' << t.points(k, 0) << ',' << t.points(k, 1) << '\n';
  }
  REQUIRE(run("fit --seconds-to-hours --track " + secs.string() + " --cov " + field(1) + " --cov " +
              field(2) + " " + dir("fit_hours")) == 0);
  const auto doc = nlohmann::json::parse(slurp(kWork / "fit_hours" / "fit.json"));
  CHECK(doc["gamma2_hat"].get<double>() == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("scenario commands: table shape and determinism") {
  REQUIRE(run("--threads 3 scenario1 --replications 5 --points 60 " + dir("s1a")) == 0);
  REQUIRE(run("--threads 1 scenario1 --replications 5 --points 60 " + dir("s1b")) == 0);
  const std::string a = slurp(kWork / "s1a" / "scenario1.csv");
  CHECK(a == slurp(kWork / "s1b" / "scenario1.csv"));
  CHECK(a.find("# config_hash=") == 0);
  CHECK(a.find("# replication_seeds=") != std::string::npos);
  CHECK(a.find("second_sine_axis=z1") != std::string::npos);
  int failures = 0;
  for (std::size_t pos = 0; (pos = a.find("# failure", pos)) != std::string::npos; ++pos) ++failures;
  CHECK(data_rows(kWork / "s1a" / "scenario1.csv") == 4 * (2 * 5 - failures));

  REQUIRE(run("scenario2 --tracks 4 --points 50 --intervals 0.05,0.5 --half-width 30 " +
              dir("s2")) == 0);
  CHECK(data_rows(kWork / "s2" / "scenario2.csv") == 2 * 3);
  CHECK(fs::exists(kWork / "s2" / "c1.asc"));

  REQUIRE(run("irregular --tracks 4 --points 50 --half-width 30 " + dir("irr")) == 0);
  CHECK(data_rows(kWork / "irr" / "irregular.csv") == 4 * 3);
}

TEST_CASE("config files and bad input") {
  const fs::path ini = kWork / "s1.ini";
  fs::create_directories(kWork);
  std::ofstream(ini) << "seed = 9\n[scenario1]\nreplications = 3\npoints = 40\n";
  REQUIRE(run("--config " + ini.string() + " scenario1 " + dir("s1cfg")) == 0);
  const std::string t = slurp(kWork / "s1cfg" / "scenario1.csv");
  CHECK(t.find("# seed=9") != std::string::npos);
  CHECK(t.find("# replications=3") != std::string::npos);

  CHECK(run("fit --track nope.csv --cov sqdist:0,0") != 0);
  CHECK(run("fit --track nope.csv --cov bogus:1") != 0);
  CHECK(run("--escape-policy sometimes simulate") != 0);
  CHECK(run("") != 0);
}

TEST_CASE("committed configs match the built-in defaults") {
  const fs::path configs = fs::path(LANGEVIN_SOURCE_DIR) / "configs";
  const std::string small = " --tracks 3 --points 40 --half-width 30";
  REQUIRE(run("--config " + (configs / "scenario2.ini").string() + " scenario2" + small + " " +
              dir("cfg_s2")) == 0);
  REQUIRE(run("scenario2" + small + " " + dir("def_s2")) == 0);
  CHECK(slurp(kWork / "cfg_s2" / "scenario2.csv") == slurp(kWork / "def_s2" / "scenario2.csv"));
  REQUIRE(run("--config " + (configs / "scenario1.ini").string() +
              " scenario1 --replications 3 " + dir("cfg_s1")) == 0);
  REQUIRE(run("scenario1 --replications 3 " + dir("def_s1")) == 0);
  CHECK(slurp(kWork / "cfg_s1" / "scenario1.csv") == slurp(kWork / "def_s1" / "scenario1.csv"));
}
