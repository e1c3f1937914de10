#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "langevin/experiments.hpp"
#include "langevin/langevin.hpp"
#include "langevin/random.hpp"

using namespace langevin;

namespace {

RsfModel harmonic(double beta, double gamma2) {
  return RsfModel({CovariateProvider::squared_distance()}, Eigen::VectorXd::Constant(1, beta),
                  gamma2);
}

Track fine_track(Eigen::Index n, double dt) {
  Eigen::VectorXd t(n);
  for (Eigen::Index k = 0; k < n; ++k) t(k) = double(k) * dt;
  Eigen::MatrixX2d xy(n, 2);
  xy.col(0) = t;
  xy.col(1) = -t;
  return Track(t, xy);
}

}  // namespace

TEST_CASE("euler step: worked example") {
  // grad log pi = -x for beta = -0.5; drift = (dt/2)(-x).
  const RsfModel m = harmonic(-0.5, 1.0);
  const Point next = euler_step(m, Point(1.0, -2.0), 0.02, Vector2::Zero());
  CHECK(next.x() == doctest::Approx(0.99));
  CHECK(next.y() == doctest::Approx(-1.98));
  const Point noisy = euler_step(m.with_gamma2(4.0), Point(1.0, -2.0), 0.01, Vector2(1.0, 0.5));
  // drift (4 * 0.01 / 2)(-1, 2) = (-0.02, 0.04); noise 2 * 0.1 * (1, 0.5).
  CHECK(noisy.x() == doctest::Approx(1.0 - 0.02 + 0.2));
  CHECK(noisy.y() == doctest::Approx(-2.0 + 0.04 + 0.1));
}

TEST_CASE("euler step: no drift and no noise is the identity") {
  const RsfModel flat = harmonic(0.0, 3.0);
  CHECK(euler_step(flat, Point(0.4, 7.0), 0.1, Vector2::Zero()) == Point(0.4, 7.0));
}

TEST_CASE("euler step: drift is linear in dt and gamma2") {
  const RsfModel m(scenario1_covariates(SineAxis::z1), Eigen::Vector3d(-1.0, 0.5, -0.05), 1.0);
  const Point x(1.2, -0.7);
  const Vector2 base = euler_step(m, x, 0.01, Vector2::Zero()) - x;
  CHECK((euler_step(m, x, 0.03, Vector2::Zero()) - x).isApprox(3.0 * base, 1e-12));
  CHECK((euler_step(m.with_gamma2(2.5), x, 0.01, Vector2::Zero()) - x).isApprox(2.5 * base, 1e-12));
}

TEST_CASE("euler step: increment variance is gamma2 dt per coordinate") {
  const RsfModel m = harmonic(-0.5, 2.0);
  const double dt = 0.05;
  const Point x(0.3, -0.1);
  const Point mean = euler_step(m, x, dt, Vector2::Zero());
  Rng rng(11);
  const int draws = 100000;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (int k = 0; k < draws; ++k) {
    const Vector2 noise(rng.normal(), rng.normal());
    sum += (euler_step(m, x, dt, noise) - mean).array().square().matrix();
  }
  const Eigen::Vector2d var = sum / draws;
  CHECK(var.x() == doctest::Approx(2.0 * dt).epsilon(0.05));
  CHECK(var.y() == doctest::Approx(2.0 * dt).epsilon(0.05));
}

TEST_CASE("simulate: shape, timestamps and determinism") {
  SimConfig cfg{harmonic(-0.05, 1.0), Point(1.0, 1.0), 0.01, 500, 99};
  const Simulation a = simulate(cfg);
  CHECK(a.track.size() == 501);
  CHECK(a.track.times(0) == 0.0);
  CHECK(a.track.times(500) == doctest::Approx(5.0));
  CHECK(a.track.point(0) == Point(1.0, 1.0));
  CHECK(a.clamp_count == 0);
  CHECK(simulate(cfg).track.points == a.track.points);
  cfg.seed = 100;
  CHECK(simulate(cfg).track.points != a.track.points);
}

TEST_CASE("simulate: first step uses the first two normals of the seed") {
  const RsfModel m = harmonic(-0.5, 1.0);
  const SimConfig cfg{m, Point(0.5, 0.5), 0.1, 1, 7};
  Rng rng(7);
  const double n1 = rng.normal();
  const double n2 = rng.normal();
  const Point want = euler_step(m, Point(0.5, 0.5), 0.1, Vector2(n1, n2));
  CHECK(simulate(cfg).track.point(1) == want);
}

TEST_CASE("simulate: free diffusion has mean squared displacement 2 gamma2 t") {
  const RsfModel flat = harmonic(0.0, 1.5);
  const int tracks = 2000;
  double msd1 = 0.0, msd100 = 0.0;
  for (int k = 0; k < tracks; ++k) {
    const Track t = simulate({flat, Point::Zero(), 0.01, 100, derive_seed(5, k)}).track;
    msd1 += t.point(1).squaredNorm();
    msd100 += t.point(100).squaredNorm();
  }
  msd1 /= tracks;
  msd100 /= tracks;
  CHECK(msd100 == doctest::Approx(2.0 * 1.5 * 1.0).epsilon(0.1));
  CHECK(msd100 / msd1 == doctest::Approx(100.0).epsilon(0.15));
}

TEST_CASE("simulate: escape policies on a gridded domain") {
  const Geometry g{-1.0, -1.0, 0.5, 5, 5};
  const RsfModel m({CovariateProvider::gridded(Raster(g, Raster::Values::Zero(5, 5)))},
                   Eigen::VectorXd::Ones(1), 4.0);
  SimConfig cfg{m, Point::Zero(), 0.1, 2000, 1, EscapePolicy::error};
  CHECK_THROWS_AS(simulate(cfg), DomainEscape);
  cfg.escape = EscapePolicy::clamp;
  const Simulation sim = simulate(cfg);
  CHECK(sim.clamp_count > 0);
  for (Eigen::Index k = 0; k < sim.track.size(); ++k)
    CHECK_UNARY(g.bounds().contains(sim.track.point(k)));
  cfg.x0 = Point(3.0, 0.0);
  CHECK_THROWS_AS(simulate(cfg), OutOfDomain);
}

TEST_CASE("simulate: invalid configurations") {
  CHECK_THROWS_AS(simulate({harmonic(-0.1, 1.0), Point::Zero(), 0.0, 10, 1}), InvalidArgument);
  CHECK_THROWS_AS(simulate({harmonic(-0.1, 1.0), Point::Zero(), 0.1, 0, 1}), InvalidArgument);
}

TEST_CASE("thin_regular") {
  const Track t = fine_track(3001, 0.01);
  CHECK(thin_regular(t, 1).points == t.points);
  const Track s = thin_regular(t, 50);
  CHECK(s.size() == 61);
  CHECK(s.times(60) == t.times(3000));
  const Track composed = thin_regular(thin_regular(t, 5), 10);
  CHECK(composed.times == s.times);
  CHECK(composed.points == s.points);
  CHECK_THROWS_AS(thin_regular(t, 0), InvalidArgument);
}

TEST_CASE("thin_irregular: gap distribution") {
  const Track t = fine_track(1200001, 0.001);
  const Track s = thin_irregular(t, 0.05, 17);
  REQUIRE(s.size() > 10001);
  CHECK(s.times(0) == 0.0);
  const Eigen::VectorXd gaps = s.times.tail(s.size() - 1) - s.times.head(s.size() - 1);
  CHECK(gaps.minCoeff() > 0.0);
  const double mean = gaps.mean();
  const double sd = std::sqrt((gaps.array() - mean).square().sum() / double(gaps.size() - 1));
  CHECK(mean >= 0.045);
  CHECK(mean <= 0.055);
  CHECK(sd / mean >= 0.8);
  CHECK(sd / mean <= 1.1);
}

TEST_CASE("thin_irregular: kept points are a subsequence; seeded") {
  const Track t = fine_track(5001, 0.01);
  const Track a = thin_irregular(t, 0.1, 3);
  CHECK(a.times == thin_irregular(t, 0.1, 3).times);
  CHECK(a.times != thin_irregular(t, 0.1, 4).times);
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const auto idx = static_cast<Eigen::Index>(std::llround(a.times(k) / 0.01));
    CHECK(a.point(k) == t.point(idx));
  }
  CHECK_THROWS_AS(thin_irregular(t, 0.0, 1), InvalidArgument);
}

TEST_CASE("head") {
  const Track t = fine_track(10, 0.5);
  CHECK(head(t, 4).size() == 4);
  CHECK(head(t, 4).times(3) == 1.5);
  CHECK(head(t, 40).size() == 10);
}

TEST_CASE("track validation") {
  CHECK_THROWS_AS(Track(Eigen::Vector2d(0, 1), Eigen::MatrixX2d::Zero(3, 2)), InvalidArgument);
  CHECK_THROWS_AS(Track(Eigen::Vector3d(0, 1, 1), Eigen::MatrixX2d::Zero(3, 2)), NonIncreasingTimes);
  Eigen::MatrixX2d bad = Eigen::MatrixX2d::Zero(2, 2);
  bad(1, 0) = std::nan("");
  CHECK_THROWS_AS(Track(Eigen::Vector2d(0, 1), bad), InvalidArgument);
  try {
    Track(Eigen::Vector4d(0, 1, 2, 2), Eigen::MatrixX2d::Zero(4, 2));
  } catch (const NonIncreasingTimes& e) {
    CHECK(e.index() == 3);
  }
}

TEST_CASE("stationarity: long run matches the harmonic UD variance") {
  // pi ~ exp(-0.5 |x|^2) has unit variance per coordinate; the Euler chain
  // at dt = 0.05 inflates it by 1 / (1 - dt / 4).
  const SimConfig cfg{harmonic(-0.5, 1.0), Point::Zero(), 0.05, 400000, 21};
  const Track t = simulate(cfg).track;
  const Eigen::Index burn = 2000;
  const auto x = t.points.bottomRows(t.size() - burn);
  const double vx = (x.col(0).array() - x.col(0).mean()).square().mean();
  const double vy = (x.col(1).array() - x.col(1).mean()).square().mean();
  CHECK(vx == doctest::Approx(1.0).epsilon(0.06));
  CHECK(vy == doctest::Approx(1.0).epsilon(0.06));
}
