#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "langevin/covariates.hpp"
#include "langevin/random.hpp"

namespace langevin {

// Utilisation distribution pi(x) proportional to exp(sum_j beta_j c_j(x)),
// together with the speed parameter gamma2 of the movement model.
class RsfModel {
 public:
  RsfModel(std::vector<CovariateProvider> covariates, Eigen::VectorXd beta,
           double gamma2);

  const std::vector<CovariateProvider>& covariates() const { return covariates_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  double gamma2() const { return gamma2_; }
  Eigen::Index size() const { return beta_.size(); }

  RsfModel with_beta(Eigen::VectorXd beta) const;
  RsfModel with_gamma2(double gamma2) const;

  // Intersection of the gridded covariates' domains; nullopt when every
  // covariate is analytic.
  std::optional<Box<double>> domain() const { return domain_; }

 private:
  std::vector<CovariateProvider> covariates_;
  Eigen::VectorXd beta_;
  double gamma2_;
  std::optional<Box<double>> domain_;
};

// sum_j beta_j c_j(p); the normalizing constant is omitted.
double log_pi_unnormalized(const RsfModel& m, const Point& p);

// sum_j beta_j grad c_j(p).
Vector2 grad_log_pi(const RsfModel& m, const Point& p);

// Normalized UD on the cells of `geometry`: exp(log pi - max log pi) divided
// by its sum times the cell area, so the midpoint rule integrates to 1.
Raster ud_raster(const RsfModel& m, const Geometry& geometry);

// Draws a location from a UD raster: a cell with probability proportional
// to its value, then a uniform offset within the cell, clipped to the
// interpolation domain.
Point sample_from_ud(const Raster& ud, Rng& rng);

}  // namespace langevin
