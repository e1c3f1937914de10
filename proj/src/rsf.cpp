#include "langevin/rsf.hpp"

#include <algorithm>
#include <cmath>

namespace langevin {

RsfModel::RsfModel(std::vector<CovariateProvider> covariates, Eigen::VectorXd beta,
                   double gamma2)
    : covariates_(std::move(covariates)), beta_(std::move(beta)), gamma2_(gamma2) {
  if (covariates_.empty()) throw InvalidArgument("model needs at least one covariate");
  if (beta_.size() != static_cast<Eigen::Index>(covariates_.size()))
    throw InvalidArgument("beta length must match the number of covariates");
  if (!beta_.allFinite()) throw InvalidArgument("beta must be finite");
  if (!(gamma2_ > 0) || !std::isfinite(gamma2_))
    throw NonPositiveGamma2("gamma2 must be positive and finite");
  for (const auto& c : covariates_) {
    if (auto d = c.domain()) domain_ = domain_ ? domain_->intersect(*d) : *d;
  }
  if (domain_ && (domain_->lo.array() > domain_->hi.array()).any())
    throw InvalidArgument("covariate rasters do not overlap");
}

RsfModel RsfModel::with_beta(Eigen::VectorXd beta) const {
  return RsfModel(covariates_, std::move(beta), gamma2_);
}

RsfModel RsfModel::with_gamma2(double gamma2) const {
  return RsfModel(covariates_, beta_, gamma2);
}

double log_pi_unnormalized(const RsfModel& m, const Point& p) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < m.size(); ++j)
    sum += m.beta()(j) * m.covariates()[j].value(p);
  return sum;
}

Vector2 grad_log_pi(const RsfModel& m, const Point& p) {
  Vector2 g = Vector2::Zero();
  for (Eigen::Index j = 0; j < m.size(); ++j)
    g += m.beta()(j) * m.covariates()[j].gradient(p);
  return g;
}

Raster ud_raster(const RsfModel& m, const Geometry& geometry) {
  Raster log_pi = sample_on_grid(
      geometry, [&](const Point& p) { return log_pi_unnormalized(m, p); });
  Raster::Values v = log_pi.values();
  v.array() -= v.maxCoeff();
  v = v.array().exp();
  const double mass = v.sum() * geometry.cell_size * geometry.cell_size;
  if (!std::isfinite(mass) || !(mass > 0)) throw NonFinite("UD normalization failed");
  v /= mass;
  if (!v.allFinite() || (v.array() <= 0).any())
    throw NonFinite("UD has non-finite or non-positive cells");
  return Raster(geometry, std::move(v));
}

Point sample_from_ud(const Raster& ud, Rng& rng) {
  const auto& g = ud.geometry();
  const auto& v = ud.values();
  const double target = rng.uniform() * v.sum();
  double acc = 0.0;
  Eigen::Index pick = v.size() - 1;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    acc += v(k / g.n_x, k % g.n_x);
    if (acc >= target) {
      pick = k;
      break;
    }
  }
  const Point center = g.center(pick % g.n_x, pick / g.n_x);
  const Point jitter((rng.uniform() - 0.5) * g.cell_size,
                     (rng.uniform() - 0.5) * g.cell_size);
  return g.bounds().clamp(center + jitter);
}

}  // namespace langevin
