#include "langevin/inference.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace langevin {

DesignMatrices build_design(const Track& track,
                            std::span<const CovariateProvider> covariates) {
  track.validate();
  if (track.size() < 2) throw InsufficientData("track needs at least two locations");
  if (covariates.empty()) throw InvalidArgument("no covariates");

  DesignMatrices out;
  out.n = track.size() - 1;
  out.J = static_cast<Eigen::Index>(covariates.size());
  const Eigen::Index n = out.n;
  out.y.resize(2 * n);
  out.d.resize(2 * n, out.J);
  out.t_delta.resize(2 * n);

  for (Eigen::Index i = 0; i < n; ++i) {
    const double root = std::sqrt(track.times(i + 1) - track.times(i));
    const Point x = track.point(i);
    const Vector2 step = track.point(i + 1) - x;
    out.y(i) = step.x() / root;
    out.y(n + i) = step.y() / root;
    out.t_delta(i) = root;
    out.t_delta(n + i) = root;
    for (Eigen::Index j = 0; j < out.J; ++j) {
      Vector2 g;
      try {
        g = covariates[j].gradient(x);
      } catch (const OutOfDomain& e) {
        throw OutOfDomain("location " + std::to_string(i) + ": " + e.what(),
                          static_cast<std::size_t>(i));
      }
      out.d(i, j) = 0.5 * g.x();
      out.d(n + i, j) = 0.5 * g.y();
    }
  }
  return out;
}

DesignMatrices pool_designs(std::span<const DesignMatrices> blocks) {
  if (blocks.empty()) throw InvalidArgument("nothing to pool");
  DesignMatrices out;
  out.J = blocks.front().J;
  for (const auto& b : blocks) {
    if (b.J != out.J) throw InvalidArgument("pooled designs differ in J");
    out.n += b.n;
  }
  const Eigen::Index n = out.n;
  out.y.resize(2 * n);
  out.d.resize(2 * n, out.J);
  out.t_delta.resize(2 * n);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    for (int half = 0; half < 2; ++half) {
      const Eigen::Index src = half * b.n;
      const Eigen::Index dst = half * n + offset;
      out.y.segment(dst, b.n) = b.y.segment(src, b.n);
      out.d.middleRows(dst, b.n) = b.d.middleRows(src, b.n);
      out.t_delta.segment(dst, b.n) = b.t_delta.segment(src, b.n);
    }
    offset += b.n;
  }
  return out;
}

LinearFit solve_linear_model(const DesignMatrices& design) {
  const Eigen::Index dof = 2 * design.n - design.J;
  if (dof <= 0)
    throw InsufficientData("need 2n - J > 0 (n=" + std::to_string(design.n) +
                           ", J=" + std::to_string(design.J) + ")");
  const Eigen::MatrixXd a = design.regressors();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);

  const Eigen::MatrixXd r =
      qr.matrixR().topLeftCorner(design.J, design.J).triangularView<Eigen::Upper>();
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
  const double cond_r = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
  const double condition = cond_r * cond_r;
  if (qr.rank() < design.J)
    throw SingularDesign("regressors are rank deficient (condition number " +
                             std::to_string(condition) + ")",
                         condition);

  LinearFit out;
  out.n = design.n;
  out.J = design.J;
  out.condition_number = condition;
  out.nu_hat = qr.solve(design.y);
  out.residual_norm = (design.y - a * out.nu_hat).norm();
  out.gamma2_hat = out.residual_norm * out.residual_norm / double(dof);

  // (A'A)^{-1} = P R^{-1} R^{-T} P' for A P = Q R.
  const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(design.J, design.J));
  const auto& perm = qr.colsPermutation();
  out.upsilon = perm * (r_inv * r_inv.transpose()) * perm.transpose();
  return out;
}

Eigen::MatrixXd beta_covariance(const Eigen::VectorXd& beta, double gamma2,
                                const Eigen::MatrixXd& upsilon, Eigen::Index n,
                                Eigen::Index J) {
  const double m4 = double(2 * n - J - 4);
  if (m4 <= 0) throw InsufficientData("covariance needs 2n - J - 4 > 0");
  return (2.0 / m4) * beta * beta.transpose() + (upsilon / gamma2) * (1.0 + 2.0 / m4);
}

FitResult fit(const DesignMatrices& design, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (2 * design.n - design.J - 4 <= 0)
    throw InsufficientData("confidence intervals need 2n - J - 4 > 0 (n=" +
                           std::to_string(design.n) + ", J=" +
                           std::to_string(design.J) + ")");
  const LinearFit lin = solve_linear_model(design);
  if (!(lin.residual_norm > 1e-12 * design.y.norm()))
    throw DegenerateFit("zero residual: gamma2 estimate is 0 and beta is undefined");

  const double m = double(2 * design.n - design.J);
  FitResult out;
  out.nu_hat = lin.nu_hat;
  out.gamma2_hat = lin.gamma2_hat;
  out.beta_hat = ((m - 2.0) / (m * lin.gamma2_hat)) * lin.nu_hat;
  out.upsilon = lin.upsilon;
  out.beta_cov = beta_covariance(out.beta_hat, out.gamma2_hat, lin.upsilon, design.n, design.J);
  out.alpha = alpha;
  out.n = design.n;
  out.J = design.J;
  out.condition_number = lin.condition_number;
  out.residual_norm = lin.residual_norm;

  const double z = boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2);
  for (Eigen::Index j = 0; j < design.J; ++j) {
    const double half = z * std::sqrt(out.beta_cov(j, j));
    out.ci_beta.push_back({out.beta_hat(j) - half, out.beta_hat(j) + half});
  }
  const boost::math::chi_squared chi2(m);
  out.ci_gamma2 = {out.gamma2_hat * m / boost::math::quantile(chi2, 1.0 - alpha / 2),
                   out.gamma2_hat * m / boost::math::quantile(chi2, alpha / 2)};
  return out;
}

FitResult fit_pooled(std::span<const Track> tracks,
                     std::span<const CovariateProvider> covariates, double alpha) {
  std::vector<DesignMatrices> blocks;
  blocks.reserve(tracks.size());
  for (std::size_t k = 0; k < tracks.size(); ++k) {
    try {
      blocks.push_back(build_design(tracks[k], covariates));
    } catch (const OutOfDomain& e) {
      throw OutOfDomain("track " + std::to_string(k) + ", " + e.what(), e.index(),
                        std::to_string(k));
    }
  }
  return fit(pool_designs(blocks), alpha);
}

std::vector<FitResult> profile_fit_per_interval(
    std::span<const std::vector<Track>> tracks_per_level,
    std::span<const CovariateProvider> covariates, double alpha) {
  std::vector<FitResult> out;
  out.reserve(tracks_per_level.size());
  for (const auto& level : tracks_per_level)
    out.push_back(fit_pooled(level, covariates, alpha));
  return out;
}

double pseudo_log_likelihood(const Track& track, const RsfModel& model) {
  track.validate();
  const double g2 = model.gamma2();
  if (!(g2 > 0)) throw NonPositiveGamma2("gamma2 must be positive");
  double total = 0.0;
  for (Eigen::Index i = 0; i + 1 < track.size(); ++i) {
    const double delta = track.times(i + 1) - track.times(i);
    const Point x = track.point(i);
    Vector2 drift;
    try {
      drift = grad_log_pi(model, x);
    } catch (const OutOfDomain& e) {
      throw OutOfDomain("location " + std::to_string(i) + ": " + e.what(),
                        static_cast<std::size_t>(i));
    }
    const double var = g2 * delta;
    const Vector2 resid = track.point(i + 1) - x - 0.5 * var * drift;
    total += -std::log(2.0 * std::numbers::pi * var) - resid.squaredNorm() / (2.0 * var);
  }
  return total;
}

}  // namespace langevin
