#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

#include "langevin/langevin.hpp"

namespace langevin {

// Euler pseudo-likelihood as a linear model, Y = T_delta D nu + E with
// E ~ N(0, gamma2 I) and nu = gamma2 beta.
//
// Rows 0..n-1 hold the first coordinate of each increment and rows n..2n-1
// the second, so rows i and n+i describe the same location x_i.
struct DesignMatrices {
  Eigen::VectorXd y;        // (x_{i+1} - x_i) / sqrt(delta_i)
  Eigen::MatrixXd d;        // (1/2) dc_j/dz at x_i
  Eigen::VectorXd t_delta;  // sqrt(delta_i), repeated for both coordinates
  Eigen::Index n = 0;       // number of increments
  Eigen::Index J = 0;       // number of covariates

  // T_delta D, the regressor matrix of the linear model.
  Eigen::MatrixXd regressors() const { return t_delta.asDiagonal() * d; }
};

// Needs at least two locations. Covariate gradients are evaluated at
// x_0..x_{n-1} only, so the final location may lie outside the covariate
// domain. OutOfDomain carries the offending location index.
DesignMatrices build_design(const Track& track,
                            std::span<const CovariateProvider> covariates);

// Stacks independent tracks' blocks; no increment spans two tracks.
DesignMatrices pool_designs(std::span<const DesignMatrices> blocks);

// Least-squares stage shared by every estimator.
struct LinearFit {
  Eigen::VectorXd nu_hat;
  double gamma2_hat = 0;   // ||Y - Yhat||^2 / (2n - J)
  Eigen::MatrixXd upsilon; // (D' T^2 D)^{-1}
  double condition_number = 0;  // of D' T^2 D
  double residual_norm = 0;
  Eigen::Index n = 0;
  Eigen::Index J = 0;

  // Maximizer of the Euler pseudo-likelihood over (nu, gamma2): the
  // residual sum of squares divided by 2n rather than 2n - J.
  double gamma2_ml() const {
    return residual_norm * residual_norm / double(2 * n);
  }
};

// Column-pivoted Householder QR of T_delta D; the normal equations are never
// formed. Throws SingularDesign when the regressors are rank deficient and
// InsufficientData when 2n - J <= 0.
LinearFit solve_linear_model(const DesignMatrices& design);

// Covariance of the bias-corrected beta estimator,
//   2 b_j b_k / (m - 4) + (upsilon_jk / gamma2) (1 + 2 / (m - 4)),  m = 2n - J,
// evaluated at whatever (beta, gamma2) is supplied.
Eigen::MatrixXd beta_covariance(const Eigen::VectorXd& beta, double gamma2,
                                const Eigen::MatrixXd& upsilon, Eigen::Index n,
                                Eigen::Index J);

struct Interval {
  double lo = 0;
  double hi = 0;
};

struct FitResult {
  Eigen::VectorXd nu_hat;
  double gamma2_hat = 0;
  Eigen::VectorXd beta_hat;  // (m - 2) nu_hat / (m gamma2_hat)
  Eigen::MatrixXd upsilon;
  Eigen::MatrixXd beta_cov;  // plug-in: beta_hat and gamma2_hat for the truth
  std::vector<Interval> ci_beta;
  Interval ci_gamma2;
  double alpha = 0.05;
  Eigen::Index n = 0;
  Eigen::Index J = 0;
  double condition_number = 0;
  double residual_norm = 0;

  Eigen::VectorXd beta_se() const { return beta_cov.diagonal().cwiseSqrt(); }
};

// Closed-form estimates with level-(1 - alpha) intervals: normal intervals
// for beta, chi-square(2n - J) intervals for gamma2.
// Throws DegenerateFit for a zero residual and InsufficientData when
// 2n - J - 4 <= 0.
FitResult fit(const DesignMatrices& design, double alpha = 0.05);

// Pooled fit over several tracks. OutOfDomain errors are tagged with the
// position of the offending track in the list.
FitResult fit_pooled(std::span<const Track> tracks,
                     std::span<const CovariateProvider> covariates,
                     double alpha = 0.05);

// One pooled fit per thinning level.
std::vector<FitResult> profile_fit_per_interval(
    std::span<const std::vector<Track>> tracks_per_level,
    std::span<const CovariateProvider> covariates, double alpha = 0.05);

// Log of the Euler pseudo-likelihood: sum over increments of the bivariate
// normal log-density of x_{i+1} with mean x_i + (gamma2 delta_i / 2)
// grad log pi(x_i) and covariance gamma2 delta_i I.
double pseudo_log_likelihood(const Track& track, const RsfModel& model);

}  // namespace langevin
