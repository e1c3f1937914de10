#include "langevin/fit_io.hpp"

#include <cstdio>
#include <sstream>

namespace langevin {
namespace {

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> rows(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) rows[i].push_back(m(i, j));
  return rows;
}

Eigen::VectorXd from_vec(const nlohmann::ordered_json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd from_rows(const nlohmann::ordered_json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) m(i, k) = rows[i][k];
  return m;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

nlohmann::ordered_json to_json(const FitResult& fit) {
  nlohmann::ordered_json doc;
  doc["nu_hat"] = to_vec(fit.nu_hat);
  doc["gamma2_hat"] = fit.gamma2_hat;
  doc["beta_hat"] = to_vec(fit.beta_hat);
  doc["beta_cov"] = to_rows(fit.beta_cov);
  auto cis = nlohmann::ordered_json::array();
  for (const auto& ci : fit.ci_beta) cis.push_back({ci.lo, ci.hi});
  doc["ci_beta"] = cis;
  doc["ci_gamma2"] = {fit.ci_gamma2.lo, fit.ci_gamma2.hi};
  doc["n"] = fit.n;
  doc["J"] = fit.J;
  doc["alpha"] = fit.alpha;
  doc["condition_number"] = fit.condition_number;
  doc["residual_norm"] = fit.residual_norm;
  doc["upsilon"] = to_rows(fit.upsilon);
  return doc;
}

FitResult fit_from_json(const nlohmann::ordered_json& doc) {
  FitResult fit;
  fit.nu_hat = from_vec(doc.at("nu_hat"));
  fit.gamma2_hat = doc.at("gamma2_hat").get<double>();
  fit.beta_hat = from_vec(doc.at("beta_hat"));
  fit.beta_cov = from_rows(doc.at("beta_cov"));
  for (const auto& ci : doc.at("ci_beta"))
    fit.ci_beta.push_back({ci.at(0).get<double>(), ci.at(1).get<double>()});
  fit.ci_gamma2 = {doc.at("ci_gamma2").at(0).get<double>(),
                   doc.at("ci_gamma2").at(1).get<double>()};
  fit.n = doc.at("n").get<Eigen::Index>();
  fit.J = doc.at("J").get<Eigen::Index>();
  fit.alpha = doc.at("alpha").get<double>();
  fit.condition_number = doc.at("condition_number").get<double>();
  if (doc.contains("residual_norm")) fit.residual_norm = doc["residual_norm"].get<double>();
  if (doc.contains("upsilon")) fit.upsilon = from_rows(doc["upsilon"]);
  return fit;
}

std::string to_key_value(const FitResult& fit) {
  std::ostringstream out;
  for (Eigen::Index j = 0; j < fit.nu_hat.size(); ++j)
    out << "nu_hat[" << j << "] " << g17(fit.nu_hat(j)) << '\n';
  out << "gamma2_hat " << g17(fit.gamma2_hat) << '\n';
  for (Eigen::Index j = 0; j < fit.beta_hat.size(); ++j)
    out << "beta_hat[" << j << "] " << g17(fit.beta_hat(j)) << '\n';
  for (Eigen::Index j = 0; j < fit.beta_cov.rows(); ++j)
    for (Eigen::Index k = 0; k < fit.beta_cov.cols(); ++k)
      out << "beta_cov[" << j << "][" << k << "] " << g17(fit.beta_cov(j, k)) << '\n';
  for (std::size_t j = 0; j < fit.ci_beta.size(); ++j) {
    out << "ci_beta[" << j << "].lo " << g17(fit.ci_beta[j].lo) << '\n';
    out << "ci_beta[" << j << "].hi " << g17(fit.ci_beta[j].hi) << '\n';
  }
  out << "ci_gamma2.lo " << g17(fit.ci_gamma2.lo) << '\n'
      << "ci_gamma2.hi " << g17(fit.ci_gamma2.hi) << '\n'
      << "n " << fit.n << '\n'
      << "J " << fit.J << '\n'
      << "alpha " << g17(fit.alpha) << '\n'
      << "condition_number " << g17(fit.condition_number) << '\n';
  return out.str();
}

std::string format_table(const FitResult& fit, const std::vector<std::string>& names) {
  std::ostringstream out;
  char buf[160];
  const int level = static_cast<int>(std::lround(100 * (1 - fit.alpha)));
  std::snprintf(buf, sizeof buf, "%-10s %14s %14s %14s %14s\n", "", "estimate", "SE",
                (std::to_string(level) + "% CI lo").c_str(),
                (std::to_string(level) + "% CI hi").c_str());
  out << buf;
  const Eigen::VectorXd se = fit.beta_se();
  for (Eigen::Index j = 0; j < fit.beta_hat.size(); ++j) {
    const std::string name =
        j < static_cast<Eigen::Index>(names.size()) ? names[j] : "beta" + std::to_string(j + 1);
    std::snprintf(buf, sizeof buf, "%-10s %14.6g %14.6g %14.6g %14.6g\n", name.c_str(),
                  fit.beta_hat(j), se(j), fit.ci_beta[j].lo, fit.ci_beta[j].hi);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-10s %14.6g %14s %14.6g %14.6g\n", "gamma2", fit.gamma2_hat,
                "", fit.ci_gamma2.lo, fit.ci_gamma2.hi);
  out << buf;
  return out.str();
}

}  // namespace langevin
