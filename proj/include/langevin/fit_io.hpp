#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "langevin/inference.hpp"

namespace langevin {

// One JSON document per fit with keys nu_hat, gamma2_hat, beta_hat,
// beta_cov, ci_beta, ci_gamma2, n, J, alpha, condition_number (plus
// residual_norm and upsilon).
nlohmann::ordered_json to_json(const FitResult& fit);
FitResult fit_from_json(const nlohmann::ordered_json& doc);

// Flat "key value" lines, e.g. "beta_hat[0] 1.25", "ci_gamma2.lo 0.97".
std::string to_key_value(const FitResult& fit);

// Estimate / CI table with one row per coefficient followed by gamma2.
std::string format_table(const FitResult& fit, const std::vector<std::string>& names = {});

}  // namespace langevin
