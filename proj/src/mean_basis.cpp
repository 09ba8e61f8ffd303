#include "mortgp/mean_basis.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mortgp/errors.hpp"

namespace mortgp {

std::string to_string(MeanBasis basis) {
  switch (basis) {
  case MeanBasis::None:
    return "none";
  case MeanBasis::Intercept:
    return "intercept";
  case MeanBasis::Linear:
    return "linear";
  case MeanBasis::QuadraticAge:
    return "quadratic";
  }
  return "unknown";
}

MeanBasis parse_mean_basis(const std::string &text) {
  if (text == "intercept") {
    return MeanBasis::Intercept;
  }
  if (text == "linear") {
    return MeanBasis::Linear;
  }
  if (text == "quadratic" || text == "quadratic_age") {
    return MeanBasis::QuadraticAge;
  }
  if (text == "none") {
    return MeanBasis::None;
  }
  throw ValidationError("unknown mean basis '" + text + "'");
}

Eigen::Index dimension(MeanBasis basis) {
  switch (basis) {
  case MeanBasis::None:
    return 0;
  case MeanBasis::Intercept:
    return 1;
  case MeanBasis::Linear:
    return 3;
  case MeanBasis::QuadraticAge:
    return 4;
  }
  return 0;
}

Eigen::VectorXd eval_basis(MeanBasis basis, const AgeYear &x) {
  Eigen::VectorXd h(dimension(basis));
  switch (basis) {
  case MeanBasis::None:
    break;
  case MeanBasis::Intercept:
    h << 1.0;
    break;
  case MeanBasis::Linear:
    h << 1.0, x.age, x.year;
    break;
  case MeanBasis::QuadraticAge:
    h << 1.0, x.age, x.year, x.age * x.age;
    break;
  }
  return h;
}

Eigen::MatrixXd basis_matrix(MeanBasis basis, std::span<const AgeYear> xs,
                             const Standardizer &scaling) {
  Eigen::MatrixXd h(static_cast<Eigen::Index>(xs.size()), dimension(basis));
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    h.row(i) = eval_basis(basis, scaling.standardize(xs[i])).transpose();
  }
  return h;
}

Eigen::VectorXd basis_year_derivative(MeanBasis basis,
                                      const Standardizer &scaling) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dimension(basis));
  if (basis == MeanBasis::Linear || basis == MeanBasis::QuadraticAge) {
    d(2) = 1.0 / scaling.sd_yr;
  }
  return d;
}

double eval_mean(MeanBasis basis, const MeanCoefficients &coeffs,
                 const AgeYear &x) {
  if (coeffs.beta.size() != dimension(basis)) {
    throw ValidationError(fmt::format(
        "mean coefficients have length {}, basis '{}' needs {}",
        coeffs.beta.size(), to_string(basis), dimension(basis)));
  }
  return eval_basis(basis, x).dot(coeffs.beta);
}

double mean_year_derivative(MeanBasis basis, const MeanCoefficients &coeffs) {
  if (coeffs.beta.size() != dimension(basis)) {
    throw ValidationError("mean coefficients do not match basis dimension");
  }
  if (basis == MeanBasis::Linear || basis == MeanBasis::QuadraticAge) {
    return coeffs.beta(2);
  }
  return 0.0;
}

Eigen::MatrixXd coefficient_map(MeanBasis basis, const Standardizer &s) {
  const Eigen::Index p = dimension(basis);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(p, p);
  if (p == 0) {
    return t;
  }
  // m = g0 + g1 (a - ma)/sa + g2 (y - my)/sy + g3 (a - ma)^2 / sa^2
  t(0, 0) = 1.0;
  if (p >= 3) {
    t(0, 1) = -s.mean_ag / s.sd_ag;
    t(0, 2) = -s.mean_yr / s.sd_yr;
    t(1, 1) = 1.0 / s.sd_ag;
    t(2, 2) = 1.0 / s.sd_yr;
  }
  if (p == 4) {
    const double sa2 = s.sd_ag * s.sd_ag;
    t(0, 3) = s.mean_ag * s.mean_ag / sa2;
    t(1, 3) = -2.0 * s.mean_ag / sa2;
    t(3, 3) = 1.0 / sa2;
  }
  return t;
}

Standardizer basis_scaling(MeanBasis basis, std::span<const AgeYear> inputs) {
  if (basis == MeanBasis::None || basis == MeanBasis::Intercept ||
      inputs.empty()) {
    return Standardizer::identity();
  }
  // Constant columns keep unit scale; the rank check reports them.
  const auto n = static_cast<double>(inputs.size());
  Standardizer s;
  double sum_ag = 0.0, sum_yr = 0.0;
  for (const auto &x : inputs) {
    sum_ag += x.age;
    sum_yr += x.year;
  }
  s.mean_ag = sum_ag / n;
  s.mean_yr = sum_yr / n;
  double ss_ag = 0.0, ss_yr = 0.0;
  for (const auto &x : inputs) {
    ss_ag += (x.age - s.mean_ag) * (x.age - s.mean_ag);
    ss_yr += (x.year - s.mean_yr) * (x.year - s.mean_yr);
  }
  const double denom = std::max(n - 1.0, 1.0);
  s.sd_ag = ss_ag > 0.0 ? std::sqrt(ss_ag / denom) : 1.0;
  s.sd_yr = ss_yr > 0.0 ? std::sqrt(ss_yr / denom) : 1.0;
  return s;
}

} // namespace mortgp
