#pragma once

#include <span>
#include <string>

#include <Eigen/Dense>

#include "mortgp/data_model.hpp"

namespace mortgp {

/// Prior-mean families m(x) = h(x) beta.
///   Intercept     h = (1)
///   Linear        h = (1, x_ag, x_yr)
///   QuadraticAge  h = (1, x_ag, x_yr, x_ag^2)
/// `None` is the known zero mean (h has no columns); it is the simple-kriging
/// special case and is not offered on the command line.
enum class MeanBasis { None, Intercept, Linear, QuadraticAge };

std::string to_string(MeanBasis basis);
/// Accepts `intercept`, `linear`, `quadratic`.
MeanBasis parse_mean_basis(const std::string &text);

/// Basis dimension p.
Eigen::Index dimension(MeanBasis basis);

struct MeanCoefficients {
  /// (beta_0, beta_1^ag, beta_1^yr, beta_2^ag) truncated to the basis
  /// dimension.
  Eigen::VectorXd beta;
};

Eigen::VectorXd eval_basis(MeanBasis basis, const AgeYear &x);

/// N x p matrix whose rows are h of the *standardized* inputs.
Eigen::MatrixXd basis_matrix(MeanBasis basis, std::span<const AgeYear> xs,
                             const Standardizer &scaling = {});

/// d h / d x_yr of the standardized basis, with respect to the raw year.
Eigen::VectorXd basis_year_derivative(MeanBasis basis,
                                      const Standardizer &scaling = {});

/// h(x) . beta; throws ValidationError on dimension mismatch.
double eval_mean(MeanBasis basis, const MeanCoefficients &coeffs,
                 const AgeYear &x);

/// d m / d x_yr (beta_1^yr for Linear and QuadraticAge, otherwise 0).
double mean_year_derivative(MeanBasis basis, const MeanCoefficients &coeffs);

/// Linear map T with beta_raw = T * gamma, where gamma are coefficients of
/// the basis evaluated on `scaling`-standardized inputs.
Eigen::MatrixXd coefficient_map(MeanBasis basis, const Standardizer &scaling);

/// Standardization applied to the inputs before evaluating the basis:
/// identity for None and Intercept, otherwise column means and sample sds
/// (unit sd for a constant column).
Standardizer basis_scaling(MeanBasis basis, std::span<const AgeYear> inputs);

} // namespace mortgp
