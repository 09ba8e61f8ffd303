#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mortgp/data_model.hpp"
#include "mortgp/mean_basis.hpp"

namespace mortgp {

/// Poisson log-link regression D ~ Poisson(L exp(h(x) beta)).
struct GlmFit {
  MeanBasis basis = MeanBasis::Intercept;
  /// Raw-scale coefficients, same order as MeanCoefficients.
  MeanCoefficients beta;
  /// Asymptotic standard errors from the inverse Fisher information.
  Eigen::VectorXd std_errors;
  double deviance = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Deviance after each accepted IRLS step.
  std::vector<double> deviance_trace;
};

/// IRLS with offset log L and step-halving whenever the deviance rises.
/// Converged once the relative deviance change drops below 1e-9. All cells,
/// including zero-death ones, enter the likelihood.
///
/// Throws ValidationError for an empty table or a rank-deficient basis and
/// NumericalError (carrying the deviance trace) when max_iter is exhausted.
GlmFit fit_poisson_glm(const MortalityTable &table, MeanBasis basis,
                       int max_iter = 100);

/// Linear predictor h(x) beta, i.e. the fitted log-rate.
Eigen::VectorXd glm_predict(const GlmFit &fit, std::span<const AgeYear> x_star);

/// Poisson deviance of `log_rate` predictions against the table's counts.
double poisson_deviance(const MortalityTable &table,
                        const Eigen::VectorXd &log_rate);

} // namespace mortgp
