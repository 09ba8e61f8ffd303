#include "mortgp/glm_baseline.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "mortgp/errors.hpp"

namespace mortgp {

namespace {

constexpr double kRelativeTolerance = 1e-9;
constexpr int kMaxHalvings = 50;

double deviance_term(double d, double mu) {
  const double t = d > 0.0 ? d * std::log(d / mu) - (d - mu) : mu;
  return 2.0 * t;
}

struct Design {
  Eigen::MatrixXd h;
  Eigen::VectorXd deaths;
  Eigen::VectorXd offset;
};

double deviance_at(const Design &x, const Eigen::VectorXd &gamma) {
  const Eigen::VectorXd eta = x.h * gamma + x.offset;
  double dev = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    dev += deviance_term(x.deaths(i), std::exp(eta(i)));
  }
  return dev;
}

/// One weighted least-squares solve of the IRLS working model at `mu`.
Eigen::VectorXd wls_step(const Design &x, const Eigen::VectorXd &mu) {
  const Eigen::VectorXd eta = mu.array().log().matrix();
  const Eigen::VectorXd z =
      (eta - x.offset).array() + (x.deaths - mu).array() / mu.array();
  const Eigen::VectorXd sw = mu.cwiseSqrt();
  const Eigen::MatrixXd a = sw.asDiagonal() * x.h;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < x.h.cols()) {
    throw ValidationError("Poisson GLM design is rank deficient");
  }
  return qr.solve(Eigen::VectorXd(sw.cwiseProduct(z)));
}

} // namespace

double poisson_deviance(const MortalityTable &table,
                        const Eigen::VectorXd &log_rate) {
  if (log_rate.size() != static_cast<Eigen::Index>(table.size())) {
    throw ValidationError("prediction length does not match table");
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const MortalityCell &c = table.cells()[i];
    dev += deviance_term(c.deaths,
                         c.exposure * std::exp(log_rate(static_cast<Eigen::Index>(i))));
  }
  return dev;
}

GlmFit fit_poisson_glm(const MortalityTable &table, MeanBasis basis,
                       int max_iter) {
  if (table.empty()) {
    throw ValidationError("cannot fit a GLM to an empty table");
  }
  if (basis == MeanBasis::None) {
    throw ValidationError("the Poisson GLM needs at least an intercept");
  }
  if (max_iter < 1) {
    throw ValidationError("max_iter must be positive");
  }
  const std::vector<AgeYear> xs = table.inputs();
  const Standardizer scaling = basis_scaling(basis, xs);
  Design x;
  x.h = basis_matrix(basis, xs, scaling);
  const auto n = static_cast<Eigen::Index>(table.size());
  x.deaths.resize(n);
  x.offset.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const MortalityCell &c = table.cells()[static_cast<std::size_t>(i)];
    x.deaths(i) = c.deaths;
    x.offset(i) = std::log(c.exposure);
  }
  if (n < x.h.cols()) {
    throw ValidationError(fmt::format(
        "{} cells cannot identify a {}-term GLM", n, x.h.cols()));
  }

  GlmFit fit;
  fit.basis = basis;
  Eigen::VectorXd gamma = wls_step(x, (x.deaths.array() + 0.5).matrix());
  double dev = deviance_at(x, gamma);
  fit.deviance_trace.push_back(dev);

  for (int iter = 1; iter <= max_iter; ++iter) {
    fit.iterations = iter;
    const Eigen::VectorXd mu =
        (x.h * gamma + x.offset).array().exp().matrix();
    Eigen::VectorXd next = wls_step(x, mu);
    double next_dev = deviance_at(x, next);
    // Full steps within roundoff of the current deviance are kept.
    const double slack = 1e-12 * (std::abs(dev) + 1.0);
    for (int k = 0; k < kMaxHalvings && !(next_dev <= dev + slack); ++k) {
      next = 0.5 * (next + gamma);
      next_dev = deviance_at(x, next);
    }
    if (!(next_dev <= dev + slack)) {
      // Halving could not find descent: we are at the optimum to roundoff.
      next = gamma;
      next_dev = dev;
    }
    const double change = std::abs(dev - next_dev) / (std::abs(next_dev) + 0.1);
    gamma = next;
    dev = next_dev;
    fit.deviance_trace.push_back(dev);
    if (change < kRelativeTolerance) {
      fit.converged = true;
      break;
    }
  }
  if (!fit.converged) {
    std::string trace;
    for (double d : fit.deviance_trace) {
      trace += fmt::format(" {:.10g}", d);
    }
    throw NumericalError(fmt::format(
        "Poisson GLM did not converge in {} iterations; deviance trace:{}",
        max_iter, trace));
  }

  const Eigen::VectorXd mu = (x.h * gamma + x.offset).array().exp().matrix();
  const Eigen::MatrixXd info = x.h.transpose() * mu.asDiagonal() * x.h;
  const Eigen::MatrixXd t = coefficient_map(basis, scaling);
  const Eigen::MatrixXd cov = t * info.inverse() * t.transpose();
  fit.beta.beta = t * gamma;
  fit.std_errors = cov.diagonal().cwiseSqrt();
  fit.deviance = dev;
  return fit;
}

Eigen::VectorXd glm_predict(const GlmFit &fit, std::span<const AgeYear> x_star) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(x_star.size()));
  for (std::size_t i = 0; i < x_star.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = eval_mean(fit.basis, fit.beta, x_star[i]);
  }
  return out;
}

} // namespace mortgp
