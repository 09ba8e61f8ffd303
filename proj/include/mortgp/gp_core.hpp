#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mortgp/data_model.hpp"
#include "mortgp/kernel.hpp"
#include "mortgp/mean_basis.hpp"

namespace mortgp {

/// Inputs, responses and per-point observation variances (diagonal of Sigma).
struct TrainingSet {
  std::vector<AgeYear> inputs;
  Eigen::VectorXd response;
  Eigen::VectorXd noise_variance;

  /// Training cells of the table (deaths > 0) with y = log(D/L).
  static TrainingSet from_table(const MortalityTable &table,
                                const NoiseModel &noise);

  std::size_t size() const { return inputs.size(); }
};

/// Universal-kriging model with a cached factorization of (C + Sigma).
///
/// Training points are kept in canonical (year, age) order, so row
/// permutations of the input do not change any result. The mean basis is
/// evaluated on standardized inputs internally; `beta_hat()` reports the
/// coefficients on the raw age/year scale.
///
/// Immutable once built; concurrent const use is safe.
class FittedGP {
public:
  const std::vector<AgeYear> &inputs() const { return inputs_; }
  const Eigen::VectorXd &response() const { return response_; }
  const Eigen::VectorXd &noise_variance() const { return noise_variance_; }
  std::size_t size() const { return inputs_.size(); }

  KernelFamily family() const { return family_; }
  const KernelHyperparams &hyperparams() const { return hp_; }
  KernelSpec kernel() const { return {family_, hp_}; }
  const NoiseModel &noise() const { return noise_; }
  MeanBasis basis() const { return basis_; }
  const Standardizer &basis_scaling() const { return scaling_; }

  /// Raw-scale GLS coefficients.
  MeanCoefficients beta_hat() const;
  /// Coefficients of the standardized basis.
  const Eigen::VectorXd &beta_standardized() const { return gamma_; }

  /// Diagonal nugget added to (C + Sigma); zero unless Sigma vanishes.
  double jitter() const { return jitter_; }
  /// Lower-triangular L with L L^T = C + Sigma + jitter I.
  const Eigen::MatrixXd &factor() const { return factor_; }
  double log_determinant() const;

  /// Basis matrix H on the standardized inputs.
  const Eigen::MatrixXd &basis_matrix() const { return basis_matrix_; }

  /// (C + Sigma)^{-1} B through the cached factor.
  Eigen::MatrixXd solve(const Eigen::MatrixXd &rhs) const;

  /// (C + Sigma)^{-1} (y - H beta).
  const Eigen::VectorXd &weights() const { return weights_; }
  /// L^-1 (y - H beta).
  const Eigen::VectorXd &whitened_residual() const { return whitened_residual_; }

  /// Prior mean h(x) beta at an arbitrary input.
  double prior_mean(const AgeYear &x) const;

  /// Joint posterior of M linear functionals of f.
  ///
  /// `cross` (N x M) holds Cov(f(x^i), functional_j), `basis_cols` (p x M)
  /// the functionals applied to the mean basis, and `prior` the M x M prior
  /// covariance of the functionals. Only the diagonal of `prior` is read when
  /// `want_covariance` is false.
  struct Functionals {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;
    std::optional<Eigen::MatrixXd> covariance;
  };
  Functionals posterior(const Eigen::MatrixXd &cross,
                        const Eigen::MatrixXd &basis_cols,
                        const Eigen::MatrixXd &prior,
                        bool want_covariance) const;

  /// W with W^T W = u^T (H^T K^-1 H)^{-1} u, i.e. the GLS correction term
  /// of the universal-kriging covariance.
  Eigen::MatrixXd whiten_gls(const Eigen::MatrixXd &u) const;

private:
  friend FittedGP fit_gls(const TrainingSet &, const KernelSpec &,
                          const NoiseModel &, MeanBasis);

  std::vector<AgeYear> inputs_;
  Eigen::VectorXd response_;
  Eigen::VectorXd noise_variance_;
  KernelFamily family_ = KernelFamily::SquaredExponential;
  KernelHyperparams hp_;
  NoiseModel noise_ = ConstantNoise{};
  MeanBasis basis_ = MeanBasis::Intercept;
  Standardizer scaling_;
  double jitter_ = 0.0;

  Eigen::MatrixXd factor_;
  Eigen::MatrixXd basis_matrix_;
  Eigen::MatrixXd whitened_basis_; // L^-1 H
  Eigen::MatrixXd gls_r_;          // R of the column-pivoted QR of L^-1 H
  Eigen::PermutationMatrix<Eigen::Dynamic> gls_perm_;
  Eigen::VectorXd gamma_;
  Eigen::VectorXd whitened_residual_; // L^-1 (y - H gamma)
  Eigen::VectorXd weights_;
};

/// Fits the universal-kriging model with fixed hyperparameters.
///
/// Sigma comes from `noise`. For ConstantNoise its sigma^2 is authoritative
/// and is copied into the stored hyperparameters; for DeltaMethodNoise the
/// stored sigma^2 is zero and the training set's variances are used.
///
/// Throws NumericalError when (C + Sigma) is not positive definite (the
/// message names the smallest LDL^T pivot) or when H is rank deficient.
FittedGP fit_gls(const TrainingSet &data, const KernelSpec &kernel,
                 const NoiseModel &noise, MeanBasis basis);
FittedGP fit_gls(const MortalityTable &table, const KernelSpec &kernel,
                 const NoiseModel &noise, MeanBasis basis);

struct Band {
  double level = 0.95;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

/// Gaussian posterior at a list of inputs, on the log-rate scale.
struct PosteriorSummary {
  std::vector<AgeYear> inputs;
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  std::optional<Eigen::MatrixXd> covariance;

  Eigen::VectorXd sd() const { return variance.cwiseSqrt(); }
  /// mean -/+ z sd with z the two-sided Gaussian quantile at `level`.
  Band band(double level) const;
  /// exp of the log-scale band (quantiles commute with exp).
  Band rate_band(double level) const;
};

/// Standard normal quantile.
double normal_quantile(double p);
/// z with P(|Z| <= z) = level.
double two_sided_z(double level);

/// Posterior of the latent surface f at `x_star`.
PosteriorSummary predict(const FittedGP &gp, std::span<const AgeYear> x_star,
                         bool want_covariance = false);

/// Posterior of future observations y = f + eps. Under ConstantNoise the
/// variance gains sigma^2; DeltaMethodNoise is rejected because exposures at
/// prediction points are unknown.
PosteriorSummary predict_observation(const FittedGP &gp,
                                     std::span<const AgeYear> x_star);

/// `n_paths` x M draws from N(m_*, C_*) using a Cholesky factor of
/// C_* + 1e-10 eta^2 I. Deterministic for a given seed.
Eigen::MatrixXd sample_paths(const FittedGP &gp,
                             std::span<const AgeYear> x_star,
                             std::size_t n_paths, std::uint64_t seed);

struct ResidualDiagnostics {
  std::vector<AgeYear> inputs;
  Eigen::VectorXd residuals;
  /// (theoretical normal quantile, sorted residual), ascending.
  std::vector<std::pair<double, double>> qq;
};

/// y - m_*(x) at the training inputs with Q-Q pairs against N(0, 1)
/// quantiles at plotting positions (i - 1/2) / n.
ResidualDiagnostics residuals(const FittedGP &gp);

struct LogLikelihood {
  double value = 0.0;
  /// Set when the evaluation failed; `value` is then -infinity.
  std::optional<std::string> failure;

  bool ok() const { return !failure.has_value(); }
};

/// Gaussian log marginal likelihood of the GLS-detrended responses
/// y - H beta_hat(Theta):
///   -1/2 r^T (C + Sigma)^{-1} r - 1/2 log|C + Sigma| - N/2 log(2 pi).
LogLikelihood log_marginal_likelihood(const TrainingSet &data,
                                      const KernelSpec &kernel,
                                      const NoiseModel &noise, MeanBasis basis);
LogLikelihood log_marginal_likelihood(const MortalityTable &table,
                                      const KernelSpec &kernel,
                                      const NoiseModel &noise, MeanBasis basis);
/// Same quantity from an already fitted model.
double log_marginal_likelihood(const FittedGP &gp);

} // namespace mortgp
