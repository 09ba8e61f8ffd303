#pragma once

#include <span>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "mortgp/data_model.hpp"

namespace mortgp {

enum class KernelFamily { SquaredExponential, Matern52 };

std::string to_string(KernelFamily family);
/// Accepts `se`, `sqexp`, `squared_exponential`, `matern52`, `matern5_2`.
KernelFamily parse_kernel_family(const std::string &text);

/// Theta = (theta_ag, theta_yr, eta^2, sigma^2). Lengthscales are in input
/// units (years of age, calendar years).
struct KernelHyperparams {
  double theta_ag = 1.0;
  double theta_yr = 1.0;
  double eta_sq = 1.0;
  double sigma_sq = 0.0;

  /// Throws ValidationError unless all fields are finite, the lengthscales and
  /// eta^2 are positive and sigma^2 is non-negative.
  void validate() const;

  friend bool operator==(const KernelHyperparams &,
                         const KernelHyperparams &) = default;
};

struct KernelSpec {
  KernelFamily family = KernelFamily::SquaredExponential;
  KernelHyperparams hp;
};

struct ConstantNoise {
  double sigma_sq = 0.0;
};

/// Cell-level variance overdispersion * (1 - p) / (p * E), p = D / E,
/// E = L + D/2.
struct DeltaMethodNoise {
  double overdispersion = 1.0;
};

using NoiseModel = std::variant<ConstantNoise, DeltaMethodNoise>;

/// `constant` (sigma^2 taken from `sigma_sq`), `constant:<s2>` or
/// `delta:<K>`.
NoiseModel parse_noise_model(const std::string &text, double sigma_sq = 0.0);
std::string to_string(const NoiseModel &model);

/// Observation variance of a single cell under the delta-method model.
double delta_method_variance(const MortalityCell &cell, double overdispersion);

double cov(KernelFamily family, const KernelHyperparams &hp, const AgeYear &x,
           const AgeYear &xp);

/// Symmetric N x N kernel matrix; each unordered pair is evaluated once.
Eigen::MatrixXd cov_matrix(KernelFamily family, const KernelHyperparams &hp,
                           std::span<const AgeYear> xs);

/// rows index `xs`, columns index `ys`.
Eigen::MatrixXd cross_cov(KernelFamily family, const KernelHyperparams &hp,
                          std::span<const AgeYear> xs,
                          std::span<const AgeYear> ys);

/// Diagonal of Sigma for the table's training cells (deaths > 0), in table
/// order. DeltaMethodNoise rejects tables that contain zero-death cells.
Eigen::VectorXd noise_diagonal(const NoiseModel &model,
                               const MortalityTable &table);
Eigen::MatrixXd noise_matrix(const NoiseModel &model,
                             const MortalityTable &table);

/// dC(x, x') / dx'_yr for the squared-exponential kernel:
///   C(x, x') * (x_yr - x'_yr) / theta_yr^2.
/// Throws UnsupportedOperation for other families.
double dcov_dyr(KernelFamily family, const KernelHyperparams &hp,
                const AgeYear &x, const AgeYear &xp);

/// d^2 C(x, x') / (dx_yr dx'_yr) for the squared-exponential kernel:
///   C(x, x') / theta_yr^2 * (1 - (x_yr - x'_yr)^2 / theta_yr^2).
double d2cov_dyr2(KernelFamily family, const KernelHyperparams &hp,
                  const AgeYear &x, const AgeYear &xp);

/// Nugget added to the diagonal of (C + Sigma) when Sigma vanishes.
inline double interpolation_jitter(const KernelHyperparams &hp) {
  return 1e-10 * hp.eta_sq;
}

} // namespace mortgp
