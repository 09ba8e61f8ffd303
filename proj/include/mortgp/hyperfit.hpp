#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mortgp/gp_core.hpp"

namespace mortgp {

/// Closed interval in natural units; the optimizer works on its logarithm.
struct ParamBounds {
  double lo = 0.0;
  double hi = 0.0;
};

enum class NoiseMode { Constant, DeltaMethod };

struct FitConfig {
  int n_restarts = 8;
  ParamBounds theta_ag{0.5, 100.0};
  ParamBounds theta_yr{0.5, 100.0};
  ParamBounds eta_sq{1e-6, 1e2};
  ParamBounds sigma_sq{1e-10, 1.0};
  /// Stop once a Nelder-Mead pass improves the log-likelihood by less than
  /// this.
  double tolerance = 1e-7;
  int max_iterations = 2000;
  std::uint64_t seed = 1;
  /// Overdispersion for NoiseMode::DeltaMethod.
  double overdispersion = 1.0;
  /// 0 means: read MORTGP_THREADS, default 1.
  int threads = 0;

  void validate() const;
};

struct RestartRecord {
  int index = 0;
  KernelHyperparams start;
  KernelHyperparams end;
  double value = 0.0;
  int evaluations = 0;
  bool failed = false;
};

struct FitResult {
  KernelFamily family = KernelFamily::SquaredExponential;
  MeanBasis basis = MeanBasis::Intercept;
  NoiseModel noise = ConstantNoise{};
  KernelHyperparams hp;
  MeanCoefficients beta;
  double log_likelihood = 0.0;
  std::vector<RestartRecord> restart_trace;
  bool converged = false;
  /// Some hyperparameter ended within 1e-3 (log scale) of its bound.
  bool bound_hit = false;
  std::vector<std::string> warnings;
};

/// Maximum-likelihood hyperparameters with beta profiled by GLS.
///
/// Optimizes log(theta_ag / sd_ag), log(theta_yr / sd_yr), log eta^2 and (for
/// constant noise) log sigma^2 with multi-start Nelder-Mead. The first start
/// is a data-driven heuristic, the rest are log-uniform in the bounds, all
/// drawn up front from `config.seed`. Restarts may run on several threads;
/// the winner is the largest value with ties going to the lower index.
///
/// Throws ValidationError for degenerate data and NumericalError when every
/// restart fails.
FitResult fit_mle(const TrainingSet &data, KernelFamily family,
                  MeanBasis basis, const NoiseModel &noise_template,
                  const FitConfig &config);
FitResult fit_mle(const MortalityTable &table, KernelFamily family,
                  MeanBasis basis, NoiseMode noise_mode,
                  const FitConfig &config);

/// Rebuilds the fitted model at the returned optimum.
FittedGP refit(const TrainingSet &data, const FitResult &result);

struct GridPoint {
  KernelHyperparams hp;
  double log_likelihood = 0.0;
  bool failed = false;
  std::string diagnostic;
};

/// Profiled log-likelihood at each grid point (constant noise taken from
/// each point's sigma^2). Failed factorizations are marked, not thrown.
std::vector<GridPoint> evaluate_grid(const TrainingSet &data,
                                     KernelFamily family, MeanBasis basis,
                                     const std::vector<KernelHyperparams> &grid);

} // namespace mortgp
