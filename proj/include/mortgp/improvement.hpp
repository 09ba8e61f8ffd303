#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mortgp/data_model.hpp"
#include "mortgp/gp_core.hpp"

namespace mortgp {

enum class ImprovementKind { Observed, BackwardGP, DiffGP, Centered };

/// `obs`, `back`, `diff`, `centered`.
std::string to_string(ImprovementKind kind);
ImprovementKind parse_improvement_kind(const std::string &text);

/// Mortality-improvement factors across ages for one calendar year.
/// Positive values mean mortality is falling.
struct ImprovementCurve {
  std::vector<int> ages;
  int year = 0;
  ImprovementKind kind = ImprovementKind::Observed;
  /// Half-width of the centered difference (Centered only).
  double h = 0.0;
  Eigen::VectorXd mean;
  /// Absent for Observed curves.
  std::optional<Eigen::VectorXd> sd;
  double level = 0.8;
  /// Band at `level`; empty for Observed curves.
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  std::vector<std::string> warnings;
};

/// 1 - exp(mu(ag, year)) / exp(mu(ag, year - 1)) from raw log-rates. Ages
/// lacking either cell (or with zero deaths) are skipped with a warning.
ImprovementCurve mi_back_observed(const MortalityTable &table, int year);

/// Monte Carlo estimate of E[1 - exp(f(ag, year) - f(ag, year - 1))] from the
/// exact two-point joint posterior at each age. Band edges are empirical
/// quantiles of the draws.
ImprovementCurve mi_back_gp(const FittedGP &gp, const std::vector<int> &ages,
                            int year, std::size_t n_samples = 10000,
                            std::uint64_t seed = 1, double level = 0.8);

/// -(f(ag, year + h) - f(ag, year - h)) / (2h) with exact Gaussian mean and
/// variance.
ImprovementCurve mi_centered(const FittedGP &gp, const std::vector<int> &ages,
                             int year, double h, double level = 0.8);

/// Negative year-derivative of the posterior surface (derivative GP). The
/// mean is exactly -d m_* / d year, including the prior-mean slope.
/// Throws UnsupportedOperation for kernels without derivative formulas.
ImprovementCurve mi_diff_gp(const FittedGP &gp, const std::vector<int> &ages,
                            int year, double level = 0.8);

/// Posterior of d f / d year at arbitrary inputs (not negated).
PosteriorSummary year_derivative(const FittedGP &gp,
                                 std::span<const AgeYear> x_star);

} // namespace mortgp
