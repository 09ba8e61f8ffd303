#include "mortgp/improvement.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "mortgp/errors.hpp"

namespace mortgp {

namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ValidationError(fmt::format("credible level {} outside (0, 1)", level));
  }
}

/// Linear-interpolation sample quantile of sorted data.
double sorted_quantile(const std::vector<double> &sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) {
    return sorted.back();
  }
  const double frac = pos - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

void gaussian_band(ImprovementCurve &curve) {
  const double z = two_sided_z(curve.level);
  curve.lo = curve.mean - z * *curve.sd;
  curve.hi = curve.mean + z * *curve.sd;
}

std::vector<AgeYear> age_inputs(const std::vector<int> &ages, double year) {
  std::vector<AgeYear> xs;
  xs.reserve(ages.size());
  for (int a : ages) {
    xs.push_back({static_cast<double>(a), year});
  }
  return xs;
}

} // namespace

std::string to_string(ImprovementKind kind) {
  switch (kind) {
  case ImprovementKind::Observed:
    return "obs";
  case ImprovementKind::BackwardGP:
    return "back";
  case ImprovementKind::DiffGP:
    return "diff";
  case ImprovementKind::Centered:
    return "centered";
  }
  return "unknown";
}

ImprovementKind parse_improvement_kind(const std::string &text) {
  if (text == "obs" || text == "observed") {
    return ImprovementKind::Observed;
  }
  if (text == "back") {
    return ImprovementKind::BackwardGP;
  }
  if (text == "diff") {
    return ImprovementKind::DiffGP;
  }
  if (text == "centered") {
    return ImprovementKind::Centered;
  }
  throw ValidationError("unknown improvement kind '" + text + "'");
}

ImprovementCurve mi_back_observed(const MortalityTable &table, int year) {
  ImprovementCurve curve;
  curve.year = year;
  curve.kind = ImprovementKind::Observed;
  std::vector<double> values;
  for (int age : table.distinct_ages()) {
    const MortalityCell *now = table.find(age, year);
    const MortalityCell *before = table.find(age, year - 1);
    if (now == nullptr || before == nullptr) {
      curve.warnings.push_back(
          fmt::format("age {}: no cell for both {} and {}", age, year - 1, year));
      continue;
    }
    if (now->zero_deaths() || before->zero_deaths()) {
      curve.warnings.push_back(
          fmt::format("age {}: zero deaths in {} or {}", age, year - 1, year));
      continue;
    }
    curve.ages.push_back(age);
    values.push_back(1.0 - std::exp(now->log_rate - before->log_rate));
  }
  curve.mean = Eigen::Map<const Eigen::VectorXd>(
      values.data(), static_cast<Eigen::Index>(values.size()));
  return curve;
}

ImprovementCurve mi_back_gp(const FittedGP &gp, const std::vector<int> &ages,
                            int year, std::size_t n_samples, std::uint64_t seed,
                            double level) {
  check_level(level);
  if (n_samples < 2) {
    throw ValidationError("mi_back_gp needs at least two samples");
  }
  ImprovementCurve curve;
  curve.ages = ages;
  curve.year = year;
  curve.kind = ImprovementKind::BackwardGP;
  curve.level = level;
  const auto m = static_cast<Eigen::Index>(ages.size());
  curve.mean.resize(m);
  curve.sd = Eigen::VectorXd(m);
  curve.lo.resize(m);
  curve.hi.resize(m);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> draws(n_samples);
  const auto n = static_cast<double>(n_samples);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double age = ages[static_cast<std::size_t>(k)];
    const std::vector<AgeYear> pair{{age, year - 1.0}, {age, double(year)}};
    const PosteriorSummary post = predict(gp, pair, true);
    const Eigen::MatrixXd &c = *post.covariance;
    // 2x2 Cholesky that tolerates a singular block.
    const double l11 = std::sqrt(std::max(c(0, 0), 0.0));
    const double l21 = l11 > 0.0 ? c(1, 0) / l11 : 0.0;
    const double l22 = std::sqrt(std::max(c(1, 1) - l21 * l21, 0.0));

    double sum = 0.0;
    for (std::size_t s = 0; s < n_samples; ++s) {
      const double z1 = normal(rng);
      const double z2 = normal(rng);
      const double f_prev = post.mean(0) + l11 * z1;
      const double f_now = post.mean(1) + l21 * z1 + l22 * z2;
      draws[s] = 1.0 - std::exp(f_now - f_prev);
      sum += draws[s];
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (double d : draws) {
      ss += (d - mean) * (d - mean);
    }
    curve.mean(k) = mean;
    (*curve.sd)(k) = std::sqrt(ss / (n - 1.0));
    std::sort(draws.begin(), draws.end());
    curve.lo(k) = std::min(sorted_quantile(draws, 0.5 - 0.5 * level), mean);
    curve.hi(k) = std::max(sorted_quantile(draws, 0.5 + 0.5 * level), mean);
  }
  return curve;
}

ImprovementCurve mi_centered(const FittedGP &gp, const std::vector<int> &ages,
                             int year, double h, double level) {
  check_level(level);
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ValidationError(fmt::format("centered difference needs h > 0, got {}", h));
  }
  ImprovementCurve curve;
  curve.ages = ages;
  curve.year = year;
  curve.kind = ImprovementKind::Centered;
  curve.h = h;
  curve.level = level;
  const auto m = static_cast<Eigen::Index>(ages.size());
  curve.mean.resize(m);
  curve.sd = Eigen::VectorXd(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double age = ages[static_cast<std::size_t>(k)];
    const std::vector<AgeYear> pair{{age, year + h}, {age, year - h}};
    const PosteriorSummary post = predict(gp, pair, true);
    const Eigen::MatrixXd &c = *post.covariance;
    curve.mean(k) = -(post.mean(0) - post.mean(1)) / (2.0 * h);
    const double var = (c(0, 0) + c(1, 1) - 2.0 * c(0, 1)) / (4.0 * h * h);
    (*curve.sd)(k) = std::sqrt(std::max(var, 0.0));
  }
  gaussian_band(curve);
  return curve;
}

PosteriorSummary year_derivative(const FittedGP &gp,
                                 std::span<const AgeYear> x_star) {
  const KernelFamily family = gp.family();
  const KernelHyperparams &hp = gp.hyperparams();
  const auto n = static_cast<Eigen::Index>(gp.size());
  const auto m = static_cast<Eigen::Index>(x_star.size());

  Eigen::MatrixXd cross(n, m);
  Eigen::VectorXd prior(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const AgeYear &xs = x_star[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < n; ++i) {
      cross(i, j) = dcov_dyr(family, hp, gp.inputs()[static_cast<std::size_t>(i)], xs);
    }
    prior(j) = d2cov_dyr2(family, hp, xs, xs);
  }
  const Eigen::VectorXd d = basis_year_derivative(gp.basis(), gp.basis_scaling());
  const Eigen::MatrixXd basis_cols = d.replicate(1, m);

  auto f = gp.posterior(cross, basis_cols, prior.asDiagonal().toDenseMatrix(), false);
  PosteriorSummary out;
  out.inputs.assign(x_star.begin(), x_star.end());
  out.mean = std::move(f.mean);
  out.variance = std::move(f.variance);
  return out;
}

ImprovementCurve mi_diff_gp(const FittedGP &gp, const std::vector<int> &ages,
                            int year, double level) {
  check_level(level);
  ImprovementCurve curve;
  curve.ages = ages;
  curve.year = year;
  curve.kind = ImprovementKind::DiffGP;
  curve.level = level;
  const PosteriorSummary deriv = year_derivative(gp, age_inputs(ages, year));
  curve.mean = -deriv.mean;
  curve.sd = deriv.sd();
  gaussian_band(curve);
  return curve;
}

} // namespace mortgp
