#include "mortgp/kernel.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mortgp/errors.hpp"

namespace mortgp {

namespace {

double matern52_factor(double delta, double theta) {
  const double r = std::sqrt(5.0) * std::abs(delta) / theta;
  return (1.0 + r + r * r / 3.0) * std::exp(-r);
}

void require_derivatives(KernelFamily family) {
  if (family != KernelFamily::SquaredExponential) {
    throw UnsupportedOperation(
        "year derivatives are only available for the squared-exponential "
        "kernel; got " +
        to_string(family));
  }
}

} // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
  case KernelFamily::SquaredExponential:
    return "squared_exponential";
  case KernelFamily::Matern52:
    return "matern52";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(const std::string &text) {
  if (text == "se" || text == "sqexp" || text == "gauss" ||
      text == "squared_exponential") {
    return KernelFamily::SquaredExponential;
  }
  if (text == "matern52" || text == "matern5_2") {
    return KernelFamily::Matern52;
  }
  throw ValidationError("unknown kernel family '" + text + "'");
}

void KernelHyperparams::validate() const {
  const bool finite = std::isfinite(theta_ag) && std::isfinite(theta_yr) &&
                      std::isfinite(eta_sq) && std::isfinite(sigma_sq);
  if (!finite || theta_ag <= 0.0 || theta_yr <= 0.0 || eta_sq <= 0.0 ||
      sigma_sq < 0.0) {
    throw ValidationError(fmt::format(
        "invalid hyperparameters theta_ag={} theta_yr={} eta_sq={} sigma_sq={}",
        theta_ag, theta_yr, eta_sq, sigma_sq));
  }
}

NoiseModel parse_noise_model(const std::string &text, double sigma_sq) {
  if (text == "constant") {
    return ConstantNoise{sigma_sq};
  }
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const auto kind = text.substr(0, colon);
    double value = 0.0;
    try {
      value = std::stod(text.substr(colon + 1));
    } catch (const std::exception &) {
      throw ValidationError("bad noise model '" + text + "'");
    }
    if (kind == "constant" && value >= 0.0) {
      return ConstantNoise{value};
    }
    if (kind == "delta" && value > 0.0) {
      return DeltaMethodNoise{value};
    }
  }
  throw ValidationError("bad noise model '" + text +
                        "' (expected constant, constant:<s2> or delta:<K>)");
}

std::string to_string(const NoiseModel &model) {
  if (const auto *c = std::get_if<ConstantNoise>(&model)) {
    return fmt::format("constant:{}", c->sigma_sq);
  }
  return fmt::format("delta:{}", std::get<DeltaMethodNoise>(model).overdispersion);
}

double delta_method_variance(const MortalityCell &cell, double overdispersion) {
  if (cell.zero_deaths()) {
    throw ValidationError(fmt::format(
        "delta-method noise undefined for zero-death cell (age {}, year {})",
        cell.age, cell.year));
  }
  const double e = cell.exposure_risk();
  const double p = cell.deaths / e;
  return overdispersion * (1.0 - p) / (p * e);
}

double cov(KernelFamily family, const KernelHyperparams &hp, const AgeYear &x,
           const AgeYear &xp) {
  const double d_ag = x.age - xp.age;
  const double d_yr = x.year - xp.year;
  switch (family) {
  case KernelFamily::SquaredExponential:
    return hp.eta_sq *
           std::exp(-d_ag * d_ag / (2.0 * hp.theta_ag * hp.theta_ag) -
                    d_yr * d_yr / (2.0 * hp.theta_yr * hp.theta_yr));
  case KernelFamily::Matern52:
    return hp.eta_sq * matern52_factor(d_ag, hp.theta_ag) *
           matern52_factor(d_yr, hp.theta_yr);
  }
  return 0.0;
}

Eigen::MatrixXd cov_matrix(KernelFamily family, const KernelHyperparams &hp,
                           std::span<const AgeYear> xs) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    c(j, j) = hp.eta_sq;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = cov(family, hp, xs[i], xs[j]);
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return c;
}

Eigen::MatrixXd cross_cov(KernelFamily family, const KernelHyperparams &hp,
                          std::span<const AgeYear> xs,
                          std::span<const AgeYear> ys) {
  Eigen::MatrixXd c(static_cast<Eigen::Index>(xs.size()),
                    static_cast<Eigen::Index>(ys.size()));
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      c(i, j) = cov(family, hp, xs[i], ys[j]);
    }
  }
  return c;
}

Eigen::VectorXd noise_diagonal(const NoiseModel &model,
                               const MortalityTable &table) {
  const auto cells = table.training_cells();
  Eigen::VectorXd d(static_cast<Eigen::Index>(cells.size()));
  if (const auto *c = std::get_if<ConstantNoise>(&model)) {
    d.setConstant(c->sigma_sq);
    return d;
  }
  if (table.zero_death_count() > 0) {
    throw ValidationError(
        "delta-method noise requires deaths > 0 in every cell; use constant "
        "noise or drop zero-death cells");
  }
  const double k = std::get<DeltaMethodNoise>(model).overdispersion;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    d(static_cast<Eigen::Index>(i)) = delta_method_variance(cells[i], k);
  }
  return d;
}

Eigen::MatrixXd noise_matrix(const NoiseModel &model,
                             const MortalityTable &table) {
  return noise_diagonal(model, table).asDiagonal();
}

double dcov_dyr(KernelFamily family, const KernelHyperparams &hp,
                const AgeYear &x, const AgeYear &xp) {
  require_derivatives(family);
  const double t2 = hp.theta_yr * hp.theta_yr;
  return cov(family, hp, x, xp) * (x.year - xp.year) / t2;
}

double d2cov_dyr2(KernelFamily family, const KernelHyperparams &hp,
                  const AgeYear &x, const AgeYear &xp) {
  require_derivatives(family);
  const double t2 = hp.theta_yr * hp.theta_yr;
  const double d = x.year - xp.year;
  return cov(family, hp, x, xp) / t2 * (1.0 - d * d / t2);
}

} // namespace mortgp
