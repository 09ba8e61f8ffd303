#include "mortgp/gp_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <tuple>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "mortgp/errors.hpp"

namespace mortgp {

namespace {

constexpr double kVarianceTolerance = 1e-10;

/// Clamps roundoff-level negative variances to zero and rejects the rest.
void clamp_variances(Eigen::VectorXd &v, const char *what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) < 0.0) {
      if (v(i) < -kVarianceTolerance) {
        throw NumericalError(
            fmt::format("{} variance {} at index {} is negative", what, v(i), i));
      }
      v(i) = 0.0;
    }
  }
}

TrainingSet canonical_order(const TrainingSet &data) {
  const std::size_t n = data.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto key = [&](std::size_t i) {
    const auto e = static_cast<Eigen::Index>(i);
    return std::make_tuple(data.inputs[i].year, data.inputs[i].age,
                           data.response(e), data.noise_variance(e));
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  TrainingSet out;
  out.inputs.reserve(n);
  out.response.resize(static_cast<Eigen::Index>(n));
  out.noise_variance.resize(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = static_cast<Eigen::Index>(order[k]);
    const auto dst = static_cast<Eigen::Index>(k);
    out.inputs.push_back(data.inputs[order[k]]);
    out.response(dst) = data.response(src);
    out.noise_variance(dst) = data.noise_variance(src);
  }
  return out;
}

} // namespace

TrainingSet TrainingSet::from_table(const MortalityTable &table,
                                    const NoiseModel &noise) {
  const auto cells = table.training_cells();
  TrainingSet data;
  data.inputs.reserve(cells.size());
  data.response.resize(static_cast<Eigen::Index>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    data.inputs.push_back(cells[i].input());
    data.response(static_cast<Eigen::Index>(i)) = cells[i].log_rate;
  }
  data.noise_variance = noise_diagonal(noise, table);
  return data;
}

MeanCoefficients FittedGP::beta_hat() const {
  return {coefficient_map(basis_, scaling_) * gamma_};
}

double FittedGP::log_determinant() const {
  return 2.0 * factor_.diagonal().array().log().sum();
}

Eigen::MatrixXd FittedGP::solve(const Eigen::MatrixXd &rhs) const {
  const auto lower = factor_.triangularView<Eigen::Lower>();
  return lower.transpose().solve(lower.solve(rhs));
}

double FittedGP::prior_mean(const AgeYear &x) const {
  return eval_basis(basis_, scaling_.standardize(x)).dot(gamma_);
}

Eigen::MatrixXd FittedGP::whiten_gls(const Eigen::MatrixXd &u) const {
  if (gamma_.size() == 0) {
    return Eigen::MatrixXd(0, u.cols());
  }
  // (A^T A)^{-1} = P R^{-1} R^{-T} P^T for A P = Q R.
  const Eigen::MatrixXd permuted = gls_perm_.transpose() * u;
  return gls_r_.triangularView<Eigen::Upper>().transpose().solve(permuted);
}

FittedGP::Functionals FittedGP::posterior(const Eigen::MatrixXd &cross,
                                          const Eigen::MatrixXd &basis_cols,
                                          const Eigen::MatrixXd &prior,
                                          bool want_covariance) const {
  const Eigen::MatrixXd v = factor_.triangularView<Eigen::Lower>().solve(cross);
  Functionals out;
  out.mean = cross.transpose() * weights_;
  if (gamma_.size() > 0) {
    out.mean += basis_cols.transpose() * gamma_;
  }
  Eigen::MatrixXd w;
  if (gamma_.size() > 0) {
    const Eigen::MatrixXd u = basis_cols - whitened_basis_.transpose() * v;
    w = whiten_gls(u);
  }
  out.variance = prior.diagonal() - v.colwise().squaredNorm().transpose();
  if (w.size() > 0) {
    out.variance += w.colwise().squaredNorm().transpose();
  }
  clamp_variances(out.variance, "posterior");
  if (want_covariance) {
    Eigen::MatrixXd c = prior - v.transpose() * v;
    if (w.size() > 0) {
      c += w.transpose() * w;
    }
    c = 0.5 * (c + c.transpose()).eval();
    c.diagonal() = out.variance;
    out.covariance = std::move(c);
  }
  return out;
}

FittedGP fit_gls(const TrainingSet &raw, const KernelSpec &kernel,
                 const NoiseModel &noise, MeanBasis basis) {
  kernel.hp.validate();
  const auto n = static_cast<Eigen::Index>(raw.size());
  if (raw.response.size() != n || raw.noise_variance.size() != n) {
    throw ValidationError("training set vectors have inconsistent lengths");
  }
  if (n == 0) {
    throw ValidationError("training set is empty");
  }
  if ((raw.noise_variance.array() < 0.0).any() ||
      !raw.noise_variance.allFinite() || !raw.response.allFinite()) {
    throw ValidationError(
        "training responses must be finite and noise variances non-negative");
  }
  const Eigen::Index p = dimension(basis);
  if (n < p) {
    throw ValidationError(fmt::format(
        "{} training points cannot identify a {}-term mean basis", n, p));
  }

  TrainingSet data = canonical_order(raw);
  if (const auto *c = std::get_if<ConstantNoise>(&noise)) {
    if (c->sigma_sq < 0.0 || !std::isfinite(c->sigma_sq)) {
      throw ValidationError("constant noise variance must be non-negative");
    }
    data.noise_variance.setConstant(c->sigma_sq);
  }

  FittedGP gp;
  gp.family_ = kernel.family;
  gp.hp_ = kernel.hp;
  gp.noise_ = noise;
  gp.hp_.sigma_sq = std::holds_alternative<ConstantNoise>(noise)
                        ? std::get<ConstantNoise>(noise).sigma_sq
                        : 0.0;
  gp.basis_ = basis;
  gp.scaling_ = basis_scaling(basis, data.inputs);
  gp.jitter_ = (data.noise_variance.array() == 0.0).all()
                   ? interpolation_jitter(gp.hp_)
                   : 0.0;

  Eigen::MatrixXd k = cov_matrix(gp.family_, gp.hp_, data.inputs);
  k.diagonal() += data.noise_variance;
  k.diagonal().array() += gp.jitter_;

  // Factor in place; k is rebuilt only to report a failure.
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(k);
  if (llt.info() != Eigen::Success) {
    k = cov_matrix(gp.family_, gp.hp_, data.inputs);
    k.diagonal() += data.noise_variance;
    k.diagonal().array() += gp.jitter_;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(k);
    throw NumericalError(fmt::format(
        "Cholesky factorization of C + Sigma failed (N = {}); smallest pivot "
        "{:.3e}",
        n, ldlt.vectorD().minCoeff()));
  }
  k.triangularView<Eigen::StrictlyUpper>().setZero();
  gp.factor_ = std::move(k);

  const auto lower = gp.factor_.triangularView<Eigen::Lower>();
  gp.basis_matrix_ = basis_matrix(basis, data.inputs, gp.scaling_);
  const Eigen::VectorXd y_tilde = lower.solve(data.response);

  if (p > 0) {
    gp.whitened_basis_ = lower.solve(gp.basis_matrix_);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gp.whitened_basis_);
    if (qr.rank() < p) {
      throw NumericalError(fmt::format(
          "mean basis '{}' is rank deficient on the training inputs (rank {} "
          "< {})",
          to_string(basis), qr.rank(), p));
    }
    gp.gamma_ = qr.solve(y_tilde);
    gp.gls_r_ = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    gp.gls_perm_ = qr.colsPermutation();
    gp.whitened_residual_ = y_tilde - gp.whitened_basis_ * gp.gamma_;
  } else {
    gp.whitened_basis_.resize(n, 0);
    gp.gamma_.resize(0);
    gp.whitened_residual_ = y_tilde;
  }
  gp.weights_ =
      gp.factor_.transpose().triangularView<Eigen::Upper>().solve(
          gp.whitened_residual_);

  gp.inputs_ = std::move(data.inputs);
  gp.response_ = std::move(data.response);
  gp.noise_variance_ = std::move(data.noise_variance);
  return gp;
}

FittedGP fit_gls(const MortalityTable &table, const KernelSpec &kernel,
                 const NoiseModel &noise, MeanBasis basis) {
  return fit_gls(TrainingSet::from_table(table, noise), kernel, noise, basis);
}

Band PosteriorSummary::band(double level) const {
  const double z = two_sided_z(level);
  const Eigen::VectorXd s = sd();
  return {level, mean - z * s, mean + z * s};
}

Band PosteriorSummary::rate_band(double level) const {
  Band b = band(level);
  b.lo = b.lo.array().exp();
  b.hi = b.hi.array().exp();
  return b;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError(fmt::format("quantile level {} outside (0, 1)", p));
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double two_sided_z(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ValidationError(fmt::format("credible level {} outside (0, 1)", level));
  }
  return normal_quantile(0.5 + 0.5 * level);
}

PosteriorSummary predict(const FittedGP &gp, std::span<const AgeYear> x_star,
                         bool want_covariance) {
  const Eigen::MatrixXd cross =
      cross_cov(gp.family(), gp.hyperparams(), gp.inputs(), x_star);
  const Eigen::MatrixXd basis_cols =
      basis_matrix(gp.basis(), x_star, gp.basis_scaling()).transpose();
  Eigen::MatrixXd prior;
  if (want_covariance) {
    prior = cov_matrix(gp.family(), gp.hyperparams(), x_star);
  } else {
    prior = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(x_star.size()),
                                      gp.hyperparams().eta_sq)
                .asDiagonal();
  }
  auto f = gp.posterior(cross, basis_cols, prior, want_covariance);
  PosteriorSummary out;
  out.inputs.assign(x_star.begin(), x_star.end());
  out.mean = std::move(f.mean);
  out.variance = std::move(f.variance);
  out.covariance = std::move(f.covariance);
  return out;
}

PosteriorSummary predict_observation(const FittedGP &gp,
                                     std::span<const AgeYear> x_star) {
  const auto *constant = std::get_if<ConstantNoise>(&gp.noise());
  if (constant == nullptr) {
    throw UnsupportedOperation(
        "observation intervals need the exposure at each prediction point; "
        "refit with constant noise");
  }
  PosteriorSummary out = predict(gp, x_star, false);
  out.variance.array() += constant->sigma_sq;
  return out;
}

Eigen::MatrixXd sample_paths(const FittedGP &gp,
                             std::span<const AgeYear> x_star,
                             std::size_t n_paths, std::uint64_t seed) {
  if (n_paths == 0) {
    throw ValidationError("n_paths must be positive");
  }
  const PosteriorSummary post = predict(gp, x_star, true);
  Eigen::MatrixXd c = *post.covariance;
  c.diagonal().array() += 1e-10 * gp.hyperparams().eta_sq;
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(
        "posterior covariance is not positive definite after jitter");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const auto m = static_cast<Eigen::Index>(x_star.size());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(m, static_cast<Eigen::Index>(n_paths));
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      z(i, j) = normal(rng);
    }
  }
  Eigen::MatrixXd paths = (l * z).transpose();
  paths.rowwise() += post.mean.transpose();
  return paths;
}

ResidualDiagnostics residuals(const FittedGP &gp) {
  const PosteriorSummary fit = predict(gp, gp.inputs(), false);
  ResidualDiagnostics out;
  out.inputs = gp.inputs();
  out.residuals = gp.response() - fit.mean;

  std::vector<double> sorted(out.residuals.data(),
                             out.residuals.data() + out.residuals.size());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  out.qq.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    out.qq.emplace_back(normal_quantile(p), sorted[i]);
  }
  return out;
}

double log_marginal_likelihood(const FittedGP &gp) {
  const auto n = static_cast<double>(gp.size());
  return -0.5 * gp.whitened_residual().squaredNorm() -
         0.5 * gp.log_determinant() -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

LogLikelihood log_marginal_likelihood(const TrainingSet &data,
                                      const KernelSpec &kernel,
                                      const NoiseModel &noise,
                                      MeanBasis basis) {
  try {
    const FittedGP gp = fit_gls(data, kernel, noise, basis);
    return {log_marginal_likelihood(gp), std::nullopt};
  } catch (const NumericalError &e) {
    return {-std::numeric_limits<double>::infinity(), std::string(e.what())};
  }
}

LogLikelihood log_marginal_likelihood(const MortalityTable &table,
                                      const KernelSpec &kernel,
                                      const NoiseModel &noise,
                                      MeanBasis basis) {
  return log_marginal_likelihood(TrainingSet::from_table(table, noise), kernel,
                                 noise, basis);
}

} // namespace mortgp
