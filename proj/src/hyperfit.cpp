#include "mortgp/hyperfit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "mortgp/errors.hpp"

namespace mortgp {

namespace {

constexpr double kFailurePenalty = 1e12;
constexpr double kOutOfBoxWeight = 1e3;
constexpr double kSimplexSize = 1e-4;
constexpr int kMaxPasses = 4;

/// Objective over the optimizer's log-space coordinates.
class ProfiledObjective {
public:
  ProfiledObjective(const TrainingSet &data, KernelFamily family,
                    MeanBasis basis, const NoiseModel &noise_template,
                    const FitConfig &config, const Standardizer &scale)
      : data_(data), family_(family), basis_(basis), noise_(noise_template),
        constant_noise_(std::holds_alternative<ConstantNoise>(noise_template)) {
    lo_.push_back(std::log(config.theta_ag.lo / scale.sd_ag));
    hi_.push_back(std::log(config.theta_ag.hi / scale.sd_ag));
    lo_.push_back(std::log(config.theta_yr.lo / scale.sd_yr));
    hi_.push_back(std::log(config.theta_yr.hi / scale.sd_yr));
    lo_.push_back(std::log(config.eta_sq.lo));
    hi_.push_back(std::log(config.eta_sq.hi));
    if (constant_noise_) {
      lo_.push_back(std::log(config.sigma_sq.lo));
      hi_.push_back(std::log(config.sigma_sq.hi));
    }
    sd_ag_ = scale.sd_ag;
    sd_yr_ = scale.sd_yr;
  }

  std::size_t dim() const { return lo_.size(); }
  double lo(std::size_t i) const { return lo_[i]; }
  double hi(std::size_t i) const { return hi_[i]; }

  std::vector<double> clamp(const std::vector<double> &p) const {
    std::vector<double> c(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      c[i] = std::clamp(p[i], lo_[i], hi_[i]);
    }
    return c;
  }

  KernelHyperparams to_hyperparams(const std::vector<double> &p) const {
    KernelHyperparams hp;
    hp.theta_ag = std::exp(p[0]) * sd_ag_;
    hp.theta_yr = std::exp(p[1]) * sd_yr_;
    hp.eta_sq = std::exp(p[2]);
    hp.sigma_sq = constant_noise_ ? std::exp(p[3]) : 0.0;
    return hp;
  }

  std::vector<double> to_params(const KernelHyperparams &hp) const {
    std::vector<double> p{std::log(hp.theta_ag / sd_ag_),
                          std::log(hp.theta_yr / sd_yr_), std::log(hp.eta_sq)};
    if (constant_noise_) {
      p.push_back(std::log(hp.sigma_sq));
    }
    return p;
  }

  NoiseModel noise_for(const KernelHyperparams &hp) const {
    if (constant_noise_) {
      return ConstantNoise{hp.sigma_sq};
    }
    return noise_;
  }

  /// Log-likelihood at a point inside the box.
  LogLikelihood evaluate(const KernelHyperparams &hp, TrainingSet &work) const {
    if (constant_noise_) {
      work.noise_variance.setConstant(hp.sigma_sq);
    }
    return log_marginal_likelihood(work, {family_, hp}, noise_for(hp), basis_);
  }

  /// Minimized by Nelder-Mead: negative log-likelihood at the clamped point
  /// plus a quadratic penalty for leaving the box.
  double penalized(const std::vector<double> &p, TrainingSet &work) const {
    const auto c = clamp(p);
    double excess = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      excess += (p[i] - c[i]) * (p[i] - c[i]);
    }
    const LogLikelihood ll = evaluate(to_hyperparams(c), work);
    const double base = ll.ok() ? -ll.value : kFailurePenalty;
    return base + kOutOfBoxWeight * excess;
  }

  const TrainingSet &data() const { return data_; }

private:
  const TrainingSet &data_;
  KernelFamily family_;
  MeanBasis basis_;
  NoiseModel noise_;
  bool constant_noise_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  double sd_ag_ = 1.0;
  double sd_yr_ = 1.0;
};

struct NelderMeadContext {
  const ProfiledObjective *objective;
  TrainingSet *work;
  int evaluations = 0;
};

double gsl_objective(const gsl_vector *x, void *params) {
  auto *ctx = static_cast<NelderMeadContext *>(params);
  std::vector<double> p(x->size);
  for (std::size_t i = 0; i < x->size; ++i) {
    p[i] = gsl_vector_get(x, i);
  }
  ++ctx->evaluations;
  return ctx->objective->penalized(p, *ctx->work);
}

/// One Nelder-Mead descent; returns the best vertex.
std::vector<double> nelder_mead_pass(NelderMeadContext &ctx,
                                     const std::vector<double> &start,
                                     double step, int max_iterations) {
  const std::size_t n = start.size();
  gsl_multimin_function fn{&gsl_objective, n, &ctx};
  gsl_vector *x = gsl_vector_alloc(n);
  gsl_vector *steps = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x, i, start[i]);
    gsl_vector_set(steps, i, step);
  }
  gsl_multimin_fminimizer *s =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, steps);
  for (int iter = 0; iter < max_iterations; ++iter) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) {
      break;
    }
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), kSimplexSize) ==
        GSL_SUCCESS) {
      break;
    }
  }
  std::vector<double> best(n);
  for (std::size_t i = 0; i < n; ++i) {
    best[i] = gsl_vector_get(s->x, i);
  }
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(steps);
  gsl_vector_free(x);
  return best;
}

struct RestartOutcome {
  RestartRecord record;
  bool converged = false;
};

RestartOutcome run_restart(const ProfiledObjective &objective, int index,
                           const std::vector<double> &start,
                           const FitConfig &config) {
  TrainingSet work = objective.data();
  NelderMeadContext ctx{&objective, &work, 0};

  RestartOutcome out;
  out.record.index = index;
  out.record.start = objective.to_hyperparams(start);

  std::vector<double> point = start;
  double value = -std::numeric_limits<double>::infinity();
  double step = 1.0;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    point = objective.clamp(
        nelder_mead_pass(ctx, point, step, config.max_iterations));
    const LogLikelihood ll =
        objective.evaluate(objective.to_hyperparams(point), work);
    const double next = ll.ok() ? ll.value : -std::numeric_limits<double>::infinity();
    if (pass > 0 && std::isfinite(next) &&
        std::abs(next - value) < config.tolerance) {
      value = std::max(value, next);
      out.converged = true;
      break;
    }
    value = next;
    step = 0.1;
  }
  out.record.end = objective.to_hyperparams(point);
  out.record.value = value;
  out.record.evaluations = ctx.evaluations;
  out.record.failed = !std::isfinite(value);
  return out;
}

int resolve_threads(const FitConfig &config) {
  if (config.threads > 0) {
    return config.threads;
  }
  if (const char *env = std::getenv("MORTGP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) {
      return n;
    }
  }
  return 1;
}

void check_degenerate(const TrainingSet &data, MeanBasis basis) {
  const auto p = static_cast<std::size_t>(dimension(basis));
  if (data.size() < p + 2) {
    throw ValidationError(fmt::format(
        "maximum likelihood needs at least {} cells for the '{}' basis, got {}",
        p + 2, to_string(basis), data.size()));
  }
  std::set<double> ages, years;
  for (const auto &x : data.inputs) {
    ages.insert(x.age);
    years.insert(x.year);
  }
  if (ages.size() < 2 || years.size() < 2) {
    throw ValidationError(
        "maximum likelihood needs at least two distinct ages and two distinct "
        "years");
  }
}

/// OLS residual variance of y on the standardized basis.
double detrended_variance(const TrainingSet &data, MeanBasis basis,
                          const Standardizer &scale) {
  Eigen::VectorXd r = data.response;
  if (dimension(basis) > 0) {
    const Eigen::MatrixXd h = basis_matrix(basis, data.inputs, scale);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(h);
    if (qr.rank() < h.cols()) {
      throw ValidationError("mean basis '" + to_string(basis) +
                            "' is rank deficient on the training inputs");
    }
    r -= h * qr.solve(data.response);
  }
  const double n = static_cast<double>(r.size());
  return r.squaredNorm() / std::max(n - 1.0, 1.0);
}

} // namespace

void FitConfig::validate() const {
  if (n_restarts < 1) {
    throw ValidationError("n_restarts must be positive");
  }
  for (const auto &[name, b] :
       {std::pair{"theta_ag", theta_ag}, std::pair{"theta_yr", theta_yr},
        std::pair{"eta_sq", eta_sq}, std::pair{"sigma_sq", sigma_sq}}) {
    if (!(b.lo > 0.0 && b.hi > b.lo && std::isfinite(b.hi))) {
      throw ValidationError(fmt::format("bad bounds for {}: [{}, {}]", name,
                                        b.lo, b.hi));
    }
  }
  if (!(tolerance > 0.0)) {
    throw ValidationError("tolerance must be positive");
  }
  if (!(overdispersion > 0.0)) {
    throw ValidationError("overdispersion must be positive");
  }
}

FitResult fit_mle(const TrainingSet &data, KernelFamily family,
                  MeanBasis basis, const NoiseModel &noise_template,
                  const FitConfig &config) {
  config.validate();
  check_degenerate(data, basis);
  const Standardizer scale = make_standardizer(data.inputs);
  const ProfiledObjective objective(data, family, basis, noise_template, config,
                                    scale);
  const std::size_t dim = objective.dim();

  // Starting points, all drawn before any work starts.
  std::vector<std::vector<double>> starts;
  {
    double min_ag = data.inputs.front().age, max_ag = min_ag;
    double min_yr = data.inputs.front().year, max_yr = min_yr;
    for (const auto &x : data.inputs) {
      min_ag = std::min(min_ag, x.age);
      max_ag = std::max(max_ag, x.age);
      min_yr = std::min(min_yr, x.year);
      max_yr = std::max(max_yr, x.year);
    }
    KernelHyperparams h;
    h.theta_ag = 0.5 * (max_ag - min_ag);
    h.theta_yr = 0.5 * (max_yr - min_yr);
    h.eta_sq = detrended_variance(data, basis, scale);
    h.sigma_sq = 1e-2 * h.eta_sq;
    if (!(h.eta_sq > 0.0)) {
      h.eta_sq = config.eta_sq.lo;
      h.sigma_sq = config.sigma_sq.lo;
    }
    starts.push_back(objective.clamp(objective.to_params(h)));

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int r = 1; r < config.n_restarts; ++r) {
      std::vector<double> p(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        p[i] = objective.lo(i) + unit(rng) * (objective.hi(i) - objective.lo(i));
      }
      starts.push_back(std::move(p));
    }
  }

  std::vector<RestartOutcome> outcomes(starts.size());
  const int n_threads =
      std::min<int>(resolve_threads(config), static_cast<int>(starts.size()));
  if (n_threads <= 1) {
    for (std::size_t r = 0; r < starts.size(); ++r) {
      outcomes[r] = run_restart(objective, static_cast<int>(r), starts[r], config);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int t = 0; t < n_threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t r = next++; r < starts.size(); r = next++) {
          outcomes[r] =
              run_restart(objective, static_cast<int>(r), starts[r], config);
        }
      });
    }
    for (auto &w : workers) {
      w.join();
    }
  }

  FitResult result;
  result.family = family;
  result.basis = basis;
  std::size_t best = outcomes.size();
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    result.restart_trace.push_back(outcomes[r].record);
    if (outcomes[r].record.failed) {
      continue;
    }
    if (best == outcomes.size() ||
        outcomes[r].record.value > outcomes[best].record.value) {
      best = r;
    }
  }
  if (best == outcomes.size()) {
    throw NumericalError("every restart failed to factorize C + Sigma");
  }

  result.hp = outcomes[best].record.end;
  result.noise = objective.noise_for(result.hp);
  result.log_likelihood = outcomes[best].record.value;
  result.converged = outcomes[best].converged;
  if (!result.converged) {
    result.warnings.push_back(
        "best restart did not meet the log-likelihood tolerance");
  }

  const auto p = objective.to_params(result.hp);
  static constexpr const char *kNames[] = {"theta_ag", "theta_yr", "eta_sq",
                                           "sigma_sq"};
  for (std::size_t i = 0; i < dim; ++i) {
    if (p[i] - objective.lo(i) < 1e-3 || objective.hi(i) - p[i] < 1e-3) {
      result.bound_hit = true;
      result.warnings.push_back(fmt::format(
          "{} ended at its {} bound", kNames[i],
          p[i] - objective.lo(i) < 1e-3 ? "lower" : "upper"));
    }
  }

  result.beta = refit(data, result).beta_hat();
  return result;
}

FitResult fit_mle(const MortalityTable &table, KernelFamily family,
                  MeanBasis basis, NoiseMode noise_mode,
                  const FitConfig &config) {
  const NoiseModel noise =
      noise_mode == NoiseMode::Constant
          ? NoiseModel{ConstantNoise{}}
          : NoiseModel{DeltaMethodNoise{config.overdispersion}};
  return fit_mle(TrainingSet::from_table(table, noise), family, basis, noise,
                 config);
}

FittedGP refit(const TrainingSet &data, const FitResult &result) {
  TrainingSet work = data;
  if (const auto *c = std::get_if<ConstantNoise>(&result.noise)) {
    work.noise_variance.setConstant(c->sigma_sq);
  }
  return fit_gls(work, {result.family, result.hp}, result.noise, result.basis);
}

std::vector<GridPoint> evaluate_grid(const TrainingSet &data,
                                     KernelFamily family, MeanBasis basis,
                                     const std::vector<KernelHyperparams> &grid) {
  std::vector<GridPoint> out;
  out.reserve(grid.size());
  TrainingSet work = data;
  for (const auto &hp : grid) {
    GridPoint g;
    g.hp = hp;
    try {
      hp.validate();
      work.noise_variance.setConstant(hp.sigma_sq);
      const LogLikelihood ll = log_marginal_likelihood(
          work, {family, hp}, ConstantNoise{hp.sigma_sq}, basis);
      g.log_likelihood = ll.value;
      g.failed = !ll.ok();
      g.diagnostic = ll.failure.value_or("");
    } catch (const ValidationError &e) {
      g.log_likelihood = -std::numeric_limits<double>::infinity();
      g.failed = true;
      g.diagnostic = e.what();
    }
    out.push_back(std::move(g));
  }
  return out;
}

} // namespace mortgp
