#include "mortgp/serialization.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "mortgp/errors.hpp"

namespace mortgp {

using nlohmann::json;

namespace {

json hyperparams_json(const KernelHyperparams &hp) {
  return {{"theta_ag", hp.theta_ag},
          {"theta_yr", hp.theta_yr},
          {"eta_sq", hp.eta_sq},
          {"sigma_sq", hp.sigma_sq}};
}

json noise_json(const NoiseModel &noise) {
  if (const auto *c = std::get_if<ConstantNoise>(&noise)) {
    return {{"type", "constant"}, {"sigma_sq", c->sigma_sq}};
  }
  return {{"type", "delta"},
          {"overdispersion", std::get<DeltaMethodNoise>(noise).overdispersion}};
}

json vector_json(const Eigen::VectorXd &v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from(const json &j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot open '" + path + "' for writing");
  }
  out << text;
}

std::string blank_or(const std::optional<Eigen::VectorXd> &v, Eigen::Index i) {
  return v ? format_double((*v)(i)) : std::string();
}

} // namespace

std::string format_double(double v) { return fmt::format("{}", v); }

std::string model_to_json(const FittedGP &gp) {
  json inputs = json::array();
  for (const auto &x : gp.inputs()) {
    inputs.push_back({x.age, x.year});
  }
  const json j = {{"schema_version", kModelSchemaVersion},
                  {"library_version", kLibraryVersion},
                  {"family", to_string(gp.family())},
                  {"hyperparams", hyperparams_json(gp.hyperparams())},
                  {"noise", noise_json(gp.noise())},
                  {"basis", to_string(gp.basis())},
                  {"beta", vector_json(gp.beta_hat().beta)},
                  {"inputs", inputs},
                  {"y", vector_json(gp.response())},
                  {"noise_variance", vector_json(gp.noise_variance())}};
  return j.dump(2) + "\n";
}

FittedGP model_from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("model JSON: ") + e.what(), 0);
  }
  TrainingSet data;
  KernelSpec kernel;
  NoiseModel noise;
  MeanBasis basis;
  Eigen::VectorXd beta;
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw ParseError(fmt::format("unsupported model schema version {}", version),
                       0);
    }
    kernel.family = parse_kernel_family(j.at("family").get<std::string>());
    const json &hp = j.at("hyperparams");
    kernel.hp.theta_ag = hp.at("theta_ag").get<double>();
    kernel.hp.theta_yr = hp.at("theta_yr").get<double>();
    kernel.hp.eta_sq = hp.at("eta_sq").get<double>();
    kernel.hp.sigma_sq = hp.at("sigma_sq").get<double>();
    const json &nz = j.at("noise");
    const std::string type = nz.at("type").get<std::string>();
    if (type == "constant") {
      noise = ConstantNoise{nz.at("sigma_sq").get<double>()};
    } else if (type == "delta") {
      noise = DeltaMethodNoise{nz.at("overdispersion").get<double>()};
    } else {
      throw ParseError("unknown noise type '" + type + "'", 0);
    }
    basis = parse_mean_basis(j.at("basis").get<std::string>());
    beta = vector_from(j.at("beta"));
    for (const auto &x : j.at("inputs")) {
      if (!x.is_array() || x.size() != 2) {
        throw ParseError("model inputs must be [age, year] pairs", 0);
      }
      data.inputs.push_back({x[0].get<double>(), x[1].get<double>()});
    }
    data.response = vector_from(j.at("y"));
    data.noise_variance = vector_from(j.at("noise_variance"));
  } catch (const json::exception &e) {
    throw ParseError(std::string("model JSON: ") + e.what(), 0);
  }

  FittedGP gp = fit_gls(data, kernel, noise, basis);
  const Eigen::VectorXd refit = gp.beta_hat().beta;
  if (refit.size() != beta.size() ||
      ((refit - beta).array().abs() > 1e-6 * (1.0 + beta.array().abs())).any()) {
    throw ValidationError(
        "stored mean coefficients do not match the training data");
  }
  return gp;
}

void save_model(const std::string &path, const FittedGP &gp) {
  write_file(path, model_to_json(gp));
}

FittedGP load_model(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open model file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

std::string fit_result_to_json(const FitResult &fit) {
  json restarts = json::array();
  for (const auto &r : fit.restart_trace) {
    restarts.push_back({{"index", r.index},
                        {"start", hyperparams_json(r.start)},
                        {"end", hyperparams_json(r.end)},
                        {"log_likelihood", r.failed ? json(nullptr) : json(r.value)},
                        {"evaluations", r.evaluations},
                        {"failed", r.failed}});
  }
  const json j = {{"family", to_string(fit.family)},
                  {"basis", to_string(fit.basis)},
                  {"noise", noise_json(fit.noise)},
                  {"hyperparams", hyperparams_json(fit.hp)},
                  {"beta", vector_json(fit.beta.beta)},
                  {"log_likelihood", fit.log_likelihood},
                  {"converged", fit.converged},
                  {"bound_hit", fit.bound_hit},
                  {"warnings", fit.warnings},
                  {"restarts", restarts}};
  return j.dump(2) + "\n";
}

std::string glm_to_json(const GlmFit &fit) {
  const json j = {{"basis", to_string(fit.basis)},
                  {"beta", vector_json(fit.beta.beta)},
                  {"std_errors", vector_json(fit.std_errors)},
                  {"deviance", fit.deviance},
                  {"iterations", fit.iterations},
                  {"converged", fit.converged},
                  {"deviance_trace", fit.deviance_trace}};
  return j.dump(2) + "\n";
}

void write_posterior_csv(std::ostream &out, const PosteriorSummary &post,
                         double level) {
  const Band band = post.band(level);
  const Eigen::VectorXd sd = post.sd();
  out << "age,year,mean_log,sd_log,lo,hi,level\n";
  for (std::size_t i = 0; i < post.inputs.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << format_double(post.inputs[i].age) << ','
        << format_double(post.inputs[i].year) << ','
        << format_double(post.mean(k)) << ',' << format_double(sd(k)) << ','
        << format_double(band.lo(k)) << ',' << format_double(band.hi(k)) << ','
        << format_double(level) << '\n';
  }
}

void write_curve_csv(std::ostream &out, const ImprovementCurve &curve,
                     bool header) {
  if (header) {
    out << "age,year,kind,mean,sd,lo,hi\n";
  }
  const bool banded = curve.lo.size() == curve.mean.size();
  for (std::size_t i = 0; i < curve.ages.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << curve.ages[i] << ',' << curve.year << ',' << to_string(curve.kind)
        << ',' << format_double(curve.mean(k)) << ',' << blank_or(curve.sd, k)
        << ',' << (banded ? format_double(curve.lo(k)) : "") << ','
        << (banded ? format_double(curve.hi(k)) : "") << '\n';
  }
}

void write_update_csv(std::ostream &out, const UpdateReport &report) {
  const Eigen::VectorXd sb = report.before.sd();
  const Eigen::VectorXd sa = report.after.sd();
  out << "age,year,mean_before,sd_before,mean_after,sd_after,sd_delta\n";
  for (std::size_t i = 0; i < report.before.inputs.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << format_double(report.before.inputs[i].age) << ','
        << format_double(report.before.inputs[i].year) << ','
        << format_double(report.before.mean(k)) << ',' << format_double(sb(k))
        << ',' << format_double(report.after.mean(k)) << ','
        << format_double(sa(k)) << ',' << format_double(report.sd_delta(k))
        << '\n';
  }
}

} // namespace mortgp
