#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "mortgp/errors.hpp"
#include "mortgp/glm_baseline.hpp"
#include "mortgp/gp_core.hpp"
#include "mortgp/hyperfit.hpp"
#include "mortgp/improvement.hpp"
#include "mortgp/serialization.hpp"
#include "mortgp/updating.hpp"

namespace mortgp::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string command;
  std::string data;
  std::string subset;
  std::string mean = "intercept";
  std::string kernel = "se";
  std::string noise = "constant";
  std::uint64_t seed = 1;
  std::optional<double> level;
  std::string out = ".";
  std::string model;
  int restarts = 8;
  int threads = 0;
  std::string ages;
  std::string years;
  std::string probes;
  std::string kind = "diff";
  std::optional<int> year;
  double h = 1.0;
  std::size_t samples = 10000;
  std::size_t paths = 100;
  bool observation = false;
  std::string protocol;
};

class Run {
public:
  Run(const Options &opt, std::ostream &out, std::ostream &err)
      : opt_(opt), out_(out), err_(err) {}

  void execute();

private:
  void fit();
  void smooth();
  void forecast();
  void improve();
  void sample();
  void update_model();
  void glm();
  void experiment();

  MortalityTable training_table() const;
  FitConfig fit_config() const;
  double level_or(double fallback) const { return opt_.level.value_or(fallback); }
  FittedGP model() const;
  std::vector<int> ages_or(const std::vector<AgeYear> &fallback) const;
  std::vector<AgeYear> grid() const;
  void write(const std::string &name, const std::string &text);
  void write_manifest();
  void warn(const std::string &msg) { err_ << "warning: " << msg << '\n'; }

  const Options &opt_;
  std::ostream &out_;
  std::ostream &err_;
  std::vector<std::string> outputs_;
};

std::vector<int> parse_int_list(const std::string &text, const char *what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      continue;
    }
    try {
      std::size_t used = 0;
      const int a = std::stoi(item, &used);
      int b = a;
      if (used < item.size()) {
        if (item[used] != '-') {
          throw std::invalid_argument(item);
        }
        std::size_t used_b = 0;
        const std::string rest = item.substr(used + 1);
        b = std::stoi(rest, &used_b);
        if (used_b != rest.size()) {
          throw std::invalid_argument(item);
        }
      }
      if (b < a) {
        throw std::invalid_argument(item);
      }
      for (int v = a; v <= b; ++v) {
        out.push_back(v);
      }
    } catch (const std::logic_error &) {
      throw ValidationError(fmt::format("bad {} list entry '{}'", what, item));
    }
  }
  if (out.empty()) {
    throw ValidationError(fmt::format("empty {} list", what));
  }
  return out;
}

std::vector<AgeYear> parse_probes(const std::string &text) {
  std::vector<AgeYear> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ValidationError("probe '" + item + "' must be age:year");
    }
    try {
      out.push_back({std::stod(item.substr(0, colon)),
                     std::stod(item.substr(colon + 1))});
    } catch (const std::logic_error &) {
      throw ValidationError("probe '" + item + "' must be age:year");
    }
  }
  if (out.empty()) {
    throw ValidationError("no probe points given");
  }
  return out;
}

std::vector<int> distinct_ages(const std::vector<AgeYear> &xs) {
  std::vector<int> ages;
  for (const auto &x : xs) {
    ages.push_back(static_cast<int>(std::lround(x.age)));
  }
  std::sort(ages.begin(), ages.end());
  ages.erase(std::unique(ages.begin(), ages.end()), ages.end());
  return ages;
}

NoiseMode noise_mode(const NoiseModel &noise) {
  return std::holds_alternative<ConstantNoise>(noise) ? NoiseMode::Constant
                                                      : NoiseMode::DeltaMethod;
}

std::string hp_header() {
  return fmt::format("{:<14}{:<14}{:<14}{:<14}{:<16}", "theta_ag", "theta_yr",
                     "eta^2", "sigma^2", "log_lik");
}

std::string beta_header(MeanBasis basis) {
  static const char *names[] = {"beta_0", "beta_1^ag", "beta_1^yr",
                                "beta_2^ag"};
  std::string s;
  for (Eigen::Index i = 0; i < dimension(basis); ++i) {
    s += fmt::format("{:<16}", names[i]);
  }
  return s;
}

std::string beta_row(const Eigen::VectorXd &b) {
  std::string s;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    s += fmt::format("{:<16.6g}", b(i));
  }
  return s;
}

void Run::write(const std::string &name, const std::string &text) {
  fs::create_directories(opt_.out);
  const fs::path path = fs::path(opt_.out) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw ValidationError("cannot write '" + path.string() + "'");
  }
  f << text;
  outputs_.push_back(name);
}

void Run::write_manifest() {
  nlohmann::json options = {
      {"data", opt_.data},       {"subset", opt_.subset},
      {"mean", opt_.mean},       {"kernel", opt_.kernel},
      {"noise", opt_.noise},     {"seed", opt_.seed},
      {"out", opt_.out},         {"model", opt_.model},
      {"restarts", opt_.restarts},
      {"ages", opt_.ages},       {"years", opt_.years},
      {"probes", opt_.probes},   {"kind", opt_.kind},
      {"h", opt_.h},             {"samples", opt_.samples},
      {"paths", opt_.paths},     {"observation", opt_.observation},
      {"protocol", opt_.protocol}};
  options["level"] = opt_.level ? nlohmann::json(*opt_.level) : nlohmann::json(nullptr);
  options["year"] = opt_.year ? nlohmann::json(*opt_.year) : nlohmann::json(nullptr);
  const nlohmann::json manifest = {{"tool", "mortgp"},
                                   {"version", kLibraryVersion},
                                   {"command", opt_.command},
                                   {"options", options},
                                   {"outputs", outputs_}};
  fs::create_directories(opt_.out);
  std::ofstream f(fs::path(opt_.out) / "manifest.json", std::ios::binary);
  f << manifest.dump(2) << '\n';
}

MortalityTable Run::training_table() const {
  if (opt_.data.empty()) {
    throw ValidationError("--data is required for '" + opt_.command + "'");
  }
  MortalityTable table = load_table_file(opt_.data);
  if (!opt_.subset.empty()) {
    table = subset(table, SubsetSpec::parse(opt_.subset));
  }
  return table;
}

FitConfig Run::fit_config() const {
  FitConfig c;
  c.n_restarts = opt_.restarts;
  c.seed = opt_.seed;
  c.threads = opt_.threads;
  const NoiseModel noise = parse_noise_model(opt_.noise);
  if (const auto *d = std::get_if<DeltaMethodNoise>(&noise)) {
    c.overdispersion = d->overdispersion;
  }
  return c;
}

FittedGP Run::model() const {
  if (opt_.model.empty()) {
    throw ValidationError("--model is required for '" + opt_.command + "'");
  }
  return load_model(opt_.model);
}

std::vector<int> Run::ages_or(const std::vector<AgeYear> &fallback) const {
  return opt_.ages.empty() ? distinct_ages(fallback)
                           : parse_int_list(opt_.ages, "age");
}

std::vector<AgeYear> Run::grid() const {
  if (!opt_.probes.empty()) {
    return parse_probes(opt_.probes);
  }
  if (opt_.years.empty()) {
    throw ValidationError("--years or --probes is required for '" +
                          opt_.command + "'");
  }
  const FittedGP gp = model();
  std::vector<AgeYear> xs;
  for (int y : parse_int_list(opt_.years, "year")) {
    for (int a : ages_or(gp.inputs())) {
      xs.push_back({double(a), double(y)});
    }
  }
  return xs;
}

void Run::fit() {
  const MortalityTable table = training_table();
  if (table.zero_death_count() > 0) {
    warn(fmt::format("{} zero-death cells excluded from GP training",
                     table.zero_death_count()));
  }
  const KernelFamily family = parse_kernel_family(opt_.kernel);
  const MeanBasis basis = parse_mean_basis(opt_.mean);
  const NoiseModel noise = parse_noise_model(opt_.noise);
  if (const auto *c = std::get_if<ConstantNoise>(&noise); c && c->sigma_sq != 0.0) {
    warn("sigma^2 is estimated by 'fit'; the value in --noise is ignored");
  }
  const FitResult r =
      fit_mle(table, family, basis, noise_mode(noise), fit_config());
  for (const auto &w : r.warnings) {
    warn(w);
  }
  const FittedGP gp = refit(TrainingSet::from_table(table, r.noise), r);

  out_ << fmt::format("Maximum likelihood fit: kernel {}, mean {}, noise {}, "
                      "{} training cells\n",
                      to_string(family), to_string(basis), to_string(r.noise),
                      gp.size());
  out_ << hp_header() << '\n';
  out_ << fmt::format("{:<14.6g}{:<14.6g}{:<14.6g}{:<14.6g}{:<16.8g}\n",
                      r.hp.theta_ag, r.hp.theta_yr, r.hp.eta_sq, r.hp.sigma_sq,
                      r.log_likelihood);
  if (dimension(basis) > 0) {
    out_ << beta_header(basis) << '\n' << beta_row(r.beta.beta) << '\n';
  }
  write("fit.json", fit_result_to_json(r));
  write("model.json", model_to_json(gp));
}

void Run::smooth() {
  const FittedGP gp = model();
  std::vector<AgeYear> xs = gp.inputs();
  if (!opt_.data.empty()) {
    xs = training_table().inputs();
  }
  const double level = level_or(0.95);
  std::ostringstream csv;
  write_posterior_csv(csv, predict(gp, xs), level);
  write("smooth.csv", csv.str());

  const ResidualDiagnostics res = residuals(gp);
  std::ostringstream rc;
  rc << "age,year,residual\n";
  for (std::size_t i = 0; i < res.inputs.size(); ++i) {
    rc << format_double(res.inputs[i].age) << ','
       << format_double(res.inputs[i].year) << ','
       << format_double(res.residuals(static_cast<Eigen::Index>(i))) << '\n';
  }
  write("residuals.csv", rc.str());
  std::ostringstream qq;
  qq << "theoretical,sample\n";
  for (const auto &[t, s] : res.qq) {
    qq << format_double(t) << ',' << format_double(s) << '\n';
  }
  write("qq.csv", qq.str());
  out_ << fmt::format("smoothed {} cells\n", xs.size());
}

void Run::forecast() {
  const FittedGP gp = model();
  const std::vector<AgeYear> xs = grid();
  const PosteriorSummary post =
      opt_.observation ? predict_observation(gp, xs) : predict(gp, xs);
  std::ostringstream csv;
  write_posterior_csv(csv, post, level_or(0.95));
  write("forecast.csv", csv.str());
  out_ << fmt::format("predicted {} cells\n", xs.size());
}

void Run::improve() {
  if (!opt_.year) {
    throw ValidationError("--year is required for 'improve'");
  }
  const ImprovementKind kind = parse_improvement_kind(opt_.kind);
  const double level = level_or(0.8);
  ImprovementCurve curve;
  if (kind == ImprovementKind::Observed) {
    curve = mi_back_observed(training_table(), *opt_.year);
  } else {
    const FittedGP gp = model();
    const std::vector<int> ages = ages_or(gp.inputs());
    switch (kind) {
    case ImprovementKind::BackwardGP:
      curve = mi_back_gp(gp, ages, *opt_.year, opt_.samples, opt_.seed, level);
      break;
    case ImprovementKind::Centered:
      curve = mi_centered(gp, ages, *opt_.year, opt_.h, level);
      break;
    default:
      curve = mi_diff_gp(gp, ages, *opt_.year, level);
      break;
    }
  }
  for (const auto &w : curve.warnings) {
    warn(w);
  }
  std::ostringstream csv;
  write_curve_csv(csv, curve);
  write("improve.csv", csv.str());
  out_ << fmt::format("{} improvement for {} ages in {}\n", to_string(kind),
                      curve.ages.size(), curve.year);
}

void Run::sample() {
  const FittedGP gp = model();
  const std::vector<AgeYear> xs = grid();
  const Eigen::MatrixXd paths = sample_paths(gp, xs, opt_.paths, opt_.seed);
  std::ostringstream csv;
  csv << "path,age,year,log_rate\n";
  for (Eigen::Index p = 0; p < paths.rows(); ++p) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      csv << p << ',' << format_double(xs[j].age) << ','
          << format_double(xs[j].year) << ','
          << format_double(paths(p, static_cast<Eigen::Index>(j))) << '\n';
    }
  }
  write("samples.csv", csv.str());
  out_ << fmt::format("drew {} paths at {} inputs\n", paths.rows(), xs.size());
}

void Run::update_model() {
  const FittedGP gp = model();
  const MortalityTable extra = training_table();
  const FittedGP next = update(gp, extra);
  const std::vector<AgeYear> probes =
      opt_.probes.empty() ? extra.inputs() : parse_probes(opt_.probes);
  const UpdateReport report = make_update_report(gp, next, probes);
  write("model.json", model_to_json(next));
  std::ostringstream csv;
  write_update_csv(csv, report);
  write("update.csv", csv.str());
  out_ << fmt::format("{:<8}{:<8}{:<14}{:<14}{:<14}{:<14}\n", "age", "year",
                      "mean_before", "sd_before", "mean_after", "sd_after");
  const Eigen::VectorXd sb = report.before.sd(), sa = report.after.sd();
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out_ << fmt::format("{:<8g}{:<8g}{:<14.6g}{:<14.6g}{:<14.6g}{:<14.6g}\n",
                        probes[i].age, probes[i].year, report.before.mean(k),
                        sb(k), report.after.mean(k), sa(k));
  }
}

void Run::glm() {
  const MortalityTable table = training_table();
  const MeanBasis basis = parse_mean_basis(opt_.mean);
  const GlmFit g = fit_poisson_glm(table, basis);
  out_ << fmt::format("Poisson GLM fit: mean {}, {} cells, deviance {:.8g}, "
                      "{} iterations\n",
                      to_string(basis), table.size(), g.deviance, g.iterations);
  out_ << fmt::format("{:<12}", "") << beta_header(basis) << '\n';
  out_ << fmt::format("{:<12}", "estimate") << beta_row(g.beta.beta) << '\n';
  out_ << fmt::format("{:<12}", "std_error") << beta_row(g.std_errors) << '\n';
  write("glm.json", glm_to_json(g));
}

void Run::experiment() {
  if (opt_.data.empty()) {
    throw ValidationError("--data is required for 'experiment'");
  }
  std::string region = opt_.protocol;
  std::string mean = opt_.mean;
  if (const auto dash = region.find('-'); dash != std::string::npos) {
    mean = region.substr(dash + 1);
    region = region.substr(0, dash);
  }
  const auto train_spec = protocol_region(region, SubsetRole::Train);
  const auto test_spec = protocol_region(region, SubsetRole::Test);
  if (!train_spec || !test_spec) {
    throw ValidationError("unknown or test-free protocol '" + opt_.protocol +
                          "' (use subset1, subset2 or subset3, optionally "
                          "suffixed with -intercept, -linear or -quadratic)");
  }
  const MortalityTable full = load_table_file(opt_.data);
  const MortalityTable train = subset(full, *train_spec);
  const MortalityTable test = subset(full, *test_spec);
  const KernelFamily family = parse_kernel_family(opt_.kernel);
  const MeanBasis basis = parse_mean_basis(mean);
  const NoiseModel noise = parse_noise_model(opt_.noise);

  const FitResult r =
      fit_mle(train, family, basis, noise_mode(noise), fit_config());
  for (const auto &w : r.warnings) {
    warn(w);
  }
  const FittedGP gp = refit(TrainingSet::from_table(train, r.noise), r);
  const GlmFit g = fit_poisson_glm(train, basis == MeanBasis::None
                                              ? MeanBasis::Intercept
                                              : basis);

  const std::vector<AgeYear> xs = test.inputs();
  const PosteriorSummary post = predict(gp, xs);
  const Eigen::VectorXd glm_mean = glm_predict(g, xs);
  const Eigen::VectorXd sd = post.sd();

  std::ostringstream csv;
  csv << "age,year,observed,gp_mean,gp_sd,glm_mean\n";
  double se_gp = 0.0, se_glm = 0.0;
  std::size_t scored = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const MortalityCell &c = test.cells()[i];
    csv << c.age << ',' << c.year << ','
        << (c.zero_deaths() ? "" : format_double(c.log_rate)) << ','
        << format_double(post.mean(k)) << ',' << format_double(sd(k)) << ','
        << format_double(glm_mean(k)) << '\n';
    if (!c.zero_deaths()) {
      se_gp += std::pow(post.mean(k) - c.log_rate, 2);
      se_glm += std::pow(glm_mean(k) - c.log_rate, 2);
      ++scored;
    }
  }
  write("experiment.csv", csv.str());

  const std::vector<AgeYear> probes = parse_probes(
      opt_.probes.empty() ? std::string("70:2014,80:2014") : opt_.probes);
  const PosteriorSummary at = predict(gp, probes);
  const Eigen::VectorXd glm_at = glm_predict(g, probes);
  out_ << fmt::format("Protocol {}: kernel {}, mean {}, {} training / {} test "
                      "cells\n",
                      region, to_string(family), to_string(basis),
                      gp.size(), test.size());
  out_ << hp_header() << '\n';
  out_ << fmt::format("{:<14.6g}{:<14.6g}{:<14.6g}{:<14.6g}{:<16.8g}\n",
                      r.hp.theta_ag, r.hp.theta_yr, r.hp.eta_sq, r.hp.sigma_sq,
                      r.log_likelihood);
  out_ << fmt::format("{:<8}{:<8}{:<14}{:<14}{:<14}{:<14}\n", "age", "year",
                      "observed", "gp_mean", "gp_sd", "glm_mean");
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const MortalityCell *c = full.find(static_cast<int>(std::lround(probes[i].age)),
                                       static_cast<int>(std::lround(probes[i].year)));
    const std::string obs =
        c && !c->zero_deaths() ? fmt::format("{:.4f}", c->log_rate) : "-";
    out_ << fmt::format("{:<8g}{:<8g}{:<14}{:<14.4f}{:<14.4f}{:<14.4f}\n",
                        probes[i].age, probes[i].year, obs, at.mean(k),
                        std::sqrt(at.variance(k)), glm_at(k));
  }
  if (scored > 0) {
    const auto n = static_cast<double>(scored);
    out_ << fmt::format("held-out RMSE (log rate): GP {:.6f}, GLM {:.6f}\n",
                        std::sqrt(se_gp / n), std::sqrt(se_glm / n));
  }

  nlohmann::json summary = {
      {"protocol", region},
      {"fit", nlohmann::json::parse(fit_result_to_json(r))},
      {"glm", nlohmann::json::parse(glm_to_json(g))},
      {"test_cells", test.size()},
      {"scored_cells", scored}};
  if (scored > 0) {
    summary["rmse_gp"] = std::sqrt(se_gp / double(scored));
    summary["rmse_glm"] = std::sqrt(se_glm / double(scored));
  }
  write("experiment.json", summary.dump(2) + "\n");
}

void Run::execute() {
  if (opt_.command == "fit") {
    fit();
  } else if (opt_.command == "smooth") {
    smooth();
  } else if (opt_.command == "forecast") {
    forecast();
  } else if (opt_.command == "improve") {
    improve();
  } else if (opt_.command == "sample") {
    sample();
  } else if (opt_.command == "update") {
    update_model();
  } else if (opt_.command == "glm") {
    glm();
  } else if (opt_.command == "experiment") {
    experiment();
  }
  write_manifest();
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  Options opt;
  CLI::App app{"Gaussian-process models of age/year mortality surfaces",
               "mortgp"};
  app.require_subcommand(1);

  const auto data = [&](CLI::App *s, const char *help) {
    s->add_option("--data", opt.data, help);
  };
  const auto model_opts = [&](CLI::App *s) {
    s->add_option("--subset", opt.subset,
                  "y0-y1:a0-a1[;...] or subset1/subset2/subset3/all");
    s->add_option("--mean", opt.mean, "intercept|linear|quadratic");
    s->add_option("--kernel", opt.kernel, "se|matern52");
    s->add_option("--noise", opt.noise, "constant|delta:K");
    s->add_option("--restarts", opt.restarts, "optimizer restarts");
    s->add_option("--threads", opt.threads,
                  "restart threads (0: MORTGP_THREADS or 1)");
  };
  const auto common = [&](CLI::App *s) {
    s->add_option("--seed", opt.seed, "random seed");
    s->add_option("--out", opt.out, "output directory");
    s->add_option("--level", opt.level, "credible level in (0, 1)");
  };
  const auto model_in = [&](CLI::App *s) {
    s->add_option("--model", opt.model, "model JSON written by fit")->required();
  };
  const auto grid = [&](CLI::App *s) {
    s->add_option("--ages", opt.ages, "ages, e.g. 50-84 or 60,65,70");
    s->add_option("--years", opt.years, "years, e.g. 2015-2020");
    s->add_option("--probes", opt.probes, "age:year[,age:year...]");
  };

  auto *fit = app.add_subcommand("fit", "maximum-likelihood fit");
  data(fit, "mortality CSV");
  model_opts(fit);
  common(fit);

  auto *smooth = app.add_subcommand("smooth", "posterior at observed cells");
  model_in(smooth);
  data(smooth, "cells to smooth (default: training inputs)");
  smooth->add_option("--subset", opt.subset, "subset of --data");
  common(smooth);

  auto *forecast = app.add_subcommand("forecast", "posterior at new cells");
  model_in(forecast);
  grid(forecast);
  forecast->add_flag("--observation", opt.observation,
                     "include observation noise");
  common(forecast);

  auto *improve = app.add_subcommand("improve", "mortality improvement");
  improve->set_help_flag("--help", "Print this help message and exit");
  improve->add_option("--model", opt.model, "model JSON written by fit");
  data(improve, "mortality CSV (for --kind obs)");
  improve->add_option("--subset", opt.subset, "subset of --data");
  improve->add_option("--kind", opt.kind, "obs|back|diff|centered");
  improve->add_option("--year", opt.year, "calendar year")->required();
  improve->add_option("--h", opt.h, "centered-difference half width");
  improve->add_option("--samples", opt.samples, "Monte Carlo draws for back");
  improve->add_option("--ages", opt.ages, "ages, e.g. 50-84");
  common(improve);

  auto *sample = app.add_subcommand("sample", "joint posterior draws");
  model_in(sample);
  grid(sample);
  sample->add_option("--paths", opt.paths, "number of draws");
  common(sample);

  auto *upd = app.add_subcommand("update", "condition a model on new cells");
  model_in(upd);
  data(upd, "CSV of new cells");
  upd->add_option("--subset", opt.subset, "subset of --data");
  upd->add_option("--probes", opt.probes, "age:year[,age:year...]");
  common(upd);

  auto *glm = app.add_subcommand("glm", "Poisson GLM baseline");
  data(glm, "mortality CSV");
  glm->add_option("--subset", opt.subset, "subset of --data");
  glm->add_option("--mean", opt.mean, "intercept|linear|quadratic");
  common(glm);

  auto *experiment =
      app.add_subcommand("experiment", "train/test protocol replay");
  data(experiment, "mortality CSV");
  experiment->add_option("--protocol", opt.protocol,
                         "subset1|subset2|subset3[-intercept|-linear|-quadratic]")
      ->required();
  experiment->add_option("--probes", opt.probes, "age:year[,age:year...]");
  model_opts(experiment);
  common(experiment);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err);
  }
  opt.command = app.get_subcommands().front()->get_name();

  try {
    Run(opt, out, err).execute();
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

} // namespace mortgp::cli
