#include "mortgp/updating.hpp"

#include <set>
#include <utility>

#include <fmt/format.h>

#include "mortgp/errors.hpp"

namespace mortgp {

FittedGP update(const FittedGP &gp, const MortalityTable &new_cells) {
  const TrainingSet extra = TrainingSet::from_table(new_cells, gp.noise());

  std::set<std::pair<double, double>> seen;
  for (const auto &x : gp.inputs()) {
    seen.emplace(x.age, x.year);
  }
  for (const auto &x : extra.inputs) {
    if (seen.count({x.age, x.year}) != 0) {
      throw ValidationError(fmt::format(
          "cell (age {}, year {}) is already in the training data", x.age,
          x.year));
    }
  }

  TrainingSet data;
  data.inputs = gp.inputs();
  data.inputs.insert(data.inputs.end(), extra.inputs.begin(),
                     extra.inputs.end());
  const Eigen::Index n = static_cast<Eigen::Index>(gp.size());
  const Eigen::Index k = static_cast<Eigen::Index>(extra.size());
  data.response.resize(n + k);
  data.response << gp.response(), extra.response;
  data.noise_variance.resize(n + k);
  data.noise_variance << gp.noise_variance(), extra.noise_variance;
  return fit_gls(data, gp.kernel(), gp.noise(), gp.basis());
}

UpdateReport make_update_report(const FittedGP &before, const FittedGP &after,
                                std::span<const AgeYear> probes) {
  UpdateReport report;
  report.before = predict(before, probes);
  report.after = predict(after, probes);
  report.sd_delta = report.before.sd() - report.after.sd();
  return report;
}

} // namespace mortgp
