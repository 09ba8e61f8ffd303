#include <doctest.h>

#include <cmath>
#include <random>

#include "mortgp/errors.hpp"
#include "mortgp/updating.hpp"
#include "support/synthetic.hpp"

using namespace mortgp;
using testing::max_abs;

namespace {

const auto SE = KernelFamily::SquaredExponential;

std::vector<AgeYear> probes() {
  std::vector<AgeYear> p;
  for (int a = 50; a <= 70; a += 5) {
    for (int y : {1999, 2005, 2012, 2013, 2015}) {
      p.push_back({double(a), double(y)});
    }
  }
  return p;
}

} // namespace

TEST_SUITE("updating") {

TEST_CASE("update equals refit on the augmented table") {
  const MortalityTable full = testing::synthetic_table(50, 70, 1999, 2012, 2e5, 5);
  const MortalityTable old = subset(full, SubsetSpec::parse("1999-2011:50-70"));
  const MortalityTable extra = subset(full, SubsetSpec::parse("2012:50-70"));
  for (auto noise : {NoiseModel{ConstantNoise{4e-4}}, NoiseModel{DeltaMethodNoise{1.5}}}) {
    for (auto basis : {MeanBasis::Intercept, MeanBasis::QuadraticAge}) {
      const KernelSpec k{SE, {12, 9, 0.8, 0}};
      const FittedGP gp = fit_gls(old, k, noise, basis);
      const FittedGP upd = update(gp, extra);
      const FittedGP ref = fit_gls(full, k, noise, basis);
      const auto p = probes();
      const auto a = predict(upd, p);
      const auto b = predict(ref, p);
      CHECK(max_abs(a.mean - b.mean) < 1e-10);
      CHECK(max_abs(a.sd() - b.sd()) < 1e-10);
      CHECK(upd.hyperparams() == ref.hyperparams());
      const UpdateReport r = make_update_report(gp, upd, p);
      CHECK(r.sd_delta.minCoeff() >= -1e-10);
    }
  }
}

TEST_CASE("random augmentation keeps credibility monotone") {
  std::mt19937_64 rng(17);
  const KernelHyperparams hp{10, 8, 1.0, 1e-3};
  const auto xs = testing::random_inputs(60, rng);
  const Eigen::VectorXd y = testing::draw_gp(SE, hp, xs, 1e-3, 3);
  std::vector<AgeYear> first(xs.begin(), xs.begin() + 40);
  const FittedGP gp = fit_gls(testing::make_training(first, y.head(40), 1e-3), {SE, hp},
                              ConstantNoise{1e-3}, MeanBasis::Linear);
  // New cells as a table: integer inputs with exact log rates.
  std::vector<MortalityCell> cells;
  for (int i = 0; i < 10; ++i) {
    cells.push_back(MortalityCell::make(55 + i, 2016, 50 + i, 10000));
  }
  const MortalityTable extra(cells);
  const FittedGP upd = update(gp, extra);
  const auto p = testing::random_inputs(40, rng, 50, 85, 1999, 2020);
  const UpdateReport r = make_update_report(gp, upd, p);
  CHECK(r.sd_delta.minCoeff() >= -1e-10);
  CHECK(upd.size() == 50);
}

TEST_CASE("far past is insensitive to new data") {
  const MortalityTable full = testing::synthetic_table(50, 70, 1960, 2014, 2e5, 9);
  const MortalityTable old = subset(full, SubsetSpec::parse("1960-2013:50-70"));
  const MortalityTable extra = subset(full, SubsetSpec::parse("2014:50-70"));
  const KernelHyperparams hp{12, 5, 0.8, 4e-4};
  const FittedGP gp = fit_gls(old, {SE, hp}, ConstantNoise{4e-4}, MeanBasis::Intercept);
  const FittedGP upd = update(gp, extra);
  const std::vector<AgeYear> past{{60, 1970}, {55, 1965}};
  const auto before = predict(gp, past), after = predict(upd, past);
  CHECK(max_abs(before.mean - after.mean) < 1e-3 * std::sqrt(hp.eta_sq));
}

TEST_CASE("identity and overlap") {
  const MortalityTable t = testing::synthetic_table(50, 60, 2000, 2005, 1e5, 3);
  const FittedGP gp = fit_gls(t, {SE, {10, 6, 1, 1e-3}}, ConstantNoise{1e-3},
                              MeanBasis::Linear);
  const FittedGP same = update(gp, MortalityTable());
  const auto p = probes();
  CHECK(max_abs(predict(gp, p).mean - predict(same, p).mean) < 1e-12);
  CHECK_THROWS_AS(update(gp, subset(t, SubsetSpec::parse("2005:50-52"))), ValidationError);
}

}
