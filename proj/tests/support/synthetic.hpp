#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mortgp/data_model.hpp"
#include "mortgp/gp_core.hpp"
#include "mortgp/kernel.hpp"

namespace mortgp::testing {

inline std::vector<AgeYear> grid_inputs(int age0, int age1, int year0,
                                        int year1) {
  std::vector<AgeYear> xs;
  for (int y = year0; y <= year1; ++y) {
    for (int a = age0; a <= age1; ++a) {
      xs.push_back({double(a), double(y)});
    }
  }
  return xs;
}

inline std::vector<AgeYear> random_inputs(std::size_t n, std::mt19937_64 &rng,
                                          double age0 = 50, double age1 = 85,
                                          double year0 = 1999,
                                          double year1 = 2015) {
  std::uniform_real_distribution<double> ua(age0, age1), uy(year0, year1);
  std::vector<AgeYear> xs(n);
  for (auto &x : xs) {
    x = {ua(rng), uy(rng)};
  }
  return xs;
}

/// One draw of f ~ GP(0, C) at `xs` plus N(0, noise) observation error.
inline Eigen::VectorXd draw_gp(KernelFamily family, const KernelHyperparams &hp,
                               const std::vector<AgeYear> &xs, double noise,
                               std::uint64_t seed) {
  Eigen::MatrixXd c = cov_matrix(family, hp, xs);
  c.diagonal().array() += 1e-8 * hp.eta_sq;
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(c).matrixL();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(static_cast<Eigen::Index>(xs.size()));
  Eigen::VectorXd e(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z(i) = normal(rng);
  }
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    e(i) = normal(rng);
  }
  return l * z + std::sqrt(noise) * e;
}

inline TrainingSet make_training(const std::vector<AgeYear> &xs,
                                 const Eigen::VectorXd &y, double noise) {
  TrainingSet t;
  t.inputs = xs;
  t.response = y;
  t.noise_variance = Eigen::VectorXd::Constant(y.size(), noise);
  return t;
}

/// Gompertz-like log-rate surface with a mild age-year interaction.
inline double smooth_log_rate(double age, double year) {
  return -9.9 + 0.085 * age - 0.014 * (year - 2000.0) +
         0.05 * std::sin(age / 6.0) * std::cos((year - 1999.0) / 5.0);
}

/// Table with deaths = round(L exp(log rate)); noisy when `seed` != 0.
inline MortalityTable synthetic_table(int age0, int age1, int year0, int year1,
                                      double exposure = 1e6,
                                      std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::vector<MortalityCell> cells;
  for (int y = year0; y <= year1; ++y) {
    for (int a = age0; a <= age1; ++a) {
      const double mean = exposure * std::exp(smooth_log_rate(a, y));
      double d = std::round(mean);
      if (seed != 0) {
        d = static_cast<double>(std::poisson_distribution<long>(mean)(rng));
      }
      cells.push_back(MortalityCell::make(a, y, d, exposure));
    }
  }
  return MortalityTable(std::move(cells), "synthetic", "generated");
}

inline double max_abs(const Eigen::MatrixXd &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace mortgp::testing
