#pragma once

#include <iosfwd>
#include <string>

#include "mortgp/glm_baseline.hpp"
#include "mortgp/gp_core.hpp"
#include "mortgp/hyperfit.hpp"
#include "mortgp/improvement.hpp"
#include "mortgp/updating.hpp"

namespace mortgp {

inline constexpr const char *kLibraryVersion = "0.1.0";
inline constexpr int kModelSchemaVersion = 1;

/// Model file: training inputs, responses, noise variances, kernel, noise
/// model, basis and the raw-scale beta. Doubles round-trip exactly.
std::string model_to_json(const FittedGP &gp);
/// Rebuilds the model by refactorizing. Throws ParseError on malformed input
/// or an unknown schema version, ValidationError when the stored beta does
/// not match the refit.
FittedGP model_from_json(const std::string &text);
void save_model(const std::string &path, const FittedGP &gp);
FittedGP load_model(const std::string &path);

std::string fit_result_to_json(const FitResult &fit);
std::string glm_to_json(const GlmFit &fit);

/// `age,year,mean_log,sd_log,lo,hi,level` with the band at `level`.
void write_posterior_csv(std::ostream &out, const PosteriorSummary &post,
                         double level);
/// `age,year,kind,mean,sd,lo,hi`; sd and band are blank for observed curves.
void write_curve_csv(std::ostream &out, const ImprovementCurve &curve,
                     bool header = true);
/// `age,year,mean_before,sd_before,mean_after,sd_after,sd_delta`.
void write_update_csv(std::ostream &out, const UpdateReport &report);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

} // namespace mortgp
