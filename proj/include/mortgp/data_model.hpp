#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mortgp {

/// A point of the (age, year) input space. Ages and years in tables are
/// integers; GP inputs are their real-valued images.
struct AgeYear {
  double age = 0.0;
  double year = 0.0;

  friend bool operator==(const AgeYear &, const AgeYear &) = default;
};

struct MortalityCell {
  int age = 0;
  int year = 0;
  double deaths = 0.0;
  /// Mid-year population L.
  double exposure = 0.0;
  /// log(deaths / exposure); NaN when deaths == 0.
  double log_rate = 0.0;

  bool zero_deaths() const { return deaths == 0.0; }
  /// Exposed-to-risk E ~= L + D/2.
  double exposure_risk() const { return exposure + 0.5 * deaths; }
  /// Central death rate D/L.
  double rate() const { return deaths / exposure; }
  AgeYear input() const {
    return {static_cast<double>(age), static_cast<double>(year)};
  }

  /// Builds a cell and fills in `log_rate`; throws ValidationError when
  /// exposure <= 0, deaths < 0 or deaths >= exposure.
  static MortalityCell make(int age, int year, double deaths, double exposure);

  /// Compares the stored fields; log_rate is derived from them.
  friend bool operator==(const MortalityCell &a, const MortalityCell &b) {
    return a.age == b.age && a.year == b.year && a.deaths == b.deaths &&
           a.exposure == b.exposure;
  }
};

/// Validated collection of cells, sorted by (year, age) with no duplicates.
class MortalityTable {
public:
  MortalityTable() = default;

  /// Sorts and validates. Throws ValidationError on a duplicate (age, year).
  explicit MortalityTable(std::vector<MortalityCell> cells,
                          std::string gender_label = {},
                          std::string source_label = {});

  const std::vector<MortalityCell> &cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  const std::string &gender_label() const { return gender_label_; }
  const std::string &source_label() const { return source_label_; }

  const MortalityCell *find(int age, int year) const;

  /// Cells usable as GP training data (deaths > 0).
  std::vector<MortalityCell> training_cells() const;
  std::size_t zero_death_count() const;

  std::vector<AgeYear> inputs() const;

  std::vector<int> distinct_ages() const;
  std::vector<int> distinct_years() const;

  friend bool operator==(const MortalityTable &a, const MortalityTable &b) {
    return a.cells_ == b.cells_;
  }

private:
  std::vector<MortalityCell> cells_;
  std::string gender_label_;
  std::string source_label_;
};

/// Parses CSV with header naming `age,year,deaths,exposure` (any order, case
/// insensitive). A `log_rate` column is accepted and ignored.
MortalityTable load_table(std::istream &in, std::string gender_label = {},
                          std::string source_label = {});
MortalityTable load_table_file(const std::string &path);

/// Writes `age,year,deaths,exposure,log_rate`; deaths and exposure round-trip
/// exactly, log_rate is printed with 6 decimals (empty for zero-death cells).
void save_table(std::ostream &out, const MortalityTable &table);

/// One rectangular block of a subset: years [year_min, year_max] crossed with
/// ages [age_min, age_max].
struct SubsetBlock {
  int year_min = 0;
  int year_max = 0;
  int age_min = 0;
  int age_max = 0;

  bool contains(int age, int year) const {
    return year >= year_min && year <= year_max && age >= age_min &&
           age <= age_max;
  }
  friend bool operator==(const SubsetBlock &, const SubsetBlock &) = default;
};

/// Union of blocks; expresses non-rectangular ("notched") regions.
struct SubsetSpec {
  std::vector<SubsetBlock> blocks;

  void validate() const;
  bool contains(int age, int year) const;

  /// Parses `y0-y1:a0-a1[;y0-y1:a0-a1...]`, or a named protocol region
  /// (see `protocol_region`).
  static SubsetSpec parse(const std::string &text);
};

enum class SubsetRole { Train, Test };

/// Train/test regions of the standard study protocols: `all`, `subset1`,
/// `subset2`, `subset3`. `all` has no test region.
std::optional<SubsetSpec> protocol_region(const std::string &name,
                                          SubsetRole role);

/// Cells of `table` inside the union of the spec's blocks. Throws
/// ValidationError when the result is empty.
MortalityTable subset(const MortalityTable &table, const SubsetSpec &spec);

/// Affine standardization of age and year.
struct Standardizer {
  double mean_ag = 0.0;
  double sd_ag = 1.0;
  double mean_yr = 0.0;
  double sd_yr = 1.0;

  AgeYear standardize(const AgeYear &x) const {
    return {(x.age - mean_ag) / sd_ag, (x.year - mean_yr) / sd_yr};
  }
  AgeYear unstandardize(const AgeYear &z) const {
    return {z.age * sd_ag + mean_ag, z.year * sd_yr + mean_yr};
  }

  static Standardizer identity() { return {}; }
};

/// Column means and sample (n-1) standard deviations of the cell inputs.
/// Throws ValidationError when a column is constant.
Standardizer make_standardizer(const MortalityTable &table);
Standardizer make_standardizer(std::span<const AgeYear> inputs);

} // namespace mortgp
