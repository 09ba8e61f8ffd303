#include "mortgp/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "mortgp/errors.hpp"

namespace mortgp {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> fields;
  std::string_view rest(line);
  while (true) {
    const auto comma = rest.find(',');
    fields.push_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) {
      break;
    }
    rest.remove_prefix(comma + 1);
  }
  return fields;
}

template <typename T>
T parse_number(const std::string &field, const char *column, std::size_t row) {
  T value{};
  const char *begin = field.data();
  const char *end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(fmt::format("cannot parse {} value '{}'", column, field),
                     row);
  }
  return value;
}

std::pair<int, int> parse_range(const std::string &text) {
  // "lo-hi" or a single integer.
  const auto dash = text.find('-', 1);
  try {
    if (dash == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, dash)), std::stoi(text.substr(dash + 1))};
  } catch (const std::exception &) {
    throw ParseError("bad range '" + text + "'", 0);
  }
}

} // namespace

MortalityCell MortalityCell::make(int age, int year, double deaths,
                                  double exposure) {
  if (!std::isfinite(exposure) || exposure <= 0.0) {
    throw ValidationError(fmt::format(
        "cell ({}, {}): exposure must be positive, got {}", age, year, exposure));
  }
  if (!std::isfinite(deaths) || deaths < 0.0) {
    throw ValidationError(fmt::format(
        "cell ({}, {}): deaths must be non-negative, got {}", age, year, deaths));
  }
  if (deaths >= exposure) {
    throw ValidationError(fmt::format(
        "cell ({}, {}): deaths {} not below exposure {}", age, year, deaths,
        exposure));
  }
  MortalityCell cell{age, year, deaths, exposure, 0.0};
  cell.log_rate = deaths > 0.0 ? std::log(deaths / exposure)
                               : std::numeric_limits<double>::quiet_NaN();
  return cell;
}

MortalityTable::MortalityTable(std::vector<MortalityCell> cells,
                               std::string gender_label,
                               std::string source_label)
    : cells_(std::move(cells)), gender_label_(std::move(gender_label)),
      source_label_(std::move(source_label)) {
  std::sort(cells_.begin(), cells_.end(), [](const auto &a, const auto &b) {
    return std::tie(a.year, a.age) < std::tie(b.year, b.age);
  });
  for (std::size_t i = 1; i < cells_.size(); ++i) {
    if (cells_[i].year == cells_[i - 1].year &&
        cells_[i].age == cells_[i - 1].age) {
      throw ValidationError(fmt::format("duplicate cell (age {}, year {})",
                                        cells_[i].age, cells_[i].year));
    }
  }
}

const MortalityCell *MortalityTable::find(int age, int year) const {
  const auto it = std::lower_bound(
      cells_.begin(), cells_.end(), std::pair{year, age},
      [](const MortalityCell &c, const std::pair<int, int> &key) {
        return std::pair{c.year, c.age} < key;
      });
  if (it == cells_.end() || it->year != year || it->age != age) {
    return nullptr;
  }
  return &*it;
}

std::vector<MortalityCell> MortalityTable::training_cells() const {
  std::vector<MortalityCell> out;
  out.reserve(cells_.size());
  std::copy_if(cells_.begin(), cells_.end(), std::back_inserter(out),
               [](const MortalityCell &c) { return !c.zero_deaths(); });
  return out;
}

std::size_t MortalityTable::zero_death_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(),
                    [](const MortalityCell &c) { return c.zero_deaths(); }));
}

std::vector<AgeYear> MortalityTable::inputs() const {
  std::vector<AgeYear> out;
  out.reserve(cells_.size());
  for (const auto &c : cells_) {
    out.push_back(c.input());
  }
  return out;
}

std::vector<int> MortalityTable::distinct_ages() const {
  std::vector<int> ages;
  for (const auto &c : cells_) {
    ages.push_back(c.age);
  }
  std::sort(ages.begin(), ages.end());
  ages.erase(std::unique(ages.begin(), ages.end()), ages.end());
  return ages;
}

std::vector<int> MortalityTable::distinct_years() const {
  std::vector<int> years;
  for (const auto &c : cells_) {
    years.push_back(c.year);
  }
  years.erase(std::unique(years.begin(), years.end()), years.end());
  return years;
}

MortalityTable load_table(std::istream &in, std::string gender_label,
                          std::string source_label) {
  std::string line;
  std::size_t row = 0;
  // Skip leading blank lines.
  while (std::getline(in, line)) {
    ++row;
    if (!trim(line).empty()) {
      break;
    }
  }
  if (trim(line).empty()) {
    throw ParseError("missing header row", 0);
  }

  const auto header = split_csv(line);
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    column[lower(header[i])] = i;
  }
  for (const char *required : {"age", "year", "deaths", "exposure"}) {
    if (!column.contains(required)) {
      throw ParseError(fmt::format("header lacks column '{}'", required), row);
    }
  }
  const std::size_t i_age = column["age"];
  const std::size_t i_year = column["year"];
  const std::size_t i_deaths = column["deaths"];
  const std::size_t i_exposure = column["exposure"];

  std::vector<MortalityCell> cells;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw ParseError(fmt::format("expected {} fields, found {}",
                                   header.size(), fields.size()),
                       row);
    }
    const int age = parse_number<int>(fields[i_age], "age", row);
    const int year = parse_number<int>(fields[i_year], "year", row);
    const double deaths = parse_number<double>(fields[i_deaths], "deaths", row);
    const double exposure =
        parse_number<double>(fields[i_exposure], "exposure", row);
    try {
      cells.push_back(MortalityCell::make(age, year, deaths, exposure));
    } catch (const ValidationError &e) {
      throw ValidationError(fmt::format("row {}: {}", row, e.what()));
    }
  }
  return MortalityTable(std::move(cells), std::move(gender_label),
                        std::move(source_label));
}

MortalityTable load_table_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open '" + path + "'");
  }
  return load_table(in, {}, path);
}

void save_table(std::ostream &out, const MortalityTable &table) {
  out << "age,year,deaths,exposure,log_rate\n";
  for (const auto &c : table.cells()) {
    if (c.zero_deaths()) {
      fmt::print(out, "{},{},{},{},\n", c.age, c.year, c.deaths, c.exposure);
    } else {
      fmt::print(out, "{},{},{},{},{:.6f}\n", c.age, c.year, c.deaths,
                 c.exposure, c.log_rate);
    }
  }
}

void SubsetSpec::validate() const {
  if (blocks.empty()) {
    throw ValidationError("subset spec has no blocks");
  }
  for (const auto &b : blocks) {
    if (b.year_min > b.year_max || b.age_min > b.age_max) {
      throw ValidationError(fmt::format("subset block {}-{}:{}-{} is empty",
                                        b.year_min, b.year_max, b.age_min,
                                        b.age_max));
    }
  }
}

bool SubsetSpec::contains(int age, int year) const {
  return std::any_of(blocks.begin(), blocks.end(),
                     [&](const SubsetBlock &b) { return b.contains(age, year); });
}

SubsetSpec SubsetSpec::parse(const std::string &text) {
  if (auto named = protocol_region(text, SubsetRole::Train)) {
    return *named;
  }
  SubsetSpec spec;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) {
      continue;
    }
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ParseError("subset block '" + item + "' lacks ':'", 0);
    }
    const auto [y0, y1] = parse_range(trim(item.substr(0, colon)));
    const auto [a0, a1] = parse_range(trim(item.substr(colon + 1)));
    spec.blocks.push_back({y0, y1, a0, a1});
  }
  spec.validate();
  return spec;
}

std::optional<SubsetSpec> protocol_region(const std::string &name,
                                          SubsetRole role) {
  const std::string key = lower(name);
  const bool train = role == SubsetRole::Train;
  if (key == "all") {
    if (!train) {
      return std::nullopt;
    }
    return SubsetSpec{{{1999, 2014, 50, 84}}};
  }
  if (key == "subset1") {
    return train ? SubsetSpec{{{1999, 2010, 50, 84}}}
                 : SubsetSpec{{{2011, 2014, 50, 84}}};
  }
  if (key == "subset2") {
    return train ? SubsetSpec{{{1999, 2010, 50, 84}, {2011, 2014, 50, 70}}}
                 : SubsetSpec{{{2011, 2014, 71, 84}}};
  }
  if (key == "subset3") {
    return train ? SubsetSpec{{{1999, 2010, 50, 70}}}
                 : SubsetSpec{{{2011, 2014, 71, 84}}};
  }
  return std::nullopt;
}

MortalityTable subset(const MortalityTable &table, const SubsetSpec &spec) {
  spec.validate();
  std::vector<MortalityCell> kept;
  for (const auto &c : table.cells()) {
    if (spec.contains(c.age, c.year)) {
      kept.push_back(c);
    }
  }
  if (kept.empty()) {
    throw ValidationError("subset selects no cells");
  }
  return MortalityTable(std::move(kept), table.gender_label(),
                        table.source_label());
}

Standardizer make_standardizer(std::span<const AgeYear> inputs) {
  const auto n = static_cast<double>(inputs.size());
  if (inputs.size() < 2) {
    throw ValidationError("standardizer needs at least two inputs");
  }
  double sum_ag = 0.0, sum_yr = 0.0;
  for (const auto &x : inputs) {
    sum_ag += x.age;
    sum_yr += x.year;
  }
  Standardizer s;
  s.mean_ag = sum_ag / n;
  s.mean_yr = sum_yr / n;
  double ss_ag = 0.0, ss_yr = 0.0;
  for (const auto &x : inputs) {
    ss_ag += (x.age - s.mean_ag) * (x.age - s.mean_ag);
    ss_yr += (x.year - s.mean_yr) * (x.year - s.mean_yr);
  }
  s.sd_ag = std::sqrt(ss_ag / (n - 1.0));
  s.sd_yr = std::sqrt(ss_yr / (n - 1.0));
  if (!(s.sd_ag > 0.0)) {
    throw ValidationError("age column is constant; cannot standardize");
  }
  if (!(s.sd_yr > 0.0)) {
    throw ValidationError("year column is constant; cannot standardize");
  }
  return s;
}

Standardizer make_standardizer(const MortalityTable &table) {
  const auto inputs = table.inputs();
  return make_standardizer(std::span<const AgeYear>(inputs));
}

} // namespace mortgp
