#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ardl/util/csv.hpp"
#include "ardl/util/errors.hpp"

namespace ardl::frame {

/// Map from raw source indicator codes to short variable keys.
/// The builtin table is version 1 of the shipped resource; a map loaded from
/// file replaces it wholesale (the file restates every pair it needs).
class CodeMap {
 public:
  static CodeMap builtin_v1() {
    CodeMap m;
    m.version_ = 1;
    const std::pair<const char*, const char*> pairs[] = {
        {"LP.LPI.OVRL.XQ", "LPI1"},      {"LP.LPI.CUST.XQ", "LPI2"},
        {"LP.LPI.INFR.XQ", "LPI3"},      {"LP.LPI.LOGS.XQ", "LPI4"},
        {"LP.LPI.TRAC.XQ", "LPI5"},      {"LP.LPI.TIME.XQ", "LPI6"},
        {"IS.SHP.GOOD.TU", "CPT"},       {"IS.AIR.GOOD.MT.K1", "ATF"},
        {"BM.GSR.TRAN.ZS", "TRP"},       {"NE.TRD.GNFS.ZS", "TRD"},
        {"TM.TAX.MRCH.WM.AR.ZS", "TRF"}, {"NY.GDP.PCAP.CD", "ECG"},
        {"EN.ATM.CO2E.KT", "ENS"},
    };
    for (const auto& [code, key] : pairs) {
      m.code_to_key_[code] = key;
      m.keys_.insert(key);
    }
    return m;
  }

  /// Text resource format: optional `version N` first record, then one
  /// `RAW.CODE KEY` pair per line; `#` starts a comment.
  static CodeMap load(const std::string& path) {
    CodeMap m;
    const auto lines = csv::read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::string line = lines[i];
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = csv::trim(line);
      if (line.empty()) continue;
      const auto ws = line.find_first_of(" \t");
      if (ws == std::string::npos)
        throw DataError(path + ":" + std::to_string(i + 1) +
                        ": expected 'CODE KEY' pair");
      const std::string code = csv::trim(line.substr(0, ws));
      const std::string key = csv::trim(line.substr(ws));
      if (code == "version") {
        const auto v = csv::parse_int(key);
        if (!v || *v < 1)
          throw DataError(path + ":" + std::to_string(i + 1) +
                          ": bad version record");
        m.version_ = static_cast<int>(*v);
        continue;
      }
      if (key.empty())
        throw DataError(path + ":" + std::to_string(i + 1) + ": empty key");
      m.code_to_key_[code] = key;
      m.keys_.insert(key);
    }
    if (m.code_to_key_.empty())
      throw DataError(path + ": code map holds no pairs");
    return m;
  }

  /// Resolve an indicator field to its variable key. Known keys resolve to
  /// themselves; raw codes resolve through the map; anything else is
  /// unresolvable (nullopt).
  [[nodiscard]] std::optional<std::string> resolve(const std::string& s) const {
    if (keys_.count(s)) return s;
    const auto it = code_to_key_.find(s);
    if (it != code_to_key_.end()) return it->second;
    return std::nullopt;
  }

  [[nodiscard]] int version() const { return version_; }
  [[nodiscard]] std::size_t size() const { return code_to_key_.size(); }

 private:
  std::map<std::string, std::string> code_to_key_;
  std::set<std::string> keys_;
  int version_ = 0;
};

struct Observation {
  std::string country;
  std::string indicator;
  int year = 0;
  double value = 0.0;
  bool missing = true;
};

struct IngestOptions {
  CodeMap code_map = CodeMap::builtin_v1();
  bool allow_unknown_codes = false;  // pass raw codes through as keys
  int min_year = 1800;               // sanity window for the year field
  int max_year = 2200;
};

/// Country x indicator x year panel. The year axis is contiguous; cells
/// absent from the source are missing. Cell payloads are immutable after
/// construction except through imputation, which returns a new table.
class PanelTable {
 public:
  PanelTable() = default;

  /// Build from observations. Duplicate (country, indicator, year) entries
  /// raise DataError naming the later observation's source row when row
  /// numbers are supplied (parallel vector, 1-based; empty = unknown).
  static PanelTable from_observations(const std::vector<Observation>& obs,
                                      const std::vector<std::size_t>& rows = {},
                                      const std::string& source = "input") {
    PanelTable p;
    if (obs.empty()) throw DataError(source + ": no observations");
    std::set<std::string> entity_set, indicator_set;
    int y_min = obs.front().year, y_max = obs.front().year;
    for (const auto& o : obs) {
      entity_set.insert(o.country);
      indicator_set.insert(o.indicator);
      y_min = std::min(y_min, o.year);
      y_max = std::max(y_max, o.year);
    }
    p.entities_.assign(entity_set.begin(), entity_set.end());
    p.indicators_.assign(indicator_set.begin(), indicator_set.end());
    p.years_.resize(static_cast<std::size_t>(y_max - y_min + 1));
    for (std::size_t i = 0; i < p.years_.size(); ++i)
      p.years_[i] = y_min + static_cast<int>(i);
    p.values_.assign(p.cell_count(), 0.0);
    p.mask_.assign(p.cell_count(), 0);
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const auto& o = obs[i];
      const std::size_t idx = p.index_of(o.country, o.indicator, o.year);
      if (p.mask_[idx] != 0) {
        std::string where = source;
        if (i < rows.size()) where += ":" + std::to_string(rows[i]);
        throw DataError(where + ": duplicate observation (" + o.country + ", " +
                        o.indicator + ", " + std::to_string(o.year) + ")");
      }
      p.mask_[idx] = o.missing ? 2 : 1;  // 2 = explicit missing row
      if (!o.missing) p.values_[idx] = o.value;
    }
    for (auto& m : p.mask_) {
      if (m == 2) m = 0;  // explicit and absent cells are equally missing
    }
    return p;
  }

  [[nodiscard]] const std::vector<std::string>& entities() const {
    return entities_;
  }
  [[nodiscard]] const std::vector<std::string>& indicators() const {
    return indicators_;
  }
  [[nodiscard]] const std::vector<int>& years() const { return years_; }

  [[nodiscard]] std::size_t entity_index(const std::string& e) const {
    const auto it = std::lower_bound(entities_.begin(), entities_.end(), e);
    if (it == entities_.end() || *it != e)
      throw DataError("unknown entity '" + e + "'");
    return static_cast<std::size_t>(it - entities_.begin());
  }
  [[nodiscard]] std::size_t indicator_index(const std::string& k) const {
    const auto it = std::lower_bound(indicators_.begin(), indicators_.end(), k);
    if (it == indicators_.end() || *it != k)
      throw DataError("unknown indicator '" + k + "'");
    return static_cast<std::size_t>(it - indicators_.begin());
  }
  [[nodiscard]] bool has_indicator(const std::string& k) const {
    return std::binary_search(indicators_.begin(), indicators_.end(), k);
  }
  [[nodiscard]] std::size_t year_index(int year) const {
    if (years_.empty() || year < years_.front() || year > years_.back())
      throw DataError("year " + std::to_string(year) + " outside panel span");
    return static_cast<std::size_t>(year - years_.front());
  }

  [[nodiscard]] bool is_missing(std::size_t e, std::size_t k,
                                std::size_t t) const {
    return mask_[flat(e, k, t)] == 0;
  }
  [[nodiscard]] double value(std::size_t e, std::size_t k,
                             std::size_t t) const {
    return values_[flat(e, k, t)];
  }
  void set_value(std::size_t e, std::size_t k, std::size_t t, double v) {
    values_[flat(e, k, t)] = v;
    mask_[flat(e, k, t)] = 1;
  }

  [[nodiscard]] std::size_t missing_count() const {
    std::size_t c = 0;
    for (const auto m : mask_)
      if (m == 0) ++c;
    return c;
  }
  [[nodiscard]] std::size_t cell_count() const {
    return entities_.size() * indicators_.size() * years_.size();
  }

 private:
  [[nodiscard]] std::size_t flat(std::size_t e, std::size_t k,
                                 std::size_t t) const {
    return (e * indicators_.size() + k) * years_.size() + t;
  }
  [[nodiscard]] std::size_t index_of(const std::string& e,
                                     const std::string& k, int year) const {
    return flat(entity_index(e), indicator_index(k), year_index(year));
  }

  std::vector<std::string> entities_;    // sorted
  std::vector<std::string> indicators_;  // sorted
  std::vector<int> years_;               // contiguous ascending
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;  // 1 = observed
};

namespace detail {

inline std::string row_loc(const std::string& path, std::size_t line_1based) {
  return path + ":" + std::to_string(line_1based);
}

/// Resolve one indicator field under the ingest policy.
inline std::string resolve_indicator(const std::string& raw,
                                     const IngestOptions& opt,
                                     const std::string& where) {
  if (const auto key = opt.code_map.resolve(raw)) return *key;
  if (opt.allow_unknown_codes) return raw;
  throw DataError(where + ": unresolvable indicator code '" + raw + "'");
}

/// Shortest round-trip decimal representation of a finite double.
inline std::string format_roundtrip(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline const std::string kLongHeader = "country,indicator,year,value";

/// Load the canonical long format. Header must be exactly
/// `country,indicator,year,value`; empty value fields are missing cells.
inline PanelTable load_long_csv(const std::string& path,
                                const IngestOptions& opt = {}) {
  const auto lines = csv::read_lines(path);
  if (lines.empty() || csv::trim(lines[0]) != kLongHeader)
    throw DataError(path + ": expected header '" + kLongHeader + "'");
  std::vector<Observation> obs;
  std::vector<std::size_t> rows;
  obs.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto where = detail::row_loc(path, i + 1);
    const auto fields = csv::split_line(lines[i]);
    if (fields.size() != 4)
      throw DataError(where + ": expected 4 fields, found " +
                      std::to_string(fields.size()));
    Observation o;
    o.country = csv::trim(fields[0]);
    if (o.country.empty()) throw DataError(where + ": empty country field");
    o.indicator = detail::resolve_indicator(csv::trim(fields[1]), opt, where);
    const auto year = csv::parse_int(csv::trim(fields[2]));
    if (!year) throw DataError(where + ": non-numeric year '" + fields[2] + "'");
    if (*year < opt.min_year || *year > opt.max_year)
      throw DataError(where + ": year " + std::to_string(*year) +
                      " outside accepted range");
    o.year = static_cast<int>(*year);
    const std::string value_field = csv::trim(fields[3]);
    if (value_field.empty()) {
      o.missing = true;
    } else {
      const auto v = csv::parse_double(value_field);
      if (!v || !std::isfinite(*v))
        throw DataError(where + ": non-numeric value '" + fields[3] + "'");
      o.value = *v;
      o.missing = false;
    }
    obs.push_back(std::move(o));
    rows.push_back(i + 1);
  }
  return PanelTable::from_observations(obs, rows, path);
}

/// Convert a World Bank style wide export: a country column, an indicator
/// code column, and one column per year. Year labels may carry the export
/// suffix `2007 [YR2007]`. Values `..` or empty are missing.
inline PanelTable convert_wb_wide(const std::string& path,
                                  const IngestOptions& opt = {}) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw DataError(path + ": empty file");
  const auto header = csv::split_line(lines[0]);
  auto lowered = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  int country_col = -1, code_col = -1;
  std::vector<std::pair<int, int>> year_cols;  // (column, year)
  for (std::size_t j = 0; j < header.size(); ++j) {
    const std::string name = csv::trim(header[j]);
    const std::string low = lowered(name);
    if (low == "country code" || (country_col < 0 && low.find("country") != std::string::npos &&
                                  low.find("name") == std::string::npos)) {
      country_col = static_cast<int>(j);
      continue;
    }
    if (low == "indicator code" ||
        (code_col < 0 && low.find("indicator") != std::string::npos &&
         low.find("name") == std::string::npos)) {
      code_col = static_cast<int>(j);
      continue;
    }
    // Year columns: `YYYY` or `YYYY [YRYYYY]`.
    std::string label = name;
    const auto bracket = label.find(" [");
    if (bracket != std::string::npos) label = label.substr(0, bracket);
    if (const auto y = csv::parse_int(label)) {
      if (*y >= opt.min_year && *y <= opt.max_year)
        year_cols.emplace_back(static_cast<int>(j), static_cast<int>(*y));
    }
  }
  if (country_col < 0 || code_col < 0 || year_cols.empty())
    throw DataError(path +
                    ": not a recognizable wide export (need country column, "
                    "indicator code column, and year columns)");
  std::vector<Observation> obs;
  std::vector<std::size_t> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto where = detail::row_loc(path, i + 1);
    const auto fields = csv::split_line(lines[i]);
    if (fields.size() != header.size())
      throw DataError(where + ": expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(fields.size()));
    const std::string country = csv::trim(fields[static_cast<std::size_t>(country_col)]);
    if (country.empty()) throw DataError(where + ": empty country field");
    const std::string key = detail::resolve_indicator(
        csv::trim(fields[static_cast<std::size_t>(code_col)]), opt, where);
    for (const auto& [col, year] : year_cols) {
      Observation o;
      o.country = country;
      o.indicator = key;
      o.year = year;
      const std::string cell = csv::trim(fields[static_cast<std::size_t>(col)]);
      if (cell.empty() || cell == "..") {
        o.missing = true;
      } else {
        const auto v = csv::parse_double(cell);
        if (!v || !std::isfinite(*v))
          throw DataError(where + ": non-numeric value '" + cell + "' in year " +
                          std::to_string(year));
        o.value = *v;
        o.missing = false;
      }
      obs.push_back(std::move(o));
      rows.push_back(i + 1);
    }
  }
  return PanelTable::from_observations(obs, rows, path);
}

/// Load either supported layout, dispatching on the header line.
inline PanelTable load_panel_csv(const std::string& path,
                                 const IngestOptions& opt = {}) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) throw DataError(path + ": empty file");
  if (csv::trim(lines[0]) == kLongHeader) return load_long_csv(path, opt);
  return convert_wb_wide(path, opt);
}

/// Write the canonical long format. Rows are ordered by entity, indicator,
/// year; missing cells have an empty value field; observed values use the
/// shortest representation that round-trips exactly.
inline void write_long_csv(const PanelTable& panel, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << kLongHeader << "\n";
  for (std::size_t e = 0; e < panel.entities().size(); ++e) {
    for (std::size_t k = 0; k < panel.indicators().size(); ++k) {
      for (std::size_t t = 0; t < panel.years().size(); ++t) {
        out << panel.entities()[e] << ',' << panel.indicators()[k] << ','
            << panel.years()[t] << ',';
        if (!panel.is_missing(e, k, t))
          out << detail::format_roundtrip(panel.value(e, k, t));
        out << "\n";
      }
    }
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace ardl::frame
