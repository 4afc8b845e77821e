#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddrom/irka.hpp"

namespace ddrom::io
{

using Json = nlohmann::json;

/// {"E": [[...]], "A": [[...]], "b": [...], "c": [...]}, matrices row-major. "E" may
/// be omitted on input (identity).
Json system_to_json(const DiscreteLTI &sys);
DiscreteLTI system_from_json(const Json &j);

/// System schema plus "points" ([re, im] pairs) and "is_real". Complex entries of a
/// non-real ROM are written as [re, im] pairs.
Json rom_to_json(const HermiteLoewnerROM &rom);
HermiteLoewnerROM rom_from_json(const Json &j);

Json report_to_json(const IrkaReport &report);

/// 64-bit FNV-1a of the compact JSON dump, as 16 hex digits.
std::string config_hash(const Json &config);

/// Shortest round-trip formatting ("%.17g"), independent of the global locale.
std::string format_double(double v);

/// CSV with a "# config-hash: <hash>" line followed by the header row.
class CsvTable
{
public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double> &values);
  void add_row(std::vector<std::string> cells);

  const std::vector<std::string> &header() const { return header_; }
  const std::vector<std::vector<std::string>> &rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  // Numeric value of a cell; throws on a non-numeric cell.
  double value(std::size_t row, const std::string &column) const;
  std::vector<double> column(const std::string &name) const;

  std::string render(const std::string &hash) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Parses text written by CsvTable::render; '#' lines are skipped.
CsvTable parse_csv(const std::string &text);

CsvTable samples_table(const std::vector<FrequencySample> &samples);
CsvTable report_summary_table(const IrkaReport &report);

/// Two-column trajectory CSV "k,<name>".
CsvTable trajectory_table(const std::string &name, const Vector &values);
Vector trajectory_from_csv(const std::string &text, const std::string &name);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &content);

}  // namespace ddrom::io
