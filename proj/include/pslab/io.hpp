#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pslab/conformal.hpp"
#include "pslab/growth.hpp"

namespace pslab::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double x);
double parse_double(const std::string& text);

class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  void add_row(std::vector<std::string> row);
  // Column index by name; throws io error when missing.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  const std::string& cell(std::size_t row, const std::string& name) const;

  std::string str() const;
  // Quoted fields with embedded commas or quotes are supported.
  static CsvTable parse(const std::string& text);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);

// 64-bit FNV-1a of the compact dump, hex encoded.
std::string config_hash(const json& config);
json run_manifest(const std::string& command, const json& config, std::uint64_t seed);

json cartan_json(const CartanVector& v);
json form_json(const LinearForm& psi);
LinearForm form_from_json(const json& j, int d);

// {schema_version, theta, psi, s, atoms: [{frame, weight, word}]}; words need the ball
// the measure was built on (empty when omitted).
json measure_json(const AtomicMeasure& nu, const OrbitBall* ball = nullptr);
AtomicMeasure measure_from_json(const json& j);

json shadow_report_json(const std::string& gamma_word, double radius, const ShadowResult& res);

// One row per (direction, aperture): direction components, aperture, tau, ci_low, ci_high, psi_hat.
CsvTable indicator_csv(const IndicatorGrid& grid);

}  // namespace pslab::io
