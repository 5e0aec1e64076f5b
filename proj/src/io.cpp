#include "pslab/io.hpp"

#include <boost/version.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pslab::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& text) {
  if (text == "nan") return NAN;
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw Error(ErrorKind::io, "not a number: '" + text + "'");
  return v;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw Error(ErrorKind::io, "csv row width differs from the header");
  rows_.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header_.size(); ++c)
    if (header_[c] == name) return c;
  throw Error(ErrorKind::io, "csv column not found: " + name);
}

double CsvTable::number(std::size_t row, const std::string& name) const { return parse_double(cell(row, name)); }

const std::string& CsvTable::cell(std::size_t row, const std::string& name) const {
  return rows_.at(row).at(column(name));
}

namespace {

std::string quote(const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_record(const std::string& text, std::size_t& pos) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  while (pos < text.size()) {
    char c = text[pos++];
    if (quoted) {
      if (c == '"') {
        if (pos < text.size() && text[pos] == '"') {
          cur += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw Error(ErrorKind::io, "unterminated quoted csv field");
  fields.push_back(cur);
  return fields;
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out += ',';
      out += quote(r[c]);
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

CsvTable CsvTable::parse(const std::string& text) {
  std::size_t pos = 0;
  if (text.empty()) throw Error(ErrorKind::io, "empty csv");
  CsvTable t(split_record(text, pos));
  while (pos < text.size()) {
    auto r = split_record(text, pos);
    if (r.size() == 1 && r[0].empty()) continue;
    t.add_row(std::move(r));
  }
  return t;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json run_manifest(const std::string& command, const json& config, std::uint64_t seed) {
  json m;
  m["schema_version"] = kSchemaVersion;
  m["command"] = command;
  m["seed"] = seed;
  m["config"] = config;
  m["config_hash"] = config_hash(config);
  m["versions"] = {{"pslab", PSLAB_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) +
                                 "." + std::to_string(BOOST_VERSION % 100)}};
  return m;
}

json cartan_json(const CartanVector& v) {
  json a = json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
  return a;
}

json form_json(const LinearForm& psi) {
  json c = json::array();
  for (int i = 0; i < psi.coefficients().size(); ++i) c.push_back(psi.coefficients()[i]);
  return {{"theta", psi.theta().indices()}, {"coefficients", c}};
}

LinearForm form_from_json(const json& j, int d) {
  try {
    ThetaSet th(d, j.at("theta").get<std::vector<int>>());
    auto c = j.at("coefficients").get<std::vector<double>>();
    return LinearForm(th, Eigen::Map<const Vec>(c.data(), static_cast<Eigen::Index>(c.size())));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io, std::string("bad form record: ") + e.what());
  }
}

json measure_json(const AtomicMeasure& nu, const OrbitBall* ball) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["d"] = nu.d();
  j["theta"] = nu.theta().indices();
  j["psi"] = form_json(nu.psi());
  j["s"] = nu.s();
  j["ball_length"] = nu.ball_length();
  j["placement"] = nu.placement() == AtomPlacement::attractor ? "attractor" : "base_orbit";
  json atoms = json::array();
  const int d = nu.d();
  for (std::size_t k = 0; k < nu.size(); ++k) {
    json frame = json::array();
    for (int r = 0; r < d; ++r) {
      json row = json::array();
      for (int c = 0; c < d; ++c) row.push_back(nu.frame(k)(r, c));
      frame.push_back(row);
    }
    std::string word = ball && nu.ball_length() > 0 ? ball->word_string(nu.element(k)) : "";
    atoms.push_back({{"frame", frame}, {"weight", nu.weight(k)}, {"word", word}});
  }
  j["atoms"] = atoms;
  return j;
}

AtomicMeasure measure_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw Error(ErrorKind::io, "unknown measure schema");
    int d = j.at("d").get<int>();
    LinearForm psi = form_from_json(j.at("psi"), d);
    std::vector<PartialFlag> atoms;
    std::vector<double> weights;
    for (const auto& a : j.at("atoms")) {
      auto rows = a.at("frame").get<std::vector<std::vector<double>>>();
      Mat f(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) f(r, c) = rows.at(r).at(c);
      atoms.emplace_back(psi.theta(), f);
      weights.push_back(a.at("weight").get<double>());
    }
    return AtomicMeasure::from_atoms(psi, j.at("s").get<double>(), atoms, weights);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io, std::string("bad measure record: ") + e.what());
  }
}

json shadow_report_json(const std::string& gamma_word, double radius, const ShadowResult& res) {
  return {{"gamma_word", gamma_word}, {"radius", radius}, {"d_min", res.d_min}, {"member", res.member}};
}

CsvTable indicator_csv(const IndicatorGrid& grid) {
  std::vector<std::string> header;
  const int d = grid.theta.d();
  for (int i = 0; i < d; ++i) header.push_back("u" + std::to_string(i + 1));
  for (const char* h : {"aperture", "tau", "ci_low", "ci_high", "psi_hat"}) header.push_back(h);
  CsvTable t(header);
  for (std::size_t q = 0; q < grid.directions.size(); ++q) {
    for (const auto& a : grid.curves[q]) {
      std::vector<std::string> row;
      for (int i = 0; i < d; ++i) row.push_back(format_double(grid.directions[q][i]));
      row.push_back(format_double(a.aperture));
      row.push_back(format_double(a.estimate.value));
      row.push_back(format_double(a.estimate.ci_low));
      row.push_back(format_double(a.estimate.ci_high));
      row.push_back(format_double(grid.values[q]));
      t.add_row(std::move(row));
    }
  }
  return t;
}

}  // namespace pslab::io
