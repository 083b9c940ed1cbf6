#include "wfl/scan.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wfl {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

double parse_number(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty number");
  double factor = 1.0;
  if (t.size() >= 2 && (t.substr(t.size() - 2) == "pi" || t.substr(t.size() - 2) == "PI")) {
    factor = std::numbers::pi;
    t = trim(t.substr(0, t.size() - 2));
    if (t.empty() || t == "+") return factor;
    if (t == "-") return -factor;
  }
  const char* begin = t.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw std::invalid_argument("cannot parse number: '" + text + "'");
  return value * factor;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number(item));
  }
  if (out.empty()) throw std::invalid_argument("empty number list: '" + text + "'");
  return out;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str());
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) +
                                                 ": empty key");
    cfg.values_[key] = value;
  }
  return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

void ExperimentConfig::apply_override(const std::string& key_equals_value) {
  const std::size_t eq = key_equals_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("override must be key=value: '" + key_equals_value + "'");
  values_[trim(key_equals_value.substr(0, eq))] = trim(key_equals_value.substr(eq + 1));
}

bool ExperimentConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::string ExperimentConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument("missing config key: " + key);
  return it->second;
}

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::number(const std::string& key) const {
  try {
    return parse_number(get(key));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("config key '" + key + "': " + e.what());
  }
}

double ExperimentConfig::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long long ExperimentConfig::integer(const std::string& key) const {
  const double v = number(key);
  const long long i = std::llround(v);
  if (std::abs(v - static_cast<double>(i)) > 1e-9)
    throw std::invalid_argument("config key '" + key + "' is not an integer");
  return i;
}

long long ExperimentConfig::integer(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool ExperimentConfig::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string v = get(key);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config key '" + key + "' is not a boolean: " + v);
}

std::vector<double> ExperimentConfig::number_list(const std::string& key) const {
  try {
    return parse_number_list(get(key));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("config key '" + key + "': " + e.what());
  }
}

std::vector<long long> ExperimentConfig::integer_list(const std::string& key) const {
  std::vector<long long> out;
  for (double v : number_list(key)) {
    const long long i = std::llround(v);
    if (std::abs(v - static_cast<double>(i)) > 1e-9)
      throw std::invalid_argument("config key '" + key + "' has a non-integer entry");
    out.push_back(i);
  }
  return out;
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("fit_power_law: need >= 3 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_power_law: nonpositive value");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_power_law: degenerate abscissa");
  PowerLawFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy * sxx - sx * sxy) / denom;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = ly[i] - (fit.slope * lx[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

int resolve_workers(int requested) {
  int workers = requested;
  if (workers <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    workers = hw == 0 ? 1 : static_cast<int>(hw);
  }
  if (const char* cap_text = std::getenv("WFL_MAX_WORKERS")) {
    char* end = nullptr;
    const long cap = std::strtol(cap_text, &end, 10);
    if (end != cap_text && *end == '\0' && cap > 0)
      workers = std::min<long>(workers, cap);
  }
  return std::max(workers, 1);
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("csv column not found: " + name);
}

double CsvTable::value(std::size_t row, int col) const {
  const std::string& cell = rows.at(row).at(static_cast<std::size_t>(col));
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw std::invalid_argument("csv cell is not numeric: '" + cell + "'");
  return v;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open csv: " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (first) {
      table.header = cells;
      first = false;
    } else {
      if (cells.size() != table.header.size())
        throw std::invalid_argument("csv row width mismatch in " + path);
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) throw std::invalid_argument("csv has no header: " + path);
  return table;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace wfl
