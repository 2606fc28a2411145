#include "kronop/config.hpp"

#include <fstream>
#include <sstream>

#include "kronop/errors.hpp"

namespace kronop {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParameterError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ParameterError(origin + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ParameterError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ParameterError(origin + ":" + std::to_string(lineno) + ": key outside any [section]");
    const std::string full = section + "." + key;
    if (cfg.entries_.count(full))
      throw ParameterError(origin + ":" + std::to_string(lineno) + ": duplicate key " + full);
    cfg.entries_[full] = value;
    cfg.lines_[full] = lineno;
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
  lines_[key] = 0;
}

std::string Config::raw(const std::string& key) {
  consumed_.insert(key);
  return entries_.at(key);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
  const std::string v = has(key) ? raw(key) : fallback;
  resolved_[key] = v;
  return v;
}

std::string Config::require_string(const std::string& key) {
  if (!has(key)) throw ParameterError(origin_ + ": missing required key " + key);
  const std::string v = raw(key);
  resolved_[key] = v;
  return v;
}

double Config::require_real(const std::string& key) {
  const std::string v = require_string(key);
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParameterError(origin_ + ":" + std::to_string(lines_[key]) + ": bad number for " + key);
  }
}

double Config::get_real(const std::string& key, double fallback) {
  if (!has(key)) {
    std::ostringstream os;
    os.precision(17);
    os << fallback;
    resolved_[key] = os.str();
    return fallback;
  }
  return require_real(key);
}

int Config::get_int(const std::string& key, int fallback) {
  return static_cast<int>(get_long(key, fallback));
}

long Config::get_long(const std::string& key, long fallback) {
  if (!has(key)) {
    resolved_[key] = std::to_string(fallback);
    return fallback;
  }
  const std::string v = require_string(key);
  try {
    std::size_t pos = 0;
    const long l = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return l;
  } catch (const std::exception&) {
    throw ParameterError(origin_ + ":" + std::to_string(lines_[key]) + ": bad integer for " + key);
  }
}

bool Config::get_bool(const std::string& key, bool fallback) {
  if (!has(key)) {
    resolved_[key] = fallback ? "true" : "false";
    return fallback;
  }
  const std::string v = require_string(key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ParameterError(origin_ + ":" + std::to_string(lines_[key]) + ": expected true/false for " + key);
}

std::vector<double> Config::get_real_list(const std::string& key, std::vector<double> fallback) {
  if (!has(key)) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < fallback.size(); ++i) os << (i ? "," : "") << fallback[i];
    resolved_[key] = os.str();
    return fallback;
  }
  const std::string v = require_string(key);
  std::vector<double> out;
  for (const auto& item : split_list(v)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParameterError(origin_ + ":" + std::to_string(lines_[key]) + ": bad list entry for " + key);
    }
  }
  return out;
}

std::vector<int> Config::get_int_list(const std::string& key, std::vector<int> fallback) {
  std::vector<double> def(fallback.begin(), fallback.end());
  std::vector<double> reals = get_real_list(key, def);
  std::vector<int> out;
  out.reserve(reals.size());
  for (double d : reals) out.push_back(static_cast<int>(d));
  return out;
}

void Config::check_all_consumed() const {
  for (const auto& [key, value] : entries_) {
    if (!consumed_.count(key)) {
      throw ParameterError(origin_ + ":" + std::to_string(lines_.at(key)) +
                           ": unknown key " + key);
    }
  }
}

}  // namespace kronop
