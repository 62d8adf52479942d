#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "extrap/domains.hpp"

namespace extrap {

/// Flat key/value run configuration: one `key = value` per line, `#` starts
/// a comment, keys are case-sensitive. Values keep their raw text; typed
/// access goes through the getters, which name the key in every error.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_string(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string stripped = line.substr(0, line.find('#'));
      if (trim(stripped).empty()) continue;
      std::size_t eq = stripped.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": expected key = value");
      std::string key = trim(stripped.substr(0, eq));
      std::string value = trim(stripped.substr(eq + 1));
      if (key.empty())
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static KeyValueConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
  }

  std::string emit() const {
    std::ostringstream out;
    for (const auto& [key, value] : values_) out << key << " = " << value << "\n";
    return out.str();
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::invalid_argument("config: missing key '" + key + "'");
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
  double get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  int get_int(const std::string& key) const {
    double v = get_double(key);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw std::invalid_argument("config: key '" + key + "' is not an integer");
    return i;
  }
  int get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  std::uint64_t get_u64(const std::string& key) const {
    try {
      return std::stoull(get_string(key));
    } catch (const std::exception&) {
      throw std::invalid_argument("config: key '" + key + "' is not an unsigned integer");
    }
  }

  bool get_bool(const std::string& key) const {
    std::string v = get_string(key);
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config: key '" + key + "' is not a boolean");
  }
  bool get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
  }

  std::vector<double> get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& item : split(get_string(key), ','))
      out.push_back(to_double(key, trim(item)));
    return out;
  }

  std::vector<int> get_int_list(const std::string& key) const {
    std::vector<int> out;
    for (double v : get_double_list(key)) out.push_back(static_cast<int>(v));
    return out;
  }

  std::vector<std::string> get_string_list(const std::string& key) const {
    std::vector<std::string> out;
    for (const std::string& item : split(get_string(key), ',')) out.push_back(trim(item));
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
  }

  static std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
  }

  static double to_double(const std::string& key, const std::string& v) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    try {
      std::size_t pos = 0;
      double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw std::invalid_argument("config: key '" + key + "' has non-numeric value '" + v + "'");
    }
  }

  std::map<std::string, std::string> values_;
};

/// Domain descriptors: "interval:a:b" (optionally "interval:a:b:open") and
/// "sphere-z:zlo:zhi". The data domain is conventionally right-open, so
/// parse_domain takes the openness default from the caller.
inline Domain parse_domain(const std::string& descriptor, bool right_open_default = false,
                           int nodes_per_segment = 32) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(descriptor);
  while (std::getline(in, item, ':')) parts.push_back(item);
  if (parts.size() >= 3 && parts[0] == "interval") {
    bool open = right_open_default;
    if (parts.size() == 4) {
      if (parts[3] == "open")
        open = true;
      else if (parts[3] == "closed")
        open = false;
      else
        throw std::invalid_argument("bad interval descriptor: " + descriptor);
    } else if (parts.size() != 3) {
      throw std::invalid_argument("bad interval descriptor: " + descriptor);
    }
    return Domain::interval(std::stod(parts[1]), std::stod(parts[2]), open,
                            nodes_per_segment);
  }
  if (parts.size() == 3 && parts[0] == "sphere-z")
    return Domain::sphere_band_z(std::stod(parts[1]), std::stod(parts[2]));
  throw std::invalid_argument("unknown domain descriptor: " + descriptor);
}

inline std::string domain_descriptor(const Domain& dom) {
  std::ostringstream out;
  if (dom.is_interval()) {
    const Segment& s = dom.segments().front();
    out << "interval:" << s.lo << ":" << dom.segments().back().hi;
    if (s.right_open) out << ":open";
  } else {
    out << "sphere-z:" << dom.z_lo() << ":" << dom.z_hi();
  }
  return out.str();
}

}  // namespace extrap
