#include "warpcone/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace warpcone {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error(what); }

}  // namespace

bool Config::has(const std::string& sec, const std::string& key) const {
  for (const auto& s : sections) {
    if (s.name != sec) continue;
    for (const auto& [k, v] : s.entries)
      if (k == key) return true;
  }
  return false;
}

const std::string& Config::get(const std::string& sec, const std::string& key) const {
  for (const auto& s : sections) {
    if (s.name != sec) continue;
    for (const auto& [k, v] : s.entries)
      if (k == key) return v;
  }
  fail("config: missing key [" + sec + "] " + key);
}

std::string Config::get_or(const std::string& sec, const std::string& key,
                           const std::string& fallback) const {
  return has(sec, key) ? get(sec, key) : fallback;
}

long long Config::geti(const std::string& sec, const std::string& key) const {
  const std::string& v = get(sec, key);
  try {
    std::size_t pos = 0;
    long long r = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    fail("config: [" + sec + "] " + key + " = '" + v + "' is not an integer");
  }
}

long long Config::geti_or(const std::string& sec, const std::string& key, long long fallback) const {
  return has(sec, key) ? geti(sec, key) : fallback;
}

double Config::getd(const std::string& sec, const std::string& key) const {
  const std::string& v = get(sec, key);
  try {
    if (v.find('/') != std::string::npos) return parse_rat(v).to_double();
    std::size_t pos = 0;
    double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    fail("config: [" + sec + "] " + key + " = '" + v + "' is not a number");
  }
}

double Config::getd_or(const std::string& sec, const std::string& key, double fallback) const {
  return has(sec, key) ? getd(sec, key) : fallback;
}

Rat Config::getr(const std::string& sec, const std::string& key) const {
  const std::string& v = get(sec, key);
  try {
    return parse_rat(v);
  } catch (const std::exception&) {
    fail("config: [" + sec + "] " + key + " = '" + v + "' is not a rational");
  }
}

std::vector<std::string> Config::list(const std::string& sec, const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(get(sec, key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> Config::list_or(const std::string& sec, const std::string& key) const {
  if (!has(sec, key)) return {};
  return list(sec, key);
}

void Config::set(const std::string& sec, const std::string& key, const std::string& value) {
  for (auto& s : sections) {
    if (s.name != sec) continue;
    for (auto& [k, v] : s.entries)
      if (k == key) {
        v = value;
        return;
      }
    s.entries.push_back({key, value});
    return;
  }
  sections.push_back({sec, {{key, value}}});
}

Config parse_config(std::istream& in, const std::string& stream_name) {
  Config cfg;
  std::string line;
  int lineno = 0;
  int current = -1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        fail(stream_name + ":" + std::to_string(lineno) + ": unterminated section header");
      std::string name = trim(t.substr(1, t.size() - 2));
      if (name.empty())
        fail(stream_name + ":" + std::to_string(lineno) + ": empty section name");
      cfg.sections.push_back({name, {}});
      current = static_cast<int>(cfg.sections.size()) - 1;
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      fail(stream_name + ":" + std::to_string(lineno) + ": expected 'key = value' in '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail(stream_name + ":" + std::to_string(lineno) + ": empty key");
    if (current < 0)
      fail(stream_name + ":" + std::to_string(lineno) + ": key '" + key + "' before any [section]");
    cfg.sections[static_cast<std::size_t>(current)].entries.push_back({key, value});
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("config: cannot open " + path);
  return parse_config(in, path);
}

void write_config(const Config& cfg, std::ostream& out) {
  bool first = true;
  for (const auto& s : cfg.sections) {
    if (!first) out << "\n";
    first = false;
    out << "[" << s.name << "]\n";
    for (const auto& [k, v] : s.entries) out << k << " = " << v << "\n";
  }
}

}  // namespace warpcone
