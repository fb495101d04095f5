#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "warpcone/rational.hpp"

namespace warpcone {

// Flat key-value configuration with [sections]. Order is preserved so a
// parsed file writes back byte-identically (comments and blank lines aside),
// which is what lets the run manifest round-trip.
class Config {
 public:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
  };

  std::vector<Section> sections;

  bool has(const std::string& sec, const std::string& key) const;
  // Throw std::runtime_error naming the missing section/key.
  const std::string& get(const std::string& sec, const std::string& key) const;
  std::string get_or(const std::string& sec, const std::string& key,
                     const std::string& fallback) const;
  long long geti(const std::string& sec, const std::string& key) const;
  long long geti_or(const std::string& sec, const std::string& key, long long fallback) const;
  double getd(const std::string& sec, const std::string& key) const;
  double getd_or(const std::string& sec, const std::string& key, double fallback) const;
  Rat getr(const std::string& sec, const std::string& key) const;
  // Comma-separated list; empty key -> empty list.
  std::vector<std::string> list(const std::string& sec, const std::string& key) const;
  std::vector<std::string> list_or(const std::string& sec, const std::string& key) const;

  void set(const std::string& sec, const std::string& key, const std::string& value);
};

// Errors carry the stream name and 1-based line number of the offending line.
Config parse_config(std::istream& in, const std::string& stream_name);
Config parse_config_file(const std::string& path);
void write_config(const Config& cfg, std::ostream& out);

}  // namespace warpcone
