#pragma once
#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace qgf {

// Minimal TOML subset: [section] headers, key = value lines, # comments,
// string/number/boolean values. Keys are flattened to "section.key".
class TomlTable {
public:
  static TomlTable parse(const std::string& text);
  static TomlTable parse_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  int64_t get_int(const std::string& key, int64_t fallback);
  uint64_t get_uint64(const std::string& key, uint64_t fallback);
  bool get_bool(const std::string& key, bool fallback);

  // keys present in the file but never read — for strict unknown-key checks
  std::set<std::string> unread_keys() const;

private:
  std::map<std::string, std::string> values_;  // raw value text
  std::set<std::string> read_;
};

}  // namespace qgf
