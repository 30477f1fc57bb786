#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace scarlab {

/// Plain-text key/value configuration with `[section]` headers.
///
///     # comment
///     [model]
///     gamma = 2.7e-4
///
/// Keys before the first header belong to the section "model".
class ConfigFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static ConfigFile parse(std::istream& in, std::string source = "<config>");
  static ConfigFile load(const std::filesystem::path& path);

  bool has_section(std::string_view section) const;
  const std::string& source() const { return source_; }

  std::optional<Entry> find(std::string_view section, std::string_view key) const;

  double get_double(std::string_view section, std::string_view key, double fallback) const;
  int get_int(std::string_view section, std::string_view key, int fallback) const;
  std::string get_string(std::string_view section, std::string_view key,
                         std::string fallback) const;
  bool get_bool(std::string_view section, std::string_view key, bool fallback) const;
  std::vector<double> get_doubles(std::string_view section, std::string_view key,
                                  std::vector<double> fallback) const;

  /// Throws ConfigError naming the first key in `section` not in `allowed`.
  void require_known_keys(std::string_view section, const std::set<std::string>& allowed) const;

  /// Throws ConfigError for any section not in `allowed`.
  void require_known_sections(const std::set<std::string>& allowed) const;

  void set(const std::string& section, const std::string& key, std::string value);

 private:
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>, std::less<>> sections_;
};

}  // namespace scarlab
