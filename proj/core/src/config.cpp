#include "scarlab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "scarlab/errors.hpp"

namespace scarlab {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string where(const std::string& source, int line) {
  return source + ":" + std::to_string(line);
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in, std::string source) {
  ConfigFile cfg;
  cfg.source_ = std::move(source);
  std::string section = "model";
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(where(cfg.source_, line_no) + ": malformed section header '" + line + "'",
                          {}, line_no);
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where(cfg.source_, line_no) + ": expected 'key = value', got '" + line + "'",
                        line, line_no);
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(where(cfg.source_, line_no) + ": empty key", {}, line_no);
    }
    auto& entries = cfg.sections_[section];
    if (entries.contains(key)) {
      throw ConfigError(where(cfg.source_, line_no) + ": duplicate key '" + key + "' in [" +
                            section + "]",
                        key, line_no);
    }
    entries.emplace(std::move(key), Entry{std::move(value), line_no});
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse(in, path.string());
}

bool ConfigFile::has_section(std::string_view section) const {
  return sections_.find(section) != sections_.end();
}

std::optional<ConfigFile::Entry> ConfigFile::find(std::string_view section,
                                                  std::string_view key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  const auto e = s->second.find(std::string(key));
  if (e == s->second.end()) return std::nullopt;
  return e->second;
}

double ConfigFile::get_double(std::string_view section, std::string_view key,
                              double fallback) const {
  const auto e = find(section, key);
  if (!e) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(e->value, &used);
    if (used != e->value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where(source_, e->line) + ": key '" + std::string(key) +
                          "' expects a number, got '" + e->value + "'",
                      std::string(key), e->line);
  }
}

int ConfigFile::get_int(std::string_view section, std::string_view key, int fallback) const {
  const auto e = find(section, key);
  if (!e) return fallback;
  int v = 0;
  const char* begin = e->value.data();
  const char* end = begin + e->value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(where(source_, e->line) + ": key '" + std::string(key) +
                          "' expects an integer, got '" + e->value + "'",
                      std::string(key), e->line);
  }
  return v;
}

std::string ConfigFile::get_string(std::string_view section, std::string_view key,
                                   std::string fallback) const {
  const auto e = find(section, key);
  return e ? e->value : fallback;
}

bool ConfigFile::get_bool(std::string_view section, std::string_view key, bool fallback) const {
  const auto e = find(section, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
  if (e->value == "false" || e->value == "no" || e->value == "0") return false;
  throw ConfigError(where(source_, e->line) + ": key '" + std::string(key) +
                        "' expects true/false, got '" + e->value + "'",
                    std::string(key), e->line);
}

std::vector<double> ConfigFile::get_doubles(std::string_view section, std::string_view key,
                                            std::vector<double> fallback) const {
  const auto e = find(section, key);
  if (!e) return fallback;
  std::vector<double> out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError(where(source_, e->line) + ": key '" + std::string(key) +
                            "' expects a comma-separated list of numbers, got '" + e->value + "'",
                        std::string(key), e->line);
    }
  }
  return out;
}

void ConfigFile::require_known_keys(std::string_view section,
                                    const std::set<std::string>& allowed) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return;
  for (const auto& [key, entry] : s->second) {
    if (!allowed.contains(key)) {
      throw ConfigError(where(source_, entry.line) + ": unknown key '" + key + "' in [" +
                            std::string(section) + "]",
                        key, entry.line);
    }
  }
}

void ConfigFile::require_known_sections(const std::set<std::string>& allowed) const {
  for (const auto& [name, entries] : sections_) {
    if (!allowed.contains(name)) {
      const int line = entries.empty() ? 0 : entries.begin()->second.line;
      throw ConfigError(source_ + ": unknown section [" + name + "]", name, line);
    }
  }
}

void ConfigFile::set(const std::string& section, const std::string& key, std::string value) {
  sections_[section][key] = Entry{std::move(value), 0};
}

}  // namespace scarlab
