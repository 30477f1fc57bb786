#include "scarlab/params.hpp"

#include <cmath>

#include "scarlab/config.hpp"
#include "scarlab/errors.hpp"

namespace scarlab {

std::string_view to_string(Scaling s) {
  return s == Scaling::raw ? "raw" : "multiplied-by-L";
}

std::string_view to_string(LightCutoffMode m) {
  return m == LightCutoffMode::derived ? "derived" : "product-filter";
}

Scaling parse_scaling(std::string_view text) {
  if (text == "raw") return Scaling::raw;
  if (text == "multiplied-by-L" || text == "scaled") return Scaling::multiplied_by_L;
  throw ConfigError("unknown scaling '" + std::string(text) + "' (expected raw|multiplied-by-L)",
                    "scaling");
}

LightCutoffMode parse_light_cutoff_mode(std::string_view text) {
  if (text == "derived") return LightCutoffMode::derived;
  if (text == "product-filter") return LightCutoffMode::product_filter;
  throw ConfigError("unknown light cutoff mode '" + std::string(text) +
                        "' (expected derived|product-filter)",
                    "light_mode");
}

void ModelParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ConfigError("gamma must be > 0", "gamma");
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw ConfigError("box_length must be > 0", "box_length");
  if (!(coupling > 0.0) || !std::isfinite(coupling))
    throw ConfigError("coupling must be > 0", "coupling");
  if (heavy_cutoff < 0) throw ConfigError("heavy_cutoff must be >= 0", "heavy_cutoff");
  if (cutoff_sq < 0) throw ConfigError("cutoff_sq must be >= 0", "cutoff_sq");
}

ModelParams model_params_from_config(const ConfigFile& config) {
  static const std::set<std::string> keys = {
      "gamma",      "box_length",    "coupling",      "heavy_cutoff", "cutoff_sq",
      "scaling",    "scaling_3d",    "light_mode_1d", "light_mode_3d"};
  config.require_known_keys("model", keys);

  ModelParams p;
  p.gamma = config.get_double("model", "gamma", p.gamma);
  p.box_length = config.get_double("model", "box_length", p.box_length);
  p.coupling = config.get_double("model", "coupling", p.coupling);
  p.heavy_cutoff = config.get_int("model", "heavy_cutoff", p.heavy_cutoff);
  p.cutoff_sq = config.get_int("model", "cutoff_sq", p.cutoff_sq);

  auto parse_with_line = [&](const char* key, auto parser, auto fallback) {
    const auto e = config.find("model", key);
    if (!e) return fallback;
    try {
      return parser(e->value);
    } catch (const ConfigError& err) {
      throw ConfigError(config.source() + ":" + std::to_string(e->line) + ": " + err.what(), key,
                        e->line);
    }
  };
  p.scaling = parse_with_line("scaling", parse_scaling, p.scaling);
  p.scaling_3d = parse_with_line("scaling_3d", parse_scaling, p.scaling_3d);
  p.light_mode_1d = parse_with_line("light_mode_1d", parse_light_cutoff_mode, p.light_mode_1d);
  p.light_mode_3d = parse_with_line("light_mode_3d", parse_light_cutoff_mode, p.light_mode_3d);

  try {
    p.validate();
  } catch (const ConfigError& err) {
    const auto e = config.find("model", err.key());
    const int line = e ? e->line : 0;
    throw ConfigError(config.source() + ":" + std::to_string(line) + ": " + err.what(), err.key(),
                      line);
  }
  return p;
}

}  // namespace scarlab
