#pragma once

#include <string>
#include <string_view>

namespace scarlab {

class ConfigFile;

enum class Scaling { raw, multiplied_by_L };

/// How the light-particle momentum is bounded.
///   derived:        p = P - n1 - n2, no independent bound.
///   product_filter: p must satisfy the same bound as the heavy momenta.
enum class LightCutoffMode { derived, product_filter };

std::string_view to_string(Scaling s);
std::string_view to_string(LightCutoffMode m);
Scaling parse_scaling(std::string_view text);
LightCutoffMode parse_light_cutoff_mode(std::string_view text);

/// Physical constants and basis cutoffs shared by both models.
///
/// The 1D model uses `coupling`, `heavy_cutoff`, `light_mode_1d` and
/// `scaling`. The 3D Coulomb model has unit coupling and uses `cutoff_sq`,
/// `light_mode_3d` and `scaling_3d`.
struct ModelParams {
  double gamma = 2.7e-4;
  double box_length = 13039.0;
  double coupling = 6.0;
  int heavy_cutoff = 13;
  int cutoff_sq = 10;
  LightCutoffMode light_mode_1d = LightCutoffMode::derived;
  LightCutoffMode light_mode_3d = LightCutoffMode::product_filter;
  Scaling scaling = Scaling::multiplied_by_L;
  Scaling scaling_3d = Scaling::raw;

  /// Throws ConfigError if any invariant is violated.
  void validate() const;

  double energy_scale() const { return scaling == Scaling::multiplied_by_L ? box_length : 1.0; }
  double energy_scale_3d() const {
    return scaling_3d == Scaling::multiplied_by_L ? box_length : 1.0;
  }
};

/// Reads the `[model]` section (keys gamma, box_length, coupling,
/// heavy_cutoff, cutoff_sq, scaling, scaling_3d, light_mode_1d,
/// light_mode_3d). Missing keys keep their defaults.
ModelParams model_params_from_config(const ConfigFile& config);

}  // namespace scarlab
