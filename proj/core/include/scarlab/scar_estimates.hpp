#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scarlab/classical.hpp"
#include "scarlab/eigensolve.hpp"
#include "scarlab/params.hpp"

namespace scarlab {

/// Harmonic scar level V(0) + E_loc + (n + 1/2) omega with hbar = 1.
/// E_loc is unknown unless the caller supplies it.
struct ScarEstimate {
  double saddle_value = 0.0;
  double omega = 0.0;
  int level = 0;
  std::optional<double> localization_penalty;

  /// (n + 1/2) omega: the level measured from a ground state that shares
  /// V(0) + E_loc.
  double predicted_gap() const;
  /// V(0) + (n + 1/2) omega, i.e. the energy without E_loc.
  double energy_without_penalty() const;
  std::optional<double> energy() const;
  /// Human-readable form with E_loc kept as a symbol when unknown.
  std::string expression() const;
};

/// Builds the level-n estimate from a scaled saddle analysis.
ScarEstimate scar_energy(int level, const SaddleAnalysis& saddle_scaled, double saddle_value,
                         std::optional<double> localization_penalty = std::nullopt);

/// The closed form 1/2 sqrt(4 g pi^2 (2 + gamma) / (gamma L^3)), times the
/// energy scale.
double closed_form_gap(const ModelParams& params);

enum class IntensityConvention { curvature, rate };
std::string to_string(IntensityConvention c);

/// curvature: (1/2 pi) sqrt(sigma_i / mu_i) / |sigma_min|
/// rate:  (omega_i / 2 pi) / sqrt(|sigma_min| / mu_unstable) = 1 / (tau lambda)
double scar_intensity(const SaddleAnalysis& saddle, std::size_t stable_mode,
                      IntensityConvention convention);

struct GapComparison {
  int band = 0;
  int level = 0;
  double predicted = 0.0;
  std::optional<double> measured;
  std::optional<double> band_top;
  std::optional<double> relative_deviation;
};

struct ComparisonReport {
  double ground_energy = 0.0;
  double saddle_value = 0.0;
  double omega = 0.0;
  std::vector<GapComparison> rows;
  IntensityConvention convention = IntensityConvention::rate;
  double intensity = 0.0;
  double intensity_curvature = 0.0;
  double intensity_rate = 0.0;
};

/// Pairs level n with band n + 1: measured gap is band top minus the
/// ground energy. Missing bands give rows without measurements.
ComparisonReport compare_with_spectrum(const SaddleAnalysis& saddle_scaled, double saddle_value,
                                       std::span<const double> eigenvalues,
                                       const std::vector<Band>& bands, int levels = 3,
                                       IntensityConvention convention = IntensityConvention::rate);

}  // namespace scarlab
