#include "scarlab/scar_estimates.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "scarlab/errors.hpp"

namespace scarlab {

double ScarEstimate::predicted_gap() const { return (level + 0.5) * omega; }

double ScarEstimate::energy_without_penalty() const { return saddle_value + predicted_gap(); }

std::optional<double> ScarEstimate::energy() const {
  if (!localization_penalty) return std::nullopt;
  return energy_without_penalty() + *localization_penalty;
}

std::string ScarEstimate::expression() const {
  std::ostringstream os;
  os.precision(17);
  os << saddle_value << " + ";
  if (localization_penalty)
    os << *localization_penalty;
  else
    os << "E_loc";
  os << " + " << (level + 0.5) << " * " << omega;
  return os.str();
}

ScarEstimate scar_energy(int level, const SaddleAnalysis& saddle_scaled, double saddle_value,
                         std::optional<double> localization_penalty) {
  if (level < 0) throw std::invalid_argument("scar level must be >= 0");
  if (!saddle_scaled.stable_mode()) throw NumericalError("saddle has no stable mode");
  return {saddle_value, saddle_scaled.omega(), level, localization_penalty};
}

double closed_form_gap(const ModelParams& params) {
  const double g = params.coupling, gm = params.gamma, l = params.box_length;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return params.energy_scale() * 0.5 * std::sqrt(4.0 * g * pi2 * (2.0 + gm) / (gm * l * l * l));
}

std::string to_string(IntensityConvention c) {
  return c == IntensityConvention::curvature ? "curvature" : "rate";
}

double scar_intensity(const SaddleAnalysis& saddle, std::size_t stable_mode,
                      IntensityConvention convention) {
  if (stable_mode >= saddle.modes.size() || !saddle.modes[stable_mode].stable)
    throw std::invalid_argument("selected mode is not stable");
  const auto& m = saddle.modes[stable_mode];
  const double nu = std::sqrt(m.sigma / m.mass) / (2.0 * std::numbers::pi);
  if (convention == IntensityConvention::curvature) return nu / saddle.lambda_curvature();
  return nu / saddle.lambda_rate();
}

ComparisonReport compare_with_spectrum(const SaddleAnalysis& saddle_scaled, double saddle_value,
                                       std::span<const double> eigenvalues,
                                       const std::vector<Band>& bands, int levels,
                                       IntensityConvention convention) {
  if (eigenvalues.empty()) throw std::invalid_argument("empty spectrum");
  ComparisonReport rep;
  rep.ground_energy = eigenvalues.front();
  rep.saddle_value = saddle_value;
  rep.omega = saddle_scaled.omega();
  for (int n = 0; n < levels; ++n) {
    GapComparison row;
    row.level = n;
    row.band = n + 1;
    row.predicted = scar_energy(n, saddle_scaled, saddle_value).predicted_gap();
    if (static_cast<std::size_t>(n) < bands.size()) {
      row.band_top = bands[static_cast<std::size_t>(n)].top;
      row.measured = *row.band_top - rep.ground_energy;
      row.relative_deviation = (row.predicted - *row.measured) / *row.measured;
    }
    rep.rows.push_back(row);
  }
  const std::size_t mode = *saddle_scaled.stable_mode();
  rep.convention = convention;
  rep.intensity_curvature = scar_intensity(saddle_scaled, mode, IntensityConvention::curvature);
  rep.intensity_rate = scar_intensity(saddle_scaled, mode, IntensityConvention::rate);
  rep.intensity = convention == IntensityConvention::curvature ? rep.intensity_curvature : rep.intensity_rate;
  return rep;
}

}  // namespace scarlab
