#pragma once

// Angle-integrated 3D density and its ball mass from the double plane-wave
// sum, using int dOmega exp(i k.x) = 4 pi sin(k x)/(k x).

#include <cmath>
#include <numbers>
#include <span>

#include "scarlab/basis.hpp"

namespace oracle {

inline double j0(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

/// int_0^R j0(k r) r^2 dr
inline double ball_moment(double k, double radius) {
  if (k == 0.0) return radius * radius * radius / 3.0;
  const double x = k * radius;
  return (std::sin(x) - x * std::cos(x)) / (k * k * k);
}

template <typename F>
double double_sum(std::span<const double> c, const scarlab::Sector3D& sector, double l, F term) {
  using scarlab::operator-;
  const double pi = std::numbers::pi;
  double total = 0.0;
  for (std::size_t s = 0; s < sector.dim(); ++s)
    for (std::size_t t = 0; t < sector.dim(); ++t) {
      const auto& a = sector[s];
      const auto& b = sector[t];
      const auto dd = (a.n1 - a.n2) - (b.n1 - b.n2);
      const auto dp = a.p - b.p;
      const double kr = pi * std::sqrt(static_cast<double>(scarlab::norm_sq(dd))) / l;
      const double ke = 2.0 * pi * std::sqrt(static_cast<double>(scarlab::norm_sq(dp))) / l;
      total += c[s] * c[t] * term(kr, ke);
    }
  return total * 16.0 * pi * pi / std::pow(l, 6);
}

inline double radial_density(std::span<const double> c, const scarlab::Sector3D& sector, double l,
                             double r, double eta) {
  return double_sum(c, sector, l, [&](double kr, double ke) { return j0(kr * r) * j0(ke * eta); });
}

inline double ball_mass(std::span<const double> c, const scarlab::Sector3D& sector, double l,
                        double r_max, double eta_max) {
  return double_sum(c, sector, l, [&](double kr, double ke) {
    return ball_moment(kr, r_max) * ball_moment(ke, eta_max);
  });
}

}  // namespace oracle
