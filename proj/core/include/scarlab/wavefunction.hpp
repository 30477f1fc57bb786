#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/eigensolve.hpp"

namespace scarlab {

/// Samples of a wavefunction over one cell in relative coordinates. The
/// axes run over [-L/2, L/2) with step L/n, so r = 0 is sample n/2 for even n.
struct WavefunctionGrid {
  std::vector<double> r_axis;
  std::vector<double> eta_axis;
  std::vector<std::complex<double>> values;  // row-major, one row per r node
  double box_length = 1.0;
  double norm = 0.0;                         // sum |psi|^2 dr deta

  std::size_t nr() const { return r_axis.size(); }
  std::size_t neta() const { return eta_axis.size(); }
  double dr() const { return box_length / static_cast<double>(nr()); }
  double deta() const { return box_length / static_cast<double>(neta()); }
  double density(std::size_t i, std::size_t j) const { return std::norm(values[i * neta() + j]); }
  std::size_t r_zero_index() const;
};

struct GridSpec {
  std::size_t nr = 128;
  std::size_t neta = 128;
};

/// Psi(r, eta) = L^-1 sum_s c_s exp(i (2 pi / L) [(n1 - n2) r / 2 + p eta]).
/// Rejects sectors with nonzero total momentum.
WavefunctionGrid position_wavefunction_1d(std::span<const double> coefficients,
                                          const Sector1D& sector, double box_length,
                                          GridSpec spec = {});

/// Quadrature of |Psi(0, eta)|^2 over eta, divided by the grid norm.
double heavy_overlap(const WavefunctionGrid& grid);

/// Fraction of the grid mass with |r| <= strip_half_width. Nodes exactly on
/// the strip edge carry half weight.
double concentration_ratio(const WavefunctionGrid& grid, double strip_half_width);

/// Nodes and weights for a radial integral over [0, r_max].
struct RadialGrid {
  std::vector<double> nodes;
  std::vector<double> weights;

  static RadialGrid uniform(std::size_t n, double r_max);  // trapezoid weights
  static RadialGrid gauss_legendre(std::size_t n, double r_max);
  std::size_t size() const { return nodes.size(); }
};

/// Product Gauss-Legendre (in cos theta) x uniform (in phi) rule on the unit
/// sphere; the weights sum to 4 pi.
struct SphereQuadrature {
  std::vector<std::array<double, 3>> directions;
  std::vector<double> weights;

  static SphereQuadrature product(std::size_t n_theta, std::size_t n_phi);
  std::size_t size() const { return directions.size(); }
};

/// Angle-integrated 3D density rho(|r|, |eta|) = int dOmega_r dOmega_eta |Psi|^2,
/// row-major with one row per |r| node.
struct RadialDensity3D {
  RadialGrid r;
  RadialGrid eta;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * eta.size() + j]; }
  /// int rho |r|^2 |eta|^2 d|r| d|eta| with the grids' weights.
  double mass() const;
  /// Part of mass() with |r| <= r_cut (nodes beyond r_cut dropped).
  double mass_below_r(double r_cut) const;
};

RadialDensity3D integrated_probability_3d(std::span<const double> coefficients,
                                          const Sector3D& sector, double box_length,
                                          const RadialGrid& r_grid, const RadialGrid& eta_grid,
                                          const SphereQuadrature& sphere);

/// |Psi(r_i, eta_j)|^2 with the other four coordinates integrated over the
/// cell [-L/2, L/2)^6. Rows are r_i nodes, columns eta_j nodes.
struct PairProjection {
  int r_axis = 0;
  int eta_axis = 0;
  std::vector<double> coordinate;  // shared by both axes
  std::vector<double> values;
  double box_length = 1.0;

  std::size_t n() const { return coordinate.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * n() + j]; }
  /// Integral over eta_j at each r_i node.
  std::vector<double> r_marginal() const;
  double mass() const;
};

PairProjection pair_projection_3d(std::span<const double> coefficients, const Sector3D& sector,
                                  double box_length, int r_axis, int eta_axis,
                                  std::size_t n = 64);

struct AutocorrelationSeries {
  std::vector<double> times;
  std::vector<std::complex<double>> values;
  std::vector<double> weights;     // |c_n|^2
  std::vector<double> energies;    // E_n
  std::vector<double> energy_axis;
  std::vector<double> spectral_density;
  double broadening = 0.0;

  /// Trapezoid integral of the spectral density over its axis.
  double spectral_mass() const;
};

/// C(t) = sum |c_n|^2 exp(-i E_n t) and S(E) broadened by a normalized
/// Gaussian of width `broadening`. An empty energy axis is replaced by one
/// covering every weighted level +- 8 widths at a tenth of a width per step.
AutocorrelationSeries autocorrelation(std::span<const std::complex<double>> coefficients,
                                      std::span<const double> energies,
                                      std::span<const double> times, double broadening,
                                      std::span<const double> energy_axis = {});

std::complex<double> autocorrelation_at(std::span<const double> weights,
                                        std::span<const double> energies, double t);

/// Time of the first recurrence maximum of |C(t)|^2 after its first minimum.
/// The derivative root is bracketed by scanning with `scan_step` and refined
/// by bisection. Returns 0 if none is found before `t_max`.
double first_recurrence_time(std::span<const double> weights, std::span<const double> energies,
                             double scan_step, double t_max);

/// c_n = <Psi_n | initial> for every pair of the spectrum.
std::vector<std::complex<double>> project_onto_spectrum(
    std::span<const std::complex<double>> initial, const Spectrum& spectrum);

}  // namespace scarlab
