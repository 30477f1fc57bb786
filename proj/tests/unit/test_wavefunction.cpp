#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles/projection_quadrature.hpp"
#include "oracles/radial_closed_form.hpp"
#include "scarlab/errors.hpp"
#include "scarlab/wavefunction.hpp"

using namespace scarlab;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams small_1d() {
  ModelParams p;
  p.heavy_cutoff = 3;
  p.box_length = 100.0;
  return p;
}

std::vector<double> unit_state(const Sector1D& s, std::initializer_list<std::pair<BasisState1D, double>> items) {
  std::vector<double> c(s.dim(), 0.0);
  for (const auto& [st, v] : items) c[*s.find(st)] = v;
  return c;
}

std::vector<double> random_unit(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> c(n);
  double norm = 0.0;
  for (auto& v : c) {
    v = normal(rng);
    norm += v * v;
  }
  for (auto& v : c) v /= std::sqrt(norm);
  return c;
}

}  // namespace

TEST(Grid1D, FlatStateIsUniform) {
  const auto p = small_1d();
  const auto sector = enumerate_basis_1d(p);
  const auto c = unit_state(sector, {{{0, 0, 0}, 1.0}});
  const auto g = position_wavefunction_1d(c, sector, p.box_length, {16, 16});
  EXPECT_NEAR(g.norm, 1.0, 1e-13);
  EXPECT_EQ(g.r_zero_index(), 8u);
  EXPECT_DOUBLE_EQ(g.r_axis.front(), -50.0);
  for (std::size_t k = 0; k < g.values.size(); ++k)
    EXPECT_NEAR(std::norm(g.values[k]), 1.0 / (100.0 * 100.0), 1e-17);
  EXPECT_NEAR(heavy_overlap(g), 1.0 / p.box_length, 1e-15);
  EXPECT_NEAR(concentration_ratio(g, p.box_length / 4), 0.5, 1e-14);
}

TEST(Grid1D, TwoWaveInterference) {
  const auto p = small_1d();
  const auto sector = enumerate_basis_1d(p);
  const double h = 1.0 / std::sqrt(2.0);
  const auto c = unit_state(sector, {{{1, -1, 0}, h}, {{-1, 1, 0}, h}});
  const auto g = position_wavefunction_1d(c, sector, p.box_length, {32, 8});
  EXPECT_NEAR(g.norm, 1.0, 1e-13);
  const double l = p.box_length;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double ref = 2.0 * std::pow(std::cos(2.0 * kPi * g.r_axis[i] / l), 2) / (l * l);
    EXPECT_NEAR(g.density(i, 3), ref, 1e-17);
  }
  EXPECT_NEAR(heavy_overlap(g), 2.0 / l, 1e-15);
  EXPECT_NEAR(concentration_ratio(g, l / 4), 0.5, 1e-13);
  EXPECT_NEAR(concentration_ratio(g, l), 1.0, 1e-13);
}

TEST(Grid1D, NormIsCoefficientNorm) {
  const auto p = small_1d();
  const auto sector = enumerate_basis_1d(p);
  const auto c = random_unit(sector.dim(), 11);
  const auto g = position_wavefunction_1d(c, sector, p.box_length, {32, 32});
  EXPECT_NEAR(g.norm, 1.0, 1e-12);
}

TEST(Grid1D, RejectsBadInput) {
  auto p = small_1d();
  const auto sector = enumerate_basis_1d(p);
  std::vector<double> c(sector.dim(), 0.0);
  EXPECT_THROW(position_wavefunction_1d(c, sector, 1.0, {15, 16}), std::invalid_argument);
  std::vector<double> short_c(3);
  EXPECT_THROW(position_wavefunction_1d(short_c, sector, 1.0), DimensionMismatch);
  const auto moved = enumerate_basis_1d(p, 1);
  std::vector<double> m(moved.dim(), 0.0);
  EXPECT_THROW(position_wavefunction_1d(m, moved, 1.0), std::invalid_argument);
}

TEST(Quadrature, RadialAndSphereRules) {
  const auto gl = RadialGrid::gauss_legendre(8, 2.0);
  double m3 = 0.0;
  for (std::size_t i = 0; i < gl.size(); ++i) m3 += gl.weights[i] * std::pow(gl.nodes[i], 5);
  EXPECT_NEAR(m3, std::pow(2.0, 6) / 6, 1e-13);
  const auto tr = RadialGrid::uniform(11, 1.0);
  double s = 0.0;
  for (double w : tr.weights) s += w;
  EXPECT_NEAR(s, 1.0, 1e-15);
  const auto sphere = SphereQuadrature::product(6, 12);
  double total = 0.0, zz = 0.0;
  for (std::size_t k = 0; k < sphere.size(); ++k) {
    total += sphere.weights[k];
    zz += sphere.weights[k] * sphere.directions[k][2] * sphere.directions[k][2];
  }
  EXPECT_NEAR(total, 4.0 * kPi, 1e-13);
  EXPECT_NEAR(zz, 4.0 * kPi / 3.0, 1e-13);
}

TEST(Density3D, MatchesClosedForm) {
  const double l = 50.0;
  const auto sector = enumerate_sector_3d(1, {0, 0, 0});
  const auto c = random_unit(sector.dim(), 21);
  const auto rg = RadialGrid::gauss_legendre(10, l / 2);
  const auto eg = RadialGrid::gauss_legendre(10, l / 2);
  const auto rho = integrated_probability_3d(c, sector, l, rg, eg, SphereQuadrature::product(14, 28));
  double scale = 0.0;
  for (double v : rho.values) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < rg.size(); ++i)
    for (std::size_t j = 0; j < eg.size(); ++j)
      EXPECT_NEAR(rho.at(i, j), oracle::radial_density(c, sector, l, rg.nodes[i], eg.nodes[j]),
                  1e-10 * scale);
  EXPECT_NEAR(rho.mass(), oracle::ball_mass(c, sector, l, l / 2, l / 2), 1e-9);
  EXPECT_LT(rho.mass(), 1.0);
  EXPECT_GT(rho.mass(), 0.0);
  EXPECT_LE(rho.mass_below_r(l / 8), rho.mass());
}

TEST(Density3D, BallMassOfFlatState) {
  const double l = 10.0;
  const auto sector = enumerate_sector_3d(1, {0, 0, 0});
  std::vector<double> c(sector.dim(), 0.0);
  c[*sector.find({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}})] = 1.0;
  const auto rho = integrated_probability_3d(c, sector, l, RadialGrid::gauss_legendre(6, l / 2),
                                             RadialGrid::gauss_legendre(6, l / 2),
                                             SphereQuadrature::product(4, 8));
  const double ball = 4.0 * kPi / 3.0 * std::pow(l / 2, 3) / std::pow(l, 3);
  EXPECT_NEAR(rho.mass(), ball * ball, 1e-13);
}

TEST(Projection3D, MatchesDirectQuadrature) {
  const double l = 20.0;
  const auto sector = enumerate_sector_3d(1, {0, 0, 0});
  const auto c = random_unit(sector.dim(), 31);
  const auto proj = pair_projection_3d(c, sector, l, 0, 1, 8);
  double scale = 0.0;
  for (double v : proj.values) scale = std::max(scale, v);
  for (std::size_t i = 0; i < proj.n(); i += 3)
    for (std::size_t j = 0; j < proj.n(); j += 3) {
      const double ref = oracle::projection_point(c, sector, l, 0, 1, proj.coordinate[i],
                                                  proj.coordinate[j], 12);
      EXPECT_NEAR(proj.at(i, j), ref, 1e-9 * scale) << i << "," << j;
    }
}

TEST(Projection3D, MassAndMarginal) {
  const double l = 20.0;
  const auto sector = enumerate_sector_3d(2, {0, 0, 0});
  const auto c = random_unit(sector.dim(), 41);
  const auto proj = pair_projection_3d(c, sector, l, 0, 1, 32);
  EXPECT_NEAR(proj.mass(), 1.0, 1e-12);
  const auto marginal = proj.r_marginal();
  double total = 0.0;
  for (double m : marginal) total += m * l / 32;
  EXPECT_NEAR(total, proj.mass(), 1e-13);
  EXPECT_THROW(pair_projection_3d(c, sector, l, 3, 0), std::invalid_argument);
}

TEST(Autocorrelation, StartsAtOneAndHasUnitSpectralMass) {
  const std::vector<std::complex<double>> c{{0.6, 0.0}, {0.0, 0.48}, {0.64, 0.0}};
  const std::vector<double> e{-1.0, 0.5, 2.0};
  const std::vector<double> t{0.0, 0.1, 0.7};
  const auto s = autocorrelation(c, e, t, 0.05);
  EXPECT_NEAR(std::abs(s.values[0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(s.spectral_mass(), 1.0, 1e-6);
  for (std::size_t k = 0; k < t.size(); ++k)
    EXPECT_LE(std::abs(s.values[k]), 1.0 + 1e-12);
  EXPECT_THROW(autocorrelation(c, e, t, 0.0), std::invalid_argument);
}

TEST(Autocorrelation, TwoLevelRecurrence) {
  const std::vector<double> w{0.5, 0.5};
  const double de = 0.37;
  const std::vector<double> e{-1.0, -1.0 + de};
  const double t = first_recurrence_time(w, e, 0.05, 100.0);
  EXPECT_NEAR(t, 2.0 * kPi / de, 1e-9 * 2.0 * kPi / de);
  EXPECT_NEAR(std::norm(autocorrelation_at(w, e, kPi / de)), 0.0, 1e-20);
  EXPECT_EQ(first_recurrence_time(w, e, 0.05, 1.0), 0.0);
}

TEST(Autocorrelation, ProjectionOntoSpectrum) {
  ModelParams p = small_1d();
  p.heavy_cutoff = 2;
  const auto sector = enumerate_basis_1d(p);
  const auto spec = solve_dense(sector, MatrixElementRule1D(p));
  std::vector<std::complex<double>> init(sector.dim());
  for (std::size_t k = 0; k < init.size(); ++k) init[k] = spec.eigenvectors(static_cast<Eigen::Index>(k), 2);
  const auto coeffs = project_onto_spectrum(init, spec);
  for (std::size_t n = 0; n < coeffs.size(); ++n)
    EXPECT_NEAR(std::abs(coeffs[n]), n == 2 ? 1.0 : 0.0, 1e-12);
}
