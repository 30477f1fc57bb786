#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles/plane_wave_quadrature.hpp"
#include "scarlab/errors.hpp"
#include "scarlab/hamiltonian_1d.hpp"

using namespace scarlab;

TEST(F1, ExactQuarters) {
  EXPECT_EQ(f1(0), (Rational{1, 2}));
  EXPECT_EQ(f1(2), (Rational{1, 4}));
  EXPECT_EQ(f1(-2), (Rational{1, 4}));
  for (int a : {-3, -1, 1, 3, 4, 10}) EXPECT_EQ(f1(a), (Rational{0, 1}));
  EXPECT_DOUBLE_EQ(f1(0).value(), 0.5);
}

TEST(F1, IsTheFourierWeightOfTheCosine) {
  // (1/L) int (1 + cos(2 pi x/L))/2 exp(-i pi alpha x/L) dx over [0, 2L)
  const int n = 64;
  for (int a = -4; a <= 4; ++a) {
    double re = 0.0;
    for (int k = 0; k < n; ++k) {
      const double x = 2.0 * k / n;
      re += 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * x)) * std::cos(std::numbers::pi * a * x);
    }
    EXPECT_NEAR(re * 2.0 / n / 2.0, f1(a).value(), 1e-14) << a;
  }
}

TEST(Potential, CosineValues) {
  const ModelParams p;
  const PotentialCosine v(p);
  EXPECT_DOUBLE_EQ(v(0.0), p.coupling / p.box_length);
  EXPECT_NEAR(v(p.box_length / 2), 0.0, 1e-18);
}

TEST(Hamiltonian1D, MatchesPositionSpaceQuadrature) {
  ModelParams p;
  p.heavy_cutoff = 3;
  const MatrixElementRule1D rule(p);
  const auto sector = enumerate_basis_1d(p);
  for (std::size_t i = 0; i < sector.dim(); ++i)
    for (std::size_t j = 0; j < sector.dim(); ++j) {
      const double a = rule.element(sector[i], sector[j]);
      const double b = oracle::plane_wave_element_1d(sector[i], sector[j], p, 16);
      ASSERT_NEAR(a, b, 1e-11 * (1.0 + std::abs(b))) << i << "," << j;
    }
}

TEST(Hamiltonian1D, RawScaleDividesByL) {
  ModelParams scaled;
  ModelParams raw;
  raw.scaling = Scaling::raw;
  const MatrixElementRule1D a(scaled), b(raw);
  const BasisState1D s{1, -2, 1}, t{0, -1, 1};
  EXPECT_NEAR(a.element(s, t), scaled.box_length * b.element(s, t), 1e-12);
  EXPECT_NEAR(a.element(s, s), scaled.box_length * b.element(s, s), 1e-9);
}

TEST(Hamiltonian1D, SparseSymmetricAndBoundedRows) {
  const ModelParams p;
  const MatrixElementRule1D rule(p);
  const auto sector = enumerate_basis_1d(p);
  const auto h = build_hamiltonian_1d(sector, rule);
  EXPECT_EQ(h.dim(), 729u);
  EXPECT_LE(h.max_row_nonzeros(), 7u);
  EXPECT_EQ(h.max_asymmetry(), 0.0);
  const auto dense = dense_hamiltonian_1d(sector, rule);
  for (std::size_t i = 0; i < sector.dim(); i += 37)
    for (std::size_t j = 0; j < sector.dim(); ++j)
      EXPECT_EQ(dense(i, j), rule.element(sector[i], sector[j]));
}

TEST(Hamiltonian1D, ApplyMatchesDense) {
  ModelParams p;
  p.heavy_cutoff = 6;
  const MatrixElementRule1D rule(p);
  const auto sector = enumerate_basis_1d(p);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::vector<double> x(sector.dim());
  for (auto& v : x) v = normal(rng);
  const auto y = apply_hamiltonian_1d(sector, rule, x);
  const Eigen::VectorXd ref =
      dense_hamiltonian_1d(sector, rule) * Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], ref(i), 1e-10 * (1 + std::abs(ref(i))));
  std::vector<double> bad(3);
  EXPECT_THROW(apply_hamiltonian_1d(sector, rule, bad), DimensionMismatch);
}

TEST(Hamiltonian1D, DiagonalKinetic) {
  const ModelParams p;
  const MatrixElementRule1D rule(p);
  const double k = 2.0 * std::numbers::pi / p.box_length;
  const BasisState1D s{2, -1, -1};
  EXPECT_NEAR(rule.kinetic(s), p.box_length * k * k * (4 + 1 + 1 / p.gamma), 1e-12);
}
