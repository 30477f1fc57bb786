#include "scarlab/hamiltonian_1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "scarlab/errors.hpp"

namespace scarlab {

Rational f1(int alpha) {
  const long q = f1_quarters(alpha);
  if (q == 0) return {0, 1};
  const long d = std::gcd(q, 4L);
  return {q / d, 4 / d};
}

double PotentialCosine::operator()(double x) const {
  return g_ / (2.0 * l_) * (1.0 + std::cos(2.0 * std::numbers::pi * x / l_));
}

MatrixElementRule1D::MatrixElementRule1D(const ModelParams& params)
    : params_(params), scale_(params.energy_scale()) {
  params_.validate();
}

double MatrixElementRule1D::kinetic(const BasisState1D& s) const {
  const double l = params_.box_length;
  const double k2 = 4.0 * std::numbers::pi * std::numbers::pi / (l * l);
  const double n1 = s.n1, n2 = s.n2, p = s.p;
  return scale_ * k2 * (n1 * n1 + n2 * n2 + p * p / params_.gamma);
}

double MatrixElementRule1D::element(const BasisState1D& bra, const BasisState1D& ket) const {
  const int d1 = ket.n1 - bra.n1;
  const int d2 = ket.n2 - bra.n2;
  const int dp = ket.p - bra.p;

  double value = 0.0;
  if (d1 == 0 && d2 == 0 && dp == 0) value += kinetic(ket);

  // Interaction terms in units of g / (4L): + heavy-heavy, - two heavy-light.
  int quarters = 0;
  if (dp == 0 && d1 + d2 == 0) quarters += f1_quarters(d1 - d2);
  if (d2 == 0 && d1 + dp == 0) quarters -= f1_quarters(d1 - dp);
  if (d1 == 0 && dp + d2 == 0) quarters -= f1_quarters(dp - d2);
  if (quarters != 0) {
    value += scale_ * params_.coupling / params_.box_length * (quarters / 4.0);
  }
  return value;
}

double matrix_element_1d(const BasisState1D& bra, const BasisState1D& ket,
                         const MatrixElementRule1D& rule) {
  return rule.element(bra, ket);
}

CsrOperator build_hamiltonian_1d(const Sector1D& sector, const MatrixElementRule1D& rule) {
  std::vector<CsrOperator::Triplet> trips;
  trips.reserve(sector.dim() * 7);
  std::vector<std::size_t> partners;
  for (std::size_t col = 0; col < sector.dim(); ++col) {
    const auto& ket = sector[col];
    partners.clear();
    partners.push_back(col);
    for (int q : {-1, 1}) {
      for (const BasisState1D bra : {BasisState1D{ket.n1 + q, ket.n2 - q, ket.p},
                                     BasisState1D{ket.n1 + q, ket.n2, ket.p - q},
                                     BasisState1D{ket.n1, ket.n2 - q, ket.p + q}}) {
        if (const auto row = sector.find(bra)) partners.push_back(*row);
      }
    }
    std::sort(partners.begin(), partners.end());
    partners.erase(std::unique(partners.begin(), partners.end()), partners.end());
    for (auto row : partners) {
      const double v = rule.element(sector[row], ket);
      if (v != 0.0)
        trips.push_back({static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(col), v});
    }
  }
  return CsrOperator(sector.dim(), std::move(trips));
}

Eigen::MatrixXd dense_hamiltonian_1d(const Sector1D& sector, const MatrixElementRule1D& rule) {
  return build_hamiltonian_1d(sector, rule).to_dense();
}

std::vector<double> apply_hamiltonian_1d(const Sector1D& sector, const MatrixElementRule1D& rule,
                                         std::span<const double> x) {
  if (x.size() != sector.dim())
    throw DimensionMismatch("vector of size " + std::to_string(x.size()) +
                            " applied to sector of dimension " + std::to_string(sector.dim()));
  return build_hamiltonian_1d(sector, rule)(x);
}

}  // namespace scarlab
