#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "scarlab/basis.hpp"
#include "scarlab/linear_operator.hpp"
#include "scarlab/params.hpp"

namespace scarlab {

struct Rational {
  long num = 0;
  long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Fourier weight of the cosine interaction at momentum index alpha:
/// (2 delta_{alpha,0} + delta_{alpha,2} + delta_{alpha,-2}) / 4, reduced.
Rational f1(int alpha);

/// f1(alpha) in units of 1/4; exact integer arithmetic for matrix elements.
constexpr int f1_quarters(int alpha) {
  return alpha == 0 ? 2 : (alpha == 2 || alpha == -2) ? 1 : 0;
}

/// V(x) = (g / 2L) (1 + cos(2 pi x / L)).
class PotentialCosine {
 public:
  explicit PotentialCosine(const ModelParams& params) : g_(params.coupling), l_(params.box_length) {}
  double operator()(double x) const;

 private:
  double g_;
  double l_;
};

/// Matrix elements of the 1D Hamiltonian in the plane-wave basis, in the
/// configured energy scaling.
class MatrixElementRule1D {
 public:
  explicit MatrixElementRule1D(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  double energy_scale() const { return scale_; }
  double kinetic(const BasisState1D& s) const;
  double element(const BasisState1D& bra, const BasisState1D& ket) const;

 private:
  ModelParams params_;
  double scale_;
};

double matrix_element_1d(const BasisState1D& bra, const BasisState1D& ket,
                         const MatrixElementRule1D& rule);

/// Sparse sector Hamiltonian; at most 7 nonzeros per row.
CsrOperator build_hamiltonian_1d(const Sector1D& sector, const MatrixElementRule1D& rule);

Eigen::MatrixXd dense_hamiltonian_1d(const Sector1D& sector, const MatrixElementRule1D& rule);

/// One-shot matrix-free product. Throws DimensionMismatch.
std::vector<double> apply_hamiltonian_1d(const Sector1D& sector, const MatrixElementRule1D& rule,
                                         std::span<const double> x);

}  // namespace scarlab
