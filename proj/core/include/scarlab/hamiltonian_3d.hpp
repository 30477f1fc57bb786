#pragma once

#include <Eigen/Dense>

#include "scarlab/basis.hpp"
#include "scarlab/linear_operator.hpp"
#include "scarlab/params.hpp"

namespace scarlab {

/// rho = 2 (3 / 4 pi)^(1/3): diameter of the sphere with the cell's volume,
/// in units of L.
double form_factor_rho();

/// Coulomb form factor f2(|a|) = (1 - cos(pi rho |a|)) / (2 pi |a|), with the
/// continuous limit f2(0) = 0.
double f2(double alpha_norm);

class MatrixElementRule3D {
 public:
  explicit MatrixElementRule3D(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  double rho() const { return rho_; }
  double energy_scale() const { return scale_; }
  double kinetic(const BasisState3D& s) const;
  double element(const BasisState3D& bra, const BasisState3D& ket) const;

 private:
  ModelParams params_;
  double rho_;
  double scale_;
};

double matrix_element_3d(const BasisState3D& bra, const BasisState3D& ket,
                         const MatrixElementRule3D& rule);

/// Exchange-symmetrized element; exactly 0 across parities.
double symmetrized_element_3d(const SymmetrizedState3D& bra, const SymmetrizedState3D& ket,
                              const MatrixElementRule3D& rule);

/// Sparse sector Hamiltonian. The pattern comes from enumerating momentum
/// transfers q with |q|^2 <= 4 cutoff_sq in each interaction channel.
CsrOperator build_hamiltonian_3d(const Sector3D& sector, const MatrixElementRule3D& rule);

/// Projects a plain sector Hamiltonian onto one parity block.
CsrOperator build_symmetrized_hamiltonian_3d(const Sector3D& sector,
                                             const SymmetrizedSector3D& block,
                                             const CsrOperator& plain);

Eigen::MatrixXd dense_hamiltonian_3d(const Sector3D& sector, const MatrixElementRule3D& rule);
Eigen::MatrixXd dense_symmetrized_hamiltonian_3d(const SymmetrizedSector3D& block,
                                                 const MatrixElementRule3D& rule);

/// Bytes for the CSR arrays of a sector of dimension `dim` with the given
/// mean number of nonzeros per row.
std::size_t csr_bytes(std::size_t dim, double mean_row_nonzeros);

}  // namespace scarlab
