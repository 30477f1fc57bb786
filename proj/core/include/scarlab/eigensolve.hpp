#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scarlab/basis.hpp"
#include "scarlab/hamiltonian_1d.hpp"
#include "scarlab/hamiltonian_3d.hpp"
#include "scarlab/linear_operator.hpp"

namespace scarlab {

/// Eigenpairs of one sector block, eigenvalues ascending. Column i of
/// `eigenvectors` holds the coefficients c_n of pair i in the sector basis.
struct Spectrum {
  std::string sector_key;
  std::vector<double> eigenvalues;
  Eigen::MatrixXd eigenvectors;
  std::vector<double> residuals;

  std::size_t size() const { return eigenvalues.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(eigenvectors.rows()); }
  std::vector<double> eigenvector(std::size_t i) const;
};

struct DenseOptions {
  std::size_t dense_threshold = 4096;
  /// Eigenvalues closer than this (relative to the spectral radius) are
  /// treated as one degenerate cluster.
  double degeneracy_tolerance = 1e-11;
};

/// Full diagonalization. Throws ResourceLimitError above the dense threshold.
Spectrum solve_dense(const Eigen::MatrixXd& h, std::string key = {}, const DenseOptions& opts = {});
Spectrum solve_dense(const CsrOperator& h, std::string key = {}, const DenseOptions& opts = {});
Spectrum solve_dense(const Sector1D& sector, const MatrixElementRule1D& rule,
                     const DenseOptions& opts = {});

struct EnergyWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct IterativeOptions {
  std::size_t count = 6;
  /// When set, target the eigenvalues nearest the window centre and keep
  /// those inside it.
  std::optional<EnergyWindow> window;
  std::uint64_t seed = 0x5CA7A11ULL;
  /// Krylov subspace size; 0 picks max(2 count + 20, 40).
  std::size_t krylov_dim = 0;
  std::size_t max_restarts = 2000;
  /// Convergence target for residual norms, relative to the spectral radius.
  double tolerance = 1e-11;
  double degeneracy_tolerance = 1e-11;
};

/// Thick-restart Lanczos with full reorthogonalization. Converged pairs are
/// locked and the search is repeated from fresh start vectors in their
/// orthogonal complement until no lower eigenvalue appears, so degenerate
/// multiplets are reported in full. Throws NonConvergence.
Spectrum solve_iterative(const LinearOperator& op, std::string key = {},
                         const IterativeOptions& opts = {});

/// Rotates each degenerate cluster onto the basis obtained by projecting
/// the lexicographically earliest basis directions, and fixes signs so the
/// first dominant component is positive.
void canonicalize_eigenvectors(Spectrum& spectrum, double absolute_tolerance);

/// ||H v - E v|| for every pair.
std::vector<double> residual_norms(const LinearOperator& op, const Spectrum& spectrum);

struct Band {
  int id = 0;  // 1-based from the bottom of the spectrum
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
  double head = 0.0;
  double top = 0.0;

  std::size_t count() const { return last - first + 1; }
  bool contains(std::size_t i) const { return i >= first && i <= last; }
};

/// Splits ascending eigenvalues at gaps larger than `gap_threshold`.
std::vector<Band> assemble_bands(std::span<const double> eigenvalues, double gap_threshold);
std::vector<Band> assemble_bands(const Spectrum& spectrum, double gap_threshold);

}  // namespace scarlab
