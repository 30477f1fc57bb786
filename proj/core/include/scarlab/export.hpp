#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "scarlab/classical.hpp"
#include "scarlab/eigensolve.hpp"
#include "scarlab/linear_operator.hpp"
#include "scarlab/scar_estimates.hpp"
#include "scarlab/wavefunction.hpp"

namespace scarlab {

/// Shortest form that round-trips: 17 significant digits.
std::string format_double(double x);

/// index,energy,residual[,band][,parity]
void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum,
                        const std::vector<Band>& bands = {}, const std::string& parity = {});
void write_bands_csv(std::ostream& os, const std::vector<Band>& bands);
void write_triplets_csv(std::ostream& os, const CsrOperator& op);
/// |Psi|^2 as a matrix: header row of eta nodes, then one row per r node.
void write_grid_csv(std::ostream& os, const WavefunctionGrid& grid);
void write_radial_density_csv(std::ostream& os, const RadialDensity3D& density);
void write_projection_csv(std::ostream& os, const PairProjection& projection);
void write_autocorrelation_csv(std::ostream& os, const AutocorrelationSeries& series);
void write_spectral_density_csv(std::ostream& os, const AutocorrelationSeries& series);
void write_trajectory_csv(std::ostream& os, const Trajectory1D& trajectory);
void write_trajectory_csv(std::ostream& os, const Trajectory3D& trajectory);
/// orbit,side,t,r1,eta2 polylines of planar orbits.
void write_phase_portrait_csv(std::ostream& os, const std::vector<Trajectory3D>& orbits,
                              const std::vector<std::string>& side_labels);

/// Binary eigenvector file: magic, dimension, count, eigenvalues, then the
/// column-major coefficient matrix, all little-endian.
void write_eigenvectors(const std::string& path, const Spectrum& spectrum);
Spectrum read_eigenvectors(const std::string& path);

std::string comparison_report_json(const ComparisonReport& report);

}  // namespace scarlab
