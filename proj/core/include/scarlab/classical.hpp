#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "scarlab/params.hpp"

namespace scarlab {

using Vec3d = std::array<double, 3>;

/// Centre-of-mass phase point of the 1D model. R is separated out.
struct ClassicalState {
  double r = 0.0;
  double p_r = 0.0;
  double eta = 0.0;
  double p_eta = 0.0;
  double time = 0.0;
};

struct ClassicalState3D {
  Vec3d r{};
  Vec3d p_r{};
  Vec3d eta{};
  Vec3d p_eta{};
  double time = 0.0;
};

/// Time derivative of a phase point, same layout as the state.
struct StateDerivative {
  double r = 0.0;
  double p_r = 0.0;
  double eta = 0.0;
  double p_eta = 0.0;
};

struct StateDerivative3D {
  Vec3d r{};
  Vec3d p_r{};
  Vec3d eta{};
  Vec3d p_eta{};
  bool near_singularity = false;
};

/// Inverse kinetic coefficients of H_CM = 2 p_r^2 + (2 + gamma) / (2 gamma) p_eta^2 + U.
inline double mass_r() { return 0.25; }
inline double mass_eta(double gamma) { return gamma / (2.0 + gamma); }

/// U(r, eta) = g [V(r) - V(r/2 - eta) - V(-r/2 - eta)], V(x) = (1 + cos(2 pi x / L)) / 2L,
/// multiplied by the configured energy scale.
double effective_potential(double r, double eta, const ModelParams& params);
std::array<double, 2> potential_gradient(double r, double eta, const ModelParams& params);
/// {U_rr, U_r_eta, U_eta_eta}
std::array<double, 3> potential_hessian(double r, double eta, const ModelParams& params);

double cm_hamiltonian(const ClassicalState& s, const ModelParams& params);
StateDerivative hamilton_rhs_1d(const ClassicalState& s, const ModelParams& params);

/// Unit-charge Coulomb model 1/|r| - 1/|r/2 - eta| - 1/|r/2 + eta| with the
/// 3D energy scale.
double cm_hamiltonian_3d(const ClassicalState3D& s, const ModelParams& params);
StateDerivative3D hamilton_rhs_3d(const ClassicalState3D& s, const ModelParams& params,
                                  double singular_distance);

/// One period cell per coordinate. In 1D the move r -> r - L is paired with
/// eta -> eta - L/2 (the lattice translation of one heavy particle), which
/// leaves U unchanged.
void wrap_state(ClassicalState& s, double box_length);
/// Independent wrap of every component into [-L/2, L/2).
int wrap_state(ClassicalState3D& s, double box_length);

struct OrbitEvent {
  enum class Kind { wrap, singularity };
  Kind kind = Kind::wrap;
  double time = 0.0;
  std::size_t step = 0;
  std::string detail;
};

std::string to_string(OrbitEvent::Kind k);

struct IntegratorOptions {
  double dt = 0.0;
  std::size_t steps = 0;
  /// 2 is plain Stormer-Verlet; 4 and 6 are Yoshida compositions of it.
  int order = 6;
  std::size_t record_every = 1;
  bool wrap = true;
  /// Singularity stop at pair distance below this multiple of L (3D).
  double singular_fraction = 1e-6;
};

template <typename State>
struct Trajectory {
  std::vector<State> states;
  std::vector<double> energies;
  std::vector<OrbitEvent> events;
  bool stopped = false;
  std::size_t steps_taken = 0;

  const State& final_state() const { return states.back(); }
  double max_relative_drift() const;
};

using Trajectory1D = Trajectory<ClassicalState>;
using Trajectory3D = Trajectory<ClassicalState3D>;

/// Samples always include the initial and final states.
Trajectory1D integrate_orbit_1d(const ClassicalState& initial, const ModelParams& params,
                                const IntegratorOptions& opts);
Trajectory3D integrate_orbit_3d(const ClassicalState3D& initial, const ModelParams& params,
                                const IntegratorOptions& opts);

enum class CriticalKind { minimum, saddle, maximum, degenerate };
std::string to_string(CriticalKind k);

struct CriticalPoint {
  double r = 0.0;
  double eta = 0.0;
  CriticalKind kind = CriticalKind::degenerate;
  std::array<double, 2> hessian_eigenvalues{};  // ascending
  double gradient_norm = 0.0;                    // in the configured energy scale
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Newton iteration on grad U from each seed, in units of L. Results are
/// wrapped into the cell; non-converged seeds are returned with
/// converged = false.
std::vector<CriticalPoint> find_critical_points(const ModelParams& params,
                                                const std::vector<std::array<double, 2>>& seeds);
/// Seeds at the origin and at (+-L/3, 0).
std::vector<std::array<double, 2>> default_critical_seeds(const ModelParams& params);

struct NormalMode {
  double sigma = 0.0;        // Hessian eigenvalue
  double mass = 0.0;         // effective mass along the eigenvector
  std::array<double, 2> direction{};
  double frequency = 0.0;    // sqrt(|sigma| / mass)
  bool stable = false;
};

/// Quadratic data at a critical point, in raw units (energy scale 1).
struct SaddleAnalysis {
  CriticalPoint point;
  std::array<NormalMode, 2> modes{};
  double energy_scale = 1.0;
  bool degenerate = false;

  /// The stable mode with the largest frequency, if any.
  std::optional<std::size_t> stable_mode() const;
  std::optional<std::size_t> unstable_mode() const;
  double omega() const;        // stable-mode frequency
  double tau() const;          // 2 pi / omega
  double lambda_rate() const;  // sqrt(|sigma_min| / mu)
  double lambda_curvature() const; // |sigma_min|
  /// Shortest 2 pi / frequency among all modes.
  double tau_min() const;
  /// Frequencies and sigmas multiplied by the energy scale, masses divided by it.
  SaddleAnalysis scaled() const;
};

SaddleAnalysis hessian_analysis(const CriticalPoint& point, const ModelParams& params);

/// tau_min / 200 in the scaled time unit.
double select_time_step(const SaddleAnalysis& analysis, double fraction = 1.0 / 200.0);

/// Planar starts (r1, eta2) with zero momenta straddling r1 = 0.
std::vector<ClassicalState3D> planar_seed_ensemble(double box_length, std::size_t count,
                                                   double offset_fraction = 0.02);

}  // namespace scarlab
