#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scarlab/params.hpp"

namespace scarlab {

using Vec3i = std::array<int, 3>;

inline Vec3i operator+(const Vec3i& a, const Vec3i& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3i operator-(const Vec3i& a, const Vec3i& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline int norm_sq(const Vec3i& a) { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2]; }

/// |n1 n2 p> with heavy momenta n1, n2 and light momentum p (units of 1/L).
struct BasisState1D {
  int n1 = 0;
  int n2 = 0;
  int p = 0;

  int total() const { return n1 + n2 + p; }
  BasisState1D exchanged() const { return {n2, n1, p}; }
  bool heavy_coincident() const { return n1 == n2; }
  auto operator<=>(const BasisState1D&) const = default;
};

struct BasisState3D {
  Vec3i n1{};
  Vec3i n2{};
  Vec3i p{};

  Vec3i total() const { return n1 + n2 + p; }
  BasisState3D exchanged() const { return {n2, n1, p}; }
  bool heavy_coincident() const { return n1 == n2; }
  auto operator<=>(const BasisState3D&) const = default;
};

std::string sector_key(int total_momentum);
std::string sector_key(const Vec3i& total_momentum);

/// States of one total-momentum sector in lexicographic order.
class Sector1D {
 public:
  Sector1D(int total_momentum, std::vector<BasisState1D> states);

  int total_momentum() const { return total_; }
  std::size_t dim() const { return states_.size(); }
  const std::vector<BasisState1D>& states() const { return states_; }
  const BasisState1D& operator[](std::size_t i) const { return states_[i]; }
  std::optional<std::size_t> find(const BasisState1D& s) const;
  std::string key() const { return sector_key(total_); }

 private:
  int total_;
  std::vector<BasisState1D> states_;
};

/// States of one total-momentum sector of the 3D basis, lexicographic on
/// the flattened components (n1, n2, p). Lookup is O(1).
class Sector3D {
 public:
  Sector3D(Vec3i total_momentum, std::vector<BasisState3D> states);

  const Vec3i& total_momentum() const { return total_; }
  std::size_t dim() const { return states_.size(); }
  const std::vector<BasisState3D>& states() const { return states_; }
  const BasisState3D& operator[](std::size_t i) const { return states_[i]; }
  std::optional<std::size_t> find(const BasisState3D& s) const;
  std::string key() const { return sector_key(total_); }

 private:
  Vec3i total_;
  std::vector<BasisState3D> states_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
};

/// 1D sector. Derived mode: all |n1|,|n2| <= heavy_cutoff with p fixed by
/// the total momentum. Product-filter mode additionally requires
/// |p| <= heavy_cutoff.
Sector1D enumerate_basis_1d(const ModelParams& params, int total_momentum = 0);

/// Integer vectors with |n|^2 <= cutoff_sq in lexicographic order.
std::vector<Vec3i> lattice_vectors(int cutoff_sq);

/// The full product-filter 3D basis and its partition by total momentum.
struct FullBasis3D {
  int cutoff_sq = 0;
  std::vector<Vec3i> single_particle;
  std::vector<BasisState3D> states;
  std::map<Vec3i, std::vector<std::uint32_t>> partition;

  Sector3D sector(const Vec3i& total_momentum) const;
};

/// Bytes needed by enumerate_basis_3d for the given cutoff.
std::size_t full_basis_3d_bytes(int cutoff_sq);

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{64} << 20;

/// Enumerates all (n1, n2, p) with each |n|^2 <= cutoff_sq. Throws
/// ResourceLimitError when the estimate exceeds `memory_budget_bytes`.
FullBasis3D enumerate_basis_3d(int cutoff_sq,
                               std::size_t memory_budget_bytes = kDefaultMemoryBudget);

/// One momentum sector of the 3D basis, enumerated without the full basis.
Sector3D enumerate_sector_3d(int cutoff_sq, const Vec3i& total_momentum,
                             LightCutoffMode mode = LightCutoffMode::product_filter);

/// Heavy-exchange eigenstate (|s> + parity |s~>) / c, s~ = s with n1 <-> n2.
template <typename State>
struct SymmetrizedState {
  State base;  // lexicographically smaller of the exchange pair
  int parity = +1;
  double c = 1.0;
};

using SymmetrizedState1D = SymmetrizedState<BasisState1D>;
using SymmetrizedState3D = SymmetrizedState<BasisState3D>;

template <typename State>
struct SymmetrizedSector {
  int parity = +1;
  std::vector<SymmetrizedState<State>> states;

  std::size_t dim() const { return states.size(); }
};

using SymmetrizedSector1D = SymmetrizedSector<BasisState1D>;
using SymmetrizedSector3D = SymmetrizedSector<BasisState3D>;

/// Splits a sector into (symmetric, antisymmetric) parts. Exchange pairs
/// contribute one state to each with c = sqrt(2); n1 == n2 states are
/// symmetric only with c = 2.
std::pair<SymmetrizedSector1D, SymmetrizedSector1D> symmetrize_sector(const Sector1D& sector);
std::pair<SymmetrizedSector3D, SymmetrizedSector3D> symmetrize_sector(const Sector3D& sector);

/// Expands symmetrized-basis coefficients into the plain sector basis.
std::vector<double> expand_symmetrized(const std::vector<double>& coefficients,
                                       const SymmetrizedSector3D& sym, const Sector3D& sector);

}  // namespace scarlab
