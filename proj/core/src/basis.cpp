#include "scarlab/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scarlab/errors.hpp"

namespace scarlab {

namespace {

constexpr int kPackOffset = 512;

std::uint64_t pack_heavy(const BasisState3D& s) {
  std::uint64_t key = 0;
  for (int v : {s.n1[0], s.n1[1], s.n1[2], s.n2[0], s.n2[1], s.n2[2]}) {
    key = (key << 10) | static_cast<std::uint64_t>(v + kPackOffset);
  }
  return key;
}

int isqrt_floor(int v) {
  int r = static_cast<int>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

template <typename State>
std::pair<SymmetrizedSector<State>, SymmetrizedSector<State>> symmetrize_states(
    const std::vector<State>& states) {
  SymmetrizedSector<State> sym{+1, {}};
  SymmetrizedSector<State> anti{-1, {}};
  for (const State& s : states) {
    const State partner = s.exchanged();
    if (s.heavy_coincident()) {
      sym.states.push_back({s, +1, 2.0});
    } else if (s < partner) {
      sym.states.push_back({s, +1, std::sqrt(2.0)});
      anti.states.push_back({s, -1, std::sqrt(2.0)});
    }
  }
  return {std::move(sym), std::move(anti)};
}

}  // namespace

std::string sector_key(int total_momentum) { return "P=" + std::to_string(total_momentum); }

std::string sector_key(const Vec3i& p) {
  return "P=(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "," + std::to_string(p[2]) +
         ")";
}

Sector1D::Sector1D(int total_momentum, std::vector<BasisState1D> states)
    : total_(total_momentum), states_(std::move(states)) {
  std::sort(states_.begin(), states_.end());
  for (const auto& s : states_) {
    if (s.total() != total_) throw std::invalid_argument("state outside sector " + key());
  }
}

std::optional<std::size_t> Sector1D::find(const BasisState1D& s) const {
  const auto it = std::lower_bound(states_.begin(), states_.end(), s);
  if (it == states_.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

Sector3D::Sector3D(Vec3i total_momentum, std::vector<BasisState3D> states)
    : total_(total_momentum), states_(std::move(states)) {
  std::sort(states_.begin(), states_.end());
  index_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const auto& s = states_[i];
    if (s.total() != total_) throw std::invalid_argument("state outside sector " + key());
    for (int v : {s.n1[0], s.n1[1], s.n1[2], s.n2[0], s.n2[1], s.n2[2]}) {
      if (v <= -kPackOffset || v >= kPackOffset)
        throw std::out_of_range("momentum component too large for sector index");
    }
    index_.emplace(pack_heavy(s), static_cast<std::uint32_t>(i));
  }
}

std::optional<std::size_t> Sector3D::find(const BasisState3D& s) const {
  if (s.total() != total_) return std::nullopt;
  for (int v : {s.n1[0], s.n1[1], s.n1[2], s.n2[0], s.n2[1], s.n2[2]}) {
    if (v <= -kPackOffset || v >= kPackOffset) return std::nullopt;
  }
  const auto it = index_.find(pack_heavy(s));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Sector1D enumerate_basis_1d(const ModelParams& params, int total_momentum) {
  if (params.heavy_cutoff < 0) throw ConfigError("heavy_cutoff must be >= 0", "heavy_cutoff");
  const int n = params.heavy_cutoff;
  std::vector<BasisState1D> states;
  states.reserve(static_cast<std::size_t>(2 * n + 1) * (2 * n + 1));
  for (int n1 = -n; n1 <= n; ++n1) {
    for (int n2 = -n; n2 <= n; ++n2) {
      const int p = total_momentum - n1 - n2;
      if (params.light_mode_1d == LightCutoffMode::product_filter && std::abs(p) > n) continue;
      states.push_back({n1, n2, p});
    }
  }
  return Sector1D(total_momentum, std::move(states));
}

std::vector<Vec3i> lattice_vectors(int cutoff_sq) {
  if (cutoff_sq < 0) throw ConfigError("cutoff_sq must be >= 0", "cutoff_sq");
  const int r = isqrt_floor(cutoff_sq);
  std::vector<Vec3i> out;
  for (int x = -r; x <= r; ++x)
    for (int y = -r; y <= r; ++y)
      for (int z = -r; z <= r; ++z)
        if (x * x + y * y + z * z <= cutoff_sq) out.push_back({x, y, z});
  return out;
}

std::size_t full_basis_3d_bytes(int cutoff_sq) {
  const auto m = lattice_vectors(cutoff_sq).size();
  return m * m * m * (sizeof(BasisState3D) + sizeof(std::uint32_t));
}

Sector3D FullBasis3D::sector(const Vec3i& total_momentum) const {
  std::vector<BasisState3D> sel;
  if (const auto it = partition.find(total_momentum); it != partition.end()) {
    sel.reserve(it->second.size());
    for (auto i : it->second) sel.push_back(states[i]);
  }
  return Sector3D(total_momentum, std::move(sel));
}

FullBasis3D enumerate_basis_3d(int cutoff_sq, std::size_t memory_budget_bytes) {
  const std::size_t required = full_basis_3d_bytes(cutoff_sq);
  if (required > memory_budget_bytes) {
    throw ResourceLimitError("3D basis with cutoff_sq=" + std::to_string(cutoff_sq) + " needs " +
                                 std::to_string(required >> 20) + " MiB, budget is " +
                                 std::to_string(memory_budget_bytes >> 20) + " MiB",
                             required, memory_budget_bytes);
  }
  FullBasis3D basis;
  basis.cutoff_sq = cutoff_sq;
  basis.single_particle = lattice_vectors(cutoff_sq);
  const auto& v = basis.single_particle;
  basis.states.reserve(v.size() * v.size() * v.size());
  for (const auto& a : v)
    for (const auto& b : v)
      for (const auto& c : v) basis.states.push_back({a, b, c});
  for (std::size_t i = 0; i < basis.states.size(); ++i) {
    basis.partition[basis.states[i].total()].push_back(static_cast<std::uint32_t>(i));
  }
  return basis;
}

Sector3D enumerate_sector_3d(int cutoff_sq, const Vec3i& total_momentum, LightCutoffMode mode) {
  const auto v = lattice_vectors(cutoff_sq);
  std::vector<BasisState3D> states;
  for (const auto& a : v) {
    for (const auto& b : v) {
      const Vec3i p = total_momentum - a - b;
      if (mode == LightCutoffMode::product_filter && norm_sq(p) > cutoff_sq) continue;
      states.push_back({a, b, p});
    }
  }
  return Sector3D(total_momentum, std::move(states));
}

std::pair<SymmetrizedSector1D, SymmetrizedSector1D> symmetrize_sector(const Sector1D& sector) {
  return symmetrize_states(sector.states());
}

std::pair<SymmetrizedSector3D, SymmetrizedSector3D> symmetrize_sector(const Sector3D& sector) {
  for (const auto& s : sector.states()) {
    if (!sector.find(s.exchanged()))
      throw std::invalid_argument("sector " + sector.key() + " is not closed under exchange");
  }
  return symmetrize_states(sector.states());
}

std::vector<double> expand_symmetrized(const std::vector<double>& coefficients,
                                       const SymmetrizedSector3D& sym, const Sector3D& sector) {
  if (coefficients.size() != sym.dim())
    throw DimensionMismatch("coefficient vector does not match symmetrized sector");
  std::vector<double> plain(sector.dim(), 0.0);
  for (std::size_t a = 0; a < sym.dim(); ++a) {
    const auto& st = sym.states[a];
    const auto i = sector.find(st.base);
    const auto j = sector.find(st.base.exchanged());
    if (!i || !j) throw std::invalid_argument("symmetrized state not in sector");
    plain[*i] += coefficients[a] / st.c;
    plain[*j] += st.parity * coefficients[a] / st.c;
  }
  return plain;
}

}  // namespace scarlab
