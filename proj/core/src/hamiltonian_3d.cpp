#include "scarlab/hamiltonian_3d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "scarlab/errors.hpp"

namespace scarlab {

double form_factor_rho() {
  static const double rho = 2.0 * std::cbrt(3.0 / (4.0 * std::numbers::pi));
  return rho;
}

double f2(double alpha_norm) {
  if (alpha_norm < 0.0) throw std::invalid_argument("f2 needs |alpha| >= 0");
  if (alpha_norm == 0.0) return 0.0;
  // 1 - cos x = 2 sin^2(x/2) avoids cancellation for small |alpha|.
  const double s = std::sin(0.5 * std::numbers::pi * form_factor_rho() * alpha_norm);
  return s * s / (std::numbers::pi * alpha_norm);
}

MatrixElementRule3D::MatrixElementRule3D(const ModelParams& params)
    : params_(params), rho_(form_factor_rho()), scale_(params.energy_scale_3d()) {
  params_.validate();
}

double MatrixElementRule3D::kinetic(const BasisState3D& s) const {
  const double l = params_.box_length;
  const double k2 = 4.0 * std::numbers::pi * std::numbers::pi / (l * l);
  return scale_ * k2 *
         (norm_sq(s.n1) + norm_sq(s.n2) + static_cast<double>(norm_sq(s.p)) / params_.gamma);
}

double MatrixElementRule3D::element(const BasisState3D& bra, const BasisState3D& ket) const {
  const Vec3i d1 = ket.n1 - bra.n1;
  const Vec3i d2 = ket.n2 - bra.n2;
  const Vec3i dp = ket.p - bra.p;
  constexpr Vec3i zero{0, 0, 0};

  double value = 0.0;
  if (d1 == zero && d2 == zero && dp == zero) value += kinetic(ket);

  auto ff = [](const Vec3i& a) { return f2(std::sqrt(static_cast<double>(norm_sq(a)))); };
  double interaction = 0.0;
  if (dp == zero && d1 + d2 == zero) interaction += ff(d1 - d2);
  if (d2 == zero && d1 + dp == zero) interaction -= ff(d1 - dp);
  if (d1 == zero && dp + d2 == zero) interaction -= ff(dp - d2);
  return value + scale_ * interaction / params_.box_length;
}

double matrix_element_3d(const BasisState3D& bra, const BasisState3D& ket,
                         const MatrixElementRule3D& rule) {
  return rule.element(bra, ket);
}

double symmetrized_element_3d(const SymmetrizedState3D& bra, const SymmetrizedState3D& ket,
                              const MatrixElementRule3D& rule) {
  if (bra.parity != ket.parity) return 0.0;
  const BasisState3D bras[2] = {bra.base, bra.base.exchanged()};
  const BasisState3D kets[2] = {ket.base, ket.base.exchanged()};
  const double sb[2] = {1.0, static_cast<double>(bra.parity)};
  const double sk[2] = {1.0, static_cast<double>(ket.parity)};
  double sum = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) sum += sb[a] * sk[b] * rule.element(bras[a], kets[b]);
  return sum / (bra.c * ket.c);
}

CsrOperator build_hamiltonian_3d(const Sector3D& sector, const MatrixElementRule3D& rule) {
  const int cutoff = rule.params().cutoff_sq;
  int max_sq = 0;
  for (const auto& s : sector.states())
    max_sq = std::max({max_sq, norm_sq(s.n1), norm_sq(s.n2), norm_sq(s.p)});
  max_sq = std::max(max_sq, cutoff);
  std::vector<Vec3i> transfers;
  for (const auto& q : lattice_vectors(4 * max_sq))
    if (norm_sq(q) != 0) transfers.push_back(q);

  // Every channel evaluates f2 at |2q|.
  std::vector<double> ff(static_cast<std::size_t>(16 * max_sq + 1), 0.0);
  for (std::size_t k = 1; k < ff.size(); ++k) ff[k] = f2(std::sqrt(static_cast<double>(k)));
  const double coupling = rule.energy_scale() / rule.params().box_length;

  std::vector<CsrOperator::Triplet> trips;
  for (std::size_t col = 0; col < sector.dim(); ++col) {
    const auto& ket = sector[col];
    const auto c = static_cast<std::uint32_t>(col);
    trips.push_back({c, c, rule.kinetic(ket)});
    for (const auto& q : transfers) {
      const double v = coupling * ff[static_cast<std::size_t>(4 * norm_sq(q))];
      if (v == 0.0) continue;
      if (auto r = sector.find({ket.n1 + q, ket.n2 - q, ket.p}))
        trips.push_back({static_cast<std::uint32_t>(*r), c, v});
      if (auto r = sector.find({ket.n1 + q, ket.n2, ket.p - q}))
        trips.push_back({static_cast<std::uint32_t>(*r), c, -v});
      if (auto r = sector.find({ket.n1, ket.n2 - q, ket.p + q}))
        trips.push_back({static_cast<std::uint32_t>(*r), c, -v});
    }
  }
  return CsrOperator(sector.dim(), std::move(trips));
}

CsrOperator build_symmetrized_hamiltonian_3d(const Sector3D& sector,
                                             const SymmetrizedSector3D& block,
                                             const CsrOperator& plain) {
  if (plain.dim() != sector.dim())
    throw DimensionMismatch("plain operator does not match sector");

  struct Image {
    std::uint32_t sym;
    double coef;
  };
  // plain index -> (symmetrized index, amplitude of that plain state in it)
  std::vector<std::vector<Image>> images(sector.dim());
  std::vector<std::array<std::size_t, 2>> reps(block.dim());
  for (std::size_t b = 0; b < block.dim(); ++b) {
    const auto& st = block.states[b];
    const auto i = sector.find(st.base);
    const auto j = sector.find(st.base.exchanged());
    if (!i || !j) throw std::invalid_argument("symmetrized state not in sector");
    reps[b] = {*i, *j};
    const auto bb = static_cast<std::uint32_t>(b);
    if (*i == *j) {
      images[*i].push_back({bb, 2.0 / st.c});
    } else {
      images[*i].push_back({bb, 1.0 / st.c});
      images[*j].push_back({bb, st.parity / st.c});
    }
  }

  std::vector<CsrOperator::Triplet> trips;
  for (std::size_t a = 0; a < block.dim(); ++a) {
    const auto& st = block.states[a];
    const auto [i, j] = reps[a];
    auto accumulate = [&](std::size_t row, double weight) {
      const auto cols = plain.row_cols(row);
      const auto vals = plain.row_values(row);
      for (std::size_t k = 0; k < cols.size(); ++k)
        for (const auto& img : images[cols[k]])
          trips.push_back({static_cast<std::uint32_t>(a), img.sym, weight * vals[k] * img.coef});
    };
    if (i == j) {
      accumulate(i, 2.0 / st.c);
    } else {
      accumulate(i, 1.0 / st.c);
      accumulate(j, st.parity / st.c);
    }
  }
  return CsrOperator(block.dim(), std::move(trips));
}

Eigen::MatrixXd dense_hamiltonian_3d(const Sector3D& sector, const MatrixElementRule3D& rule) {
  const auto n = static_cast<Eigen::Index>(sector.dim());
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      h(i, j) = rule.element(sector[static_cast<std::size_t>(i)], sector[static_cast<std::size_t>(j)]);
  return h;
}

Eigen::MatrixXd dense_symmetrized_hamiltonian_3d(const SymmetrizedSector3D& block,
                                                 const MatrixElementRule3D& rule) {
  const auto n = static_cast<Eigen::Index>(block.dim());
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      h(i, j) = symmetrized_element_3d(block.states[static_cast<std::size_t>(i)],
                                       block.states[static_cast<std::size_t>(j)], rule);
  return h;
}

std::size_t csr_bytes(std::size_t dim, double mean_row_nonzeros) {
  const double nnz = static_cast<double>(dim) * mean_row_nonzeros;
  return static_cast<std::size_t>(nnz * (sizeof(double) + sizeof(std::uint32_t))) +
         (dim + 1) * sizeof(std::size_t);
}

}  // namespace scarlab
