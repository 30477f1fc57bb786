#include "scarlab/linear_operator.hpp"

#include <algorithm>
#include <cmath>

#include "scarlab/errors.hpp"

namespace scarlab {

std::vector<double> LinearOperator::operator()(std::span<const double> x) const {
  std::vector<double> y(dim());
  apply(x, y);
  return y;
}

CsrOperator::CsrOperator(std::size_t dim, std::vector<Triplet> triplets) : dim_(dim) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(dim + 1, 0);
  cols_.reserve(triplets.size());
  values_.reserve(triplets.size());
  std::size_t i = 0;
  for (std::size_t row = 0; row < dim; ++row) {
    while (i < triplets.size() && triplets[i].row == row) {
      const auto col = triplets[i].col;
      if (col >= dim) throw DimensionMismatch("triplet column out of range");
      double v = 0.0;
      while (i < triplets.size() && triplets[i].row == row && triplets[i].col == col) {
        v += triplets[i].value;
        ++i;
      }
      if (v != 0.0) {
        cols_.push_back(col);
        values_.push_back(v);
      }
    }
    row_ptr_[row + 1] = cols_.size();
  }
  if (i != triplets.size()) throw DimensionMismatch("triplet row out of range");
}

void CsrOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw DimensionMismatch("operator of dimension " + std::to_string(dim_) +
                            " applied to vector of size " + std::to_string(x.size()));
  for (std::size_t row = 0; row < dim_; ++row) {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) acc += values_[k] * x[cols_[k]];
    y[row] = acc;
  }
}

std::size_t CsrOperator::max_row_nonzeros() const {
  std::size_t m = 0;
  for (std::size_t r = 0; r < dim_; ++r) m = std::max(m, row_ptr_[r + 1] - row_ptr_[r]);
  return m;
}

double CsrOperator::mean_row_nonzeros() const {
  return dim_ == 0 ? 0.0 : static_cast<double>(nonzeros()) / static_cast<double>(dim_);
}

std::span<const std::uint32_t> CsrOperator::row_cols(std::size_t row) const {
  return {cols_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
}

std::span<const double> CsrOperator::row_values(std::size_t row) const {
  return {values_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
}

double CsrOperator::diagonal(std::size_t row) const {
  const auto cols = row_cols(row);
  const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<std::uint32_t>(row));
  if (it == cols.end() || *it != row) return 0.0;
  return row_values(row)[static_cast<std::size_t>(it - cols.begin())];
}

double CsrOperator::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    const auto cols = row_cols(r);
    const auto vals = row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto tc = row_cols(cols[k]);
      const auto it = std::lower_bound(tc.begin(), tc.end(), static_cast<std::uint32_t>(r));
      const double mirror = (it != tc.end() && *it == r)
                                ? row_values(cols[k])[static_cast<std::size_t>(it - tc.begin())]
                                : 0.0;
      worst = std::max(worst, std::abs(vals[k] - mirror));
    }
  }
  return worst;
}

Eigen::MatrixXd CsrOperator::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_),
                                            static_cast<Eigen::Index>(dim_));
  for (std::size_t r = 0; r < dim_; ++r) {
    const auto cols = row_cols(r);
    const auto vals = row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols[k])) = vals[k];
  }
  return m;
}

std::vector<CsrOperator::Triplet> CsrOperator::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nonzeros());
  for (std::size_t r = 0; r < dim_; ++r) {
    const auto cols = row_cols(r);
    const auto vals = row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k)
      out.push_back({static_cast<std::uint32_t>(r), cols[k], vals[k]});
  }
  return out;
}

void DenseOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dim() || y.size() != dim())
    throw DimensionMismatch("dense operator applied to vector of wrong size");
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  yv.noalias() = m_ * xv;
}

}  // namespace scarlab
