#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace scarlab {

/// A real symmetric operator known only through its action on vectors.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t dim() const = 0;
  /// y = A x. Throws DimensionMismatch on size mismatch.
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;

  std::vector<double> operator()(std::span<const double> x) const;
};

/// Compressed-row storage of the reachable partner states of every row.
class CsrOperator final : public LinearOperator {
 public:
  struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    double value;
  };

  CsrOperator() = default;
  /// Duplicate (row, col) entries are summed; zeros are dropped.
  CsrOperator(std::size_t dim, std::vector<Triplet> triplets);

  std::size_t dim() const override { return dim_; }
  void apply(std::span<const double> x, std::span<double> y) const override;

  std::size_t nonzeros() const { return values_.size(); }
  std::size_t max_row_nonzeros() const;
  double mean_row_nonzeros() const;
  double max_asymmetry() const;

  std::span<const std::uint32_t> row_cols(std::size_t row) const;
  std::span<const double> row_values(std::size_t row) const;
  double diagonal(std::size_t row) const;

  Eigen::MatrixXd to_dense() const;
  std::vector<Triplet> triplets() const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
};

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(Eigen::MatrixXd m) : m_(std::move(m)) {}
  std::size_t dim() const override { return static_cast<std::size_t>(m_.rows()); }
  void apply(std::span<const double> x, std::span<double> y) const override;
  const Eigen::MatrixXd& matrix() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

}  // namespace scarlab
