#include "scarlab/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include "scarlab/errors.hpp"

namespace scarlab {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::span<double> as_span(VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

double spectral_radius(const std::vector<double>& values) {
  double r = 0.0;
  for (double v : values) r = std::max(r, std::abs(v));
  return r;
}

/// (A - shift)^2, used to turn interior targets into extremal ones.
class FoldedOperator final : public LinearOperator {
 public:
  FoldedOperator(const LinearOperator& a, double shift) : a_(a), shift_(shift), tmp_(a.dim()) {}
  std::size_t dim() const override { return a_.dim(); }
  void apply(std::span<const double> x, std::span<double> y) const override {
    a_.apply(x, tmp_);
    for (std::size_t i = 0; i < tmp_.size(); ++i) tmp_[i] -= shift_ * x[i];
    a_.apply(tmp_, y);
    for (std::size_t i = 0; i < tmp_.size(); ++i) y[i] -= shift_ * tmp_[i];
  }

 private:
  const LinearOperator& a_;
  double shift_;
  mutable std::vector<double> tmp_;
};

/// Removes the components of w along the columns of `locked` and of
/// basis(:, 0..ncols). Two classical Gram-Schmidt passes. Returns the
/// accumulated coefficients along `basis`.
VectorXd orthogonalize(VectorXd& w, const MatrixXd& locked, const MatrixXd& basis, Index ncols) {
  VectorXd h = VectorXd::Zero(ncols);
  for (int pass = 0; pass < 2; ++pass) {
    if (locked.cols() > 0) w.noalias() -= locked * (locked.transpose() * w);
    if (ncols > 0) {
      const VectorXd c = basis.leftCols(ncols).transpose() * w;
      w.noalias() -= basis.leftCols(ncols) * c;
      h += c;
    }
  }
  return h;
}

struct RitzResult {
  std::vector<double> values;
  MatrixXd vectors;
  double scale = 0.0;
};

/// Random unit vector orthogonal to `locked` and the first `ncols` basis
/// columns; empty if that complement is numerically exhausted.
std::optional<VectorXd> fresh_direction(std::mt19937_64& rng, const MatrixXd& locked,
                                        const MatrixXd& basis, Index ncols, Index n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int attempt = 0; attempt < 4; ++attempt) {
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v(i) = dist(rng);
    const double before = v.norm();
    orthogonalize(v, locked, basis, ncols);
    const double after = v.norm();
    if (after > 1e-8 * before) return VectorXd(v / after);
  }
  return std::nullopt;
}

/// Thick-restart Lanczos for the `want` smallest eigenpairs of `op` on the
/// orthogonal complement of `locked`.
RitzResult lanczos_smallest(const LinearOperator& op, const MatrixXd& locked, std::size_t want,
                            const IterativeOptions& opts, std::mt19937_64& rng) {
  const auto n = static_cast<Index>(op.dim());
  const Index free_dim = n - locked.cols();
  const auto w_want = static_cast<Index>(want);
  Index m = opts.krylov_dim > 0 ? static_cast<Index>(opts.krylov_dim)
                                : std::max<Index>(2 * w_want + 20, 40);
  m = std::min(m, free_dim);
  if (w_want > m) throw std::invalid_argument("requested more eigenpairs than the space holds");

  MatrixXd basis(n, m);
  MatrixXd t = MatrixXd::Zero(m, m);
  VectorXd resid(n);
  double beta_last = 0.0;

  auto start = fresh_direction(rng, locked, basis, 0, n);
  if (!start) throw NumericalError("no start vector available in the deflated space");
  basis.col(0) = *start;
  Index filled = 0;  // columns whose operator image has been taken

  VectorXd w(n);
  double scale = 0.0;
  std::vector<double> best(want, std::numeric_limits<double>::infinity());

  for (std::size_t restart = 0; restart <= opts.max_restarts; ++restart) {
    Index size = m;
    for (Index j = filled; j < m; ++j) {
      VectorXd v = basis.col(j);
      op.apply(as_span(v), as_span(w));
      const VectorXd h = orthogonalize(w, locked, basis, j + 1);
      t.block(0, j, j + 1, 1) = h;
      t.block(j, 0, 1, j + 1) = h.transpose();
      const double beta = w.norm();
      scale = std::max(scale, std::abs(h(j)) + beta);
      const bool breakdown = beta <= 1e-13 * std::max(scale, 1e-300);
      if (j + 1 < m) {
        if (breakdown) {
          auto fresh = fresh_direction(rng, locked, basis, j + 1, n);
          if (!fresh) {
            size = j + 1;
            beta_last = 0.0;
            break;
          }
          basis.col(j + 1) = *fresh;
          t(j + 1, j) = t(j, j + 1) = 0.0;
        } else {
          basis.col(j + 1) = w / beta;
          t(j + 1, j) = t(j, j + 1) = beta;
        }
      } else {
        resid = w;
        beta_last = breakdown ? 0.0 : beta;
      }
    }

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(t.topLeftCorner(size, size));
    const VectorXd& theta = es.eigenvalues();
    const MatrixXd& y = es.eigenvectors();
    scale = std::max({scale, std::abs(theta(0)), std::abs(theta(size - 1))});
    const double tol = opts.tolerance * std::max(scale, 1e-300);

    bool all = true;
    for (Index i = 0; i < w_want; ++i) {
      const double r = std::abs(beta_last * y(size - 1, i));
      best[static_cast<std::size_t>(i)] = std::min(best[static_cast<std::size_t>(i)], r);
      if (r > tol) all = false;
    }
    if (all || size < m) {
      const Index got = std::min(w_want, size);
      RitzResult out;
      out.scale = scale;
      out.values.assign(theta.data(), theta.data() + got);
      out.vectors = basis.leftCols(size) * y.leftCols(got);
      for (Index i = 0; i < got; ++i) out.vectors.col(i).normalize();
      return out;
    }

    const Index keep = std::min<Index>(w_want + (size - w_want) / 2, size - 1);
    const MatrixXd kept = basis.leftCols(size) * y.leftCols(keep);
    basis.leftCols(keep) = kept;
    t.setZero();
    for (Index i = 0; i < keep; ++i) {
      t(i, i) = theta(i);
      t(keep, i) = t(i, keep) = beta_last * y(size - 1, i);
    }
    basis.col(keep) = resid / beta_last;
    filled = keep;
  }
  throw NonConvergence("Lanczos did not converge within " + std::to_string(opts.max_restarts) +
                           " restarts",
                       best);
}

}  // namespace

std::vector<double> Spectrum::eigenvector(std::size_t i) const {
  const auto col = eigenvectors.col(static_cast<Index>(i));
  return {col.data(), col.data() + col.size()};
}

std::vector<double> residual_norms(const LinearOperator& op, const Spectrum& spectrum) {
  std::vector<double> out(spectrum.size());
  VectorXd v(static_cast<Index>(op.dim()));
  VectorXd hv(static_cast<Index>(op.dim()));
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    v = spectrum.eigenvectors.col(static_cast<Index>(i));
    op.apply(as_span(v), as_span(hv));
    out[i] = (hv - spectrum.eigenvalues[i] * v).norm();
  }
  return out;
}

void canonicalize_eigenvectors(Spectrum& spectrum, double absolute_tolerance) {
  MatrixXd& vecs = spectrum.eigenvectors;
  const auto& vals = spectrum.eigenvalues;
  std::size_t a = 0;
  while (a < vals.size()) {
    std::size_t b = a + 1;
    while (b < vals.size() && vals[b] - vals[b - 1] <= absolute_tolerance) ++b;
    const auto d = static_cast<Index>(b - a);
    MatrixXd remaining = vecs.middleCols(static_cast<Index>(a), d);
    for (Index k = 0; k < d; ++k) {
      const VectorXd weight = remaining.rowwise().squaredNorm();
      const double cutoff = 0.5 * weight.maxCoeff();
      Index j = 0;
      while (weight(j) < cutoff) ++j;
      const VectorXd z = remaining.row(j).transpose() / std::sqrt(weight(j));
      vecs.col(static_cast<Index>(a) + k) = remaining * z;
      if (k + 1 < d) {
        Eigen::HouseholderQR<MatrixXd> qr(z);
        const MatrixXd q = qr.householderQ();
        remaining = (remaining * q.rightCols(q.cols() - 1)).eval();
      }
    }
    a = b;
  }
}

Spectrum solve_dense(const MatrixXd& h, std::string key, const DenseOptions& opts) {
  const auto n = static_cast<std::size_t>(h.rows());
  if (h.rows() != h.cols()) throw DimensionMismatch("dense solve needs a square matrix");
  if (n > opts.dense_threshold) {
    throw ResourceLimitError("block of dimension " + std::to_string(n) +
                                 " exceeds the dense threshold " +
                                 std::to_string(opts.dense_threshold) +
                                 "; use the iterative solver",
                             n * n * sizeof(double),
                             opts.dense_threshold * opts.dense_threshold * sizeof(double));
  }
  Spectrum s;
  s.sector_key = std::move(key);
  if (n == 0) return s;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  s.eigenvectors = es.eigenvectors();
  canonicalize_eigenvectors(s, opts.degeneracy_tolerance * std::max(spectral_radius(s.eigenvalues), 1e-300));
  s.residuals = residual_norms(DenseOperator(h), s);
  return s;
}

Spectrum solve_dense(const CsrOperator& h, std::string key, const DenseOptions& opts) {
  if (h.dim() > opts.dense_threshold) {
    throw ResourceLimitError("block of dimension " + std::to_string(h.dim()) +
                                 " exceeds the dense threshold " +
                                 std::to_string(opts.dense_threshold) +
                                 "; use the iterative solver",
                             h.dim() * h.dim() * sizeof(double),
                             opts.dense_threshold * opts.dense_threshold * sizeof(double));
  }
  Spectrum s = solve_dense(h.to_dense(), std::move(key), opts);
  s.residuals = residual_norms(h, s);
  return s;
}

Spectrum solve_dense(const Sector1D& sector, const MatrixElementRule1D& rule,
                     const DenseOptions& opts) {
  return solve_dense(build_hamiltonian_1d(sector, rule), sector.key(), opts);
}

Spectrum solve_iterative(const LinearOperator& op, std::string key,
                         const IterativeOptions& opts) {
  if (opts.count < 1) throw std::invalid_argument("iterative solve needs count >= 1");
  const auto n = static_cast<Index>(op.dim());
  const std::size_t count = std::min<std::size_t>(opts.count, op.dim());
  std::mt19937_64 rng(opts.seed);

  std::optional<FoldedOperator> folded;
  double shift = 0.0;
  if (opts.window) {
    if (!(opts.window->hi >= opts.window->lo)) throw std::invalid_argument("empty energy window");
    shift = 0.5 * (opts.window->lo + opts.window->hi);
    folded.emplace(op, shift);
  }
  const LinearOperator& target = folded ? static_cast<const LinearOperator&>(*folded) : op;

  MatrixXd locked(n, 0);
  std::vector<double> values;
  double scale = 0.0;

  auto lock = [&](double value, const VectorXd& vec) {
    locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
    locked.col(locked.cols() - 1) = vec;
    values.push_back(value);
  };

  for (std::size_t round = 0; round < 4 * count + 8; ++round) {
    const bool verifying = values.size() >= count;
    if (static_cast<Index>(values.size()) >= n) break;
    const std::size_t want =
        std::min<std::size_t>(verifying ? 1 : count - values.size(), op.dim() - values.size());
    RitzResult r = lanczos_smallest(target, locked, want, opts, rng);
    scale = std::max(scale, r.scale);
    if (!verifying) {
      for (std::size_t i = 0; i < r.values.size(); ++i)
        lock(r.values[i], r.vectors.col(static_cast<Index>(i)));
      continue;
    }
    if (r.values.empty()) break;
    const auto worst = std::max_element(values.begin(), values.end());
    const double margin = opts.degeneracy_tolerance * std::max(scale, 1e-300);
    if (!(r.values[0] < *worst - margin)) break;
    const auto drop = static_cast<Index>(worst - values.begin());
    const Index last = locked.cols() - 1;
    locked.col(drop) = locked.col(last);
    values[static_cast<std::size_t>(drop)] = values.back();
    values.pop_back();
    locked.conservativeResize(Eigen::NoChange, last);
    lock(r.values[0], r.vectors.col(0));
  }

  // Rayleigh-Ritz on the locked subspace with the original operator.
  MatrixXd image(n, locked.cols());
  {
    VectorXd v(n), hv(n);
    for (Index i = 0; i < locked.cols(); ++i) {
      v = locked.col(i);
      op.apply(as_span(v), as_span(hv));
      image.col(i) = hv;
    }
  }
  MatrixXd g = locked.transpose() * image;
  g = 0.5 * (g + g.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
  MatrixXd vecs = locked * es.eigenvectors();

  std::vector<Index> order(static_cast<std::size_t>(vecs.cols()));
  std::iota(order.begin(), order.end(), Index{0});
  if (opts.window) {
    // A folded cluster split by the count limit gives mixed Ritz vectors
    // whose Ritz values can land inside the window; drop those.
    const MatrixXd av = image * es.eigenvectors();
    const double radius = std::sqrt(std::max(scale, 0.0)) + std::abs(shift);
    std::vector<Index> inside;
    for (Index i : order) {
      const double e = es.eigenvalues()(i);
      const double res = (av.col(i) - e * vecs.col(i)).norm();
      if (e >= opts.window->lo && e <= opts.window->hi && res <= 1e-6 * std::max(radius, 1e-300))
        inside.push_back(i);
    }
    order = std::move(inside);
  }

  Spectrum s;
  s.sector_key = std::move(key);
  s.eigenvectors.resize(n, static_cast<Index>(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    s.eigenvalues.push_back(es.eigenvalues()(order[i]));
    s.eigenvectors.col(static_cast<Index>(i)) = vecs.col(order[i]).normalized();
  }
  double radius = scale;
  if (folded) radius = std::sqrt(scale) + std::abs(shift);
  canonicalize_eigenvectors(s, opts.degeneracy_tolerance * std::max(radius, 1e-300));
  s.residuals = residual_norms(op, s);
  return s;
}

std::vector<Band> assemble_bands(std::span<const double> eigenvalues, double gap_threshold) {
  std::vector<Band> bands;
  if (eigenvalues.empty()) return bands;
  Band cur{1, 0, 0, eigenvalues[0], eigenvalues[0]};
  for (std::size_t i = 1; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] - eigenvalues[i - 1] > gap_threshold) {
      bands.push_back(cur);
      cur = Band{cur.id + 1, i, i, eigenvalues[i], eigenvalues[i]};
    } else {
      cur.last = i;
      cur.top = eigenvalues[i];
    }
  }
  bands.push_back(cur);
  return bands;
}

std::vector<Band> assemble_bands(const Spectrum& spectrum, double gap_threshold) {
  return assemble_bands(std::span<const double>(spectrum.eigenvalues), gap_threshold);
}

}  // namespace scarlab
