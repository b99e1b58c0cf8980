#include "polyhardy/linear_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>

#include "polyhardy/errors.hpp"

namespace polyhardy::numeric {

LinearMap::LinearMap(Index rows, Index cols, Action forward, Action adjoint)
    : rows_(rows),
      cols_(cols),
      forward_(std::make_shared<const Action>(std::move(forward))),
      adjoint_(std::make_shared<const Action>(std::move(adjoint))) {}

LinearMap LinearMap::identity(Index n) {
  auto id = [](const ComplexMatrix& x) { return x; };
  return LinearMap(n, n, id, id);
}

LinearMap LinearMap::zero(Index rows, Index cols) {
  return LinearMap(
      rows, cols, [rows](const ComplexMatrix& x) { return ComplexMatrix::Zero(rows, x.cols()).eval(); },
      [cols](const ComplexMatrix& y) { return ComplexMatrix::Zero(cols, y.cols()).eval(); });
}

LinearMap LinearMap::from_dense(ComplexMatrix m) {
  auto shared = std::make_shared<const ComplexMatrix>(std::move(m));
  return LinearMap(
      shared->rows(), shared->cols(),
      [shared](const ComplexMatrix& x) { return ComplexMatrix(*shared * x); },
      [shared](const ComplexMatrix& y) { return ComplexMatrix(shared->adjoint() * y); });
}

LinearMap LinearMap::coordinate_injection(Index ambient, std::vector<Index> coordinates) {
  auto coords = std::make_shared<const std::vector<Index>>(std::move(coordinates));
  const auto k = static_cast<Index>(coords->size());
  return LinearMap(
      ambient, k,
      [ambient, coords](const ComplexMatrix& x) {
        ComplexMatrix y = ComplexMatrix::Zero(ambient, x.cols());
        for (std::size_t c = 0; c < coords->size(); ++c) y.row((*coords)[c]) = x.row(static_cast<Index>(c));
        return y;
      },
      [coords](const ComplexMatrix& y) {
        ComplexMatrix x(static_cast<Index>(coords->size()), y.cols());
        for (std::size_t c = 0; c < coords->size(); ++c) x.row(static_cast<Index>(c)) = y.row((*coords)[c]);
        return x;
      });
}

ComplexMatrix LinearMap::apply(const ComplexMatrix& x) const {
  if (x.rows() != cols_) throw ContractError("LinearMap::apply: dimension mismatch");
  return (*forward_)(x);
}

ComplexMatrix LinearMap::apply_adjoint(const ComplexMatrix& y) const {
  if (y.rows() != rows_) throw ContractError("LinearMap::apply_adjoint: dimension mismatch");
  return (*adjoint_)(y);
}

LinearMap LinearMap::adjoint() const {
  LinearMap out = *this;
  std::swap(out.rows_, out.cols_);
  std::swap(out.forward_, out.adjoint_);
  return out;
}

ComplexMatrix LinearMap::to_dense(Index cap) const {
  require_within_cap(rows_, cols_, cap, "LinearMap::to_dense");
  return apply(ComplexMatrix::Identity(cols_, cols_));
}

LinearMap operator*(const LinearMap& a, const LinearMap& b) {
  if (a.cols() != b.rows()) throw ContractError("LinearMap composition: dimension mismatch");
  return LinearMap(
      a.rows(), b.cols(), [a, b](const ComplexMatrix& x) { return a.apply(b.apply(x)); },
      [a, b](const ComplexMatrix& y) { return b.apply_adjoint(a.apply_adjoint(y)); });
}

LinearMap operator+(const LinearMap& a, const LinearMap& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ContractError("LinearMap sum: dimension mismatch");
  }
  return LinearMap(
      a.rows(), a.cols(), [a, b](const ComplexMatrix& x) { return ComplexMatrix(a.apply(x) + b.apply(x)); },
      [a, b](const ComplexMatrix& y) { return ComplexMatrix(a.apply_adjoint(y) + b.apply_adjoint(y)); });
}

LinearMap operator-(const LinearMap& a, const LinearMap& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ContractError("LinearMap difference: dimension mismatch");
  }
  return LinearMap(
      a.rows(), a.cols(), [a, b](const ComplexMatrix& x) { return ComplexMatrix(a.apply(x) - b.apply(x)); },
      [a, b](const ComplexMatrix& y) { return ComplexMatrix(a.apply_adjoint(y) - b.apply_adjoint(y)); });
}

LinearMap operator*(Complex alpha, const LinearMap& a) {
  return LinearMap(
      a.rows(), a.cols(), [alpha, a](const ComplexMatrix& x) { return ComplexMatrix(alpha * a.apply(x)); },
      [alpha, a](const ComplexMatrix& y) { return ComplexMatrix(std::conj(alpha) * a.apply_adjoint(y)); });
}

KroneckerFactor KroneckerFactor::identity(Index n) { return KroneckerFactor{n, n, nullptr}; }

KroneckerFactor KroneckerFactor::dense(ComplexMatrix m) {
  const Index in = m.cols();
  const Index out = m.rows();
  return KroneckerFactor{in, out, std::make_shared<const ComplexMatrix>(std::move(m))};
}

namespace {

// y[p][a][s] = sum_b A(a, b) x[p][b][s] for p < outer, b < d, s < inner.
void mode_product(const ComplexMatrix& a, Index outer, Index inner, const Complex* in, Complex* out) {
  const Index d = a.cols();
  const Index r = a.rows();
  if (inner == 1) {
    Eigen::Map<const ComplexMatrix> x(in, d, outer);
    Eigen::Map<ComplexMatrix> y(out, r, outer);
    y.noalias() = a * x;
    return;
  }
  const ComplexMatrix at = a.transpose();
  for (Index p = 0; p < outer; ++p) {
    Eigen::Map<const ComplexMatrix> x(in + p * d * inner, inner, d);
    Eigen::Map<ComplexMatrix> y(out + p * r * inner, inner, r);
    y.noalias() = x * at;
  }
}

}  // namespace

ComplexMatrix kronecker_apply(const std::vector<KroneckerFactor>& factors, const ComplexMatrix& x) {
  std::vector<Index> dims;
  dims.reserve(factors.size());
  for (const auto& f : factors) dims.push_back(f.in_dim);
  if (product_of(dims) != x.rows()) throw ContractError("kronecker_apply: dimension mismatch");

  ComplexMatrix current = x;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const auto& f = factors[k];
    if (f.is_identity()) continue;
    Index pre = 1;
    for (std::size_t l = 0; l < k; ++l) pre *= dims[l];
    Index post = 1;
    for (std::size_t l = k + 1; l < dims.size(); ++l) post *= dims[l];
    ComplexMatrix next(pre * f.out_dim * post, current.cols());
    // Columns are contiguous, so the column index folds into the outer loop.
    mode_product(*f.matrix, pre * current.cols(), post, current.data(), next.data());
    current = std::move(next);
    dims[k] = f.out_dim;
  }
  return current;
}

LinearMap kronecker_map(std::vector<KroneckerFactor> factors) {
  std::vector<KroneckerFactor> adjoint_factors;
  adjoint_factors.reserve(factors.size());
  Index rows = 1;
  Index cols = 1;
  for (const auto& f : factors) {
    rows *= f.out_dim;
    cols *= f.in_dim;
    adjoint_factors.push_back(f.is_identity() ? f : KroneckerFactor::dense(f.matrix->adjoint()));
  }
  auto fwd = std::make_shared<const std::vector<KroneckerFactor>>(std::move(factors));
  auto adj = std::make_shared<const std::vector<KroneckerFactor>>(std::move(adjoint_factors));
  return LinearMap(
      rows, cols, [fwd](const ComplexMatrix& x) { return kronecker_apply(*fwd, x); },
      [adj](const ComplexMatrix& y) { return kronecker_apply(*adj, y); });
}

ComplexMatrix kronecker_dense(const std::vector<KroneckerFactor>& factors, Index cap) {
  std::vector<ComplexMatrix> dense;
  dense.reserve(factors.size());
  for (const auto& f : factors) {
    dense.push_back(f.is_identity() ? ComplexMatrix::Identity(f.in_dim, f.in_dim) : *f.matrix);
  }
  return tensor_product(std::span<const ComplexMatrix>(dense), cap);
}

namespace {

ComplexMatrix complex_gaussian(Index rows, Index cols, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(scale * re, scale * im);
    }
  }
  return m;
}

}  // namespace

LowRankSvd low_rank_svd(const LinearMap& op, const LowRankOptions& options) {
  const Index min_dim = std::min(op.rows(), op.cols());
  LowRankSvd result;
  if (min_dim == 0) {
    result.svd.singular_values.resize(0);
    result.svd.u.resize(op.rows(), 0);
    result.svd.v.resize(op.cols(), 0);
    return result;
  }

  std::mt19937_64 rng(options.seed);
  // Halko-Martinsson-Tropp a posteriori bound constant.
  const double probe_factor = 10.0 * std::sqrt(2.0 / std::numbers::pi);
  Index block = std::min(options.initial_block, min_dim);

  while (true) {
    const ComplexMatrix omega =
        complex_gaussian(op.cols(), block, 1.0 / std::sqrt(2.0 * static_cast<double>(op.cols())), rng);
    const ComplexMatrix sample = op.apply(omega);
    require_finite(sample, "low_rank_svd");
    const SvdResult sampled = svd(sample);
    const double top = sampled.largest();
    const double cut = std::max(options.detect_rel * top, options.detect_abs);
    Index rank = 0;
    while (rank < sampled.singular_values.size() && sampled.singular_values(rank) > cut) ++rank;

    if (rank + options.oversample > block && block < min_dim) {
      block = std::min(2 * block, min_dim);
      continue;
    }

    const ComplexMatrix q = sampled.u.leftCols(rank);
    // B = Q^* A, computed through the adjoint: B^* = A^* Q.
    const ComplexMatrix b_adj = op.apply_adjoint(q);
    const SvdResult small = svd(b_adj);
    result.svd.singular_values = small.singular_values;
    result.svd.u = q * small.v;
    result.svd.v = small.u;
    result.probe_block = block;

    const ComplexMatrix probes = complex_gaussian(op.cols(), options.residual_probes, 1.0, rng);
    const ComplexMatrix hit = op.apply(probes);
    const ComplexMatrix miss = hit - q * (q.adjoint() * hit);
    double worst = 0.0;
    for (Index j = 0; j < miss.cols(); ++j) worst = std::max(worst, miss.col(j).norm());
    result.residual_bound = probe_factor * worst;

    const double accept =
        std::max(options.accept_rel * result.svd.largest(), options.accept_abs);
    if (result.residual_bound <= accept) return result;
    if (block < min_dim) {
      block = std::min(2 * block, min_dim);
      continue;
    }
    break;
  }

  if (min_dim > options.dense_fallback_cap) {
    std::ostringstream msg;
    msg << "low_rank_svd: range finder did not converge and the operator (" << op.rows() << "x"
        << op.cols() << ") is too large for a dense fallback";
    throw SizingError(msg.str(), static_cast<std::size_t>(min_dim));
  }
  result.svd = svd(op.to_dense(std::max(op.rows(), op.cols())));
  result.residual_bound = 0.0;
  result.dense_fallback = true;
  return result;
}

}  // namespace polyhardy::numeric
