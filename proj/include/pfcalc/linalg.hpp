#pragma once

#include "pfcalc/exactring.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace pfcalc {

/// Dense row-major matrix over a field policy F.
template <class F>
class DenseMatrix {
 public:
  using Scalar = typename F::Scalar;

  DenseMatrix() = default;
  DenseMatrix(const F& field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

  static DenseMatrix identity(const F& field, std::size_t n) {
    DenseMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Scalar> row(std::size_t r) const {
    return std::vector<Scalar>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
  }
  void append_row(const std::vector<Scalar>& v) {
    if (rows_ == 0 && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw Error("append_row: length mismatch");
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
  }

  DenseMatrix transpose() const {
    DenseMatrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix product: dimension mismatch");
    const F& k = a.field_;
    DenseMatrix r(k, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const Scalar& x = a(i, l);
        if (k.is_zero(x)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) = k.add(r(i, j), k.mul(x, b(l, j)));
      }
    return r;
  }

  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] = a.field_.add(a.data_[i], b.data_[i]);
    return r;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!field_.is_zero(x)) return false;
    return true;
  }

  std::vector<Scalar> apply(const std::vector<Scalar>& v) const {
    std::vector<Scalar> out(rows_, field_.zero());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!field_.is_zero(v[j])) out[i] = field_.add(out[i], field_.mul((*this)(i, j), v[j]));
    return out;
  }

 private:
  F field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// Reduced row echelon form in place; returns pivot columns.
template <class F>
std::vector<std::size_t> rref(DenseMatrix<F>& m) {
  const F& k = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && k.is_zero(m(piv, c))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(piv, j));
    auto inv = k.inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = k.mul(m(r, j), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || k.is_zero(m(i, c))) continue;
      auto f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = k.sub(m(i, j), k.mul(f, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F>
std::size_t rank(DenseMatrix<F> m) {
  return rref(m).size();
}

/// Basis of {v : m v = 0}, one vector per free column.
template <class F>
std::vector<std::vector<typename F::Scalar>> nullspace(DenseMatrix<F> m) {
  const F& k = m.field();
  auto pivots = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<typename F::Scalar>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<typename F::Scalar> v(m.cols(), k.zero());
    v[free] = k.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = k.neg(m(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Incrementally maintained row-echelon basis of a subspace of F^n, used for
/// spinning and span membership.
template <class F>
class EchelonBasis {
 public:
  using Scalar = typename F::Scalar;
  EchelonBasis(const F& field, std::size_t dim) : field_(field), dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  const std::vector<std::vector<Scalar>>& original() const { return original_; }

  /// Reduces v against the basis; returns the residue.
  std::vector<Scalar> reduce(std::vector<Scalar> v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto& c = v[pivots_[i]];
      if (field_.is_zero(c)) continue;
      auto f = c;
      for (std::size_t j = 0; j < dim_; ++j) v[j] = field_.sub(v[j], field_.mul(f, rows_[i][j]));
    }
    return v;
  }

  bool contains(const std::vector<Scalar>& v) const {
    auto r = reduce(v);
    for (const auto& x : r)
      if (!field_.is_zero(x)) return false;
    return true;
  }

  /// Adds v if independent; returns true when the span grew.
  bool insert(const std::vector<Scalar>& v) {
    auto r = reduce(v);
    std::size_t piv = 0;
    while (piv < dim_ && field_.is_zero(r[piv])) ++piv;
    if (piv == dim_) return false;
    auto inv = field_.inv(r[piv]);
    for (auto& x : r) x = field_.mul(x, inv);
    for (auto& row : rows_) {
      if (field_.is_zero(row[piv])) continue;
      auto f = row[piv];
      for (std::size_t j = 0; j < dim_; ++j) row[j] = field_.sub(row[j], field_.mul(f, r[j]));
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(piv);
    original_.push_back(v);
    return true;
  }

  /// Fully reduced basis sorted by pivot column.
  std::vector<std::vector<Scalar>> reduced_basis() const {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots_[a] < pivots_[b]; });
    std::vector<std::vector<Scalar>> out;
    for (auto i : order) out.push_back(rows_[i]);
    return out;
  }

 private:
  F field_;
  std::size_t dim_;
  std::vector<std::vector<Scalar>> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<Scalar>> original_;
};

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// Rank over QQ by fraction-free (Bareiss) elimination.
std::size_t bareiss_rank(IntMatrix m);

/// Rank of an integer matrix over K_p (QQ for p = 0).
std::size_t rank_over(const IntMatrix& m, std::uint64_t p);

/// Nonzero elementary divisors d_1 | d_2 | ... of an integer matrix.
std::vector<mpz_class> smith_invariants(IntMatrix m);

/// A ZZ-basis of the saturated lattice {v in ZZ^n : m v = 0}.
std::vector<std::vector<mpz_class>> integer_kernel(const IntMatrix& m, std::size_t ncols);

}  // namespace pfcalc
