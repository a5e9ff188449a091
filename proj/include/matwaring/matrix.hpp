#ifndef MATWARING_MATRIX_HPP
#define MATWARING_MATRIX_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matwaring/error.hpp"
#include "matwaring/field.hpp"

namespace matwaring {

using Vec = std::vector<Elem>;

/// Dense matrix over a Field, row-major. Value type; all arithmetic exact.
class Matrix {
 public:
  Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), a_(rows * cols, kZero) {}

  Matrix(FieldPtr field, std::size_t rows, std::size_t cols, std::vector<Elem> entries)
      : field_(std::move(field)), rows_(rows), cols_(cols), a_(std::move(entries)) {
    require(a_.size() == rows_ * cols_, ErrorCode::InvalidArgument, "matrix entry count mismatch");
    for (Elem e : a_) require(field_->contains(e), ErrorCode::InvalidArgument, "matrix entry outside field");
  }

  /// Square matrix from nested rows of indices.
  static Matrix from_rows(FieldPtr field, const std::vector<std::vector<std::uint64_t>>& rows) {
    const std::size_t n = rows.size();
    std::vector<Elem> e;
    for (const auto& r : rows) {
      require(r.size() == (n ? rows[0].size() : 0), ErrorCode::InvalidArgument, "ragged matrix rows");
      for (auto v : r) e.push_back(Elem{v});
    }
    return Matrix(std::move(field), n, n ? rows[0].size() : 0, std::move(e));
  }

  static Matrix identity(FieldPtr field, std::size_t n) { return scalar(std::move(field), n, kOne); }

  static Matrix scalar(FieldPtr field, std::size_t n, Elem alpha) {
    Matrix m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = alpha;
    return m;
  }

  /// Matrix whose columns are the given vectors.
  static Matrix from_columns(FieldPtr field, std::size_t rows, const std::vector<Vec>& cols) {
    Matrix m(std::move(field), rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  const FieldPtr& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t n() const { return rows_; }
  bool is_square() const { return rows_ == cols_; }
  const std::vector<Elem>& entries() const { return a_; }

  Elem& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  Elem operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vec column(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_column(std::size_t j, const Vec& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(field_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_ && field_->size() == o.field_->size();
  }

  bool is_zero() const {
    for (Elem e : a_)
      if (!e.is_zero()) return false;
    return true;
  }

  bool is_scalar() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((i == j) ? (*this)(i, j) != (*this)(0, 0) : !(*this)(i, j).is_zero()) return false;
    return true;
  }

  Elem trace() const {
    Elem s = kZero;
    for (std::size_t i = 0; i < rows_; ++i) s = field_->add(s, (*this)(i, i));
    return s;
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix scaled(Elem s) const {
    Matrix r(*this);
    for (Elem& e : r.a_) e = field_->mul(e, s);
    return r;
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    check_same_shape(x, y);
    Matrix r(x);
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = x.field_->add(x.a_[i], y.a_[i]);
    return r;
  }

  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    check_same_shape(x, y);
    Matrix r(x);
    for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = x.field_->sub(x.a_[i], y.a_[i]);
    return r;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    require(x.cols_ == y.rows_, ErrorCode::InvalidArgument, "matrix product dimension mismatch");
    const Field& F = *x.field_;
    Matrix r(x.field_, x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i) {
      for (std::size_t l = 0; l < x.cols_; ++l) {
        const Elem a = x(i, l);
        if (a.is_zero()) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) {
          const Elem b = y(l, j);
          if (!b.is_zero()) r(i, j) = F.add(r(i, j), F.mul(a, b));
        }
      }
    }
    return r;
  }

  friend Vec operator*(const Matrix& x, const Vec& v) {
    require(x.cols_ == v.size(), ErrorCode::InvalidArgument, "matrix-vector dimension mismatch");
    const Field& F = *x.field_;
    Vec r(x.rows_, kZero);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t j = 0; j < x.cols_; ++j) r[i] = F.add(r[i], F.mul(x(i, j), v[j]));
    return r;
  }

  /// Whitespace-separated indices, one row per line.
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) s += ' ';
        s += std::to_string((*this)(i, j).index);
      }
      s += '\n';
    }
    return s;
  }

 private:
  static void check_same_shape(const Matrix& x, const Matrix& y) {
    require(x.rows_ == y.rows_ && x.cols_ == y.cols_, ErrorCode::InvalidArgument, "matrix shape mismatch");
  }

  FieldPtr field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> a_;
};

inline Matrix pow(Matrix base, std::uint64_t e) {
  require(base.is_square(), ErrorCode::InvalidArgument, "pow needs a square matrix");
  Matrix r = Matrix::identity(base.field(), base.n());
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> rref(Matrix& m, std::size_t ncols_to_reduce) {
  const Field& F = *m.field();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols_to_reduce && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    const Elem s = F.inv(m(row, col));
    for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) = F.mul(m(row, j), s);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const Elem f = m(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = F.sub(m(i, j), F.mul(f, m(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(Matrix m) { return rref(m, m.cols()).size(); }

inline Matrix inverse(const Matrix& a) {
  require(a.is_square(), ErrorCode::InvalidArgument, "inverse needs a square matrix");
  const std::size_t n = a.n();
  Matrix aug(a.field(), n, 2 * n);
  aug.set_block(0, 0, a);
  aug.set_block(0, n, Matrix::identity(a.field(), n));
  if (rref(aug, n).size() != n) fail(ErrorCode::SingularMatrix, "matrix is not invertible");
  return aug.block(0, n, n, n);
}

/// Some solution x of m x = b (free variables set to zero), or nullopt.
inline std::optional<Vec> solve_any(const Matrix& m, const Vec& b) {
  require(b.size() == m.rows(), ErrorCode::InvalidArgument, "right-hand side length mismatch");
  Matrix aug(m.field(), m.rows(), m.cols() + 1);
  aug.set_block(0, 0, m);
  for (std::size_t i = 0; i < m.rows(); ++i) aug(i, m.cols()) = b[i];
  const auto pivots = rref(aug, m.cols() + 1);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  Vec x(m.cols(), kZero);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, m.cols());
  return x;
}

/// Unique solution of a square invertible system.
inline Vec solve(const Matrix& m, const Vec& b) {
  require(m.is_square(), ErrorCode::InvalidArgument, "solve needs a square matrix");
  require(rank(m) == m.n(), ErrorCode::SingularMatrix, "system matrix is singular");
  return *solve_any(m, b);
}

/// Basis of the right null space, one vector per free column.
inline std::vector<Vec> nullspace(const Matrix& m) {
  Matrix r(m);
  const auto pivots = rref(r, m.cols());
  const Field& F = *m.field();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols(), kZero);
    v[free] = kOne;
    for (std::size_t row = 0; row < pivots.size(); ++row) v[pivots[row]] = F.neg(r(row, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

/// diag(blocks...) as one square matrix.
inline Matrix block_diagonal(const FieldPtr& F, const std::vector<Matrix>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.n();
  Matrix m(F, n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    m.set_block(off, off, b);
    off += b.n();
  }
  return m;
}

/// Sum_i c_i M^i (Horner).
inline Matrix evaluate(const std::vector<Elem>& coeffs, const Matrix& M) {
  Matrix r(M.field(), M.n(), M.n());
  for (std::size_t i = coeffs.size(); i-- > 0;) r = r * M + Matrix::scalar(M.field(), M.n(), coeffs[i]);
  return r;
}

}  // namespace matwaring

#endif  // MATWARING_MATRIX_HPP
