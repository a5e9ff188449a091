#ifndef MATWARING_NORMAL_FORM_HPP
#define MATWARING_NORMAL_FORM_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "matwaring/error.hpp"
#include "matwaring/field.hpp"
#include "matwaring/matrix.hpp"
#include "matwaring/numtheory.hpp"
#include "matwaring/poly.hpp"

namespace matwaring {

/// Companion matrix of a monic P = X^n - a_{n-1}X^{n-1} - ... - a_0: ones on
/// the subdiagonal, last column (a_0, ..., a_{n-1}).
inline Matrix companion(const Poly& P) {
  require(P.is_monic(), ErrorCode::NotMonic, "companion needs a monic polynomial");
  require(P.degree() >= 1, ErrorCode::InvalidArgument, "companion needs degree >= 1");
  const auto n = static_cast<std::size_t>(P.degree());
  const Field& F = *P.field();
  Matrix C(P.field(), n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) C(i + 1, i) = kOne;
  for (std::size_t i = 0; i < n; ++i) C(i, n - 1) = F.neg(P.coeff(i));
  return C;
}

/// Records U with U^{-1} * source * U = target.
struct SimilarityWitness {
  Matrix u;
  Matrix source;
  Matrix target;

  bool holds() const {
    if (rank(u) != u.n()) return false;
    return source * u == u * target;
  }
};

namespace detail {

/// p(A) v by Horner.
inline Vec apply_poly(const Poly& p, const Matrix& A, const Vec& v) {
  const Field& F = *A.field();
  Vec r(v.size(), kZero);
  for (std::size_t i = p.coeffs().size(); i-- > 0;) {
    r = A * r;
    const Elem c = p.coeffs()[i];
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = F.add(r[j], F.mul(c, v[j]));
  }
  return r;
}

struct Krylov {
  std::vector<Vec> basis;  // v, Av, ..., A^{d-1} v
  Poly minpoly;            // monic, degree d
};

/// Krylov basis of v and its minimal polynomial with respect to A.
inline Krylov krylov(const Matrix& A, const Vec& v) {
  const FieldPtr& F = A.field();
  if (std::all_of(v.begin(), v.end(), [](Elem e) { return e.is_zero(); }))
    return Krylov{{}, Poly::constant(F, kOne)};
  std::vector<Vec> basis;
  Vec cur = v;
  for (;;) {
    if (!basis.empty()) {
      if (auto c = solve_any(Matrix::from_columns(F, A.n(), basis), cur)) {
        std::vector<Elem> coeffs(basis.size() + 1);
        for (std::size_t i = 0; i < basis.size(); ++i) coeffs[i] = F->neg((*c)[i]);
        coeffs.back() = kOne;
        return Krylov{std::move(basis), Poly(F, std::move(coeffs))};
      }
    }
    basis.push_back(cur);
    cur = A * cur;
  }
}

inline Vec unit(std::size_t n, std::size_t i) {
  Vec v(n, kZero);
  v[i] = kOne;
  return v;
}

/// Coprime a' | a, b' | b with a' b' = lcm(a, b).
inline std::pair<Poly, Poly> coprime_lcm_split(const Poly& a, const Poly& b) {
  Poly ap = a;
  Poly bp = b / gcd(a, b);
  for (;;) {
    Poly g = gcd(ap, bp);
    if (g.degree() == 0) break;
    ap = ap / g;
    bp = bp * g;
  }
  return {ap.monic(), bp.monic()};
}

/// A vector whose minimal polynomial is the minimal polynomial of A.
inline Vec maximal_vector(const Matrix& A) {
  const std::size_t n = A.n();
  Vec v = unit(n, 0);
  Poly mu = krylov(A, v).minpoly;
  for (std::size_t i = 1; i < n && static_cast<std::size_t>(mu.degree()) < n; ++i) {
    const Vec w = unit(n, i);
    const Poly mw = krylov(A, w).minpoly;
    if ((mu % mw).is_zero()) continue;
    auto [ap, bp] = coprime_lcm_split(mu, mw);
    const Vec x = apply_poly(mu / ap, A, v);
    const Vec y = apply_poly(mw / bp, A, w);
    Vec s(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = A.field()->add(x[j], y[j]);
    v = std::move(s);
    mu = ap * bp;
  }
  return v;
}

/// Least-index standard basis vector that is cyclic for A, else a maximal vector.
inline Vec cyclic_vector(const Matrix& A) {
  for (std::size_t i = 0; i < A.n(); ++i) {
    Vec e = unit(A.n(), i);
    if (static_cast<std::size_t>(krylov(A, e).minpoly.degree()) == A.n()) return e;
  }
  return maximal_vector(A);
}

}  // namespace detail

/// Frobenius (rational canonical) normal form diag(C_{P_1}, ..., C_{P_s}) with
/// P_1 | P_2 | ... | P_s, blocks in ascending size, and a witness U with
/// U^{-1} A U = form.
struct FrobeniusForm {
  std::vector<Poly> factors;
  Matrix form;
  SimilarityWitness witness;
};

inline FrobeniusForm frobenius_form(const Matrix& A) {
  require(A.is_square() && A.n() >= 1, ErrorCode::InvalidArgument, "frobenius_form needs a square matrix");
  const FieldPtr& F = A.field();
  const std::size_t n = A.n();

  Matrix basis = Matrix::identity(F, n);  // columns span the remaining invariant subspace
  Matrix cur = A;                         // restriction of A in that basis
  std::vector<Poly> found;
  std::vector<Matrix> columns;

  for (;;) {
    const std::size_t r = cur.n();
    const Vec v = detail::maximal_vector(cur);
    auto kr = detail::krylov(cur, v);
    const std::size_t d = kr.basis.size();
    const Matrix K = Matrix::from_columns(F, r, kr.basis);
    found.push_back(kr.minpoly);
    columns.push_back(basis * K);
    if (d == r) break;

    // Complement: annihilator of the cyclic subspace generated by a functional
    // f with f(A^i v) = 0 for i < d-1 and f(A^{d-1} v) = 1.
    Vec target(d, kZero);
    target[d - 1] = kOne;
    auto f = solve_any(K.transpose(), target);
    if (!f) fail(ErrorCode::DegenerateBasis, "no separating functional for the cyclic block");
    Matrix rowsF(F, d, r);
    const Matrix curT = cur.transpose();
    Vec fi = *f;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < r; ++j) rowsF(i, j) = fi[j];
      fi = curT * fi;
    }
    const auto N = nullspace(rowsF);
    require(N.size() == r - d, ErrorCode::DegenerateBasis, "complement has the wrong dimension");
    std::vector<Vec> all = kr.basis;
    all.insert(all.end(), N.begin(), N.end());
    const Matrix T = Matrix::from_columns(F, r, all);
    const Matrix M = inverse(T) * cur * T;
    require(M.block(0, d, d, r - d).is_zero() && M.block(d, 0, r - d, d).is_zero(), ErrorCode::DegenerateBasis,
            "complement is not invariant");
    basis = basis * Matrix::from_columns(F, r, N);
    cur = M.block(d, d, r - d, r - d);
  }

  std::reverse(found.begin(), found.end());
  std::reverse(columns.begin(), columns.end());
  Matrix U(F, n, n);
  std::vector<Matrix> blocks;
  std::size_t off = 0;
  for (std::size_t b = 0; b < found.size(); ++b) {
    U.set_block(0, off, columns[b]);
    off += columns[b].cols();
    blocks.push_back(companion(found[b]));
  }
  FrobeniusForm out{found, block_diagonal(F, blocks), SimilarityWitness{U, A, Matrix(F, 0, 0)}};
  out.witness.target = out.form;
  if (!out.witness.holds()) fail(ErrorCode::WitnessInvalid, "Frobenius form witness failed to verify");
  for (std::size_t b = 1; b < found.size(); ++b)
    if (!(found[b] % found[b - 1]).is_zero())
      fail(ErrorCode::WitnessInvalid, "invariant factors do not form a divisibility chain");
  return out;
}

/// (characteristic polynomial, minimal polynomial), both monic.
inline std::pair<Poly, Poly> char_min_poly(const Matrix& A) {
  const auto ff = frobenius_form(A);
  Poly chi = Poly::constant(A.field(), kOne);
  for (const auto& f : ff.factors) chi = chi * f;
  return {chi, ff.factors.back()};
}

inline Poly char_poly(const Matrix& A) { return char_min_poly(A).first; }

inline Poly min_poly(const Matrix& A) {
  return detail::krylov(A, detail::maximal_vector(A)).minpoly;
}

/// The structural sufficient condition for being non-derogatory: in the
/// first `ncols` columns, nonzero subdiagonal entries and zeros below them.
inline bool has_subdiagonal_structure(const Matrix& A, std::size_t ncols) {
  for (std::size_t j = 0; j < ncols; ++j) {
    if (j + 1 >= A.rows() || A(j + 1, j).is_zero()) return false;
    for (std::size_t i = j + 2; i < A.rows(); ++i)
      if (!A(i, j).is_zero()) return false;
  }
  return true;
}

inline bool has_subdiagonal_structure(const Matrix& A) { return has_subdiagonal_structure(A, A.n() - 1); }

inline bool is_nonderogatory(const Matrix& A) {
  require(A.is_square(), ErrorCode::InvalidArgument, "is_nonderogatory needs a square matrix");
  const bool general = static_cast<std::size_t>(min_poly(A).degree()) == A.n();
  if (has_subdiagonal_structure(A) && !general)
    fail(ErrorCode::TheoremContradiction, "subdiagonal structure without being non-derogatory");
  return general;
}

/// U with U^{-1} B U = A for non-derogatory A, B sharing a characteristic polynomial.
inline SimilarityWitness cyclic_similarity(const Matrix& A, const Matrix& B) {
  require(A.is_square() && B.is_square() && A.n() == B.n(), ErrorCode::NotSimilar, "shape mismatch");
  const auto ka = detail::krylov(A, detail::cyclic_vector(A));
  const auto kb = detail::krylov(B, detail::cyclic_vector(B));
  const auto n = static_cast<int>(A.n());
  if (ka.minpoly.degree() != n || kb.minpoly.degree() != n)
    fail(ErrorCode::NotSimilar, "cyclic_similarity needs non-derogatory matrices");
  if (!(ka.minpoly == kb.minpoly)) fail(ErrorCode::NotSimilar, "characteristic polynomials differ");
  const Matrix KA = Matrix::from_columns(A.field(), A.n(), ka.basis);
  const Matrix KB = Matrix::from_columns(B.field(), B.n(), kb.basis);
  SimilarityWitness w{KB * inverse(KA), B, A};
  if (!w.holds()) fail(ErrorCode::WitnessInvalid, "cyclic similarity witness failed to verify");
  return w;
}

/// Given a non-derogatory B and prescribed first n-1 columns (an n x (n-1)
/// matrix with nonzero subdiagonal and zeros below it), returns A similar to
/// B whose first n-1 columns are the prescription, plus the witness.
inline std::pair<Matrix, SimilarityWitness> complete_prescribed_columns(const Matrix& B, const Matrix& cols) {
  require(B.is_square(), ErrorCode::InvalidArgument, "complete_prescribed_columns needs a square matrix");
  const std::size_t n = B.n();
  const FieldPtr& F = B.field();
  require(cols.rows() == n && cols.cols() + 1 == n, ErrorCode::PrescriptionViolation,
          "prescription must be n x (n-1)");
  if (!has_subdiagonal_structure(cols, n - 1))
    fail(ErrorCode::PrescriptionViolation, "prescribed columns need nonzero subdiagonal and zeros below it");

  const auto kb = detail::krylov(B, detail::cyclic_vector(B));
  if (static_cast<std::size_t>(kb.minpoly.degree()) != n)
    fail(ErrorCode::DegenerateBasis, "matrix is derogatory; no completion exists");
  const Matrix C = companion(kb.minpoly);
  const Matrix U0 = (B == C) ? Matrix::identity(F, n) : cyclic_similarity(C, B).u;

  // f_1 = e_1, f_{j+1} = a_{j+1,j}^{-1} (C f_j - sum_{i<=j} a_{ij} f_i)
  std::vector<Vec> f{detail::unit(n, 0)};
  for (std::size_t j = 0; j + 1 < n; ++j) {
    Vec next = C * f[j];
    for (std::size_t i = 0; i <= j; ++i)
      for (std::size_t r = 0; r < n; ++r) next[r] = F->sub(next[r], F->mul(cols(i, j), f[i][r]));
    const Elem s = F->inv(cols(j + 1, j));
    for (auto& e : next) e = F->mul(e, s);
    f.push_back(std::move(next));
  }
  const Matrix Fm = Matrix::from_columns(F, n, f);
  if (rank(Fm) != n) fail(ErrorCode::DegenerateBasis, "completion basis is singular");
  const Matrix A = inverse(Fm) * C * Fm;
  require(A.block(0, 0, n, n - 1) == cols, ErrorCode::ShapeViolation, "completion does not match prescription");
  SimilarityWitness w{U0 * Fm, B, A};
  if (!w.holds()) fail(ErrorCode::WitnessInvalid, "completion witness failed to verify");
  return {A, w};
}

/// Multiplicative order of an invertible matrix. A multiple is built from
/// p^c (p^c >= n kills the unipotent part) times lcm(q^d - 1) over the degrees
/// d of the eigenvalues of the semisimple part; the exact order is then
/// obtained by stripping prime factors.
inline std::uint64_t matrix_order(const Matrix& B) {
  require(B.is_square(), ErrorCode::InvalidArgument, "matrix_order needs a square matrix");
  const FieldPtr& F = B.field();
  const std::size_t n = B.n();
  require(rank(B) == n, ErrorCode::SingularMatrix, "matrix_order needs an invertible matrix");
  const Matrix I = Matrix::identity(F, n);
  const std::uint64_t p = F->characteristic(), q = F->size();
  std::uint64_t pc = 1;
  while (pc < n) pc *= p;
  const Matrix B1 = pow(B, pc);

  std::uint64_t L = 1;
  std::vector<std::size_t> exact(n + 1, 0);
  for (std::size_t d = 1; d <= n; ++d) {
    const std::uint64_t qd1 = nt::pow_or_throw(q, d) - 1;
    const std::size_t kernel = n - rank(pow(B1, qd1) - I);
    std::size_t sub = 0;
    for (std::size_t e = 1; e < d; ++e)
      if (d % e == 0) sub += exact[e];
    exact[d] = kernel - sub;
    if (exact[d] == 0) continue;
    auto l = nt::checked_lcm(L, qd1);
    if (!l) fail(ErrorCode::BudgetExceeded, "matrix order multiple overflows 64 bits");
    L = *l;
  }
  const auto M = nt::checked_lcm(L, pc);
  if (!M) fail(ErrorCode::BudgetExceeded, "matrix order multiple overflows 64 bits");
  if (!(pow(B, *M) == I)) fail(ErrorCode::TheoremContradiction, "order multiple does not annihilate the matrix");
  return nt::order_by_stripping(*M, nt::factor(*M), [&](std::uint64_t e) { return pow(B, e) == I; });
}

}  // namespace matwaring

#endif  // MATWARING_NORMAL_FORM_HPP
