#ifndef MATWARING_DECOMPOSE_HPP
#define MATWARING_DECOMPOSE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "matwaring/error.hpp"
#include "matwaring/field.hpp"
#include "matwaring/matrix.hpp"
#include "matwaring/normal_form.hpp"
#include "matwaring/poly.hpp"
#include "matwaring/powerset.hpp"
#include "matwaring/search.hpp"
#include "matwaring/tower.hpp"

namespace matwaring {

struct ProvenanceStep {
  std::string step;
  nlohmann::json detail = nlohmann::json::object();
  std::vector<SimilarityWitness> witnesses;
};

/// A claimed decomposition target = sum_i terms[i]^k, with the log of every
/// choice made while building it.
struct WaringCertificate {
  FieldPtr field;
  std::uint64_t k = 1;
  std::vector<Matrix> terms;
  Matrix target;
  std::vector<ProvenanceStep> provenance;

  std::size_t n() const { return target.n(); }
};

/// Lazily built extensions F_{q^d} of one base field, shared by repeated
/// decompositions. Thread-safe.
class TowerCache {
 public:
  explicit TowerCache(FieldPtr mid) : mid_(std::move(mid)) {}

  const FieldTower& get(unsigned degree) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = towers_.find(degree);
    if (it == towers_.end()) it = towers_.emplace(degree, FieldTower(mid_, degree)).first;
    return it->second;
  }

  const FieldPtr& mid() const { return mid_; }

 private:
  FieldPtr mid_;
  std::mutex mu_;
  std::map<unsigned, FieldTower> towers_;
};

namespace detail {

inline nlohmann::json poly_json(const Poly& P) { return P.to_string(); }

inline Matrix conjugate_back(const SimilarityWitness& w, const Matrix& M) {
  // w.u^{-1} * source * w.u = target, so source-side = u * M * u^{-1}
  return w.u * M * inverse(w.u);
}

inline std::string dump_provenance(const std::vector<ProvenanceStep>& prov) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : prov) j.push_back({{"step", s.step}, {"detail", s.detail}});
  return j.dump();
}

}  // namespace detail

/// E with E^k = companion(Phi_{a^k}): conjugate companion(Phi_a) by a
/// similarity taking companion(Phi_a)^k to companion(Phi_{a^k}).
inline Matrix kpower_companion_root(const KPowerWitness& w) {
  const FieldTower& T = w.tower;
  const Elem ak = T.top->pow(w.a, w.k);
  if (orbit_period(T, ak) != T.n())
    fail(ErrorCode::WitnessInvalid, "a^k does not have a full Frobenius orbit");
  if (!(orbit_poly(T, ak) == w.P)) fail(ErrorCode::WitnessInvalid, "P is not the orbit polynomial of a^k");
  const Matrix G = companion(orbit_poly(T, w.a));
  const Matrix CP = companion(w.P);
  if (w.k == 1) return G;
  const SimilarityWitness U = cyclic_similarity(CP, pow(G, w.k));
  const Matrix E = inverse(U.u) * G * U.u;
  if (!(pow(E, w.k) == CP)) fail(ErrorCode::WitnessInvalid, "k-th power companion root failed to verify");
  return E;
}

/// R = [[D_root, x], [0, t]] with R^k = [[D_root^k, d], [0, t^k]].
inline Matrix block_root(const Matrix& D_root, const Vec& d, Elem t, std::uint64_t k) {
  require(k >= 1, ErrorCode::InvalidArgument, "k must be >= 1");
  require(!t.is_zero(), ErrorCode::PreconditionViolated, "block_root needs a nonzero corner");
  const FieldPtr& F = D_root.field();
  const std::size_t m = D_root.n();
  require(d.size() == m, ErrorCode::InvalidArgument, "column length mismatch");
  // M = sum_{i<k} t^{k-1-i} D^i
  Matrix M(F, m, m);
  Matrix Di = Matrix::identity(F, m);
  for (std::uint64_t i = 0; i < k; ++i) {
    M = M + Di.scaled(F->pow(t, k - 1 - i));
    if (i + 1 < k) Di = Di * D_root;
  }
  if (rank(M) != m) fail(ErrorCode::SingularGeometricSum, "t^k collides with an eigenvalue of D^k");
  const Vec x = solve(M, d);
  Matrix R(F, m + 1, m + 1);
  R.set_block(0, 0, D_root);
  for (std::size_t i = 0; i < m; ++i) R(i, m) = x[i];
  R(m, m) = t;
  Matrix want(F, m + 1, m + 1);
  want.set_block(0, 0, pow(D_root, k));
  for (std::size_t i = 0; i < m; ++i) want(i, m) = d[i];
  want(m, m) = F->pow(t, k);
  if (!(pow(R, k) == want)) fail(ErrorCode::TheoremContradiction, "block root failed to verify");
  return R;
}

/// Conjugated A = S + E where S = [[D', d], [0, corner]] with D' similar to
/// C_P and E similar to C_Q.
struct SplitResult {
  Matrix frob;                    // Frobenius form of A
  Matrix S;                       // block part
  Matrix E;                       // non-derogatory part, char poly Q
  SimilarityWitness conjugator;   // u^{-1} A u = frob
  SimilarityWitness d_witness;    // u^{-1} C_P u = D'
  SimilarityWitness e_witness;    // u^{-1} C_Q u = E
};

inline SplitResult split_nonscalar(const Matrix& A, const Poly& P, Elem corner, const Poly& Q) {
  const FieldPtr& F = A.field();
  const std::size_t n = A.n();
  require(F->size() > 2, ErrorCode::PreconditionViolated, "split_nonscalar needs a field other than F_2");
  require(!A.is_scalar(), ErrorCode::PreconditionViolated, "split_nonscalar needs a non-scalar matrix");
  require(P.is_monic() && Q.is_monic(), ErrorCode::NotMonic, "P and Q must be monic");
  require(P.degree() == static_cast<int>(n) - 1 && Q.degree() == static_cast<int>(n), ErrorCode::InvalidArgument,
          "need deg P = n-1 and deg Q = n");
  const Elem want = F->sub(F->sub(A.trace(), poly_trace(P)), corner);
  if (poly_trace(Q) != want) fail(ErrorCode::TraceMismatch, "Tr(Q) must equal Tr(A) - Tr(P) - corner");

  const auto ff = frobenius_form(A);
  const Matrix& Af = ff.form;
  const Matrix CP = companion(P);

  // D' similar to C_P with every subdiagonal entry equal to the least element
  // outside {0, 1} and zeros below the subdiagonal.
  const Elem fill{2};
  Matrix Dp = CP;
  SimilarityWitness dw{Matrix::identity(F, n - 1), CP, CP};
  if (n - 1 >= 2) {
    Matrix presc(F, n - 1, n - 2);
    for (std::size_t j = 0; j + 2 < n; ++j) presc(j + 1, j) = fill;
    auto [D, w] = complete_prescribed_columns(CP, presc);
    Dp = std::move(D);
    dw = std::move(w);
  }
  Matrix diag(F, n, n);
  diag.set_block(0, 0, Dp);
  diag(n - 1, n - 1) = corner;
  const Matrix presc = (Af - diag).block(0, 0, n, n - 1);
  auto [E, ew] = complete_prescribed_columns(companion(Q), presc);
  const Matrix S = Af - E;
  if (!(S.block(0, 0, n, n - 1) == diag.block(0, 0, n, n - 1)) || S(n - 1, n - 1) != corner)
    fail(ErrorCode::ShapeViolation, "split block part does not have the required shape");
  return SplitResult{Af, S, E, ff.witness, dw, ew};
}

/// Conjugated A = B + C' with char(B) = (X - 1)^n and C' similar to C_P.
struct UnipotentSplit {
  Matrix frob;
  Matrix B;
  Matrix C;
  SimilarityWitness conjugator;  // u^{-1} A u = frob
  SimilarityWitness c_witness;   // u^{-1} C_P u = C
};

inline UnipotentSplit split_unipotent(const Matrix& A, const Poly& P) {
  const FieldPtr& F = A.field();
  const std::size_t n = A.n();
  require(!A.is_scalar(), ErrorCode::PreconditionViolated, "split_unipotent needs a non-scalar matrix");
  require(P.is_monic() && P.degree() == static_cast<int>(n), ErrorCode::InvalidArgument,
          "P must be monic of degree n");
  if (poly_trace(P) != F->sub(A.trace(), F->from_int(static_cast<std::int64_t>(n % F->characteristic()))))
    fail(ErrorCode::TraceMismatch, "Tr(P) must equal Tr(A) - n");

  const auto ff = frobenius_form(A);
  const Matrix& Af = ff.form;
  // D: blocks D(C_i) (identity with the companion's last column above a final
  // 1) on the diagonal, -1 linking the last column of each block to the first
  // row of the next.
  Matrix D(F, n, n);
  std::size_t start = 0, prev_last = 0;
  for (std::size_t b = 0; b < ff.factors.size(); ++b) {
    const std::size_t m = static_cast<std::size_t>(ff.factors[b].degree());
    const std::size_t last = start + m - 1;
    for (std::size_t i = 0; i < m; ++i) D(start + i, start + i) = kOne;
    for (std::size_t i = 0; i + 1 < m; ++i) D(start + i, last) = Af(start + i, last);
    if (b > 0) D(start, prev_last) = F->neg(kOne);
    prev_last = last;
    start += m;
  }
  const Matrix presc = (Af - D).block(0, 0, n, n - 1);
  auto [C, cw] = complete_prescribed_columns(companion(P), presc);
  const Matrix B = Af - C;
  Poly unip = Poly::constant(F, kOne);
  for (std::size_t i = 0; i < n; ++i) unip = unip * Poly::linear(F, kOne);
  if (!(char_poly(B) == unip)) fail(ErrorCode::CharPolyViolation, "A - C' does not have char poly (X-1)^n");
  return UnipotentSplit{Af, B, C, ff.witness, cw};
}

/// V = B^(k^{-1} mod ord B), so V^k = B; needs gcd(k, ord B) = 1.
inline Matrix unipotent_root(const Matrix& B, std::uint64_t k) {
  const std::uint64_t ord = matrix_order(B);
  if (std::gcd(k, ord) != 1)
    fail(ErrorCode::OrderNotCoprime, "order " + std::to_string(ord) + " is not coprime to k");
  const std::uint64_t e = ord == 1 ? 0 : *nt::modinv(k % ord, ord);
  const Matrix V = pow(B, e);
  if (!(pow(V, k) == B)) fail(ErrorCode::TheoremContradiction, "coprime-order root failed to verify");
  return V;
}

namespace detail {

/// Image of the field element x of base[y]/(chi) under y -> A.
inline Matrix lift(const Field& L, Elem x, const Matrix& A) {
  if (A.n() == 1 && L.degree() == 1) return Matrix(A.field(), 1, 1, {x});
  return evaluate(L.coefficients(x), A);
}

}  // namespace detail

/// (E1, E2) with E1^k + E2^k = A for A with irreducible characteristic
/// polynomial chi, computed in F_q[A] = F_q[X]/(chi).
inline std::pair<Matrix, Matrix> irreducible_decompose(const Matrix& A, std::uint64_t k) {
  const FieldPtr& F = A.field();
  const Poly chi = char_poly(A);
  if (!is_irreducible(chi)) fail(ErrorCode::NotIrreducible, "characteristic polynomial is reducible");
  const FieldPtr L = Field::extension_unchecked(F, chi.coeffs());
  // the class of y is the element with coefficient vector (0, 1), or A(0,0) when n = 1
  const Elem zeta = A.n() == 1 ? A(0, 0) : Elem{F->size()};
  const auto [x, y] = two_kth_powers(*L, zeta, k);
  Matrix E1 = detail::lift(*L, y, A);
  Matrix E2 = detail::lift(*L, x, A);
  if (!(pow(E1, k) + pow(E2, k) == A))
    fail(ErrorCode::TheoremContradiction, "irreducible-case decomposition failed to verify");
  return {std::move(E1), std::move(E2)};
}

/// (E1, E2) with E1^k + E2^k = alpha I_n: inside F_q when possible, else in
/// F_q[C_h] for the canonical irreducible h of degree n.
inline std::pair<Matrix, Matrix> scalar_decompose(const FieldPtr& F, Elem alpha, std::size_t n, std::uint64_t k) {
  if (alpha.is_zero()) return {Matrix(F, n, n), Matrix(F, n, n)};
  std::optional<std::pair<Matrix, Matrix>> out;
  try {
    const auto [x, y] = two_kth_powers(*F, alpha, k);
    out.emplace(Matrix::scalar(F, n, y), Matrix::scalar(F, n, x));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoDecomposition) throw;
  }
  if (!out) {
    const Poly h = canonical_modulus(F, static_cast<unsigned>(n));
    const FieldPtr L = Field::extension_unchecked(F, h.coeffs());
    const Matrix C = companion(h);
    const auto [x, y] = two_kth_powers(*L, alpha, k);
    out.emplace(detail::lift(*L, y, C), detail::lift(*L, x, C));
  }
  if (!(pow(out->first, k) + pow(out->second, k) == Matrix::scalar(F, n, alpha)))
    fail(ErrorCode::TheoremContradiction, "scalar decomposition failed to verify");
  return *out;
}

/// Reasons the three-powers hypotheses fail, or nullopt if they hold.
inline std::optional<std::string> three_powers_violation(std::uint64_t q, std::size_t n, std::uint64_t k) {
  if (k < 1) return "k must be positive";
  const auto qn = nt::checked_pow(q, n);
  const bool big = !qn || two_powers_guaranteed(*qn, k);
  if (q == 2) {
    if (k % 2 == 0) return "over F_2 the exponent k must be odd";
    if (!big) return "need 2^n > (k-1)^4";
    return std::nullopt;
  }
  if (std::gcd(k, q) != 1) return "need gcd(k, q) = 1";
  if (!big) return "need q^n > (k-1)^4";
  return std::nullopt;
}

inline std::optional<std::string> two_powers_violation(std::uint64_t q, std::size_t n, std::uint64_t k) {
  if (k < 1) return "k must be positive";
  if (n < 7) return "need n >= 7";
  if (k >= q) return "need k < q";
  return std::nullopt;
}

/// Meet-in-the-middle search over the enumerated k-th powers of M_n(F_q)
/// for the least-encoding r-term decomposition; q^(n^2) <= 2^24.
inline WaringCertificate exhaustive_fallback(const Matrix& A, std::uint64_t k, unsigned r,
                                             const PowerSet* cached = nullptr) {
  require(r >= 1 && r <= 3, ErrorCode::InvalidArgument, "fallback supports 1 to 3 terms");
  std::optional<PowerSet> local;
  if (!cached || cached->k != k || cached->codec.n() != A.n() ||
      cached->codec.field()->size() != A.field()->size()) {
    local.emplace(enumerate_powers(A.field(), A.n(), k));
    cached = &*local;
  }
  const PowerSet& S = *cached;
  const auto sums2 = r == 3 ? pair_sums(S) : std::vector<bool>{};
  const std::uint64_t target = S.codec.encode(A);
  auto found = find_sum_of_members(S, target, r, r == 3 ? &sums2 : nullptr);
  if (!found)
    fail(ErrorCode::NoDecomposition, "matrix is not a sum of " + std::to_string(r) + " " + std::to_string(k) +
                                         "-th powers (exhaustive)");
  WaringCertificate c{A.field(), k, {}, A, {}};
  nlohmann::json members = nlohmann::json::array();
  for (auto code : *found) {
    c.terms.push_back(S.codec.decode(*S.root_of(code)));
    members.push_back(code);
  }
  c.provenance.push_back({"exhaustive_fallback",
                          {{"power_set_size", S.members.size()}, {"terms", r}, {"member_codes", members}},
                          {}});
  return c;
}

namespace detail {

inline void check_emission(const WaringCertificate& c) {
  Matrix sum(c.field, c.n(), c.n());
  for (const auto& t : c.terms) sum = sum + pow(t, c.k);
  bool ok = sum == c.target;
  for (const auto& s : c.provenance)
    for (const auto& w : s.witnesses) ok = ok && w.holds();
  if (!ok)
    fail(ErrorCode::TheoremContradiction,
         "emitted certificate does not verify; provenance: " + dump_provenance(c.provenance));
}

inline WaringCertificate trivial_certificate(const Matrix& A, std::uint64_t k, unsigned r, const char* why) {
  WaringCertificate c{A.field(), k, {A}, A, {}};
  for (unsigned i = 1; i < r; ++i) c.terms.push_back(Matrix(A.field(), A.n(), A.n()));
  c.provenance.push_back({why, nlohmann::json::object(), {}});
  return c;
}

inline WaringCertificate scalar_certificate(const Matrix& A, std::uint64_t k, unsigned r) {
  const auto [E1, E2] = scalar_decompose(A.field(), A(0, 0), A.n(), k);
  WaringCertificate c{A.field(), k, {E1, E2}, A, {}};
  if (r == 3) c.terms.push_back(Matrix(A.field(), A.n(), A.n()));
  c.provenance.push_back({"scalar_decompose", {{"alpha", A(0, 0).index}}, {}});
  return c;
}

/// P = Phi_{b^k} for the least primitive b of F_{q^{n-1}}, and a k-th root of C_P.
struct DBlock {
  Poly P;
  Elem b;
  Matrix root;
};

inline DBlock d_block(TowerCache& cache, std::size_t n, std::uint64_t k) {
  const FieldTower& T1 = cache.get(static_cast<unsigned>(n - 1));
  const Elem b = find_primitive(*T1.top);
  const Elem bk = T1.top->pow(b, k);
  if (orbit_period(T1, bk) != T1.n())
    fail(ErrorCode::TheoremContradiction, "Phi_{b^k} is reducible for a primitive b (k < q^{(n-1)/2} + 1)");
  const Poly P = orbit_poly(T1, bk);
  return DBlock{P, b, kpower_companion_root(KPowerWitness{T1, P, b, k})};
}

}  // namespace detail

/// Three k-th powers summing to A (the gcd(k, q) = 1, q^n > (k-1)^4 regime,
/// and over F_2 the odd-k regime 2^n > (k-1)^4).
inline WaringCertificate three_powers(const Matrix& A, std::uint64_t k, TowerCache* cache = nullptr) {
  require(A.is_square() && A.n() >= 1, ErrorCode::InvalidArgument, "three_powers needs a square matrix");
  const FieldPtr& F = A.field();
  const std::size_t n = A.n();
  const std::uint64_t q = F->size();
  if (auto why = three_powers_violation(q, n, k)) fail(ErrorCode::PreconditionViolated, *why);
  std::optional<TowerCache> own;
  if (!cache) cache = &own.emplace(F);

  WaringCertificate c{F, k, {}, A, {}};
  if (k == 1) {
    c = detail::trivial_certificate(A, k, 3, "identity_exponent");
  } else if (A.is_scalar()) {
    c = detail::scalar_certificate(A, k, 3);
  } else if (q == 2) {
    const Poly P = find_irreducible_with_trace(F, static_cast<unsigned>(n),
                                               F->sub(A.trace(), F->from_int(static_cast<std::int64_t>(n % 2))),
                                               false);
    const auto us = split_unipotent(A, P);
    const Matrix V = unipotent_root(us.B, k);
    const auto [E2, E3] = irreducible_decompose(us.C, k);
    c.provenance.push_back({"frobenius_form", nlohmann::json::object(), {us.conjugator}});
    c.provenance.push_back({"split_unipotent", {{"P", detail::poly_json(P)}}, {us.c_witness}});
    c.provenance.push_back({"unipotent_root", {{"order", matrix_order(us.B)}}, {}});
    c.provenance.push_back({"irreducible_decompose", {{"char_poly", detail::poly_json(P)}}, {}});
    for (const auto& t : {V, E2, E3}) c.terms.push_back(detail::conjugate_back(us.conjugator, t));
  } else {
    const auto db = detail::d_block(*cache, n, k);
    // least t with P(t^k) != 0 for which an irreducible Q of the required
    // trace exists (in characteristic 2 there is none of degree 2, trace 0)
    std::optional<Elem> corner_root;
    std::optional<Poly> corner_q;
    for (std::uint64_t i = 1; i < q && !corner_root; ++i) {
      const Elem tk = F->pow(Elem{i}, k);
      if (db.P.evaluate(tk).is_zero()) continue;
      try {
        corner_q = find_irreducible_with_trace(F, static_cast<unsigned>(n),
                                               F->sub(F->sub(A.trace(), poly_trace(db.P)), tk), false);
        corner_root = Elem{i};
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoSuchPolynomial) throw;
      }
    }
    if (!corner_root) {
      // Only (q, n, k) = (3, 2, 2) reaches this in the supported regime: all
      // nonzero k-th powers coincide with the single eigenvalue of C_P.
      c = exhaustive_fallback(A, k, 3);
      c.provenance.insert(c.provenance.begin(),
                          {"corner_unavailable", {{"P", detail::poly_json(db.P)}, {"b", db.b.index}}, {}});
    } else {
      const Elem t = *corner_root;
      const Elem tk = F->pow(t, k);
      const Poly& Q = *corner_q;
      const auto split = split_nonscalar(A, db.P, tk, Q);
      const Matrix Droot = inverse(split.d_witness.u) * db.root * split.d_witness.u;
      const Vec d = split.S.block(0, n - 1, n - 1, 1).column(0);
      const Matrix R = block_root(Droot, d, t, k);
      const auto [E2, E3] = irreducible_decompose(split.E, k);
      c.provenance.push_back({"frobenius_form", nlohmann::json::object(), {split.conjugator}});
      c.provenance.push_back(
          {"d_block", {{"P", detail::poly_json(db.P)}, {"b", db.b.index}, {"extension_degree", n - 1}}, {}});
      c.provenance.push_back({"corner", {{"t", t.index}, {"t_k", tk.index}}, {}});
      c.provenance.push_back({"split_nonscalar", {{"Q", detail::poly_json(Q)}}, {split.d_witness, split.e_witness}});
      c.provenance.push_back({"block_root", nlohmann::json::object(), {}});
      c.provenance.push_back({"irreducible_decompose", {{"char_poly", detail::poly_json(Q)}}, {}});
      for (const auto& term : {R, E2, E3}) c.terms.push_back(detail::conjugate_back(split.conjugator, term));
    }
  }
  detail::check_emission(c);
  return c;
}

/// Two k-th powers summing to A, for n >= 7 and k < q.
inline WaringCertificate two_powers(const Matrix& A, std::uint64_t k, TowerCache* cache = nullptr) {
  require(A.is_square() && A.n() >= 1, ErrorCode::InvalidArgument, "two_powers needs a square matrix");
  const FieldPtr& F = A.field();
  const std::size_t n = A.n();
  const std::uint64_t q = F->size();
  if (auto why = two_powers_violation(q, n, k)) fail(ErrorCode::PreconditionViolated, *why);
  std::optional<TowerCache> own;
  if (!cache) cache = &own.emplace(F);

  WaringCertificate c{F, k, {}, A, {}};
  if (k == 1) {
    c = detail::trivial_certificate(A, k, 2, "identity_exponent");
  } else if (A.is_scalar()) {
    c = detail::scalar_certificate(A, k, 2);
  } else {
    const std::uint64_t p = F->characteristic();
    std::uint64_t kp = k, pa = 1;
    while (kp % p == 0) {
      kp /= p;
      pa *= p;
    }
    const auto db = detail::d_block(*cache, n, k);
    if (db.P.evaluate(kOne).is_zero())
      fail(ErrorCode::TheoremContradiction, "1 is an eigenvalue of the D-block");
    const Elem trQ = F->sub(F->sub(A.trace(), poly_trace(db.P)), kOne);
    const FieldTower& T = cache->get(static_cast<unsigned>(n));
    const KPowerWitness w = find_kpower_irreducible_with_trace(T, kp, trQ);
    const auto split = split_nonscalar(A, db.P, kOne, w.P);
    const Matrix Droot = inverse(split.d_witness.u) * db.root * split.d_witness.u;
    const Vec d = split.S.block(0, n - 1, n - 1, 1).column(0);
    const Matrix R = block_root(Droot, d, kOne, k);

    const Matrix G = companion(orbit_poly(T, w.a));
    const Matrix H = pa == 1 ? G : unipotent_root(G, pa);  // H^{p^a} = G
    const Matrix CQ = companion(w.P);
    const SimilarityWitness U = cyclic_similarity(CQ, pow(G, kp));
    const Matrix EQ = inverse(U.u) * H * U.u;  // EQ^k = C_Q
    const Matrix E2 = inverse(split.e_witness.u) * EQ * split.e_witness.u;

    c.provenance.push_back({"frobenius_form", nlohmann::json::object(), {split.conjugator}});
    c.provenance.push_back(
        {"d_block", {{"P", detail::poly_json(db.P)}, {"b", db.b.index}, {"extension_degree", n - 1}}, {}});
    c.provenance.push_back({"exponent_split", {{"p_part", pa}, {"coprime_part", kp}}, {}});
    c.provenance.push_back({"kpower_search", {{"Q", detail::poly_json(w.P)}, {"a", w.a.index}}, {U}});
    c.provenance.push_back({"split_nonscalar", {{"Q", detail::poly_json(w.P)}}, {split.d_witness, split.e_witness}});
    c.provenance.push_back({"block_root", nlohmann::json::object(), {}});
    for (const auto& term : {R, E2}) c.terms.push_back(detail::conjugate_back(split.conjugator, term));
  }
  detail::check_emission(c);
  return c;
}

}  // namespace matwaring

#endif  // MATWARING_DECOMPOSE_HPP
