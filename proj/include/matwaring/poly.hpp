#ifndef MATWARING_POLY_HPP
#define MATWARING_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "matwaring/error.hpp"
#include "matwaring/field.hpp"
#include "matwaring/numtheory.hpp"

namespace matwaring {

/// Univariate polynomial over a Field; coefficients little-endian with no
/// trailing zeros (the zero polynomial has no coefficients).
class Poly {
 public:
  explicit Poly(FieldPtr field) : field_(std::move(field)) {}
  Poly(FieldPtr field, std::vector<Elem> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
    for (Elem e : c_)
      require(field_->contains(e), ErrorCode::InvalidArgument, "polynomial coefficient outside field");
    trim();
  }

  static Poly constant(FieldPtr field, Elem c) { return Poly(std::move(field), {c}); }
  static Poly x(FieldPtr field) { return Poly(std::move(field), {kZero, kOne}); }
  static Poly monomial(FieldPtr field, Elem c, unsigned deg) {
    std::vector<Elem> v(deg + 1, kZero);
    v[deg] = c;
    return Poly(std::move(field), std::move(v));
  }
  /// X - a
  static Poly linear(FieldPtr field, Elem a) {
    Elem na = field->neg(a);
    return Poly(std::move(field), {na, kOne});
  }

  const FieldPtr& field() const { return field_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back() == kOne; }
  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : kZero; }
  Elem leading() const { return c_.empty() ? kZero : c_.back(); }

  bool operator==(const Poly& o) const { return c_ == o.c_ && field_->size() == o.field_->size(); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    const Field& F = *a.field_;
    std::vector<Elem> r(std::max(a.c_.size(), b.c_.size()), kZero);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.add(a.coeff(i), b.coeff(i));
    return Poly(a.field_, std::move(r));
  }

  friend Poly operator-(const Poly& a, const Poly& b) {
    const Field& F = *a.field_;
    std::vector<Elem> r(std::max(a.c_.size(), b.c_.size()), kZero);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.sub(a.coeff(i), b.coeff(i));
    return Poly(a.field_, std::move(r));
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.field_);
    const Field& F = *a.field_;
    std::vector<Elem> r(a.c_.size() + b.c_.size() - 1, kZero);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a.c_[i], b.c_[j]));
    }
    return Poly(a.field_, std::move(r));
  }

  Poly scaled(Elem s) const {
    std::vector<Elem> r(c_);
    for (Elem& e : r) e = field_->mul(e, s);
    return Poly(field_, std::move(r));
  }

  Poly monic() const {
    require(!is_zero(), ErrorCode::DivisionByZero, "monic() of the zero polynomial");
    return scaled(field_->inv(leading()));
  }

  Elem evaluate(Elem x) const {
    Elem r = kZero;
    for (std::size_t i = c_.size(); i-- > 0;) r = field_->add(field_->mul(r, x), c_[i]);
    return r;
  }

  /// Comma-separated coefficient indices, little-endian ("1,0,1" is X^2 + 1).
  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(c_[i].index);
    }
    return s;
  }

  static Poly parse(FieldPtr field, std::string_view text) {
    std::vector<Elem> v;
    std::stringstream ss{std::string(text)};
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(Elem{std::stoull(tok, &used)});
        require(tok.find_first_not_of(" \t", used) == std::string::npos, ErrorCode::ParseError,
                "bad coefficient '" + tok + "'");
      } catch (const std::logic_error&) {
        fail(ErrorCode::ParseError, "bad coefficient '" + tok + "'");
      }
    }
    return Poly(std::move(field), std::move(v));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  FieldPtr field_;
  std::vector<Elem> c_;
};

/// Quotient and remainder; b must be nonzero.
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  require(!b.is_zero(), ErrorCode::DivisionByZero, "polynomial division by zero");
  const Field& F = *a.field();
  if (a.degree() < b.degree()) return {Poly(a.field()), a};
  std::vector<Elem> r(a.coeffs());
  const int db = b.degree();
  std::vector<Elem> q(a.degree() - db + 1, kZero);
  const Elem lead_inv = F.inv(b.leading());
  for (int i = a.degree(); i >= db; --i) {
    Elem c = r[i];
    if (c.is_zero()) continue;
    c = F.mul(c, lead_inv);
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], F.mul(c, b.coeffs()[j]));
  }
  r.resize(db);
  return {Poly(a.field(), std::move(q)), Poly(a.field(), std::move(r))};
}

inline Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }
inline Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }

/// Monic gcd (zero if both inputs are zero).
inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.is_zero() ? a : a.monic();
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

/// base^e mod m.
inline Poly powmod(Poly base, std::uint64_t e, const Poly& m) {
  Poly r = Poly::constant(m.field(), kOne) % m;
  base = base % m;
  while (e) {
    if (e & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

/// The trace convention P = X^n - t X^{n-1} - ...: returns t, the negated
/// coefficient of X^{n-1} of a monic P (the sum of the roots).
inline Elem poly_trace(const Poly& P) {
  require(P.is_monic(), ErrorCode::NotMonic, "poly_trace needs a monic polynomial");
  require(P.degree() >= 1, ErrorCode::InvalidArgument, "poly_trace needs degree >= 1");
  return P.field()->neg(P.coeff(P.degree() - 1));
}

/// Rabin's test: P of degree d over a field of size Q is irreducible iff
/// X^{Q^d} = X mod P and gcd(X^{Q^{d/r}} - X, P) = 1 for each prime r | d.
inline bool is_irreducible(const Poly& P) {
  require(P.degree() >= 1, ErrorCode::InvalidArgument, "is_irreducible needs a nonconstant polynomial");
  if (P.degree() == 1) return true;
  const Poly M = P.monic();
  const auto d = static_cast<std::uint64_t>(M.degree());
  const std::uint64_t Q = M.field()->size();
  const Poly X = Poly::x(M.field());
  if (M.coeff(0).is_zero()) return false;

  std::vector<std::uint64_t> checkpoints;
  for (std::uint64_t r : nt::prime_divisors(d)) checkpoints.push_back(d / r);

  Poly frob = X % M;  // X^{Q^i} mod M
  for (std::uint64_t i = 1; i <= d; ++i) {
    frob = powmod(frob, Q, M);
    if (i < d && std::find(checkpoints.begin(), checkpoints.end(), i) != checkpoints.end()) {
      if (gcd(frob - X, M).degree() != 0) return false;
    }
  }
  return frob == X % M;
}

/// True iff the class of X has order Q^d - 1 in F_Q[X]/(P); P must be irreducible.
inline bool is_primitive(const Poly& P) {
  require(P.is_monic(), ErrorCode::NotMonic, "is_primitive needs a monic polynomial");
  require(P.degree() >= 1, ErrorCode::InvalidArgument, "is_primitive needs degree >= 1");
  const std::uint64_t Q = P.field()->size();
  const std::uint64_t group = nt::pow_or_throw(Q, static_cast<std::uint64_t>(P.degree())) - 1;
  const Poly X = Poly::x(P.field());
  if ((X % P).is_zero()) return false;
  const Poly one = Poly::constant(P.field(), kOne) % P;
  for (std::uint64_t r : nt::prime_divisors(group)) {
    if (powmod(X, group / r, P) == one) return false;
  }
  return powmod(X, group, P) == one;
}

/// Monic polynomial of the given degree whose free coefficients (c_0 least
/// significant) encode `code` in base |F|.
inline Poly monic_from_code(const FieldPtr& F, unsigned degree, std::uint64_t code) {
  std::vector<Elem> v(degree + 1);
  for (unsigned i = 0; i < degree; ++i) {
    v[i] = Elem{code % F->size()};
    code /= F->size();
  }
  v[degree] = kOne;
  return Poly(F, std::move(v));
}

/// The least monic irreducible polynomial of the given degree, ordering by
/// the little-endian base-|F| integer of the coefficient vector.
inline Poly canonical_modulus(const FieldPtr& F, unsigned degree) {
  require(degree >= 1, ErrorCode::InvalidArgument, "modulus degree must be >= 1");
  const std::uint64_t count = nt::pow_or_throw(F->size(), degree);
  for (std::uint64_t code = 0; code < count; ++code) {
    Poly P = monic_from_code(F, degree, code);
    if (is_irreducible(P)) return P;
  }
  fail(ErrorCode::NoSuchPolynomial, "no irreducible polynomial found");
}

}  // namespace matwaring

#endif  // MATWARING_POLY_HPP
