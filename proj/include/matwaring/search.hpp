#ifndef MATWARING_SEARCH_HPP
#define MATWARING_SEARCH_HPP

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "matwaring/error.hpp"
#include "matwaring/field.hpp"
#include "matwaring/poly.hpp"
#include "matwaring/tower.hpp"

namespace matwaring {

/// Least u >= 1 with phi^u(a) = a. Always divides n.
inline unsigned orbit_period(const FieldTower& T, Elem a) {
  Elem cur = T.frobenius(a);
  unsigned u = 1;
  while (cur != a) {
    if (u == T.n()) fail(ErrorCode::TheoremContradiction, "Frobenius orbit does not close after n steps");
    cur = T.frobenius(cur);
    ++u;
  }
  if (T.n() % u != 0) fail(ErrorCode::TheoremContradiction, "orbit period does not divide n");
  return u;
}

/// (X - a)(X - phi(a))...(X - phi^{n-1}(a)), returned over the mid level.
inline Poly orbit_poly(const FieldTower& T, Elem a) {
  const Field& L = *T.top;
  std::vector<Elem> c{kOne};  // running product, little-endian, over the top level
  Elem root = a;
  for (unsigned i = 0; i < T.n(); ++i) {
    const Elem nr = L.neg(root);
    std::vector<Elem> next(c.size() + 1, kZero);
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j + 1] = L.add(next[j + 1], c[j]);
      next[j] = L.add(next[j], L.mul(c[j], nr));
    }
    c = std::move(next);
    root = T.frobenius(root);
  }
  for (Elem e : c) {
    if (!T.in_mid(e))
      fail(ErrorCode::CoefficientNotInBase, "orbit polynomial coefficient " + std::to_string(e.index) +
                                                " is outside the base field");
  }
  return Poly(T.mid, std::move(c));
}

/// A k-power irreducible polynomial P = Phi_{a^k} together with the element a.
struct KPowerWitness {
  FieldTower tower;
  Poly P;
  Elem a;
  std::uint64_t k;
};

/// The least monic polynomial of degree n with the
/// coefficient of X^{n-1} pinned to -t that is irreducible (and primitive
/// when requested).
inline Poly find_irreducible_with_trace(const FieldPtr& F, unsigned n, Elem t, bool require_primitive) {
  require(n >= 1, ErrorCode::InvalidArgument, "degree must be >= 1");
  require(F->contains(t), ErrorCode::InvalidArgument, "trace outside the field");
  const std::uint64_t q = F->size();
  // A trace-zero a in F_{q^2} has a^{q-1} = -1, so its order divides 2(q-1)
  // and it is never primitive; (q, n) = (4, 3) is the one other gap.
  if (require_primitive && t.is_zero() && (n == 2 || (q == 4 && n == 3))) {
    fail(ErrorCode::NoSuchPolynomial, "no primitive polynomial of trace 0 exists for (q,n) = (" +
                                          std::to_string(q) + "," + std::to_string(n) + ")");
  }
  const std::uint64_t count = nt::pow_or_throw(q, n - 1);
  const Elem pinned = F->neg(t);
  for (std::uint64_t code = 0; code < count; ++code) {
    std::vector<Elem> v(n + 1);
    std::uint64_t c = code;
    for (unsigned i = 0; i + 1 < n; ++i) {
      v[i] = Elem{c % q};
      c /= q;
    }
    v[n - 1] = pinned;
    v[n] = kOne;
    Poly P(F, std::move(v));
    if (!is_irreducible(P)) continue;
    if (require_primitive && !is_primitive(P)) continue;
    return P;
  }
  fail(ErrorCode::NoSuchPolynomial, std::string("no ") + (require_primitive ? "primitive" : "irreducible") +
                                        " polynomial of degree " + std::to_string(n) + " with trace " +
                                        std::to_string(t.index) + " over " + F->name());
}

/// True in the region where a k-power irreducible polynomial with any
/// prescribed trace is known to exist: n >= 7, gcd(k, q) = 1, k < q.
inline bool kpower_search_guaranteed(std::uint64_t q, unsigned n, std::uint64_t k) {
  return n >= 7 && std::gcd(k, q) == 1 && k < q;
}

/// First a (ascending index) in F_{q^n} whose power a^k has a full Frobenius
/// orbit and trace t; returns (Phi_{a^k}, a, k).
inline KPowerWitness find_kpower_irreducible_with_trace(const FieldTower& T, std::uint64_t k, Elem t) {
  require(k >= 1, ErrorCode::InvalidArgument, "k must be >= 1");
  require(T.in_mid(t), ErrorCode::InvalidArgument, "trace must lie in the base field");
  const Field& L = *T.top;
  for (std::uint64_t i = 0; i < L.size(); ++i) {
    const Elem a{i};
    const Elem ak = L.pow(a, k);
    if (T.trace(ak) != t) continue;
    if (orbit_period(T, ak) != T.n()) continue;
    return KPowerWitness{T, orbit_poly(T, ak), a, k};
  }
  const std::string what = "no " + std::to_string(k) + "-power irreducible polynomial of degree " +
                           std::to_string(T.n()) + " with trace " + std::to_string(t.index) + " over " +
                           T.mid->name();
  if (kpower_search_guaranteed(T.q(), T.n(), k)) fail(ErrorCode::TheoremContradiction, what);
  fail(ErrorCode::NoSuchPolynomial, what);
}

}  // namespace matwaring

#endif  // MATWARING_SEARCH_HPP
