#ifndef MATWARING_TOWER_HPP
#define MATWARING_TOWER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "matwaring/error.hpp"
#include "matwaring/field.hpp"
#include "matwaring/numtheory.hpp"
#include "matwaring/poly.hpp"

namespace matwaring {

/// base[y]/(modulus) after checking that the modulus is monic and irreducible.
inline FieldPtr make_extension(const FieldPtr& base, const Poly& modulus) {
  require(modulus.is_monic(), ErrorCode::NotMonic, "extension modulus must be monic");
  require(modulus.degree() >= 1, ErrorCode::InvalidArgument, "extension modulus must have degree >= 1");
  require(is_irreducible(modulus), ErrorCode::NotIrreducible,
          "modulus " + modulus.to_string() + " is reducible over " + base->name());
  return Field::extension_unchecked(base, modulus.coeffs());
}

/// Extension by the canonical (least-encoding) irreducible modulus.
inline FieldPtr make_extension(const FieldPtr& base, unsigned degree) {
  return Field::extension_unchecked(base, canonical_modulus(base, degree).coeffs());
}

/// F_q = F_p or F_p[x]/(modulus). With m = 1 the prime field itself is returned.
inline FieldPtr make_field(std::uint64_t p, unsigned m, const std::optional<std::vector<Elem>>& modulus = {}) {
  FieldPtr Fp = Field::prime(p);
  require(m >= 1, ErrorCode::InvalidArgument, "extension degree must be >= 1");
  if (m == 1 && !modulus) return Fp;
  if (modulus) {
    Poly M(Fp, *modulus);
    require(M.degree() == static_cast<int>(m), ErrorCode::InvalidArgument,
            "modulus degree does not match the extension degree");
    return make_extension(Fp, M);
  }
  return make_extension(Fp, m);
}

/// Parsed form of a field specification string "p" or "p^m", with an
/// optional explicit modulus given as comma-separated base-p coefficients,
/// little-endian, leading 1 included.
struct FieldSpec {
  std::uint64_t p = 0;
  unsigned m = 1;
  std::optional<std::vector<Elem>> modulus;

  static FieldSpec parse(std::string_view text, std::string_view modulus_text = {}) {
    FieldSpec s;
    const auto caret = text.find('^');
    try {
      s.p = std::stoull(std::string(text.substr(0, caret)));
      if (caret != std::string_view::npos) s.m = static_cast<unsigned>(std::stoul(std::string(text.substr(caret + 1))));
    } catch (const std::logic_error&) {
      fail(ErrorCode::ParseError, "bad field specification '" + std::string(text) + "'");
    }
    require(nt::is_prime(s.p), ErrorCode::ParseError, "field characteristic must be prime");
    require(s.m >= 1, ErrorCode::ParseError, "extension degree must be >= 1");
    if (!modulus_text.empty()) {
      s.modulus = Poly::parse(Field::prime(s.p), modulus_text).coeffs();
    }
    return s;
  }

  FieldPtr build() const { return make_field(p, m, modulus); }
};

/// F_p <= F_q <= F_{q^n}. `top` is an extension of `mid`; mid-level elements
/// embed into the top level with the same index.
struct FieldTower {
  FieldPtr mid;
  FieldPtr top;

  FieldTower(FieldPtr mid_field, unsigned n) : mid(std::move(mid_field)), top(make_extension(mid, n)) {}
  FieldTower(FieldPtr mid_field, const Poly& top_modulus)
      : mid(std::move(mid_field)), top(make_extension(mid, top_modulus)) {}

  std::uint64_t p() const { return mid->characteristic(); }
  unsigned m() const { return mid->absolute_degree(); }
  std::uint64_t q() const { return mid->size(); }
  unsigned n() const { return top->degree(); }

  bool in_mid(Elem a) const { return a.index < mid->size(); }

  /// phi(a) = a^q on the top level.
  Elem frobenius(Elem a) const { return top->pow(a, q()); }

  /// a + phi(a) + ... + phi^{n-1}(a), an element of F_q.
  Elem trace(Elem a) const {
    Elem s = kZero, cur = a;
    for (unsigned i = 0; i < n(); ++i) {
      s = top->add(s, cur);
      cur = frobenius(cur);
    }
    return s;
  }
};

/// Multiplicative order of a nonzero element.
inline std::uint64_t element_order(const Field& F, Elem a) {
  if (a.is_zero()) fail(ErrorCode::ZeroOrderUndefined, "order of zero is undefined");
  const auto& fac = F.group_factorization();
  if (!fac) fail(ErrorCode::BudgetExceeded, "group order of " + F.name() + " could not be factored");
  return nt::order_by_stripping(F.size() - 1, *fac, [&](std::uint64_t e) { return F.pow(a, e) == kOne; });
}

/// Least-index element of full multiplicative order.
inline Elem find_primitive(const Field& F) {
  auto g = F.generator();
  if (!g) fail(ErrorCode::BudgetExceeded, "group order of " + F.name() + " could not be factored");
  return *g;
}

namespace detail {

inline constexpr std::uint64_t kBabyStepCap = std::uint64_t{1} << 22;

/// Least x in [0, r) with g^x = h, where g has order r. Baby-step/giant-step
/// with at most kBabyStepCap stored steps; tiny groups are scanned directly.
inline std::optional<std::uint64_t> bsgs(const Field& F, Elem g, Elem h, std::uint64_t r) {
  if (r <= 64) {
    Elem cur = kOne;
    for (std::uint64_t x = 0; x < r; ++x) {
      if (cur == h) return x;
      cur = F.mul(cur, g);
    }
    return std::nullopt;
  }
  std::uint64_t m = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(r))));
  m = std::min(m, kBabyStepCap);
  std::unordered_map<std::uint64_t, std::uint64_t> table;
  table.reserve(m * 2);
  Elem cur = kOne;
  for (std::uint64_t j = 0; j < m; ++j) {
    table.emplace(cur.index, j);  // keeps the least j per value
    cur = F.mul(cur, g);
  }
  const Elem giant = F.inv(F.pow(g, m));
  Elem gamma = h;
  for (std::uint64_t i = 0; i * m < r; ++i) {
    auto it = table.find(gamma.index);
    if (it != table.end()) return i * m + it->second;
    gamma = F.mul(gamma, giant);
  }
  return std::nullopt;
}

}  // namespace detail

/// Least e >= 0 with g^e = a. Pohlig-Hellman over the factorization of ord(g),
/// baby-step/giant-step in each prime-order subgroup.
inline std::uint64_t discrete_log(const Field& F, Elem g, Elem a) {
  if (a.is_zero()) fail(ErrorCode::NoLogarithm, "zero has no logarithm");
  if (a == kOne) return 0;
  if (F.has_tables() && F.generator() && g == *F.generator()) return F.table_log(a);

  const std::uint64_t order = element_order(F, g);
  std::uint64_t result = 0, modulus = 1;
  for (auto [r, e] : nt::factor(order)) {
    std::uint64_t re = nt::pow_or_throw(r, e);
    const Elem gi = F.pow(g, order / re);
    const Elem ai = F.pow(a, order / re);
    const Elem gamma = F.pow(gi, re / r);  // order r
    std::uint64_t x = 0, rj = 1;
    for (unsigned j = 0; j < e; ++j) {
      const Elem h = F.pow(F.mul(F.inv(F.pow(gi, x)), ai), re / (rj * r));
      auto d = detail::bsgs(F, gamma, h, r);
      if (!d) fail(ErrorCode::NoLogarithm, "element is not in the subgroup generated by g");
      x += *d * rj;
      rj *= r;
    }
    // CRT: result mod modulus, x mod re
    const std::uint64_t inv = *nt::modinv(modulus % re, re);
    const std::uint64_t t = nt::mulmod((x + re - result % re) % re, inv, re);
    result += modulus * t;
    modulus *= re;
  }
  if (F.pow(g, result) != a) fail(ErrorCode::NoLogarithm, "element is not a power of g");
  return result;
}

/// True iff a is a k-th power in F (zero counts).
inline bool is_kth_power(const Field& F, Elem a, std::uint64_t k) {
  if (a.is_zero() || k == 0) return a.is_zero() ? true : a == kOne;
  const std::uint64_t group = F.size() - 1;
  const std::uint64_t g = std::gcd(k, group);
  return F.pow(a, group / g) == kOne;
}

/// Least-index x with x^k = a, or nullopt. The part of k prime to p goes
/// through a discrete logarithm; the p-power part is undone with the inverse
/// of the absolute Frobenius x -> x^p.
inline std::optional<Elem> kth_root(const Field& F, Elem a, std::uint64_t k) {
  require(k >= 1, ErrorCode::InvalidArgument, "kth_root needs k >= 1");
  if (a.is_zero()) return kZero;
  const std::uint64_t p = F.characteristic();
  std::uint64_t kp = k;
  unsigned e = 0;
  while (kp % p == 0) {
    kp /= p;
    ++e;
  }
  const std::uint64_t group = F.size() - 1;
  const std::uint64_t g = std::gcd(kp, group);
  if (F.pow(a, group / g) != kOne) return std::nullopt;

  Elem y0;
  if (group == 1) {
    y0 = a;
  } else if (g == 1) {
    y0 = F.pow(a, *nt::modinv(kp % group, group));
  } else {
    const Elem gen = find_primitive(F);
    const std::uint64_t L = discrete_log(F, gen, a);
    const std::uint64_t sub = group / g;
    const std::uint64_t x = nt::mulmod(L / g, *nt::modinv((kp / g) % sub, sub), sub);
    y0 = F.pow(gen, x);
  }
  std::vector<Elem> ys{y0};
  if (g > 1) {
    const Elem zeta = F.pow(find_primitive(F), group / g);
    Elem cur = y0;
    for (std::uint64_t j = 1; j < g; ++j) {
      cur = F.mul(cur, zeta);
      ys.push_back(cur);
    }
  }
  // inverse of x -> x^{p^e} is x -> x^{p^{D - (e mod D)}}
  const unsigned D = F.absolute_degree();
  const unsigned back = (D - e % D) % D;
  const std::uint64_t frob_exp = nt::pow_or_throw(p, back);
  Elem best{~std::uint64_t{0}};
  for (Elem y : ys) {
    Elem x = (e == 0 || back == 0) ? y : F.pow(y, frob_exp);
    best = std::min(best, x);
  }
  if (F.pow(best, k) != a) fail(ErrorCode::TheoremContradiction, "kth_root produced a wrong root");
  return best;
}

/// True iff |F| > (k-1)^4, the regime where every element is a sum of two k-th powers.
inline bool two_powers_guaranteed(std::uint64_t field_size, std::uint64_t k) {
  if (k <= 1) return true;
  const nt::u128 b = static_cast<nt::u128>(k - 1) * (k - 1);
  const nt::u128 b4 = b * b;
  return static_cast<nt::u128>(field_size) > b4;
}

/// (x, y) with x^k + y^k = alpha: least x (by index) such that alpha - x^k
/// has a k-th root, then the least such root y.
inline std::pair<Elem, Elem> two_kth_powers(const Field& F, Elem alpha, std::uint64_t k) {
  require(k >= 1, ErrorCode::InvalidArgument, "two_kth_powers needs k >= 1");
  if (alpha.is_zero()) return {kZero, kZero};
  for (std::uint64_t i = 0; i < F.size(); ++i) {
    const Elem x{i};
    const Elem rest = F.sub(alpha, F.pow(x, k));
    if (!is_kth_power(F, rest, k)) continue;
    return {x, *kth_root(F, rest, k)};
  }
  if (two_powers_guaranteed(F.size(), k)) {
    fail(ErrorCode::TheoremContradiction, "no two-term decomposition of element " + std::to_string(alpha.index) +
                                              " in " + F.name() + " with k=" + std::to_string(k) +
                                              " although |F| > (k-1)^4");
  }
  fail(ErrorCode::NoDecomposition, "element " + std::to_string(alpha.index) + " is not a sum of two " +
                                       std::to_string(k) + "-th powers in " + F.name());
}

}  // namespace matwaring

#endif  // MATWARING_TOWER_HPP
