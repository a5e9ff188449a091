#ifndef MATWARING_NUMTHEORY_HPP
#define MATWARING_NUMTHEORY_HPP

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "matwaring/error.hpp"

namespace matwaring::nt {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 kTrialDivisionLimit = u64{1} << 20;
inline constexpr u64 kRhoIterationCap = u64{1} << 24;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 e, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

/// Returns base^e, or nullopt on 64-bit overflow.
inline std::optional<u64> checked_pow(u64 base, u64 e) {
  u128 r = 1;
  for (u64 i = 0; i < e; ++i) {
    r *= base;
    if (r > ~u64{0}) return std::nullopt;
  }
  return static_cast<u64>(r);
}

inline u64 pow_or_throw(u64 base, u64 e) {
  auto r = checked_pow(base, e);
  if (!r) fail(ErrorCode::BudgetExceeded, "integer power overflows 64 bits");
  return *r;
}

inline std::optional<u64> checked_lcm(u64 a, u64 b) {
  if (a == 0 || b == 0) return u64{0};
  u128 r = static_cast<u128>(a / std::gcd(a, b)) * b;
  if (r > ~u64{0}) return std::nullopt;
  return static_cast<u64>(r);
}

/// Inverse of a modulo m; nullopt when gcd(a, m) != 1.
inline std::optional<u64> modinv(u64 a, u64 m) {
  if (m == 1) return u64{0};
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    __int128 q = r / new_r;
    std::tie(t, new_t) = std::pair<__int128, __int128>{new_t, t - q * new_t};
    std::tie(r, new_r) = std::pair<__int128, __int128>{new_r, r - q * new_r};
  }
  if (r != 1) return std::nullopt;
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

inline u64 pollard_rho(u64 n, u64& budget) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      if (budget == 0) fail(ErrorCode::BudgetExceeded, "Pollard rho iteration cap reached");
      --budget;
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

inline void rho_split(u64 n, std::map<u64, unsigned>& out, u64& budget) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  u64 d = pollard_rho(n, budget);
  rho_split(d, out, budget);
  rho_split(n / d, out, budget);
}

}  // namespace detail

/// Prime factorization: trial division up to 2^20, then Pollard rho with an
/// iteration cap. Throws BudgetExceeded beyond the cap.
inline std::map<u64, unsigned> factor(u64 n) {
  std::map<u64, unsigned> out;
  if (n <= 1) return out;
  while (n % 2 == 0) {
    ++out[2];
    n /= 2;
  }
  for (u64 d = 3; d <= kTrialDivisionLimit && d * d <= n; d += 2) {
    while (n % d == 0) {
      ++out[d];
      n /= d;
    }
  }
  if (n > 1) {
    u64 budget = kRhoIterationCap;
    detail::rho_split(n, out, budget);
  }
  return out;
}

inline u64 divisor_count(u64 n) {
  u64 d = 1;
  for (auto [p, e] : factor(n)) d *= (e + 1);
  return d;
}

inline std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  for (auto [p, e] : factor(n)) out.push_back(p);
  return out;
}

/// Returns (p, m) when q = p^m is a prime power, otherwise nullopt.
inline std::optional<std::pair<u64, unsigned>> prime_power(u64 q) {
  if (q < 2) return std::nullopt;
  auto f = factor(q);
  if (f.size() != 1) return std::nullopt;
  return std::pair<u64, unsigned>{f.begin()->first, f.begin()->second};
}

/// Order of an element in a cyclic group of order `group_order`, given a
/// predicate testing whether the element raised to an exponent is the identity.
template <class IsIdentityAfterPow>
u64 order_by_stripping(u64 group_order, const std::map<u64, unsigned>& factorization,
                       IsIdentityAfterPow&& is_identity_after_pow) {
  u64 order = group_order;
  for (auto [p, e] : factorization) {
    for (unsigned i = 0; i < e; ++i) {
      if (order % p != 0) break;
      if (is_identity_after_pow(order / p)) {
        order /= p;
      } else {
        break;
      }
    }
  }
  return order;
}

}  // namespace matwaring::nt

#endif  // MATWARING_NUMTHEORY_HPP
