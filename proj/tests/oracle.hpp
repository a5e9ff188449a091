// Naive reference arithmetic for tests. Shares nothing with the library
// beyond the index encoding: elements are digit vectors mod p, products are
// schoolbook polynomial products reduced by the modulus.
#ifndef MATWARING_TESTS_ORACLE_HPP
#define MATWARING_TESTS_ORACLE_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "matwaring/field.hpp"
#include "matwaring/matrix.hpp"

namespace oracle {

struct GF {
  std::uint64_t p;
  std::vector<std::uint64_t> modulus;  // monic over F_p, little-endian

  unsigned m() const { return static_cast<unsigned>(modulus.size() - 1); }
  std::uint64_t size() const {
    std::uint64_t s = 1;
    for (unsigned i = 0; i < m(); ++i) s *= p;
    return s;
  }

  std::vector<std::uint64_t> digits(std::uint64_t a) const {
    std::vector<std::uint64_t> d(m());
    for (auto& x : d) {
      x = a % p;
      a /= p;
    }
    return d;
  }
  std::uint64_t index(const std::vector<std::uint64_t>& d) const {
    std::uint64_t a = 0;
    for (std::size_t i = d.size(); i-- > 0;) a = a * p + d[i];
    return a;
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    auto x = digits(a), y = digits(b);
    for (unsigned i = 0; i < m(); ++i) x[i] = (x[i] + y[i]) % p;
    return index(x);
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    const auto x = digits(a), y = digits(b);
    std::vector<std::uint64_t> r(2 * m(), 0);
    for (unsigned i = 0; i < m(); ++i)
      for (unsigned j = 0; j < m(); ++j) r[i + j] = (r[i + j] + x[i] * y[j]) % p;
    for (std::size_t i = r.size(); i-- > m();) {
      const std::uint64_t c = r[i];
      if (!c) continue;
      for (unsigned j = 0; j <= m(); ++j) r[i - m() + j] = (r[i - m() + j] + (p - c) * modulus[j]) % p;
    }
    r.resize(m());
    return index(r);
  }

  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }

  std::uint64_t order(std::uint64_t a) const {
    std::uint64_t r = a, o = 1;
    while (r != 1) {
      r = mul(r, a);
      ++o;
    }
    return o;
  }

  /// a + a^q + ... over F_{p^m} / F_p.
  std::uint64_t absolute_trace(std::uint64_t a) const {
    std::uint64_t s = 0, cur = a;
    for (unsigned i = 0; i < m(); ++i) {
      s = add(s, cur);
      cur = pow(cur, p);
    }
    return s;
  }
};

/// Determinant by cofactor expansion over a prime field.
inline std::int64_t det_mod(const std::vector<std::vector<std::int64_t>>& a, std::int64_t p) {
  const std::size_t n = a.size();
  if (n == 1) return ((a[0][0] % p) + p) % p;
  std::int64_t s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<std::int64_t>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<std::int64_t> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(a[r][j]);
      minor.push_back(row);
    }
    const std::int64_t term = a[0][c] % p * det_mod(minor, p) % p;
    s = (s + (c % 2 ? p - term : term)) % p;
  }
  return s;
}

inline std::vector<std::vector<std::int64_t>> to_ints(const matwaring::Matrix& M) {
  std::vector<std::vector<std::int64_t>> a(M.rows(), std::vector<std::int64_t>(M.cols()));
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) a[i][j] = static_cast<std::int64_t>(M(i, j).index);
  return a;
}

inline matwaring::Matrix random_matrix(const matwaring::FieldPtr& F, std::size_t r, std::size_t c,
                                       std::mt19937_64& rng) {
  matwaring::Matrix M(F, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) M(i, j) = matwaring::Elem{rng() % F->size()};
  return M;
}

inline std::uint64_t divisor_count(std::uint64_t m) {
  std::uint64_t d = 0;
  for (std::uint64_t i = 1; i * i <= m; ++i)
    if (m % i == 0) d += (i * i == m) ? 1 : 2;
  return d;
}

}  // namespace oracle

#endif  // MATWARING_TESTS_ORACLE_HPP
