#ifndef MATWARING_POWERSET_HPP
#define MATWARING_POWERSET_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "matwaring/error.hpp"
#include "matwaring/field.hpp"
#include "matwaring/matrix.hpp"
#include "matwaring/numtheory.hpp"

namespace matwaring {

inline constexpr std::uint64_t kEnumerationBudget = std::uint64_t{1} << 24;

/// Packs square matrices over F_q as base-q digit strings, row-major,
/// entry (0,0) least significant.
class MatrixCodec {
 public:
  MatrixCodec(FieldPtr field, std::size_t n) : field_(std::move(field)), n_(n) {
    auto total = nt::checked_pow(field_->size(), n * n);
    require(total && *total <= kEnumerationBudget, ErrorCode::BudgetExceeded,
            "q^(n^2) exceeds the enumeration budget of 2^24");
    total_ = *total;
  }

  std::uint64_t total() const { return total_; }
  std::size_t n() const { return n_; }
  const FieldPtr& field() const { return field_; }

  std::uint64_t encode(const Matrix& m) const {
    std::uint64_t code = 0;
    for (std::size_t i = m.entries().size(); i-- > 0;) code = code * field_->size() + m.entries()[i].index;
    return code;
  }

  Matrix decode(std::uint64_t code) const {
    std::vector<Elem> e(n_ * n_);
    for (auto& x : e) {
      x = Elem{code % field_->size()};
      code /= field_->size();
    }
    return Matrix(field_, n_, n_, std::move(e));
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return combine(a, b, false); }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return combine(a, b, true); }

 private:
  std::uint64_t combine(std::uint64_t a, std::uint64_t b, bool subtract) const {
    const std::uint64_t q = field_->size();
    std::uint64_t out = 0, scale = 1;
    for (std::size_t i = 0; i < n_ * n_; ++i) {
      const Elem x{a % q}, y{b % q};
      out += (subtract ? field_->sub(x, y) : field_->add(x, y)).index * scale;
      scale *= q;
      a /= q;
      b /= q;
    }
    return out;
  }

  FieldPtr field_;
  std::size_t n_;
  std::uint64_t total_ = 0;
};

/// The set { X^k : X in M_n(F_q) } with, for each member, its least root by
/// packed code.
struct PowerSet {
  MatrixCodec codec;
  std::uint64_t k;
  std::vector<std::uint32_t> members;  // ascending packed codes
  std::vector<std::uint32_t> roots;    // parallel to members
  std::vector<bool> contains;          // indexed by packed code

  bool has(std::uint64_t code) const { return contains[code]; }

  std::optional<std::uint64_t> root_of(std::uint64_t code) const {
    auto it = std::lower_bound(members.begin(), members.end(), static_cast<std::uint32_t>(code));
    if (it == members.end() || *it != code) return std::nullopt;
    return roots[static_cast<std::size_t>(it - members.begin())];
  }
};

/// Enumerates X^k for every X in M_n(F_q); requires q^(n^2) <= 2^24.
inline PowerSet enumerate_powers(const FieldPtr& F, std::size_t n, std::uint64_t k) {
  MatrixCodec codec(F, n);
  const std::uint64_t total = codec.total();
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  std::vector<std::uint32_t> least_root(total, kUnset);
  for (std::uint64_t code = 0; code < total; ++code) {
    const std::uint64_t pc = codec.encode(pow(codec.decode(code), k));
    if (least_root[pc] == kUnset) least_root[pc] = static_cast<std::uint32_t>(code);
  }
  PowerSet s{codec, k, {}, {}, std::vector<bool>(total, false)};
  for (std::uint64_t c = 0; c < total; ++c) {
    if (least_root[c] == kUnset) continue;
    s.members.push_back(static_cast<std::uint32_t>(c));
    s.roots.push_back(least_root[c]);
    s.contains[c] = true;
  }
  return s;
}

/// Bitset of the two-fold sumset S + S.
inline std::vector<bool> pair_sums(const PowerSet& S) {
  const auto& c = S.codec;
  std::vector<bool> out(c.total(), false);
  for (std::size_t i = 0; i < S.members.size(); ++i)
    for (std::size_t j = i; j < S.members.size(); ++j) out[c.add(S.members[i], S.members[j])] = true;
  return out;
}

/// Least-encoding way to write `target` as a sum of r members (r in {1,2,3}):
/// the first member ascending, then the second, then the third.
inline std::optional<std::vector<std::uint64_t>> find_sum_of_members(const PowerSet& S, std::uint64_t target,
                                                                     unsigned r, const std::vector<bool>* sums2) {
  const auto& c = S.codec;
  if (r == 1) {
    if (S.has(target)) return std::vector<std::uint64_t>{target};
    return std::nullopt;
  }
  for (std::uint32_t s1 : S.members) {
    const std::uint64_t rest = c.sub(target, s1);
    if (r == 2) {
      if (S.has(rest)) return std::vector<std::uint64_t>{s1, rest};
      continue;
    }
    if (sums2 && !(*sums2)[rest]) continue;
    for (std::uint32_t s2 : S.members) {
      const std::uint64_t last = c.sub(rest, s2);
      if (S.has(last)) return std::vector<std::uint64_t>{s1, s2, last};
    }
  }
  return std::nullopt;
}

}  // namespace matwaring

#endif  // MATWARING_POWERSET_HPP
