#ifndef MATWARING_FIELD_HPP
#define MATWARING_FIELD_HPP

#include <atomic>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matwaring/error.hpp"
#include "matwaring/numtheory.hpp"

namespace matwaring {

/// An element of some finite field, stored as its canonical index: the
/// little-endian base-p digits of the index are the coefficients in the
/// field's polynomial basis (flattened through every level of the tower).
/// Index 0 is zero and index 1 is one at every level.
struct Elem {
  std::uint64_t index = 0;

  constexpr auto operator<=>(const Elem&) const = default;
  constexpr bool is_zero() const { return index == 0; }
};

inline constexpr Elem kZero{0};
inline constexpr Elem kOne{1};

namespace detail {

/// Test hook: while set, squaring any element other than 0 and 1 comes out
/// off by one. The selftest uses it to confirm that arithmetic faults are
/// caught.
inline std::atomic<bool>& fault_injection() {
  static std::atomic<bool> flag{false};
  return flag;
}

}  // namespace detail

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// A finite field, either a prime field F_p or a simple extension
/// base[y]/(modulus). Immutable after construction; safe to share across
/// threads.
///
/// Fields of at most kTableLimit elements carry exp/log tables relative to the
/// least-index primitive element, which makes multiplication O(1). Larger fields
/// multiply by schoolbook polynomial arithmetic over the base.
class Field {
 public:
  static constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 20;

  /// F_p. Throws InvalidArgument if p is not prime.
  static FieldPtr prime(std::uint64_t p) {
    require(nt::is_prime(p), ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
    require(p < (std::uint64_t{1} << 32), ErrorCode::InvalidArgument, "characteristic too large");
    return FieldPtr(new Field(p));
  }

  /// base[y]/(modulus) for a monic modulus given as base elements,
  /// little-endian, including the leading 1. Irreducibility is NOT checked
  /// here; see make_extension() in tower.hpp for the verified constructor.
  static FieldPtr extension_unchecked(FieldPtr base, std::vector<Elem> modulus) {
    return FieldPtr(new Field(std::move(base), std::move(modulus)));
  }

  std::uint64_t characteristic() const { return p_; }
  std::uint64_t size() const { return size_; }
  /// Degree over the immediate base (1 for prime fields).
  unsigned degree() const { return degree_; }
  /// Degree over F_p.
  unsigned absolute_degree() const { return abs_degree_; }
  bool is_prime_field() const { return base_ == nullptr; }
  const FieldPtr& base() const { return base_; }
  /// Monic modulus over the base, little-endian (empty for prime fields).
  const std::vector<Elem>& modulus() const { return modulus_; }

  bool contains(Elem a) const { return a.index < size_; }
  bool has_tables() const { return !exp_.empty(); }

  /// Factorization of size()-1, when it fit in the factorization budget.
  const std::optional<std::map<std::uint64_t, unsigned>>& group_factorization() const {
    return group_factorization_;
  }
  /// Least-index primitive element; nullopt if the group order could not be factored.
  std::optional<Elem> generator() const { return generator_; }

  /// Image of an integer in the prime subfield.
  Elem from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += static_cast<std::int64_t>(p_);
    return Elem{static_cast<std::uint64_t>(r)};
  }

  Elem add(Elem a, Elem b) const {
    if (p_ == 2) return Elem{a.index ^ b.index};
    if (base_ == nullptr) {
      std::uint64_t s = a.index + b.index;
      return Elem{s >= p_ ? s - p_ : s};
    }
    std::uint64_t x = a.index, y = b.index, out = 0, scale = 1;
    while (x | y) {
      std::uint64_t d = x % p_ + y % p_;
      if (d >= p_) d -= p_;
      out += d * scale;
      scale *= p_;
      x /= p_;
      y /= p_;
    }
    return Elem{out};
  }

  Elem neg(Elem a) const {
    if (p_ == 2) return a;
    if (base_ == nullptr) return Elem{a.index == 0 ? 0 : p_ - a.index};
    std::uint64_t x = a.index, out = 0, scale = 1;
    while (x) {
      std::uint64_t d = x % p_;
      out += (d == 0 ? 0 : p_ - d) * scale;
      scale *= p_;
      x /= p_;
    }
    return Elem{out};
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    const Elem r = mul_exact(a, b);
    if (detail::fault_injection().load(std::memory_order_relaxed) && a == b && a.index > 1) [[unlikely]]
      return add(r, kOne);
    return r;
  }

  Elem mul_exact(Elem a, Elem b) const {
    if (a.index == 0 || b.index == 0) return kZero;
    if (has_tables()) {
      std::uint64_t s = std::uint64_t{log_[a.index]} + log_[b.index];
      if (s >= size_ - 1) s -= size_ - 1;
      return Elem{exp_[s]};
    }
    return mul_slow(a, b);
  }

  Elem inv(Elem a) const {
    if (a.index == 0) fail(ErrorCode::DivisionByZero, "inverse of zero");
    if (has_tables()) {
      std::uint64_t l = log_[a.index];
      return Elem{exp_[l == 0 ? 0 : size_ - 1 - l]};
    }
    if (base_ == nullptr) return Elem{*nt::modinv(a.index, p_)};
    return pow(a, size_ - 2);
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::uint64_t e) const {
    if (e == 0) return kOne;
    if (a.index == 0) return kZero;
    const std::uint64_t group = size_ - 1;
    if (has_tables()) {
      std::uint64_t l = nt::mulmod(log_[a.index], e % group, group);
      return Elem{exp_[l]};
    }
    if (base_ == nullptr) return Elem{nt::powmod(a.index, e, p_)};
    e %= group;
    if (e == 0) e = group;
    Elem r = kOne;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  /// Table logarithm relative to generator(); only valid when has_tables().
  std::uint64_t table_log(Elem a) const {
    require(has_tables() && a.index != 0 && a.index < size_, ErrorCode::InvalidArgument,
            "table_log needs tables and a nonzero element");
    return log_[a.index];
  }

  /// Coefficients of a over the immediate base, little-endian, length degree().
  std::vector<Elem> coefficients(Elem a) const {
    std::vector<Elem> out(degree_);
    const std::uint64_t q = base_size();
    for (unsigned i = 0; i < degree_; ++i) {
      out[i] = Elem{a.index % q};
      a.index /= q;
    }
    return out;
  }

  Elem from_coefficients(std::span<const Elem> coeffs) const {
    const std::uint64_t q = base_size();
    std::uint64_t out = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) out = out * q + coeffs[i].index;
    return Elem{out};
  }

  /// Size of the immediate base (p for prime fields).
  std::uint64_t base_size() const { return base_ ? base_->size() : p_; }

  /// Human-readable description, e.g. "GF(3^2)".
  std::string name() const {
    return "GF(" + std::to_string(p_) + (abs_degree_ > 1 ? "^" + std::to_string(abs_degree_) : "") + ")";
  }

 private:
  explicit Field(std::uint64_t p) : p_(p), size_(p), degree_(1), abs_degree_(1) { finish(); }

  Field(FieldPtr base, std::vector<Elem> modulus)
      : p_(base->characteristic()), base_(std::move(base)), modulus_(std::move(modulus)) {
    require(modulus_.size() >= 2 && modulus_.back() == kOne, ErrorCode::NotMonic,
            "extension modulus must be monic of degree >= 1");
    for (Elem c : modulus_)
      require(base_->contains(c), ErrorCode::InvalidArgument, "modulus coefficient outside base field");
    degree_ = static_cast<unsigned>(modulus_.size() - 1);
    abs_degree_ = degree_ * base_->absolute_degree();
    size_ = nt::pow_or_throw(base_->size(), degree_);
    require(size_ < (std::uint64_t{1} << 62), ErrorCode::BudgetExceeded, "field too large");
    finish();
  }

  Elem mul_slow(Elem a, Elem b) const {
    if (base_ == nullptr) return Elem{nt::mulmod(a.index, b.index, p_)};
    const Field& F = *base_;
    const std::uint64_t q = F.size();
    const unsigned d = degree_;
    std::vector<Elem> x(d), y(d), prod(2 * d - 1, kZero);
    for (unsigned i = 0; i < d; ++i) {
      x[i] = Elem{a.index % q};
      a.index /= q;
      y[i] = Elem{b.index % q};
      b.index /= q;
    }
    for (unsigned i = 0; i < d; ++i) {
      if (x[i].is_zero()) continue;
      for (unsigned j = 0; j < d; ++j) {
        if (y[j].is_zero()) continue;
        prod[i + j] = F.add(prod[i + j], F.mul(x[i], y[j]));
      }
    }
    for (unsigned i = 2 * d - 1; i-- > d;) {
      Elem c = prod[i];
      if (c.is_zero()) continue;
      for (unsigned j = 0; j < d; ++j) {
        if (modulus_[j].is_zero()) continue;
        prod[i - d + j] = F.sub(prod[i - d + j], F.mul(c, modulus_[j]));
      }
    }
    std::uint64_t out = 0;
    for (unsigned i = d; i-- > 0;) out = out * q + prod[i].index;
    return Elem{out};
  }

  void finish() {
    try {
      group_factorization_ = nt::factor(size_ - 1);
    } catch (const Error&) {
      group_factorization_.reset();
      return;
    }
    const std::uint64_t group = size_ - 1;
    for (std::uint64_t i = 1; i < size_; ++i) {
      Elem g{i};
      bool primitive = true;
      for (auto [r, e] : *group_factorization_) {
        if (pow(g, group / r) == kOne) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        generator_ = g;
        break;
      }
    }
    if (size_ <= kTableLimit && size_ > 2) {
      std::vector<std::uint32_t> exp(group), log(size_, 0);
      Elem cur = kOne;
      for (std::uint64_t i = 0; i < group; ++i) {
        exp[i] = static_cast<std::uint32_t>(cur.index);
        log[cur.index] = static_cast<std::uint32_t>(i);
        cur = mul_slow(cur, *generator_);
      }
      exp_ = std::move(exp);
      log_ = std::move(log);
    }
  }

  std::uint64_t p_ = 0;
  std::uint64_t size_ = 0;
  unsigned degree_ = 1;
  unsigned abs_degree_ = 1;
  FieldPtr base_;
  std::vector<Elem> modulus_;
  std::optional<std::map<std::uint64_t, unsigned>> group_factorization_;
  std::optional<Elem> generator_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

}  // namespace matwaring

#endif  // MATWARING_FIELD_HPP
