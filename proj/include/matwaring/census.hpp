#ifndef MATWARING_CENSUS_HPP
#define MATWARING_CENSUS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "matwaring/error.hpp"
#include "matwaring/field.hpp"
#include "matwaring/numtheory.hpp"
#include "matwaring/poly.hpp"
#include "matwaring/powerset.hpp"
#include "matwaring/search.hpp"
#include "matwaring/tower.hpp"

namespace matwaring {

inline constexpr std::uint64_t kCountBudget = std::uint64_t{1} << 16;
inline constexpr long double kGuardBand = 1e-9L;

/// One checked inequality. `exact` is the computed quantity; the bound is a
/// lower bound unless `upper` is set. A vacuous lower bound (<= 0) holds
/// trivially and is flagged.
struct BoundReport {
  std::string kind;
  std::map<std::string, std::int64_t> params;
  long double exact = 0;
  long double bound = 0;
  bool upper = false;
  bool holds = false;
  bool vacuous = false;
};

inline BoundReport make_report(std::string kind, std::map<std::string, std::int64_t> params, long double exact,
                               long double bound, bool upper = false) {
  BoundReport r{std::move(kind), std::move(params), exact, bound, upper, false, false};
  r.holds = upper ? exact <= bound + kGuardBand : exact >= bound - kGuardBand;
  r.vacuous = !upper && bound <= 0;
  return r;
}

inline long double powl_(long double b, long double e) { return std::pow(b, e); }

// ---------------------------------------------------------------- closure

struct ClosureResult {
  bool holds = true;
  std::optional<std::uint64_t> counterexample;  // least packed code outside the sumset
};

/// Is every matrix of M_n(F_q) a sum of r members of S?
inline ClosureResult closure_check(const PowerSet& S, unsigned r) {
  require(r >= 1 && r <= 3, ErrorCode::InvalidArgument, "closure_check supports 1 to 3 terms");
  const auto sums2 = r == 3 ? pair_sums(S) : std::vector<bool>{};
  for (std::uint64_t c = 0; c < S.codec.total(); ++c) {
    if (!find_sum_of_members(S, c, r, r == 3 ? &sums2 : nullptr)) return {false, c};
  }
  return {true, std::nullopt};
}

// ---------------------------------------------------------------- orbits

/// Elements of F_{q^n} whose Frobenius orbit has full length n, against
/// q^n - d(q^n - 1)/2 * q^{n/2} - 1. `loose` gets the q^n - 1.77 q^{5n/6} - 1 form.
inline BoundReport orbit_distinct_count(const FieldPtr& F, unsigned n, BoundReport* loose = nullptr) {
  const std::uint64_t q = F->size();
  const auto qn = nt::checked_pow(q, n);
  require(n >= 1 && qn && *qn <= kCountBudget, ErrorCode::BudgetExceeded, "q^n exceeds 2^16");
  const FieldTower T(F, n);
  std::int64_t N = 0;
  for (std::uint64_t i = 0; i < *qn; ++i) N += orbit_period(T, Elem{i}) == n;
  const long double Q = static_cast<long double>(*qn);
  const long double d = static_cast<long double>(nt::divisor_count(*qn - 1));
  const std::map<std::string, std::int64_t> params{{"q", static_cast<std::int64_t>(q)}, {"n", n}};
  if (loose) *loose = make_report("orbit_count_loose", params, N, Q - 1.77L * powl_(Q, 5.0L / 6.0L) - 1);
  return make_report("orbit_count", params, N, Q - d / 2 * std::sqrt(Q) - 1);
}

// ---------------------------------------------------------------- traces

/// tr[x] = x + phi(x) + ... + phi^{n-1}(x) for every x in F_{q^n}, by
/// F_q-linearity from the traces of the basis powers y^j.
inline std::vector<std::uint32_t> trace_table(const FieldTower& T) {
  const std::uint64_t q = T.q();
  const std::uint64_t Q = T.top->size();
  std::vector<Elem> basis_trace;
  for (std::uint64_t pj = 1; pj < Q; pj *= q) basis_trace.push_back(T.trace(Elem{pj}));
  std::vector<std::uint32_t> tr(Q, 0);
  std::uint64_t pj = 1;
  unsigned j = 0;
  for (std::uint64_t x = 1; x < Q; ++x) {
    if (x == pj * q) {
      pj *= q;
      ++j;
    }
    const Elem c{x / pj};
    tr[x] = static_cast<std::uint32_t>(T.mid->add(Elem{tr[x % pj]}, T.mid->mul(c, basis_trace[j])).index);
  }
  return tr;
}

/// N_t = #{x in F_{q^n} : Tr(x^k) = t} for every t. x -> x^k is
/// gcd(k, q^n - 1)-to-one onto the subgroup of that index, which is walked
/// directly.
inline std::vector<std::int64_t> trace_fiber_counts(const FieldTower& T, const std::vector<std::uint32_t>& tr,
                                                    std::uint64_t k) {
  const Field& L = *T.top;
  const std::uint64_t Q = L.size();
  std::vector<std::int64_t> counts(T.q(), 0);
  counts[tr[0]] += 1;  // x = 0
  const std::uint64_t d = std::gcd(k, Q - 1);
  const Elem h = L.pow(*L.generator(), d);
  Elem y = kOne;
  for (std::uint64_t i = 0; i < (Q - 1) / d; ++i) {
    counts[tr[y.index]] += static_cast<std::int64_t>(d);
    y = L.mul(y, h);
  }
  return counts;
}

inline long double trace_fiber_bound(std::uint64_t q, unsigned n) {
  const long double Q = static_cast<long double>(q);
  return powl_(Q, n - 1) + powl_(Q, n / 2 + 2) - powl_(Q, n / 2 + 3);
}

/// N_t against q^{n-1} + q^{floor(n/2)+2} - q^{floor(n/2)+3}; needs gcd(k, q) = 1, k < q, n >= 2.
inline BoundReport trace_fiber_count(const FieldPtr& F, unsigned n, std::uint64_t k, Elem t) {
  const std::uint64_t q = F->size();
  require(n >= 2 && k >= 1 && k < q && std::gcd(k, q) == 1, ErrorCode::PreconditionViolated,
          "trace fiber count needs n >= 2, k < q and gcd(k, q) = 1");
  const auto qn = nt::checked_pow(q, n);
  require(qn && *qn <= kCountBudget, ErrorCode::BudgetExceeded, "q^n exceeds 2^16");
  require(F->contains(t), ErrorCode::InvalidArgument, "t is not in F_q");
  const FieldTower T(F, n);
  const auto counts = trace_fiber_counts(T, trace_table(T), k);
  return make_report("trace_fiber",
                     {{"q", static_cast<std::int64_t>(q)}, {"n", n}, {"k", static_cast<std::int64_t>(k)},
                      {"t", static_cast<std::int64_t>(t.index)}},
                     counts[t.index], trace_fiber_bound(q, n));
}

// ---------------------------------------------------------------- divisors

inline constexpr long double kDivisorConstant = 3.53L;

inline BoundReport divisor_bound_check(std::uint64_t m) {
  require(m >= 1, ErrorCode::InvalidArgument, "m must be positive");
  const long double d = static_cast<long double>(nt::divisor_count(m));
  return make_report("divisor", {{"m", static_cast<std::int64_t>(m)}}, d,
                     kDivisorConstant * std::cbrt(static_cast<long double>(m)), true);
}

/// d(m) for 1 <= m <= limit by a divisor sieve.
inline std::vector<std::uint32_t> divisor_counts_upto(std::uint64_t limit) {
  std::vector<std::uint32_t> d(limit + 1, 0);
  for (std::uint64_t i = 1; i <= limit; ++i)
    for (std::uint64_t j = i; j <= limit; j += i) ++d[j];
  return d;
}

/// Sweep of m in [1, limit]: one row carrying the worst ratio d(m) / m^{1/3},
/// plus one row per failing m.
inline std::vector<BoundReport> divisor_sweep(std::uint64_t limit) {
  const auto d = divisor_counts_upto(limit);
  std::vector<BoundReport> out;
  long double worst = 0;
  std::uint64_t worst_m = 1;
  for (std::uint64_t m = 1; m <= limit; ++m) {
    const long double ratio = d[m] / std::cbrt(static_cast<long double>(m));
    if (ratio > worst) {
      worst = ratio;
      worst_m = m;
    }
    if (ratio > kDivisorConstant + kGuardBand)
      out.push_back(make_report("divisor", {{"m", static_cast<std::int64_t>(m)}}, d[m],
                                kDivisorConstant * std::cbrt(static_cast<long double>(m)), true));
  }
  out.insert(out.begin(), make_report("divisor_sweep_worst_ratio",
                                      {{"m_max", static_cast<std::int64_t>(limit)},
                                       {"m", static_cast<std::int64_t>(worst_m)}},
                                      worst, kDivisorConstant, true));
  return out;
}

// ---------------------------------------------------------------- (#)

/// Verdicts on the sufficient condition for prescribed-trace k-power
/// polynomials: the final inequality in q and n, and two readings of the
/// intermediate display (exponent n/3 + 2 as printed, floor(n/2) + 2 as in
/// the trace-fiber bound).
struct SharpReport {
  std::uint64_t q = 0;
  unsigned n = 0;
  std::uint64_t k = 1;
  long double final_lhs = 0, final_rhs = 0;
  bool final_holds = false;
  long double display_lhs = 0, display_rhs = 0;
  bool display_holds = false;
  long double floor_lhs = 0;
  bool floor_holds = false;
  bool readings_diverge = false;
};

inline SharpReport sharp_condition(std::uint64_t q, unsigned n, std::uint64_t k = 1) {
  require(q >= 2 && n >= 1 && k >= 1, ErrorCode::InvalidArgument, "need q >= 2, n >= 1, k >= 1");
  SharpReport r{q, n, k};
  const long double Q = static_cast<long double>(q), N = n, K = static_cast<long double>(k);
  r.final_lhs = powl_(Q, 5 * N / 6 - 2) + powl_(Q, N / 6 + 1) - powl_(Q, N / 3 + 2);
  r.final_rhs = 1.77L + powl_(Q, -N / 6);
  r.final_holds = r.final_lhs > r.final_rhs + kGuardBand;

  const long double qn = powl_(Q, N);
  long double d = 0;
  if (qn < 1.8e19L) d = static_cast<long double>(nt::divisor_count(nt::pow_or_throw(q, n) - 1));
  else d = kDivisorConstant * std::cbrt(qn - 1);  // beyond u64: the divisor bound stands in
  r.display_rhs = d / 2 * powl_(Q, N / 2) + 1;
  r.display_lhs = (powl_(Q, N - 1) + powl_(Q, N / 3 + 2) - powl_(Q, N / 2 + 3)) / K;
  r.display_holds = r.display_lhs > r.display_rhs + kGuardBand;
  r.floor_lhs = (powl_(Q, N - 1) + powl_(Q, n / 2 + 2) - powl_(Q, n / 2 + 3)) / K;
  r.floor_holds = r.floor_lhs > r.display_rhs + kGuardBand;
  r.readings_diverge = r.display_holds != r.floor_holds;
  return r;
}

// ---------------------------------------------------------------- Cohen

struct CohenRow {
  std::uint64_t q = 0;
  unsigned n = 0;
  Elem t;
  std::optional<Poly> found;  // least-code primitive polynomial with trace t
  bool exception = false;     // (q, n, t) is one of the stated exceptions
  bool holds = false;         // existence matches the stated exception list
};

inline bool is_cohen_exception(std::uint64_t q, unsigned n, Elem t) {
  return t.is_zero() && ((q == 2 && n == 2) || (q == 4 && n == 3));
}

/// Exhaustive search, for every t, for a primitive polynomial of degree n
/// with trace t (coefficient of X^{n-1} equal to -t).
inline std::vector<CohenRow> cohen_check(const FieldPtr& F, unsigned n) {
  const std::uint64_t q = F->size();
  const auto qn = nt::checked_pow(q, n);
  require(n >= 2 && qn && *qn <= kCountBudget, ErrorCode::BudgetExceeded, "q^n exceeds 2^16");
  const std::uint64_t free_count = *qn / q;  // choices for coefficients 0..n-2
  std::vector<CohenRow> rows;
  for (std::uint64_t ti = 0; ti < q; ++ti) {
    CohenRow row{q, n, Elem{ti}, std::nullopt, is_cohen_exception(q, n, Elem{ti}), false};
    const Elem top = F->neg(Elem{ti});
    for (std::uint64_t code = 0; code < free_count && !row.found; ++code) {
      std::vector<Elem> c(n + 1);
      std::uint64_t rest = code;
      for (unsigned i = 0; i + 1 < n; ++i) {
        c[i] = Elem{rest % q};
        rest /= q;
      }
      c[n - 1] = top;
      c[n] = kOne;
      if (c[0].is_zero()) continue;
      Poly P(F, std::move(c));
      if (is_primitive(P)) row.found = std::move(P);
    }
    row.holds = row.found.has_value() != row.exception;
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------- plumbing

/// Runs f(i) for i in [0, count) on `workers` threads; results land by index.
template <class R>
std::vector<R> parallel_map(std::size_t count, unsigned workers, const std::function<R(std::size_t)>& f) {
  std::vector<R> out(count);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) out[i] = f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Prime powers q with lo <= q <= hi, ascending.
inline std::vector<std::uint64_t> prime_powers(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = std::max<std::uint64_t>(lo, 2); q <= hi; ++q)
    if (nt::prime_power(q)) out.push_back(q);
  return out;
}

inline FieldPtr field_of_order(std::uint64_t q) {
  const auto pp = nt::prime_power(q);
  require(pp.has_value(), ErrorCode::InvalidArgument, std::to_string(q) + " is not a prime power");
  return make_field(pp->first, pp->second);
}

/// Sweep of the trace-fiber bound: every prime power q, n >= 2
/// with q^n <= max_qn, every k < q coprime to q. One row per (q, n, k)
/// holding the least N_t over t.
inline std::vector<BoundReport> trace_fiber_sweep(std::uint64_t max_qn, unsigned workers = 1) {
  struct Item {
    std::uint64_t q;
    unsigned n;
  };
  std::vector<Item> items;
  for (std::uint64_t q : prime_powers(2, max_qn))
    for (unsigned n = 2; nt::checked_pow(q, n) && *nt::checked_pow(q, n) <= max_qn; ++n) items.push_back({q, n});
  auto per = parallel_map<std::vector<BoundReport>>(items.size(), workers, [&](std::size_t i) {
    const auto [q, n] = items[i];
    const FieldTower T(field_of_order(q), n);
    const auto tr = trace_table(T);
    std::map<std::uint64_t, std::vector<std::int64_t>> by_gcd;
    std::vector<BoundReport> rows;
    for (std::uint64_t k = 1; k < q; ++k) {
      if (std::gcd(k, q) != 1) continue;
      const std::uint64_t d = std::gcd(k, T.top->size() - 1);
      auto it = by_gcd.find(d);
      if (it == by_gcd.end()) it = by_gcd.emplace(d, trace_fiber_counts(T, tr, k)).first;
      const auto& counts = it->second;
      const auto tmin = static_cast<std::int64_t>(std::min_element(counts.begin(), counts.end()) - counts.begin());
      rows.push_back(make_report("trace_fiber_min_over_t",
                                 {{"q", static_cast<std::int64_t>(q)}, {"n", n}, {"k", static_cast<std::int64_t>(k)},
                                  {"t", tmin}},
                                 counts[tmin], trace_fiber_bound(q, n)));
    }
    return rows;
  });
  std::vector<BoundReport> out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

inline std::vector<BoundReport> orbit_count_sweep(const std::vector<std::uint64_t>& qs, std::uint64_t max_qn,
                                                  unsigned workers = 1) {
  std::vector<std::pair<std::uint64_t, unsigned>> items;
  for (std::uint64_t q : qs)
    for (unsigned n = 1; nt::checked_pow(q, n) && *nt::checked_pow(q, n) <= max_qn; ++n) items.push_back({q, n});
  return parallel_map<BoundReport>(items.size(), workers, [&](std::size_t i) {
    return orbit_distinct_count(field_of_order(items[i].first), items[i].second);
  });
}

inline std::string format_number(long double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

/// CSV with columns kind, params (key=value;...), exact, bound, relation, holds, vacuous.
inline void write_reports_csv(std::ostream& os, const std::vector<BoundReport>& rows) {
  os << "kind,params,exact,bound,relation,holds,vacuous\n";
  for (const auto& r : rows) {
    std::string params;
    for (const auto& [k, v] : r.params) params += (params.empty() ? "" : ";") + k + "=" + std::to_string(v);
    os << r.kind << ',' << params << ',' << format_number(r.exact) << ',' << format_number(r.bound) << ','
       << (r.upper ? "<=" : ">=") << ',' << (r.holds ? "true" : "false") << ',' << (r.vacuous ? "true" : "false")
       << '\n';
  }
}

inline nlohmann::json reports_to_json(const std::vector<BoundReport>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows)
    out.push_back({{"kind", r.kind},
                   {"params", r.params},
                   {"exact", static_cast<double>(r.exact)},
                   {"bound", static_cast<double>(r.bound)},
                   {"relation", r.upper ? "<=" : ">="},
                   {"holds", r.holds},
                   {"vacuous", r.vacuous}});
  return out;
}

inline std::vector<BoundReport> sharp_rows(const SharpReport& s) {
  const std::map<std::string, std::int64_t> p{
      {"q", static_cast<std::int64_t>(s.q)}, {"n", s.n}, {"k", static_cast<std::int64_t>(s.k)}};
  auto strict = [](BoundReport r, bool holds) {
    r.holds = holds;
    r.vacuous = false;
    return r;
  };
  return {strict(make_report("sharp_final", p, s.final_lhs, s.final_rhs), s.final_holds),
          strict(make_report("sharp_display", p, s.display_lhs, s.display_rhs), s.display_holds),
          strict(make_report("sharp_display_floor_reading", p, s.floor_lhs, s.display_rhs), s.floor_holds)};
}

inline std::vector<BoundReport> cohen_rows(const std::vector<CohenRow>& rows) {
  std::vector<BoundReport> out;
  for (const auto& r : rows) {
    BoundReport b{"cohen",
                  {{"q", static_cast<std::int64_t>(r.q)},
                   {"n", r.n},
                   {"t", static_cast<std::int64_t>(r.t.index)},
                   {"exception", r.exception}},
                  r.found ? 1.0L : 0.0L,
                  r.exception ? 0.0L : 1.0L,
                  false,
                  r.holds,
                  false};
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace matwaring

#endif  // MATWARING_CENSUS_HPP
