#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "matwaring/census.hpp"
#include "matwaring/decompose.hpp"
#include "oracle.hpp"

using namespace matwaring;

namespace {

std::int64_t mobius(std::uint64_t m) {
  std::int64_t mu = 1;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    m /= p;
    if (m % p == 0) return 0;
    mu = -mu;
  }
  return m > 1 ? -mu : mu;
}

// elements of F_{q^n} of exact degree n: sum over d | n of mu(n/d) q^d
std::int64_t full_orbit_count(std::uint64_t q, unsigned n) {
  std::int64_t s = 0;
  for (unsigned d = 1; d <= n; ++d)
    if (n % d == 0) s += mobius(n / d) * static_cast<std::int64_t>(*nt::checked_pow(q, d));
  return s;
}

bool throws_code(const std::function<void()>& f, ErrorCode code) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST(Powers, Examples) {
  EXPECT_EQ(enumerate_powers(make_field(2, 1), 1, 2).members, (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(enumerate_powers(make_field(3, 1), 1, 2).members, (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(enumerate_powers(make_field(2, 1), 2, 1).members.size(), 16u);
  EXPECT_TRUE(throws_code([] { enumerate_powers(make_field(3, 1), 4, 2); }, ErrorCode::BudgetExceeded));
}

TEST(Powers, MembersAndRootsAgreeWithBruteForce) {
  const auto F = make_field(3, 1);
  const PowerSet S = enumerate_powers(F, 2, 2);
  std::vector<bool> seen(S.codec.total(), false);
  for (std::uint64_t c = 0; c < S.codec.total(); ++c) seen[S.codec.encode(pow(S.codec.decode(c), 2))] = true;
  for (std::uint64_t c = 0; c < S.codec.total(); ++c) {
    ASSERT_EQ(S.has(c), seen[c]);
    if (seen[c]) {
      const auto r = S.root_of(c);
      ASSERT_TRUE(r.has_value());
      EXPECT_EQ(S.codec.encode(pow(S.codec.decode(*r), 2)), c);
    }
  }
}

TEST(Powers, ClosedUnderSimilarity) {
  const auto F = make_field(3, 1);
  const PowerSet S = enumerate_powers(F, 2, 2);
  std::mt19937_64 rng(5);
  int tried = 0;
  while (tried < 100) {
    const Matrix U = oracle::random_matrix(F, 2, 2, rng);
    if (rank(U) < 2) continue;
    const Matrix Ui = inverse(U);
    for (auto m : S.members) ASSERT_TRUE(S.has(S.codec.encode(Ui * S.codec.decode(m) * U)));
    ++tried;
  }
}

TEST(Closure, Examples) {
  const auto F3 = make_field(3, 1);
  const PowerSet S = enumerate_powers(F3, 2, 2);
  EXPECT_TRUE(closure_check(S, 3).holds);
  EXPECT_TRUE(closure_check(enumerate_powers(make_field(2, 1), 2, 1), 2).holds);

  PowerSet zero = S;
  zero.members = {0};
  zero.roots = {0};
  zero.contains.assign(S.codec.total(), false);
  zero.contains[0] = true;
  const auto r = closure_check(zero, 3);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.counterexample, std::optional<std::uint64_t>(1));
}

TEST(Closure, AgreesWithThreePowers) {
  const auto F3 = make_field(3, 1);
  const PowerSet S = enumerate_powers(F3, 2, 2);
  for (std::uint64_t c = 0; c < S.codec.total(); ++c) {
    const auto cert = three_powers(S.codec.decode(c), 2);
    for (const auto& t : cert.terms) ASSERT_TRUE(S.has(S.codec.encode(pow(t, 2))));
  }
}

TEST(OrbitCount, Examples) {
  const auto r = orbit_distinct_count(make_field(3, 1), 2);
  EXPECT_EQ(r.exact, 6);
  EXPECT_NEAR(static_cast<double>(r.bound), 2.0, 1e-9);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(orbit_distinct_count(make_field(2, 1), 1).exact, 2);
  EXPECT_TRUE(orbit_distinct_count(make_field(2, 1), 4).holds);
}

TEST(OrbitCount, MatchesMobiusAndBoundHolds) {
  for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    const FieldPtr F = field_of_order(q);
    for (unsigned n = 1; *nt::checked_pow(q, n) <= 4096; ++n) {
      BoundReport loose;
      const auto r = orbit_distinct_count(F, n, &loose);
      EXPECT_EQ(static_cast<std::int64_t>(r.exact), full_orbit_count(q, n)) << q << " " << n;
      EXPECT_TRUE(r.holds) << q << " " << n;
      EXPECT_TRUE(loose.holds) << q << " " << n;
    }
  }
}

TEST(TraceFiber, Examples) {
  for (std::uint64_t q : {3u, 4u, 5u}) {
    const FieldPtr F = field_of_order(q);
    for (std::uint64_t t = 0; t < q; ++t)
      EXPECT_EQ(trace_fiber_count(F, 3, 1, Elem{t}).exact, q * q);
  }
  const auto v = trace_fiber_count(make_field(3, 1), 2, 2, Elem{1});
  EXPECT_NEAR(static_cast<double>(v.bound), -51.0, 1e-9);
  EXPECT_TRUE(v.holds);
  EXPECT_TRUE(v.vacuous);
  for (std::uint64_t t = 0; t < 3; ++t) EXPECT_TRUE(trace_fiber_count(make_field(3, 1), 8, 2, Elem{t}).holds);
  EXPECT_TRUE(throws_code([] { trace_fiber_count(make_field(3, 1), 2, 3, kZero); }, ErrorCode::PreconditionViolated));
}

TEST(TraceFiber, MatchesNaiveCount) {
  // prime fields, so the absolute trace is the trace to F_q
  const std::vector<std::pair<oracle::GF, unsigned>> cases{{{3, {2, 1, 0, 0, 1}}, 4}, {{5, {2, 3, 0, 1}}, 3}};
  for (const auto& [G, n] : cases) {
    ASSERT_EQ(G.order(G.p), G.size() - 1);  // X generates, so the modulus gives a field
    const FieldPtr F = make_field(G.p, 1);
    for (std::uint64_t k = 1; k < G.p; ++k) {
      std::vector<std::int64_t> naive(G.p, 0);
      for (std::uint64_t x = 0; x < G.size(); ++x) ++naive[G.absolute_trace(G.pow(x, k))];
      for (std::uint64_t t = 0; t < G.p; ++t)
        EXPECT_EQ(trace_fiber_count(F, n, k, Elem{t}).exact, naive[t]) << "p=" << G.p << " k=" << k;
    }
  }
}

TEST(TraceFiber, SweepHolds) {
  const auto rows = trace_fiber_sweep(4096, 1);
  EXPECT_FALSE(rows.empty());
  for (const auto& r : rows) EXPECT_TRUE(r.holds);
}

TEST(Divisor, Examples) {
  const auto r = divisor_bound_check(8);
  EXPECT_EQ(r.exact, 4);
  EXPECT_NEAR(static_cast<double>(r.bound), 7.06, 1e-9);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(divisor_bound_check(1).exact, 1);
  EXPECT_TRUE(divisor_bound_check(1).holds);
}

TEST(Divisor, SieveMatchesTrialDivision) {
  const auto d = divisor_counts_upto(5000);
  for (std::uint64_t m = 1; m <= 5000; ++m) ASSERT_EQ(d[m], oracle::divisor_count(m));
}

TEST(Divisor, SweepToOneMillion) {
  const auto rows = divisor_sweep(1000000);
  ASSERT_EQ(rows.size(), 1u);  // the worst-ratio row only
  EXPECT_TRUE(rows[0].holds);
  EXPECT_LE(rows[0].exact, 3.53L);
}

TEST(Sharp, Examples) {
  const auto a = sharp_condition(3, 8);
  EXPECT_TRUE(a.final_holds);
  EXPECT_NEAR(static_cast<double>(a.final_lhs), 12.98, 0.01);
  EXPECT_NEAR(static_cast<double>(a.final_rhs), 2.001, 0.001);
  const auto b = sharp_condition(3, 7);
  EXPECT_FALSE(b.final_holds);
  EXPECT_LT(b.final_lhs, -38);
  const auto c = sharp_condition(2, 9);
  EXPECT_TRUE(c.final_holds);
  EXPECT_NEAR(static_cast<double>(c.final_lhs), 18.9, 0.05);
  EXPECT_NEAR(static_cast<double>(c.final_rhs), 2.12, 0.01);
}

TEST(Sharp, FinalInequalityFromEightOnwardForThree) {
  for (unsigned n = 1; n < 8; ++n) EXPECT_FALSE(sharp_condition(3, n).final_holds) << n;
  for (unsigned n = 8; n < 40; ++n) EXPECT_TRUE(sharp_condition(3, n).final_holds) << n;
}

TEST(Sharp, DisplayReadings) {
  // with the exact d(3^n - 1) the display lags the final inequality by one
  const auto r7 = sharp_condition(3, 7);
  EXPECT_FALSE(r7.display_holds);
  EXPECT_TRUE(r7.floor_holds);
  EXPECT_TRUE(r7.readings_diverge);
  const auto r8 = sharp_condition(3, 8);
  EXPECT_NEAR(static_cast<double>(r8.floor_lhs), 729.0, 1e-6);
  EXPECT_NEAR(static_cast<double>(r8.display_rhs), 973.0, 1e-6);  // d(6560) = 24
  EXPECT_FALSE(r8.display_holds);
  EXPECT_FALSE(r8.floor_holds);
  for (unsigned n = 9; n < 30; ++n) EXPECT_TRUE(sharp_condition(3, n).display_holds) << n;
  EXPECT_EQ(sharp_rows(r8).size(), 3u);
}

TEST(Cohen, Examples) {
  const auto r22 = cohen_check(make_field(2, 1), 2);
  EXPECT_FALSE(r22[0].found.has_value());
  EXPECT_TRUE(r22[0].exception && r22[0].holds);
  EXPECT_EQ(r22[1].found->to_string(), Poly::parse(make_field(2, 1), "1,1,1").to_string());

  const auto r43 = cohen_check(make_field(2, 2), 3);
  EXPECT_FALSE(r43[0].found.has_value());
  EXPECT_TRUE(r43[0].holds);
  for (std::size_t t = 1; t < 4; ++t) EXPECT_TRUE(r43[t].found.has_value());
}

TEST(Cohen, DegreeTwoTraceZeroHasNoPrimitive) {
  // a root a of X^2 + c satisfies a^q = -a, so a^{2(q-1)} = 1 < q^2 - 1
  const auto r32 = cohen_check(make_field(3, 1), 2);
  EXPECT_FALSE(r32[0].found.has_value());
  EXPECT_FALSE(r32[0].holds);  // absent from the stated exception list
  EXPECT_TRUE(r32[1].found.has_value());
  EXPECT_TRUE(r32[2].found.has_value());
  for (std::uint64_t q : {5u, 7u, 8u, 9u}) EXPECT_FALSE(cohen_check(field_of_order(q), 2)[0].found.has_value());
}

TEST(Cohen, FoundPolynomialsArePrimitiveWithTrace) {
  for (auto [q, n] : {std::pair{3u, 3u}, {5u, 3u}, {2u, 6u}, {4u, 4u}}) {
    const FieldPtr F = field_of_order(q);
    for (const auto& row : cohen_check(F, n)) {
      ASSERT_TRUE(row.found.has_value()) << q << " " << n;
      EXPECT_TRUE(is_primitive(*row.found));
      EXPECT_EQ(poly_trace(*row.found), row.t);
      EXPECT_TRUE(row.holds);
    }
  }
}

TEST(Writers, CsvAndJson) {
  const std::vector<BoundReport> rows{divisor_bound_check(8), trace_fiber_count(make_field(3, 1), 2, 2, kOne)};
  std::ostringstream os;
  write_reports_csv(os, rows);
  EXPECT_EQ(os.str(),
            "kind,params,exact,bound,relation,holds,vacuous\n"
            "divisor,m=8,4,7.06,<=,true,false\n"
            "trace_fiber,k=2;n=2;q=3;t=1," +
                std::to_string(static_cast<long long>(rows[1].exact)) + ",-51,>=,true,true\n");
  const auto j = reports_to_json(rows);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["kind"], "divisor");
  EXPECT_EQ(j[0]["params"]["m"], 8);
  EXPECT_EQ(j[1]["vacuous"], true);
  EXPECT_EQ(j[1]["relation"], ">=");
}
