// matwaring: Waring decompositions of matrices over finite fields.
//
// Exit codes: 0 ok, 1 invalid certificate, 2 usage or precondition
// rejection, 3 theorem-contradiction diagnostic, 4 bound finding or
// genuine counterexample.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "matwaring/census.hpp"
#include "matwaring/certificate.hpp"
#include "matwaring/decompose.hpp"
#include "matwaring/selftest.hpp"

namespace mw = matwaring;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kUsage = 2, kContradiction = 3, kFinding = 4 };

struct Config {
  std::string field;
  std::string modulus;
  std::size_t n = 0;
  std::uint64_t k = 1;
  std::string terms = "auto";
  std::string input;
  std::string out;
  std::string csv;
  std::uint64_t budget = mw::kEnumerationBudget;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  bool allow_fallback = false;
  bool quick = false;
  bool inject_fault = false;
  // census / search
  std::string q_range;
  std::string n_range;
  std::uint64_t t = 0;
  std::uint64_t max_qn = 65536;
  std::uint64_t max_m = 1000000;
};

std::string read_file(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) mw::fail(mw::ErrorCode::ParseError, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file. Empty path means stdout.
void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) mw::fail(mw::ErrorCode::InvalidArgument, "cannot write " + path);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

/// "p", "p^m", or a prime power q.
mw::FieldPtr build_field(const std::string& spec, const std::string& modulus) {
  if (spec.find('^') == std::string::npos) {
    std::uint64_t q = 0;
    try {
      q = std::stoull(spec);
    } catch (const std::logic_error&) {
      mw::fail(mw::ErrorCode::ParseError, "bad field specification '" + spec + "'");
    }
    if (!mw::nt::is_prime(q)) {
      const auto pp = mw::nt::prime_power(q);
      mw::require(pp.has_value(), mw::ErrorCode::ParseError, spec + " is not a prime power");
      return mw::FieldSpec::parse(std::to_string(pp->first) + "^" + std::to_string(pp->second), modulus).build();
    }
  }
  return mw::FieldSpec::parse(spec, modulus).build();
}

/// "a", "a..b" or "a,b,c".
std::vector<std::uint64_t> parse_range(const std::string& text) {
  std::vector<std::uint64_t> out;
  try {
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
      const auto lo = std::stoull(text.substr(0, dots)), hi = std::stoull(text.substr(dots + 2));
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
      return out;
    }
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stoull(part));
  } catch (const std::logic_error&) {
    mw::fail(mw::ErrorCode::ParseError, "bad range '" + text + "'");
  }
  mw::require(!out.empty(), mw::ErrorCode::ParseError, "empty range");
  return out;
}

std::vector<mw::Matrix> load_matrices(const Config& c) {
  const std::string text = read_file(c.input);
  const auto first = text.find_first_not_of(" \t\r\n");
  mw::FieldPtr F = c.field.empty() ? nullptr : build_field(c.field, c.modulus);
  std::vector<mw::Matrix> out;
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    const json j = mw::parse_json_text(text);
    for (const auto& m : j.is_array() ? j : json::array({j})) {
      mw::Matrix M = mw::matrix_from_json(m);
      if (F) {
        mw::require(M.field()->size() == F->size(), mw::ErrorCode::ParseError, "matrix field does not match --field");
        M = mw::Matrix(F, M.n(), M.n(), M.entries());
      }
      out.push_back(std::move(M));
    }
    mw::require(!out.empty(), mw::ErrorCode::ParseError, "no matrix in input");
    return out;
  }
  std::istringstream in(text);
  return mw::read_matrices_text(in, F);
}

mw::WaringCertificate pad_terms(mw::WaringCertificate c, unsigned terms) {
  while (c.terms.size() < terms) c.terms.push_back(mw::Matrix(c.field, c.n(), c.n()));
  c.provenance.push_back({"zero_padding", {{"terms", terms}}, {}});
  return c;
}

mw::WaringCertificate decompose_one(const Config& c, const mw::Matrix& A, mw::TowerCache& cache, std::string& route) {
  const std::uint64_t q = A.field()->size();
  const std::size_t n = A.n();
  const auto two_why = mw::two_powers_violation(q, n, c.k);
  const auto three_why = mw::three_powers_violation(q, n, c.k);
  if (c.terms != "3" && !two_why) {
    route = "two_powers";
    return mw::two_powers(A, c.k, &cache);
  }
  if (c.terms != "2" && !three_why) {
    route = "three_powers";
    return mw::three_powers(A, c.k, &cache);
  }
  if (c.terms == "3" && !two_why) {
    route = "two_powers";
    return pad_terms(mw::two_powers(A, c.k, &cache), 3);
  }
  const unsigned r = c.terms == "2" ? 2 : 3;
  if (c.allow_fallback) {
    const auto total = mw::nt::checked_pow(q, n * n);
    mw::require(total && *total <= c.budget, mw::ErrorCode::BudgetExceeded,
                "q^(n^2) exceeds the fallback budget of " + std::to_string(c.budget));
    route = "exhaustive_fallback";
    return mw::exhaustive_fallback(A, c.k, r);
  }
  std::string why = r == 2 ? "two-term hypotheses fail: " + *two_why
                           : "three-term hypotheses fail: " + *three_why + (two_why ? "; two-term: " + *two_why : "");
  mw::fail(mw::ErrorCode::PreconditionViolated, why + " (use --allow-fallback for an exhaustive search)");
}

int cmd_decompose(const Config& c) {
  mw::require(c.terms == "2" || c.terms == "3" || c.terms == "auto", mw::ErrorCode::InvalidArgument,
              "--terms must be 2, 3 or auto");
  const auto mats = load_matrices(c);
  mw::TowerCache cache(mats.front().field());
  json certs = json::array();
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const auto& A = mats[i];
    std::string route;
    const auto cert = decompose_one(c, A, cache, route);
    certs.push_back(mw::certificate_to_json(cert));
    std::cerr << "matrix " << i << ": " << A.n() << "x" << A.n() << " over " << A.field()->name() << " = sum of "
              << cert.terms.size() << " terms E^" << c.k << " (" << route << ")\n";
  }
  write_output(c.out, (mats.size() == 1 ? certs.front() : certs).dump(2) + "\n");
  return kOk;
}

int cmd_verify(const Config& c) {
  const json j = mw::parse_json_text(read_file(c.input));
  std::vector<mw::WaringCertificate> certs;
  for (const auto& e : j.is_array() ? j : json::array({j})) certs.push_back(mw::certificate_from_json(e));
  int rc = kOk;
  for (std::size_t i = 0; i < certs.size(); ++i) {
    const auto v = mw::verify(certs[i]);
    if (v.ok) {
      std::cout << "certificate " << i << ": valid\n";
      continue;
    }
    rc = kInvalid;
    std::cout << "certificate " << i << ": INVALID\n";
    for (const auto& r : v.reasons) std::cout << "  " << r << "\n";
  }
  return rc;
}

int cmd_search(const std::string& kind, const Config& c) {
  const mw::FieldPtr F = build_field(c.field, c.modulus);
  mw::require(c.n >= 1, mw::ErrorCode::InvalidArgument, "--n is required");
  mw::require(c.t < F->size(), mw::ErrorCode::InvalidArgument, "--t is not in the field");
  const mw::Elem t{c.t};
  json out{{"field", mw::field_to_json(*F)}, {"n", c.n}, {"t", c.t}, {"kind", kind}};
  if (kind == "kpower") {
    const mw::FieldTower T(F, static_cast<unsigned>(c.n));
    const auto w = mw::find_kpower_irreducible_with_trace(T, c.k, t);
    const mw::Matrix E = mw::kpower_companion_root(w);
    out["k"] = c.k;
    out["polynomial"] = w.P.to_string();
    out["a"] = w.a.index;
    out["root"] = mw::matrix_rows(E);
  } else {
    out["polynomial"] = mw::find_irreducible_with_trace(F, static_cast<unsigned>(c.n), t, kind == "primitive").to_string();
  }
  write_output(c.out, out.dump(2) + "\n");
  return kOk;
}

int report(const Config& c, const std::vector<mw::BoundReport>& rows) {
  if (!c.csv.empty()) {
    std::ostringstream os;
    mw::write_reports_csv(os, rows);
    write_output(c.csv, os.str());
  }
  if (!c.out.empty()) write_output(c.out, mw::reports_to_json(rows).dump(2) + "\n");
  std::size_t failed = 0;
  for (const auto& r : rows) failed += !r.holds;
  if (c.out.empty() && c.csv.empty()) mw::write_reports_csv(std::cout, rows);
  std::cerr << rows.size() << " rows, " << failed << " failing\n";
  return failed == 0 ? kOk : kFinding;
}

int cmd_census(const std::string& sweep, const Config& c) {
  std::vector<mw::BoundReport> rows;
  if (sweep == "powers" || sweep == "closure") {
    const mw::FieldPtr F = build_field(c.field, c.modulus);
    mw::require(c.n >= 1, mw::ErrorCode::InvalidArgument, "--n is required");
    const auto S = mw::enumerate_powers(F, c.n, c.k);
    const std::map<std::string, std::int64_t> p{{"q", static_cast<std::int64_t>(F->size())},
                                                {"n", static_cast<std::int64_t>(c.n)},
                                                {"k", static_cast<std::int64_t>(c.k)}};
    if (sweep == "powers") {
      rows.push_back(mw::make_report("power_set_size", p, static_cast<long double>(S.members.size()), 1));
    } else {
      const unsigned r = c.terms == "2" ? 2 : 3;
      auto pr = p;
      pr["terms"] = r;
      const auto res = mw::closure_check(S, r);
      if (res.counterexample) pr["counterexample"] = static_cast<std::int64_t>(*res.counterexample);
      auto row = mw::make_report("closure", pr, res.holds ? 1 : 0, 1);
      rows.push_back(row);
    }
  } else if (sweep == "bounds") {
    rows = mw::orbit_count_sweep({2, 3, 4, 5, 7, 8, 9}, c.max_qn, c.workers);
    for (auto& r : mw::trace_fiber_sweep(c.max_qn, c.workers)) rows.push_back(std::move(r));
    for (auto& r : mw::divisor_sweep(c.max_m)) rows.push_back(std::move(r));
  } else if (sweep == "sharp") {
    for (auto q : parse_range(c.q_range.empty() ? "2..9" : c.q_range))
      for (auto n : parse_range(c.n_range.empty() ? "7..16" : c.n_range))
        for (auto& r : mw::sharp_rows(mw::sharp_condition(q, static_cast<unsigned>(n), c.k))) rows.push_back(r);
  } else if (sweep == "cohen") {
    std::vector<std::pair<mw::FieldPtr, unsigned>> grid;
    if (!c.field.empty()) {
      const mw::FieldPtr F = build_field(c.field, c.modulus);
      for (auto n : parse_range(c.n_range.empty() ? "2" : c.n_range)) grid.push_back({F, static_cast<unsigned>(n)});
    } else {
      for (auto q : mw::prime_powers(2, c.max_qn))
        for (unsigned n = 2; mw::nt::checked_pow(q, n) && *mw::nt::checked_pow(q, n) <= c.max_qn; ++n)
          grid.push_back({mw::field_of_order(q), n});
    }
    for (const auto& [F, n] : grid)
      for (auto& r : mw::cohen_rows(mw::cohen_check(F, n))) rows.push_back(std::move(r));
  }
  return report(c, rows);
}

int cmd_selftest(const Config& c) {
  mw::selftest::Options o{c.quick, c.seed, c.workers};
  if (c.inject_fault) mw::detail::fault_injection().store(true);
  int failed = 0;
  mw::selftest::run_all(o, [&](const mw::selftest::Result& r) {
    failed += !r.passed;
    std::cout << mw::selftest::format(r) << std::endl;
  });
  std::cout << (failed ? std::to_string(failed) + " of 12 criteria failed" : "all 12 criteria passed") << std::endl;
  return failed ? kInvalid : kOk;
}

int exit_for(const mw::Error& e) {
  switch (e.code()) {
    case mw::ErrorCode::TheoremContradiction:
      return kContradiction;
    case mw::ErrorCode::NoDecomposition:
      return kFinding;
    default:
      return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Waring decompositions of matrices over finite fields"};
  app.require_subcommand(1);
  Config c;

  auto field_opts = [&](CLI::App* s) {
    s->add_option("--field", c.field, "field: p, p^m or a prime power q");
    s->add_option("--modulus", c.modulus, "modulus over F_p as little-endian coefficients c0,c1,...");
  };

  auto* dec = app.add_subcommand("decompose", "decompose matrices into sums of k-th powers");
  field_opts(dec);
  dec->add_option("--k", c.k, "exponent")->required()->check(CLI::PositiveNumber);
  dec->add_option("--terms", c.terms, "2, 3 or auto")->check(CLI::IsMember({"2", "3", "auto"}));
  dec->add_option("--input", c.input, "matrix file (text or JSON); - for stdin")->required();
  dec->add_option("--out", c.out, "certificate output path (default stdout)");
  dec->add_flag("--allow-fallback", c.allow_fallback, "exhaustive search outside the proved regimes");
  dec->add_option("--budget", c.budget, "cap on q^(n^2) for the exhaustive search")
      ->check(CLI::Range(std::uint64_t{1}, mw::kEnumerationBudget));

  auto* ver = app.add_subcommand("verify", "check a certificate");
  ver->add_option("--input,input", c.input, "certificate JSON")->required();

  auto* sea = app.add_subcommand("search", "search for polynomials with a prescribed trace");
  std::string search_kind = "irreducible";
  sea->add_option("kind", search_kind, "irreducible, primitive or kpower")
      ->check(CLI::IsMember({"irreducible", "primitive", "kpower"}));
  field_opts(sea);
  sea->add_option("--n", c.n, "degree")->required();
  sea->add_option("--t", c.t, "trace (field element index)");
  sea->add_option("--k", c.k, "exponent for kpower");
  sea->add_option("--out", c.out, "output path");

  auto* cen = app.add_subcommand("census", "exhaustive checks of the counting bounds");
  std::string sweep;
  cen->add_option("sweep", sweep, "powers, closure, bounds, sharp or cohen")
      ->required()
      ->check(CLI::IsMember({"powers", "closure", "bounds", "sharp", "cohen"}));
  field_opts(cen);
  cen->add_option("--n", c.n_range, "dimension or degree: a, a..b or a,b,c");
  cen->add_option("--q", c.q_range, "field sizes for sharp: a, a..b or a,b,c");
  cen->add_option("--k", c.k, "exponent");
  cen->add_option("--terms", c.terms, "terms for closure")->check(CLI::IsMember({"2", "3", "auto"}));
  cen->add_option("--max-qn", c.max_qn, "largest q^n in grid sweeps");
  cen->add_option("--max-m", c.max_m, "largest m in the divisor sweep");
  cen->add_option("--out", c.out, "JSON report path");
  cen->add_option("--csv", c.csv, "CSV report path");
  cen->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);

  auto* st = app.add_subcommand("selftest", "run the acceptance suite");
  st->add_flag("--quick", c.quick, "reduced sample counts and grids");
  st->add_flag("--inject-fault", c.inject_fault, "corrupt field squaring to check that faults are caught");
  st->add_option("--seed", c.seed, "seed for randomized criteria");
  st->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*dec) return cmd_decompose(c);
    if (*ver) return cmd_verify(c);
    if (*sea) return cmd_search(search_kind, c);
    if (*cen) {
      if (sweep == "powers" || sweep == "closure") c.n = c.n_range.empty() ? 0 : parse_range(c.n_range).front();
      return cmd_census(sweep, c);
    }
    if (*st) return cmd_selftest(c);
  } catch (const mw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
