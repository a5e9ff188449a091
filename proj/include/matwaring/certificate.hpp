#ifndef MATWARING_CERTIFICATE_HPP
#define MATWARING_CERTIFICATE_HPP

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "matwaring/decompose.hpp"
#include "matwaring/error.hpp"
#include "matwaring/field.hpp"
#include "matwaring/matrix.hpp"
#include "matwaring/tower.hpp"

namespace matwaring {

using nlohmann::json;

inline std::string modulus_string(const Field& F) {
  if (F.is_prime_field()) return "";
  return Poly(F.base(), F.modulus()).to_string();
}

inline json field_to_json(const Field& F) {
  return {{"p", F.characteristic()}, {"m", F.absolute_degree()}, {"modulus", modulus_string(F)}};
}

inline FieldPtr field_from_json(const json& j) {
  try {
    const auto p = j.at("p").get<std::uint64_t>();
    const auto m = j.at("m").get<unsigned>();
    const auto mod = j.value("modulus", std::string{});
    FieldSpec s = FieldSpec::parse(std::to_string(p) + "^" + std::to_string(m), mod);
    return s.build();
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad field record: ") + e.what());
  }
}

/// Row-major array of index rows.
inline json matrix_rows(const Matrix& M) {
  json rows = json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) row.push_back(M(i, j).index);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_rows(const FieldPtr& F, const json& rows) {
  try {
    require(rows.is_array(), ErrorCode::ParseError, "matrix must be an array of rows");
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.at(0).size();
    Matrix M(F, r, c);
    for (std::size_t i = 0; i < r; ++i) {
      require(rows.at(i).is_array() && rows.at(i).size() == c, ErrorCode::ParseError, "ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) {
        const auto v = rows.at(i).at(j).get<std::uint64_t>();
        require(F->contains(Elem{v}), ErrorCode::ParseError, "entry " + std::to_string(v) + " is not in the field");
        M(i, j) = Elem{v};
      }
    }
    return M;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad matrix: ") + e.what());
  }
}

/// JSON mirror of the matrix text format.
inline json matrix_to_json(const Matrix& M) {
  json j = field_to_json(*M.field());
  j["n"] = M.n();
  j["rows"] = matrix_rows(M);
  return j;
}

inline Matrix matrix_from_json(const json& j) {
  const FieldPtr F = field_from_json(j);
  Matrix M = matrix_from_rows(F, j.at("rows"));
  require(M.is_square() && M.n() == j.at("n").get<std::size_t>(), ErrorCode::ParseError, "matrix is not n x n");
  return M;
}

/// Text format: header "p m n", then n rows of n element indices. `F`, when
/// given, must have the header's p and m and supplies the modulus.
inline Matrix read_matrix_text(std::istream& in, const FieldPtr& F = nullptr) {
  std::uint64_t p = 0;
  unsigned m = 0;
  std::size_t n = 0;
  if (!(in >> p >> m >> n)) fail(ErrorCode::ParseError, "expected header 'p m n'");
  require(n >= 1, ErrorCode::ParseError, "matrix dimension must be >= 1");
  FieldPtr field = F;
  if (field) {
    require(field->characteristic() == p && field->absolute_degree() == m, ErrorCode::ParseError,
            "matrix header does not match the requested field");
  } else {
    field = make_field(p, m);
  }
  Matrix M(field, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t v = 0;
      if (!(in >> v)) fail(ErrorCode::ParseError, "truncated matrix body");
      require(field->contains(Elem{v}), ErrorCode::ParseError, "entry " + std::to_string(v) + " is not in the field");
      M(i, j) = Elem{v};
    }
  }
  return M;
}

/// Every matrix in a stream of concatenated text-format matrices.
inline std::vector<Matrix> read_matrices_text(std::istream& in, const FieldPtr& F = nullptr) {
  std::vector<Matrix> out;
  while (in >> std::ws, in.peek() != std::char_traits<char>::eof()) out.push_back(read_matrix_text(in, F));
  require(!out.empty(), ErrorCode::ParseError, "no matrix in input");
  return out;
}

inline std::string write_matrix_text(const Matrix& M) {
  std::ostringstream os;
  os << M.field()->characteristic() << ' ' << M.field()->absolute_degree() << ' ' << M.n() << '\n'
     << M.to_string();
  return os.str();
}

inline json witness_to_json(const SimilarityWitness& w) {
  return {{"u", matrix_rows(w.u)}, {"source", matrix_rows(w.source)}, {"target", matrix_rows(w.target)}};
}

inline json certificate_to_json(const WaringCertificate& c) {
  json terms = json::array();
  for (const auto& t : c.terms) terms.push_back(matrix_rows(t));
  json prov = json::array();
  for (const auto& s : c.provenance) {
    json ws = json::array();
    for (const auto& w : s.witnesses) ws.push_back(witness_to_json(w));
    prov.push_back({{"step", s.step}, {"detail", s.detail}, {"witnesses", ws}});
  }
  return {{"field", field_to_json(*c.field)},
          {"n", c.n()},
          {"k", c.k},
          {"terms", terms},
          {"target", matrix_rows(c.target)},
          {"provenance", prov}};
}

inline WaringCertificate certificate_from_json(const json& j) {
  try {
    const FieldPtr F = field_from_json(j.at("field"));
    WaringCertificate c{F, j.at("k").get<std::uint64_t>(), {}, matrix_from_rows(F, j.at("target")), {}};
    for (const auto& t : j.at("terms")) c.terms.push_back(matrix_from_rows(c.field, t));
    for (const auto& s : j.value("provenance", json::array())) {
      ProvenanceStep step{s.at("step").get<std::string>(), s.value("detail", json::object()), {}};
      for (const auto& w : s.value("witnesses", json::array()))
        step.witnesses.push_back({matrix_from_rows(c.field, w.at("u")), matrix_from_rows(c.field, w.at("source")),
                                  matrix_from_rows(c.field, w.at("target"))});
      c.provenance.push_back(std::move(step));
    }
    require(c.target.n() == j.at("n").get<std::size_t>(), ErrorCode::ParseError, "n does not match the target");
    return c;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad certificate: ") + e.what());
  }
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
}

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> reasons;
};

/// Recomputes sum_i E_i^k and replays every similarity witness.
inline VerifyResult verify(const WaringCertificate& c) {
  VerifyResult r;
  auto bad = [&](std::string why) {
    r.ok = false;
    r.reasons.push_back(std::move(why));
  };
  const std::size_t n = c.target.rows();
  if (!c.target.is_square()) bad("target is not square");
  if (c.k < 1) bad("k must be positive");
  if (c.terms.empty()) bad("no terms");
  for (std::size_t i = 0; i < c.terms.size(); ++i)
    if (c.terms[i].rows() != n || c.terms[i].cols() != n) bad("term " + std::to_string(i) + " has the wrong shape");
  if (r.ok) {
    Matrix sum(c.field, n, n);
    for (const auto& t : c.terms) sum = sum + pow(t, c.k);
    if (!(sum == c.target)) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (sum(i, j) != c.target(i, j)) {
            bad("sum of k-th powers differs from the target at (" + std::to_string(i) + ", " + std::to_string(j) +
                "): " + std::to_string(sum(i, j).index) + " != " + std::to_string(c.target(i, j).index));
            i = n;
            break;
          }
    }
  }
  for (const auto& s : c.provenance)
    for (std::size_t w = 0; w < s.witnesses.size(); ++w) {
      const auto& wt = s.witnesses[w];
      const bool shapes = wt.u.is_square() && wt.source.is_square() && wt.target.is_square() &&
                          wt.u.n() == wt.source.n() && wt.u.n() == wt.target.n();
      if (!shapes || !wt.holds()) bad("witness " + std::to_string(w) + " of step '" + s.step + "' does not hold");
    }
  return r;
}

}  // namespace matwaring

#endif  // MATWARING_CERTIFICATE_HPP
