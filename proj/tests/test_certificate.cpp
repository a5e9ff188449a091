#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "matwaring/certificate.hpp"
#include "matwaring/decompose.hpp"
#include "oracle.hpp"

using namespace matwaring;

namespace {

bool throws_code(const std::function<void()>& f, ErrorCode code) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

WaringCertificate sample(std::uint64_t seed = 1) {
  const auto F9 = make_field(3, 2);
  std::mt19937_64 rng(seed);
  return three_powers(oracle::random_matrix(F9, 3, 3, rng), 2);
}

}  // namespace

TEST(CertificateJson, RoundTrip) {
  const auto c = sample();
  const auto j = certificate_to_json(c);
  const auto back = certificate_from_json(parse_json_text(j.dump(2)));
  EXPECT_EQ(certificate_to_json(back), j);
  EXPECT_TRUE(verify(back).ok);
  EXPECT_EQ(j["field"]["modulus"], "1,0,1");
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["terms"].size(), 3u);
}

TEST(CertificateJson, RejectsTampering) {
  auto j = certificate_to_json(sample(2));
  auto entry = j;
  entry["terms"][0][0][0] = (entry["terms"][0][0][0].get<int>() + 1) % 9;
  EXPECT_FALSE(verify(certificate_from_json(entry)).ok);

  auto k = j;
  k["k"] = 4;
  EXPECT_FALSE(verify(certificate_from_json(k)).ok);

  auto target = j;
  target["target"][1][2] = (target["target"][1][2].get<int>() + 3) % 9;
  EXPECT_FALSE(verify(certificate_from_json(target)).ok);

  auto shape = j;
  shape["terms"][1] = nlohmann::json::array({nlohmann::json::array({0})});
  EXPECT_FALSE(verify(certificate_from_json(shape)).ok);

  bool tampered = false;
  for (auto& s : j["provenance"])
    for (auto& w : s["witnesses"]) {
      w["u"][0][0] = (w["u"][0][0].get<int>() + 1) % 9;
      tampered = true;
    }
  ASSERT_TRUE(tampered);
  const auto r = verify(certificate_from_json(j));
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.reasons.empty());
}

TEST(CertificateJson, MalformedInput) {
  const std::string text = certificate_to_json(sample()).dump();
  EXPECT_TRUE(throws_code([&] { parse_json_text(text.substr(0, text.size() / 2)); }, ErrorCode::ParseError));
  auto j = certificate_to_json(sample());
  j.erase("k");
  EXPECT_TRUE(throws_code([&] { certificate_from_json(j); }, ErrorCode::ParseError));
  j = certificate_to_json(sample());
  j["terms"][0][0][0] = 9;  // outside F_9
  EXPECT_TRUE(throws_code([&] { certificate_from_json(j); }, ErrorCode::ParseError));
  j = certificate_to_json(sample());
  j["n"] = 4;
  EXPECT_TRUE(throws_code([&] { certificate_from_json(j); }, ErrorCode::ParseError));
}

TEST(MatrixText, RoundTripAndErrors) {
  const auto F5 = make_field(5, 1);
  const Matrix A = Matrix::from_rows(F5, std::vector<std::vector<std::uint64_t>>{{1, 2}, {3, 4}});
  const std::string text = write_matrix_text(A);
  EXPECT_EQ(text.substr(0, 6), "5 1 2\n");
  std::istringstream in(text);
  EXPECT_EQ(read_matrix_text(in), A);

  std::istringstream two(text + text);
  EXPECT_EQ(read_matrices_text(two).size(), 2u);

  std::istringstream truncated("5 1 2\n1 2\n3\n");
  EXPECT_TRUE(throws_code([&] { read_matrix_text(truncated); }, ErrorCode::ParseError));
  std::istringstream range("5 1 2\n1 2\n3 5\n");
  EXPECT_TRUE(throws_code([&] { read_matrix_text(range); }, ErrorCode::ParseError));
  std::istringstream header("5 1\n");
  EXPECT_TRUE(throws_code([&] { read_matrix_text(header); }, ErrorCode::ParseError));
  std::istringstream mismatch(text);
  EXPECT_TRUE(throws_code([&] { read_matrix_text(mismatch, make_field(7, 1)); }, ErrorCode::ParseError));
  std::istringstream empty("  \n");
  EXPECT_TRUE(throws_code([&] { read_matrices_text(empty); }, ErrorCode::ParseError));
}

TEST(MatrixText, ExtensionFieldUsesGivenModulus) {
  const FieldPtr F = FieldSpec::parse("2^3", "1,0,1,1").build();
  std::istringstream in("2 3 2\n7 0\n1 6\n");
  const Matrix A = read_matrix_text(in, F);
  EXPECT_EQ(A.field(), F);
  EXPECT_EQ(A(0, 0), Elem{7});
}

TEST(MatrixJson, Mirror) {
  const auto F9 = make_field(3, 2);
  const Matrix A = Matrix::from_rows(F9, std::vector<std::vector<std::uint64_t>>{{8, 0}, {4, 1}});
  const auto j = matrix_to_json(A);
  EXPECT_EQ(j["p"], 3);
  EXPECT_EQ(j["m"], 2);
  EXPECT_EQ(j["n"], 2);
  EXPECT_EQ(matrix_from_json(j), A);
  auto bad = j;
  bad["rows"][1] = nlohmann::json::array({1});
  EXPECT_TRUE(throws_code([&] { matrix_from_json(bad); }, ErrorCode::ParseError));
}

// ---------------------------------------------------------------- CLI

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(MATWARING_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "matwaring_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_file(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Cli, DecomposeThenVerify) {
  const auto in = scratch("a.txt");
  const auto cert = scratch("a.json");
  write_file(in, "3 1 2\n0 1\n1 1\n");
  EXPECT_EQ(cli("decompose --field 3 --k 2 --terms 3 --input " + in.string() + " --out " + cert.string()).code, 0);
  EXPECT_EQ(cli("verify --input " + cert.string()).code, 0);

  std::ifstream f(cert);
  auto j = nlohmann::json::parse(f);
  j["terms"][0][0][0] = (j["terms"][0][0][0].get<int>() + 1) % 3;
  const auto bad = scratch("bad.json");
  write_file(bad, j.dump());
  EXPECT_EQ(cli("verify --input " + bad.string()).code, 1);
  write_file(bad, j.dump().substr(0, 20));
  EXPECT_EQ(cli("verify --input " + bad.string()).code, 2);
}

TEST(Cli, PreconditionsAndUsage) {
  const auto in = scratch("b.txt");
  write_file(in, "2 1 2\n1 0\n0 1\n");
  EXPECT_EQ(cli("decompose --field 2 --k 2 --terms 3 --input " + in.string()).code, 2);
  EXPECT_EQ(cli("decompose --field 6 --k 2 --input " + in.string()).code, 2);
  EXPECT_EQ(cli("no-such-command").code, 2);
}

TEST(Cli, SearchAndCensus) {
  const auto r = cli("search irreducible --field 3 --n 2 --t 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"1,0,1\""), std::string::npos);
  EXPECT_EQ(cli("census closure --field 3 --n 2 --k 2 --terms 3").code, 0);
  EXPECT_EQ(cli("census cohen --field 4 --n 3").code, 0);
  EXPECT_EQ(cli("census cohen --field 3 --n 2").code, 4);
}
