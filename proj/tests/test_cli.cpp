#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "opschur/json_io.hpp"
#include "test_support.hpp"

using namespace opschur;
using namespace opschur::test;

namespace {

struct CliResult {
  int exitCode;
  std::string out;
  std::string err;
  Json json() const { return parse_json_text(out); }
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = opschur::cli::run(args, out, err);
  return CliResult{code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("opschur_cli_test_" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto file = path_ / name;
    std::ofstream stream(file);
    stream << text;
    return file.string();
  }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace

TEST_CASE("complement subcommand mirrors the identity example") {
  TempDir dir;
  const std::string id2 = dir.write("id2.json", R"({"dim": 2, "entries": [[1, 0], [0, 1]]})");
  const CliResult result = run_cli({"complement", "--a", id2, "--b", id2});
  REQUIRE(result.exitCode == 0);
  const Json report = result.json();
  CHECK(report.at("completable") == true);
  const Matrix ab = matrix_from_json(report.at("complement"));
  CHECK(approx_equal(ab, Matrix::Identity(2, 2), 1e-8));
}

TEST_CASE("pardiff refuses A = B with a domain error") {
  TempDir dir;
  const std::string a = dir.write("a.json", R"({"dim": 2, "entries": [[1, 0], [0, 1]]})");
  const CliResult result = run_cli({"pardiff", "--b", a, "--a", a});
  CHECK(result.exitCode == 1);
  CHECK(result.json().at("error") == "NotDefined");
  CHECK(result.err.find("undefined") != std::string::npos);
}

TEST_CASE("lebesgue subcommand splits the rank-one example") {
  TempDir dir;
  const std::string ones = dir.write("ones2.json", R"({"dim": 2, "entries": [[1, 1], [1, 1]]})");
  const std::string diag = dir.write("diag10.json", R"({"dim": 2, "entries": [[1, 0], [0, 0]]})");
  const CliResult result = run_cli({"lebesgue", "--a", ones, "--b", diag});
  REQUIRE(result.exitCode == 0);
  const Json report = result.json();
  CHECK(matrix_from_json(report.at("regular")).norm() <= 1e-7);
  CHECK(approx_equal(matrix_from_json(report.at("singular")), real2(1, 1, 1, 1), 1e-7));
  CHECK(report.at("routes").at("converged") == true);
}

TEST_CASE("schur subcommand") {
  TempDir dir;
  const std::string id2 = dir.write("id2.json", R"({"dim": 2, "entries": [[1, 0], [0, 1]]})");
  const std::string twoI = dir.write("twoI.json", R"({"dim": 2, "entries": [[2, 0], [0, 2]]})");
  const CliResult result =
      run_cli({"schur", "--a", id2, "--b", id2, "--c", twoI});
  REQUIRE(result.exitCode == 0);
  CHECK(approx_equal(matrix_from_json(result.json().at("schur")),
                     Matrix::Identity(2, 2), 1e-8));

  const std::string bad = dir.write("bad.json", R"({"dim": 2, "entries": [[1, 0], [0, 0.5]]})");
  const CliResult refused =
      run_cli({"schur", "--a", id2, "--b", id2, "--c", bad});
  CHECK(refused.exitCode == 1);
  CHECK(refused.json().at("error") == "BlockNotPositive");
}

TEST_CASE("kvext subcommand consumes a partial operator document") {
  TempDir dir;
  const std::string doc = dir.write("partial.json", R"({
    "ambientDim": 2,
    "domainBasis": {"rows": 2, "cols": 1, "entries": [[1], [0]]},
    "values": {"rows": 2, "cols": 1, "entries": [[1], [1]]}
  })");
  const CliResult result = run_cli({"kvext", "--input", doc});
  REQUIRE(result.exitCode == 0);
  CHECK(approx_equal(matrix_from_json(result.json().at("extension")),
                     real2(1, 1, 1, 1), 1e-8));

  const std::string refusedDoc = dir.write("refused.json", R"({
    "ambientDim": 2,
    "domainBasis": {"rows": 2, "cols": 1, "entries": [[1], [0]]},
    "values": {"rows": 2, "cols": 1, "entries": [[0], [1]]}
  })");
  const CliResult refused = run_cli({"kvext", "--input", refusedDoc});
  CHECK(refused.exitCode == 1);
  CHECK(refused.json().at("error") == "NotExtensible");
}

TEST_CASE("parsum subcommand with a weight") {
  TempDir dir;
  const std::string id2 = dir.write("id2.json", R"({"dim": 2, "entries": [[1, 0], [0, 1]]})");
  const std::string diag = dir.write("diag.json", R"({"dim": 2, "entries": [[1, 0], [0, 0]]})");
  const CliResult result =
      run_cli({"parsum", "--a", id2, "--b", diag, "--weight", "4"});
  REQUIRE(result.exitCode == 0);
  CHECK(approx_equal(matrix_from_json(result.json().at("parallelSum")),
                     diag2(0.8, 0.0), 1e-8));
}

TEST_CASE("algebra subcommands") {
  TempDir dir;
  const std::string alg = dir.write("alg.json", R"({
    "envDim": 2,
    "basis": [
      {"dim": 2, "entries": [[1, 0], [0, 0]]},
      {"dim": 2, "entries": [[0, 0], [0, 1]]}
    ]
  })");
  const std::string f = dir.write("f.json", R"({"values": [[1, 0], [1, 0]]})");
  const std::string g = dir.write("g.json", R"({"values": [[1, 0], [0, 0]]})");

  const CliResult gnsResult = run_cli({"alg-gns", "--algebra", alg, "--functional", f});
  REQUIRE(gnsResult.exitCode == 0);
  CHECK(gnsResult.json().at("hilbertDim") == 2);
  CHECK(gnsResult.json().at("cyclicNormSq").get<double>() == doctest::Approx(2.0));

  const CliResult complementResult =
      run_cli({"alg-complement", "--algebra", alg, "--f", f, "--g", g});
  REQUIRE(complementResult.exitCode == 0);
  const Vector h = vector_from_json(complementResult.json().at("complement").at("values"));
  CHECK(std::abs(h(0) - Complex(1, 0)) <= 1e-9);
  CHECK(std::abs(h(1)) <= 1e-9);

  const CliResult lebResult =
      run_cli({"alg-lebesgue", "--algebra", alg, "--f", f, "--g", g});
  REQUIRE(lebResult.exitCode == 0);
  const Vector regular = vector_from_json(lebResult.json().at("regular").at("values"));
  CHECK(std::abs(regular(0) - Complex(1, 0)) <= 1e-8);
  CHECK(std::abs(regular(1)) <= 1e-8);

  const std::string notRep = dir.write("bad.json", R"({"values": [[-1, 0], [0, 0]]})");
  const CliResult refused = run_cli({"alg-gns", "--algebra", alg, "--functional", notRep});
  CHECK(refused.exitCode == 1);
  CHECK(refused.json().at("error") == "NotRepresentable");
}

TEST_CASE("reports are byte-identical across runs and reparse cleanly") {
  TempDir dir;
  std::mt19937_64 rng(91);
  const Matrix a = random_psd(3, 2, rng);
  const Matrix b = random_gaussian(3, 3, rng) * a;
  const std::string aPath = dir.write("a.json", matrix_to_json(a).dump());
  const std::string bPath = dir.write("b.json", matrix_to_json(b).dump());

  const CliResult first = run_cli({"complement", "--a", aPath, "--b", bPath});
  const CliResult second = run_cli({"complement", "--a", aPath, "--b", bPath});
  REQUIRE(first.exitCode == 0);
  CHECK(first.out == second.out);

  // Emitted matrices reparse to the in-memory values.
  const Matrix emitted = matrix_from_json(first.json().at("complement"));
  const Matrix recomputed = matrix_from_json(second.json().at("complement"));
  CHECK((emitted - recomputed).norm() == 0.0);

  const CliResult verifyA = run_cli({"verify", "--instances", "5", "--dim", "4", "--seed", "3"});
  const CliResult verifyB = run_cli({"verify", "--instances", "5", "--dim", "4", "--seed", "3"});
  REQUIRE(verifyA.exitCode == 0);
  CHECK(verifyA.out == verifyB.out);
}

TEST_CASE("input errors exit with code 2") {
  TempDir dir;
  const CliResult missing = run_cli({"complement", "--a", "/nonexistent.json",
                                     "--b", "/nonexistent.json"});
  CHECK(missing.exitCode == 2);

  const std::string broken = dir.write("broken.json", "{not json");
  const CliResult bad = run_cli({"complement", "--a", broken, "--b", broken});
  CHECK(bad.exitCode == 2);

  const std::string id2 = dir.write("id2.json", R"({"dim": 2, "entries": [[1, 0], [0, 1]]})");
  const std::string id3 = dir.write("id3.json", R"({"dim": 3, "entries": [[1,0,0],[0,1,0],[0,0,1]]})");
  const CliResult mismatched = run_cli({"complement", "--a", id2, "--b", id3});
  CHECK(mismatched.exitCode == 2);

  const CliResult noArgs = run_cli({"complement"});
  CHECK(noArgs.exitCode == 2);

  const CliResult badFlag = run_cli({"frobnicate"});
  CHECK(badFlag.exitCode == 2);
}

TEST_CASE("combined input documents and text mode") {
  TempDir dir;
  const std::string combined = dir.write("doc.json", R"({
    "a": {"dim": 2, "entries": [[1, 0], [0, 1]]},
    "b": {"dim": 2, "entries": [[1, 0], [0, 1]]},
    "probes": [[1, 0], [0, 1]]
  })");
  const CliResult result = run_cli({"complement", "--input", combined});
  REQUIRE(result.exitCode == 0);
  REQUIRE(result.json().contains("bestConstants"));
  CHECK(result.json().at("bestConstants").size() == 2);
  CHECK(result.json().at("bestConstants")[0].at("value").get<double>() ==
        doctest::Approx(1.0));

  const CliResult text = run_cli({"--text", "complement", "--input", combined});
  CHECK(text.exitCode == 0);
  CHECK(text.out.find("completable") != std::string::npos);
}

TEST_CASE("verify exercises a supplied instance") {
  TempDir dir;
  std::mt19937_64 rng(92);
  const Matrix a = random_psd(3, 3, rng);
  const Matrix b = random_gaussian(3, 3, rng) * a;
  const std::string aPath = dir.write("a.json", matrix_to_json(a).dump());
  const std::string bPath = dir.write("b.json", matrix_to_json(b).dump());
  const CliResult result = run_cli({"verify", "--a", aPath, "--b", bPath,
                                    "--instances", "10", "--seed", "5"});
  REQUIRE(result.exitCode == 0);
  CHECK(result.json().at("pass") == true);
  CHECK(result.json().at("formulas").at("complementBounded").at("instances") == 10);
}
