#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ncho/cli.hpp"
#include "ncho/io.hpp"
#include "ncho/region.hpp"

using namespace ncho;
using nlohmann::json;
using C = std::complex<double>;

namespace {

const std::string kFamilyTetrad = "4,0.7857142857142857,3.142857142857143,1";

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ncho");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "ncho_test_io_cli";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << content;
  return path;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ncho::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("pair parsing") {
  const auto id = parse_pair_text(R"({"A": [[1, 0], [0, 1]], "B": [[1, 0], [0, 1]]})");
  CHECK(id.A.matrix().isApprox(Mat2<double>::Identity()));

  const auto p = parse_pair_text(R"({"A": [[1, [0, 1]], [[0, -1], 2]], "B": [[2, 0], [0, 3]]})");
  CHECK(p.A.matrix()(0, 1) == C(0, 1));
  CHECK(p.A.matrix()(1, 0) == C(0, -1));
  CHECK(p.B.matrix()(1, 1) == C(3, 0));

  const auto back = parse_pair(pair_to_json(p));
  CHECK(back.A.matrix() == p.A.matrix());
  CHECK(back.B.matrix() == p.B.matrix());

  CHECK(code_of([] { parse_pair_text("{\"A\": [[1, 0], [0, 1]"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_pair_text(R"({"A": [[1, 0], [0, 1]]})"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_pair_text(R"({"A": [[1, 2], [0, 1]], "B": [[1, 0], [0, 1]]})"); }) ==
        ErrorCode::NotHermitian);
  CHECK(code_of([] { parse_pair_text(R"({"A": [[1, 0], [0, 1]], "B": [[1, 0], [0, -1]]})"); }) ==
        ErrorCode::NotPositiveDefinite);
}

TEST_CASE("complex and coefficient JSON round trip") {
  CHECK(complex_to_json(C(2.5, 0)) == json(2.5));
  CHECK(complex_from_json(json::array({1.0, -2.0}), "z") == C(1, -2));
  CHECK(code_of([] { complex_from_json(json("x"), "z"); }) == ErrorCode::ParseError);

  auto v = CoeffVector<double>::zeros(Parity::Odd, 3);
  v.block(1) = Vec2<double>(C(0.5, -0.25), C(1.0, 0.0));
  const auto in = parse_coeffs(coeffs_to_json(v, 0.75));
  CHECK(in.coeffs.parity == Parity::Odd);
  CHECK(in.coeffs.coeffs == v.coeffs);
  REQUIRE(in.alpha);
  CHECK(*in.alpha == 0.75);
  CHECK(code_of([] { parse_coeffs(json{{"parity", "even"}}); }) == ErrorCode::ParseError);
}

TEST_CASE("spectrum of the identity pair") {
  const auto path = temp_file("identity.json", R"({"A": [[1, 0], [0, 1]], "B": [[1, 0], [0, 1]]})");
  const auto r = run_cli({"spectrum", "--pair", path.string(), "-k", "6"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  const std::vector<double> expected{1, 1, 3, 3, 5, 5};
  REQUIRE(doc["eigenvalues"].size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(doc["eigenvalues"][i].get<double>() == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(doc["parities"][0] == "even");
}

TEST_CASE("spectrum is scaled back to the original pair") {
  const auto path = temp_file("scaled.json", R"({"A": [[2, 0], [0, 2]], "B": [[2, 0], [0, 2]]})");
  const auto r = run_cli({"spectrum", "--pair", path.string(), "-k", "2"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["eigenvalues"][0].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(doc["canonical"]["b1"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("closed-form and verify agree") {
  const auto r = run_cli({"closed-form", "--tetrad", kFamilyTetrad, "--sign", "minus", "--parity", "even"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["residual_eigen"].get<double>() < 1e-9);
  const double lambda = doc["lambda"].get<double>();
  CHECK(lambda == doctest::Approx(4.27617987).epsilon(1e-8));

  const auto coeffs = temp_file("coeffs.json", doc["coeffs"].dump());
  const auto ok = run_cli({"verify", "--tetrad", kFamilyTetrad, "--lambda", std::to_string(lambda), "--coeffs",
                           coeffs.string()});
  REQUIRE(ok.code == 0);
  CHECK(json::parse(ok.out)["residual"].get<double>() < 1e-6);

  const auto off = run_cli({"verify", "--tetrad", kFamilyTetrad, "--lambda", std::to_string(lambda + 0.5),
                            "--coeffs", coeffs.string()});
  REQUIRE(off.code == 0);
  CHECK(json::parse(off.out)["residual"].get<double>() > 1e-2);

  auto perturbed = doc["coeffs"];
  perturbed["blocks"][0][0] = perturbed["blocks"][0][0].is_array()
                                  ? json::array({perturbed["blocks"][0][0][0].get<double>() + 0.1,
                                                 perturbed["blocks"][0][0][1].get<double>()})
                                  : json(perturbed["blocks"][0][0].get<double>() + 0.1);
  const auto bad = temp_file("perturbed.json", perturbed.dump());
  const auto pr = run_cli({"verify", "--tetrad", kFamilyTetrad, "--lambda", std::to_string(lambda), "--coeffs",
                           bad.string()});
  REQUIRE(pr.code == 0);
  CHECK(json::parse(pr.out)["residual"].get<double>() > 1e-3);
}

TEST_CASE("closed-form off the manifold is a domain error") {
  const auto r = run_cli({"closed-form", "--tetrad", "3,1,2,0.8"});
  CHECK(r.code == 2);
  CHECK(r.err.find("OffManifold") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("region-scan writes CSV and JSON") {
  const std::vector<std::string> args{"region-scan", "--b-range", "2:4:2", "--a-range", "0.5:1:3", "--c-range",
                                      "1:4:3", "--xi", "0.5"};
  const auto csv = run_cli(args);
  REQUIRE(csv.code == 0);
  std::istringstream in(csv.out);
  const auto samples = parse_grid_csv(in);
  CHECK(samples.size() == 18);
  CHECK(csv.out.rfind("b,a,c,xi_abs,", 0) == 0);

  auto json_args = args;
  json_args.insert(json_args.end(), {"--format", "json"});
  const auto js = run_cli(json_args);
  REQUIRE(js.code == 0);
  CHECK(json::parse(js.out)["samples"].size() == 18);

  const auto path = std::filesystem::temp_directory_path() / "ncho_test_io_cli" / "scan.csv";
  auto file_args = args;
  file_args.insert(file_args.end(), {"-o", path.string()});
  REQUIRE(run_cli(file_args).code == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == csv.out);
}

TEST_CASE("convergence table") {
  const auto r = run_cli({"convergence", "--tetrad", "4,1,2,1", "--Ns", "10,20,40", "-k", "3"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["rows"].size() == 3);
  CHECK(doc["rows"][0].size() == 3);
  CHECK(doc["monotone"] == true);
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"bogus"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({"spectrum"}).code == 2);
  CHECK(run_cli({"spectrum", "--tetrad", "1,2"}).code == 2);
  CHECK(run_cli({"spectrum", "--tetrad", "0.5,1,1,0"}).code == 2);
  CHECK(run_cli({"closed-form", "--tetrad", kFamilyTetrad, "--sign", "sideways"}).code == 2);
  CHECK(run_cli({"region-scan", "--b-range", "1:2"}).code == 2);

  const auto missing = run_cli({"spectrum", "--pair", "/nonexistent/pair.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("IoError") != std::string::npos);

  const auto malformed = temp_file("malformed.json", "{\"A\": [[1, 0]");
  CHECK(run_cli({"spectrum", "--pair", malformed.string()}).code == 2);

  const auto budget = run_cli({"spectrum", "--tetrad", "2,1,1,0.5", "-N", "4", "--max-blocks", "8", "--tol", "0"});
  CHECK(budget.code == 1);
  CHECK(budget.err.find("TruncationBudgetExceeded") != std::string::npos);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args{"spectrum", "--tetrad", "3,1.2,2,0.7", "-k", "4"};
  CHECK(run_cli(args).out == run_cli(args).out);
}
