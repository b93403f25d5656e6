#include "ncho/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ncho/io.hpp"
#include "ncho/region.hpp"
#include "ncho/spectral.hpp"

namespace ncho {

namespace {

using nlohmann::json;

struct InputOptions {
  std::string pair_path;
  std::string tetrad;
};

void add_input(CLI::App* cmd, InputOptions& in) {
  auto* pair = cmd->add_option("--pair", in.pair_path, "JSON file with the matrices A and B ('-' for stdin)");
  auto* tetrad = cmd->add_option("--tetrad", in.tetrad, "canonical parameters b,a,c,|xi|");
  pair->excludes(tetrad);
  tetrad->excludes(pair);
}

CanonicalParams<double> parse_tetrad(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "tetrad: bad number '" + field + "'");
    }
  }
  if (v.size() != 4) throw Error(ErrorCode::ParseError, "tetrad: expected b,a,c,|xi|");
  return CanonicalParams<double>::from_tetrad(v[0], v[1], v[2], v[3]);
}

HermitianPair<double> load_pair(const InputOptions& in) {
  if (!in.pair_path.empty()) return parse_pair_text(read_text(in.pair_path));
  if (!in.tetrad.empty()) return parse_tetrad(in.tetrad).pair();
  throw Error(ErrorCode::InvalidArgument, "one of --pair or --tetrad is required");
}

CanonicalParams<double> load_canonical(const InputOptions& in) {
  if (!in.tetrad.empty() && in.pair_path.empty()) return parse_tetrad(in.tetrad);
  return canonicalize(load_pair(in));
}

RootSign parse_sign(const std::string& s) { return s == "plus" ? RootSign::Plus : RootSign::Minus; }
Parity parse_parity(const std::string& s) { return s == "even" ? Parity::Even : Parity::Odd; }

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    }
    os_ = file_.is_open() ? static_cast<std::ostream*>(&file_) : &fallback;
  }
  std::ostream& stream() { return *os_; }
  void json_doc(const json& j) { *os_ << j.dump(2) << '\n'; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

struct SpectrumCmd {
  InputOptions in;
  int k = 6;
  int n_blocks = 150;
  std::optional<double> alpha;
  double tol = 1e-9;
  int max_blocks = 600;
  bool fixed = false;
  std::string out;

  void run(std::ostream& os) const {
    const auto params = load_canonical(in);
    FullSpectrumOptions opt;
    opt.n_blocks = n_blocks;
    opt.alpha = alpha;
    opt.tol = tol;
    opt.max_blocks = max_blocks;
    opt.adaptive = !fixed;
    const auto result = full_spectrum(params, k, opt);
    json doc = spectrum_to_json(result, params.scale_b1);
    doc["canonical"] = canonical_to_json(params);
    Output(out, os).json_doc(doc);
  }
};

struct ClosedFormCmd {
  InputOptions in;
  std::string sign = "minus";
  std::string parity = "even";
  double tol = kDefaultMembershipTol;
  std::string out;

  void run(std::ostream& os) const {
    const auto params = load_canonical(in);
    const auto sol = construct_phi(params, parse_sign(sign), parse_parity(parity), tol);
    json doc = solution_to_json(sol);
    doc["lambda_original"] = params.scale_b1 * sol.lambda;
    doc["canonical"] = canonical_to_json(params);
    Output(out, os).json_doc(doc);
  }
};

struct VerifyCmd {
  InputOptions in;
  double lambda = 0;
  std::string coeffs_path;
  std::optional<double> alpha;
  std::string out;

  void run(std::ostream& os) const {
    const auto pair = load_pair(in);
    json coeffs_json;
    try {
      coeffs_json = json::parse(read_text(coeffs_path));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, std::string("coeffs JSON: ") + e.what());
    }
    const auto input = parse_coeffs(coeffs_json);
    const double a = alpha.value_or(input.alpha.value_or(default_alpha(canonicalize(pair))));
    const double residual = eigen_residual(pair, a, input.coeffs, lambda);
    Output(out, os).json_doc({{"lambda", lambda},
                              {"alpha", a},
                              {"parity", std::string(to_string(input.coeffs.parity))},
                              {"n_blocks", input.coeffs.n_blocks()},
                              {"residual", residual}});
  }
};

struct RegionScanCmd {
  std::string b_range = "1.1:20:64";
  std::string a_range = "0.05:10:64";
  std::string c_range = "0.05:10:64";
  double xi = 1.0;
  double tol = kVisualTol;
  std::string out;
  std::string format = "csv";

  void run(std::ostream& os) const {
    const auto grid = scan_grid(Axis::parse(b_range), Axis::parse(a_range), Axis::parse(c_range), xi, tol);
    Output sink(out, os);
    if (format == "json") {
      export_grid_json(sink.stream(), grid);
    } else {
      export_grid_csv(sink.stream(), grid);
    }
  }
};

struct ConvergenceCmd {
  InputOptions in;
  std::vector<int> ns{25, 50, 100, 200};
  std::string parity = "even";
  int k = 6;
  std::optional<double> alpha;
  std::string out;

  void run(std::ostream& os) const {
    const auto params = load_canonical(in);
    const double a = alpha.value_or(default_alpha(params));
    const auto table = convergence_study(params, a, parse_parity(parity), ns, k);
    json rows = json::array();
    for (const auto& row : table.rows) {
      json scaled = json::array();
      for (double v : row) scaled.push_back(params.scale_b1 * v);
      rows.push_back(scaled);
    }
    Output(out, os).json_doc({{"n_blocks", table.n_blocks},
                              {"alpha", a},
                              {"parity", parity},
                              {"rows", rows},
                              {"monotone", table.monotone},
                              {"warnings", table.warnings},
                              {"canonical", canonical_to_json(params)}});
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra of the matrix harmonic oscillator B(-d^2/dx^2) + A x^2", "ncho"};
  app.require_subcommand(1);

  SpectrumCmd spectrum;
  auto* sp = app.add_subcommand("spectrum", "lowest eigenvalues of both parity sectors");
  add_input(sp, spectrum.in);
  sp->add_option("-k", spectrum.k, "number of eigenvalues")->check(CLI::PositiveNumber);
  sp->add_option("-N,--blocks", spectrum.n_blocks, "initial number of 2x2 blocks per sector")
      ->check(CLI::Range(1, 2000));
  sp->add_option("--alpha", spectrum.alpha, "Hermite scale (default: smaller beta root)");
  sp->add_option("--tol", spectrum.tol, "relative settling tolerance for adaptive doubling");
  sp->add_option("--max-blocks", spectrum.max_blocks, "limit for adaptive doubling");
  sp->add_flag("--fixed", spectrum.fixed, "disable adaptive doubling");
  sp->add_option("-o,--out", spectrum.out, "output path (default stdout)");

  ClosedFormCmd closed;
  auto* cf = app.add_subcommand("closed-form", "four-term eigenfunction on an Omega manifold");
  add_input(cf, closed.in);
  cf->add_option("--sign", closed.sign, "beta root")->check(CLI::IsMember({"plus", "minus"}));
  cf->add_option("--parity", closed.parity, "sector")->check(CLI::IsMember({"even", "odd"}));
  cf->add_option("--tol", closed.tol, "relative membership tolerance");
  cf->add_option("-o,--out", closed.out, "output path (default stdout)");

  VerifyCmd verify;
  auto* vf = app.add_subcommand("verify", "residual of a candidate eigenpair");
  add_input(vf, verify.in);
  vf->add_option("--lambda", verify.lambda, "candidate eigenvalue")->required();
  vf->add_option("--coeffs", verify.coeffs_path, "JSON coefficient file")->required();
  vf->add_option("--alpha", verify.alpha, "Hermite scale (overrides the file)");
  vf->add_option("-o,--out", verify.out, "output path (default stdout)");

  RegionScanCmd scan;
  auto* rs = app.add_subcommand("region-scan", "classify a b x a x c grid against the four manifolds");
  rs->add_option("--b-range", scan.b_range, "lo:hi:n");
  rs->add_option("--a-range", scan.a_range, "lo:hi:n");
  rs->add_option("--c-range", scan.c_range, "lo:hi:n");
  rs->add_option("--xi", scan.xi, "|xi|");
  rs->add_option("--tol", scan.tol, "relative residual band");
  rs->add_option("-o,--out", scan.out, "output path (default stdout)");
  rs->add_option("--format", scan.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  ConvergenceCmd conv;
  auto* cv = app.add_subcommand("convergence", "eigenvalues of one sector against truncation size");
  add_input(cv, conv.in);
  cv->add_option("--Ns", conv.ns, "block counts")->delimiter(',');
  cv->add_option("--parity", conv.parity, "sector")->check(CLI::IsMember({"even", "odd"}));
  cv->add_option("-k", conv.k, "number of eigenvalues")->check(CLI::PositiveNumber);
  cv->add_option("--alpha", conv.alpha, "Hermite scale (default: smaller beta root)");
  cv->add_option("-o,--out", conv.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sp) spectrum.run(out);
    if (*cf) closed.run(out);
    if (*vf) verify.run(out);
    if (*rs) scan.run(out);
    if (*cv) conv.run(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_domain_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ncho
