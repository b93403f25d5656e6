#include "ncho/io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace ncho {

using nlohmann::json;

json complex_to_json(Complex<double> z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

Complex<double> complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw Error(ErrorCode::ParseError, where + ": expected a number or [re, im], got " + j.dump());
}

namespace {

Mat2<double> matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
      j[1].size() != 2) {
    throw Error(ErrorCode::ParseError, name + ": expected a 2x2 nested array");
  }
  Mat2<double> m;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      m(r, c) = complex_from_json(j[r][c], name + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

json matrix_to_json(const Mat2<double>& m) {
  json rows = json::array();
  for (int r = 0; r < 2; ++r) rows.push_back(json::array({complex_to_json(m(r, 0)), complex_to_json(m(r, 1))}));
  return rows;
}

Parity parity_from_json(const json& j) {
  if (j == "even") return Parity::Even;
  if (j == "odd") return Parity::Odd;
  throw Error(ErrorCode::ParseError, "parity: expected \"even\" or \"odd\", got " + j.dump());
}

}  // namespace

HermitianPair<double> parse_pair(const json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("B")) {
    throw Error(ErrorCode::ParseError, "pair: expected an object with keys \"A\" and \"B\"");
  }
  const Mat2<double> A = matrix_from_json(j["A"], "A");
  const Mat2<double> B = matrix_from_json(j["B"], "B");
  return validate_pair(A, B);
}

HermitianPair<double> parse_pair_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("pair JSON: ") + e.what());
  }
  return parse_pair(j);
}

json pair_to_json(const HermitianPair<double>& pair) {
  return {{"A", matrix_to_json(pair.A.matrix())}, {"B", matrix_to_json(pair.B.matrix())}};
}

CoeffInput parse_coeffs(const json& j) {
  if (!j.is_object() || !j.contains("parity") || !j.contains("blocks") || !j["blocks"].is_array()) {
    throw Error(ErrorCode::ParseError, "coeffs: expected {\"parity\", \"blocks\": [[u, l], ...]}");
  }
  const Parity parity = parity_from_json(j["parity"]);
  const json& blocks = j["blocks"];
  if (blocks.empty()) throw Error(ErrorCode::ZeroDimension, "coeffs: no blocks");
  CoeffInput in{CoeffVector<double>::zeros(parity, int(blocks.size())), std::nullopt};
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const json& blk = blocks[k];
    const std::string where = "blocks[" + std::to_string(k) + "]";
    if (!blk.is_array() || blk.size() != 2) throw Error(ErrorCode::ParseError, where + ": expected [u, l]");
    in.coeffs.block(int(k)) = Vec2<double>(complex_from_json(blk[0], where), complex_from_json(blk[1], where));
  }
  if (j.contains("alpha")) {
    if (!j["alpha"].is_number()) throw Error(ErrorCode::ParseError, "alpha: expected a number");
    in.alpha = j["alpha"].get<double>();
  }
  return in;
}

json coeffs_to_json(const CoeffVector<double>& v, double alpha) {
  json blocks = json::array();
  for (int k = 0; k < v.n_blocks(); ++k) {
    blocks.push_back(json::array({complex_to_json(v.block(k)(0)), complex_to_json(v.block(k)(1))}));
  }
  return {{"parity", std::string(to_string(v.parity))}, {"alpha", alpha}, {"blocks", blocks}};
}

json canonical_to_json(const CanonicalParams<double>& p) {
  return {{"b", p.b},
          {"a", p.a},
          {"c", p.c},
          {"xi", complex_to_json(p.xi)},
          {"U", matrix_to_json(p.transform_U)},
          {"b1", p.scale_b1}};
}

json spectrum_to_json(const SpectralResult& r, double energy_scale) {
  json eigenvalues = json::array();
  json parities = json::array();
  json convergence = json::array();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    const double conv = r.convergence[i];
    eigenvalues.push_back(energy_scale * r.eigenvalues[i]);
    parities.push_back(std::string(to_string(r.parities[i])));
    convergence.push_back(std::isfinite(conv) ? json(energy_scale * conv) : json(nullptr));
  }
  return {{"eigenvalues", eigenvalues},
          {"parities", parities},
          {"convergence", convergence},
          {"n_blocks", r.n_blocks_used},
          {"alpha", r.alpha_used}};
}

json solution_to_json(const ClosedFormSolution<double>& s) {
  return {{"parity", std::string(to_string(s.parity))},
          {"sign", std::string(to_string(s.beta_root.sign))},
          {"beta", s.beta_root.beta},
          {"lambda", s.lambda},
          {"gamma", complex_to_json(s.gamma)},
          {"gamma_tilde", complex_to_json(s.gamma_tilde)},
          {"residual_membership", s.residual_membership},
          {"membership_scale", s.membership_scale},
          {"consistency", s.consistency},
          {"residual_eigen", s.residual_eigen},
          {"coeffs", coeffs_to_json(s.coeffs, s.alpha())}};
}

std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ncho
