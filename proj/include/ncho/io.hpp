#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "ncho/closed_form.hpp"
#include "ncho/matrix_core.hpp"
#include "ncho/spectral.hpp"

namespace ncho {

/// Complex entries are written as bare numbers when real and [re, im] otherwise;
/// both forms are accepted on input.
nlohmann::json complex_to_json(Complex<double> z);
Complex<double> complex_from_json(const nlohmann::json& j, const std::string& where);

/// {"A": [[.,.],[.,.]], "B": [[.,.],[.,.]]}. Throws ParseError on malformed
/// input and NotHermitian / NotPositiveDefinite on invalid matrices.
HermitianPair<double> parse_pair(const nlohmann::json& j);
HermitianPair<double> parse_pair_text(const std::string& text);
nlohmann::json pair_to_json(const HermitianPair<double>& pair);

/// {"parity": "even"|"odd", "alpha": α (optional), "blocks": [[u, l], ...]}.
struct CoeffInput {
  CoeffVector<double> coeffs;
  std::optional<double> alpha;
};
CoeffInput parse_coeffs(const nlohmann::json& j);
nlohmann::json coeffs_to_json(const CoeffVector<double>& v, double alpha);

nlohmann::json canonical_to_json(const CanonicalParams<double>& p);
nlohmann::json spectrum_to_json(const SpectralResult& r, double energy_scale);
nlohmann::json solution_to_json(const ClosedFormSolution<double>& s);

/// Reads a whole file or, for "-", standard input. Throws IoError.
std::string read_text(const std::string& path);

}  // namespace ncho
