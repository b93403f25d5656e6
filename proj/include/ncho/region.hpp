#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncho/closed_form.hpp"

namespace ncho {

/// A point (b, a, c, |ξ|) of the parameter region R.
struct Tetrad {
  double b = 1;
  double a = 1;
  double c = 1;
  double xi_abs = 0;

  CanonicalParams<double> params() const { return CanonicalParams<double>::from_tetrad(b, a, c, xi_abs); }
  Tetrad scaled(double r) const { return {b, r * a, r * c, r * xi_abs}; }
};

/// Condition order used everywhere: even+, even−, odd+, odd−.
inline constexpr std::array<std::pair<Parity, RootSign>, 4> kConditions = {{
    {Parity::Even, RootSign::Plus},
    {Parity::Even, RootSign::Minus},
    {Parity::Odd, RootSign::Plus},
    {Parity::Odd, RootSign::Minus},
}};

constexpr int condition_index(Parity parity, RootSign sign) {
  return (parity == Parity::Even ? 0 : 2) + (sign == RootSign::Plus ? 0 : 1);
}

/// Band tolerance for rendering zero sets on a grid.
inline constexpr double kVisualTol = 1e-3;
/// Tolerance for certified membership after root polishing.
inline constexpr double kCertifyTol = 1e-10;

struct RegionSample {
  Tetrad tetrad;
  bool inside = true;                // strictly inside R; otherwise residuals are NaN
  std::array<double, 4> residuals{};
  std::array<double, 4> scales{};
  std::array<bool, 4> flags{};       // |residual| <= tol * scale
  std::array<bool, 4> singular{};    // defect vanishes at that root
};

/// b >= 1, a and c above 1e-12, and ac − |ξ|² > 1e-12·ac.
bool inside_region(const Tetrad& t);

/// Throws OutsideRegion for points not strictly inside R.
RegionSample classify_point(const Tetrad& t, double tol = kVisualTol);

/// Family (b̃, ã, ãb̃, |ξ̃|) on Ω_even^sign with
///   ã = ∓|ξ̃| (5b̃² − 90b̃ + 5) / (b̃^{1/2} (9b̃² − 82b̃ + 9)),
/// valid for 9 < b̃ < 9 + 4√5 (plus) and 1 < b̃ < 9 or b̃ > 9 + 4√5 (minus).
Tetrad parametric_family_even(double b, double xi_abs, RootSign sign);

struct RayRoot {
  double a = 0;
  double relative_residual = 0;
  int iterations = 0;
};

/// Root of the membership residual along a ↦ (b, a, ratio·a, |ξ|) inside the
/// bracket, clipped to the part of the ray inside R. The bracket is sampled to find the first sign change between
/// regular points, then polished with a bracketing solver (200 iterations).
RayRoot solve_on_ray(double b, double c_over_a, double xi_abs, RootSign sign, Parity parity,
                     std::pair<double, double> bracket);

/// All certified roots of the residual along c ↦ (b, a, c, |ξ|) in
/// (c_lo, c_hi], increasing; only the smallest when `first_only`.
std::vector<double> c_line_roots(double b, double a, double xi_abs, RootSign sign, Parity parity, double c_lo,
                                 double c_hi, int samples = 256, bool first_only = false);

/// Smallest certified root of the residual along c ↦ (b, a, c, |ξ|) in
/// (c_lo, c_hi], found by sampling `samples` sub-intervals and polishing.
std::optional<double> solve_on_c_line(double b, double a, double xi_abs, RootSign sign, Parity parity, double c_lo,
                                      double c_hi, int samples = 256);

struct Axis {
  double lo = 0;
  double hi = 0;
  int n = 1;

  double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1); }
  /// Parses "lo:hi:n".
  static Axis parse(const std::string& text);
};

/// Dense classification over b × a × c at fixed |ξ|. Samples are stored
/// row-major with b slowest and c fastest.
struct ScanGrid {
  Axis b_axis, a_axis, c_axis;
  double xi_abs = 1;
  double tol = kVisualTol;
  std::vector<RegionSample> samples;

  std::size_t index(int ib, int ia, int ic) const {
    return (std::size_t(ib) * a_axis.n + ia) * c_axis.n + ic;
  }
  const RegionSample& at(int ib, int ia, int ic) const { return samples[index(ib, ia, ic)]; }
};

inline constexpr int kMaxAxisResolution = 512;
inline constexpr std::size_t kMaxGridSamples = 100'000'000;

ScanGrid scan_grid(const Axis& b, const Axis& a, const Axis& c, double xi_abs, double tol = kVisualTol);

/// CSV: header b,a,c,xi_abs,res_even_plus,res_even_minus,res_odd_plus,res_odd_minus,
/// flag_even_plus,flag_even_minus,flag_odd_plus,flag_odd_minus; 17 significant digits.
void export_grid_csv(std::ostream& os, const ScanGrid& grid);
void export_grid_json(std::ostream& os, const ScanGrid& grid);
std::vector<RegionSample> parse_grid_csv(std::istream& is);

/// Projection of the |ξ| = const slices of Ω^±_parity onto the (b, a) plane:
/// pixel (b, a) is set for a sign when some c in (c_lo, c_hi] puts the tetrad
/// on that manifold, certified by a polished root with relative residual
/// below kCertifyTol.
struct FigurePanel {
  Parity parity = Parity::Even;
  Axis b_axis, a_axis;
  double c_lo = 0, c_hi = 0;
  double xi_abs = 1;
  std::vector<std::uint8_t> plus, minus;  // row-major, b slowest
  std::vector<double> plus_c, minus_c;    // smallest certified root in c, NaN if none

  std::size_t index(int ib, int ia) const { return std::size_t(ib) * a_axis.n + ia; }
};

FigurePanel figure_panel(Parity parity, const Axis& b, const Axis& a, double c_lo, double c_hi, double xi_abs,
                         int c_samples = 256);

/// Default panel window: b in [1, 20], a in [0.02, 3], c in (0, 12], |ξ| = 1.
struct PanelWindow {
  double b_lo = 1.0, b_hi = 20.0;
  double a_lo = 0.02, a_hi = 3.0;
  double c_lo = 0.0, c_hi = 12.0;
  double xi_abs = 1.0;

  Axis b_axis(int n) const { return {b_lo, b_hi, n}; }
  Axis a_axis(int n) const { return {a_lo, a_hi, n}; }
};

/// CSV: b,a,plus,minus,plus_c,minus_c.
void export_panel_csv(std::ostream& os, const FigurePanel& panel);

}  // namespace ncho
