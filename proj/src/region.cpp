#include "ncho/region.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

#include "ncho/parallel.hpp"

namespace ncho {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kRootIterations = 200;

struct Evaluation {
  double residual = kNaN;
  double scale = kNaN;
  bool regular = false;

  double relative() const { return residual / scale; }
};

Evaluation evaluate(const Tetrad& t, RootSign sign, Parity parity) {
  if (!inside_region(t)) return {};
  const auto m = membership(t.params(), sign, parity);
  if (m.singular || !std::isfinite(m.residual)) return {};
  return {m.residual, m.scale, true};
}

/// Polishes a root of f bracketed by [lo, hi] with f(lo), f(hi) of opposite sign.
std::pair<double, int> polish(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                              double f_hi) {
  boost::uintmax_t iterations = kRootIterations;
  const auto tol = boost::math::tools::eps_tolerance<double>(52);
  const auto [left, right] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, iterations);
  const double fl = f(left);
  const double fr = f(right);
  return {std::abs(fl) <= std::abs(fr) ? left : right, int(iterations)};
}

/// Certified roots of g along [lo, hi] sampled at `samples` points, in
/// increasing order; stops after the first when `first_only`. Only sign
/// changes between regular samples count.
std::vector<double> certified_roots(const std::function<Evaluation(double)>& g, double lo, double hi, int samples,
                                    bool first_only, bool* singular_seen = nullptr, int* iterations = nullptr) {
  auto f = [&](double x) { return g(x).relative(); };
  std::vector<double> roots;
  Evaluation prev = g(lo);
  double prev_x = lo;
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * double(i) / double(samples);
    const Evaluation cur = g(x);
    if (!cur.regular && singular_seen) *singular_seen = true;
    if (prev.regular && cur.regular) {
      const double fp = prev.relative();
      const double fc = cur.relative();
      double root = std::numeric_limits<double>::quiet_NaN();
      if (fp == 0.0) {
        root = prev_x;
      } else if ((fp < 0) != (fc < 0) && fc != 0.0) {
        int its = 0;
        std::tie(root, its) = polish(f, prev_x, x, fp, fc);
        if (iterations) *iterations = its;
      }
      if (!std::isnan(root)) {
        const Evaluation at_root = g(root);
        if (at_root.regular && std::abs(at_root.relative()) <= kCertifyTol) {
          roots.push_back(root);
          if (first_only) return roots;
        }
      }
    }
    prev = cur;
    prev_x = x;
  }
  return roots;
}

std::optional<double> first_root(const std::function<Evaluation(double)>& g, double lo, double hi, int samples,
                                 bool* singular_seen = nullptr, int* iterations = nullptr) {
  const auto roots = certified_roots(g, lo, hi, samples, true, singular_seen, iterations);
  if (roots.empty()) return std::nullopt;
  return roots.front();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

bool inside_region(const Tetrad& t) {
  constexpr double margin = 1e-12;
  return t.b >= 1.0 && t.a > margin && t.c > margin && t.xi_abs >= 0.0 &&
         t.a * t.c - t.xi_abs * t.xi_abs > margin * t.a * t.c;
}

RegionSample classify_point(const Tetrad& t, double tol) {
  if (!inside_region(t)) {
    std::ostringstream msg;
    msg << "tetrad (" << t.b << ", " << t.a << ", " << t.c << ", " << t.xi_abs << ") is not inside R";
    throw Error(ErrorCode::OutsideRegion, msg.str());
  }
  RegionSample s;
  s.tetrad = t;
  const auto params = t.params();
  for (int i = 0; i < 4; ++i) {
    const auto [parity, sign] = kConditions[i];
    const auto m = membership(params, sign, parity);
    s.singular[i] = m.singular;
    s.residuals[i] = m.residual;
    s.scales[i] = m.scale;
    s.flags[i] = !m.singular && std::abs(m.residual) <= tol * m.scale;
  }
  return s;
}

Tetrad parametric_family_even(double b, double xi_abs, RootSign sign) {
  const double upper = 9.0 + 4.0 * std::sqrt(5.0);
  const bool valid = sign == RootSign::Plus ? (b > 9.0 && b < upper) : ((b > 1.0 && b < 9.0) || b > upper);
  if (!valid) {
    std::ostringstream msg;
    msg << "b = " << b << " outside the " << to_string(sign) << " family interval";
    throw Error(ErrorCode::OutOfInterval, msg.str());
  }
  if (!(xi_abs > 0.0)) throw Error(ErrorCode::InvalidArgument, "|xi| must be positive");

  const double ratio = xi_abs * (5.0 * b * b - 90.0 * b + 5.0) / (std::sqrt(b) * (9.0 * b * b - 82.0 * b + 9.0));
  const double a = sign == RootSign::Plus ? -ratio : ratio;
  const Tetrad t{b, a, a * b, xi_abs};
  if (!inside_region(t)) {
    std::ostringstream msg;
    msg << "family point a = " << a << " at b = " << b << " violates a > 0 or |xi|^2 < a c";
    throw Error(ErrorCode::InfeasibleFamilyPoint, msg.str());
  }
  return t;
}

RayRoot solve_on_ray(double b, double c_over_a, double xi_abs, RootSign sign, Parity parity,
                     std::pair<double, double> bracket) {
  if (!(bracket.first < bracket.second) || !(c_over_a > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "empty bracket or ratio <= 0");
  }
  // The ray enters R at a = |ξ|/sqrt(ratio); the bracket is clipped to it.
  const double entry = xi_abs / std::sqrt(c_over_a) * (1.0 + 1e-9);
  const double lo = std::max(bracket.first, entry);
  const double hi = bracket.second;
  if (b < 1.0 || !(lo < hi) || !inside_region({b, hi, c_over_a * hi, xi_abs})) {
    throw Error(ErrorCode::OutsideRegion, "ray bracket does not meet R");
  }
  auto g = [&](double a) { return evaluate(Tetrad{b, a, c_over_a * a, xi_abs}, sign, parity); };
  bool singular_seen = false;
  int iterations = 0;
  const auto root = first_root(g, lo, hi, 64, &singular_seen, &iterations);
  if (!root) {
    if (singular_seen) throw Error(ErrorCode::SingularEncountered, "no certified root; singular points on ray");
    throw Error(ErrorCode::NotFound, "no sign change of the residual inside the bracket");
  }
  return {*root, g(*root).relative(), iterations};
}

std::vector<double> c_line_roots(double b, double a, double xi_abs, RootSign sign, Parity parity, double c_lo,
                                 double c_hi, int samples, bool first_only) {
  // c must exceed |ξ|²/a to stay inside R.
  const double lo = std::max(c_lo, xi_abs * xi_abs / a * (1.0 + 1e-9));
  if (!(lo < c_hi) || samples < 1) return {};
  auto g = [&](double c) { return evaluate(Tetrad{b, a, c, xi_abs}, sign, parity); };
  return certified_roots(g, lo, c_hi, samples, first_only);
}

std::optional<double> solve_on_c_line(double b, double a, double xi_abs, RootSign sign, Parity parity, double c_lo,
                                      double c_hi, int samples) {
  const auto roots = c_line_roots(b, a, xi_abs, sign, parity, c_lo, c_hi, samples, true);
  if (roots.empty()) return std::nullopt;
  return roots.front();
}

Axis Axis::parse(const std::string& text) {
  Axis axis;
  char sep1 = 0, sep2 = 0;
  std::istringstream in(text);
  if (!(in >> axis.lo >> sep1 >> axis.hi >> sep2 >> axis.n) || sep1 != ':' || sep2 != ':' || axis.n < 1) {
    throw Error(ErrorCode::ParseError, "axis must look like lo:hi:n, got '" + text + "'");
  }
  return axis;
}

ScanGrid scan_grid(const Axis& b, const Axis& a, const Axis& c, double xi_abs, double tol) {
  for (const Axis* axis : {&b, &a, &c}) {
    if (axis->n < 1 || axis->n > kMaxAxisResolution) {
      throw Error(ErrorCode::InvalidArgument, "axis resolution must lie in [1, 512]");
    }
  }
  const std::size_t total = std::size_t(b.n) * a.n * c.n;
  if (total > kMaxGridSamples) throw Error(ErrorCode::BudgetExceeded, "grid exceeds 1e8 samples");
  if (b.lo < 1.0 || a.lo <= 0.0 || c.lo <= 0.0) {
    throw Error(ErrorCode::OutsideRegion, "grid ranges must satisfy b >= 1, a > 0, c > 0");
  }

  ScanGrid grid{b, a, c, xi_abs, tol, std::vector<RegionSample>(total)};
  parallel_for(std::size_t(b.n), [&](std::size_t ib) {
    for (int ia = 0; ia < a.n; ++ia) {
      for (int ic = 0; ic < c.n; ++ic) {
        const Tetrad t{b.at(int(ib)), a.at(ia), c.at(ic), xi_abs};
        RegionSample& s = grid.samples[grid.index(int(ib), ia, ic)];
        if (inside_region(t)) {
          s = classify_point(t, tol);
        } else {
          s.tetrad = t;
          s.inside = false;
          s.residuals.fill(kNaN);
          s.scales.fill(kNaN);
        }
      }
    }
  });
  return grid;
}

void export_grid_csv(std::ostream& os, const ScanGrid& grid) {
  os << "b,a,c,xi_abs,res_even_plus,res_even_minus,res_odd_plus,res_odd_minus,"
        "flag_even_plus,flag_even_minus,flag_odd_plus,flag_odd_minus\n";
  for (const auto& s : grid.samples) {
    os << format_double(s.tetrad.b) << ',' << format_double(s.tetrad.a) << ',' << format_double(s.tetrad.c) << ','
       << format_double(s.tetrad.xi_abs);
    for (double r : s.residuals) os << ',' << format_double(r);
    for (bool f : s.flags) os << ',' << (f ? 1 : 0);
    os << '\n';
  }
  if (!os) throw Error(ErrorCode::IoError, "failed writing grid CSV");
}

void export_grid_json(std::ostream& os, const ScanGrid& grid) {
  using nlohmann::json;
  auto axis_json = [](const Axis& ax) { return json{{"lo", ax.lo}, {"hi", ax.hi}, {"n", ax.n}}; };
  json samples = json::array();
  for (const auto& s : grid.samples) {
    json residuals = json::array();
    for (double r : s.residuals) residuals.push_back(std::isnan(r) ? json(nullptr) : json(r));
    samples.push_back({{"tetrad", {s.tetrad.b, s.tetrad.a, s.tetrad.c, s.tetrad.xi_abs}},
                       {"inside", s.inside},
                       {"residuals", residuals},
                       {"flags", s.flags},
                       {"singular", s.singular}});
  }
  const json doc{{"b_axis", axis_json(grid.b_axis)},
                 {"a_axis", axis_json(grid.a_axis)},
                 {"c_axis", axis_json(grid.c_axis)},
                 {"xi_abs", grid.xi_abs},
                 {"tol", grid.tol},
                 {"order", "row-major: b slowest, c fastest"},
                 {"conditions", {"even_plus", "even_minus", "odd_plus", "odd_minus"}},
                 {"samples", samples}};
  os << doc.dump() << '\n';
  if (!os) throw Error(ErrorCode::IoError, "failed writing grid JSON");
}

std::vector<RegionSample> parse_grid_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::ParseError, "empty grid CSV");
  std::vector<RegionSample> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 12) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 12 fields");
    }
    auto num = [&](int i) {
      try {
        return std::stod(fields[i]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" + fields[i] + "'");
      }
    };
    RegionSample s;
    s.tetrad = {num(0), num(1), num(2), num(3)};
    s.inside = inside_region(s.tetrad);
    for (int i = 0; i < 4; ++i) {
      s.residuals[i] = num(4 + i);
      s.flags[i] = fields[8 + i] == "1";
    }
    out.push_back(s);
  }
  return out;
}

FigurePanel figure_panel(Parity parity, const Axis& b, const Axis& a, double c_lo, double c_hi, double xi_abs,
                         int c_samples) {
  if (b.n > kMaxAxisResolution || a.n > kMaxAxisResolution || b.n < 1 || a.n < 1) {
    throw Error(ErrorCode::InvalidArgument, "axis resolution must lie in [1, 512]");
  }
  FigurePanel panel;
  panel.parity = parity;
  panel.b_axis = b;
  panel.a_axis = a;
  panel.c_lo = c_lo;
  panel.c_hi = c_hi;
  panel.xi_abs = xi_abs;
  const std::size_t total = std::size_t(b.n) * a.n;
  panel.plus.assign(total, 0);
  panel.minus.assign(total, 0);
  panel.plus_c.assign(total, kNaN);
  panel.minus_c.assign(total, kNaN);

  parallel_for(std::size_t(b.n), [&](std::size_t ib) {
    for (int ia = 0; ia < a.n; ++ia) {
      const double bv = b.at(int(ib));
      const double av = a.at(ia);
      const std::size_t idx = panel.index(int(ib), ia);
      for (RootSign sign : {RootSign::Plus, RootSign::Minus}) {
        const auto root = solve_on_c_line(bv, av, xi_abs, sign, parity, c_lo, c_hi, c_samples);
        if (!root) continue;
        (sign == RootSign::Plus ? panel.plus : panel.minus)[idx] = 1;
        (sign == RootSign::Plus ? panel.plus_c : panel.minus_c)[idx] = *root;
      }
    }
  });
  return panel;
}

void export_panel_csv(std::ostream& os, const FigurePanel& panel) {
  os << "b,a,plus,minus,plus_c,minus_c\n";
  for (int ib = 0; ib < panel.b_axis.n; ++ib) {
    for (int ia = 0; ia < panel.a_axis.n; ++ia) {
      const std::size_t i = panel.index(ib, ia);
      os << format_double(panel.b_axis.at(ib)) << ',' << format_double(panel.a_axis.at(ia)) << ','
         << int(panel.plus[i]) << ',' << int(panel.minus[i]) << ',' << format_double(panel.plus_c[i]) << ','
         << format_double(panel.minus_c[i]) << '\n';
    }
  }
  if (!os) throw Error(ErrorCode::IoError, "failed writing panel CSV");
}

}  // namespace ncho
