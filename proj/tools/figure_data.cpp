#include <fstream>
#include <iostream>
#include <string>

#include "ncho/region.hpp"

// Writes the (b, a) projections of the |xi| = 1 slices of the four manifolds.
// Usage: ncho_figure [out_dir] [resolution]
int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "docs";
  const int n = argc > 2 ? std::stoi(argv[2]) : 128;
  const ncho::PanelWindow w;
  try {
    for (auto parity : {ncho::Parity::Even, ncho::Parity::Odd}) {
      const auto panel = ncho::figure_panel(parity, w.b_axis(n), w.a_axis(n), w.c_lo, w.c_hi, w.xi_abs);
      const std::string path = dir + "/figure1_" + std::string(ncho::to_string(parity)) + ".csv";
      std::ofstream os(path);
      if (!os) throw ncho::Error(ncho::ErrorCode::IoError, "cannot write " + path);
      ncho::export_panel_csv(os, panel);
      std::cout << path << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
