// Writes a synthetic stand-in for the law-school bar passage table: 7 numeric
// features, a pass/fail label and a binary race column (1 = white). The
// nonwhite group is a minority whose score features are shifted down, so a
// classifier trained on it shows a demographic parity gap.
//
//   fsgm_make_standin [out.csv] [rows] [seed]

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "fsgm/random.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : "law_standin.csv";
  const std::size_t rows = argc > 2 ? std::stoul(argv[2]) : 4000;
  const std::uint64_t seed = argc > 3 ? std::stoull(argv[3]) : 20100;

  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot open " << path << '\n';
    return 1;
  }
  fsgm::RngStream rng(seed);
  out << "lsat,ugpa,zfygpa,zgpa,decile1b,decile3,fam_inc,pass_bar,race\n";
  char line[256];
  for (std::size_t i = 0; i < rows; ++i) {
    const int race = rng.uniform() < 0.8 ? 1 : 0;
    const double shift = race == 1 ? 0.35 : -0.9;
    const double ability = rng.standard_normal();
    const double lsat = 37.0 + 5.0 * (0.8 * ability + shift + 0.6 * rng.standard_normal());
    const double ugpa = 3.2 + 0.4 * (0.6 * ability + 0.5 * shift + 0.8 * rng.standard_normal());
    const double zfygpa = 0.7 * ability + 0.3 * shift + 0.7 * rng.standard_normal();
    const double zgpa = 0.6 * zfygpa + 0.8 * rng.standard_normal();
    const double d1 = std::clamp(std::round(5.5 + 2.5 * (0.7 * ability + 0.7 * rng.standard_normal())), 1.0, 10.0);
    const double d3 = std::clamp(std::round(5.5 + 2.5 * (0.7 * zgpa + 0.7 * rng.standard_normal())), 1.0, 10.0);
    const double fam = std::clamp(std::round(3.3 + 0.5 * shift + 0.9 * rng.standard_normal()), 1.0, 5.0);
    const double margin = 1.3 * ability + 0.6 * shift + 0.8 + 0.7 * rng.standard_normal();
    const int pass = margin > 0.0 ? 1 : 0;
    std::snprintf(line, sizeof line, "%.1f,%.2f,%.3f,%.3f,%.0f,%.0f,%.0f,%d,%d\n",
                  lsat, ugpa, zfygpa, zgpa, d1, d3, fam, pass, race);
    out << line;
  }
  return 0;
}
