#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "nlwave/manufactured.hpp"

namespace testing {

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

/// Admissible random nonlocal weights: d1, d2 >= 0 with 1 + d1 d2 > d1 + d2.
inline std::pair<double, double> random_deltas(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 0.95);
  for (;;) {
    double d1 = u(rng), d2 = u(rng);
    if (1.0 + d1 * d2 > d1 + d2 + 1e-6) return {d1, d2};
  }
}

/// Manufactured single-odd-mode instance at a caller-chosen horizon
/// (moderate T: the contraction inequality need not hold, Picard still
/// converges and discretization errors are measurable).
inline nlwave::Manufactured single_odd_at(double T, double a_amp = 0.25) {
  nlwave::ManufacturedSpec spec;
  spec.beta = 3.0;
  spec.delta1 = 0.0;
  spec.delta2 = 0.0;
  spec.T = T;
  spec.a_star = nlwave::Expr::constant(a_amp) * nlwave::Expr::sin(nlwave::Expr::variable('t'));
  spec.modes.push_back({{nlwave::Parity::odd, 1},
                        nlwave::parse_expression("1+0.1*sin(t)")});
  return nlwave::build(spec);
}

/// Scratch directory for CLI tests, fresh per name.
inline std::string temp_dir(const std::string& name) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("nlwave_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testing
