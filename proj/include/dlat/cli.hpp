#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlat/embedding.hpp"

namespace dlat {

enum class Command { symbol_sweep, witness, doubling, operator_gap, potential_gap, check };

/// Parsed command line, validated before dispatch.
struct ExperimentConfig {
  Command command = Command::check;
  int d = 1;
  double m = 0.0;
  std::vector<ModelKind> models;
  std::vector<cplx> z_list;
  std::vector<double> h_list;
  int grid_n = 0;
  double box = 4.0;
  int refinement = 0;
  PairKind pair = PairKind::smooth_biorthogonal;
  std::string potential = "tanh";
  double amplitude = 0.5;
  double theta = 1.0;
  std::uint64_t seed = 1;
  std::string out;
  std::optional<std::pair<double, double>> expect_slope;
  bool gate_h1 = false;
  std::vector<int> criteria;
};

/// Exact dyadic mesh sizes: "1/16..1/256" (every power of two in between),
/// comma lists such as "1,1/2,1/8", or "2^-k" terms. Throws ArgumentError.
std::vector<double> parse_h_list(const std::string& text);

/// "i", "-2i", "1+i", "0.5", "1-0.5i" or "re,im".
cplx parse_complex(const std::string& text);

/// Exit codes: 0 success / criterion met, 1 experiment failed or gate not
/// met, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dlat
