#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "enthier/measures.hpp"
#include "enthier/state.hpp"

namespace enthier {

// ---------------------------------------------------------------------------
// State files (JSON, schema version 1)
//
// {
//   "version": 1,
//   "kind": "pure" | "mixed",
//   "dims": [2, 2, ...],
//   "label": "optional text",
//   "amplitudes": [[re, im], ...]            (pure; length = prod dims)
//   "matrix": [[[re, im], ...], ...]          (mixed; dim x dim)
// }

struct StateFile {
  std::variant<PureState, DensityMatrix> state;
  std::string label;

  bool is_pure() const { return std::holds_alternative<PureState>(state); }
  const PureState& pure() const { return std::get<PureState>(state); }
  const DensityMatrix& mixed() const { return std::get<DensityMatrix>(state); }
};

struct LoadOptions {
  // Norm/trace repair policy: deviations up to kNormTol are accepted as-is;
  // with normalize=true deviations up to repair_tol are rescaled (with a
  // warning on *warn); anything larger is rejected.
  bool normalize = true;
  double repair_tol = 1e-6;
  std::ostream* warn = nullptr;
};

StateFile load_state_file(const std::string& path, const LoadOptions& opts = {});
StateFile parse_state_json(const std::string& text, const LoadOptions& opts = {});
void save_state_file(const std::string& path, const StateFile& sf);
std::string state_to_json(const StateFile& sf);

// ---------------------------------------------------------------------------
// Theta sweeps
//
// A sweep template maps theta to a pure state.  Built-in templates:
//   fig1: 4 qubits, sin(theta) * (1/3|0001> + sqrt(2)/3|0100> + sqrt(6)/3|1000>)
//         + cos(theta)|0011>
//   fig2: 4 qubits, sin(theta)/sqrt(3) * (|0001> + |0100> + |1000>)
//         + cos(theta)|0011>
// Custom templates come from a JSON file:
//   { "version": 1, "kind": "pure-theta", "dims": [...],
//     "amplitudes_sin": [[re,im],...], "amplitudes_cos": [[re,im],...] }
// with both branch vectors normalized and Re<sin|cos> = 0, so that
// sin(theta)*a + cos(theta)*b is normalized for every theta.

struct ThetaTemplate {
  std::vector<int> dims;
  Vector branch_sin;
  Vector branch_cos;

  PureState at(double theta) const;

  static ThetaTemplate fig1();
  static ThetaTemplate fig2();
  static ThetaTemplate from_file(const std::string& path);
  // Validates branch norms and orthogonality (InvalidInput beyond kNormTol).
  void validate() const;
};

struct SweepConfig {
  Family family = Family::kGM;  // kGM or qkGM; paired with kME / qkME
  int k = 3;
  std::optional<double> q{};
  double theta_start = 0.0;
  double theta_end = 3.14159265358979323846;
  int steps = 2001;  // >= 2 grid points, endpoints included
};

struct SweepResult {
  std::vector<double> thetas;
  std::vector<double> value_gm;
  std::vector<double> value_me;
};

// Evaluates the GM family and its matching min family over the theta grid
// (grid points are independent and computed in parallel, written by index).
SweepResult run_sweep(const ThetaTemplate& tmpl, const SweepConfig& cfg);

// Indices i (interior points) whose absolute second central difference
// exceeds factor times the median absolute second difference; flags the
// non-smooth points of a curve on a uniform grid.
std::vector<int> detect_kinks(const std::vector<double>& y, double factor = 10.0);

// ---------------------------------------------------------------------------
// CSV output (LF line endings, '.' decimal separator, 12 significant digits)

void write_sweep_csv(std::ostream& os, const SweepResult& r);

struct RatioRow {
  int n;
  double w_value;
  double ghz_value;
  double ratio;
};
std::vector<RatioRow> ratio_table(double alpha, int n_min, int n_max);
void write_ratio_csv(std::ostream& os, const std::vector<RatioRow>& rows);

// Formats a double with 12 significant digits (the report precision).
std::string format_sig(double v);

}  // namespace enthier
