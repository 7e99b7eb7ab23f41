#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "enthier/partitions.hpp"
#include "enthier/state.hpp"

namespace enthier {

// The five hierarchical measure families.  The *GM families take the
// geometric mean of a per-partition score over all k-block partitions; the
// *ME families take the minimum.
enum class Family { kGM, qkGM, alphakGM, kME, qkME };

std::string family_name(Family f);
// Parses "kgm", "qkgm", "alphakgm", "kme", "qkme" (case-insensitive).
Family parse_family(const std::string& s);

struct MeasureSpec {
  Family family = Family::kGM;
  int k = 2;
  // q for qkGM/qkME (q > 1), alpha for alphakGM (0 <= alpha < 1); unused and
  // must be empty for kGM/kME.
  std::optional<double> param{};

  // Throws InvalidK / InvalidParam.
  void validate(int n) const;

  bool uses_geometric_mean() const {
    return family == Family::kGM || family == Family::qkGM || family == Family::alphakGM;
  }
  bool is_alpha_family() const { return family == Family::alphakGM; }
  // Trace-power exponent: 2 for kGM/kME, q or alpha otherwise.
  double exponent() const;
  std::string describe() const;  // e.g. "qkGM(k=3, q=2.5)"
};

struct MeasureResult {
  double value = 0.0;
  // For min families: first partition (in enumeration order) attaining the
  // minimum.
  std::optional<KPartition> attaining;
  // Per-partition scores in enumeration order (filled on request).
  std::optional<std::vector<double>> per_partition_scores;
  // Advisory notes, e.g. flagging the extrapolated q regime.
  std::vector<std::string> notes;
};

// Entanglement across one cut of a pure state: 1 - Tr(rho_cut^q) for q > 1.
// Values within kCutZeroTol of zero snap to exactly 0 so that product cuts
// register as separable despite roundoff.
double cut_q_concurrence(const PureState& psi, const IndexSubset& cut, double q);
// Tr(rho_cut^alpha) - 1 for 0 <= alpha < 1, with the same zero snap.
double cut_alpha_concurrence(const PureState& psi, const IndexSubset& cut, double alpha);

// Score of one k-block partition under the given spec:
//   sqrt(2 * sum_t c_t / k) for kGM/kME/qkGM/alphakGM,
//   (sum_t c_t) / k        for qkME,
// where c_t is the per-cut concurrence of block t with the spec's exponent.
double partition_score(const PureState& psi, const KPartition& part, const MeasureSpec& spec);

// Reusable evaluation kernel for a fixed (dims, spec) pair.  Construction
// enumerates the k-block partitions and indexes the distinct cuts; run()
// computes every distinct cut spectrum once (cuts and partition scores are
// both data-parallel) and reduces serially in enumeration order, so results
// are identical for any thread count.
class Evaluator {
 public:
  Evaluator(std::vector<int> dims, const MeasureSpec& spec);

  // Full result; set with_scores to also return every partition score.
  MeasureResult run(const PureState& psi, bool with_scores = false) const;
  // Just the value (used in hot loops).
  double value(const PureState& psi) const;

  const std::vector<int>& dims() const { return dims_; }
  const MeasureSpec& spec() const { return spec_; }
  std::size_t partition_count() const { return partition_rgs_.size() / dims_.size(); }

 private:
  std::vector<double> cut_values(const PureState& psi) const;
  MeasureResult reduce(const std::vector<double>& scores, bool with_scores) const;
  KPartition partition_at(std::size_t idx) const;

  std::vector<int> dims_;
  MeasureSpec spec_;
  // Partition j occupies rgs[j*n .. j*n+n); per-block cut slots are stored
  // flat the same way.
  std::vector<std::int8_t> partition_rgs_;
  std::vector<std::int32_t> partition_cut_slots_;
  // Distinct cut masks, canonicalized to the side containing subsystem 1.
  std::vector<std::uint32_t> cut_masks_;
};

// One-shot evaluation (builds an Evaluator internally).
MeasureResult evaluate(const PureState& psi, const MeasureSpec& spec, bool with_scores = false);

// Naive single-threaded reference: fresh partition list, reduced density
// matrices diagonalized per block, direct product/min accumulation.  Slower
// and independent of the kernel above; kept for testing it.
MeasureResult evaluate_reference(const PureState& psi, const MeasureSpec& spec);

// ---------------------------------------------------------------------------
// Closed forms and relations

// The bipartite geometric-mean measures of GHZ and W states of n qubits for
// the Tr(rho^alpha)-based family, 0 <= alpha < 1.
// GHZ: sqrt(2 (2^(1-alpha) - 1)) across every cut.
double ghz_alpha2(int n, double alpha);
// W: exact product over cut sizes with binomial multiplicities, evaluated in
// the log domain; for even n the balanced cuts score exactly as GHZ does.
// Requires n >= 3.
double w_alpha2(int n, double alpha);
// w/ghz; exactly 1.0 at alpha == 0 (both measures degenerate to sqrt(2)).
double ghz_w_ratio(int n, double alpha);

// Dimension-only factor linking the bipartite geometric-mean measure to the
// geometric mean of per-cut concurrences normalized by the smaller side
// dimension D_i: returns (prod_cuts 2(D_i-1)/D_i)^(1/#cuts) over all
// bipartition cuts.  For any pure state,
//   value(kGM, k=2) = sqrt(gbc_factor) * geomean_i sqrt(D_i/(D_i-1) * C2_i).
// Equals exactly 1 when every subsystem is a qubit and n <= 3.
double gbc_factor(const std::vector<int>& dims);

}  // namespace enthier
