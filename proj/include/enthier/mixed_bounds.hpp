#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "enthier/measures.hpp"
#include "enthier/state.hpp"

namespace enthier {

// A pure-state decomposition {p_i, |psi_i>} of a density matrix.
struct DecompositionEnsemble {
  struct Entry {
    double p;
    PureState state;
  };
  std::vector<Entry> entries;

  double probability_sum() const;
  Matrix reconstruct() const;  // sum_i p_i |psi_i><psi_i|
  // max entrywise |reconstruct() - rho|.
  double reconstruction_error(const DensityMatrix& rho) const;
  // Ensemble average of the measure value.
  double average_value(const Evaluator& ev) const;
};

// Knobs for the convex-roof upper-bound search.  All randomness flows from
// `seed`; every restart owns a private (seed, stream) generator, so results
// are identical for any thread count.
struct SearchConfig {
  std::uint64_t seed = 12345;
  // Ensemble sizes to try; empty means {rank, rank+1, rank+2}.
  std::vector<int> ensemble_sizes{};
  int restarts = 32;        // random isometry starts per ensemble size
  int refine_iters = 200;   // pairwise-rotation refinement steps per start
  double tolerance = 1e-7;  // slack allowed when certifying inequalities
};

struct RoofResult {
  double value = 0.0;            // best (smallest) ensemble average found
  DecompositionEnsemble best;    // the ensemble achieving it
};

// Upper bound on the convex-roof extension of the measure at rho: searches
// pure-state decompositions rho = sum p_i |psi_i><psi_i| for the smallest
// average value.  Decompositions are parameterized by isometries applied to
// the weighted eigenvector matrix, refined by pairwise column rotations.
// Caller-provided seed ensembles are evaluated first (and refined), so the
// result never exceeds the best seed's average.  A pure (rank-1) rho short
// circuits to the exact pure-state value.
RoofResult convex_roof_upper_bound(const DensityMatrix& rho, const MeasureSpec& spec,
                                   const SearchConfig& cfg = {},
                                   const std::vector<DecompositionEnsemble>& seeds = {});

// Certified pure-state pair: the geometric-mean value never lies below the
// corresponding minimum value, so (value_gm, value_me) brackets hold exactly.
struct PureBoundPair {
  double value_gm;
  double value_me;
};
// For the min family matching gm_spec (kGM -> kME with the same k).
PureBoundPair gm_me_pair(const PureState& psi, const MeasureSpec& gm_spec);

// For mixed states only upper bounds are available from the roof search; the
// pair (ub_gm, ub_me) is reported without a certified ordering between the
// true mixed values.
struct MixedBoundPair {
  double ub_gm;
  double ub_me;
};
MixedBoundPair gm_me_pair(const DensityMatrix& rho, const MeasureSpec& gm_spec,
                          const SearchConfig& cfg = {});

// Checks, on locally rotated copies of a pure state, that the roof upper
// bound of the permutation-invariant part stays below the pure-state value:
// sample s applies one Haar unitary per subsystem (sample 0 is the identity),
// forms the permutation-invariant part of the rotated projector, and seeds
// the roof search with the symmetrized ensemble {1/n!, permuted copies},
// which certifies ub <= pure value up to cfg.tolerance.
struct PiSandwichReport {
  struct Sample {
    bool identity;
    double pure_value;   // measure of the rotated pure state
    double upper_bound;  // roof bound of its permutation-invariant part
  };
  std::vector<Sample> samples;
  double value_psi = 0.0;  // measure of the input state itself
  bool all_certified(double tol) const;
  double max_upper_bound() const;
};
PiSandwichReport pi_lower_bound_check(const PureState& psi, const MeasureSpec& spec,
                                      const SearchConfig& cfg, int unitary_samples);

// For pure states the geometric-mean q family dominates the scaled minimum:
//   value(qkGM) >= sqrt(2) * value(qkME).
// Returns both sides (value_gm, bound = sqrt(2) * qkME value).
struct QkmePair {
  double value_gm;
  double bound;
};
QkmePair sqrt2_qkme_bound(const PureState& psi, int k, double q);

}  // namespace enthier
