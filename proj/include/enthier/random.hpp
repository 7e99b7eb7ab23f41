#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "enthier/partitions.hpp"
#include "enthier/state.hpp"

namespace enthier {

// Seeded random source.  Independent sub-streams are derived from a
// (seed, stream) pair through a splitmix64 scramble, so parallel workers can
// each own a generator whose output depends only on the pair, never on
// scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(scramble(seed)) {}
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

  double uniform() { return dist_u_(gen_); }          // [0, 1)
  double normal() { return dist_n_(gen_); }           // standard normal
  std::uint64_t integer() { return gen_(); }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  std::mt19937_64& engine() { return gen_; }

 private:
  static std::uint64_t scramble(std::uint64_t x);

  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> dist_u_{0.0, 1.0};
  std::normal_distribution<double> dist_n_{0.0, 1.0};
};

// Vector of iid standard complex Gaussian entries.
Vector ginibre_vector(long d, Rng& rng);
// d x cols matrix of iid standard complex Gaussian entries.
Matrix ginibre_matrix(long rows, long cols, Rng& rng);

// Haar-random pure state on the given subsystem dimensions.
PureState haar_state(const std::vector<int>& dims, Rng& rng);

// Haar-random d x d unitary: QR of a Ginibre matrix with the R diagonal
// phases divided out.
Matrix haar_unitary(long d, Rng& rng);

// rows x cols isometry (V^dag V = I) drawn from the Haar-induced measure,
// rows >= cols required.
Matrix haar_isometry(long rows, long cols, Rng& rng);

// Uniformly random permutation of {1..n} in image form.
std::vector<int> random_permutation(int n, Rng& rng);

// Random partition of {1..n} into exactly k non-empty blocks (each block is
// seeded with one of k marked elements, the rest fall uniformly; not uniform
// over all partitions, which is irrelevant for its testing role).
KPartition random_k_partition(int n, int k, Rng& rng);

// Product state across the blocks of the given partition with a Haar-random
// factor on each block; such a state has zero k-entanglement for k' <= k.
PureState random_separable_state(const std::vector<int>& dims, const KPartition& part,
                                 Rng& rng);

}  // namespace enthier
