#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "enthier/errors.hpp"

namespace enthier {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Shared numerical tolerances.  These are part of the library contract and
// are asserted against in the test suite; change them deliberately.
inline constexpr double kNormTol = 1e-8;      // |norm - 1| accepted as normalized
inline constexpr double kHermTol = 1e-10;     // entrywise Hermiticity deviation
inline constexpr double kPsdTol = 1e-10;      // eigenvalues >= -kPsdTol accepted
inline constexpr double kRankTol = 1e-10;     // spectrum entries below are rank-0
inline constexpr double kCutZeroTol = 1e-12;  // per-cut concurrences snap to 0

long total_dimension(const std::vector<int>& dims);
void check_dims(const std::vector<int>& dims, std::size_t min_parts = 2);

// A subset of subsystem indices.  Indices are 1-based everywhere in the
// public API and stored strictly increasing.
struct IndexSubset {
  std::vector<int> members;

  IndexSubset() = default;
  explicit IndexSubset(std::vector<int> m) : members(std::move(m)) {}

  int size() const { return static_cast<int>(members.size()); }
  bool contains(int i) const;

  // Throws InvalidSubset unless members is a strictly increasing, non-empty
  // proper subset of {1..n} (proper: strictly smaller than the full set).
  void validate(int n) const;

  // Complement within {1..n}.
  IndexSubset complement(int n) const;

  // Bitmask with bit (i-1) set for each member i.  Requires n <= 32.
  std::uint32_t mask(int n) const;
  static IndexSubset from_mask(std::uint32_t mask, int n);

  std::string to_string() const;  // e.g. "{1,3,4}"
};

// Normalized pure state on subsystems of the given dimensions.  Amplitudes
// are stored in lexicographic basis order with subsystem 1 the most
// significant digit: index g encodes digits (x1,...,xn) via
// g = x1*d2*...*dn + x2*d3*...*dn + ... + xn.
class PureState {
 public:
  PureState(std::vector<int> dims, Vector amplitudes);

  int n() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  long dim() const { return amps_.size(); }
  const Vector& amplitudes() const { return amps_; }

  // Basis state |x1 x2 ... xn> given per-subsystem digits (0-based).
  static PureState basis(const std::vector<int>& dims, const std::vector<int>& digits);
  // n-qubit (|0...0> + |1...1>)/sqrt(2), n >= 2.
  static PureState ghz(int n);
  // n-qubit equal superposition of single-excitation basis states, n >= 2.
  static PureState w(int n);

 private:
  std::vector<int> dims_;
  Vector amps_;
};

// Density matrix on subsystems of the given dimensions.  Construction checks
// only the shape; call validate() to enforce Hermiticity, unit trace and
// positive semidefiniteness (used when accepting external input).
class DensityMatrix {
 public:
  DensityMatrix(std::vector<int> dims, Matrix mat);

  int n() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  long dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }
  Matrix& matrix() { return mat_; }

  // Throws InvalidState (Hermiticity/trace) or NotPSD.
  void validate() const;

  static DensityMatrix projector(const PureState& psi);

 private:
  std::vector<int> dims_;
  Matrix mat_;
};

// Eigenvalue / squared-Schmidt-coefficient spectrum of a reduced state:
// real values sorted non-increasing, clamped into [0, 1].
struct Spectrum {
  std::vector<double> values;

  // Sorts non-increasing and clamps [-kPsdTol, 0) up to 0 and (1, 1+kPsdTol]
  // down to 1.  Values below -kPsdTol throw NotPSD.
  static Spectrum from_raw(std::vector<double> raw);

  double sum() const;
  // Number of entries >= kRankTol.
  int rank() const;
};

// Reduced density matrix of |psi><psi| on the kept subsystems, ordered as in
// `keep` (ascending).  `keep` must be a non-empty proper subset of {1..n}.
DensityMatrix reduced_density(const PureState& psi, const IndexSubset& keep);

// Squared Schmidt coefficients across the cut (cut | complement), padded with
// zeros to the cut-side dimension.  Computed from the singular values of the
// amplitude matrix reshaped to (dim cut) x (dim complement), which is more
// accurate for small eigenvalues than diagonalizing the reduced state.
Spectrum schmidt_spectrum(const PureState& psi, const IndexSubset& cut);

// Sum of lambda^e over the spectrum.  e must be >= 0 (InvalidParam).
// For e < 1 entries below kRankTol are treated as exact zeros and skipped so
// that numerical junk eigenvalues cannot inflate the result (0^e with e<1
// would otherwise be discontinuous at 0; 0^0 counts as 0 here).  For e >= 1
// all clamped entries contribute.
double trace_power(const Spectrum& spec, double e);

// Relabels subsystems: perm[t-1] = pi(t) is the new position of subsystem t,
// i.e. output digit at position pi(t) equals input digit at position t.
// Requires perm to be a bijection on {1..n} with dims[pi(t)-1] == dims[t-1].
PureState permute_subsystems(const PureState& psi, const std::vector<int>& perm);

// Applies one unitary per subsystem (us[i] acts on subsystem i+1 and must be
// d_i x d_i); pass an empty matrix to skip a subsystem.
PureState apply_local_unitaries(const PureState& psi, const std::vector<Matrix>& us);

// Default ceiling for pi_part work: n! * dim^2 for 8 qubits.
inline constexpr std::uint64_t kDefaultPiBudget = 40320ull * 65536ull;

// Permutation-invariant part (1/n!) * sum_pi P_pi rho P_pi^dagger over all
// subsystem permutations.  All subsystem dimensions must be equal
// (IncompatibleDims); throws BudgetExceeded when n! * dim^2 > budget.
DensityMatrix pi_part(const DensityMatrix& rho, std::uint64_t budget = kDefaultPiBudget);

}  // namespace enthier
