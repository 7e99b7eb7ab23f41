#include "enthier/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace enthier {

namespace {

// Practical ceiling on state vector length; above this the dense
// representation is no longer sensible on a workstation.
constexpr long kMaxTotalDim = 1L << 30;

std::vector<long> subsystem_strides(const std::vector<int>& dims) {
  std::vector<long> stride(dims.size());
  long w = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    stride[i] = w;
    w *= dims[i];
  }
  return stride;
}

}  // namespace

long total_dimension(const std::vector<int>& dims) {
  long d = 1;
  for (int di : dims) {
    if (d > kMaxTotalDim / di) {
      throw InvalidState("total dimension exceeds supported limit");
    }
    d *= di;
  }
  return d;
}

void check_dims(const std::vector<int>& dims, std::size_t min_parts) {
  if (dims.size() < min_parts) {
    throw InvalidState("need at least " + std::to_string(min_parts) + " subsystems, got " +
                       std::to_string(dims.size()));
  }
  for (int di : dims) {
    if (di < 2) {
      throw InvalidState("subsystem dimensions must be >= 2, got " + std::to_string(di));
    }
  }
}

// ---------------------------------------------------------------------------
// IndexSubset

bool IndexSubset::contains(int i) const {
  return std::binary_search(members.begin(), members.end(), i);
}

void IndexSubset::validate(int n) const {
  if (members.empty()) {
    throw InvalidSubset("subsystem subset must be non-empty");
  }
  if (static_cast<int>(members.size()) >= n) {
    throw InvalidSubset("subsystem subset must be a proper subset of {1.." +
                        std::to_string(n) + "}");
  }
  int prev = 0;
  for (int m : members) {
    if (m < 1 || m > n) {
      throw InvalidSubset("subsystem index " + std::to_string(m) + " outside {1.." +
                          std::to_string(n) + "}");
    }
    if (m <= prev) {
      throw InvalidSubset("subsystem indices must be strictly increasing");
    }
    prev = m;
  }
}

IndexSubset IndexSubset::complement(int n) const {
  IndexSubset out;
  for (int i = 1; i <= n; ++i) {
    if (!contains(i)) out.members.push_back(i);
  }
  return out;
}

std::uint32_t IndexSubset::mask(int n) const {
  if (n > 32) throw InvalidSubset("bitmask form limited to n <= 32");
  std::uint32_t m = 0;
  for (int i : members) {
    if (i < 1 || i > n) {
      throw InvalidSubset("subsystem index " + std::to_string(i) + " outside {1.." +
                          std::to_string(n) + "}");
    }
    m |= (1u << (i - 1));
  }
  return m;
}

IndexSubset IndexSubset::from_mask(std::uint32_t mask, int n) {
  IndexSubset out;
  for (int i = 1; i <= n; ++i) {
    if (mask & (1u << (i - 1))) out.members.push_back(i);
  }
  return out;
}

std::string IndexSubset::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) os << ',';
    os << members[i];
  }
  os << '}';
  return os.str();
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(std::vector<int> dims, Vector amplitudes)
    : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
  check_dims(dims_);
  long d = total_dimension(dims_);
  if (amps_.size() != d) {
    throw InvalidState("amplitude vector has length " + std::to_string(amps_.size()) +
                       ", expected " + std::to_string(d));
  }
  double norm = amps_.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw InvalidState("state vector is not normalized: ||psi|| = " + std::to_string(norm));
  }
}

PureState PureState::basis(const std::vector<int>& dims, const std::vector<int>& digits) {
  check_dims(dims);
  if (digits.size() != dims.size()) {
    throw InvalidState("digit list length does not match dimension list");
  }
  long d = total_dimension(dims);
  long g = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= dims[i]) {
      throw InvalidState("basis digit out of range for subsystem " + std::to_string(i + 1));
    }
    g = g * dims[i] + digits[i];
  }
  Vector a = Vector::Zero(d);
  a[g] = 1.0;
  return PureState(dims, std::move(a));
}

PureState PureState::ghz(int n) {
  if (n < 2) throw InvalidState("GHZ state needs n >= 2");
  std::vector<int> dims(n, 2);
  long d = 1L << n;
  Vector a = Vector::Zero(d);
  a[0] = a[d - 1] = 1.0 / std::sqrt(2.0);
  return PureState(dims, std::move(a));
}

PureState PureState::w(int n) {
  if (n < 2) throw InvalidState("W state needs n >= 2");
  std::vector<int> dims(n, 2);
  Vector a = Vector::Zero(1L << n);
  double c = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    a[1L << (n - 1 - i)] = c;  // subsystem i+1 excited
  }
  return PureState(dims, std::move(a));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(std::vector<int> dims, Matrix mat)
    : dims_(std::move(dims)), mat_(std::move(mat)) {
  // A marginal over a single subsystem is a valid density matrix, so only
  // one part is required here (unlike PureState, which the measures consume).
  check_dims(dims_, 1);
  long d = total_dimension(dims_);
  if (mat_.rows() != d || mat_.cols() != d) {
    throw InvalidState("density matrix is " + std::to_string(mat_.rows()) + "x" +
                       std::to_string(mat_.cols()) + ", expected " + std::to_string(d) +
                       "x" + std::to_string(d));
  }
}

void DensityMatrix::validate() const {
  double herm = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermTol) {
    throw InvalidState("matrix is not Hermitian: max |M - M^dag| = " + std::to_string(herm));
  }
  double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > kNormTol) {
    throw InvalidState("matrix trace is " + std::to_string(tr) + ", expected 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (mat_ + mat_.adjoint()),
                                           Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  if (lo < -kPsdTol) {
    throw NotPSD("matrix has eigenvalue " + std::to_string(lo));
  }
}

DensityMatrix DensityMatrix::projector(const PureState& psi) {
  Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(psi.dims(), std::move(m));
}

// ---------------------------------------------------------------------------
// Spectrum

Spectrum Spectrum::from_raw(std::vector<double> raw) {
  for (double& v : raw) {
    if (v < -kPsdTol) {
      throw NotPSD("spectrum entry " + std::to_string(v) + " below tolerance");
    }
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = std::min(v, 1.0);
  }
  std::sort(raw.begin(), raw.end(), std::greater<double>());
  return Spectrum{std::move(raw)};
}

double Spectrum::sum() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

int Spectrum::rank() const {
  int r = 0;
  for (double v : values) {
    if (v >= kRankTol) ++r;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Cut reshaping

namespace {

// Amplitudes of psi reshaped to a (dim cut) x (dim complement) matrix, rows
// indexed lexicographically by the cut subsystems (ascending), columns by the
// complement.
Matrix cut_matrix(const PureState& psi, const IndexSubset& cut) {
  const auto& dims = psi.dims();
  const int n = psi.n();
  cut.validate(n);
  const auto stride = subsystem_strides(dims);

  std::vector<int> row_subs, col_subs;
  for (int i = 1; i <= n; ++i) {
    (cut.contains(i) ? row_subs : col_subs).push_back(i);
  }
  long dk = 1, dc = 1;
  for (int s : row_subs) dk *= dims[s - 1];
  for (int s : col_subs) dc *= dims[s - 1];

  // Global-index offset of every column (complement digit combination).
  std::vector<long> col_offset(dc);
  for (long c = 0; c < dc; ++c) {
    long rem = c, g = 0;
    for (int j = static_cast<int>(col_subs.size()) - 1; j >= 0; --j) {
      int d = dims[col_subs[j] - 1];
      g += (rem % d) * stride[col_subs[j] - 1];
      rem /= d;
    }
    col_offset[c] = g;
  }

  const Vector& a = psi.amplitudes();
  Matrix A(dk, dc);
  for (long r = 0; r < dk; ++r) {
    long rem = r, g_row = 0;
    for (int j = static_cast<int>(row_subs.size()) - 1; j >= 0; --j) {
      int d = dims[row_subs[j] - 1];
      g_row += (rem % d) * stride[row_subs[j] - 1];
      rem /= d;
    }
    for (long c = 0; c < dc; ++c) {
      A(r, c) = a[g_row + col_offset[c]];
    }
  }
  return A;
}

}  // namespace

DensityMatrix reduced_density(const PureState& psi, const IndexSubset& keep) {
  Matrix A = cut_matrix(psi, keep);
  std::vector<int> sub_dims;
  for (int s : keep.members) sub_dims.push_back(psi.dims()[s - 1]);
  Matrix rho = A * A.adjoint();
  return DensityMatrix(std::move(sub_dims), std::move(rho));
}

Spectrum schmidt_spectrum(const PureState& psi, const IndexSubset& cut) {
  Matrix A = cut_matrix(psi, cut);
  Eigen::BDCSVD<Matrix> svd(A);
  const auto& sv = svd.singularValues();
  std::vector<double> lam(static_cast<std::size_t>(A.rows()), 0.0);
  for (long i = 0; i < sv.size(); ++i) {
    lam[i] = sv[i] * sv[i];
  }
  return Spectrum::from_raw(std::move(lam));
}

double trace_power(const Spectrum& spec, double e) {
  if (!(e >= 0.0)) {
    throw InvalidParam("trace-power exponent must be >= 0, got " + std::to_string(e));
  }
  double s = 0.0;
  for (double v : spec.values) {
    if (v < -kPsdTol) {
      throw NotPSD("spectrum entry " + std::to_string(v) + " below tolerance");
    }
    double lc = std::clamp(v, 0.0, 1.0);
    if (e < 1.0) {
      if (lc < kRankTol) continue;  // treat as exact zero; 0^e contributes 0
      s += (e == 0.0) ? 1.0 : std::pow(lc, e);
    } else if (e == 1.0) {
      s += lc;
    } else if (e == 2.0) {
      s += lc * lc;
    } else {
      s += std::pow(lc, e);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Subsystem rearrangement

PureState permute_subsystems(const PureState& psi, const std::vector<int>& perm) {
  const int n = psi.n();
  if (static_cast<int>(perm.size()) != n) {
    throw InvalidInput("permutation has length " + std::to_string(perm.size()) +
                       ", expected " + std::to_string(n));
  }
  std::vector<char> seen(n, 0);
  for (int p : perm) {
    if (p < 1 || p > n || seen[p - 1]) {
      throw InvalidInput("permutation is not a bijection on {1.." + std::to_string(n) + "}");
    }
    seen[p - 1] = 1;
  }
  const auto& dims = psi.dims();
  for (int t = 1; t <= n; ++t) {
    if (dims[perm[t - 1] - 1] != dims[t - 1]) {
      throw IncompatibleDims("cannot move subsystem " + std::to_string(t) +
                             " (dim " + std::to_string(dims[t - 1]) + ") to position " +
                             std::to_string(perm[t - 1]) + " (dim " +
                             std::to_string(dims[perm[t - 1] - 1]) + ")");
    }
  }
  const auto stride = subsystem_strides(dims);
  const long d = psi.dim();
  const Vector& in = psi.amplitudes();
  Vector out(d);
  std::vector<int> digit(n, 0);
  for (long g = 0; g < d; ++g) {
    long h = 0;
    for (int t = 0; t < n; ++t) {
      h += static_cast<long>(digit[t]) * stride[perm[t] - 1];
    }
    out[h] = in[g];
    for (int i = n - 1; i >= 0; --i) {
      if (++digit[i] < dims[i]) break;
      digit[i] = 0;
    }
  }
  return PureState(dims, std::move(out));
}

PureState apply_local_unitaries(const PureState& psi, const std::vector<Matrix>& us) {
  const int n = psi.n();
  if (static_cast<int>(us.size()) != n) {
    throw IncompatibleDims("expected " + std::to_string(n) + " local operators, got " +
                           std::to_string(us.size()));
  }
  const auto& dims = psi.dims();
  const auto stride = subsystem_strides(dims);
  Vector a = psi.amplitudes();
  const long D = a.size();
  for (int i = 0; i < n; ++i) {
    const Matrix& u = us[i];
    if (u.size() == 0) continue;  // identity shortcut
    const int d = dims[i];
    if (u.rows() != d || u.cols() != d) {
      throw IncompatibleDims("operator for subsystem " + std::to_string(i + 1) + " is " +
                             std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                             ", expected " + std::to_string(d) + "x" + std::to_string(d));
    }
    double dev = (u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > 1e-8) {
      throw InvalidInput("operator for subsystem " + std::to_string(i + 1) +
                         " is not unitary (deviation " + std::to_string(dev) + ")");
    }
    const long s = stride[i];
    const long block = s * d;
    Vector x(d), y(d);
    for (long base = 0; base < D; base += block) {
      for (long off = 0; off < s; ++off) {
        for (int j = 0; j < d; ++j) x[j] = a[base + off + j * s];
        y.noalias() = u * x;
        for (int j = 0; j < d; ++j) a[base + off + j * s] = y[j];
      }
    }
  }
  return PureState(dims, std::move(a));
}

// ---------------------------------------------------------------------------
// Permutation-invariant part

DensityMatrix pi_part(const DensityMatrix& rho, std::uint64_t budget) {
  const int n = rho.n();
  const auto& dims = rho.dims();
  for (int d : dims) {
    if (d != dims[0]) {
      throw IncompatibleDims("permutation-invariant part needs equal subsystem dimensions");
    }
  }
  const long dim = rho.dim();
  long double work = static_cast<long double>(dim) * static_cast<long double>(dim);
  std::uint64_t fact = 1;
  for (int i = 2; i <= n; ++i) {
    work *= i;
    if (i <= 20) fact *= static_cast<std::uint64_t>(i);
  }
  if (n > 20 || work > static_cast<long double>(budget)) {
    throw BudgetExceeded("permutation-invariant part needs n! * dim^2 = " +
                         std::to_string(static_cast<double>(work)) + " operations, budget is " +
                         std::to_string(budget));
  }

  const auto stride = subsystem_strides(dims);
  // Materialize all permutations up front so the accumulation can be split
  // into a fixed number of stripes; each stripe is summed serially and the
  // stripes are combined in order, which keeps the result bit-identical for
  // any thread count.
  std::vector<std::vector<int>> perms;
  perms.reserve(static_cast<std::size_t>(fact));
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  constexpr int kStripes = 16;
  const int nstripes = std::min<int>(kStripes, static_cast<int>(perms.size()));
  std::vector<Matrix> partial(nstripes, Matrix::Zero(dim, dim));

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int s = 0; s < nstripes; ++s) {
    std::vector<long> map(dim);
    std::vector<int> digit(n);
    for (std::size_t pi = s; pi < perms.size(); pi += nstripes) {
      const auto& pp = perms[pi];
      std::fill(digit.begin(), digit.end(), 0);
      for (long g = 0; g < dim; ++g) {
        long h = 0;
        for (int t = 0; t < n; ++t) h += static_cast<long>(digit[t]) * stride[pp[t] - 1];
        map[g] = h;
        for (int i = n - 1; i >= 0; --i) {
          if (++digit[i] < dims[i]) break;
          digit[i] = 0;
        }
      }
      const Matrix& in = rho.matrix();
      Matrix& acc = partial[s];
      for (long b = 0; b < dim; ++b) {
        for (long a = 0; a < dim; ++a) {
          acc(map[a], map[b]) += in(a, b);
        }
      }
    }
  }

  Matrix total = Matrix::Zero(dim, dim);
  for (int s = 0; s < nstripes; ++s) total += partial[s];
  total /= static_cast<double>(fact);
  return DensityMatrix(dims, std::move(total));
}

}  // namespace enthier
