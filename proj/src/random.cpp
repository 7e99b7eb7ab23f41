#include "enthier/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace enthier {

std::uint64_t Rng::scramble(std::uint64_t x) {
  // splitmix64 finalizer
  std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t stream_id) {
  return Rng(scramble(seed) + stream_id);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Modulo is biased for huge bounds; fine for the test/sampling roles here.
  return gen_() % bound;
}

Vector ginibre_vector(long d, Rng& rng) {
  Vector v(d);
  const double inv = 1.0 / std::sqrt(2.0);
  for (long i = 0; i < d; ++i) {
    double re = rng.normal();
    double im = rng.normal();
    v[i] = Complex(re * inv, im * inv);
  }
  return v;
}

Matrix ginibre_matrix(long rows, long cols, Rng& rng) {
  Matrix m(rows, cols);
  const double inv = 1.0 / std::sqrt(2.0);
  // Row-major fill so the sample stream reads naturally.
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      double re = rng.normal();
      double im = rng.normal();
      m(r, c) = Complex(re * inv, im * inv);
    }
  }
  return m;
}

PureState haar_state(const std::vector<int>& dims, Rng& rng) {
  check_dims(dims);
  Vector v = ginibre_vector(total_dimension(dims), rng);
  v /= v.norm();
  return PureState(dims, std::move(v));
}

namespace {

// Fixes the QR gauge freedom by absorbing the phases of R's diagonal; this
// turns "Q from QR of Ginibre" into a Haar sample.
Matrix phase_fixed_q(const Matrix& a, long rows, long cols) {
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  auto rdiag = qr.matrixQR().diagonal();
  for (long j = 0; j < cols; ++j) {
    Complex r = rdiag[j];
    double m = std::abs(r);
    Complex phase = (m > 0.0) ? r / m : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

}  // namespace

Matrix haar_unitary(long d, Rng& rng) {
  return phase_fixed_q(ginibre_matrix(d, d, rng), d, d);
}

Matrix haar_isometry(long rows, long cols, Rng& rng) {
  if (rows < cols) {
    throw InvalidInput("isometry needs rows >= cols, got " + std::to_string(rows) + " x " +
                       std::to_string(cols));
  }
  return phase_fixed_q(ginibre_matrix(rows, cols, rng), rows, cols);
}

std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  std::shuffle(p.begin(), p.end(), rng.engine());
  return p;
}

KPartition random_k_partition(int n, int k, Rng& rng) {
  if (k < 2 || k > n) {
    throw InvalidK("block count must satisfy 2 <= k <= n, got k = " + std::to_string(k) +
                   " with n = " + std::to_string(n));
  }
  std::vector<int> elems(n);
  std::iota(elems.begin(), elems.end(), 1);
  std::shuffle(elems.begin(), elems.end(), rng.engine());
  std::vector<std::vector<int>> blocks(k);
  for (int i = 0; i < k; ++i) blocks[i].push_back(elems[i]);
  for (int i = k; i < n; ++i) {
    blocks[rng.below(static_cast<std::uint64_t>(k))].push_back(elems[i]);
  }
  return KPartition::canonical(std::move(blocks));
}

PureState random_separable_state(const std::vector<int>& dims, const KPartition& part,
                                 Rng& rng) {
  check_dims(dims);
  const int n = static_cast<int>(dims.size());
  part.validate(n);

  std::vector<Vector> factors;
  factors.reserve(part.blocks.size());
  for (const auto& block : part.blocks) {
    long db = 1;
    for (int m : block) db *= dims[m - 1];
    Vector v = ginibre_vector(db, rng);
    v /= v.norm();
    factors.push_back(std::move(v));
  }

  const long D = total_dimension(dims);
  Vector a(D);
  std::vector<int> digit(n, 0);
  for (long g = 0; g < D; ++g) {
    Complex prod(1.0, 0.0);
    for (std::size_t b = 0; b < part.blocks.size(); ++b) {
      long idx = 0;
      for (int m : part.blocks[b]) idx = idx * dims[m - 1] + digit[m - 1];
      prod *= factors[b][idx];
    }
    a[g] = prod;
    for (int i = n - 1; i >= 0; --i) {
      if (++digit[i] < dims[i]) break;
      digit[i] = 0;
    }
  }
  return PureState(dims, std::move(a));
}

}  // namespace enthier
