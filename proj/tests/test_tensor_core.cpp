#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "enthier/random.hpp"
#include "enthier/state.hpp"
#include "oracles.hpp"

using namespace enthier;

namespace {

PureState random_state(const std::vector<int>& dims, std::uint64_t stream) {
  Rng rng = Rng::stream(777, stream);
  return haar_state(dims, rng);
}

}  // namespace

TEST_CASE("index subsets validate and convert") {
  IndexSubset s{{1, 3}};
  s.validate(4);
  CHECK(s.contains(3));
  CHECK(!s.contains(2));
  CHECK(s.mask(4) == 0b0101u);
  CHECK(IndexSubset::from_mask(0b0101u, 4).members == std::vector<int>{1, 3});
  CHECK(s.complement(4).members == std::vector<int>{2, 4});
  CHECK(s.to_string() == "{1,3}");

  CHECK_THROWS_AS(IndexSubset{}.validate(3), InvalidSubset);                   // empty
  CHECK_THROWS_AS((IndexSubset{{1, 2, 3}}.validate(3)), InvalidSubset);        // not proper
  CHECK_THROWS_AS((IndexSubset{{0, 1}}.validate(3)), InvalidSubset);           // out of range
  CHECK_THROWS_AS((IndexSubset{{2, 2}}.validate(3)), InvalidSubset);           // repeated
  CHECK_THROWS_AS((IndexSubset{{3, 1}}.validate(4)), InvalidSubset);           // not increasing
}

TEST_CASE("pure state construction enforces shape and norm") {
  Vector bad = Vector::Ones(4);  // norm 2
  CHECK_THROWS_AS(PureState({2, 2}, bad), InvalidState);
  CHECK_THROWS_AS(PureState({2}, Vector::Ones(2)), InvalidState);      // n < 2
  CHECK_THROWS_AS(PureState({2, 1}, Vector::Ones(2)), InvalidState);   // dim < 2
  CHECK_THROWS_AS(PureState({2, 2}, Vector::Ones(3)), InvalidState);   // wrong length

  PureState b = PureState::basis({2, 3, 2}, {1, 2, 0});
  // index = 1*6 + 2*2 + 0 = 10
  CHECK(b.amplitudes()[10] == Complex(1.0, 0.0));
  CHECK(b.dim() == 12);

  PureState g = PureState::ghz(3);
  CHECK(g.amplitudes()[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(g.amplitudes()[7].real() == doctest::Approx(1.0 / std::sqrt(2.0)));

  PureState w = PureState::w(3);
  // |100>, |010>, |001> = indices 4, 2, 1
  for (long idx : {4, 2, 1}) {
    CHECK(w.amplitudes()[idx].real() == doctest::Approx(1.0 / std::sqrt(3.0)));
  }
  CHECK(w.amplitudes()[0] == Complex(0.0, 0.0));
}

TEST_CASE("reduced density matches the dense partial-trace oracle") {
  for (const auto& dims : {std::vector<int>{2, 2, 2}, std::vector<int>{2, 3, 2}}) {
    PureState psi = random_state(dims, dims[1]);
    const int n = psi.n();
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
      IndexSubset keep = IndexSubset::from_mask(mask, n);
      DensityMatrix rho = reduced_density(psi, keep);
      Matrix ref = oracle::reduced_density(psi, keep.members);
      CHECK((rho.matrix() - ref).cwiseAbs().maxCoeff() < 1e-13);
      CHECK(std::abs(rho.matrix().trace().real() - 1.0) < 1e-12);
    }
  }
  PureState psi = random_state({2, 2}, 9);
  CHECK_THROWS_AS(reduced_density(psi, IndexSubset{{1, 2}}), InvalidSubset);
}

TEST_CASE("schmidt spectrum: known marginals and oracle agreement") {
  PureState g = PureState::ghz(4);
  Spectrum s = schmidt_spectrum(g, IndexSubset{{2, 3}});
  REQUIRE(s.values.size() == 4);  // padded to the cut dimension
  CHECK(s.values[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.values[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.values[2] < 1e-14);
  CHECK(s.rank() == 2);

  PureState w = PureState::w(5);
  Spectrum sw = schmidt_spectrum(w, IndexSubset{{1, 2}});
  // W marginal eigenvalues across a size-p cut: {p/n, (n-p)/n}
  CHECK(sw.values[0] == doctest::Approx(3.0 / 5.0).epsilon(1e-12));
  CHECK(sw.values[1] == doctest::Approx(2.0 / 5.0).epsilon(1e-12));

  PureState psi = random_state({2, 3, 2, 2}, 3);
  for (int mask : {1, 3, 5, 6, 9, 13}) {
    IndexSubset cut = IndexSubset::from_mask(mask, 4);
    Spectrum sp = schmidt_spectrum(psi, cut);
    auto ref = oracle::eig_spectrum(oracle::reduced_density(psi, cut.members));
    REQUIRE(sp.values.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(std::abs(sp.values[i] - ref[i]) < 1e-12);
    }
    // Complementary cuts share their nonzero spectrum.
    Spectrum spc = schmidt_spectrum(psi, cut.complement(4));
    for (int i = 0; i < std::min<int>(sp.rank(), spc.rank()); ++i) {
      CHECK(sp.values[i] == doctest::Approx(spc.values[i]).epsilon(1e-11));
    }
    CHECK(sp.rank() == spc.rank());
  }
}

TEST_CASE("trace power conventions") {
  Spectrum s{{2.0 / 3.0, 1.0 / 3.0}};
  CHECK(trace_power(s, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(trace_power(s, 2.0) == doctest::Approx(5.0 / 9.0).epsilon(1e-14));
  // (sqrt(2) + 1)/sqrt(3)
  CHECK(trace_power(s, 0.5) == doctest::Approx(1.3938468501173518).epsilon(1e-14));
  CHECK(trace_power(s, 0.0) == 2.0);  // counts nonzero entries

  // Junk eigenvalues below the rank cutoff must not explode small exponents.
  Spectrum junk{{1.0, 1e-32}};
  CHECK(trace_power(junk, 0.25) == 1.0);
  CHECK(trace_power(junk, 0.0) == 1.0);
  // ...but still contribute (harmlessly) for e >= 1.
  CHECK(trace_power(junk, 2.0) == doctest::Approx(1.0));

  CHECK_THROWS_AS(trace_power(s, -0.5), InvalidParam);
  CHECK_THROWS_AS(trace_power(Spectrum{{-1e-3}}, 2.0), NotPSD);
  CHECK(trace_power(Spectrum{{1.0, -1e-12}}, 2.0) == doctest::Approx(1.0));  // clamp band

  // Large spectrum: unit sum preserved within 1e-10 (no cutoff at e = 1).
  Rng rng = Rng::stream(5, 1);
  PureState big = haar_state({2, 2, 2, 2, 2, 2, 2, 2, 2, 2}, rng);
  Spectrum bs = schmidt_spectrum(big, IndexSubset{{1, 2, 3, 4, 5}});
  CHECK(std::abs(trace_power(bs, 1.0) - 1.0) < 1e-10);
}

TEST_CASE("spectrum from_raw sorts, clamps and rejects") {
  Spectrum s = Spectrum::from_raw({0.25, 1.0 + 1e-12, -1e-12, 0.5});
  CHECK(s.values[0] == 1.0);
  CHECK(s.values[1] == 0.5);
  CHECK(s.values[3] == 0.0);
  CHECK_THROWS_AS(Spectrum::from_raw({0.5, -1e-3}), NotPSD);
}

TEST_CASE("density matrix validation") {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 0.5;
  m(3, 3) = 0.5;
  DensityMatrix ok({2, 2}, m);
  ok.validate();

  Matrix nh = m;
  nh(0, 1) = Complex(0.0, 0.3);  // not Hermitian
  CHECK_THROWS_AS(DensityMatrix({2, 2}, nh).validate(), InvalidState);

  Matrix tr2 = 2.0 * m;
  CHECK_THROWS_AS(DensityMatrix({2, 2}, tr2).validate(), InvalidState);

  Matrix neg = m;
  neg(1, 1) = 0.5;
  neg(0, 0) = -0.5;
  neg(3, 3) = 1.0;
  CHECK_THROWS_AS(DensityMatrix({2, 2}, neg).validate(), NotPSD);

  CHECK_THROWS_AS(DensityMatrix({2, 2}, Matrix::Zero(3, 3)), InvalidState);
}

TEST_CASE("subsystem permutation relabels digits") {
  // |x1 x2 x3> with pi = (2,3,1): digit of subsystem t moves to position pi(t).
  PureState b = PureState::basis({2, 2, 2}, {1, 0, 1});
  PureState moved = permute_subsystems(b, {2, 3, 1});
  // new digits: position 2 <- x1 = 1, position 3 <- x2 = 0, position 1 <- x3 = 1
  // => |1 1 0> = index 6
  CHECK(moved.amplitudes()[6] == Complex(1.0, 0.0));

  PureState psi = random_state({2, 2, 2, 2}, 11);
  PureState rolled = permute_subsystems(psi, {2, 3, 4, 1});
  // Spectra follow the relabeling: cut {1} of psi equals cut {2} of rolled.
  Spectrum a = schmidt_spectrum(psi, IndexSubset{{1}});
  Spectrum b2 = schmidt_spectrum(rolled, IndexSubset{{2}});
  CHECK(a.values[0] == doctest::Approx(b2.values[0]).epsilon(1e-12));

  CHECK_THROWS_AS(permute_subsystems(psi, {1, 1, 2, 3}), InvalidInput);
  CHECK_THROWS_AS(permute_subsystems(psi, {1, 2, 3}), InvalidInput);
  PureState mixed_dims = random_state({2, 3}, 2);
  CHECK_THROWS_AS(permute_subsystems(mixed_dims, {2, 1}), IncompatibleDims);
  // Identity permutation on mixed dims is fine.
  permute_subsystems(mixed_dims, {1, 2});
}

TEST_CASE("local unitaries preserve spectra") {
  PureState psi = random_state({2, 3, 2}, 21);
  Rng rng = Rng::stream(99, 0);
  std::vector<Matrix> us = {haar_unitary(2, rng), haar_unitary(3, rng), haar_unitary(2, rng)};
  PureState rotated = apply_local_unitaries(psi, us);
  CHECK(std::abs(rotated.amplitudes().norm() - 1.0) < 1e-12);
  for (int mask = 1; mask < 7; ++mask) {
    IndexSubset cut = IndexSubset::from_mask(mask, 3);
    Spectrum a = schmidt_spectrum(psi, cut);
    Spectrum b = schmidt_spectrum(rotated, cut);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      CHECK(std::abs(a.values[i] - b.values[i]) < 1e-10);
    }
  }
  // Empty matrix = skip; wrong shape and non-unitary are rejected.
  std::vector<Matrix> skip = {Matrix{}, Matrix{}, Matrix{}};
  PureState same = apply_local_unitaries(psi, skip);
  CHECK((same.amplitudes() - psi.amplitudes()).norm() == 0.0);
  CHECK_THROWS_AS(apply_local_unitaries(psi, {Matrix::Identity(3, 3), Matrix{}, Matrix{}}),
                  IncompatibleDims);
  std::vector<Matrix> nonu = {2.0 * Matrix::Identity(2, 2), Matrix{}, Matrix{}};
  CHECK_THROWS_AS(apply_local_unitaries(psi, nonu), InvalidInput);
}

TEST_CASE("permutation-invariant part") {
  // |01><01| symmetrizes to an equal mixture of |01> and |10>.
  PureState b01 = PureState::basis({2, 2}, {0, 1});
  DensityMatrix rho = pi_part(DensityMatrix::projector(b01));
  CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rho.matrix()(2, 2).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(rho.matrix()(1, 2))  < 1e-15);

  // Direct serial oracle on a random 3-qubit state.
  PureState psi = random_state({2, 2, 2}, 31);
  DensityMatrix in = DensityMatrix::projector(psi);
  DensityMatrix out = pi_part(in);
  Matrix ref = Matrix::Zero(8, 8);
  const int perms[6][3] = {{1, 2, 3}, {1, 3, 2}, {2, 1, 3}, {2, 3, 1}, {3, 1, 2}, {3, 2, 1}};
  for (const auto& p : perms) {
    PureState moved = permute_subsystems(psi, {p[0], p[1], p[2]});
    ref += (moved.amplitudes() * moved.amplitudes().adjoint()) / 6.0;
  }
  CHECK((out.matrix() - ref).cwiseAbs().maxCoeff() < 1e-13);
  out.validate();

  // Symmetric states are fixed points.
  DensityMatrix gproj = DensityMatrix::projector(PureState::ghz(3));
  DensityMatrix gsym = pi_part(gproj);
  CHECK((gsym.matrix() - gproj.matrix()).cwiseAbs().maxCoeff() < 1e-14);
  // Idempotence.
  DensityMatrix twice = pi_part(out);
  CHECK((twice.matrix() - out.matrix()).cwiseAbs().maxCoeff() < 1e-13);

  CHECK_THROWS_AS(pi_part(in, 10), BudgetExceeded);
  PureState uneven = random_state({2, 3}, 5);
  CHECK_THROWS_AS(pi_part(DensityMatrix::projector(uneven)), IncompatibleDims);
}

TEST_CASE("random sampling building blocks") {
  Rng a = Rng::stream(42, 1);
  Rng b = Rng::stream(42, 1);
  CHECK(a.integer() == b.integer());  // streams are reproducible
  Rng c = Rng::stream(42, 2);
  CHECK(Rng::stream(42, 1).integer() != c.integer());

  Rng rng(7);
  Matrix u = haar_unitary(4, rng);
  CHECK((u.adjoint() * u - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  Matrix v = haar_isometry(6, 3, rng);
  CHECK((v.adjoint() * v - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(haar_isometry(2, 3, rng), InvalidInput);

  PureState h = haar_state({2, 2, 2}, rng);
  CHECK(std::abs(h.amplitudes().norm() - 1.0) < 1e-12);

  auto p = random_permutation(6, rng);
  std::vector<int> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{1, 2, 3, 4, 5, 6});
}
