// Micro-benchmarks comparing the parallel evaluator against the serial
// reference implementation, plus the other hot paths (permutation-invariant
// projection, convex-roof search).  Prints one line per case with the mean
// wall time over the repeat count.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "enthier/measures.hpp"
#include "enthier/mixed_bounds.hpp"
#include "enthier/random.hpp"
#include "enthier/state.hpp"

using namespace enthier;

namespace {

double time_of(const std::function<void()>& fn, int repeats) {
  // One warm-up run, then the timed repeats.
  fn();
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

void report(const std::string& name, double ms) {
  std::printf("%-52s %10.3f ms\n", name.c_str(), ms);
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

int main() {
  std::printf("worker threads available: %d\n\n", thread_count());
  Rng rng = Rng::stream(42, 0);

  // Parallel evaluator vs serial reference, 8 qubits.
  {
    PureState psi = haar_state(std::vector<int>(8, 2), rng);
    for (int k : {2, 3, 4}) {
      MeasureSpec spec{Family::kGM, k, {}};
      double fast = time_of([&] { evaluate(psi, spec); }, 3);
      double ref = time_of([&] { evaluate_reference(psi, spec); }, 3);
      report("evaluate        n=8 k=" + std::to_string(k), fast);
      report("reference impl  n=8 k=" + std::to_string(k), ref);
      std::printf("%-52s %10.2fx\n\n", "speedup", ref / fast);
    }
  }

  // Kernel scaling on larger systems (partition count grows fast).
  for (int n : {10, 12}) {
    PureState psi = haar_state(std::vector<int>(n, 2), rng);
    MeasureSpec spec{Family::kGM, 3, {}};
    double ms = time_of([&] { evaluate(psi, spec); }, n == 12 ? 1 : 3);
    report("evaluate        n=" + std::to_string(n) + " k=3", ms);
  }
  std::printf("\n");

  // Permutation-invariant projection.
  for (int n : {4, 5, 6}) {
    PureState psi = haar_state(std::vector<int>(n, 2), rng);
    DensityMatrix rho = DensityMatrix::projector(psi);
    double ms = time_of([&] { pi_part(rho); }, 3);
    report("pi projection   n=" + std::to_string(n), ms);
  }
  std::printf("\n");

  // Convex-roof search on a rank-2 three-qubit mixture.
  {
    PureState a = haar_state({2, 2, 2}, rng);
    PureState b = haar_state({2, 2, 2}, rng);
    Matrix m = 0.5 * (a.amplitudes() * a.amplitudes().adjoint()) +
               0.5 * (b.amplitudes() * b.amplitudes().adjoint());
    DensityMatrix rho({2, 2, 2}, m);
    MeasureSpec spec{Family::kGM, 2, {}};
    for (int restarts : {4, 16, 32}) {
      SearchConfig cfg;
      cfg.restarts = restarts;
      cfg.refine_iters = 100;
      double ms = time_of([&] { convex_roof_upper_bound(rho, spec, cfg); }, 1);
      report("roof search     restarts=" + std::to_string(restarts), ms);
    }
  }
  return 0;
}
