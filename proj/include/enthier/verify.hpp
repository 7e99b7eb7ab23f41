#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace enthier {

struct VerifyOptions {
  int n = 4;                   // qubit count for sampled states
  int samples = 100;           // random states per property
  std::uint64_t seed = 12345;  // all sampling flows from this
};

// Property suites over randomly sampled states.  Each suite prints one
// PASS/FAIL line per property including its worst-case slack, and is fully
// deterministic for a given seed.
//
//   hierarchy       geometric-mean value dominates the minimum value (all k)
//   scaled-min      q-family: value(qkGM) >= sqrt(2) * value(qkME)
//   local-unitary   invariance under one random local unitary per subsystem
//   permutation     invariance under a random subsystem relabeling
//   separable-zero  k-separable product states score 0 in every family
//   pi-sandwich     roof bound of the permutation-invariant part stays below
//                   the pure value on locally rotated copies (reduced sample
//                   count; the roof search dominates the cost)
//   degenerate-k    k = n: the geometric mean and the minimum coincide
//   all             every suite above
//
// Returns true when every checked property holds.
bool run_verify_suite(const std::string& suite, const VerifyOptions& opts, std::ostream& os);

// The individual suite names accepted by run_verify_suite (excluding "all").
std::vector<std::string> verify_suite_names();

}  // namespace enthier
