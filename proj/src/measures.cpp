#include "enthier/measures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Dense>

namespace enthier {

namespace {

// Product/geometric-mean short circuit: a partition score at or below this is
// treated as an exact zero of the product.
constexpr double kProductZero = 1e-300;

std::uint64_t binom_u64(int n, int p) {
  if (p < 0 || p > n) return 0;
  p = std::min(p, n - p);
  unsigned __int128 c = 1;
  for (int i = 1; i <= p; ++i) {
    c = c * static_cast<unsigned>(n - p + i) / static_cast<unsigned>(i);
  }
  return static_cast<std::uint64_t>(c);
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::kGM: return "kGM";
    case Family::qkGM: return "qkGM";
    case Family::alphakGM: return "alphakGM";
    case Family::kME: return "kME";
    case Family::qkME: return "qkME";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  std::string t;
  for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "kgm") return Family::kGM;
  if (t == "qkgm") return Family::qkGM;
  if (t == "alphakgm") return Family::alphakGM;
  if (t == "kme") return Family::kME;
  if (t == "qkme") return Family::qkME;
  throw InvalidInput("unknown measure family '" + s +
                     "' (expected kgm, qkgm, alphakgm, kme or qkme)");
}

void MeasureSpec::validate(int n) const {
  if (k < 2 || k > n) {
    throw InvalidK("block count must satisfy 2 <= k <= n, got k = " + std::to_string(k) +
                   " with n = " + std::to_string(n));
  }
  switch (family) {
    case Family::kGM:
    case Family::kME:
      if (param) {
        throw InvalidParam(family_name(family) + " takes no q/alpha parameter");
      }
      break;
    case Family::qkGM:
    case Family::qkME:
      if (!param || !std::isfinite(*param) || !(*param > 1.0)) {
        throw InvalidParam(family_name(family) + " requires q > 1");
      }
      break;
    case Family::alphakGM:
      if (!param || !std::isfinite(*param) || *param < 0.0 || *param >= 1.0) {
        throw InvalidParam("alphakGM requires 0 <= alpha < 1");
      }
      break;
  }
}

double MeasureSpec::exponent() const {
  if (family == Family::kGM || family == Family::kME) return 2.0;
  return *param;
}

std::string MeasureSpec::describe() const {
  char buf[64];
  if (param) {
    std::snprintf(buf, sizeof(buf), "%s(k=%d, %s=%g)", family_name(family).c_str(), k,
                  is_alpha_family() ? "alpha" : "q", *param);
  } else {
    std::snprintf(buf, sizeof(buf), "%s(k=%d)", family_name(family).c_str(), k);
  }
  return buf;
}

// ---------------------------------------------------------------------------
// Per-cut concurrences

double cut_q_concurrence(const PureState& psi, const IndexSubset& cut, double q) {
  if (!std::isfinite(q) || !(q > 1.0)) {
    throw InvalidParam("q-concurrence requires q > 1, got " + std::to_string(q));
  }
  double v = 1.0 - trace_power(schmidt_spectrum(psi, cut), q);
  return (v < kCutZeroTol) ? 0.0 : v;
}

double cut_alpha_concurrence(const PureState& psi, const IndexSubset& cut, double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha >= 1.0) {
    throw InvalidParam("alpha-concurrence requires 0 <= alpha < 1, got " +
                       std::to_string(alpha));
  }
  double v = trace_power(schmidt_spectrum(psi, cut), alpha) - 1.0;
  return (v < kCutZeroTol) ? 0.0 : v;
}

double partition_score(const PureState& psi, const KPartition& part, const MeasureSpec& spec) {
  spec.validate(psi.n());
  part.validate(psi.n());
  if (part.k() != spec.k) {
    throw InvalidPartition("partition has " + std::to_string(part.k()) +
                           " blocks, spec expects " + std::to_string(spec.k));
  }
  double sum = 0.0;
  for (const auto& block : part.blocks) {
    IndexSubset sub{block};
    sum += spec.is_alpha_family() ? cut_alpha_concurrence(psi, sub, spec.exponent())
                                  : cut_q_concurrence(psi, sub, spec.exponent());
  }
  return (spec.family == Family::qkME) ? sum / spec.k : std::sqrt(2.0 * sum / spec.k);
}

// ---------------------------------------------------------------------------
// Evaluator

Evaluator::Evaluator(std::vector<int> dims, const MeasureSpec& spec)
    : dims_(std::move(dims)), spec_(spec) {
  check_dims(dims_);
  total_dimension(dims_);
  const int n = static_cast<int>(dims_.size());
  spec_.validate(n);

  const std::uint32_t full = (n == 32) ? 0xffffffffu : ((1u << n) - 1u);
  std::unordered_map<std::uint32_t, std::int32_t> slot_of;
  std::vector<std::uint32_t> masks;
  for (PartitionEnumerator en(n, spec_.k); en.valid(); en.next()) {
    const auto& a = en.rgs();
    for (int i = 0; i < n; ++i) partition_rgs_.push_back(static_cast<std::int8_t>(a[i]));
    en.block_masks(masks);
    for (std::uint32_t m : masks) {
      // Complementary cuts share their nonzero spectrum, hence their cut
      // value; cache by the side containing subsystem 1.
      std::uint32_t cm = (m & 1u) ? m : (full ^ m);
      auto it = slot_of.find(cm);
      std::int32_t slot;
      if (it == slot_of.end()) {
        slot = static_cast<std::int32_t>(cut_masks_.size());
        slot_of.emplace(cm, slot);
        cut_masks_.push_back(cm);
      } else {
        slot = it->second;
      }
      partition_cut_slots_.push_back(slot);
    }
  }
}

std::vector<double> Evaluator::cut_values(const PureState& psi) const {
  const int n = static_cast<int>(dims_.size());
  const double e = spec_.exponent();
  const bool alpha = spec_.is_alpha_family();
  std::vector<double> vals(cut_masks_.size());
  const long count = static_cast<long>(cut_masks_.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
  for (long i = 0; i < count; ++i) {
    std::uint32_t cm = cut_masks_[static_cast<std::size_t>(i)];
    IndexSubset sub = IndexSubset::from_mask(cm, n);
    double tp = trace_power(schmidt_spectrum(psi, sub), e);
    double v = alpha ? (tp - 1.0) : (1.0 - tp);
    vals[static_cast<std::size_t>(i)] = (v < kCutZeroTol) ? 0.0 : v;
  }
  return vals;
}

MeasureResult Evaluator::run(const PureState& psi, bool with_scores) const {
  if (psi.dims() != dims_) {
    throw IncompatibleDims("state dimensions do not match this evaluator");
  }
  const std::vector<double> cvals = cut_values(psi);

  const int k = spec_.k;
  const long P = static_cast<long>(partition_count());
  std::vector<double> scores(static_cast<std::size_t>(P));
  const bool mean_me = (spec_.family == Family::qkME);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long j = 0; j < P; ++j) {
    double sum = 0.0;
    const std::int32_t* slots = partition_cut_slots_.data() + static_cast<std::size_t>(j) * k;
    for (int b = 0; b < k; ++b) sum += cvals[static_cast<std::size_t>(slots[b])];
    scores[static_cast<std::size_t>(j)] =
        mean_me ? sum / k : std::sqrt(2.0 * sum / k);
  }
  return reduce(scores, with_scores);
}

MeasureResult Evaluator::reduce(const std::vector<double>& scores, bool with_scores) const {
  MeasureResult res;
  const std::size_t P = scores.size();
  if (spec_.uses_geometric_mean()) {
    if (P == 1) {
      res.value = scores[0];  // single-partition case: mean equals the score
    } else {
      double acc = 0.0;
      bool zero = false;
      for (double s : scores) {
        if (s <= kProductZero) {
          zero = true;
          break;
        }
        acc += std::log(s);
      }
      res.value = zero ? 0.0 : std::exp(acc / static_cast<double>(P));
    }
  } else {
    std::size_t best = 0;
    for (std::size_t j = 1; j < P; ++j) {
      if (scores[j] < scores[best]) best = j;
    }
    res.value = scores[best];
    res.attaining = partition_at(best);
  }
  if ((spec_.family == Family::qkGM || spec_.family == Family::qkME) && *spec_.param < 2.0) {
    res.notes.push_back("q in (1,2): extrapolated regime");
  }
  if (with_scores) res.per_partition_scores = scores;
  return res;
}

KPartition Evaluator::partition_at(std::size_t idx) const {
  const int n = static_cast<int>(dims_.size());
  std::vector<std::vector<int>> blocks(spec_.k);
  const std::int8_t* a = partition_rgs_.data() + idx * static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i) blocks[a[i]].push_back(i + 1);
  return KPartition{std::move(blocks)};
}

double Evaluator::value(const PureState& psi) const { return run(psi).value; }

MeasureResult evaluate(const PureState& psi, const MeasureSpec& spec, bool with_scores) {
  Evaluator ev(psi.dims(), spec);
  return ev.run(psi, with_scores);
}

MeasureResult evaluate_reference(const PureState& psi, const MeasureSpec& spec) {
  const int n = psi.n();
  spec.validate(n);
  const auto parts = enumerate_k_partitions(n, spec.k);
  const double e = spec.exponent();
  const bool alpha = spec.is_alpha_family();
  const bool mean_me = (spec.family == Family::qkME);

  std::vector<double> scores;
  scores.reserve(parts.size());
  for (const auto& part : parts) {
    double sum = 0.0;
    for (const auto& block : part.blocks) {
      DensityMatrix rho = reduced_density(psi, IndexSubset{block});
      Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
      std::vector<double> raw(es.eigenvalues().data(),
                              es.eigenvalues().data() + es.eigenvalues().size());
      double tp = trace_power(Spectrum::from_raw(std::move(raw)), e);
      double v = alpha ? (tp - 1.0) : (1.0 - tp);
      sum += (v < kCutZeroTol) ? 0.0 : v;
    }
    scores.push_back(mean_me ? sum / spec.k : std::sqrt(2.0 * sum / spec.k));
  }

  MeasureResult res;
  if (spec.uses_geometric_mean()) {
    if (scores.size() == 1) {
      res.value = scores[0];
    } else {
      long double prod = 1.0L;
      for (double s : scores) prod *= static_cast<long double>(s);
      res.value = (prod <= static_cast<long double>(kProductZero))
                      ? 0.0
                      : static_cast<double>(
                            std::pow(prod, 1.0L / static_cast<long double>(scores.size())));
    }
  } else {
    std::size_t best = 0;
    for (std::size_t j = 1; j < scores.size(); ++j) {
      if (scores[j] < scores[best]) best = j;
    }
    res.value = scores[best];
    res.attaining = parts[best];
  }
  if ((spec.family == Family::qkGM || spec.family == Family::qkME) && *spec.param < 2.0) {
    res.notes.push_back("q in (1,2): extrapolated regime");
  }
  res.per_partition_scores = std::move(scores);
  return res;
}

// ---------------------------------------------------------------------------
// Closed forms

double ghz_alpha2(int n, double alpha) {
  if (n < 2) throw InvalidInput("GHZ closed form needs n >= 2");
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha >= 1.0) {
    throw InvalidParam("alpha must lie in [0, 1)");
  }
  // Every cut marginal is {1/2, 1/2}: Tr rho^alpha = 2^(1-alpha).
  return std::sqrt(2.0 * (std::pow(2.0, 1.0 - alpha) - 1.0));
}

double w_alpha2(int n, double alpha) {
  if (n < 3 || n > 64) throw InvalidInput("W closed form supports 3 <= n <= 64");
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha >= 1.0) {
    throw InvalidParam("alpha must lie in [0, 1)");
  }
  if (alpha == 0.0) return std::sqrt(2.0);  // every cut scores sqrt(2) exactly

  // A cut keeping p excitations-side qubits has marginal {p/n, (n-p)/n}; cuts
  // of size p and n-p coincide, giving binomial multiplicities.  For even n
  // the balanced cuts have marginal {1/2, 1/2}, identical to GHZ.
  const long double t2 = std::pow(2.0L, n - 1) - 1.0L;  // number of cuts
  const long double na = std::pow(static_cast<long double>(n), static_cast<long double>(alpha));
  long double acc = 0.0L;
  const int top = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
  for (int p = 1; p <= top; ++p) {
    long double tr = (std::pow(static_cast<long double>(p), static_cast<long double>(alpha)) +
                      std::pow(static_cast<long double>(n - p), static_cast<long double>(alpha))) /
                     na;
    long double cut_log = 0.5L * std::log(2.0L * (tr - 1.0L));
    acc += static_cast<long double>(binom_u64(n, p)) * cut_log;
  }
  if (n % 2 == 0) {
    long double ghz_log = std::log(static_cast<long double>(ghz_alpha2(n, alpha)));
    acc += (static_cast<long double>(binom_u64(n, n / 2)) / 2.0L) * ghz_log;
  }
  return static_cast<double>(std::exp(acc / t2));
}

double ghz_w_ratio(int n, double alpha) {
  if (n < 3) throw InvalidInput("ratio needs n >= 3");
  if (alpha == 0.0) return 1.0;  // degenerate: both values are sqrt(2)
  return w_alpha2(n, alpha) / ghz_alpha2(n, alpha);
}

double gbc_factor(const std::vector<int>& dims) {
  check_dims(dims);
  const int n = static_cast<int>(dims.size());
  const long total = total_dimension(dims);
  const auto cuts = bipartitions(n);
  double acc = 0.0;
  for (const auto& cut : cuts) {
    long da = 1;
    for (int s : cut.members) da *= dims[s - 1];
    long d = std::min(da, total / da);
    acc += std::log(2.0 * static_cast<double>(d - 1) / static_cast<double>(d));
  }
  return std::exp(acc / static_cast<double>(cuts.size()));
}

}  // namespace enthier
