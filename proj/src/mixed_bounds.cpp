#include "enthier/mixed_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "enthier/random.hpp"

namespace enthier {

namespace {

constexpr double kProbFloor = 1e-14;      // ensemble members below this are dropped
constexpr double kSeedSumTol = 1e-8;      // seed ensemble probability sum check
constexpr double kSeedReconTol = 1e-7;    // seed ensemble reconstruction check
constexpr double kGoldenRatio = 1.6180339887498948482;
// Random-start stream ids are size_index * kStreamStride + repeat, so adding
// restarts only appends streams and the minimum can only improve.
constexpr std::uint64_t kStreamStride = 1ull << 16;

}  // namespace

// ---------------------------------------------------------------------------
// DecompositionEnsemble

double DecompositionEnsemble::probability_sum() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.p;
  return s;
}

Matrix DecompositionEnsemble::reconstruct() const {
  if (entries.empty()) throw InvalidState("ensemble has no entries");
  const long d = entries.front().state.dim();
  Matrix m = Matrix::Zero(d, d);
  for (const auto& e : entries) {
    if (e.state.dim() != d) throw IncompatibleDims("ensemble entries have mixed dimensions");
    m.noalias() += e.p * (e.state.amplitudes() * e.state.amplitudes().adjoint());
  }
  return m;
}

double DecompositionEnsemble::reconstruction_error(const DensityMatrix& rho) const {
  Matrix m = reconstruct();
  if (m.rows() != rho.dim()) {
    throw IncompatibleDims("ensemble dimension does not match the density matrix");
  }
  return (m - rho.matrix()).cwiseAbs().maxCoeff();
}

double DecompositionEnsemble::average_value(const Evaluator& ev) const {
  double acc = 0.0;
  for (const auto& e : entries) {
    if (e.p < kProbFloor) continue;
    acc += e.p * ev.value(e.state);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Roof search internals

namespace {

// Average measure value of the ensemble encoded by the columns of W
// (column j is sqrt(p_j) |psi_j>), with per-column terms exposed so pairwise
// updates stay cheap.
double column_term(const Matrix& w, long j, const Evaluator& ev,
                   const std::vector<int>& dims) {
  double p = w.col(j).squaredNorm();
  if (p < kProbFloor) return 0.0;
  Vector v = w.col(j) / std::sqrt(p);
  return p * ev.value(PureState(dims, std::move(v)));
}

double pair_term(const Vector& w1, const Vector& w2, const Evaluator& ev,
                 const std::vector<int>& dims) {
  double t = 0.0;
  double p1 = w1.squaredNorm();
  if (p1 >= kProbFloor) t += p1 * ev.value(PureState(dims, Vector(w1 / std::sqrt(p1))));
  double p2 = w2.squaredNorm();
  if (p2 >= kProbFloor) t += p2 * ev.value(PureState(dims, Vector(w2 / std::sqrt(p2))));
  return t;
}

// Minimizes the two-column contribution over real rotations
//   (w1, w2) -> (c w1 + s w2, -s w1 + c w2),
// which preserve W W^dagger.  Golden-section sampling over [-pi/4, pi/4],
// keeping the best sampled angle (the objective need not be unimodal, so the
// best-seen point is used rather than the final bracket).
struct PairOpt {
  double theta;
  double value;
};

PairOpt best_pair_rotation(const Matrix& w, long j1, long j2, double current,
                           const Evaluator& ev, const std::vector<int>& dims) {
  const Vector w1 = w.col(j1);
  const Vector w2 = w.col(j2);
  auto f = [&](double th) {
    double c = std::cos(th), s = std::sin(th);
    Vector a = c * w1 + s * w2;
    Vector b = -s * w1 + c * w2;
    return pair_term(a, b, ev, dims);
  };
  PairOpt best{0.0, current};  // theta = 0 is the identity rotation
  auto consider = [&](double th, double val) {
    if (val < best.value) best = {th, val};
  };
  double a = -0.25 * M_PI, b = 0.25 * M_PI;
  consider(a, f(a));
  consider(b, f(b));
  double x1 = b - (b - a) / kGoldenRatio;
  double x2 = a + (b - a) / kGoldenRatio;
  double f1 = f(x1), f2 = f(x2);
  consider(x1, f1);
  consider(x2, f2);
  for (int it = 0; it < 24; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - (b - a) / kGoldenRatio;
      f1 = f(x1);
      consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + (b - a) / kGoldenRatio;
      f2 = f(x2);
      consider(x2, f2);
    }
  }
  return best;
}

// In-place refinement of W by sweeps of pairwise rotations; max_steps counts
// individual pair optimizations.  Returns the final ensemble average.
double refine_columns(Matrix& w, const Evaluator& ev, const std::vector<int>& dims,
                      int max_steps) {
  const long m = w.cols();
  std::vector<double> term(static_cast<std::size_t>(m));
  for (long j = 0; j < m; ++j) term[static_cast<std::size_t>(j)] = column_term(w, j, ev, dims);
  double total = std::accumulate(term.begin(), term.end(), 0.0);

  int steps = 0;
  bool improved = true;
  while (improved && steps < max_steps) {
    improved = false;
    for (long j1 = 0; j1 < m && steps < max_steps; ++j1) {
      for (long j2 = j1 + 1; j2 < m && steps < max_steps; ++j2) {
        ++steps;
        double current = term[static_cast<std::size_t>(j1)] + term[static_cast<std::size_t>(j2)];
        PairOpt opt = best_pair_rotation(w, j1, j2, current, ev, dims);
        if (opt.value < current - 1e-15) {
          double c = std::cos(opt.theta), s = std::sin(opt.theta);
          Vector a = c * w.col(j1) + s * w.col(j2);
          Vector b = -s * w.col(j1) + c * w.col(j2);
          w.col(j1) = a;
          w.col(j2) = b;
          term[static_cast<std::size_t>(j1)] = column_term(w, j1, ev, dims);
          term[static_cast<std::size_t>(j2)] = column_term(w, j2, ev, dims);
          total += term[static_cast<std::size_t>(j1)] + term[static_cast<std::size_t>(j2)] - current;
          improved = true;
        }
      }
    }
  }
  // Recompute serially to shed accumulated increments.
  for (long j = 0; j < m; ++j) term[static_cast<std::size_t>(j)] = column_term(w, j, ev, dims);
  return std::accumulate(term.begin(), term.end(), 0.0);
}

DecompositionEnsemble ensemble_from_columns(const Matrix& w, const std::vector<int>& dims) {
  DecompositionEnsemble ens;
  for (long j = 0; j < w.cols(); ++j) {
    double p = w.col(j).squaredNorm();
    if (p < kProbFloor) continue;
    ens.entries.push_back({p, PureState(dims, Vector(w.col(j) / std::sqrt(p)))});
  }
  return ens;
}

Matrix columns_from_ensemble(const DecompositionEnsemble& ens, long dim) {
  Matrix w(dim, static_cast<long>(ens.entries.size()));
  for (std::size_t j = 0; j < ens.entries.size(); ++j) {
    w.col(static_cast<long>(j)) =
        std::sqrt(std::max(ens.entries[j].p, 0.0)) * ens.entries[j].state.amplitudes();
  }
  return w;
}

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  DecompositionEnsemble ensemble;
};

}  // namespace

// ---------------------------------------------------------------------------
// Convex-roof upper bound

RoofResult convex_roof_upper_bound(const DensityMatrix& rho, const MeasureSpec& spec,
                                   const SearchConfig& cfg,
                                   const std::vector<DecompositionEnsemble>& seeds) {
  rho.validate();
  const auto& dims = rho.dims();
  Evaluator ev(dims, spec);
  if (cfg.restarts < 0 || cfg.refine_iters < 0) {
    throw InvalidParam("restarts and refine_iters must be non-negative");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const auto& evals = es.eigenvalues();  // ascending
  std::vector<long> keep;
  for (long i = evals.size() - 1; i >= 0; --i) {
    if (evals[i] > kRankTol) keep.push_back(i);
  }
  const long r = static_cast<long>(keep.size());
  if (r == 0) throw InvalidState("density matrix has numerical rank 0");

  if (r == 1) {
    // Pure state: the roof is exact.
    Vector v = es.eigenvectors().col(keep[0]);
    v /= v.norm();
    PureState psi(dims, std::move(v));
    RoofResult res;
    res.value = ev.value(psi);
    res.best.entries.push_back({1.0, std::move(psi)});
    return res;
  }

  Matrix m_root(rho.dim(), r);
  for (long j = 0; j < r; ++j) {
    m_root.col(j) = std::sqrt(evals[keep[j]]) * es.eigenvectors().col(keep[j]);
  }

  std::vector<int> sizes = cfg.ensemble_sizes;
  if (sizes.empty()) {
    sizes = {static_cast<int>(r), static_cast<int>(r) + 1, static_cast<int>(r) + 2};
  }
  for (int s : sizes) {
    if (s < r) {
      throw InvalidParam("ensemble size " + std::to_string(s) +
                         " cannot reproduce a rank-" + std::to_string(r) + " state");
    }
  }

  // Candidates are gathered in a fixed order -- raw seeds, refined seeds,
  // then random starts by stream id -- and the first strict minimum wins, so
  // the outcome is reproducible and never worse than the best seed.
  std::vector<Candidate> ordered;

  for (const auto& seed : seeds) {
    if (seed.entries.empty()) throw InvalidState("seed ensemble has no entries");
    for (const auto& e : seed.entries) {
      if (e.state.dims() != dims) {
        throw IncompatibleDims("seed ensemble state dimensions do not match rho");
      }
      if (e.p < -1e-12) throw InvalidState("seed ensemble has a negative probability");
    }
    if (std::abs(seed.probability_sum() - 1.0) > kSeedSumTol) {
      throw InvalidState("seed ensemble probabilities sum to " +
                         std::to_string(seed.probability_sum()));
    }
    if (seed.reconstruction_error(rho) > kSeedReconTol) {
      throw InvalidState("seed ensemble does not reconstruct the density matrix");
    }
    ordered.push_back({seed.average_value(ev), seed});
  }
  const std::size_t n_raw = ordered.size();
  for (std::size_t i = 0; i < n_raw; ++i) {
    Matrix w = columns_from_ensemble(ordered[i].ensemble, rho.dim());
    double val = refine_columns(w, ev, dims, cfg.refine_iters);
    ordered.push_back({val, ensemble_from_columns(w, dims)});
  }

  struct Task {
    std::uint64_t sid;
    int size;
  };
  std::vector<Task> tasks;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    for (int rep = 0; rep < cfg.restarts; ++rep) {
      tasks.push_back({static_cast<std::uint64_t>(si) * kStreamStride +
                           static_cast<std::uint64_t>(rep),
                       sizes[si]});
    }
  }
  std::vector<Candidate> rand_cands(tasks.size());
  const long ntasks = static_cast<long>(tasks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long t = 0; t < ntasks; ++t) {
    Rng rng = Rng::stream(cfg.seed, tasks[static_cast<std::size_t>(t)].sid);
    const int msize = tasks[static_cast<std::size_t>(t)].size;
    Matrix u = haar_isometry(msize, r, rng);
    Matrix w = m_root * u.transpose();
    double val = refine_columns(w, ev, dims, cfg.refine_iters);
    rand_cands[static_cast<std::size_t>(t)] = {val, ensemble_from_columns(w, dims)};
  }
  for (auto& c : rand_cands) ordered.push_back(std::move(c));

  if (ordered.empty()) {
    throw InvalidParam("roof search has no candidates: zero restarts and no seeds");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i].value < ordered[best].value) best = i;
  }
  return RoofResult{ordered[best].value, std::move(ordered[best].ensemble)};
}

// ---------------------------------------------------------------------------
// Bound pairs

namespace {

MeasureSpec matching_min_spec(const MeasureSpec& gm_spec) {
  MeasureSpec me;
  me.k = gm_spec.k;
  switch (gm_spec.family) {
    case Family::kGM:
      me.family = Family::kME;
      break;
    case Family::qkGM:
      me.family = Family::qkME;
      me.param = gm_spec.param;
      break;
    default:
      throw InvalidParam("no minimum-family counterpart for " + family_name(gm_spec.family));
  }
  return me;
}

}  // namespace

PureBoundPair gm_me_pair(const PureState& psi, const MeasureSpec& gm_spec) {
  MeasureSpec me = matching_min_spec(gm_spec);
  return PureBoundPair{evaluate(psi, gm_spec).value, evaluate(psi, me).value};
}

MixedBoundPair gm_me_pair(const DensityMatrix& rho, const MeasureSpec& gm_spec,
                          const SearchConfig& cfg) {
  MeasureSpec me = matching_min_spec(gm_spec);
  return MixedBoundPair{convex_roof_upper_bound(rho, gm_spec, cfg).value,
                        convex_roof_upper_bound(rho, me, cfg).value};
}

// ---------------------------------------------------------------------------
// Permutation-invariant sandwich

bool PiSandwichReport::all_certified(double tol) const {
  for (const auto& s : samples) {
    if (s.upper_bound > s.pure_value + tol) return false;
  }
  return true;
}

double PiSandwichReport::max_upper_bound() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) m = std::max(m, s.upper_bound);
  return m;
}

PiSandwichReport pi_lower_bound_check(const PureState& psi, const MeasureSpec& spec,
                                      const SearchConfig& cfg, int unitary_samples) {
  const int n = psi.n();
  for (int d : psi.dims()) {
    if (d != psi.dims()[0]) {
      throw IncompatibleDims("permutation-invariant check needs equal subsystem dimensions");
    }
  }
  if (unitary_samples < 1) {
    throw InvalidInput("need at least one sample (sample 0 is the identity)");
  }
  Evaluator ev(psi.dims(), spec);

  std::vector<std::vector<int>> perms;
  {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  const double weight = 1.0 / static_cast<double>(perms.size());
  // Stream ids for the local unitaries live far above the roof search's own
  // streams so the two never collide for one seed.
  const std::uint64_t kUnitaryStreamBase = 1ull << 32;

  PiSandwichReport report;
  report.value_psi = ev.value(psi);
  for (int s = 0; s < unitary_samples; ++s) {
    PureState phi = psi;
    if (s > 0) {
      Rng rng = Rng::stream(cfg.seed, kUnitaryStreamBase + static_cast<std::uint64_t>(s));
      std::vector<Matrix> us;
      us.reserve(n);
      for (int i = 0; i < n; ++i) us.push_back(haar_unitary(psi.dims()[i], rng));
      phi = apply_local_unitaries(psi, us);
    }
    // Symmetrized ensemble: it reconstructs the permutation-invariant part
    // exactly and every member is locally equivalent to phi, so seeding with
    // it certifies ub <= value(phi).
    DecompositionEnsemble sym;
    for (const auto& p : perms) {
      sym.entries.push_back({weight, permute_subsystems(phi, p)});
    }
    DensityMatrix rho_pi = pi_part(DensityMatrix::projector(phi));
    double ub = convex_roof_upper_bound(rho_pi, spec, cfg, {sym}).value;
    report.samples.push_back({s == 0, ev.value(phi), ub});
  }
  return report;
}

QkmePair sqrt2_qkme_bound(const PureState& psi, int k, double q) {
  MeasureSpec gm{Family::qkGM, k, q};
  MeasureSpec me{Family::qkME, k, q};
  return QkmePair{evaluate(psi, gm).value, std::sqrt(2.0) * evaluate(psi, me).value};
}

}  // namespace enthier
