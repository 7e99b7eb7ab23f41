#include "enthier/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "enthier/measures.hpp"
#include "enthier/mixed_bounds.hpp"
#include "enthier/io.hpp"
#include "enthier/random.hpp"

namespace enthier {

namespace {

struct PropResult {
  std::string name;
  bool pass = true;
  // Signed worst-case slack of the property (negative = margin used up).
  double worst = std::numeric_limits<double>::infinity();
  std::string detail;
};

void print_prop(std::ostream& os, const PropResult& r) {
  os << (r.pass ? "PASS" : "FAIL") << ' ' << r.name << "  worst_slack=" << r.worst;
  if (!r.detail.empty()) os << "  " << r.detail;
  os << '\n';
}

std::vector<int> qubit_dims(int n) { return std::vector<int>(n, 2); }

// GM value minus min value must stay >= 0 for every k.
PropResult check_hierarchy(const VerifyOptions& o) {
  PropResult r;
  r.name = "hierarchy";
  constexpr double tol = 1e-10;
  for (int s = 0; s < o.samples; ++s) {
    Rng rng = Rng::stream(o.seed, 100 + s);
    PureState psi = haar_state(qubit_dims(o.n), rng);
    for (int k = 2; k <= o.n; ++k) {
      PureBoundPair pair = gm_me_pair(psi, MeasureSpec{Family::kGM, k});
      double slack = pair.value_gm - pair.value_me;
      r.worst = std::min(r.worst, slack);
    }
  }
  r.pass = r.worst >= -tol;
  r.detail = "(value_gm - value_me over k=2.." + std::to_string(o.n) + ")";
  return r;
}

PropResult check_scaled_min(const VerifyOptions& o) {
  PropResult r;
  r.name = "scaled-min";
  constexpr double tol = 1e-10;
  const double qs[] = {1.5, 2.0, 3.0};
  for (int s = 0; s < o.samples; ++s) {
    Rng rng = Rng::stream(o.seed, 200 + s);
    PureState psi = haar_state(qubit_dims(o.n), rng);
    for (int k = 2; k <= std::min(3, o.n); ++k) {
      for (double q : qs) {
        QkmePair pair = sqrt2_qkme_bound(psi, k, q);
        r.worst = std::min(r.worst, pair.value_gm - pair.bound);
      }
    }
  }
  r.pass = r.worst >= -tol;
  r.detail = "(value_gm - sqrt(2)*value_me, q in {1.5,2,3})";
  return r;
}

std::vector<MeasureSpec> representative_specs(int n) {
  std::vector<MeasureSpec> specs = {
      MeasureSpec{Family::kGM, 2, {}},          MeasureSpec{Family::kME, 2, {}},
      MeasureSpec{Family::qkGM, 2, 2.5},        MeasureSpec{Family::qkME, 2, 3.0},
      MeasureSpec{Family::alphakGM, 2, 0.5},
  };
  if (n > 2) {
    specs.push_back(MeasureSpec{Family::kGM, n, {}});
    specs.push_back(MeasureSpec{Family::kME, n, {}});
  }
  return specs;
}

PropResult check_local_unitary(const VerifyOptions& o) {
  PropResult r;
  r.name = "local-unitary";
  constexpr double tol = 1e-9;
  std::vector<Evaluator> evs;
  for (const auto& spec : representative_specs(o.n)) evs.emplace_back(qubit_dims(o.n), spec);
  double worst_dev = 0.0;
  for (int s = 0; s < o.samples; ++s) {
    Rng rng = Rng::stream(o.seed, 300 + s);
    PureState psi = haar_state(qubit_dims(o.n), rng);
    std::vector<Matrix> us;
    for (int i = 0; i < o.n; ++i) us.push_back(haar_unitary(2, rng));
    PureState rotated = apply_local_unitaries(psi, us);
    for (const auto& ev : evs) {
      worst_dev = std::max(worst_dev, std::abs(ev.value(psi) - ev.value(rotated)));
    }
  }
  r.worst = tol - worst_dev;
  r.pass = worst_dev <= tol;
  r.detail = "(max |value - value after local unitaries| = " + format_sig(worst_dev) + ")";
  return r;
}

PropResult check_permutation(const VerifyOptions& o) {
  PropResult r;
  r.name = "permutation";
  constexpr double tol = 1e-10;
  std::vector<Evaluator> evs;
  for (const auto& spec : representative_specs(o.n)) evs.emplace_back(qubit_dims(o.n), spec);
  double worst_dev = 0.0;
  for (int s = 0; s < o.samples; ++s) {
    Rng rng = Rng::stream(o.seed, 400 + s);
    PureState psi = haar_state(qubit_dims(o.n), rng);
    std::vector<int> perm = random_permutation(o.n, rng);
    PureState moved = permute_subsystems(psi, perm);
    for (const auto& ev : evs) {
      worst_dev = std::max(worst_dev, std::abs(ev.value(psi) - ev.value(moved)));
    }
  }
  r.worst = tol - worst_dev;
  r.pass = worst_dev <= tol;
  r.detail = "(max |value - value after relabeling| = " + format_sig(worst_dev) + ")";
  return r;
}

PropResult check_separable_zero(const VerifyOptions& o) {
  PropResult r;
  r.name = "separable-zero";
  constexpr double tol = 1e-8;
  double worst_val = 0.0;
  for (int s = 0; s < o.samples; ++s) {
    Rng rng = Rng::stream(o.seed, 500 + s);
    int k = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(o.n - 1)));
    KPartition part = random_k_partition(o.n, k, rng);
    PureState psi = random_separable_state(qubit_dims(o.n), part, rng);
    const MeasureSpec specs[] = {
        MeasureSpec{Family::kGM, k, {}},   MeasureSpec{Family::kME, k, {}},
        MeasureSpec{Family::qkGM, k, 2.5}, MeasureSpec{Family::qkME, k, 3.0},
        MeasureSpec{Family::alphakGM, k, 0.5},
    };
    for (const auto& spec : specs) {
      worst_val = std::max(worst_val, evaluate(psi, spec).value);
    }
  }
  r.worst = tol - worst_val;
  r.pass = worst_val <= tol;
  r.detail = "(max value over product states = " + format_sig(worst_val) + ")";
  return r;
}

PropResult check_pi_sandwich(const VerifyOptions& o) {
  PropResult r;
  r.name = "pi-sandwich";
  SearchConfig cfg;
  cfg.seed = o.seed;
  cfg.restarts = 2;
  cfg.refine_iters = 40;
  cfg.ensemble_sizes = {};  // rank..rank+2 defaults are overkill here
  const int nstates = std::max(1, o.samples / 20);
  const int nunitaries = 2;
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < nstates; ++s) {
    Rng rng = Rng::stream(o.seed, 600 + s);
    PureState psi = haar_state(qubit_dims(o.n), rng);
    for (Family fam : {Family::kGM, Family::qkGM}) {
      MeasureSpec spec{fam, 2, fam == Family::qkGM ? std::optional<double>(2.0) : std::nullopt};
      SearchConfig local = cfg;
      local.seed = o.seed + static_cast<std::uint64_t>(s);
      PiSandwichReport rep = pi_lower_bound_check(psi, spec, local, nunitaries);
      for (const auto& smp : rep.samples) {
        worst = std::min(worst, smp.pure_value + local.tolerance - smp.upper_bound);
      }
    }
  }
  r.worst = worst;
  r.pass = worst >= 0.0;
  r.detail = "(pure value + tol - roof bound; " + std::to_string(nstates) + " states x " +
             std::to_string(nunitaries) + " rotations)";
  return r;
}

PropResult check_degenerate_k(const VerifyOptions& o) {
  PropResult r;
  r.name = "degenerate-k";
  constexpr double tol = 1e-12;
  double worst_dev = 0.0;
  for (int s = 0; s < o.samples; ++s) {
    Rng rng = Rng::stream(o.seed, 700 + s);
    PureState psi = haar_state(qubit_dims(o.n), rng);
    PureBoundPair pair = gm_me_pair(psi, MeasureSpec{Family::kGM, o.n});
    worst_dev = std::max(worst_dev, std::abs(pair.value_gm - pair.value_me));
  }
  r.worst = tol - worst_dev;
  r.pass = worst_dev <= tol;
  r.detail = "(max |value_gm - value_me| at k = n = " + std::to_string(o.n) + ")";
  return r;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
  return {"hierarchy",      "scaled-min",  "local-unitary", "permutation",
          "separable-zero", "pi-sandwich", "degenerate-k"};
}

bool run_verify_suite(const std::string& suite, const VerifyOptions& opts, std::ostream& os) {
  if (opts.n < 2) throw InvalidInput("verify needs n >= 2");
  if (opts.samples < 1) throw InvalidInput("verify needs samples >= 1");

  std::vector<PropResult> results;
  auto run_one = [&](const std::string& name) {
    if (name == "hierarchy") {
      results.push_back(check_hierarchy(opts));
    } else if (name == "scaled-min") {
      results.push_back(check_scaled_min(opts));
    } else if (name == "local-unitary") {
      results.push_back(check_local_unitary(opts));
    } else if (name == "permutation") {
      results.push_back(check_permutation(opts));
    } else if (name == "separable-zero") {
      results.push_back(check_separable_zero(opts));
    } else if (name == "pi-sandwich") {
      results.push_back(check_pi_sandwich(opts));
    } else if (name == "degenerate-k") {
      results.push_back(check_degenerate_k(opts));
    } else {
      std::string known = "all";
      for (const auto& s : verify_suite_names()) known += ", " + s;
      throw InvalidInput("unknown verify suite \"" + name + "\" (known: " + known + ")");
    }
  };

  if (suite == "all") {
    for (const auto& name : verify_suite_names()) run_one(name);
  } else {
    run_one(suite);
  }

  bool all_pass = true;
  for (const auto& r : results) {
    print_prop(os, r);
    all_pass = all_pass && r.pass;
  }
  return all_pass;
}

}  // namespace enthier
