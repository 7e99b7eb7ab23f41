#include "enthier/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "enthier/io.hpp"
#include "enthier/measures.hpp"
#include "enthier/mixed_bounds.hpp"
#include "enthier/partitions.hpp"
#include "enthier/verify.hpp"

namespace enthier {

namespace {

using nlohmann::json;

// Report values carry 12 significant digits: round through text so the JSON
// number is the rounded value exactly.
json sig12(double v) {
  return json(std::strtod(format_sig(v).c_str(), nullptr));
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("ENTHIER_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s, &end, 10);
  if (end == nullptr || *end != '\0') {
    throw InvalidInput("ENTHIER_SEED must be an unsigned integer, got \"" + std::string(s) +
                       "\"");
  }
  return static_cast<std::uint64_t>(v);
}

MeasureSpec build_spec(const std::string& family, int k, const std::optional<double>& q,
                       const std::optional<double>& alpha) {
  if (q && alpha) throw InvalidInput("give at most one of --q and --alpha");
  MeasureSpec spec;
  spec.family = parse_family(family);
  spec.k = k;
  if (q) spec.param = *q;
  if (alpha) spec.param = *alpha;
  return spec;
}

// Writes a report either to a file or to `out`.
void emit_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open output file: " + path);
  f << text;
}

struct CommonStateArgs {
  std::string state_path;
  std::string family;
  int k = 2;
  std::optional<double> q;
  std::optional<double> alpha;
  bool no_normalize = false;
  std::string out_path;
};

void add_state_options(CLI::App* cmd, CommonStateArgs& a, bool family_required = true) {
  cmd->add_option("--state", a.state_path, "state file (JSON)")->required();
  auto* fam = cmd->add_option("--family", a.family, "kgm | qkgm | alphakgm | kme | qkme");
  if (family_required) fam->required();
  cmd->add_option("--k", a.k, "number of partition blocks")->required();
  cmd->add_option_function<double>(
      "--q", [&a](const double& v) { a.q = v; }, "q parameter (q > 1) for the q families");
  cmd->add_option_function<double>(
      "--alpha", [&a](const double& v) { a.alpha = v; },
      "alpha parameter in [0,1) for the alpha family");
  cmd->add_flag("--no-normalize", a.no_normalize, "reject instead of repairing small norm drift");
  cmd->add_option("--output", a.out_path, "write the JSON report here instead of stdout");
}

// ---------------------------------------------------------------------------
// Subcommand bodies

int cmd_compute(const CommonStateArgs& a, bool with_scores, std::ostream& out,
                std::ostream& err) {
  LoadOptions lo;
  lo.normalize = !a.no_normalize;
  lo.warn = &err;
  StateFile sf = load_state_file(a.state_path, lo);
  if (!sf.is_pure()) {
    throw InvalidInput("compute expects a pure state; use the bound command for mixed states");
  }
  MeasureSpec spec = build_spec(a.family, a.k, a.q, a.alpha);
  MeasureResult res = evaluate(sf.pure(), spec, with_scores);

  json rep;
  rep["command"] = "compute";
  rep["family"] = family_name(spec.family);
  rep["k"] = spec.k;
  if (spec.param) rep[spec.is_alpha_family() ? "alpha" : "q"] = *spec.param;
  rep["dims"] = sf.pure().dims();
  if (!sf.label.empty()) rep["label"] = sf.label;
  rep["value"] = sig12(res.value);
  if (res.attaining) rep["attaining_partition"] = res.attaining->to_string();
  if (res.per_partition_scores) {
    json scores = json::array();
    for (double s : *res.per_partition_scores) scores.push_back(sig12(s));
    rep["per_partition_scores"] = std::move(scores);
  }
  if (!res.notes.empty()) rep["notes"] = res.notes;
  emit_text(a.out_path, rep.dump(2) + "\n", out);
  return 0;
}

int cmd_bound(const CommonStateArgs& a, const SearchConfig& cfg, bool emit_ensemble,
              std::ostream& out, std::ostream& err) {
  LoadOptions lo;
  lo.normalize = !a.no_normalize;
  lo.warn = &err;
  StateFile sf = load_state_file(a.state_path, lo);
  MeasureSpec spec = build_spec(a.family, a.k, a.q, a.alpha);

  DensityMatrix rho = sf.is_pure() ? DensityMatrix::projector(sf.pure()) : sf.mixed();
  RoofResult roof = convex_roof_upper_bound(rho, spec, cfg);

  json rep;
  rep["command"] = "bound";
  rep["family"] = family_name(spec.family);
  rep["k"] = spec.k;
  if (spec.param) rep[spec.is_alpha_family() ? "alpha" : "q"] = *spec.param;
  rep["dims"] = rho.dims();
  if (!sf.label.empty()) rep["label"] = sf.label;
  rep["value_upper_bound"] = sig12(roof.value);
  rep["input_kind"] = sf.is_pure() ? "pure" : "mixed";
  if (sf.is_pure()) {
    rep["notes"] = json::array({"input is pure: the bound is the exact value"});
  }
  json jcfg;
  jcfg["seed"] = cfg.seed;
  jcfg["restarts"] = cfg.restarts;
  jcfg["refine_iters"] = cfg.refine_iters;
  jcfg["ensemble_sizes"] = cfg.ensemble_sizes;
  rep["config"] = std::move(jcfg);
  if (emit_ensemble) {
    json ens = json::array();
    for (const auto& e : roof.best.entries) {
      json entry;
      entry["p"] = e.p;  // full precision: this is state-like data
      json amps = json::array();
      for (long i = 0; i < e.state.dim(); ++i) {
        amps.push_back(json::array(
            {e.state.amplitudes()[i].real(), e.state.amplitudes()[i].imag()}));
      }
      entry["amplitudes"] = std::move(amps);
      ens.push_back(std::move(entry));
    }
    rep["ensemble"] = std::move(ens);
  }
  emit_text(a.out_path, rep.dump(2) + "\n", out);
  return 0;
}

struct SweepArgs {
  std::string template_name = "fig1";
  std::string template_file;
  std::string family = "kgm";
  int k = 3;
  std::optional<double> q;
  double theta_start = 0.0;
  double theta_end = 3.14159265358979323846;
  int steps = 2001;
  std::string out_path;
  bool report_kinks = false;
  double kink_factor = 10.0;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  ThetaTemplate tmpl = [&] {
    if (a.template_name == "fig1") return ThetaTemplate::fig1();
    if (a.template_name == "fig2") return ThetaTemplate::fig2();
    if (a.template_name == "custom") {
      if (a.template_file.empty()) {
        throw InvalidInput("--template custom needs --template-file");
      }
      return ThetaTemplate::from_file(a.template_file);
    }
    throw InvalidInput("unknown template \"" + a.template_name +
                       "\" (expected fig1, fig2 or custom)");
  }();

  SweepConfig cfg;
  cfg.family = parse_family(a.family);
  cfg.k = a.k;
  cfg.q = a.q;
  cfg.theta_start = a.theta_start;
  cfg.theta_end = a.theta_end;
  cfg.steps = a.steps;
  SweepResult res = run_sweep(tmpl, cfg);

  std::ostringstream csv;
  write_sweep_csv(csv, res);
  emit_text(a.out_path, csv.str(), out);

  if (a.report_kinks) {
    json rep;
    rep["command"] = "sweep";
    rep["kink_factor"] = a.kink_factor;
    rep["kinks_value_gm"] = detect_kinks(res.value_gm, a.kink_factor);
    rep["kinks_value_me"] = detect_kinks(res.value_me, a.kink_factor);
    // When the CSV went to a file the report can use stdout; otherwise keep
    // stdout clean CSV and report on the diagnostic stream.
    (a.out_path.empty() ? err : out) << rep.dump(2) << "\n";
  }
  return 0;
}

struct RatioArgs {
  double alpha = 0.5;
  int n_min = 4;
  int n_max = 20;
  std::string out_path;
};

int cmd_ratio(const RatioArgs& a, std::ostream& out, std::ostream& err) {
  if (a.alpha == 0.0) {
    err << "warning: alpha = 0 is degenerate (both families evaluate to sqrt(2)); "
           "ratios are exactly 1\n";
  }
  auto rows = ratio_table(a.alpha, a.n_min, a.n_max);
  std::ostringstream csv;
  write_ratio_csv(csv, rows);
  emit_text(a.out_path, csv.str(), out);
  return 0;
}

struct PartitionArgs {
  int n = 0;
  int k = 0;
  bool count_only = false;
};

int cmd_partitions(const PartitionArgs& a, std::ostream& out) {
  std::uint64_t count = stirling2(a.n, a.k);
  if (a.count_only) {
    out << count << "\n";
    return 0;
  }
  constexpr std::uint64_t kListCap = 1000000;
  if (count > kListCap) {
    throw InvalidInput("refusing to list " + std::to_string(count) +
                       " partitions (cap " + std::to_string(kListCap) +
                       "); use --count-only");
  }
  for (PartitionEnumerator en(a.n, a.k); en.valid(); en.next()) {
    out << en.current().to_string() << "\n";
  }
  return 0;
}

struct VerifyArgs {
  std::string suite;
  int n = 4;
  int samples = 100;
  std::uint64_t seed = 12345;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  VerifyOptions opts;
  opts.n = a.n;
  opts.samples = a.samples;
  opts.seed = a.seed;
  bool ok = run_verify_suite(a.suite, opts, out);
  return ok ? 0 : 1;
}

}  // namespace

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hierarchical multipartite entanglement measures"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker thread count (0 = library default)");

  CommonStateArgs compute_args;
  bool with_scores = false;
  auto* c_compute = app.add_subcommand("compute", "evaluate a measure on a pure state");
  add_state_options(c_compute, compute_args);
  c_compute->add_flag("--scores", with_scores, "include every partition score in the report");

  CommonStateArgs bound_args;
  SearchConfig bound_cfg;
  bool emit_ensemble = false;
  auto* c_bound =
      app.add_subcommand("bound", "convex-roof upper bound for a (mixed) state");
  add_state_options(c_bound, bound_args);
  c_bound->add_option("--seed", bound_cfg.seed, "search seed (ENTHIER_SEED overrides)");
  c_bound->add_option("--restarts", bound_cfg.restarts, "random starts per ensemble size");
  c_bound->add_option("--refine-iters", bound_cfg.refine_iters,
                      "pairwise refinement steps per start");
  c_bound->add_option("--sizes", bound_cfg.ensemble_sizes,
                      "ensemble sizes to try (default rank..rank+2)")
      ->delimiter(',');
  c_bound->add_flag("--emit-ensemble", emit_ensemble,
                    "include the best decomposition in the report");

  SweepArgs sweep_args;
  auto* c_sweep = app.add_subcommand("sweep", "evaluate a theta family over a grid (CSV)");
  c_sweep->add_option("--template", sweep_args.template_name, "fig1 | fig2 | custom");
  c_sweep->add_option("--template-file", sweep_args.template_file,
                      "JSON template (with --template custom)");
  c_sweep->add_option("--family", sweep_args.family, "kgm | qkgm (paired with its min family)");
  c_sweep->add_option("--k", sweep_args.k, "number of partition blocks");
  c_sweep->add_option_function<double>(
      "--q", [&sweep_args](const double& v) { sweep_args.q = v; }, "q parameter for qkgm");
  c_sweep->add_option("--theta-start", sweep_args.theta_start, "grid start");
  c_sweep->add_option("--theta-end", sweep_args.theta_end, "grid end");
  c_sweep->add_option("--steps", sweep_args.steps, "grid points (endpoints included)");
  c_sweep->add_option("--out", sweep_args.out_path, "CSV output file (default stdout)");
  c_sweep->add_flag("--report-kinks", sweep_args.report_kinks,
                    "also report second-difference outlier indices (JSON)");
  c_sweep->add_option("--kink-factor", sweep_args.kink_factor,
                      "outlier threshold as a multiple of the median |d2|");

  RatioArgs ratio_args;
  auto* c_ratio = app.add_subcommand(
      "ratio", "closed-form W/GHZ bipartite geometric-mean ratio table (CSV)");
  c_ratio->add_option("--alpha", ratio_args.alpha, "alpha in [0,1)")->required();
  c_ratio->add_option("--n-min", ratio_args.n_min, "smallest qubit count (>= 3)");
  c_ratio->add_option("--n-max", ratio_args.n_max, "largest qubit count");
  c_ratio->add_option("--out", ratio_args.out_path, "CSV output file (default stdout)");

  PartitionArgs part_args;
  auto* c_parts = app.add_subcommand("partitions", "list or count k-block partitions");
  c_parts->add_option("--n", part_args.n, "element count")->required();
  c_parts->add_option("--k", part_args.k, "block count")->required();
  c_parts->add_flag("--count-only", part_args.count_only, "print only the count");

  VerifyArgs verify_args;
  auto* c_verify = app.add_subcommand("verify", "run a property suite on random states");
  c_verify
      ->add_option("--suite", verify_args.suite,
                   "hierarchy | scaled-min | local-unitary | permutation | separable-zero "
                   "| pi-sandwich | degenerate-k | all")
      ->required();
  c_verify->add_option("--n", verify_args.n, "qubit count for sampled states");
  c_verify->add_option("--samples", verify_args.samples, "random states per property");
  c_verify->add_option("--seed", verify_args.seed, "sampling seed (ENTHIER_SEED overrides)");

  std::vector<const char*> argv;
  argv.push_back("enthier");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp& e) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      throw InvalidInput(e.what());
    }

    if (threads < 0) throw InvalidInput("--threads must be >= 0");
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    auto seed_override = env_seed();
    if (seed_override) {
      bound_cfg.seed = *seed_override;
      verify_args.seed = *seed_override;
    }

    if (c_compute->parsed()) return cmd_compute(compute_args, with_scores, out, err);
    if (c_bound->parsed()) return cmd_bound(bound_args, bound_cfg, emit_ensemble, out, err);
    if (c_sweep->parsed()) return cmd_sweep(sweep_args, out, err);
    if (c_ratio->parsed()) return cmd_ratio(ratio_args, out, err);
    if (c_parts->parsed()) return cmd_partitions(part_args, out);
    if (c_verify->parsed()) return cmd_verify(verify_args, out);
    throw InvalidInput("no subcommand given");
  } catch (const Error& e) {
    json j;
    j["error"] = {{"code", e.code()}, {"message", e.what()}};
    err << j.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json j;
    j["error"] = {{"code", "Internal"}, {"message", e.what()}};
    err << j.dump() << "\n";
    return 2;
  }
}

}  // namespace enthier
