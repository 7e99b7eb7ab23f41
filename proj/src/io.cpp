#include "enthier/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace enthier {

using nlohmann::json;

namespace {

json require_field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw InvalidInput(std::string("missing field \"") + name + "\"");
  }
  return *it;
}

Complex parse_complex(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidInput(std::string(what) + " entries must be [re, im] number pairs");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

std::vector<int> parse_dims(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw InvalidInput("\"dims\" must be a non-empty array of integers");
  }
  std::vector<int> dims;
  for (const auto& e : j) {
    if (!e.is_number_integer()) {
      throw InvalidInput("\"dims\" must be a non-empty array of integers");
    }
    dims.push_back(e.get<int>());
  }
  return dims;
}

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

}  // namespace

StateFile parse_state_json(const std::string& text, const LoadOptions& opts) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("state file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("state file must be a JSON object");

  json jver = require_field(j, "version");
  if (!jver.is_number_integer() || jver.get<int>() != 1) {
    throw InvalidInput("unsupported state file version (expected 1)");
  }
  std::string kind = require_field(j, "kind").get<std::string>();
  std::vector<int> dims = parse_dims(require_field(j, "dims"));
  check_dims(dims);
  const long d = total_dimension(dims);

  std::string label;
  if (j.contains("label") && j["label"].is_string()) label = j["label"].get<std::string>();

  if (kind == "pure") {
    json ja = require_field(j, "amplitudes");
    if (!ja.is_array() || static_cast<long>(ja.size()) != d) {
      throw InvalidInput("\"amplitudes\" must be an array of length " + std::to_string(d));
    }
    Vector a(d);
    for (long i = 0; i < d; ++i) a[i] = parse_complex(ja[i], "amplitude");
    double norm = a.norm();
    double dev = std::abs(norm - 1.0);
    if (dev > kNormTol) {
      if (opts.normalize && dev <= opts.repair_tol && norm > 0.0) {
        a /= norm;
        if (opts.warn) {
          *opts.warn << "warning: renormalized state vector (||psi|| was "
                     << format_sig(norm) << ")\n";
        }
      } else {
        throw InvalidState("state vector norm " + std::to_string(norm) +
                           " outside accepted tolerance");
      }
    }
    return StateFile{PureState(std::move(dims), std::move(a)), std::move(label)};
  }
  if (kind == "mixed") {
    json jm = require_field(j, "matrix");
    if (!jm.is_array() || static_cast<long>(jm.size()) != d) {
      throw InvalidInput("\"matrix\" must be a " + std::to_string(d) + "x" +
                         std::to_string(d) + " array");
    }
    Matrix m(d, d);
    for (long r = 0; r < d; ++r) {
      if (!jm[r].is_array() || static_cast<long>(jm[r].size()) != d) {
        throw InvalidInput("\"matrix\" must be a " + std::to_string(d) + "x" +
                           std::to_string(d) + " array");
      }
      for (long c = 0; c < d; ++c) m(r, c) = parse_complex(jm[r][c], "matrix");
    }
    double tr = m.trace().real();
    double dev = std::abs(tr - 1.0);
    if (dev > kNormTol) {
      if (opts.normalize && dev <= opts.repair_tol && tr > 0.0) {
        m /= tr;
        if (opts.warn) {
          *opts.warn << "warning: rescaled density matrix (trace was " << format_sig(tr)
                     << ")\n";
        }
      } else {
        throw InvalidState("density matrix trace " + std::to_string(tr) +
                           " outside accepted tolerance");
      }
    }
    DensityMatrix rho(std::move(dims), std::move(m));
    rho.validate();
    return StateFile{std::move(rho), std::move(label)};
  }
  throw InvalidInput("unknown state kind \"" + kind + "\" (expected pure or mixed)");
}

StateFile load_state_file(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open state file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_json(buf.str(), opts);
}

std::string state_to_json(const StateFile& sf) {
  json j;
  j["version"] = 1;
  if (!sf.label.empty()) j["label"] = sf.label;
  if (sf.is_pure()) {
    const PureState& psi = sf.pure();
    j["kind"] = "pure";
    j["dims"] = psi.dims();
    json ja = json::array();
    for (long i = 0; i < psi.dim(); ++i) ja.push_back(complex_to_json(psi.amplitudes()[i]));
    j["amplitudes"] = std::move(ja);
  } else {
    const DensityMatrix& rho = sf.mixed();
    j["kind"] = "mixed";
    j["dims"] = rho.dims();
    json jm = json::array();
    for (long r = 0; r < rho.dim(); ++r) {
      json row = json::array();
      for (long c = 0; c < rho.dim(); ++c) row.push_back(complex_to_json(rho.matrix()(r, c)));
      jm.push_back(std::move(row));
    }
    j["matrix"] = std::move(jm);
  }
  return j.dump(2);
}

void save_state_file(const std::string& path, const StateFile& sf) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open output file: " + path);
  out << state_to_json(sf) << '\n';
}

// ---------------------------------------------------------------------------
// Theta templates

PureState ThetaTemplate::at(double theta) const {
  Vector a = std::sin(theta) * branch_sin + std::cos(theta) * branch_cos;
  return PureState(dims, std::move(a));
}

void ThetaTemplate::validate() const {
  check_dims(dims);
  const long d = total_dimension(dims);
  if (branch_sin.size() != d || branch_cos.size() != d) {
    throw InvalidInput("template branches must have length " + std::to_string(d));
  }
  if (std::abs(branch_sin.norm() - 1.0) > kNormTol ||
      std::abs(branch_cos.norm() - 1.0) > kNormTol) {
    throw InvalidInput("template branches must be normalized");
  }
  double overlap = branch_sin.dot(branch_cos).real();
  if (std::abs(overlap) > kNormTol) {
    throw InvalidInput("template branches must satisfy Re<sin|cos> = 0, got " +
                       std::to_string(overlap));
  }
}

ThetaTemplate ThetaTemplate::fig1() {
  ThetaTemplate t;
  t.dims = {2, 2, 2, 2};
  t.branch_sin = Vector::Zero(16);
  t.branch_sin[1] = 1.0 / 3.0;                 // |0001>
  t.branch_sin[4] = std::sqrt(2.0) / 3.0;      // |0100>
  t.branch_sin[8] = std::sqrt(6.0) / 3.0;      // |1000>
  t.branch_cos = Vector::Zero(16);
  t.branch_cos[3] = 1.0;                       // |0011>
  t.validate();
  return t;
}

ThetaTemplate ThetaTemplate::fig2() {
  ThetaTemplate t;
  t.dims = {2, 2, 2, 2};
  t.branch_sin = Vector::Zero(16);
  const double c = 1.0 / std::sqrt(3.0);
  t.branch_sin[1] = c;
  t.branch_sin[4] = c;
  t.branch_sin[8] = c;
  t.branch_cos = Vector::Zero(16);
  t.branch_cos[3] = 1.0;
  t.validate();
  return t;
}

ThetaTemplate ThetaTemplate::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open template file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("template file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("template file must be a JSON object");
  json jver = require_field(j, "version");
  if (!jver.is_number_integer() || jver.get<int>() != 1) {
    throw InvalidInput("unsupported template file version (expected 1)");
  }
  if (require_field(j, "kind").get<std::string>() != "pure-theta") {
    throw InvalidInput("template kind must be \"pure-theta\"");
  }
  ThetaTemplate t;
  t.dims = parse_dims(require_field(j, "dims"));
  check_dims(t.dims);
  const long d = total_dimension(t.dims);
  auto read_branch = [&](const char* name) {
    json ja = require_field(j, name);
    if (!ja.is_array() || static_cast<long>(ja.size()) != d) {
      throw InvalidInput(std::string("\"") + name + "\" must be an array of length " +
                         std::to_string(d));
    }
    Vector v(d);
    for (long i = 0; i < d; ++i) v[i] = parse_complex(ja[i], name);
    return v;
  };
  t.branch_sin = read_branch("amplitudes_sin");
  t.branch_cos = read_branch("amplitudes_cos");
  t.validate();
  return t;
}

// ---------------------------------------------------------------------------
// Sweeps

SweepResult run_sweep(const ThetaTemplate& tmpl, const SweepConfig& cfg) {
  tmpl.validate();
  if (cfg.steps < 2) throw InvalidInput("sweep needs at least 2 grid points");
  if (!std::isfinite(cfg.theta_start) || !std::isfinite(cfg.theta_end)) {
    throw InvalidInput("sweep endpoints must be finite");
  }
  MeasureSpec gm_spec;
  gm_spec.k = cfg.k;
  MeasureSpec me_spec;
  me_spec.k = cfg.k;
  if (cfg.family == Family::kGM) {
    gm_spec.family = Family::kGM;
    me_spec.family = Family::kME;
  } else if (cfg.family == Family::qkGM) {
    gm_spec.family = Family::qkGM;
    me_spec.family = Family::qkME;
    gm_spec.param = cfg.q;
    me_spec.param = cfg.q;
  } else {
    throw InvalidParam("sweep supports the kGM and qkGM families");
  }

  Evaluator ev_gm(tmpl.dims, gm_spec);
  Evaluator ev_me(tmpl.dims, me_spec);

  SweepResult r;
  r.thetas.resize(cfg.steps);
  r.value_gm.resize(cfg.steps);
  r.value_me.resize(cfg.steps);
  const double h = (cfg.theta_end - cfg.theta_start) / (cfg.steps - 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < cfg.steps; ++i) {
    double theta = cfg.theta_start + i * h;
    PureState psi = tmpl.at(theta);
    r.thetas[i] = theta;
    r.value_gm[i] = ev_gm.value(psi);
    r.value_me[i] = ev_me.value(psi);
  }
  return r;
}

std::vector<int> detect_kinks(const std::vector<double>& y, double factor) {
  if (!(factor > 0.0)) throw InvalidParam("kink factor must be positive");
  std::vector<int> out;
  if (y.size() < 3) return out;
  std::vector<double> d2(y.size() - 2);
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    d2[i - 1] = std::abs(y[i - 1] - 2.0 * y[i] + y[i + 1]);
  }
  std::vector<double> sorted = d2;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  double med = sorted[sorted.size() / 2];
  if (sorted.size() % 2 == 0) {
    double lower = *std::max_element(sorted.begin(), sorted.begin() + sorted.size() / 2);
    med = 0.5 * (med + lower);
  }
  for (std::size_t i = 0; i < d2.size(); ++i) {
    if (d2[i] > factor * med) out.push_back(static_cast<int>(i + 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "theta,value_gm,value_me\n";
  for (std::size_t i = 0; i < r.thetas.size(); ++i) {
    os << format_sig(r.thetas[i]) << ',' << format_sig(r.value_gm[i]) << ','
       << format_sig(r.value_me[i]) << '\n';
  }
}

std::vector<RatioRow> ratio_table(double alpha, int n_min, int n_max) {
  if (n_min < 3) throw InvalidInput("ratio table needs n >= 3");
  if (n_max < n_min) throw InvalidInput("ratio table needs n_max >= n_min");
  std::vector<RatioRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    rows.push_back({n, w_alpha2(n, alpha), ghz_alpha2(n, alpha), ghz_w_ratio(n, alpha)});
  }
  return rows;
}

void write_ratio_csv(std::ostream& os, const std::vector<RatioRow>& rows) {
  os << "n,w_value,ghz_value,ratio\n";
  for (const auto& r : rows) {
    os << r.n << ',' << format_sig(r.w_value) << ',' << format_sig(r.ghz_value) << ','
       << format_sig(r.ratio) << '\n';
  }
}

}  // namespace enthier
