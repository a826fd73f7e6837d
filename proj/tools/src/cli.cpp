#include "pencil_cli/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "pencil/geometry.hpp"
#include "pencil/hierarchy.hpp"

namespace pencil::cli {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::pair<Mode, std::string_view> kModes[] = {
    {Mode::CheckBracket, "check-bracket"},
    {Mode::CheckCompat, "check-compat"},
    {Mode::CheckIntegrability, "check-integrability"},
    {Mode::BuildCanonical, "build-canonical"},
    {Mode::Reconstruct, "reconstruct"},
    {Mode::Flow, "flow"},
    {Mode::Simulate, "simulate"},
    {Mode::Involution, "involution"},
};

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw SpecError(ErrorCode::Schema, path, message);
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string at(const std::string& path, std::string_view key) { return path + "." + std::string(key); }

const json& array_of(const json& j, const std::string& path, std::optional<std::size_t> length = std::nullopt) {
  if (!j.is_array()) fail(path, "expected an array");
  if (length && j.size() != *length) {
    fail(path, "expected " + std::to_string(*length) + " entries, found " + std::to_string(j.size()));
  }
  return j;
}

void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) fail(at(path, item.key()), "unknown key");
  }
}

const json& required(const json& j, const std::string& path, std::string_view key) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) fail(at(path, key), "missing required key");
  return *it;
}

Rational parse_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) fail(path, "expected a rational as \"p/q\" or an integer");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

std::size_t parse_count(const json& j, const std::string& path, std::size_t min) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  const auto v = j.get<std::size_t>();
  if (v < min) fail(path, "must be at least " + std::to_string(min));
  return v;
}

double parse_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

Poly parse_poly(const json& j, const std::string& path, std::size_t n) {
  array_of(j, path);
  Poly p(n);
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string tp = at(path, t);
    check_keys(j[t], tp, {"coeff", "exps"});
    const Rational c = parse_rational(required(j[t], tp, "coeff"), at(tp, "coeff"));
    const std::string ep = at(tp, "exps");
    const json& ej = array_of(required(j[t], tp, "exps"), ep, n);
    Exponents e(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t v = parse_count(ej[k], at(ep, k), 0);
      if (v > 64) fail(at(ep, k), "exponent too large");
      e[k] = static_cast<unsigned>(v);
    }
    p.add_term(e, c);
  }
  return p;
}

std::vector<Poly> parse_poly_list(const json& j, const std::string& path, std::size_t n,
                                  std::optional<std::size_t> length = std::nullopt) {
  array_of(j, path, length);
  std::vector<Poly> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_poly(j[i], at(path, i), n));
  return out;
}

Matrix<Poly> parse_poly_matrix(const json& j, const std::string& path, std::size_t n) {
  array_of(j, path, n);
  Matrix<Poly> m(n, Poly(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string rp = at(path, i);
    array_of(j[i], rp, n);
    for (std::size_t k = 0; k < n; ++k) m(i, k) = parse_poly(j[i][k], at(rp, k), n);
  }
  return m;
}

ConstantBracket parse_eta(const json& j, const std::string& path) {
  array_of(j, path);
  const std::size_t n = j.size();
  if (n == 0) fail(path, "eta must be at least 1x1");
  Matrix<Rational> m(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string rp = at(path, i);
    array_of(j[i], rp, n);
    for (std::size_t k = 0; k < n; ++k) m(i, k) = parse_rational(j[i][k], at(rp, k));
  }
  try {
    return ConstantBracket(m);
  } catch (const Error& e) {
    throw SpecError(e.code(), path, e.what());
  }
}

int parse_sign(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.get<long>() != 1 && j.get<long>() != -1)) fail(path, "sign must be 1 or -1");
  return static_cast<int>(j.get<long>());
}

CanonicalData parse_canonical(const json& j, const std::string& path) {
  check_keys(j, path, {"eta", "F", "psi", "signs"});
  ConstantBracket eta = parse_eta(required(j, path, "eta"), at(path, "eta"));
  const std::size_t n = eta.nvars();
  std::vector<Poly> F = parse_poly_list(required(j, path, "F"), at(path, "F"), n, n);
  std::vector<Poly> psi;
  std::vector<int> signs;
  if (j.contains("psi")) psi = parse_poly_list(j["psi"], at(path, "psi"), n);
  if (j.contains("signs")) {
    const json& sj = array_of(j["signs"], at(path, "signs"), psi.size());
    for (std::size_t a = 0; a < sj.size(); ++a) signs.push_back(parse_sign(sj[a], at(at(path, "signs"), a)));
  } else if (!psi.empty()) {
    fail(at(path, "signs"), "missing required key (one sign per psi)");
  }
  return CanonicalData{std::move(eta), std::move(F), std::move(psi), std::move(signs)};
}

HydroBracket parse_bracket(const json& j, const std::string& path) {
  check_keys(j, path, {"metric", "conn", "tails"});
  const json& mj = array_of(required(j, path, "metric"), at(path, "metric"));
  const std::size_t n = mj.size();
  if (n == 0) fail(at(path, "metric"), "metric must be at least 1x1");
  Matrix<Poly> metric = parse_poly_matrix(mj, at(path, "metric"), n);

  const std::string cp = at(path, "conn");
  const json& cj = array_of(required(j, path, "conn"), cp, n);
  Tensor3<Poly> conn(n, Poly(n));
  for (std::size_t i = 0; i < n; ++i) {
    array_of(cj[i], at(cp, i), n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::string ep = at(at(cp, i), k);
      array_of(cj[i][k], ep, n);
      for (std::size_t s = 0; s < n; ++s) conn(i, k, s) = parse_poly(cj[i][k][s], at(ep, s), n);
    }
  }

  std::vector<Tail> tails;
  if (j.contains("tails")) {
    const std::string tp = at(path, "tails");
    const json& tj = array_of(j["tails"], tp);
    for (std::size_t a = 0; a < tj.size(); ++a) {
      const std::string ap = at(tp, a);
      check_keys(tj[a], ap, {"sign", "weight", "affinor"});
      Tail t;
      t.sign = parse_sign(required(tj[a], ap, "sign"), at(ap, "sign"));
      if (tj[a].contains("weight")) {
        t.weight = parse_rational(tj[a]["weight"], at(ap, "weight"));
        if (t.weight.sign() <= 0) fail(at(ap, "weight"), "weight must be positive");
      }
      t.affinor = parse_poly_matrix(required(tj[a], ap, "affinor"), at(ap, "affinor"), n);
      tails.push_back(std::move(t));
    }
  }
  return HydroBracket(std::move(metric), std::move(conn), std::move(tails));
}

FourierSeries parse_series(const json& j, const std::string& path) {
  check_keys(j, path, {"mean", "cos", "sin"});
  FourierSeries s;
  if (j.contains("mean")) s.mean = parse_double(j["mean"], at(path, "mean"));
  for (const char* key : {"cos", "sin"}) {
    if (!j.contains(key)) continue;
    const std::string kp = at(path, key);
    const json& a = array_of(j[key], kp);
    auto& dst = std::string_view(key) == "cos" ? s.cos : s.sin;
    for (std::size_t k = 0; k < a.size(); ++k) dst.push_back(parse_double(a[k], at(kp, k)));
  }
  return s;
}

SimulationSpec parse_simulation(const json& j, const std::string& path, std::size_t n) {
  check_keys(j, path, {"M", "dt", "steps", "flow", "initial", "snapshot_every", "drift_tolerance"});
  SimulationSpec s;
  if (j.contains("M")) s.m = parse_count(j["M"], at(path, "M"), 16);
  if (j.contains("dt")) {
    s.dt = parse_double(j["dt"], at(path, "dt"));
    if (s.dt <= 0.0) fail(at(path, "dt"), "dt must be positive");
  }
  if (j.contains("steps")) s.steps = parse_count(j["steps"], at(path, "steps"), 1);
  if (j.contains("flow")) s.flow = static_cast<int>(parse_count(j["flow"], at(path, "flow"), 1));
  if (j.contains("snapshot_every")) s.snapshot_every = parse_count(j["snapshot_every"], at(path, "snapshot_every"), 0);
  if (j.contains("drift_tolerance")) {
    s.drift_tolerance = parse_double(j["drift_tolerance"], at(path, "drift_tolerance"));
  }
  if (j.contains("initial")) {
    const std::string ip = at(path, "initial");
    const json& ij = array_of(j["initial"], ip, n);
    for (std::size_t i = 0; i < n; ++i) s.initial.push_back(parse_series(ij[i], at(ip, i)));
  }
  return s;
}

bool needs_canonical(Mode m) {
  return m == Mode::CheckIntegrability || m == Mode::BuildCanonical || m == Mode::Flow || m == Mode::Simulate ||
         m == Mode::Involution;
}

// ---- rendering of module results ------------------------------------------

std::vector<std::string> names_for(const Poly& p, std::size_t n) {
  if (p.nvars() == 2 * n) return jet_space_names(n);
  return {};
}

ojson violation_json(const Violation& v, std::size_t n) {
  ojson idx = ojson::array();
  for (std::size_t i : v.indices) idx.push_back(i + 1);
  ojson out;
  out["relation"] = std::string(relation_name(v.relation));
  out["indices"] = std::move(idx);
  out["residual"] = v.residual.str(names_for(v.residual, n));
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

void add_violations(Report& r, const ViolationReport& rep, std::size_t n) {
  for (const Violation& v : rep.entries) r.violations.push_back(violation_json(v, n));
}

ojson poly_list_json(const std::vector<Poly>& ps) {
  ojson out = ojson::array();
  for (const Poly& p : ps) out.push_back(p.str());
  return out;
}

ojson poly_matrix_json(const Matrix<Poly>& m) {
  ojson out = ojson::array();
  for (std::size_t i = 0; i < m.extent(); ++i) {
    ojson row = ojson::array();
    for (std::size_t k = 0; k < m.extent(); ++k) row.push_back(m(i, k).str());
    out.push_back(std::move(row));
  }
  return out;
}

ojson rational_matrix_json(const Matrix<Rational>& m) {
  ojson out = ojson::array();
  for (std::size_t i = 0; i < m.extent(); ++i) {
    ojson row = ojson::array();
    for (std::size_t k = 0; k < m.extent(); ++k) row.push_back(m(i, k).str());
    out.push_back(std::move(row));
  }
  return out;
}

ojson bracket_json(const HydroBracket& b) {
  const std::size_t n = b.nvars();
  ojson out;
  out["metric"] = poly_matrix_json(b.metric());
  ojson conn = ojson::array();
  for (std::size_t i = 0; i < n; ++i) {
    ojson row = ojson::array();
    for (std::size_t k = 0; k < n; ++k) {
      ojson col = ojson::array();
      for (std::size_t s = 0; s < n; ++s) col.push_back(b.conn()(i, k, s).str());
      row.push_back(std::move(col));
    }
    conn.push_back(std::move(row));
  }
  out["conn"] = std::move(conn);
  ojson tails = ojson::array();
  for (const Tail& t : b.tails()) {
    ojson tj;
    tj["sign"] = t.sign;
    tj["weight"] = t.weight.str();
    tj["affinor"] = poly_matrix_json(t.affinor);
    tails.push_back(std::move(tj));
  }
  out["tails"] = std::move(tails);
  return out;
}

ojson point_json(std::span<const Rational> p) {
  ojson out = ojson::array();
  for (const Rational& x : p) out.push_back(x.str());
  return out;
}

// ---- modes ------------------------------------------------------------------

HydroBracket payload_bracket(const ProblemSpec& s) {
  return s.bracket ? *s.bracket : canonical_bracket(*s.canonical);
}

const ConstantBracket& payload_eta(const ProblemSpec& s) { return s.canonical ? s.canonical->eta : *s.eta; }

void run_check_bracket(const ProblemSpec& s, Report& r) {
  const HydroBracket b = payload_bracket(s);
  add_violations(r, check_poisson(b), b.nvars());
  ojson geometry = ojson::array();
  std::vector<std::vector<Rational>> points;
  try {
    points = nondegenerate_points(b, s.seed, s.samples);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMetric) throw;
    r.artifacts["geometry"] = "skipped: metric degenerate at every sample point";
  }
  for (const auto& p : points) {
    const GeometryReport g = classify_geometry(b, p);
    ojson gj;
    gj["point"] = point_json(p);
    gj["class"] = std::string(geometry_class_name(g.classification));
    gj["K"] = g.curvature_constant.str();
    gj["levi_civita"] = g.levi_civita();
    if (!b.tails().empty()) {
      ojson fer = ojson::array();
      for (const Violation& v : check_ferapontov_conditions(b, p).entries) fer.push_back(violation_json(v, b.nvars()));
      gj["ferapontov"] = std::move(fer);
    }
    geometry.push_back(std::move(gj));
  }
  if (!points.empty()) r.artifacts["geometry"] = std::move(geometry);
}

void run_check_compat(const ProblemSpec& s, Report& r) {
  const HydroBracket b = payload_bracket(s);
  const CompatibilityReport c = check_compatibility(payload_eta(s), b, /*require_poisson=*/true);
  add_violations(r, c.relations, b.nvars());
  ojson bw = ojson::array();
  for (const Violation& v : c.bw.entries) bw.push_back(violation_json(v, b.nvars()));
  r.artifacts["bw"] = std::move(bw);
}

void run_build_canonical(const ProblemSpec& s, Report& r) {
  const HydroBracket b = canonical_bracket(*s.canonical);
  add_violations(r, check_poisson(b), b.nvars());
  r.artifacts["bracket"] = bracket_json(b);
}

void run_reconstruct(const ProblemSpec& s, Report& r) {
  const HydroBracket b = payload_bracket(s);
  const ConstantBracket& eta = payload_eta(s);
  const CompatibilityReport c = check_compatibility(eta, b);
  add_violations(r, c.relations, b.nvars());
  if (!c.compatible()) return;
  const PotentialChain chain = reconstruct_potentials(b, eta);
  r.artifacts["F"] = poly_list_json(chain.F);
  r.artifacts["psi"] = poly_list_json(chain.psi);
  r.artifacts["signs"] = chain.signs;
  r.artifacts["P"] = poly_matrix_json(chain.P);
  r.artifacts["c"] = rational_matrix_json(chain.c);
}

// Integrability failures are ordinary "fail" results in every mode that
// needs integrable data; only then do the later stages run.
bool integrable(const ProblemSpec& s, Report& r) {
  const ViolationReport rep = check_integrability(*s.canonical);
  add_violations(r, rep, s.nvars);
  return rep.empty();
}

void run_flow(const ProblemSpec& s, Report& r) {
  if (!integrable(s, r)) return;
  const FlowSystem f = flow1(*s.canonical);
  add_violations(r, verify_bihamiltonian(*s.canonical, f), s.nvars);
  r.artifacts["flux"] = poly_list_json(f.flux);
  r.artifacts["char_matrix"] = poly_matrix_json(f.char_matrix);
  r.artifacts["h1"] = f.h1_density.str();
  r.artifacts["h2"] = f.h2_density.str();
}

void run_simulate(const ProblemSpec& s, const RunOptions& o, Report& r) {
  if (!integrable(s, r)) return;
  const SimulationSpec& sim = *s.simulation;
  const SpectralModel model(*s.canonical, sim.m);
  std::vector<FourierSeries> init = sim.initial;
  if (init.empty()) init.assign(s.nvars, FourierSeries{0.0, {}, {0.1}});
  const FieldState u0 = model.sample(init);
  const IntegrationResult res = integrate(model, sim.flow, u0, sim.dt, sim.steps, {sim.snapshot_every});

  ojson fs = ojson::array();
  for (std::size_t f = 0; f < res.series.names.size(); ++f) {
    const double drift = res.series.relative_drift(f);
    ojson fj;
    fj["name"] = res.series.names[f];
    fj["initial"] = res.series.values[f].front();
    fj["final"] = res.series.values[f].back();
    fj["relative_drift"] = drift;
    fs.push_back(std::move(fj));
    if (sim.drift_tolerance && drift > *sim.drift_tolerance) {
      ojson v;
      v["relation"] = "drift";
      v["indices"] = ojson::array({f + 1});
      v["residual"] = drift;
      v["note"] = res.series.names[f] + " drifts beyond tolerance";
      r.violations.push_back(std::move(v));
    }
  }
  r.artifacts["M"] = sim.m;
  r.artifacts["dt"] = sim.dt;
  r.artifacts["steps"] = sim.steps;
  r.artifacts["flow"] = sim.flow;
  r.artifacts["final_time"] = res.trajectory.back().time;
  r.artifacts["functionals"] = std::move(fs);
  r.artifacts["warnings"] = res.warnings;

  if (!o.csv_path.empty()) {
    std::ofstream csv(o.csv_path);
    if (!csv) throw Error(ErrorCode::Io, "cannot open " + o.csv_path);
    write_conservation_csv(csv, res.series);
    if (!csv) throw Error(ErrorCode::Io, "failed writing " + o.csv_path);
  }
}

void run_involution(const ProblemSpec& s, Report& r) {
  if (!integrable(s, r)) return;
  const CanonicalData& d = *s.canonical;
  const std::size_t n = d.nvars();
  add_violations(r, casimir_momentum_involution(d), n);

  // Numeric cross-check at seeded smooth states.
  const std::size_t m = s.simulation ? s.simulation->m : 128;
  const SpectralModel model(d, m);
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> coeff(-0.2, 0.2);
  std::vector<HamiltonianDensity> fs;
  for (std::size_t i = 0; i < n; ++i) fs.push_back({Poly::variable(n, i)});
  fs.push_back({model.flow_system().h1_density});
  double worst = 0.0;
  for (std::size_t trial = 0; trial < s.samples; ++trial) {
    std::vector<FourierSeries> comps;
    for (std::size_t i = 0; i < n; ++i) comps.push_back({coeff(rng), {coeff(rng), coeff(rng)}, {coeff(rng), coeff(rng)}});
    const FieldState u = model.sample(comps);
    for (std::size_t a = 0; a < fs.size(); ++a) {
      for (std::size_t b = a; b < fs.size(); ++b) {
        worst = std::max(worst, std::abs(bracket_quadrature(model, fs[a], fs[b], u, 1)));
      }
    }
  }
  constexpr double kTol = 1e-10;
  if (worst >= kTol) {
    ojson v;
    v["relation"] = "involution-numeric";
    v["indices"] = ojson::array();
    v["residual"] = worst;
    v["note"] = "largest quadrature bracket";
    r.violations.push_back(std::move(v));
  }
  r.artifacts["numeric_max"] = worst;
  r.artifacts["numeric_states"] = s.samples;
}

}  // namespace

SpecError::SpecError(ErrorCode code, std::string path, const std::string& message)
    : Error(code, path + ": " + message), path_(std::move(path)) {}

std::string_view mode_name(Mode m) {
  for (const auto& [mode, name] : kModes) {
    if (mode == m) return name;
  }
  return "?";
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
  }
  return "?";
}

int Report::exit_code() const {
  switch (status) {
    case Status::Pass: return 0;
    case Status::Fail: return 1;
    case Status::Error: return 2;
  }
  return 2;
}

ProblemSpec parse_spec(std::string_view text) {
  const json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) fail("$", "malformed JSON");
  const std::string root = "$";
  check_keys(doc, root,
             {"$schema", "description", "mode", "nvars", "canonical", "bracket", "eta", "simulation", "seed", "samples"});

  ProblemSpec s;
  const json& mj = required(doc, root, "mode");
  if (!mj.is_string()) fail(at(root, "mode"), "expected a string");
  bool known = false;
  for (const auto& [mode, name] : kModes) {
    if (mj.get<std::string>() == name) {
      s.mode = mode;
      known = true;
    }
  }
  if (!known) fail(at(root, "mode"), "unknown mode '" + mj.get<std::string>() + "'");

  if (doc.contains("canonical") == doc.contains("bracket")) {
    fail(root, "exactly one of 'canonical' and 'bracket' is required");
  }
  if (doc.contains("canonical")) {
    if (doc.contains("eta")) fail(at(root, "eta"), "eta belongs inside 'canonical'");
    s.canonical = parse_canonical(doc["canonical"], at(root, "canonical"));
    s.nvars = s.canonical->nvars();
  } else {
    if (needs_canonical(s.mode)) fail(at(root, "canonical"), "mode requires canonical data");
    s.bracket = parse_bracket(doc["bracket"], at(root, "bracket"));
    s.nvars = s.bracket->nvars();
    if (doc.contains("eta")) {
      s.eta = parse_eta(doc["eta"], at(root, "eta"));
      if (s.eta->nvars() != s.nvars) fail(at(root, "eta"), "size differs from the bracket");
    } else if (s.mode == Mode::CheckCompat || s.mode == Mode::Reconstruct) {
      fail(at(root, "eta"), "missing required key");
    }
  }
  if (doc.contains("nvars") && parse_count(doc["nvars"], at(root, "nvars"), 1) != s.nvars) {
    fail(at(root, "nvars"), "does not match the payload dimension " + std::to_string(s.nvars));
  }
  if (doc.contains("simulation")) {
    s.simulation = parse_simulation(doc["simulation"], at(root, "simulation"), s.nvars);
  } else if (s.mode == Mode::Simulate) {
    fail(at(root, "simulation"), "missing required key");
  }
  if (doc.contains("seed")) s.seed = parse_count(doc["seed"], at(root, "seed"), 0);
  if (doc.contains("samples")) s.samples = parse_count(doc["samples"], at(root, "samples"), 1);
  return s;
}

Report run(const ProblemSpec& spec, const RunOptions& options) {
  Report r;
  r.mode = std::string(mode_name(spec.mode));
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (spec.mode) {
      case Mode::CheckBracket: run_check_bracket(spec, r); break;
      case Mode::CheckCompat: run_check_compat(spec, r); break;
      case Mode::CheckIntegrability: integrable(spec, r); break;
      case Mode::BuildCanonical: run_build_canonical(spec, r); break;
      case Mode::Reconstruct: run_reconstruct(spec, r); break;
      case Mode::Flow: run_flow(spec, r); break;
      case Mode::Simulate: run_simulate(spec, options, r); break;
      case Mode::Involution: run_involution(spec, r); break;
    }
    r.status = r.violations.empty() ? Status::Pass : Status::Fail;
  } catch (const Error& e) {
    r.status = Status::Error;
    r.error_code = std::string(error_code_name(e.code()));
    r.error_message = e.what();
    r.violations = ojson::array();
    r.artifacts = ojson::object();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Report run_text(std::string_view text, const RunOptions& options) {
  try {
    ProblemSpec spec = parse_spec(text);
    if (options.seed) spec.seed = *options.seed;
    return run(spec, options);
  } catch (const SpecError& e) {
    Report r;
    const json doc = json::parse(text, nullptr, false);
    if (doc.is_object() && doc.contains("mode") && doc["mode"].is_string()) r.mode = doc["mode"].get<std::string>();
    r.status = Status::Error;
    r.error_code = std::string(error_code_name(e.code()));
    r.error_message = e.what();
    r.error_path = e.path();
    return r;
  } catch (const Error& e) {
    Report r;
    r.status = Status::Error;
    r.error_code = std::string(error_code_name(e.code()));
    r.error_message = e.what();
    return r;
  }
}

std::string render(const Report& r, Format f, bool with_timing) {
  if (f == Format::Json) {
    ojson out;
    out["status"] = std::string(status_name(r.status));
    out["mode"] = r.mode;
    if (r.status == Status::Error) {
      ojson err;
      err["code"] = r.error_code;
      err["message"] = r.error_message;
      if (!r.error_path.empty()) err["path"] = r.error_path;
      out["error"] = std::move(err);
    }
    out["violations"] = r.violations;
    out["artifacts"] = r.artifacts;
    if (with_timing) out["timing"] = {{"seconds", r.seconds}};
    return out.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "status: " << status_name(r.status) << "\n";
  if (!r.mode.empty()) os << "mode: " << r.mode << "\n";
  if (r.status == Status::Error) os << "error: " << r.error_code << ": " << r.error_message << "\n";
  os << "violations: " << r.violations.size() << "\n";
  for (const auto& v : r.violations) {
    os << "  (" << v["relation"].get<std::string>() << ")";
    for (const auto& i : v["indices"]) os << " " << i.get<std::size_t>();
    os << ": " << (v["residual"].is_string() ? v["residual"].get<std::string>() : v["residual"].dump());
    if (v.contains("note")) os << "  [" << v["note"].get<std::string>() << "]";
    os << "\n";
  }
  for (const auto& [key, value] : r.artifacts.items()) os << key << ": " << value.dump() << "\n";
  if (with_timing) os << "seconds: " << r.seconds << "\n";
  return os.str();
}

}  // namespace pencil::cli
