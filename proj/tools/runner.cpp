#include "runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "orbitlab/constructions.hpp"
#include "orbitlab/density.hpp"
#include "orbitlab/equidistribution.hpp"
#include "orbitlab/serialization.hpp"

namespace orbitlab::cli {

std::string to_string(Status s) {
  switch (s) {
    case Status::Ok:
      return "OK";
    case Status::Certified:
      return "CERTIFIED";
    case Status::Failed:
      return "FAILED";
    case Status::Indeterminate:
      return "INDETERMINATE";
  }
  return "?";
}

int exit_code(Status s) {
  switch (s) {
    case Status::Ok:
    case Status::Certified:
      return 0;
    case Status::Failed:
      return 2;
    case Status::Indeterminate:
      return 3;
  }
  return 1;
}

Json RunReport::to_json() const {
  Json tables_json = Json::object();
  for (const auto& [name, t] : tables) tables_json[name] = Json{{"columns", t.columns}, {"rows", t.rows.size()}};
  return Json{{"config", config},
              {"status", cli::to_string(status)},
              {"summary", summary},
              {"tables", tables_json},
              {"artifacts", artifacts},
              {"wall_seconds", wall_seconds},
              {"precision_retries", precision_retries}};
}

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"construct", "hits",          "avoid",           "discrepancy",
                                              "koksma",    "lattice",       "certify-growth",  "random-rotations"};
  return kinds;
}

// ------------------------------------------------------------------ schema

namespace {

using Check = std::function<bool(const Json&)>;

bool is_count(const Json& j) { return j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0); }
bool is_rational_like(const Json& j) { return j.is_string() || j.is_number_integer() || j.is_number_float(); }
bool is_string(const Json& j) { return j.is_string(); }
bool is_object(const Json& j) { return j.is_object(); }
bool is_bool(const Json& j) { return j.is_boolean(); }
bool is_shift(const Json& j) { return j.is_string() || j.is_object(); }
bool is_string_list(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if (!e.is_string()) return false;
  }
  return true;
}
bool is_count_list(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if (!is_count(e)) return false;
  }
  return true;
}
bool is_object_list(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if (!e.is_object()) return false;
  }
  return true;
}
bool is_int_list(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if (!e.is_number_integer()) return false;
  }
  return true;
}
bool is_growth_f(const Json& j) { return j.is_string() || j.is_object(); }

const std::map<std::string, Check>& common_fields() {
  static const std::map<std::string, Check> m{{"experiment", is_string}, {"precision", is_count},
                                              {"seed", is_count},        {"threads", is_count},
                                              {"output", is_object}};
  return m;
}

const std::map<std::string, std::map<std::string, Check>>& kind_fields() {
  static const std::map<std::string, std::map<std::string, Check>> m{
      {"construct", {{"bundle", is_string}, {"horizon", is_count}}},
      {"hits",
       {{"bundle", is_string},
        {"shift", is_shift},
        {"vector", is_object},
        {"phase", is_object},
        {"torus", is_object_list},
        {"target", is_object},
        {"epsilon", is_rational_like},
        {"horizon", is_count},
        {"window", is_count},
        {"recheck", is_bool}}},
      {"avoid",
       {{"bundle", is_string},
        {"shift", is_shift},
        {"vector", is_object},
        {"phase", is_object},
        {"torus", is_object_list},
        {"forbidden", is_object},
        {"delta", is_rational_like},
        {"horizon", is_count}}},
      {"discrepancy",
       {{"seq", is_string}, {"phase", is_object}, {"N", is_count}, {"prefix", is_count_list}, {"weyl", is_int_list}}},
      {"koksma", {{"f", is_growth_f}, {"samples", is_count}, {"N", is_count}, {"theta", is_rational_like}}},
      {"lattice", {{"polys", is_string_list}}},
      {"certify-growth",
       {{"f", is_string}, {"d", is_count}, {"k_max", is_count}, {"n_grid", is_count_list}, {"threshold", is_rational_like}}},
      {"random-rotations",
       {{"shift", is_shift},
        {"vector", is_object},
        {"target", is_object},
        {"epsilon", is_rational_like},
        {"horizon", is_count},
        {"samples", is_count},
        {"window", is_count}}},
  };
  return m;
}

}  // namespace

void validate_config(const Json& config) {
  if (!config.is_object()) throw ConfigInvalid("config must be a JSON object");
  if (!config.contains("experiment") || !config["experiment"].is_string()) {
    throw ConfigInvalid("config needs a string field 'experiment'");
  }
  const std::string kind = config["experiment"].get<std::string>();
  const auto& kinds = kind_fields();
  auto it = kinds.find(kind);
  if (it == kinds.end()) throw ConfigInvalid("unknown experiment '" + kind + "'");
  for (const auto& [key, value] : config.items()) {
    const Check* check = nullptr;
    if (auto c = common_fields().find(key); c != common_fields().end()) check = &c->second;
    if (auto c = it->second.find(key); c != it->second.end()) check = &c->second;
    if (!check) throw ConfigInvalid("unknown field '" + key + "' for experiment '" + kind + "'");
    if (!(*check)(value)) throw ConfigInvalid("field '" + key + "' has the wrong type");
  }
  if (config.contains("output")) {
    for (const auto& [key, value] : config["output"].items()) {
      if (key != "dir" && key != "prefix") throw ConfigInvalid("unknown field 'output." + key + "'");
      if (!value.is_string()) throw ConfigInvalid("field 'output." + key + "' must be a string");
    }
  }
}

// ----------------------------------------------------------------- helpers

namespace {

std::string fmt(const Real& r, mpfr_rnd_t rnd) {
  if (!r.is_finite()) return r.to_string();
  char* buf = nullptr;
  if (rnd == MPFR_RNDD) {
    mpfr_asprintf(&buf, "%.17RDg", r.raw());
  } else {
    mpfr_asprintf(&buf, "%.17RUg", r.raw());
  }
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

std::string lo_text(const RealInterval& x) { return fmt(x.lo(), MPFR_RNDD); }
std::string hi_text(const RealInterval& x) { return fmt(x.hi(), MPFR_RNDU); }

std::string turn_text(const Turn& t) {
  std::ostringstream os;
  os.precision(17);
  os << t.as_interval(64).mid_double();
  return os.str();
}

std::string text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

BigRational rational_field(const Json& c, const char* key, const BigRational& fallback) {
  if (!c.contains(key)) return fallback;
  const Json& v = c[key];
  // Floats go through their shortest round-trip decimal, so 0.49 means 49/100.
  return parse_rational(text(v));
}

std::uint64_t count_field(const Json& c, const char* key, std::uint64_t fallback) {
  return c.contains(key) ? c[key].get<std::uint64_t>() : fallback;
}

unsigned precision_of(const Json& c) {
  const auto p = count_field(c, "precision", default_precision());
  if (p < kMinPrecision) throw ConfigInvalid("precision must be at least " + std::to_string(kMinPrecision));
  return static_cast<unsigned>(p);
}

struct Setup {
  OrbitSetup orbit;
  std::optional<Bundle> bundle;
};

Setup setup_of(const Json& c, std::uint64_t horizon) {
  Setup s;
  if (c.contains("bundle")) {
    s.bundle = assemble_bundle(c["bundle"].get<std::string>(), horizon);
    s.orbit = s.bundle->setup();
  } else {
    s.orbit.T = c.contains("shift") ? shift_from_json(c["shift"]) : WeightedShift::constant(2);
    if (!c.contains("vector")) throw ConfigInvalid("need 'vector' or 'bundle'");
    s.orbit.x = block_vector_from_json(c["vector"]);
    s.orbit.phase = c.contains("phase") ? phase_from_json(c["phase"]) : PhaseSeq::constant(Turn::exact(0));
  }
  if (c.contains("phase") && s.bundle) s.orbit.phase = phase_from_json(c["phase"]);
  if (c.contains("torus")) {
    s.orbit.torus.clear();
    for (const auto& t : c["torus"]) s.orbit.torus.push_back(phase_from_json(t));
  }
  return s;
}

Table density_table(const DensityCurve& curve) {
  Table t{{"n", "density"}, {}};
  for (std::uint64_t n = 1; n <= curve.N; ++n) {
    std::ostringstream os;
    os.precision(17);
    os << curve.curve[n - 1].get_d();
    t.rows.push_back({std::to_string(n), os.str()});
  }
  return t;
}

// ------------------------------------------------------------- experiments

void run_construct(const Json& c, RunReport& rep) {
  const std::string name = c.value("bundle", std::string("prop41"));
  const std::uint64_t horizon = count_field(c, "horizon", 1000);
  const Bundle b = assemble_bundle(name, horizon);
  const Json descriptor = orbitlab::to_json(b);
  const Bundle again = bundle_from_json(descriptor);
  const bool replay = orbitlab::to_json(again) == descriptor;
  rep.summary = Json{{"bundle", descriptor}, {"replay_identical", replay}};
  rep.status = replay ? Status::Ok : Status::Failed;
  if (b.adversarial) {
    Table t{{"n", "alpha", "in_A"}, {}};
    for (std::uint64_t n = 0; n < b.adversarial->alphas.size(); ++n) {
      t.rows.push_back({std::to_string(n), orbitlab::to_string(b.adversarial->alphas[n]),
                        b.adversarial->in_A(n) ? "1" : "0"});
    }
    rep.tables["alphas"] = std::move(t);
  }
}

void run_hits(const Json& c, RunReport& rep) {
  const std::uint64_t horizon = count_field(c, "horizon", 1000);
  const Setup s = setup_of(c, horizon);
  ProductPoint target;
  if (c.contains("target")) {
    target = point_from_json(c["target"]);
  } else if (s.bundle) {
    target = s.bundle->forbidden;
  } else {
    throw ConfigInvalid("hits needs 'target'");
  }
  HitOptions opt;
  opt.window = count_field(c, "window", 0);
  opt.precision = precision_of(c);
  opt.recheck = c.value("recheck", true);
  opt.threads = static_cast<unsigned>(count_field(c, "threads", 1));
  const BigRational eps = rational_field(c, "epsilon", BigRational(1, 10));
  const HitReport hr = hit_search(s.orbit, target, eps, horizon, opt);
  rep.summary = orbitlab::to_json(hr);
  rep.summary["hit_count"] = hr.hits.size();
  Table t{{"n", "dist_lo", "dist_hi"}, {}};
  std::vector<std::uint64_t> A;
  for (const auto& h : hr.hits) {
    t.rows.push_back({std::to_string(h.n), lo_text(h.distance), hi_text(h.distance)});
    A.push_back(h.n);
  }
  rep.tables["hits"] = std::move(t);
  const DensityCurve curve = lower_density_curve(A, horizon);
  rep.summary["lower_density_proxy"] = orbitlab::to_string(curve.lower_density_proxy());
  rep.tables["density"] = density_table(curve);
  if (!hr.contradictions.empty()) {
    rep.status = Status::Failed;
  } else if (!hr.indeterminate.empty()) {
    rep.status = Status::Indeterminate;
  }
}

void run_avoid(const Json& c, RunReport& rep) {
  const std::uint64_t horizon = count_field(c, "horizon", 1000);
  const Setup s = setup_of(c, horizon);
  ProductPoint forbidden;
  BigRational delta;
  if (s.bundle) {
    forbidden = s.bundle->forbidden;
    delta = s.bundle->delta;
  }
  if (c.contains("forbidden")) forbidden = point_from_json(c["forbidden"]);
  if (c.contains("delta")) delta = rational_field(c, "delta", delta);
  if (delta <= 0) throw ConfigInvalid("avoid needs 'delta' > 0");
  AvoidOptions opt;
  opt.precision = precision_of(c);
  opt.threads = static_cast<unsigned>(count_field(c, "threads", 1));
  if (s.bundle && s.bundle->adversarial) {
    auto ad = std::make_shared<AdversarialPhase>(*s.bundle->adversarial);
    opt.in_A = [ad](std::uint64_t n) { return ad->in_A(n); };
  }
  const AvoidanceCertificate cert = avoid_certify(s.orbit, forbidden, delta, horizon, opt);
  rep.summary = orbitlab::to_json(cert);
  if (s.bundle) rep.summary["bundle"] = orbitlab::to_json(*s.bundle);
  rep.precision_retries = cert.precision_retries;
  Table t{{"n", "dist_lo", "dist_hi", "in_A", "phase_turn", "rule"}, {}};
  for (const auto& r : cert.rows) {
    t.rows.push_back({std::to_string(r.n), lo_text(r.distance), hi_text(r.distance),
                      r.in_A ? (*r.in_A ? "1" : "0") : "", turn_text(r.phase_turn), orbitlab::to_string(r.rule)});
  }
  rep.tables["distance"] = std::move(t);
  switch (cert.status) {
    case AvoidStatus::Certified:
      rep.status = Status::Certified;
      break;
    case AvoidStatus::Failed:
      rep.status = Status::Failed;
      break;
    case AvoidStatus::Indeterminate:
      rep.status = Status::Indeterminate;
      break;
  }
}

void run_discrepancy(const Json& c, RunReport& rep) {
  const std::uint64_t N = count_field(c, "N", 1000);
  const unsigned p = precision_of(c);
  PointSample sample;
  std::string label;
  if (c.contains("seq")) {
    label = c["seq"].get<std::string>();
    sample = sample_sequence(RealExpr::parse(label), N, p);
  } else if (c.contains("phase")) {
    label = c["phase"].dump();
    sample = sample_phases(phase_from_json(c["phase"]), N, p);
  } else {
    throw ConfigInvalid("discrepancy needs 'seq' or 'phase'");
  }
  const DiscrepancyReport d = star_discrepancy(sample, p);
  rep.summary = Json{{"sequence", label},
                     {"N", N},
                     {"method", d.method},
                     {"dstar_lo", lo_text(d.dstar)},
                     {"dstar_hi", hi_text(d.dstar)}};
  if (d.exact) rep.summary["dstar_exact"] = orbitlab::to_string(*d.exact);
  std::vector<std::size_t> Ms;
  if (c.contains("prefix")) {
    for (const auto& m : c["prefix"]) Ms.push_back(m.get<std::size_t>());
  } else {
    for (std::size_t m = 10; m < N; m *= 10) Ms.push_back(m);
    Ms.push_back(N);
  }
  std::sort(Ms.begin(), Ms.end());
  Ms.erase(std::unique(Ms.begin(), Ms.end()), Ms.end());
  Ms.erase(std::remove_if(Ms.begin(), Ms.end(), [N](std::size_t m) { return m == 0 || m > N; }), Ms.end());
  Table t{{"N", "dstar_lo", "dstar_hi"}, {}};
  const auto curve = discrepancy_prefix_curve(sample, Ms, p);
  for (std::size_t i = 0; i < Ms.size(); ++i) {
    t.rows.push_back({std::to_string(Ms[i]), lo_text(curve[i].dstar), hi_text(curve[i].dstar)});
  }
  rep.tables["prefix"] = std::move(t);
  if (c.contains("weyl")) {
    Table w{{"h", "weyl_lo", "weyl_hi"}, {}};
    for (const auto& h : c["weyl"]) {
      const RealInterval v = weyl_sum(sample, h.get<long>(), p);
      w.rows.push_back({std::to_string(h.get<long>()), lo_text(v), hi_text(v)});
    }
    rep.tables["weyl"] = std::move(w);
  }
}

void run_koksma(const Json& c, RunReport& rep) {
  KoksmaSequence f;
  if (c.contains("f")) {
    const Json& fj = c["f"];
    if (fj.is_string()) {
      f.kind = KoksmaKind::Expression;
      f.expr = RealExpr::parse(fj.get<std::string>());
    } else {
      for (const auto& [k, v] : fj.items()) {
        if (k != "c" && k != "a") throw ConfigInvalid("unknown field 'f." + k + "'");
      }
      if (fj.contains("c")) f.c = BigInt(text(fj["c"]));
      if (fj.contains("a")) f.a = BigInt(text(fj["a"]));
    }
  }
  KoksmaOptions opt;
  opt.samples = count_field(c, "samples", 100);
  opt.N = count_field(c, "N", 10000);
  opt.seed = count_field(c, "seed", 1);
  opt.threads = static_cast<unsigned>(count_field(c, "threads", 1));
  opt.precision = static_cast<unsigned>(count_field(c, "precision", 64));
  if (c.contains("theta")) opt.forced_theta = rational_field(c, "theta", 0);
  const KoksmaReport r = koksma_sample(f, opt);
  rep.summary = Json{{"sequence", r.sequence},
                     {"N", r.N},
                     {"seed", r.seed},
                     {"samples", r.samples.size()},
                     {"min_gap", orbitlab::to_string(r.min_gap)},
                     {"quantiles", r.quantiles},
                     {"below_0.05", r.count_below(0.05)}};
  Table t{{"sample", "theta", "dstar_lo", "dstar_hi"}, {}};
  for (const auto& s : r.samples) {
    t.rows.push_back({std::to_string(s.index), s.theta_tag, lo_text(s.report.dstar), hi_text(s.report.dstar)});
  }
  rep.tables["samples"] = std::move(t);
}

void run_lattice(const Json& c, RunReport& rep) {
  std::vector<SymbolicPoly> P;
  std::vector<std::string> texts;
  for (const auto& p : c.at("polys")) {
    texts.push_back(p.get<std::string>());
    P.push_back(SymbolicPoly::parse(texts.back()));
  }
  const RelationLattice lat = relation_lattice(P);
  Json basis = Json::array();
  Table t{{"row"}, {}};
  for (std::size_t j = 0; j < P.size(); ++j) t.columns.push_back("h" + std::to_string(j + 1));
  for (std::size_t i = 0; i < lat.basis.size(); ++i) {
    Json row = Json::array();
    std::vector<std::string> cells{std::to_string(i + 1)};
    for (const auto& v : lat.basis[i]) {
      row.push_back(v.get_str());
      cells.push_back(v.get_str());
    }
    Json witness = Json::array();
    for (const auto& q : lat.witnesses[i]) witness.push_back(orbitlab::to_string(q));
    basis.push_back(Json{{"h", row}, {"pi_coefficients", witness}});
    t.rows.push_back(std::move(cells));
  }
  rep.summary = Json{{"polys", texts},
                     {"rank", lat.rank()},
                     {"verdict", lat.independent() ? "independent" : "dependent"},
                     {"basis", basis}};
  bool constant_free = true;
  for (const auto& p : P) constant_free = constant_free && !p.has_constant();
  if (constant_free) {
    const SubtorusModel m = closure_model(P);
    Json rels = Json::array();
    for (const auto& r : m.relations) {
      Json a = Json::array();
      for (const auto& v : r.a) a.push_back(v.get_str());
      Json q = Json::array();
      for (const auto& v : r.q) q.push_back(orbitlab::to_string(v));
      rels.push_back(Json{{"j", r.j + 1}, {"m", r.m.get_str()}, {"a", a}, {"pi_q", q}});
    }
    Json indep = Json::array();
    for (auto j : m.independent) indep.push_back(j + 1);
    rep.summary["closure"] = Json{{"dimension", m.p()},
                                  {"independent", indep},
                                  {"relations", rels},
                                  {"M", m.M.get_str()},
                                  {"period", m.period.get_str()}};
  }
  rep.tables["basis"] = std::move(t);
}

void run_growth(const Json& c, RunReport& rep) {
  const RealExpr f = RealExpr::parse(c.value("f", std::string("sqrt(n)")));
  const std::uint64_t d = count_field(c, "d", 1);
  const std::uint64_t kmax = count_field(c, "k_max", 5);
  std::vector<std::uint64_t> grid;
  if (c.contains("n_grid")) {
    for (const auto& n : c["n_grid"]) grid.push_back(n.get<std::uint64_t>());
  } else {
    grid = {10, 100, 1000, 10000, 100000};
  }
  const BigRational threshold = rational_field(c, "threshold", BigRational(1, 20));
  const GrowthReport g = slow_growth_certify(f, d, kmax, grid, threshold, precision_of(c));
  rep.summary = Json{{"f", f.text()},
                     {"d", d},
                     {"k_max", kmax},
                     {"threshold", orbitlab::to_string(threshold)},
                     {"verdict", g.pass ? "PASS" : "FAIL"},
                     {"reason", g.reason}};
  Table t{{"n", "sup_eps_lo", "sup_eps_hi", "exact"}, {}};
  for (const auto& r : g.rows) {
    t.rows.push_back({std::to_string(r.n), lo_text(r.sup_abs_eps), hi_text(r.sup_abs_eps), r.exact ? "1" : "0"});
  }
  rep.tables["growth"] = std::move(t);
  rep.status = g.pass ? Status::Ok : Status::Failed;
}

void run_random_rotations(const Json& c, RunReport& rep) {
  const WeightedShift T = c.contains("shift") ? shift_from_json(c["shift"]) : WeightedShift::constant(2);
  if (!c.contains("vector") || !c.contains("target")) throw ConfigInvalid("random-rotations needs 'vector' and 'target'");
  const BlockVector x = block_vector_from_json(c["vector"]);
  const ProductPoint target = point_from_json(c["target"]);
  HitOptions opt;
  opt.window = count_field(c, "window", 0);
  opt.precision = precision_of(c);
  const RandomRotationReport r =
      random_rotation_experiment(T, x, target, rational_field(c, "epsilon", BigRational(1, 10)),
                                 count_field(c, "horizon", 100), count_field(c, "samples", 20),
                                 count_field(c, "seed", 1), opt);
  rep.summary = Json{{"seed", r.seed}, {"horizon", r.horizon}, {"hit_rate", r.hit_rate}, {"metric", r.metric_note}};
  Table t{{"sample", "hits", "best_n", "best_hi"}, {}};
  for (std::size_t i = 0; i < r.hits.size(); ++i) {
    const auto& b = r.best[i];
    t.rows.push_back({std::to_string(i), std::to_string(r.hits[i]), b ? std::to_string(b->n) : "",
                      b ? hi_text(b->distance) : ""});
  }
  rep.tables["samples"] = std::move(t);
}

void write_table(const Table& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

}  // namespace

RunReport run(const Json& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  rep.config = config;
  const std::string kind = config["experiment"].get<std::string>();
  try {
    if (kind == "construct") {
      run_construct(config, rep);
    } else if (kind == "hits") {
      run_hits(config, rep);
    } else if (kind == "avoid") {
      run_avoid(config, rep);
    } else if (kind == "discrepancy") {
      run_discrepancy(config, rep);
    } else if (kind == "koksma") {
      run_koksma(config, rep);
    } else if (kind == "lattice") {
      run_lattice(config, rep);
    } else if (kind == "certify-growth") {
      run_growth(config, rep);
    } else {
      run_random_rotations(config, rep);
    }
  } catch (const ParseError& e) {
    throw ConfigInvalid(e.what());
  } catch (const Json::exception& e) {
    throw ConfigInvalid(e.what());
  } catch (const PrecisionInsufficient& e) {
    rep.status = Status::Indeterminate;
    rep.summary["error"] = e.what();
  } catch (const AmbiguousSign& e) {
    rep.status = Status::Indeterminate;
    rep.summary["error"] = e.what();
  } catch (const RuleViolation& e) {
    rep.status = Status::Failed;
    rep.summary["error"] = e.what();
  }
  rep.summary["status"] = to_string(rep.status);

  if (config.contains("output")) {
    const Json& o = config["output"];
    const std::filesystem::path dir = o.value("dir", std::string("."));
    const std::string prefix = o.value("prefix", kind);
    std::filesystem::create_directories(dir);
    for (const auto& [name, table] : rep.tables) {
      const std::string path = (dir / (prefix + "_" + name + ".csv")).string();
      write_table(table, path);
      rep.artifacts.push_back(path);
    }
    const std::string json_path = (dir / (prefix + "_report.json")).string();
    rep.artifacts.push_back(json_path);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Json out = rep.to_json();
    out.erase("wall_seconds");
    std::ofstream f(json_path);
    f << out.dump(2) << "\n";
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

void emit_plot_data(const RunReport& report, const std::string& table, const std::vector<std::string>& columns,
                    const std::string& path) {
  auto it = report.tables.find(table);
  if (it == report.tables.end()) throw ConfigInvalid("missing-column: report has no table '" + table + "'");
  const Table& t = it->second;
  std::vector<std::size_t> idx;
  for (const auto& c : columns) {
    auto pos = std::find(t.columns.begin(), t.columns.end(), c);
    if (pos == t.columns.end()) throw ConfigInvalid("missing-column: '" + c + "' not in table '" + table + "'");
    idx.push_back(static_cast<std::size_t>(pos - t.columns.begin()));
  }
  Table out{columns, {}};
  for (const auto& row : t.rows) {
    std::vector<std::string> cells;
    for (auto i : idx) cells.push_back(row[i]);
    out.rows.push_back(std::move(cells));
  }
  write_table(out, path);
}

}  // namespace orbitlab::cli
