#pragma once

// Batch front end: schema-validated experiment configs (JSON), one function
// per command, deterministic artifacts on disk.
//
// Exit status convention: 0 ok, 1 verification failure, 2 usage/config
// error, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crosswedge/cross.hpp"
#include "crosswedge/disc_functional.hpp"
#include "crosswedge/extension.hpp"
#include "crosswedge/harmonic_measure.hpp"
#include "crosswedge/io.hpp"

namespace crosswedge {

using json = nlohmann::json;

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
};

namespace config {

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
}

inline void check_keys(const json& j, const std::string& path,
                       const std::set<std::string>& allowed) {
  require_object(j, path);
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw SchemaError(path + ": unknown key '" + key + "'");
    }
  }
}

inline const json* find(const json& j, const std::string& key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

inline double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path + ": expected a number");
  return j.get<double>();
}

inline std::uint64_t get_u64(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !j.is_number_integer()) {
    throw SchemaError(path + ": expected an integer");
  }
  const auto v = j.get<std::int64_t>();
  if (v < 0) throw SchemaError(path + ": expected a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

inline int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    throw SchemaError(path + ": expected an integer");
  }
  return j.get<int>();
}

inline std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path + ": expected a string");
  return j.get<std::string>();
}

inline Complex get_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    throw SchemaError(path + ": expected [re, im]");
  }
  return Complex(get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]"));
}

// Structured-text domain descriptor:
//   {"kind": "disc" | "polygon" | "slit_square",
//    "vertices": [[x, y], ...], "a": number, "arcs": [[t0, t1], ...]}
inline PlanarDomain parse_domain(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "vertices", "a", "arcs"});
  const json* kind = find(j, "kind");
  if (!kind) throw SchemaError(path + ": missing 'kind'");
  const std::string k = get_string(*kind, path + ".kind");
  if (k == "disc") return PlanarDomain::unit_disc();
  if (k == "slit_square") {
    const json* a = find(j, "a");
    if (!a) throw SchemaError(path + ": slit_square needs 'a'");
    return PlanarDomain::slit_square(get_number(*a, path + ".a"));
  }
  if (k == "polygon") {
    const json* verts = find(j, "vertices");
    if (!verts || !verts->is_array()) {
      throw SchemaError(path + ": polygon needs 'vertices'");
    }
    std::vector<Complex> vs;
    for (std::size_t i = 0; i < verts->size(); ++i) {
      vs.push_back(get_complex((*verts)[i], path + ".vertices"));
    }
    return PlanarDomain::polygon(std::move(vs));
  }
  throw SchemaError(path + ".kind: expected disc | polygon | slit_square");
}

inline ArcSet parse_arcs(const json& j, const std::string& path,
                         const PlanarDomain& owner) {
  const json* arcs = find(j, "arcs");
  if (!arcs) throw SchemaError(path + ": missing 'arcs'");
  if (!arcs->is_array()) throw SchemaError(path + ".arcs: expected an array");
  std::vector<Interval> ivs;
  for (std::size_t i = 0; i < arcs->size(); ++i) {
    const json& iv = (*arcs)[i];
    if (!iv.is_array() || iv.size() != 2) {
      throw SchemaError(path + ".arcs: expected [t0, t1] pairs");
    }
    ivs.push_back({get_number(iv[0], path + ".arcs"), get_number(iv[1], path + ".arcs")});
  }
  try {
    return ArcSet(owner, ivs);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + ".arcs: " + e.what());
  }
}

inline GridSpec parse_grid(const json& j, const std::string& path) {
  check_keys(j, path, {"x0", "x1", "y0", "y1", "nx", "ny"});
  GridSpec g;
  if (const json* v = find(j, "x0")) g.x0 = get_number(*v, path + ".x0");
  if (const json* v = find(j, "x1")) g.x1 = get_number(*v, path + ".x1");
  if (const json* v = find(j, "y0")) g.y0 = get_number(*v, path + ".y0");
  if (const json* v = find(j, "y1")) g.y1 = get_number(*v, path + ".y1");
  if (const json* v = find(j, "nx")) g.nx = get_int(*v, path + ".nx");
  if (const json* v = find(j, "ny")) g.ny = get_int(*v, path + ".ny");
  if (g.nx < 1 || g.ny < 1) throw SchemaError(path + ": grid must be at least 1x1");
  return g;
}

inline WosOptions parse_sampler(const json& j, const std::string& path) {
  check_keys(j, path, {"n", "shell", "seed"});
  WosOptions w;
  if (const json* v = find(j, "n")) w.n = get_u64(*v, path + ".n");
  if (const json* v = find(j, "shell")) w.shell = get_number(*v, path + ".shell");
  if (const json* v = find(j, "seed")) w.seed = get_u64(*v, path + ".seed");
  if (w.n < 1) throw SchemaError(path + ".n: need at least one walk");
  return w;
}

inline CrossFunction builtin_function(const std::string& name, const std::string& path) {
  if (name == "exp_sum") {
    return [](Complex z, Complex w) { return std::exp(z + w); };
  }
  if (name == "pole_product") {
    return [](Complex z, Complex w) { return 1.0 / ((2.0 - z) * (2.0 - w)); };
  }
  if (name == "constant_one") {
    return [](Complex, Complex) { return Complex(1.0, 0.0); };
  }
  if (name == "coordinate_z") {
    return [](Complex z, Complex) { return z; };
  }
  throw SchemaError(path + ": unknown function '" + name +
                    "' (expected exp_sum | pole_product | constant_one | coordinate_z)");
}

}  // namespace config

namespace detail {

inline std::filesystem::path output_path(const RunOverrides& ov,
                                         const std::string& name) {
  const std::filesystem::path dir = ov.out_dir ? *ov.out_dir : ".";
  std::filesystem::create_directories(dir);
  return dir / name;
}

inline std::ofstream open_output(const RunOverrides& ov, const std::string& name) {
  const auto p = output_path(ov, name);
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + p.string());
  return os;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands.

inline int run_omega(const json& cfg, const RunOverrides& ov, std::ostream& diag) {
  config::check_keys(cfg, "config",
                     {"command", "domain", "grid", "sampler", "quad_tol", "outputs"});
  const json* dj = config::find(cfg, "domain");
  if (!dj) throw SchemaError("config: missing 'domain'");
  const PlanarDomain d = config::parse_domain(*dj, "domain");
  const ArcSet arcs = config::parse_arcs(*dj, "domain", d);
  GridSpec grid;
  if (const json* g = config::find(cfg, "grid")) grid = config::parse_grid(*g, "grid");
  OmegaOptions opt;
  if (const json* s = config::find(cfg, "sampler")) {
    opt.wos = config::parse_sampler(*s, "sampler");
  }
  if (const json* q = config::find(cfg, "quad_tol")) {
    opt.quad_tol = config::get_number(*q, "quad_tol");
  }
  if (ov.seed) opt.wos.seed = *ov.seed;
  unsigned threads = ov.threads ? *ov.threads : 0;

  const HarmonicMeasureField field = omega_field(d, arcs, grid, opt, threads);

  std::string out_name = "omega_field.csv";
  if (const json* o = config::find(cfg, "outputs")) {
    config::check_keys(*o, "outputs", {"field"});
    if (const json* f = config::find(*o, "field")) {
      out_name = config::get_string(*f, "outputs.field");
    }
  }
  auto os = detail::open_output(ov, out_name);
  write_field_csv(os, field);
  diag << "omega: wrote " << out_name << "\n";
  return 0;
}

inline int run_wedge(const json& cfg, const RunOverrides& ov, std::ostream& diag) {
  config::check_keys(cfg, "config",
                     {"command", "domain_d", "domain_g", "w", "grid", "sampler",
                      "quad_tol", "outputs"});
  const json* dj = config::find(cfg, "domain_d");
  const json* gj = config::find(cfg, "domain_g");
  const json* wj = config::find(cfg, "w");
  if (!dj || !gj || !wj) {
    throw SchemaError("config: wedge needs 'domain_d', 'domain_g' and 'w'");
  }
  const PlanarDomain d = config::parse_domain(*dj, "domain_d");
  const ArcSet a = config::parse_arcs(*dj, "domain_d", d);
  const PlanarDomain g = config::parse_domain(*gj, "domain_g");
  const ArcSet b = config::parse_arcs(*gj, "domain_g", g);
  const Complex w = config::get_complex(*wj, "w");
  GridSpec grid;
  if (const json* gr = config::find(cfg, "grid")) {
    grid = config::parse_grid(*gr, "grid");
  }
  OmegaOptions opt;
  if (const json* s = config::find(cfg, "sampler")) {
    opt.wos = config::parse_sampler(*s, "sampler");
  }
  if (const json* q = config::find(cfg, "quad_tol")) {
    opt.quad_tol = config::get_number(*q, "quad_tol");
  }
  if (ov.seed) opt.wos.seed = *ov.seed;

  CrossSpec spec(d, a, g, b, opt, opt);
  const WedgeSlice slice =
      wedge_slice(spec, w, grid, ov.threads ? *ov.threads : 0);

  std::string out_name = "wedge_slice.csv";
  if (const json* o = config::find(cfg, "outputs")) {
    config::check_keys(*o, "outputs", {"slice"});
    if (const json* f = config::find(*o, "slice")) {
      out_name = config::get_string(*f, "outputs.slice");
    }
  }
  auto os = detail::open_output(ov, out_name);
  write_slice_csv(os, slice);
  diag << "wedge: wrote " << out_name << "\n";
  return 0;
}

inline int run_poletsky(const json& cfg, const RunOverrides& ov, std::ostream& diag) {
  config::check_keys(cfg, "config", {"command", "z", "target", "search", "outputs"});
  const json* zj = config::find(cfg, "z");
  const json* tj = config::find(cfg, "target");
  if (!zj || !tj) throw SchemaError("config: poletsky needs 'z' and 'target'");
  const Complex z = config::get_complex(*zj, "z");

  config::check_keys(*tj, "target", {"balls"});
  const json* balls = config::find(*tj, "balls");
  if (!balls || !balls->is_array() || balls->empty()) {
    throw SchemaError("target.balls: expected a nonempty array");
  }
  DiscUnionSet target;
  for (std::size_t i = 0; i < balls->size(); ++i) {
    const json& b = (*balls)[i];
    config::check_keys(b, "target.balls[]", {"center", "radius"});
    const json* c = config::find(b, "center");
    const json* r = config::find(b, "radius");
    if (!c || !r) throw SchemaError("target.balls[]: need 'center' and 'radius'");
    target.balls.push_back({config::get_complex(*c, "target.balls[].center"),
                            config::get_number(*r, "target.balls[].radius")});
  }

  DiscSearchOptions opt;
  if (const json* s = config::find(cfg, "search")) {
    config::check_keys(*s, "search",
                       {"degree", "restarts", "budget", "quad_m", "init_scale",
                        "seed", "profile"});
    if (const json* v = config::find(*s, "degree")) opt.degree = config::get_int(*v, "search.degree");
    if (const json* v = config::find(*s, "restarts")) opt.restarts = config::get_int(*v, "search.restarts");
    if (const json* v = config::find(*s, "budget")) opt.budget = config::get_u64(*v, "search.budget");
    if (const json* v = config::find(*s, "quad_m")) opt.quad_m = config::get_int(*v, "search.quad_m");
    if (const json* v = config::find(*s, "init_scale")) opt.init_scale = config::get_number(*v, "search.init_scale");
    if (const json* v = config::find(*s, "seed")) opt.seed = config::get_u64(*v, "search.seed");
    if (const json* v = config::find(*s, "profile")) {
      if (!v->is_boolean()) throw SchemaError("search.profile: expected a boolean");
      opt.profile.enabled = v->get<bool>();
    }
  }
  if (ov.seed) opt.seed = *ov.seed;
  if (ov.threads) opt.threads = *ov.threads;

  const ProductRegion region{{PlanarDomain::unit_disc()}};
  if (!region.contains(PointN::one(z))) {
    throw SchemaError("z: base point must lie inside the unit disc");
  }
  const ScalarField u = [&target](const PointN& p) -> double {
    return target.contains(p.coord[0]) ? 0.0 : 1.0;
  };
  const DiscFunctionalResult res =
      poisson_functional_estimate(u, PointN::one(z), region, opt);

  std::string out_name = "poletsky.json";
  if (const json* o = config::find(cfg, "outputs")) {
    config::check_keys(*o, "outputs", {"result"});
    if (const json* f = config::find(*o, "result")) {
      out_name = config::get_string(*f, "outputs.result");
    }
  }
  auto os = detail::open_output(ov, out_name);
  write_disc_functional_json(os, res, opt.seed);
  diag << "poletsky: value " << fmt17(res.value) << ", wrote " << out_name << "\n";
  return 0;
}

inline int run_extend(const json& cfg, const RunOverrides& ov, std::ostream& diag) {
  config::check_keys(cfg, "config",
                     {"command", "domain_d", "domain_g", "function", "fit", "probes",
                      "probe_seed", "outputs"});
  const json* dj = config::find(cfg, "domain_d");
  const json* gj = config::find(cfg, "domain_g");
  const json* fj = config::find(cfg, "function");
  if (!dj || !gj || !fj) {
    throw SchemaError("config: extend needs 'domain_d', 'domain_g' and 'function'");
  }
  const PlanarDomain d = config::parse_domain(*dj, "domain_d");
  const ArcSet a = config::parse_arcs(*dj, "domain_d", d);
  const PlanarDomain g = config::parse_domain(*gj, "domain_g");
  const ArcSet b = config::parse_arcs(*gj, "domain_g", g);
  const std::string fname = config::get_string(*fj, "function");
  const CrossFunction f = config::builtin_function(fname, "function");

  int deg_z = 12, deg_w = 12;
  double ridge = 1e-10;
  StratumCounts counts{800, 800, 400};
  std::uint64_t seed = 42;
  if (const json* fit = config::find(cfg, "fit")) {
    config::check_keys(*fit, "fit", {"p", "q", "ridge", "counts", "seed"});
    if (const json* v = config::find(*fit, "p")) deg_z = config::get_int(*v, "fit.p");
    if (const json* v = config::find(*fit, "q")) deg_w = config::get_int(*v, "fit.q");
    if (const json* v = config::find(*fit, "ridge")) ridge = config::get_number(*v, "fit.ridge");
    if (const json* v = config::find(*fit, "seed")) seed = config::get_u64(*v, "fit.seed");
    if (const json* v = config::find(*fit, "counts")) {
      if (!v->is_array() || v->size() != 3) {
        throw SchemaError("fit.counts: expected [a_g, d_b, a_b]");
      }
      counts.a_g = config::get_u64((*v)[0], "fit.counts[0]");
      counts.d_b = config::get_u64((*v)[1], "fit.counts[1]");
      counts.a_b = config::get_u64((*v)[2], "fit.counts[2]");
    }
  }
  if (ov.seed) seed = *ov.seed;
  int probes = 100;
  std::uint64_t probe_seed = 99;
  if (const json* p = config::find(cfg, "probes")) probes = config::get_int(*p, "probes");
  if (const json* p = config::find(cfg, "probe_seed")) probe_seed = config::get_u64(*p, "probe_seed");

  CrossSpec spec(d, a, g, b);
  const CrossSamples samples = sample_cross(spec, f, counts, seed);
  const TensorFit fit = fit_extension(samples, deg_z, deg_w, ridge);

  // certified probes inside the wedge
  std::vector<TwoConstantsRow> rows;
  std::vector<double> actual;
  std::uint64_t stream = 0;
  for (int got = 0, attempts = 0; got < probes && attempts < 1000 * probes; ++attempts) {
    RandomStream rng(probe_seed, stream++);
    const Complex z = detail::sample_interior_point(spec.d, rng);
    const Complex w = detail::sample_interior_point(spec.g, rng);
    const MeasureEstimate sum = omega_sum(spec, z, w);
    if (wedge_verdict(sum) != Containment::In) continue;
    const CertifiedValue cv = certify_error(fit, spec, z, w);
    TwoConstantsRow row;
    row.z = z;
    row.w = w;
    row.omega_sum = cv.omega_sum;
    row.lhs = std::abs(cv.value);
    row.rhs = cv.bound;
    rows.push_back(row);
    actual.push_back(std::abs(cv.value - f(z, w)));
    ++got;
  }

  std::string fit_name = "fit.json";
  std::string certify_name = "certify.csv";
  std::optional<std::string> samples_name;
  if (const json* o = config::find(cfg, "outputs")) {
    config::check_keys(*o, "outputs", {"fit", "certify", "samples"});
    if (const json* v = config::find(*o, "fit")) fit_name = config::get_string(*v, "outputs.fit");
    if (const json* v = config::find(*o, "certify")) certify_name = config::get_string(*v, "outputs.certify");
    if (const json* v = config::find(*o, "samples")) samples_name = config::get_string(*v, "outputs.samples");
  }
  {
    auto os = detail::open_output(ov, fit_name);
    write_fit_json(os, fit, spec);
  }
  {
    auto os = detail::open_output(ov, certify_name);
    write_certify_csv(os, rows, &actual);
  }
  if (samples_name) {
    auto os = detail::open_output(ov, *samples_name);
    write_samples_jsonl(os, samples);
  }
  diag << "extend: eps_w " << fmt17(fit.eps_w) << ", wrote " << fit_name << ", "
       << certify_name << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify: aggregated identity suites; exit 1 on any failure.

inline int run_verify(const json& cfg, const RunOverrides& ov, std::ostream& diag) {
  config::check_keys(cfg, "config",
                     {"command", "suite", "level_identity", "boundary_limit",
                      "center_bound", "envelope_gap", "two_constants", "uniqueness",
                      "outputs"});
  std::vector<std::string> suite = {"level_identity", "boundary_limit", "center_bound",
                                    "envelope_gap", "two_constants", "uniqueness"};
  if (const json* s = config::find(cfg, "suite")) {
    if (!s->is_array()) throw SchemaError("suite: expected an array of check names");
    suite.clear();
    for (const auto& v : *s) suite.push_back(config::get_string(v, "suite[]"));
  }
  const unsigned threads = ov.threads ? *ov.threads : 0;

  const PlanarDomain disc = PlanarDomain::unit_disc();
  const ArcSet half(disc, {{0.0, kPi}});

  bool all_ok = true;
  std::ostringstream report;
  JsonWriter w(report);
  w.begin_object();
  w.key("checks").begin_array();

  for (const std::string& name : suite) {
    const json* sub = config::find(cfg, name);
    if (name == "level_identity") {
      std::vector<double> epsilons = {0.25, 0.5};
      int points = 5;
      LevelIdentityOptions opt;
      opt.threads = threads;
      double tolerance = 0.02;
      if (sub) {
        config::check_keys(*sub, name, {"epsilons", "points", "n", "seed", "tolerance"});
        if (const json* v = config::find(*sub, "epsilons")) {
          epsilons.clear();
          for (const auto& e : *v) epsilons.push_back(config::get_number(e, "epsilons[]"));
        }
        if (const json* v = config::find(*sub, "points")) points = config::get_int(*v, "points");
        if (const json* v = config::find(*sub, "n")) opt.n = config::get_u64(*v, "n");
        if (const json* v = config::find(*sub, "seed")) opt.seed = config::get_u64(*v, "seed");
        if (const json* v = config::find(*sub, "tolerance")) tolerance = config::get_number(*v, "tolerance");
      }
      if (ov.seed) opt.seed = *ov.seed;
      std::vector<LevelIdentityReport> reports;
      double worst = 0.0;
      for (const double eps : epsilons) {
        // deterministic test points inside D_eps with solid margin
        std::vector<Complex> pts;
        for (int k = 0; pts.size() < static_cast<std::size_t>(points) && k < 400; ++k) {
          RandomStream rng(7777, static_cast<std::uint64_t>(k));
          const Complex z(2 * rng.next_double() - 1, 2 * rng.next_double() - 1);
          if (std::abs(z) > 0.85) continue;
          const double om = omega_disc(z, half).value;
          if (om > 0.15 && om < 0.7 * (1.0 - eps)) pts.push_back(z);
        }
        const LevelIdentityReport rep = verify_level_identity(disc, half, eps, pts, opt);
        worst = std::max(worst, rep.max_rel_err);
        reports.push_back(rep);
      }
      const bool ok = worst < tolerance;
      all_ok = all_ok && ok;
      w.begin_object();
      w.key("name").value("level_identity");
      w.key("max_rel_err").value(worst);
      w.key("tolerance").value(tolerance);
      w.key("pass").value(ok);
      w.key("reports").begin_array();
      for (const auto& rep : reports) {
        w.begin_object();
        w.key("epsilon").value(rep.epsilon);
        w.key("max_rel_err").value(rep.max_rel_err);
        w.key("points").begin_array();
        for (const auto& p : rep.points) {
          w.begin_object();
          w.key("z").value(p.z);
          w.key("lhs").value(p.lhs);
          w.key("rhs").value(p.rhs);
          w.key("rel_err").value(p.rel_err);
          w.key("verdict").value(p.rel_err < tolerance ? "pass" : "fail");
          w.end_object();
        }
        w.end_array();
        w.end_object();
      }
      w.end_array();
      w.end_object();
      diag << "verify level_identity: max rel err " << fmt17(worst)
           << (ok ? " (pass)\n" : " (FAIL)\n");
    } else if (name == "boundary_limit") {
      BoundaryLimitOptions opt;
      int k_max = 12;
      if (sub) {
        config::check_keys(*sub, name, {"tolerance", "k_max", "n", "seed"});
        if (const json* v = config::find(*sub, "tolerance")) opt.tol = config::get_number(*v, "tolerance");
        if (const json* v = config::find(*sub, "k_max")) k_max = config::get_int(*v, "k_max");
        if (const json* v = config::find(*sub, "n")) opt.omega.wos.n = config::get_u64(*v, "n");
        if (const json* v = config::find(*sub, "seed")) opt.omega.wos.seed = config::get_u64(*v, "seed");
      }
      if (ov.seed) opt.omega.wos.seed = *ov.seed;
      opt.omega.wos.threads = threads;
      // disc: approach a point of the arc radially
      std::vector<Complex> seq_disc;
      const double zeta_t = kPi / 4.0;
      for (int k = 1; k <= k_max; ++k) {
        seq_disc.push_back((1.0 - std::pow(2.0, -k)) * disc.boundary_point(zeta_t));
      }
      const auto rep_d = boundary_limit_check(disc, half, zeta_t, seq_disc, opt);
      // slit square: approach the open slit from above
      const PlanarDomain sq = PlanarDomain::slit_square(0.5);
      const ArcSet slit(sq, {{8.0, 9.0}, {9.0, 10.0}});
      std::vector<Complex> seq_slit;
      for (int k = 1; k <= k_max; ++k) {
        seq_slit.push_back(Complex(0.25, std::pow(2.0, -k)));
      }
      const auto rep_s = boundary_limit_check(sq, slit, 8.75, seq_slit, opt);
      const bool ok = rep_d.limit_ok && rep_d.decreasing_trend && rep_s.limit_ok &&
                      rep_s.decreasing_trend;
      all_ok = all_ok && ok;
      w.begin_object();
      w.key("name").value("boundary_limit");
      w.key("disc_final").value(rep_d.final_value);
      w.key("slit_final").value(rep_s.final_value);
      w.key("tolerance").value(opt.tol);
      w.key("pass").value(ok);
      w.end_object();
      diag << "verify boundary_limit: disc " << fmt17(rep_d.final_value) << ", slit "
           << fmt17(rep_s.final_value) << (ok ? " (pass)\n" : " (FAIL)\n");
    } else if (name == "center_bound") {
      int configs = 50;
      std::uint64_t seed = 11;
      double slack = 1e-2;
      ExtremalGridOptions grid_opt;
      if (sub) {
        config::check_keys(*sub, name, {"configs", "seed", "slack", "grid_n"});
        if (const json* v = config::find(*sub, "configs")) configs = config::get_int(*v, "configs");
        if (const json* v = config::find(*sub, "seed")) seed = config::get_u64(*v, "seed");
        if (const json* v = config::find(*sub, "slack")) slack = config::get_number(*v, "slack");
        if (const json* v = config::find(*sub, "grid_n")) grid_opt.n = config::get_int(*v, "grid_n");
      }
      if (ov.seed) seed = *ov.seed;
      bool ok = true;
      double worst_margin = 1e300;
      w.begin_object();
      w.key("name").value("center_bound");
      w.key("cases").begin_array();
      for (int c = 0; c < configs; ++c) {
        RandomStream rng(seed, static_cast<std::uint64_t>(c));
        DiscUnionSet T;
        const int nb = 1 + static_cast<int>(rng.next_double() * 3);
        for (int i = 0; i < nb; ++i) {
          const double r = 0.1 + 0.5 * rng.next_double();
          const double cr = 1.2 * rng.next_double();
          const double th = kTwoPi * rng.next_double();
          T.balls.push_back({cr * Complex(std::cos(th), std::sin(th)), r});
        }
        const CenterBoundReport rep = disc_center_bound_check(T, grid_opt, slack);
        ok = ok && rep.pass;
        worst_margin = std::min(worst_margin, rep.margin);
        w.begin_object();
        w.key("lhs").value(rep.lhs);
        w.key("rhs").value(rep.rhs);
        w.key("margin").value(rep.margin);
        w.key("pass").value(rep.pass);
        w.end_object();
      }
      w.end_array();
      w.key("worst_margin").value(worst_margin);
      w.key("pass").value(ok);
      w.end_object();
      all_ok = all_ok && ok;
      diag << "verify center_bound: worst margin " << fmt17(worst_margin)
           << (ok ? " (pass)\n" : " (FAIL)\n");
    } else if (name == "envelope_gap") {
      EnvelopeCheckOptions opt;
      if (sub) {
        config::check_keys(*sub, name,
                           {"budget", "degree", "seed", "gap_slack", "oracle_slack"});
        if (const json* v = config::find(*sub, "budget")) opt.search.budget = config::get_u64(*v, "budget");
        if (const json* v = config::find(*sub, "degree")) opt.search.degree = config::get_int(*v, "degree");
        if (const json* v = config::find(*sub, "seed")) opt.search.seed = config::get_u64(*v, "seed");
        if (const json* v = config::find(*sub, "gap_slack")) opt.gap_slack = config::get_number(*v, "gap_slack");
        if (const json* v = config::find(*sub, "oracle_slack")) opt.oracle_slack = config::get_number(*v, "oracle_slack");
      }
      if (ov.seed) opt.search.seed = *ov.seed;
      opt.search.threads = threads;
      const DiscUnionSet target{{{Complex(0, 0), 0.25}}};
      const std::vector<Complex> zs = {Complex(0.5, 0), Complex(0.0, 0.6),
                                       Complex(0.1, 0.0)};
      const EnvelopeGapReport rep = rosay_identity_check(target, zs, opt);
      all_ok = all_ok && rep.pass;
      w.begin_object();
      w.key("name").value("envelope_gap");
      w.key("max_gap").value(rep.max_gap);
      w.key("min_gap").value(rep.min_gap);
      w.key("pass").value(rep.pass);
      w.end_object();
      diag << "verify envelope_gap: gaps in [" << fmt17(rep.min_gap) << ", "
           << fmt17(rep.max_gap) << "]" << (rep.pass ? " (pass)\n" : " (FAIL)\n");
    } else if (name == "two_constants") {
      std::vector<std::string> functions = {"exp_sum", "pole_product"};
      TwoConstantsOptions opt;
      int grid_n = 21;
      if (sub) {
        config::check_keys(*sub, name, {"functions", "grid_n", "tol"});
        if (const json* v = config::find(*sub, "functions")) {
          functions.clear();
          for (const auto& f : *v) functions.push_back(config::get_string(f, "functions[]"));
        }
        if (const json* v = config::find(*sub, "grid_n")) grid_n = config::get_int(*v, "grid_n");
        if (const json* v = config::find(*sub, "tol")) opt.tol = config::get_number(*v, "tol");
      }
      CrossSpec spec(disc, half, disc, half);
      GridSpec grid;
      grid.nx = grid_n;
      grid.ny = grid_n;
      bool ok = true;
      w.begin_object();
      w.key("name").value("two_constants");
      w.key("functions").begin_array();
      for (const std::string& fname : functions) {
        const CrossFunction f = config::builtin_function(fname, "two_constants.functions");
        const TwoConstantsReport rep = two_constants_report(f, spec, grid, opt);
        ok = ok && rep.violations.empty();
        w.begin_object();
        w.key("function").value(fname);
        w.key("checked").value(rep.checked);
        w.key("violations").value(rep.violations.size());
        w.key("max_excess").value(rep.max_excess);
        w.end_object();
      }
      w.end_array();
      w.key("pass").value(ok);
      w.end_object();
      all_ok = all_ok && ok;
      diag << "verify two_constants: " << (ok ? "(pass)\n" : "(FAIL)\n");
    } else if (name == "uniqueness") {
      UniquenessOptions opt;
      std::uint64_t seed1 = 101, seed2 = 202;
      std::string fname = "pole_product";
      if (sub) {
        config::check_keys(*sub, name,
                           {"seeds", "probes", "p", "q", "counts", "function"});
        if (const json* v = config::find(*sub, "seeds")) {
          if (!v->is_array() || v->size() != 2) throw SchemaError("uniqueness.seeds: expected [s1, s2]");
          seed1 = config::get_u64((*v)[0], "seeds[0]");
          seed2 = config::get_u64((*v)[1], "seeds[1]");
        }
        if (const json* v = config::find(*sub, "probes")) opt.probes = config::get_int(*v, "probes");
        if (const json* v = config::find(*sub, "p")) opt.deg_z = config::get_int(*v, "p");
        if (const json* v = config::find(*sub, "q")) opt.deg_w = config::get_int(*v, "q");
        if (const json* v = config::find(*sub, "function")) fname = config::get_string(*v, "function");
        if (const json* v = config::find(*sub, "counts")) {
          if (!v->is_array() || v->size() != 3) throw SchemaError("uniqueness.counts: expected 3 entries");
          opt.counts.a_g = config::get_u64((*v)[0], "counts[0]");
          opt.counts.d_b = config::get_u64((*v)[1], "counts[1]");
          opt.counts.a_b = config::get_u64((*v)[2], "counts[2]");
        }
      }
      CrossSpec spec(disc, half, disc, half);
      const CrossFunction f = config::builtin_function(fname, "uniqueness.function");
      const UniquenessReport rep = uniqueness_check(spec, f, seed1, seed2, opt);
      all_ok = all_ok && rep.pass;
      w.begin_object();
      w.key("name").value("uniqueness");
      w.key("probes").value(rep.rows.size());
      w.key("max_ratio").value(rep.max_ratio);
      w.key("pass").value(rep.pass);
      w.end_object();
      diag << "verify uniqueness: max ratio " << fmt17(rep.max_ratio)
           << (rep.pass ? " (pass)\n" : " (FAIL)\n");
    } else {
      throw SchemaError("suite: unknown check '" + name + "'");
    }
  }

  w.end_array();
  w.key("pass").value(all_ok);
  w.end_object();

  std::string out_name = "verify.json";
  if (const json* o = config::find(cfg, "outputs")) {
    config::check_keys(*o, "outputs", {"report"});
    if (const json* f = config::find(*o, "report")) {
      out_name = config::get_string(*f, "outputs.report");
    }
  }
  auto os = detail::open_output(ov, out_name);
  os << report.str() << '\n';
  diag << "verify: wrote " << out_name << "\n";
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------

inline int run_experiment(const std::string& command, const json& cfg,
                          const RunOverrides& ov, std::ostream& diag) {
  try {
    config::require_object(cfg, "config");
    const json* cmd = config::find(cfg, "command");
    if (!cmd) throw SchemaError("config: missing 'command'");
    const std::string declared = config::get_string(*cmd, "command");
    if (declared != command) {
      throw SchemaError("config: command '" + declared +
                        "' does not match the invoked subcommand '" + command + "'");
    }
    if (command == "omega") return run_omega(cfg, ov, diag);
    if (command == "wedge") return run_wedge(cfg, ov, diag);
    if (command == "poletsky") return run_poletsky(cfg, ov, diag);
    if (command == "extend") return run_extend(cfg, ov, diag);
    if (command == "verify") return run_verify(cfg, ov, diag);
    throw SchemaError("unknown command '" + command + "'");
  } catch (const SchemaError& e) {
    diag << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    diag << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    diag << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    diag << "failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace crosswedge
