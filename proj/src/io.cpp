#include "subres/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "subres/errors.hpp"

namespace subres::io {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) fail(where + "." + k, "unknown field");
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "must be finite");
  return v;
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false");
  return j.get<bool>();
}

Vec2 get_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected [x, y]");
  return {get_number(j[0], where + "[0]"), get_number(j[1], where + "[1]")};
}

template <class Fn>
void optional_field(const json& j, const char* key, const std::string& where, Fn&& fn) {
  if (j.contains(key)) fn(j.at(key), where + "." + key);
}

ResonatorSpec parse_resonator(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  if (!j.contains("kind") || !j["kind"].is_string()) fail(where + ".kind", "expected \"circle\", \"ellipse\" or \"star\"");
  ResonatorSpec r;
  r.kind = j["kind"].get<std::string>();
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) fail(where + "." + key, "missing");
    return j.at(key);
  };
  r.center = get_point(need("center"), where + ".center");
  if (r.kind == "circle") {
    allow_keys(j, where, {"kind", "center", "radius"});
    r.radius = get_number(need("radius"), where + ".radius");
  } else if (r.kind == "ellipse") {
    allow_keys(j, where, {"kind", "center", "semi_axes", "rotation"});
    const Vec2 ax = get_point(need("semi_axes"), where + ".semi_axes");
    r.p = ax.x();
    r.q = ax.y();
    optional_field(j, "rotation", where, [&](const json& v, const std::string& w) { r.rotation = get_number(v, w); });
  } else if (r.kind == "star") {
    allow_keys(j, where, {"kind", "center", "radius", "amplitude", "lobes"});
    r.radius = get_number(need("radius"), where + ".radius");
    r.amplitude = get_number(need("amplitude"), where + ".amplitude");
    r.lobes = get_int(need("lobes"), where + ".lobes");
  } else {
    fail(where + ".kind", "unknown kind \"" + r.kind + "\"");
  }
  try {
    r.build();
  } catch (const ConfigError& e) {
    fail(where, e.what());
  }
  return r;
}

json resonator_json(const ResonatorSpec& r) {
  json j{{"kind", r.kind}, {"center", {r.center.x(), r.center.y()}}};
  if (r.kind == "circle") {
    j["radius"] = r.radius;
  } else if (r.kind == "ellipse") {
    j["semi_axes"] = {r.p, r.q};
    j["rotation"] = r.rotation;
  } else {
    j["radius"] = r.radius;
    j["amplitude"] = r.amplitude;
    j["lobes"] = r.lobes;
  }
  return j;
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json branch_record(const ResonanceBranch& b) {
  json j{{"omega", complex_json(b.omega)}, {"iterations", b.iterations}};
  if (b.stage == Stage::refined) {
    j["sigma_min"] = b.sigma_min;
    j["converged"] = b.converged;
  }
  if (!b.note.empty()) j["note"] = b.note;
  return j;
}

json coeffs_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(complex_json(v(k)));
  return a;
}

}  // namespace

BoundaryCurve ResonatorSpec::build() const {
  if (kind == "circle") return BoundaryCurve::circle(center, radius);
  if (kind == "ellipse") return BoundaryCurve::ellipse(center, p, q, rotation);
  if (kind == "star") return BoundaryCurve::star(center, radius, amplitude, lobes);
  throw ConfigError("unknown resonator kind \"" + kind + "\"");
}

std::vector<double> DeltaSweep::values() const {
  std::vector<double> v;
  for (int k = 0; k < points; ++k) {
    const double t = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    v.push_back(log_spaced ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                           : start + t * (stop - start));
  }
  if (!v.empty()) {
    v.front() = start;
    v.back() = points == 1 ? start : stop;
  }
  return v;
}

int RunConfig::resolved_Q(int F_override) const {
  if (Q) return std::max(*Q, ResonatorSystem::auto_q(F_override));
  const int q = ResonatorSystem::auto_q(F_override);
  return q + (q % 2);
}

double RunConfig::primary_delta() const { return sweep ? sweep->start : delta; }

ResonatorSystem RunConfig::system() const { return system(primary_delta(), F); }

ResonatorSystem RunConfig::system(double d, int f) const {
  std::vector<BoundaryCurve> curves;
  for (const auto& r : resonators) curves.push_back(r.build());
  const int q = Q && f == F ? *Q : resolved_Q(f);
  return ResonatorSystem(std::move(curves), d, f, q);
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config syntax error at " + line_column(text, e.byte) + ": " + e.what());
  }
  const std::string root = "config";
  allow_keys(j, root, {"resonators", "delta", "F", "Q", "solver", "outputs", "fields", "convergence"});
  RunConfig c;

  if (!j.contains("resonators") || !j["resonators"].is_array() || j["resonators"].empty())
    fail(root + ".resonators", "expected a non-empty list");
  for (std::size_t k = 0; k < j["resonators"].size(); ++k)
    c.resonators.push_back(parse_resonator(j["resonators"][k], root + ".resonators[" + std::to_string(k) + "]"));

  if (!j.contains("delta")) fail(root + ".delta", "missing");
  const auto& d = j["delta"];
  if (d.is_object()) {
    const std::string w = root + ".delta";
    allow_keys(d, w, {"start", "stop", "points", "log_spaced"});
    DeltaSweep s;
    s.start = get_number(d.value("start", json()), w + ".start");
    s.stop = get_number(d.value("stop", json()), w + ".stop");
    s.points = get_int(d.value("points", json()), w + ".points");
    optional_field(d, "log_spaced", w, [&](const json& v, const std::string& ww) { s.log_spaced = get_bool(v, ww); });
    if (s.points < 1) fail(w + ".points", "must be at least 1");
    for (double x : {s.start, s.stop})
      if (!(x > 0.0 && x < 1.0)) fail(w, "sweep values must lie in (0, 1)");
    if (s.log_spaced && s.points > 1 && !(s.stop < s.start)) fail(w, "log-spaced sweeps must be strictly decreasing");
    c.sweep = s;
    c.delta = s.start;
  } else {
    c.delta = get_number(d, root + ".delta");
    if (!(c.delta > 0.0 && c.delta < 1.0)) fail(root + ".delta", "must lie in (0, 1)");
  }

  optional_field(j, "F", root, [&](const json& v, const std::string& w) {
    c.F = get_int(v, w);
    if (c.F < 0) fail(w, "must be non-negative");
  });
  optional_field(j, "Q", root, [&](const json& v, const std::string& w) {
    if (v.is_string()) {
      if (v.get<std::string>() != "auto") fail(w, "expected an even integer or \"auto\"");
      return;
    }
    const int q = get_int(v, w);
    if (q % 2 != 0) fail(w, "must be even");
    c.Q = q;
  });
  if (c.Q && *c.Q < ResonatorSystem::auto_q(c.F)) fail(root + ".Q", "must satisfy Q >= 4(F+4)");

  optional_field(j, "solver", root, [&](const json& v, const std::string& w) {
    allow_keys(v, w, {"eps_rel", "eps_sigma", "eps_dist_rel", "max_newton", "max_fixed_point", "fd_step", "branch_polish"});
    auto& s = c.solver;
    auto pos = [&](const char* key, double& out) {
      optional_field(v, key, w, [&](const json& x, const std::string& ww) {
        out = get_number(x, ww);
        if (!(out > 0.0)) fail(ww, "must be positive");
      });
    };
    auto posi = [&](const char* key, int& out) {
      optional_field(v, key, w, [&](const json& x, const std::string& ww) {
        out = get_int(x, ww);
        if (out < 1) fail(ww, "must be positive");
      });
    };
    pos("eps_rel", s.eps_rel);
    pos("eps_sigma", s.eps_sigma);
    pos("eps_dist_rel", s.eps_dist_rel);
    pos("fd_step", s.fd_step);
    posi("max_newton", s.max_newton);
    posi("max_fixed_point", s.max_fixed_point);
    optional_field(v, "branch_polish", w, [&](const json& x, const std::string& ww) { s.branch_polish = get_bool(x, ww); });
  });

  optional_field(j, "outputs", root, [&](const json& v, const std::string& w) {
    allow_keys(v, w, {"resonances", "modes", "fields", "convergence", "timings"});
    auto& o = c.outputs;
    for (auto [key, ref] : {std::pair<const char*, bool*>{"resonances", &o.resonances}, {"modes", &o.modes},
                            {"fields", &o.fields}, {"convergence", &o.convergence}, {"timings", &o.timings}})
      optional_field(v, key, w, [&](const json& x, const std::string& ww) { *ref = get_bool(x, ww); });
  });

  optional_field(j, "fields", root, [&](const json& v, const std::string& w) {
    allow_keys(v, w, {"bbox", "resolution", "branches", "points_per_curve"});
    auto& f = c.fields;
    GridSpec g;
    bool have_box = false;
    optional_field(v, "bbox", w, [&](const json& x, const std::string& ww) {
      if (!x.is_array() || x.size() != 4) fail(ww, "expected [x_min, x_max, y_min, y_max]");
      g.x_min = get_number(x[0], ww + "[0]");
      g.x_max = get_number(x[1], ww + "[1]");
      g.y_min = get_number(x[2], ww + "[2]");
      g.y_max = get_number(x[3], ww + "[3]");
      if (!(g.x_min < g.x_max && g.y_min < g.y_max)) fail(ww, "empty box");
      have_box = true;
    });
    int nx = f.nx, ny = f.ny;
    optional_field(v, "resolution", w, [&](const json& x, const std::string& ww) {
      if (x.is_array() && x.size() == 2) {
        nx = get_int(x[0], ww + "[0]");
        ny = get_int(x[1], ww + "[1]");
      } else {
        nx = ny = get_int(x, ww);
      }
      if (nx < 2 || ny < 2) fail(ww, "need at least 2 nodes per axis");
      f.nx = nx;
      f.ny = ny;
    });
    if (have_box) {
      g.nx = nx;
      g.ny = ny;
      f.grid = g;
    }
    optional_field(v, "branches", w, [&](const json& x, const std::string& ww) {
      if (x.is_string() && x.get<std::string>() == "all") return;
      if (!x.is_array()) fail(ww, "expected \"all\" or a list of branch ids");
      for (std::size_t k = 0; k < x.size(); ++k) {
        const int id = get_int(x[k], ww + "[" + std::to_string(k) + "]");
        if (id < 1) fail(ww, "branch ids start at 1");
        f.branches.push_back(id);
      }
    });
    optional_field(v, "points_per_curve", w, [&](const json& x, const std::string& ww) {
      f.points_per_curve = get_int(x, ww);
      if (f.points_per_curve < 16) fail(ww, "must be at least 16");
    });
  });

  optional_field(j, "convergence", root, [&](const json& v, const std::string& w) {
    allow_keys(v, w, {"F_ref", "F_values"});
    auto& cv = c.convergence;
    optional_field(v, "F_ref", w, [&](const json& x, const std::string& ww) {
      cv.F_ref = get_int(x, ww);
      if (cv.F_ref < 0) fail(ww, "must be non-negative");
    });
    optional_field(v, "F_values", w, [&](const json& x, const std::string& ww) {
      if (!x.is_array() || x.empty()) fail(ww, "expected a non-empty list");
      cv.F_values.clear();
      for (std::size_t k = 0; k < x.size(); ++k) {
        const int f = get_int(x[k], ww + "[" + std::to_string(k) + "]");
        if (f < 0) fail(ww, "values must be non-negative");
        cv.F_values.push_back(f);
      }
    });
    for (int f : cv.F_values)
      if (f >= cv.F_ref) fail(w + ".F_values", "values must be below F_ref");
  });

  // Validate the geometry once so overlap errors surface at parse time.
  try {
    c.system();
  } catch (const ConfigError& e) {
    fail(root + ".resonators", e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json to_json(const RunConfig& c) {
  json j;
  j["resonators"] = json::array();
  for (const auto& r : c.resonators) j["resonators"].push_back(resonator_json(r));
  if (c.sweep)
    j["delta"] = {{"start", c.sweep->start}, {"stop", c.sweep->stop}, {"points", c.sweep->points},
                  {"log_spaced", c.sweep->log_spaced}};
  else
    j["delta"] = c.delta;
  j["F"] = c.F;
  if (c.Q)
    j["Q"] = *c.Q;
  else
    j["Q"] = "auto";
  const auto& s = c.solver;
  j["solver"] = {{"eps_rel", s.eps_rel},         {"eps_sigma", s.eps_sigma}, {"eps_dist_rel", s.eps_dist_rel},
                 {"max_newton", s.max_newton},   {"max_fixed_point", s.max_fixed_point},
                 {"fd_step", s.fd_step},         {"branch_polish", s.branch_polish}};
  const auto& o = c.outputs;
  j["outputs"] = {{"resonances", o.resonances}, {"modes", o.modes},     {"fields", o.fields},
                  {"convergence", o.convergence}, {"timings", o.timings}};
  json f{{"points_per_curve", c.fields.points_per_curve}};
  if (c.fields.grid) {
    const auto& g = *c.fields.grid;
    f["bbox"] = {g.x_min, g.x_max, g.y_min, g.y_max};
    f["resolution"] = {g.nx, g.ny};
  } else {
    f["resolution"] = {c.fields.nx, c.fields.ny};
  }
  if (c.fields.branches.empty())
    f["branches"] = "all";
  else
    f["branches"] = c.fields.branches;
  j["fields"] = f;
  j["convergence"] = {{"F_ref", c.convergence.F_ref}, {"F_values", c.convergence.F_values}};
  return j;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected [re, im]");
  return {get_number(j[0], where + "[0]"), get_number(j[1], where + "[1]")};
}

std::vector<const ResonanceBranch*> numbered_branches(const SolverReport& rep) {
  std::vector<const ResonanceBranch*> out;
  for (const auto& b : rep.result()) out.push_back(&b);
  std::stable_sort(out.begin(), out.end(), [](const auto* a, const auto* b) {
    const double ra = std::abs(a->omega), rb = std::abs(b->omega);
    if (ra != rb) return ra < rb;
    return std::arg(a->omega) < std::arg(b->omega);
  });
  return out;
}

json report_json(const SolverReport& rep, const ResonatorSystem& sys, bool include_timings) {
  json j;
  j["schema"] = "subres-report/1";
  j["N"] = rep.N;
  j["F"] = rep.F;
  j["Q"] = sys.Q;
  j["delta"] = rep.delta;
  j["final_stage"] = to_string(rep.final_stage);
  const auto& s = rep.seeds;
  json nu = json::array();
  for (cplx v : s.B_eigs) nu.push_back(complex_json(v));
  j["seeds"] = {{"mu1", s.mu1},
                {"alpha", complex_json(s.alpha)},
                {"B_eigs", nu},
                {"asymptotic_regime", s.asymptotic_regime}};
  j["effective_converged"] = rep.effective_converged;
  j["fixed_point_iterations"] = rep.fixed_point_iterations;

  // Final-stage ids, 1-based by |omega|.
  const auto numbered = numbered_branches(rep);
  json branches = json::array();
  for (std::size_t id = 0; id < numbered.size(); ++id) {
    const auto& fin = *numbered[id];
    const int k = fin.seed_index;
    json b{{"id", static_cast<int>(id) + 1}, {"seed_index", k}, {"class", to_string(fin.branch_class)}};
    b["seed"] = branch_record(rep.seed_branches.at(k));
    if (!rep.effective_branches.empty()) b["effective"] = branch_record(rep.effective_branches.at(k));
    if (rep.final_stage == Stage::refined) b["refined"] = branch_record(fin);
    b["mode_coeffs"] = coeffs_json(fin.mode_coeffs);
    branches.push_back(b);
  }
  j["branches"] = branches;

  auto rejected = [&](const std::vector<ResonanceBranch>& list) {
    json a = json::array();
    for (const auto& b : list) {
      json r = branch_record(b);
      r["seed_index"] = b.seed_index;
      r["class"] = to_string(b.branch_class);
      a.push_back(r);
    }
    return a;
  };
  if (rep.final_stage == Stage::refined) {
    j["rejected_spurious"] = rejected(rep.spurious);
    j["rejected_duplicate"] = rejected(rep.duplicate);
  }
  if (include_timings)
    j["timings"] = {{"seed", rep.timings.seed}, {"effective", rep.timings.effective}, {"refined", rep.timings.refined}};
  return j;
}

std::string field_csv(const FieldGrid& f) {
  const auto& g = f.spec;
  const json header{{"bbox", {g.x_min, g.x_max, g.y_min, g.y_max}},
                    {"resolution", {g.nx, g.ny}},
                    {"omega", complex_json(f.omega)},
                    {"branch", f.branch_id},
                    {"columns", {"x", "y", "re_u", "im_u", "mask"}},
                    {"mask", {{"0", "interior"}, {"1", "exterior"}, {"2", "near_boundary"}}}};
  std::ostringstream os;
  os << "# " << header.dump() << '\n' << std::setprecision(17);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      os << g.x(i) << ',' << g.y(j) << ',' << f.values(i, j).real() << ',' << f.values(i, j).imag() << ','
         << static_cast<int>(f.kind(i, j)) << '\n';
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("write failed for " + path);
}

}  // namespace subres::io
