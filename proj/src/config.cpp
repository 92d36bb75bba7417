#include "amprb/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace amprb {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

// Reads fields of one JSON object and rejects keys that were never asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return obj_.contains(key);
  }

  std::string field(const std::string& key) const { return path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number()) fail(field(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(field(key), "must be finite");
    return x;
  }

  double positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) fail(field(key), "must be positive");
    return x;
  }

  double non_negative(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x >= 0.0)) fail(field(key), "must be non-negative");
    return x;
  }

  long integer(const std::string& key, long fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) fail(field(key), "expected an integer");
    return v.get<long>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) fail(field(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_string()) fail(field(key), "expected a string");
    return v.get<std::string>();
  }

  const json& child(const std::string& key) {
    has(key);
    return obj_.at(key);
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!known_.count(it.key())) fail(field(it.key()), "unknown key");
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> known_;
};

FixedParameter fixed_from_string(const std::string& s, const std::string& path) {
  if (s == "delta") return FixedParameter::Delta;
  if (s == "mass") return FixedParameter::Mass;
  fail(path, "expected \"delta\" or \"mass\", got \"" + s + "\"");
}

std::string fixed_name(FixedParameter f) { return f == FixedParameter::Delta ? "delta" : "mass"; }

Range read_range(const json& j, const std::string& path, const Range& fallback) {
  ObjectReader r(j, path);
  Range out;
  out.min = r.number("min", fallback.min);
  out.max = r.number("max", fallback.max);
  const long n = r.integer("n", fallback.n);
  if (n < 0 || n > 100000) fail(r.field("n"), "must be in [0, 100000]");
  out.n = static_cast<int>(n);
  if (!(out.max >= out.min)) fail(path, "max must not be below min");
  r.finish();
  return out;
}

json range_json(const Range& r) { return {{"min", r.min}, {"max", r.max}, {"n", r.n}}; }

void read_params(ObjectReader& top, ExperimentConfig& c) {
  if (!top.has("params")) {
    if (c.model == ModelId::MP_ADA || c.model == ModelId::TranslatingDisk) c.params = ModelProblemParams::disk(0.0);
    return;
  }
  ObjectReader r(top.child("params"), "config.params");
  ModelProblemParams p;
  p.rho = r.positive("rho", p.rho);
  p.mu = r.non_negative("mu", p.mu);
  p.L = r.positive("L", p.L);
  p.H = r.positive("H", p.H);
  p.r1 = r.positive("r1", p.r1);
  p.r2 = r.positive("r2", p.r2);
  if (!(p.r2 > p.r1)) fail("config.params.r2", "must exceed r1");
  p.rho_b = r.non_negative("rho_b", p.rho_b);
  if (r.has("rho_b")) {
    const ModelProblemParams d = ModelProblemParams::disk(p.rho_b, p.r1, p.r2, p.rho, p.mu);
    p.m_b = d.m_b;
    p.I_b = d.I_b;
  } else if (c.model == ModelId::MP_ADA || c.model == ModelId::TranslatingDisk) {
    p.m_b = 0.0;
    p.I_b = 0.0;
  }
  p.m_b = r.non_negative("m_b", p.m_b);
  p.I_b = r.non_negative("I_b", p.I_b);
  p.alpha_b = r.number("alpha_b", p.alpha_b);
  p.p0 = r.number("p0", p.p0);
  r.finish();
  c.params = p;
}

void read_probe(const json& j, ExperimentConfig& c) {
  ObjectReader r(j, "config.probe");
  ProbeSpec& p = c.probe;
  ProbeSettings& s = p.settings;
  s.T = r.positive("T", s.T);
  s.min_steps = r.integer("min_steps", s.min_steps);
  s.max_steps = r.integer("max_steps", s.max_steps);
  s.threshold = r.positive("threshold", s.threshold);
  s.slope_tol = r.number("slope_tol", s.slope_tol);
  s.abort_factor = r.positive("abort_factor", s.abort_factor);
  p.mass = r.non_negative("mass", p.mass);
  p.delta = r.positive("delta", p.delta);
  if (r.has("grid")) {
    ObjectReader g(r.child("grid"), "config.probe.grid");
    const long N = g.integer("N", is_annular(c.model) ? p.annular_grid.N : p.rect_grid.N);
    if (N < 4) fail(g.field("N"), "must be at least 4");
    p.rect_grid.N = p.annular_grid.N = static_cast<int>(N);
    p.rect_grid.H = g.positive("H", p.rect_grid.H);
    p.annular_grid.r1 = g.positive("r1", p.annular_grid.r1);
    p.annular_grid.r2 = g.positive("r2", p.annular_grid.r2);
    if (!(p.annular_grid.r2 > p.annular_grid.r1)) fail("config.probe.grid.r2", "must exceed r1");
    p.rect_grid.nu = p.annular_grid.nu = g.positive("nu", p.rect_grid.nu);
    g.finish();
  }
  if (r.has("bisect")) {
    ObjectReader b(r.child("bisect"), "config.probe.bisect");
    p.bisect = b.boolean("enabled", true);
    p.bisect_lo = b.non_negative("lo", p.bisect_lo);
    p.bisect_hi = b.positive("hi", p.bisect_hi);
    p.bisect_tol = b.positive("tol", p.bisect_tol);
    const long it = b.integer("max_iter", p.bisect_max_iter);
    if (it < 1 || it > 200) fail(b.field("max_iter"), "must be in [1, 200]");
    p.bisect_max_iter = static_cast<int>(it);
    if (!(p.bisect_hi > p.bisect_lo)) fail("config.probe.bisect", "hi must exceed lo");
    b.finish();
  }
  r.finish();
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    fail("config.probe", e.what());
  }
}

void read_sweep(const json& j, SweepSpec& s) {
  ObjectReader r(j, "config.sweep");
  s.fixed = fixed_from_string(r.string("fixed", fixed_name(s.fixed)), "config.sweep.fixed");
  s.value = r.non_negative("value", s.value);
  if (r.has("x")) s.x = read_range(r.child("x"), "config.sweep.x", s.x);
  if (r.has("beta")) s.beta = read_range(r.child("beta"), "config.sweep.beta", s.beta);
  s.probe = r.boolean("probe", s.probe);
  r.finish();
}

void read_boundary(const json& j, BoundarySpec& b) {
  ObjectReader r(j, "config.boundary");
  b.fixed = fixed_from_string(r.string("fixed", fixed_name(b.fixed)), "config.boundary.fixed");
  b.value = r.non_negative("value", b.value);
  BoundaryTraceOptions& t = b.trace;
  t.x_min = r.non_negative("x_min", t.x_min);
  t.x_max = r.positive("x_max", t.x_max);
  t.nx = static_cast<int>(r.integer("nx", t.nx));
  t.beta_min = r.non_negative("beta_min", t.beta_min);
  t.beta_max = r.positive("beta_max", t.beta_max);
  t.ntheta = static_cast<int>(r.integer("ntheta", t.ntheta));
  t.coarse_nx = static_cast<int>(r.integer("coarse_nx", t.coarse_nx));
  t.coarse_nbeta = static_cast<int>(r.integer("coarse_nbeta", t.coarse_nbeta));
  t.step = r.positive("step", t.step);
  t.max_points = static_cast<int>(r.integer("max_points", t.max_points));
  b.verify = r.boolean("verify", b.verify);
  b.offset = r.positive("offset", b.offset);
  b.verify_eps = r.positive("verify_eps", b.verify_eps);
  r.finish();
  if (!(t.x_max > t.x_min)) fail("config.boundary.x_max", "must exceed x_min");
  if (!(t.beta_max > t.beta_min)) fail("config.boundary.beta_max", "must exceed beta_min");
  if (t.nx < 2) fail("config.boundary.nx", "must be at least 2");
  if (t.ntheta < 16) fail("config.boundary.ntheta", "must be at least 16");
  if (t.coarse_nx < 2 || t.coarse_nbeta < 2) fail("config.boundary.coarse_nx", "coarse lattice needs at least 2 points");
  if (t.max_points < 1) fail("config.boundary.max_points", "must be positive");
}

void read_stability(const json& j, StabilityOptions& s) {
  ObjectReader r(j, "config.stability");
  s.eps = r.positive("eps", s.eps);
  if (r.has("R")) {
    const json& v = r.child("R");
    if (v.is_string() && v.get<std::string>() == "inf")
      s.R = std::numeric_limits<double>::infinity();
    else
      s.R = r.positive("R", s.R);
  }
  if (!(s.R > 1.0 + s.eps)) fail("config.stability.R", "must exceed 1 + eps");
  const long budget = r.integer("budget", s.budget);
  if (budget < 16) fail("config.stability.budget", "must be at least 16");
  s.budget = static_cast<int>(budget);
  s.residual_tol = r.positive("residual_tol", s.residual_tol);
  const long depth = r.integer("max_depth", s.max_depth);
  if (depth < 1) fail("config.stability.max_depth", "must be positive");
  s.max_depth = static_cast<int>(depth);
  r.finish();
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Exact: return "exact";
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::Converge: return "converge";
    case ExperimentKind::Probe: return "probe";
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::Boundary: return "boundary";
  }
  return "?";
}

std::string to_string(ModelId m) {
  switch (m) {
    case ModelId::MP_AM: return "MP-AM";
    case ModelId::MP_AD: return "MP-AD";
    case ModelId::MP_AMA: return "MP-AMA";
    case ModelId::MP_ADA: return "MP-ADA";
    case ModelId::TranslatingDisk: return "translating-disk";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::Exact, ExperimentKind::Simulate, ExperimentKind::Converge, ExperimentKind::Probe,
                 ExperimentKind::Sweep, ExperimentKind::Boundary})
    if (to_string(k) == s) return k;
  throw ConfigError("config.experiment: unknown experiment \"" + s + "\"");
}

ModelId model_id_from_string(const std::string& s) {
  for (auto m : {ModelId::MP_AM, ModelId::MP_AD, ModelId::MP_AMA, ModelId::MP_ADA, ModelId::TranslatingDisk})
    if (to_string(m) == s) return m;
  if (s == "rotating-disk") return ModelId::MP_ADA;
  throw ConfigError("config.model: unknown model id \"" + s + "\"");
}

bool is_annular(ModelId m) { return m == ModelId::MP_AMA || m == ModelId::MP_ADA || m == ModelId::TranslatingDisk; }

std::vector<ResolvedGrid> ExperimentConfig::resolved_grids() const {
  const double length = is_annular(model) ? params.r2 - params.r1 : params.H;
  std::vector<ResolvedGrid> out;
  for (int j : grids) {
    ResolvedGrid g;
    g.j = j;
    const double dx = grid_law.dx_factor / (grid_law.base * j);
    const double cells = length / dx;
    g.N = static_cast<int>(std::lround(cells));
    if (std::abs(cells - g.N) > 1e-9 * cells)
      throw ConfigError("config.grid_law: spacing " + std::to_string(dx) + " does not divide the domain length");
    if (g.N < 4) throw ConfigError("config.grids: grid " + std::to_string(j) + " has fewer than 4 cells");
    g.dx = length / g.N;
    g.dt = grid_law.dt_factor / (grid_law.base * j);
    out.push_back(g);
  }
  return out;
}

RectSchemeConfig ExperimentConfig::scheme_config(double dt) const {
  RectSchemeConfig c;
  c.variant = scheme;
  c.beta_d = beta_d;
  c.dt = dt;
  c.alpha = alpha;
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  ObjectReader r(root, "config");
  ExperimentConfig c;
  auto note = [&](const char* key) {
    if (!r.has(key)) c.defaults_used.push_back(key);
  };
  for (const char* key : {"experiment", "scheme", "beta_d", "alpha", "params", "forcing", "grids", "grid_law", "T",
                          "max_over_time", "samples", "probe", "sweep", "boundary", "stability", "seed", "threads",
                          "output"})
    note(key);

  if (!r.has("model")) fail("config.model", "required field missing");
  c.model = model_id_from_string(r.string("model", ""));
  if (r.has("experiment")) c.experiment = experiment_kind_from_string(r.string("experiment", ""));
  if (r.has("scheme")) {
    try {
      c.scheme = scheme_variant_from_string(r.string("scheme", ""));
    } catch (const std::invalid_argument&) {
      fail("config.scheme", "unknown scheme \"" + r.string("scheme", "") + "\"");
    }
  }
  c.beta_d = r.non_negative("beta_d", c.beta_d);
  c.alpha = r.number("alpha", c.alpha);
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) fail("config.alpha", "must be in (0, 1]");
  read_params(r, c);

  if (c.model == ModelId::MP_AMA) c.forcing.amplitude = 1.0;
  if (r.has("forcing")) {
    ObjectReader f(r.child("forcing"), "config.forcing");
    c.forcing.amplitude = f.number("amplitude", c.forcing.amplitude);
    c.forcing.omega = f.number("omega", c.forcing.omega);
    f.finish();
  }

  if (r.has("grids")) {
    const json& g = r.child("grids");
    if (!g.is_array()) fail("config.grids", "expected an array of positive integers");
    c.grids.clear();
    for (size_t i = 0; i < g.size(); ++i) {
      if (!g[i].is_number_integer() || g[i].get<long>() < 1 || g[i].get<long>() > 10000)
        fail("config.grids[" + std::to_string(i) + "]", "expected an integer in [1, 10000]");
      c.grids.push_back(g[i].get<int>());
    }
  }
  if (r.has("grid_law")) {
    ObjectReader g(r.child("grid_law"), "config.grid_law");
    c.grid_law.base = g.positive("base", c.grid_law.base);
    c.grid_law.dx_factor = g.positive("dx_factor", c.grid_law.dx_factor);
    c.grid_law.dt_factor = g.positive("dt_factor", c.grid_law.dt_factor);
    g.finish();
  }
  c.T = r.non_negative("T", c.T);
  c.max_over_time = r.boolean("max_over_time", c.max_over_time);
  const long samples = r.integer("samples", c.samples);
  if (samples < 1 || samples > 1000000) fail("config.samples", "must be in [1, 1000000]");
  c.samples = static_cast<int>(samples);

  if (r.has("probe")) read_probe(r.child("probe"), c);
  if (r.has("sweep")) read_sweep(r.child("sweep"), c.sweep);
  if (r.has("boundary")) read_boundary(r.child("boundary"), c.boundary);
  if (r.has("stability")) read_stability(r.child("stability"), c.stability);
  c.boundary.trace.roots = c.stability;

  const long seed = r.integer("seed", static_cast<long>(c.seed));
  if (seed < 0) fail("config.seed", "must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.probe.settings.seed = c.seed;
  const long threads = r.integer("threads", c.threads);
  if (threads < 0 || threads > 1024) fail("config.threads", "must be in [0, 1024]");
  c.threads = static_cast<int>(threads);
  if (r.has("output")) {
    ObjectReader o(r.child("output"), "config.output");
    c.out_dir = o.string("dir", c.out_dir);
    c.prefix = o.string("prefix", c.prefix);
    o.finish();
  }
  r.finish();

  if (c.scheme == SchemeVariant::TP && c.model == ModelId::TranslatingDisk)
    fail("config.scheme", "TP is not available for the translating disk");
  if (c.experiment == ExperimentKind::Sweep || c.experiment == ExperimentKind::Boundary) {
    if (c.model != ModelId::MP_AD && c.model != ModelId::MP_ADA)
      fail("config.model", "sweep and boundary experiments need MP-AD or MP-ADA");
  }
  if (c.experiment == ExperimentKind::Probe && c.model == ModelId::TranslatingDisk)
    fail("config.model", "no probe problem for the translating disk");
  try {
    c.params.validate();
  } catch (const std::invalid_argument& e) {
    fail("config.params", e.what());
  }
  if (c.experiment == ExperimentKind::Converge || c.experiment == ExperimentKind::Simulate) {
    if (c.grids.empty()) fail("config.grids", "at least one grid is required");
    c.resolved_grids();
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
  const ModelProblemParams& p = c.params;
  const ProbeSettings& s = c.probe.settings;
  const BoundaryTraceOptions& t = c.boundary.trace;
  json probe = {{"T", s.T},
                {"min_steps", s.min_steps},
                {"max_steps", s.max_steps},
                {"threshold", s.threshold},
                {"slope_tol", s.slope_tol},
                {"abort_factor", s.abort_factor},
                {"mass", c.probe.mass},
                {"delta", c.probe.delta},
                {"grid",
                 {{"N", is_annular(c.model) ? c.probe.annular_grid.N : c.probe.rect_grid.N},
                  {"H", c.probe.rect_grid.H},
                  {"r1", c.probe.annular_grid.r1},
                  {"r2", c.probe.annular_grid.r2},
                  {"nu", c.probe.rect_grid.nu}}}};
  if (c.probe.bisect)
    probe["bisect"] = {{"enabled", true},
                       {"lo", c.probe.bisect_lo},
                       {"hi", c.probe.bisect_hi},
                       {"tol", c.probe.bisect_tol},
                       {"max_iter", c.probe.bisect_max_iter}};
  json R = std::isinf(c.stability.R) ? json("inf") : json(c.stability.R);
  json j = {
      {"experiment", to_string(c.experiment)},
      {"model", to_string(c.model)},
      {"scheme", to_string(c.scheme)},
      {"beta_d", c.beta_d},
      {"alpha", c.alpha},
      {"params",
       {{"rho", p.rho},
        {"mu", p.mu},
        {"L", p.L},
        {"H", p.H},
        {"r1", p.r1},
        {"r2", p.r2},
        {"rho_b", p.rho_b},
        {"m_b", p.m_b},
        {"I_b", p.I_b},
        {"alpha_b", p.alpha_b},
        {"p0", p.p0}}},
      {"forcing", {{"amplitude", c.forcing.amplitude}, {"omega", c.forcing.omega}}},
      {"grids", c.grids},
      {"grid_law",
       {{"base", c.grid_law.base}, {"dx_factor", c.grid_law.dx_factor}, {"dt_factor", c.grid_law.dt_factor}}},
      {"T", c.T},
      {"max_over_time", c.max_over_time},
      {"samples", c.samples},
      {"probe", probe},
      {"sweep",
       {{"fixed", fixed_name(c.sweep.fixed)},
        {"value", c.sweep.value},
        {"x", range_json(c.sweep.x)},
        {"beta", range_json(c.sweep.beta)},
        {"probe", c.sweep.probe}}},
      {"boundary",
       {{"fixed", fixed_name(c.boundary.fixed)},
        {"value", c.boundary.value},
        {"x_min", t.x_min},
        {"x_max", t.x_max},
        {"nx", t.nx},
        {"beta_min", t.beta_min},
        {"beta_max", t.beta_max},
        {"ntheta", t.ntheta},
        {"coarse_nx", t.coarse_nx},
        {"coarse_nbeta", t.coarse_nbeta},
        {"step", t.step},
        {"max_points", t.max_points},
        {"verify", c.boundary.verify},
        {"offset", c.boundary.offset},
        {"verify_eps", c.boundary.verify_eps}}},
      {"stability",
       {{"eps", c.stability.eps},
        {"R", R},
        {"budget", c.stability.budget},
        {"residual_tol", c.stability.residual_tol},
        {"max_depth", c.stability.max_depth}}},
      {"seed", c.seed},
      {"threads", c.threads},
      {"output", {{"dir", c.out_dir}, {"prefix", c.prefix}}},
  };
  return j.dump();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string canonical_config(const ExperimentConfig& config) {
  json j = json::parse(dump_config(config));
  j.erase("threads");
  j.erase("output");
  return j.dump();
}

std::string config_hash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_config(config))));
  return buf;
}

}  // namespace amprb
