#include "amprb/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "amprb/annulus.hpp"
#include "amprb/parallel.hpp"
#include "amprb/plot.hpp"

namespace amprb {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string path_in(const ExperimentConfig& c, const std::string& suffix) {
  return (std::filesystem::path(c.out_dir) / (c.output_prefix() + suffix)).string();
}

void ensure_out_dir(const ExperimentConfig& c) {
  std::error_code ec;
  std::filesystem::create_directories(c.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory \"" + c.out_dir + "\": " + ec.message());
}

std::string write_csv(const ExperimentConfig& c, const std::string& suffix, const CsvTable& table) {
  const std::string p = path_in(c, suffix);
  write_text_file(p, render_csv(c, table));
  return p;
}

std::string write_json(const ExperimentConfig& c, const std::string& suffix, json body) {
  body["config_hash"] = config_hash(c);
  body["config"] = json::parse(canonical_config(c));
  const std::string p = path_in(c, suffix);
  write_text_file(p, body.dump(2) + "\n");
  return p;
}

// Outputs are named and labelled after the command that produced them.
ExperimentConfig as_command(const ExperimentConfig& config, ExperimentKind kind) {
  ExperimentConfig c = config;
  c.experiment = kind;
  return c;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Free text placed in a CSV cell.
std::string csv_text(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string verdict_name(bool stable) { return stable ? "stable" : "unstable"; }

void require_finite(double v, double t) {
  if (!std::isfinite(v)) throw NumericalError("non-finite solution at t = " + format_double(t));
}

double max_diff(const std::vector<double>& v, const std::function<double(int)>& exact, double t) {
  double m = 0.0;
  for (size_t k = 0; k < v.size(); ++k) {
    require_finite(v[k], t);
    m = std::max(m, std::abs(v[k] - exact(static_cast<int>(k))));
  }
  return m;
}

PistonMotion piston_motion(const ExperimentConfig& c) {
  PistonMotion m;
  m.amplitude = c.forcing.amplitude;
  m.omega = c.forcing.omega;
  return m;
}

ScalarForcing body_forcing(const ExperimentConfig& c) { return ScalarForcing::sine(c.forcing.amplitude, c.forcing.omega); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("CsvTable: row width does not match the header");
  rows.push_back(std::move(row));
}

std::string metadata_header(const ExperimentConfig& c) {
  std::ostringstream o;
  const StabilityOptions& s = c.stability;
  const BoundaryTraceOptions& t = c.boundary.trace;
  const ProbeSettings& p = c.probe.settings;
  o << "# amp-rb-lab " << to_string(c.experiment) << "\n";
  o << "# config_hash: fnv1a64:" << config_hash(c) << "\n";
  o << "# config: " << canonical_config(c) << "\n";
  o << "# defaults:";
  for (const auto& d : c.defaults_used) o << " " << d;
  o << "\n";
  o << "# grid_law: dx = " << format_double(c.grid_law.dx_factor) << "/(" << format_double(c.grid_law.base)
    << " j), dt = " << format_double(c.grid_law.dt_factor) << "/(" << format_double(c.grid_law.base) << " j)"
    << (c.grid_law.overridden() ? " (overridden)" : "") << "\n";
  o << "# roots: eps=" << format_double(s.eps) << " R=" << format_double(s.R) << " budget=" << s.budget
    << " residual_tol=" << format_double(s.residual_tol) << " max_depth=" << s.max_depth << "\n";
  o << "# continuation: step=" << format_double(t.step) << " nx=" << t.nx << " ntheta=" << t.ntheta
    << " coarse=" << t.coarse_nx << "x" << t.coarse_nbeta << " max_points=" << t.max_points << "\n";
  o << "# probe: T=" << format_double(p.T) << " threshold=" << format_double(p.threshold)
    << " slope_tol=" << format_double(p.slope_tol) << " min_steps=" << p.min_steps << " max_steps=" << p.max_steps
    << " seed=" << c.seed << "\n";
  return o.str();
}

std::string render_csv(const ExperimentConfig& c, const CsvTable& table) {
  std::ostringstream o;
  o << metadata_header(c);
  for (size_t i = 0; i < table.columns.size(); ++i) o << (i ? "," : "") << table.columns[i];
  o << "\n";
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << row[i];
    o << "\n";
  }
  return o.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
  out << text;
  if (!out) throw std::runtime_error("write failed for \"" + path + "\"");
}

// ================================================================ exact

namespace {

// Sixth-order central difference.
double derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x + 3 * h) - 9 * f(x + 2 * h) + 45 * f(x + h) - 45 * f(x - h) + 9 * f(x - 2 * h) - f(x - 3 * h)) /
         (60 * h);
}

}  // namespace

ExactReport cmd_exact(const ExperimentConfig& config) {
  const ExperimentConfig c = as_command(config, ExperimentKind::Exact);
  ExactReport rep;
  const ModelProblemParams prm = c.params;
  const int n = c.samples;
  auto tAt = [&](int k) { return c.T * k / n; };
  json info;
  std::vector<PlotSeries> plot;
  auto column_series = [&](const CsvTable& t, size_t col) {
    PlotSeries s;
    s.name = t.columns[col];
    for (const auto& row : t.rows) {
      s.x.push_back(std::stod(row[0]));
      s.y.push_back(std::stod(row[col]));
    }
    return s;
  };
  auto emit = [](std::vector<double> v) {
    std::vector<std::string> row;
    for (double x : v) row.push_back(format_double(x));
    return row;
  };

  switch (c.model) {
    case ModelId::MP_AM: {
      const PistonMotion m = piston_motion(c);
      rep.trace.columns = {"t", "y_b", "v_b", "a_v", "p_interface"};
      for (int k = 0; k <= n; ++k) {
        const PistonSolution s = piston_exact(prm, m, tAt(k));
        rep.trace.add(emit({s.t, s.y_b, s.v_b, s.a_v, s.pressure(0.0)}));
      }
      rep.profile.columns = {"y", "p", "v"};
      const PistonSolution s = piston_exact(prm, m, c.T);
      for (int k = 0; k <= n; ++k) {
        const double y = prm.H * k / n;
        rep.profile.add(emit({y, s.pressure(y), s.velocity()}));
      }
      info["added_mass"] = s.M_a;
      plot.push_back(column_series(rep.trace, 3));
      break;
    }
    case ModelId::MP_AD: {
      const SlidingBlockSolution s = sliding_block_solution(prm);
      rep.trace.columns = {"t", "u_b", "a_b"};
      for (int k = 0; k <= n; ++k) {
        const double t = tAt(k);
        rep.trace.add(emit({t, s.ub(t), -s.nu * s.lambda * s.lambda * s.ub(t)}));
      }
      rep.profile.columns = {"y", "u"};
      for (int k = 0; k <= n; ++k) {
        const double y = prm.H * k / n;
        rep.profile.add(emit({y, s.u(y, c.T)}));
      }
      info["lambda"] = s.lambda;
      plot.push_back(column_series(rep.trace, 1));
      break;
    }
    case ModelId::MP_AMA: {
      const ScalarForcing g = body_forcing(c);
      rep.trace.columns = {"t", "u_b", "a_u", "g_u", "p_interface"};
      for (int k = 0; k <= n; ++k) {
        const double t = tAt(k);
        const AnnularAddedMassSolution s = mp_ama_exact(prm, g, 0.0, t, prm.r1);
        rep.trace.add(emit({t, s.u_b, s.a_u, s.g_u, s.p_hat}));
      }
      rep.profile.columns = {"r", "p_hat", "u_hat", "v_hat"};
      for (int k = 0; k <= n; ++k) {
        const double r = prm.r1 + (prm.r2 - prm.r1) * k / n;
        const AnnularAddedMassSolution s = mp_ama_exact(prm, g, 0.0, c.T, r);
        rep.profile.add(emit({r, s.p_hat, s.u_hat, s.v_hat}));
      }
      info["added_mass"] = annular_added_mass(prm);
      plot.push_back(column_series(rep.trace, 2));
      break;
    }
    case ModelId::MP_ADA: {
      const RotatingDiskSolution s = rotating_disk_exact(rotating_disk_eigenvalue(prm), prm);
      const double rate = s.lambda * s.lambda * prm.nu();
      rep.trace.columns = {"t", "omega_b", "b_omega"};
      for (int k = 0; k <= n; ++k) {
        const double t = tAt(k);
        rep.trace.add(emit({t, s.omega_b(t), -rate * s.omega_b(t)}));
      }
      rep.profile.columns = {"r", "v_theta", "p"};
      for (int k = 0; k <= n; ++k) {
        const double r = prm.r1 + (prm.r2 - prm.r1) * k / n;
        rep.profile.add(emit({r, s.v_theta(r, c.T), s.pressure(r, c.T)}));
      }
      info["lambda"] = s.lambda;
      info["decay_rate"] = rate;
      plot.push_back(column_series(rep.trace, 1));
      break;
    }
    case ModelId::TranslatingDisk: {
      const TranslatingDiskSolution s = translating_disk_exact(translating_disk_eigenvalue(prm), prm);
      const double rate = s.lambda * s.lambda * prm.nu();
      rep.trace.columns = {"t", "u_b", "a_b"};
      for (int k = 0; k <= n; ++k) {
        const double t = tAt(k);
        rep.trace.add(emit({t, s.ub(t), -rate * s.ub(t)}));
      }
      // Divergence of (u_r, u_theta) = (u^ cos, -v^ sin) is cos(theta) ((r u^)_r - v^) / r.
      rep.profile.columns = {"r", "u_hat", "v_hat", "p_hat", "continuity_residual"};
      const double h = 2e-3 * (prm.r2 - prm.r1);
      for (int k = 0; k <= n; ++k) {
        const double r = prm.r1 + (prm.r2 - prm.r1) * k / n;
        const double d = derivative([&](double x) { return x * s.uhat(x, c.T); }, r, h);
        rep.profile.add(emit({r, s.uhat(r, c.T), s.vhat(r, c.T), s.phat(r, c.T), std::abs(d - s.vhat(r, c.T)) / r}));
      }
      info["lambda"] = s.lambda;
      info["decay_rate"] = rate;
      plot.push_back(column_series(rep.trace, 1));
      break;
    }
  }

  ensure_out_dir(c);
  rep.artifacts.files.push_back(write_csv(c, "_trace.csv", rep.trace));
  rep.artifacts.files.push_back(write_csv(c, "_profile.csv", rep.profile));
  PlotStyle style;
  style.title = to_string(c.model) + " exact solution";
  style.xlabel = "t";
  style.ylabel = plot[0].name;
  const std::string svg = path_in(c, ".svg");
  emit_plot(plot, style, svg);
  rep.artifacts.files.push_back(svg);
  info["model"] = to_string(c.model);
  rep.artifacts.files.push_back(write_json(c, ".json", info));
  return rep;
}

// ================================================================ grid runs

std::vector<std::string> tracked_quantities(ModelId model) {
  switch (model) {
    case ModelId::MP_AM: return {"p", "a_v", "v_b", "y_b", "v_fluid"};
    case ModelId::MP_AD: return {"v_b", "a_b", "u_fluid"};
    case ModelId::MP_AMA: return {"p", "a_u", "u_b", "u_fluid"};
    case ModelId::MP_ADA: return {"omega_b", "b_omega", "v_fluid"};
    case ModelId::TranslatingDisk: return {"u_b", "a_b", "u_fluid", "v_fluid", "p"};
  }
  return {};
}

namespace {

struct StepSample {
  double t = 0.0;
  BodyState body;
  double exact_v = 0.0;
  std::vector<double> errors;
};

// Runs the configured model on one grid; sample(s) is called at every time level.
void drive(const ExperimentConfig& c, const ResolvedGrid& rg, double T, const std::function<void(const StepSample&)>& sample) {
  const ModelProblemParams prm = c.params;
  const RectSchemeConfig cfg = c.scheme_config(rg.dt);
  switch (c.model) {
    case ModelId::MP_AM: {
      const RectGrid g(rg.N, prm.H);
      const PistonMotion m = piston_motion(c);
      auto obs = [&](const RectCoupledState& s) {
        const PistonSolution ex = piston_exact(prm, m, s.t);
        StepSample o{s.t, s.body, ex.v_b, {}};
        o.errors = {max_diff(s.p, [&](int k) { return ex.pressure(g.y(k)); }, s.t), std::abs(s.body.a - ex.a_v),
                    std::abs(s.body.v - ex.v_b), std::abs(s.body.x - ex.y_b),
                    max_diff(s.vel, [&](int) { return ex.v_b; }, s.t)};
        sample(o);
      };
      run_rect(RectProblem::MP_AM, cfg, prm, g, T, piston_initial_state(g, prm, m, rg.dt), piston_forcing(prm, m), obs);
      break;
    }
    case ModelId::MP_AD: {
      const RectGrid g(rg.N, prm.H);
      const SlidingBlockSolution sol = sliding_block_solution(prm);
      const double rate = sol.nu * sol.lambda * sol.lambda;
      auto obs = [&](const RectCoupledState& s) {
        const double ub = sol.ub(s.t);
        StepSample o{s.t, s.body, ub, {}};
        o.errors = {std::abs(s.body.v - ub), std::abs(s.body.a + rate * ub),
                    max_diff(s.vel, [&](int k) { return sol.u(g.y(k), s.t); }, s.t)};
        sample(o);
      };
      run_rect(RectProblem::MP_AD, cfg, prm, g, T, sliding_block_initial_state(g, prm, sol, rg.dt), {}, obs);
      break;
    }
    case ModelId::MP_AMA: {
      const RadialGrid g(rg.N, prm.r1, prm.r2);
      const ScalarForcing gs = body_forcing(c);
      auto obs = [&](const AnnularState& s) {
        const AnnularAddedMassSolution e0 = mp_ama_exact(prm, gs, 0.0, s.t, g.r1);
        std::vector<AnnularAddedMassSolution> ex;
        for (int k = 0; k <= g.N; ++k) ex.push_back(mp_ama_exact(prm, gs, 0.0, s.t, g.r(k)));
        StepSample o{s.t, s.body, e0.u_b, {}};
        o.errors = {max_diff(s.p, [&](int k) { return ex[k].p_hat; }, s.t), std::abs(s.body.a - e0.a_u),
                    std::abs(s.body.v - e0.u_b), max_diff(s.uhat, [&](int k) { return ex[k].u_hat; }, s.t)};
        sample(o);
      };
      run_annulus(AnnularProblem::MP_AMA, cfg, prm, g, T, mp_ama_initial_state(g, prm, gs, 0.0, rg.dt), gs.value,
                  obs);
      break;
    }
    case ModelId::MP_ADA: {
      const RadialGrid g(rg.N, prm.r1, prm.r2);
      const RotatingDiskSolution sol = rotating_disk_exact(rotating_disk_eigenvalue(prm), prm);
      const double rate = sol.lambda * sol.lambda * prm.nu();
      auto obs = [&](const AnnularState& s) {
        const double w = sol.omega_b(s.t);
        StepSample o{s.t, s.body, w, {}};
        o.errors = {std::abs(s.body.v - w), std::abs(s.body.a + rate * w),
                    max_diff(s.vhat, [&](int k) { return sol.v_theta(g.r(k), s.t); }, s.t)};
        sample(o);
      };
      run_annulus(AnnularProblem::MP_ADA, cfg, prm, g, T, rotating_disk_initial_state(g, sol, rg.dt), {}, obs);
      break;
    }
    case ModelId::TranslatingDisk: {
      const RadialGrid g(rg.N, prm.r1, prm.r2);
      const TranslatingDiskSolution sol = translating_disk_exact(translating_disk_eigenvalue(prm), prm);
      const double rate = sol.lambda * sol.lambda * prm.nu();
      auto obs = [&](const AnnularState& s) {
        const double ub = sol.ub(s.t);
        StepSample o{s.t, s.body, ub, {}};
        o.errors = {std::abs(s.body.v - ub), std::abs(s.body.a + rate * ub),
                    max_diff(s.uhat, [&](int k) { return sol.uhat(g.r(k), s.t); }, s.t),
                    max_diff(s.vhat, [&](int k) { return sol.vhat(g.r(k), s.t); }, s.t),
                    max_diff(s.p, [&](int k) { return sol.phat(g.r(k), s.t); }, s.t)};
        sample(o);
      };
      run_annulus(AnnularProblem::TRANSLATING_DISK, cfg, prm, g, T, translating_disk_initial_state(g, sol, rg.dt), {},
                  obs);
      break;
    }
  }
}

}  // namespace

std::vector<double> grid_errors(const ExperimentConfig& c, const ResolvedGrid& g) {
  std::vector<double> last, worst;
  drive(c, g, c.T, [&](const StepSample& s) {
    for (double e : s.errors) require_finite(e, s.t);
    require_finite(s.body.v, s.t);
    last = s.errors;
    if (worst.empty()) worst.assign(s.errors.size(), 0.0);
    for (size_t i = 0; i < s.errors.size(); ++i) worst[i] = std::max(worst[i], s.errors[i]);
  });
  return c.max_over_time ? worst : last;
}

// ================================================================ simulate

SimulationReport cmd_simulate(const ExperimentConfig& config) {
  const ExperimentConfig c = as_command(config, ExperimentKind::Simulate);
  SimulationReport rep;
  const ResolvedGrid g = c.resolved_grids().front();
  rep.trace.columns = {"t", "x", "v", "a", "v_exact", "v_error"};
  PlotSeries num{"numerical", {}, {}, ""}, ex{"exact", {}, {}, ""};
  try {
    drive(c, g, c.T, [&](const StepSample& s) {
      require_finite(s.body.v, s.t);
      require_finite(s.body.a, s.t);
      rep.trace.add({format_double(s.t), format_double(s.body.x), format_double(s.body.v), format_double(s.body.a),
                     format_double(s.exact_v), format_double(std::abs(s.body.v - s.exact_v))});
      num.x.push_back(s.t);
      num.y.push_back(s.body.v);
      ex.x.push_back(s.t);
      ex.y.push_back(s.exact_v);
    });
  } catch (const NumericalError& e) {
    rep.completed = false;
    rep.diagnosis = e.what();
  }
  ensure_out_dir(c);
  rep.artifacts.files.push_back(write_csv(c, ".csv", rep.trace));
  if (!num.x.empty()) {
    PlotStyle style;
    style.title = to_string(c.model) + " " + to_string(c.scheme) + " j=" + std::to_string(g.j);
    style.xlabel = "t";
    style.ylabel = "body velocity";
    const std::string svg = path_in(c, ".svg");
    emit_plot({num, ex}, style, svg);
    rep.artifacts.files.push_back(svg);
  }
  json info = {{"grid", {{"j", g.j}, {"N", g.N}, {"dx", g.dx}, {"dt", g.dt}}},
               {"completed", rep.completed},
               {"diagnosis", rep.diagnosis},
               {"steps", rep.trace.rows.empty() ? 0 : rep.trace.rows.size() - 1}};
  rep.artifacts.files.push_back(write_json(c, ".json", info));
  return rep;
}

// ================================================================ converge

double ConvergenceReport::rate(const std::string& q) const {
  for (size_t i = 0; i < quantities.size(); ++i)
    if (quantities[i] == q) return rates[i];
  throw std::out_of_range("unknown quantity " + q);
}

double ConvergenceReport::max_error(const std::string& q) const {
  for (size_t i = 0; i < quantities.size(); ++i)
    if (quantities[i] == q) {
      double m = 0.0;
      for (const auto& g : grids)
        if (g.ok) m = std::max(m, g.errors[i]);
      return m;
    }
  throw std::out_of_range("unknown quantity " + q);
}

ConvergenceReport cmd_converge(const ExperimentConfig& config) {
  const ExperimentConfig c = as_command(config, ExperimentKind::Converge);
  ConvergenceReport rep;
  rep.quantities = tracked_quantities(c.model);
  const std::vector<ResolvedGrid> grids = c.resolved_grids();
  rep.grids.resize(grids.size());
  parallel_for(
      grids.size(),
      [&](size_t i) {
        GridResult& r = rep.grids[i];
        r.grid = grids[i];
        const auto start = std::chrono::steady_clock::now();
        try {
          r.errors = grid_errors(c, grids[i]);
        } catch (const NumericalError& e) {
          r.ok = false;
          r.diagnosis = e.what();
          r.errors.assign(rep.quantities.size(), kNaN);
        }
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      },
      c.threads);

  for (size_t q = 0; q < rep.quantities.size(); ++q) {
    std::vector<double> h, e;
    for (const auto& g : rep.grids)
      if (g.ok && g.errors[q] > 0.0) {
        h.push_back(g.grid.dx);
        e.push_back(g.errors[q]);
      }
    const bool roundoff = !e.empty() && *std::max_element(e.begin(), e.end()) < 1e-12;
    rep.rates.push_back(e.size() >= 2 && !roundoff ? fit_convergence_rate(h, e) : kNaN);
  }

  CsvTable t;
  t.columns = {"j", "N", "dx", "dt", "status"};
  for (const auto& q : rep.quantities) t.columns.push_back("err_" + q);
  for (const auto& g : rep.grids) {
    std::vector<std::string> row = {std::to_string(g.grid.j), std::to_string(g.grid.N), format_double(g.grid.dx),
                                    format_double(g.grid.dt), g.ok ? "ok" : "failed: " + csv_text(g.diagnosis)};
    for (double e : g.errors) row.push_back(format_double(e));
    t.add(row);
  }
  std::vector<std::string> rateRow = {"rate", "", "", "", "fit"};
  for (double r : rep.rates) rateRow.push_back(format_double(r));
  t.add(rateRow);

  ensure_out_dir(c);
  rep.artifacts.files.push_back(write_csv(c, ".csv", t));
  std::vector<PlotSeries> series;
  for (size_t q = 0; q < rep.quantities.size(); ++q) {
    PlotSeries s;
    s.name = rep.quantities[q];
    for (const auto& g : rep.grids)
      if (g.ok && g.errors[q] > 0.0) {
        s.x.push_back(g.grid.dx);
        s.y.push_back(g.errors[q]);
      }
    if (!s.x.empty()) series.push_back(s);
  }
  if (!series.empty()) {
    PlotStyle style;
    style.title = to_string(c.model) + " " + to_string(c.scheme) + " convergence";
    style.xlabel = "grid spacing";
    style.ylabel = "max-norm error";
    style.log_x = style.log_y = true;
    style.markers = true;
    const std::string svg = path_in(c, ".svg");
    emit_plot(series, style, svg);
    rep.artifacts.files.push_back(svg);
  }
  json grids_json = json::array();
  for (const auto& g : rep.grids) {
    json errs;
    for (size_t q = 0; q < rep.quantities.size(); ++q) errs[rep.quantities[q]] = number_or_null(g.errors[q]);
    grids_json.push_back({{"j", g.grid.j},
                          {"N", g.grid.N},
                          {"dx", g.grid.dx},
                          {"dt", g.grid.dt},
                          {"ok", g.ok},
                          {"diagnosis", g.diagnosis},
                          {"errors", errs},
                          {"wall_seconds", g.wall_seconds}});
  }
  json rates;
  for (size_t q = 0; q < rep.quantities.size(); ++q) rates[rep.quantities[q]] = number_or_null(rep.rates[q]);
  rep.artifacts.files.push_back(write_json(c, ".json", {{"grids", grids_json}, {"rates", rates}}));
  return rep;
}

// ================================================================ probe

namespace {

std::string region_list(const RootReport& r) {
  if (r.roots.empty()) return "none";
  std::vector<std::string> names;
  for (const auto& root : r.roots) names.push_back(to_string(root.region));
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : "+") + n;
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

TheoryVerdict theory_at(const ExperimentConfig& c, double mass, double delta, double beta) {
  TheoryVerdict v;
  RootReport r;
  if (c.model == ModelId::MP_AD) {
    const RectStabilityParams p{mass, delta, beta};
    try {
      r = unstable_roots_rect(p, c.scheme, c.stability);
    } catch (const MethodDisagreement& e) {
      r = unstable_roots_rect(p, c.scheme, RootMethod::Polynomial, c.stability);
      v.note = "root-count methods disagree";
    }
  } else if (c.model == ModelId::MP_ADA) {
    r = unstable_roots_annular({mass, delta, beta}, c.probe.annular_grid.geometry(), c.scheme, c.stability);
  } else {
    throw std::invalid_argument("theory_at: model " + to_string(c.model) + " has no amplification-factor analysis");
  }
  v.stable = r.stable();
  v.count = static_cast<int>(r.roots.size());
  v.max_modulus = r.stable() ? 0.0 : r.max_modulus();
  v.regions = region_list(r);
  return v;
}

ProbeVerdict run_probe_at(const ExperimentConfig& c, double mass, double delta, double beta,
                          const ProbeSettings& settings, ProbeSeries* series) {
  switch (c.model) {
    case ModelId::MP_AM: return probe_mp_am(mass, c.scheme, settings, series);
    case ModelId::MP_AMA: return probe_mp_ama(mass, c.scheme, settings, series);
    case ModelId::MP_AD: return probe_mp_ad({mass, delta, beta}, c.scheme, settings, c.probe.rect_grid, series);
    case ModelId::MP_ADA:
      return probe_mp_ada({mass, delta, beta}, c.scheme, settings, c.probe.annular_grid, series);
    case ModelId::TranslatingDisk: break;
  }
  throw ConfigError("config.model: no probe problem for " + to_string(c.model));
}

namespace {

// Added-mass models: TP is stable iff both amplification factors lie in the unit disk.
std::pair<std::string, std::string> added_mass_theory(const ExperimentConfig& c, double mass) {
  if (c.scheme != SchemeVariant::TP) return {"stable", "none"};
  if (!(mass > 0.0)) return {"unstable", "I"};
  double m = 0.0;
  for (Complex a : tp_mp_am_amplification(mass)) m = std::max(m, std::abs(a));
  return {m > 1.0 + c.stability.eps ? "unstable" : "stable", m > 1.0 + c.stability.eps ? "I" : "none"};
}

}  // namespace

ProbeReport cmd_probe(const ExperimentConfig& config) {
  const ExperimentConfig c = as_command(config, ExperimentKind::Probe);
  ProbeReport rep;
  const ProbeSpec& p = c.probe;
  auto theory = [&](double mass) -> std::pair<std::string, std::string> {
    if (c.model == ModelId::MP_AM || c.model == ModelId::MP_AMA) return added_mass_theory(c, mass);
    const TheoryVerdict v = theory_at(c, mass, p.delta, c.beta_d);
    return {verdict_name(v.stable), v.regions};
  };
  rep.verdict = run_probe_at(c, p.mass, p.delta, c.beta_d, p.settings, &rep.series);
  std::tie(rep.theory_verdict, rep.theory_regions) = theory(p.mass);

  if (p.bisect) {
    double lo = p.bisect_lo, hi = p.bisect_hi;
    const bool loStable = run_probe_at(c, lo, p.delta, c.beta_d, p.settings).stable;
    const bool hiStable = run_probe_at(c, hi, p.delta, c.beta_d, p.settings).stable;
    if (loStable == hiStable)
      throw NumericalError("probe bisection: both ends of [" + format_double(lo) + ", " + format_double(hi) +
                           "] are " + verdict_name(loStable));
    for (int it = 0; it < p.bisect_max_iter && hi - lo > p.bisect_tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      const bool s = run_probe_at(c, mid, p.delta, c.beta_d, p.settings).stable;
      rep.bisection.push_back({lo, hi, mid, s});
      (s == loStable ? lo : hi) = mid;
    }
    rep.threshold = 0.5 * (lo + hi);
  }

  ensure_out_dir(c);
  CsvTable t;
  t.columns = {"t", "amplitude", "accel"};
  for (size_t i = 0; i < rep.series.t.size(); ++i)
    t.add({format_double(rep.series.t[i]), format_double(rep.series.amplitude[i]), format_double(rep.series.accel[i])});
  rep.artifacts.files.push_back(write_csv(c, ".csv", t));
  if (p.bisect) {
    CsvTable b;
    b.columns = {"iteration", "lo", "hi", "mid", "verdict"};
    for (size_t i = 0; i < rep.bisection.size(); ++i) {
      const auto& s = rep.bisection[i];
      b.add({std::to_string(i), format_double(s.lo), format_double(s.hi), format_double(s.mid), verdict_name(s.stable)});
    }
    rep.artifacts.files.push_back(write_csv(c, "_bisection.csv", b));
  }
  if (!rep.series.t.empty()) {
    PlotSeries s{"amplitude", rep.series.t, rep.series.amplitude, ""};
    PlotStyle style;
    style.title = to_string(c.model) + " " + to_string(c.scheme) + " probe";
    style.xlabel = "t";
    style.ylabel = "amplitude";
    style.log_y = true;
    const std::string svg = path_in(c, ".svg");
    emit_plot({s}, style, svg);
    rep.artifacts.files.push_back(svg);
  }
  const ProbeVerdict& v = rep.verdict;
  json info = {{"verdict", verdict_name(v.stable)},
               {"growth_rate", number_or_null(v.growth_rate)},
               {"signature", to_string(v.signature)},
               {"period", v.period},
               {"max_amplitude", number_or_null(v.max_amplitude)},
               {"initial_amplitude", v.initial_amplitude},
               {"steps", v.steps},
               {"steps_to_threshold", v.steps_to_threshold},
               {"dt", v.dt},
               {"theory_verdict", rep.theory_verdict},
               {"theory_regions", rep.theory_regions},
               {"expected_signature", nullptr}};
  for (auto r : {InstabilityRegion::I, InstabilityRegion::II, InstabilityRegion::III, InstabilityRegion::IV})
    if (rep.theory_regions == to_string(r)) info["expected_signature"] = to_string(expected_signature(r));
  if (rep.threshold) info["threshold"] = *rep.threshold;
  rep.artifacts.files.push_back(write_json(c, ".json", info));
  return rep;
}

// ================================================================ sweep

namespace {

const char* kStableColor = "#b8e0b8";
const char* kUnstableColor = "#f2b8b8";
const char* kMismatchColor = "#404040";
const char* kFailedColor = "#ffffff";

std::vector<PlotCell> lattice_cells(const Range& xr, const Range& yr, const std::function<std::string(int, int)>& color) {
  std::vector<PlotCell> cells;
  const double hx = xr.n > 1 ? (xr.max - xr.min) / (xr.n - 1) : 1.0;
  const double hy = yr.n > 1 ? (yr.max - yr.min) / (yr.n - 1) : 1.0;
  for (int j = 0; j < yr.n; ++j)
    for (int i = 0; i < xr.n; ++i) {
      const double x = xr.at(i), y = yr.at(j);
      cells.push_back({x - hx / 2, y - hy / 2, x + hx / 2, y + hy / 2, color(i, j)});
    }
  return cells;
}

}  // namespace

SweepReport cmd_sweep(const ExperimentConfig& config) {
  const ExperimentConfig c = as_command(config, ExperimentKind::Sweep);
  SweepReport rep;
  const SweepSpec& s = c.sweep;
  rep.nx = s.x.n;
  rep.nbeta = s.beta.n;
  const size_t total = static_cast<size_t>(rep.nx) * rep.nbeta;
  rep.points.resize(total);
  parallel_for(
      total,
      [&](size_t k) {
        SweepPoint& pt = rep.points[k];
        pt.ix = static_cast<int>(k % rep.nx);
        pt.ib = static_cast<int>(k / rep.nx);
        const double x = s.x.at(pt.ix);
        pt.beta = s.beta.at(pt.ib);
        pt.mass = s.fixed == FixedParameter::Delta ? x : s.value;
        pt.delta = s.fixed == FixedParameter::Delta ? s.value : x;
        try {
          pt.theory = theory_at(c, pt.mass, pt.delta, pt.beta);
          pt.theory_ok = true;
        } catch (const std::exception& e) {
          pt.error = std::string("theory: ") + e.what();
        }
        if (!s.probe) return;
        try {
          ProbeSettings ps = c.probe.settings;
          ps.seed = mix_seed(c.seed, k);
          pt.probe = run_probe_at(c, pt.mass, pt.delta, pt.beta, ps);
          pt.probe_ok = true;
        } catch (const std::exception& e) {
          pt.error += (pt.error.empty() ? "" : "; ") + std::string("probe: ") + e.what();
        }
      },
      c.threads);

  auto at = [&](int i, int j) -> const SweepPoint& { return rep.points[static_cast<size_t>(j) * rep.nx + i]; };
  for (auto& pt : rep.points) {
    if (!pt.theory_ok) continue;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const int i = pt.ix + di, j = pt.ib + dj;
        if (i < 0 || j < 0 || i >= rep.nx || j >= rep.nbeta) continue;
        const SweepPoint& q = at(i, j);
        if (q.theory_ok && q.theory.stable != pt.theory.stable) pt.boundary_adjacent = true;
      }
  }
  for (const auto& pt : rep.points) {
    if (!pt.error.empty()) ++rep.failures;
    if (!pt.compared()) continue;
    ++rep.compared;
    if (pt.agree())
      ++rep.agreed;
    else if (!pt.boundary_adjacent)
      ++rep.interior_mismatches;
  }

  CsvTable t;
  t.columns = {"ix",    "ib",          "mass",      "delta",     "beta_d", "theory", "theory_count",      "theory_regions",
               "max_modulus", "probe", "growth_rate", "signature", "agree", "boundary_adjacent", "error"};
  for (const auto& pt : rep.points) {
    const std::string err = csv_text(pt.error);
    t.add({std::to_string(pt.ix), std::to_string(pt.ib), format_double(pt.mass), format_double(pt.delta),
           format_double(pt.beta), pt.theory_ok ? verdict_name(pt.theory.stable) : "",
           pt.theory_ok ? std::to_string(pt.theory.count) : "", pt.theory_ok ? pt.theory.regions : "",
           pt.theory_ok ? format_double(pt.theory.max_modulus) : "", pt.probe_ok ? verdict_name(pt.probe.stable) : "",
           pt.probe_ok ? format_double(pt.probe.growth_rate) : "", pt.probe_ok ? to_string(pt.probe.signature) : "",
           pt.compared() ? (pt.agree() ? "1" : "0") : "", pt.boundary_adjacent ? "1" : "0", err});
  }
  ensure_out_dir(c);
  rep.artifacts.files.push_back(write_csv(c, ".csv", t));
  if (total > 0) {
    PlotStyle style;
    style.title = to_string(c.model) + " " + to_string(c.scheme) + " stability sweep";
    style.xlabel = s.fixed == FixedParameter::Delta ? "mass parameter" : "delta";
    style.ylabel = "beta_d";
    const auto cells = lattice_cells(s.x, s.beta, [&](int i, int j) -> std::string {
      const SweepPoint& p = at(i, j);
      if (!p.theory_ok) return kFailedColor;
      if (p.compared() && !p.agree()) return kMismatchColor;
      return p.theory.stable ? kStableColor : kUnstableColor;
    });
    const std::string svg = path_in(c, ".svg");
    emit_region_plot(cells, {}, style, svg);
    rep.artifacts.files.push_back(svg);
  }
  rep.artifacts.files.push_back(write_json(c, ".json",
                                           {{"points", total},
                                            {"compared", rep.compared},
                                            {"agreed", rep.agreed},
                                            {"agreement", rep.agreement()},
                                            {"interior_mismatches", rep.interior_mismatches},
                                            {"failures", rep.failures}}));
  return rep;
}

// ================================================================ boundary

BoundaryReport cmd_boundary(const ExperimentConfig& config) {
  const ExperimentConfig c = as_command(config, ExperimentKind::Boundary);
  BoundaryReport rep;
  const BoundarySpec& b = c.boundary;
  BoundaryTraceOptions opts = b.trace;
  opts.roots = c.stability;
  opts.threads = c.threads;
  const bool tp = c.scheme == SchemeVariant::TP;
  const AnnularGeometry geom = c.probe.annular_grid.geometry();
  if (c.model == ModelId::MP_AD)
    rep.curves = trace_boundary_rect(b.fixed, b.value, c.scheme, opts);
  else
    rep.curves = trace_boundary_annular(b.fixed, b.value, c.scheme, geom, opts);

  // Plane coordinates (x, y) to (mass, delta, beta).
  auto point = [&](double x, double y) -> std::array<double, 3> {
    if (tp) return {y, x, 0.0};
    if (b.fixed == FixedParameter::Delta) return {x, b.value, y};
    return {b.value, x, y};
  };
  ExperimentConfig fine = c;
  fine.stability.eps = b.verify_eps;
  auto count = [&](double x, double y) {
    const auto p = point(x, y);
    return theory_at(fine, p[0], p[1], p[2]).count;
  };

  rep.separates.resize(rep.curves.size());
  for (size_t k = 0; k < rep.curves.size(); ++k) rep.separates[k].assign(rep.curves[k].points.size(), -1);
  if (b.verify) {
    std::vector<std::pair<size_t, size_t>> idx;
    for (size_t k = 0; k < rep.curves.size(); ++k)
      for (size_t i = 0; i < rep.curves[k].points.size(); ++i) idx.push_back({k, i});
    const double off = b.offset;
    parallel_for(
        idx.size(),
        [&](size_t n) {
          const auto [k, i] = idx[n];
          const auto [x, y] = rep.curves[k].points[i];
          if (x < 2 * off || y < 2 * off) return;
          try {
            const bool changes = count(x, y - off) != count(x, y + off) || count(x - off, y) != count(x + off, y);
            rep.separates[k][i] = changes ? 1 : 0;
          } catch (const std::exception&) {
            rep.separates[k][i] = 0;
          }
        },
        c.threads);
  }

  if (tp && c.model == ModelId::MP_AD) {
    // Upper envelope per delta is the stability threshold.
    std::vector<std::array<double, 2>> top;
    for (const auto& cv : rep.curves)
      for (const auto& p : cv.points) {
        auto it = std::find_if(top.begin(), top.end(), [&](const auto& q) { return q[0] == p[0]; });
        if (it == top.end())
          top.push_back(p);
        else
          (*it)[1] = std::max((*it)[1], p[1]);
      }
    double num = 0.0, den = 0.0, dev = 0.0;
    for (const auto& [d, m] : top) {
      const double ce = dtn_coefficient_eta(d);
      num += m * ce;
      den += ce * ce;
      dev = std::max(dev, std::abs(m - 1.405 * ce) / (1.405 * ce));
    }
    rep.tp_constant = den > 0.0 ? num / den : kNaN;
    rep.tp_max_deviation = top.empty() ? kNaN : dev;
  }

  const std::string xname = tp ? "delta" : (b.fixed == FixedParameter::Delta ? "mass" : "delta");
  const std::string yname = tp ? "mass" : "beta_d";
  CsvTable t;
  t.columns = {"curve", "kind", "truncated", xname, yname, "separates"};
  for (size_t k = 0; k < rep.curves.size(); ++k)
    for (size_t i = 0; i < rep.curves[k].points.size(); ++i) {
      const auto& cv = rep.curves[k];
      t.add({std::to_string(k), cv.kind, cv.truncated ? "1" : "0", format_double(cv.points[i][0]),
             format_double(cv.points[i][1]), std::to_string(rep.separates[k][i])});
    }
  ensure_out_dir(c);
  rep.artifacts.files.push_back(write_csv(c, ".csv", t));

  // Region plot: coarse lattice of root counts under the traced curves.
  const double xlo = (tp || b.fixed == FixedParameter::Mass) ? std::max(opts.x_min, 1e-2) : opts.x_min;
  const Range xr{xlo, opts.x_max, std::max(2, opts.coarse_nx)};
  const Range yr{opts.beta_min, opts.beta_max, std::max(2, opts.coarse_nbeta)};
  std::vector<int> counts(static_cast<size_t>(xr.n) * yr.n, -1);
  parallel_for(
      counts.size(),
      [&](size_t n) {
        try {
          counts[n] = count(xr.at(static_cast<int>(n % xr.n)), yr.at(static_cast<int>(n / xr.n)));
        } catch (const std::exception&) {
        }
      },
      c.threads);
  const auto cells = lattice_cells(xr, yr, [&](int i, int j) -> std::string {
    const int n = counts[static_cast<size_t>(j) * xr.n + i];
    return n < 0 ? kFailedColor : (n == 0 ? kStableColor : kUnstableColor);
  });
  std::vector<PlotSeries> overlay;
  for (size_t k = 0; k < rep.curves.size(); ++k) {
    PlotSeries s;
    s.name = rep.curves[k].kind + " " + std::to_string(k);
    s.color = "#000000";
    for (const auto& p : rep.curves[k].points) {
      s.x.push_back(p[0]);
      s.y.push_back(p[1]);
    }
    overlay.push_back(s);
  }
  PlotStyle style;
  style.title = to_string(c.model) + " " + to_string(c.scheme) + " stability boundary";
  style.xlabel = xname;
  style.ylabel = yname;
  const std::string svg = path_in(c, ".svg");
  emit_region_plot(cells, overlay, style, svg);
  rep.artifacts.files.push_back(svg);

  json curves = json::array();
  for (size_t k = 0; k < rep.curves.size(); ++k) {
    int ok = 0, bad = 0;
    for (int s : rep.separates[k]) (s == 1 ? ok : bad) += s >= 0;
    curves.push_back({{"kind", rep.curves[k].kind},
                      {"points", rep.curves[k].points.size()},
                      {"truncated", rep.curves[k].truncated},
                      {"verified", ok},
                      {"not_separating", bad}});
  }
  json info = {{"curves", curves}};
  if (tp && c.model == ModelId::MP_AD) {
    info["tp_constant"] = number_or_null(rep.tp_constant);
    info["tp_max_deviation"] = number_or_null(rep.tp_max_deviation);
  }
  rep.artifacts.files.push_back(write_json(c, ".json", info));
  return rep;
}

// ================================================================ dispatch

Artifacts run_experiment(const ExperimentConfig& c) {
  switch (c.experiment) {
    case ExperimentKind::Exact: return cmd_exact(c).artifacts;
    case ExperimentKind::Simulate: {
      SimulationReport r = cmd_simulate(c);
      if (!r.completed) throw NumericalError("simulation failed: " + r.diagnosis);
      return r.artifacts;
    }
    case ExperimentKind::Converge: return cmd_converge(c).artifacts;
    case ExperimentKind::Probe: return cmd_probe(c).artifacts;
    case ExperimentKind::Sweep: return cmd_sweep(c).artifacts;
    case ExperimentKind::Boundary: return cmd_boundary(c).artifacts;
  }
  return {};
}

}  // namespace amprb
