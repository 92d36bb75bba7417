#include <doctest.h>

#include "amprb/config.hpp"
#include "amprb/harness.hpp"
#include "amprb/plot.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace amprb;
namespace fs = std::filesystem;

namespace {

std::string scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("amprb_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

ExperimentConfig config(const std::string& text, const std::string& dir) {
  ExperimentConfig c = parse_config(text);
  c.out_dir = dir;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

size_t count_of(const std::string& text, const std::string& needle) {
  size_t n = 0;
  for (size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(AMPRB_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config defaults and validation") {
  const ExperimentConfig c = parse_config(R"({"model": "MP-AM"})");
  CHECK(c.model == ModelId::MP_AM);
  CHECK(c.alpha == 0.5);
  CHECK(c.beta_d == 1.0);
  CHECK(c.scheme == SchemeVariant::AMP_VC);
  CHECK(c.grids == std::vector<int>{1, 2, 3, 4});
  CHECK(std::find(c.defaults_used.begin(), c.defaults_used.end(), "grids") != c.defaults_used.end());
  const auto g = c.resolved_grids();
  REQUIRE(g.size() == 4);
  for (size_t i = 0; i < g.size(); ++i) {
    CHECK(g[i].N == 10 * (i + 1));
    CHECK(g[i].dt == doctest::Approx(1.0 / (10.0 * (i + 1))));
    CHECK(g[i].dx == doctest::Approx(g[i].dt));
  }

  CHECK(error_of(R"({"model": "MP-XX"})").rfind("config.model:", 0) == 0);
  CHECK(error_of(R"({})").rfind("config.model:", 0) == 0);
  CHECK(error_of(R"({"model": "MP-AM", "colour": 1})").rfind("config.colour:", 0) == 0);
  CHECK(error_of(R"({"model": "MP-AM", "params": {"m_b": -1}})").rfind("config.params.m_b:", 0) == 0);
  CHECK(error_of(R"({"model": "MP-AM", "params": {"mb": 1}})").rfind("config.params.mb:", 0) == 0);
  CHECK(error_of(R"({"model": "MP-AM", "grids": [1, 0]})").rfind("config.grids[1]:", 0) == 0);
  CHECK(error_of(R"({"model": "MP-AM", "scheme": "XYZ"})").rfind("config.scheme:", 0) == 0);
  CHECK(error_of(R"({"model": "MP-AM", "probe": {"T": "long"}})").rfind("config.probe.T:", 0) == 0);
  CHECK(error_of(R"({"model": "MP-AM", "experiment": "sweep"})").rfind("config.model:", 0) == 0);
  CHECK(error_of(R"({"model": "MP-AM", "sweep": {"x": {"min": 2, "max": 1}}})").rfind("config.sweep.x:", 0) == 0);
  CHECK(error_of("{not json").rfind("config:", 0) == 0);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("disk parameters follow the body density") {
  const ExperimentConfig c = parse_config(R"({"model": "MP-ADA", "params": {"rho_b": 2}})");
  CHECK(c.params.m_b == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(c.params.I_b == doctest::Approx(std::numbers::pi));
  const ExperimentConfig d = parse_config(R"({"model": "translating-disk"})");
  CHECK(d.params.m_b == 0.0);
  const auto g = d.resolved_grids();
  CHECK(g[1].N == 20);
}

TEST_CASE("grid-law override is honoured and round-trips") {
  const ExperimentConfig c =
      parse_config(R"({"model": "MP-AD", "grids": [2, 4], "grid_law": {"dt_factor": 0.5, "dx_factor": 2}})");
  const auto g = c.resolved_grids();
  CHECK(g[0].dt == doctest::Approx(0.5 / 20.0));
  CHECK(g[0].dx == doctest::Approx(0.1));
  CHECK(g[1].N == 20);
  CHECK(c.grid_law.overridden());
  CHECK(metadata_header(c).find("(overridden)") != std::string::npos);

  const std::string once = dump_config(c);
  const ExperimentConfig again = parse_config(once);
  CHECK(dump_config(again) == once);
  CHECK(config_hash(again) == config_hash(c));
  CHECK(again.resolved_grids()[1].dt == g[1].dt);

  CHECK_THROWS_AS(parse_config(R"({"model": "MP-AM", "grid_law": {"dx_factor": 0.3}, "grids": [1]})"), ConfigError);
  const ExperimentConfig plain = parse_config(R"({"model": "MP-AM"})");
  CHECK(metadata_header(plain).find("(overridden)") == std::string::npos);
}

TEST_CASE("hash and metadata header") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  ExperimentConfig a = parse_config(R"({"model": "MP-AM"})");
  ExperimentConfig b = a;
  b.threads = 7;
  b.out_dir = "/elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.beta_d = 2.0;
  CHECK(config_hash(a) != config_hash(b));
  const std::string h = metadata_header(a);
  CHECK(h.find("# config_hash: fnv1a64:" + config_hash(a)) != std::string::npos);
  CHECK(h.find("eps=0.001") != std::string::npos);
  CHECK(h.find("R=inf") != std::string::npos);
  CHECK(h.find("step=0.01") != std::string::npos);
  CHECK(h.find("# defaults:") != std::string::npos);
}

TEST_CASE("floats keep 17 significant digits") {
  for (double v : {0.1, 1.0 / 3.0, std::numbers::pi * 1e-300, -2.5e17, 0.0})
    CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("piston convergence: exact pressure and acceleration, second-order velocities") {
  const std::string dir = scratch_dir("piston");
  std::vector<ConvergenceReport> reps;
  for (double m_b : {10.0, 1.0, 0.0}) {
    const ExperimentConfig c = config(R"({"model": "MP-AM", "max_over_time": true, "params": {"m_b": )" +
                                          format_double(m_b) + "}}",
                                      dir);
    const ConvergenceReport r = cmd_converge(c);
    CAPTURE(m_b);
    CHECK(r.max_error("p") < 1e-11);
    CHECK(r.max_error("a_v") < 1e-11);
    CHECK(std::abs(r.rate("v_b") - 2.0) < 0.1);
    CHECK(std::abs(r.rate("v_fluid") - 2.0) < 0.1);
    for (const auto& g : r.grids) {
      CHECK(g.ok);
      for (double e : g.errors) CHECK(e >= 0.0);
    }
    reps.push_back(r);
  }
  for (int j = 0; j < 4; ++j)
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const double ea = reps[a].grids[j].errors[2], eb = reps[b].grids[j].errors[2];
        CHECK(std::abs(ea - eb) / std::max(ea, eb) < 0.05);
      }
  const std::string csv = slurp(dir + "/converge.csv");
  CHECK(csv.rfind("# amp-rb-lab converge", 0) == 0);
  CHECK(csv.find("\nj,N,dx,dt,status,err_p,err_a_v,err_v_b,err_y_b,err_v_fluid\n") != std::string::npos);
  CHECK(csv.find("\nrate,") != std::string::npos);
}

TEST_CASE("sliding block convergence, AMP-VC") {
  const std::string dir = scratch_dir("sliding");
  for (double m_b : {0.0, 1.0, 10.0}) {
    const ExperimentConfig c =
        config(R"({"model": "MP-AD", "T": 0.5, "params": {"m_b": )" + format_double(m_b) + "}}", dir);
    const ConvergenceReport r = cmd_converge(c);
    CAPTURE(m_b);
    CHECK(std::abs(r.rate("v_b") - 2.0) < 0.2);
  }
}

TEST_CASE("rotating and translating disk convergence") {
  const std::string dir = scratch_dir("disk");
  for (double rho_b : {0.0, 1.0}) {
    const ConvergenceReport r =
        cmd_converge(config(R"({"model": "MP-ADA", "params": {"rho_b": )" + format_double(rho_b) + "}}", dir));
    CAPTURE(rho_b);
    CHECK(std::abs(r.rate("omega_b") - 2.0) < 0.2);
  }
  for (double rho_b : {0.0, 1.0, 10.0}) {
    const ConvergenceReport r = cmd_converge(
        config(R"({"model": "translating-disk", "params": {"rho_b": )" + format_double(rho_b) + "}}", dir));
    CAPTURE(rho_b);
    CHECK(std::abs(r.rate("u_b") - 2.0) < 0.3);
  }
  const ConvergenceReport ama =
      cmd_converge(config(R"({"model": "MP-AMA", "max_over_time": true, "params": {"m_b": 1}})", dir));
  CHECK(ama.max_error("p") < 1e-10);
  CHECK(ama.max_error("a_u") < 1e-10);
  CHECK(std::isnan(ama.rate("p")));
  CHECK(std::abs(ama.rate("u_b") - 2.0) < 0.1);
}

TEST_CASE("solver failure is recorded per grid") {
  const std::string dir = scratch_dir("failure");
  const ConvergenceReport r = cmd_converge(config(R"({"model": "MP-AM", "scheme": "TP", "grids": [1, 2]})", dir));
  REQUIRE(r.grids.size() == 2);
  for (const auto& g : r.grids) {
    CHECK_FALSE(g.ok);
    CHECK(g.diagnosis.find("singular") != std::string::npos);
  }
  CHECK(std::isnan(r.rate("v_b")));
  CHECK(slurp(dir + "/converge.csv").find("failed: ") != std::string::npos);

  const SimulationReport s = cmd_simulate(config(R"({"model": "MP-AM", "scheme": "TP"})", dir));
  CHECK_FALSE(s.completed);
  CHECK_THROWS_AS(run_experiment(config(R"({"model": "MP-AM", "scheme": "TP", "experiment": "simulate"})", dir)),
                  NumericalError);
}

TEST_CASE("simulate writes a trace against the oracle") {
  const std::string dir = scratch_dir("simulate");
  const SimulationReport s = cmd_simulate(config(R"({"model": "MP-ADA", "grids": [2], "params": {"rho_b": 1}})", dir));
  CHECK(s.completed);
  CHECK(s.trace.rows.size() == 21);
  CHECK(std::stod(s.trace.rows.back()[5]) < 1e-3);
  CHECK(fs::exists(dir + "/simulate.svg"));
  CHECK(fs::exists(dir + "/simulate.json"));
}

TEST_CASE("exact oracles sampled to CSV") {
  const std::string dir = scratch_dir("exact");
  SUBCASE("piston acceleration trace") {
    const ExactReport r = cmd_exact(config(R"({"model": "MP-AM", "samples": 40})", dir));
    REQUIRE(r.trace.rows.size() == 41);
    const double w = 2.0 * std::numbers::pi;
    for (const auto& row : r.trace.rows) {
      const double t = std::stod(row[0]);
      CHECK(std::stod(row[3]) == doctest::Approx(-0.25 * w * w * std::sin(w * t)).epsilon(1e-12));
    }
  }
  SUBCASE("rotating disk decay curve") {
    const ExperimentConfig c = config(R"({"model": "MP-ADA", "params": {"rho_b": 1}, "T": 2})", dir);
    const ExactReport r = cmd_exact(c);
    const double lambda = rotating_disk_eigenvalue(c.params);
    const double w0 = std::stod(r.trace.rows.front()[1]);
    for (const auto& row : r.trace.rows) {
      const double t = std::stod(row[0]);
      CHECK(std::stod(row[1]) / w0 == doctest::Approx(std::exp(-lambda * lambda * 0.1 * t)).epsilon(1e-13));
    }
  }
  SUBCASE("translating disk continuity residual") {
    for (double rho_b : {0.0, 1.0, 10.0}) {
      const ExactReport r = cmd_exact(
          config(R"({"model": "translating-disk", "params": {"rho_b": )" + format_double(rho_b) + "}}", dir));
      REQUIRE(r.profile.columns.back() == "continuity_residual");
      for (const auto& row : r.profile.rows) CHECK(std::stod(row.back()) < 1e-10);
    }
  }
  CHECK(fs::exists(dir + "/exact_trace.csv"));
  CHECK(fs::exists(dir + "/exact_profile.csv"));
}

TEST_CASE("probe command") {
  const std::string dir = scratch_dir("probe");
  SUBCASE("TP piston flips at unit mass ratio") {
    const ProbeReport lo = cmd_probe(config(R"({"model": "MP-AM", "scheme": "TP", "probe": {"mass": 0.8}})", dir));
    CHECK_FALSE(lo.verdict.stable);
    CHECK(lo.theory_verdict == "unstable");
    const ProbeReport hi = cmd_probe(config(R"({"model": "MP-AM", "scheme": "TP", "probe": {"mass": 1.2}})", dir));
    CHECK(hi.verdict.stable);
    CHECK(hi.theory_verdict == "stable");
  }
  SUBCASE("TP sliding-block threshold by bisection") {
    const ProbeReport r = cmd_probe(config(
        R"({"model": "MP-AD", "scheme": "TP", "probe": {"mass": 0.5, "delta": 0.5, "bisect": {"lo": 0.3, "hi": 1.0, "tol": 1e-3}}})",
        dir));
    REQUIRE(r.threshold.has_value());
    CHECK(std::abs(*r.threshold - 0.6556) / 0.6556 < 0.02);
    CHECK_FALSE(r.bisection.empty());
    CHECK(fs::exists(dir + "/probe_bisection.csv"));
  }
  SUBCASE("region III gives sign alternation") {
    const ProbeReport r = cmd_probe(
        config(R"({"model": "MP-AD", "scheme": "AMP-NVC", "beta_d": 1, "probe": {"mass": 0, "delta": 0.05}})", dir));
    CHECK(r.theory_regions == "III");
    CHECK_FALSE(r.verdict.stable);
    CHECK(r.verdict.signature == GrowthSignature::SignAlternating);
  }
  SUBCASE("bisection needs a bracket") {
    CHECK_THROWS_AS(
        cmd_probe(config(
            R"({"model": "MP-AM", "scheme": "TP", "probe": {"mass": 2, "bisect": {"lo": 1.5, "hi": 3.0}}})", dir)),
        NumericalError);
  }
}

TEST_CASE("rect sweep agrees with the theory") {
  const std::string dir = scratch_dir("sweep_rect");
  const SweepReport r = cmd_sweep(config(R"({"model": "MP-AD", "scheme": "AMP-VC"})", dir));
  CHECK(r.points.size() == 400);
  CHECK(r.compared == 400);
  CHECK(r.agreement() >= 0.95);
  CHECK(r.interior_mismatches == 0);
  CHECK(r.failures == 0);
  for (const auto& p : r.points)
    if (p.compared() && !p.agree()) CHECK(p.boundary_adjacent);
}

TEST_CASE("annular sweep keeps a stable band at beta 1") {
  const std::string dir = scratch_dir("sweep_ann");
  const SweepReport r = cmd_sweep(config(
      R"({"model": "MP-ADA", "scheme": "AMP-VC", "sweep": {"x": {"min": 0, "max": 5, "n": 6}, "beta": {"min": 0, "max": 2, "n": 21}}})",
      dir));
  REQUIRE(r.points.size() == 126);
  int band = 0;
  for (const auto& p : r.points)
    if (p.ib == 10) {
      CHECK(p.beta == doctest::Approx(1.0));
      CHECK(p.theory.stable);
      CHECK(p.probe.stable);
      ++band;
    }
  CHECK(band == 6);
  CHECK(r.agreement() >= 0.95);
  CHECK(r.interior_mismatches == 0);
}

TEST_CASE("sweep edge cases and determinism") {
  const std::string dir = scratch_dir("sweep_det");
  SUBCASE("empty lattice gives a header-only CSV") {
    const SweepReport r = cmd_sweep(config(R"({"model": "MP-AD", "sweep": {"x": {"n": 0}}})", dir));
    CHECK(r.points.empty());
    const std::string csv = slurp(dir + "/sweep.csv");
    CHECK(csv.substr(csv.rfind('\n', csv.size() - 2) + 1).rfind("ix,ib,mass", 0) == 0);
    CHECK_FALSE(fs::exists(dir + "/sweep.svg"));
  }
  SUBCASE("byte-identical output for any thread count") {
    const std::string text =
        R"({"model": "MP-AD", "scheme": "AMP-NVC", "sweep": {"x": {"min": 0, "max": 2, "n": 4}, "beta": {"min": 0, "max": 4, "n": 5}}, "probe": {"T": 10}})";
    ExperimentConfig a = config(text, dir + "/a"), b = config(text, dir + "/b");
    a.threads = 1;
    b.threads = 3;
    cmd_sweep(a);
    cmd_sweep(b);
    CHECK(slurp(dir + "/a/sweep.csv") == slurp(dir + "/b/sweep.csv"));
    CHECK(slurp(dir + "/a/sweep.svg") == slurp(dir + "/b/sweep.svg"));
  }
  SUBCASE("per-point failures are recorded") {
    const SweepReport r = cmd_sweep(config(
        R"({"model": "MP-AD", "sweep": {"fixed": "mass", "value": 0, "x": {"min": 0, "max": 1, "n": 2}, "beta": {"min": 1, "max": 1, "n": 1}}, "probe": {"T": 5}})",
        dir));
    REQUIRE(r.points.size() == 2);
    CHECK_FALSE(r.points[0].error.empty());
    CHECK(r.points[1].error.empty());
    CHECK(r.failures == 1);
  }
}

TEST_CASE("probe verdicts do not depend on doubling T away from boundaries") {
  const std::string dir = scratch_dir("doubling");
  ExperimentConfig c = config(R"({"model": "MP-AD", "scheme": "AMP-NVC", "boundary": {"nx": 51}})", dir);
  const BoundaryReport b = cmd_boundary(c);
  auto far = [&](double m, double beta) {
    for (const auto& cv : b.curves)
      for (const auto& p : cv.points)
        if (std::hypot((p[0] - m) / 5.0, (p[1] - beta) / 6.0) < 0.05) return false;
    return true;
  };
  int sampled = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const double m = 0.3 + 0.9 * i, beta = 0.25 + 1.1 * j;
      if (!far(m, beta)) continue;
      ProbeSettings s = c.probe.settings;
      const bool once = run_probe_at(c, m, 0.5, beta, s).stable;
      s.T *= 2.0;
      CAPTURE(m);
      CAPTURE(beta);
      CHECK(run_probe_at(c, m, 0.5, beta, s).stable == once);
      ++sampled;
    }
  CHECK(sampled >= 15);
}

TEST_CASE("boundary command") {
  const std::string dir = scratch_dir("boundary");
  SUBCASE("rect NVC points separate differing counts") {
    const BoundaryReport r =
        cmd_boundary(config(R"({"model": "MP-AD", "scheme": "AMP-NVC", "boundary": {"verify": true}})", dir));
    REQUIRE_FALSE(r.curves.empty());
    int checked = 0;
    for (const auto& s : r.separates)
      for (int v : s) {
        CHECK(v != 0);
        checked += v == 1;
      }
    CHECK(checked > 20);
    const std::string svg = slurp(dir + "/boundary.svg");
    CHECK(svg.find("id=\"overlay\"") != std::string::npos);
    CHECK(count_of(svg, "<polyline") == r.curves.size());
  }
  SUBCASE("TP threshold follows the fitted law") {
    const BoundaryReport r = cmd_boundary(config(
        R"({"model": "MP-AD", "scheme": "TP", "boundary": {"x_min": 0.05, "x_max": 5, "beta_max": 10}})", dir));
    CHECK(r.tp_max_deviation <= 0.05);
    CHECK(r.tp_constant == doctest::Approx(1.405).epsilon(0.05));
  }
}

TEST_CASE("SVG output") {
  PlotStyle style;
  style.title = "a < b";
  const PlotSeries one{"one", {0, 1, 2}, {1, 4, 9}, ""};
  const std::string svg = render_plot({one}, style);
  CHECK(count_of(svg, "<polyline") == 1);
  CHECK(svg.find("a &lt; b") != std::string::npos);
  CHECK(render_plot({one}, style) == svg);
  CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\"", 0) == 0);

  PlotStyle logs = style;
  logs.log_y = true;
  logs.markers = true;
  const PlotSeries withZero{"z", {0, 1, 2}, {0, 1, 10}, ""};
  const std::string lsvg = render_plot({withZero}, logs);
  CHECK(count_of(lsvg, "<circle") == 2);

  std::vector<PlotCell> cells;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) cells.push_back({double(i), double(j), i + 1.0, j + 1.0, (i + j) % 2 ? "#f00" : "#0f0"});
  const std::string region = render_region_plot(cells, {one}, style);
  CHECK(count_of(region, "<rect") == 6 + 1);
  CHECK(count_of(region, "<polyline") == 1);
  const std::string bare = render_region_plot(cells, {PlotSeries{"empty", {}, {}, ""}}, style);
  CHECK(bare.find("id=\"overlay\"") == std::string::npos);
  CHECK(bare.find("id=\"legend\"") == std::string::npos);

  CHECK_THROWS_AS(render_plot({}, style), std::invalid_argument);
  CHECK_THROWS_AS(render_plot({PlotSeries{"bad", {0, 1}, {1}, ""}}, style), std::invalid_argument);
  CHECK_THROWS_AS(render_region_plot({}, {}, style), std::invalid_argument);
  CHECK_THROWS(emit_plot({one}, style, "/nonexistent/dir/plot.svg"));
}

TEST_CASE("command line exit codes") {
  const std::string dir = scratch_dir("cli");
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir + "/" + name) << text;
    return dir + "/" + name;
  };
  const std::string ok = write("ok.json", R"({"model": "MP-AM", "grids": [1, 2]})");
  CHECK(run_cli("converge --config " + ok + " --out " + dir + "/out --threads 2") == 0);
  CHECK(fs::exists(dir + "/out/converge.csv"));
  CHECK(run_cli("exact --config " + ok + " --out " + dir + "/out") == 0);
  CHECK(run_cli("converge --config " + write("bad.json", R"({"model": "MP-XX"})")) == 2);
  CHECK(run_cli("converge --config " + dir + "/missing.json") == 2);
  CHECK(run_cli("frobnicate --config " + ok) == 2);
  CHECK(run_cli("sweep --config " + ok + " --out " + dir + "/out") == 2);
  const std::string tp = write("tp.json", R"({"model": "MP-AM", "scheme": "TP"})");
  CHECK(run_cli("simulate --config " + tp + " --out " + dir + "/out") == 3);
  const std::string mismatch = write("mm.json", R"({"model": "MP-AM", "experiment": "exact"})");
  CHECK(run_cli("converge --config " + mismatch + " --out " + dir + "/out") == 2);
}
