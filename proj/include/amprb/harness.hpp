#pragma once

#include <optional>
#include <string>
#include <vector>

#include "amprb/config.hpp"
#include "amprb/probe.hpp"
#include "amprb/stability.hpp"

namespace amprb {

// Floats are written with 17 significant digits.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  void add(std::vector<std::string> row);
};

// "# key: value" lines: command, config hash, resolved config, defaults, root-counting settings.
std::string metadata_header(const ExperimentConfig& config);
std::string render_csv(const ExperimentConfig& config, const CsvTable& table);
void write_text_file(const std::string& path, const std::string& text);

// Paths of the artifacts written by a command.
struct Artifacts {
  std::vector<std::string> files;
};

// ------------------------------------------------------------ exact

struct ExactReport {
  CsvTable trace;    // body quantities against time
  CsvTable profile;  // fluid quantities against the normal coordinate at t = T
  Artifacts artifacts;
};
ExactReport cmd_exact(const ExperimentConfig& config);

// ------------------------------------------------------------ simulate

struct SimulationReport {
  CsvTable trace;
  bool completed = true;
  std::string diagnosis;
  Artifacts artifacts;
};
SimulationReport cmd_simulate(const ExperimentConfig& config);

// ------------------------------------------------------------ converge

struct GridResult {
  ResolvedGrid grid;
  bool ok = true;
  std::string diagnosis;
  std::vector<double> errors;  // same order as ConvergenceReport::quantities
  double wall_seconds = 0.0;
};

struct ConvergenceReport {
  std::vector<std::string> quantities;
  std::vector<GridResult> grids;
  std::vector<double> rates;  // NaN when fewer than two grids succeed or errors are at round-off
  Artifacts artifacts;

  double rate(const std::string& quantity) const;
  double max_error(const std::string& quantity) const;
};

// Tracked quantities for a model, in report order.
std::vector<std::string> tracked_quantities(ModelId model);

// Errors on one grid; throws NumericalError on blow-up.
std::vector<double> grid_errors(const ExperimentConfig& config, const ResolvedGrid& grid);

ConvergenceReport cmd_converge(const ExperimentConfig& config);

// ------------------------------------------------------------ probe

struct BisectionStep {
  double lo = 0, hi = 0, mid = 0;
  bool stable = false;
};

struct ProbeReport {
  ProbeVerdict verdict;
  ProbeSeries series;
  std::string theory_verdict;  // from the amplification-factor analysis
  std::string theory_regions;
  std::optional<double> threshold;
  std::vector<BisectionStep> bisection;
  Artifacts artifacts;
};

ProbeVerdict run_probe_at(const ExperimentConfig& config, double mass, double delta, double beta,
                          const ProbeSettings& settings, ProbeSeries* series = nullptr);

ProbeReport cmd_probe(const ExperimentConfig& config);

// ------------------------------------------------------------ sweep

struct TheoryVerdict {
  bool stable = true;
  int count = 0;
  double max_modulus = 0.0;
  std::string regions;
  std::string note;
};

// Root analysis for MP-AD or MP-ADA at a point of the (mass, delta, beta) space.
TheoryVerdict theory_at(const ExperimentConfig& config, double mass, double delta, double beta);

struct SweepPoint {
  int ix = 0, ib = 0;
  double mass = 0, delta = 0, beta = 0;
  bool theory_ok = false;
  TheoryVerdict theory;
  bool probe_ok = false;
  ProbeVerdict probe;
  bool boundary_adjacent = false;
  std::string error;

  bool compared() const { return theory_ok && probe_ok; }
  bool agree() const { return compared() && theory.stable == probe.stable; }
};

struct SweepReport {
  int nx = 0, nbeta = 0;
  std::vector<SweepPoint> points;  // ordered by (ib, ix)
  int compared = 0, agreed = 0, interior_mismatches = 0, failures = 0;
  Artifacts artifacts;

  double agreement() const { return compared == 0 ? 1.0 : static_cast<double>(agreed) / compared; }
};

SweepReport cmd_sweep(const ExperimentConfig& config);

// ------------------------------------------------------------ boundary

struct BoundaryReport {
  std::vector<BoundaryCurve> curves;
  std::vector<std::vector<int>> separates;  // 1 / 0 per point, -1 when not checked
  double tp_constant = 0.0;                 // least-squares mbar / C_eta(delta), TP only
  double tp_max_deviation = 0.0;            // largest relative deviation from 1.405 C_eta
  Artifacts artifacts;
};

BoundaryReport cmd_boundary(const ExperimentConfig& config);

// ------------------------------------------------------------ dispatch

// Runs the configured experiment and returns the written artifacts.
Artifacts run_experiment(const ExperimentConfig& config);

}  // namespace amprb
