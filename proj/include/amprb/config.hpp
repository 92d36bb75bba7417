#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "amprb/exact.hpp"
#include "amprb/probe.hpp"
#include "amprb/rect.hpp"
#include "amprb/stability.hpp"

namespace amprb {

// Schema violation; the message starts with the offending field path.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class ExperimentKind { Exact, Simulate, Converge, Probe, Sweep, Boundary };
enum class ModelId { MP_AM, MP_AD, MP_AMA, MP_ADA, TranslatingDisk };

std::string to_string(ExperimentKind k);
std::string to_string(ModelId m);
ExperimentKind experiment_kind_from_string(const std::string& s);
ModelId model_id_from_string(const std::string& s);

bool is_annular(ModelId m);

// Spacing and time step for grid index j: dx = dx_factor / (base j), dt = dt_factor / (base j).
struct GridLaw {
  double base = 10.0;
  double dx_factor = 1.0;
  double dt_factor = 1.0;
  bool overridden() const { return base != 10.0 || dx_factor != 1.0 || dt_factor != 1.0; }
};

struct ResolvedGrid {
  int j = 1;
  int N = 10;
  double dx = 0.1;
  double dt = 0.1;
};

// Body motion for MP-AM (position amplitude) or body forcing for MP-AMA.
struct ForcingSpec {
  double amplitude = 0.25;
  double omega = 2.0 * 3.14159265358979323846;
};

struct Range {
  double min = 0.0, max = 1.0;
  int n = 0;
  double at(int i) const { return n <= 1 ? min : min + (max - min) * i / (n - 1); }
};

struct ProbeSpec {
  ProbeSettings settings;
  double mass = 0.0;   // mbar, Ibar, M_r or m_b / M_a depending on the model
  double delta = 0.5;  // delta or delta~
  RectProbeGrid rect_grid;
  AnnularProbeGrid annular_grid;
  bool bisect = false;
  double bisect_lo = 0.0, bisect_hi = 2.0;
  double bisect_tol = 1e-4;
  int bisect_max_iter = 60;
};

struct SweepSpec {
  FixedParameter fixed = FixedParameter::Delta;
  double value = 0.5;
  Range x{0.0, 5.0, 20};
  Range beta{0.0, 6.0, 20};
  bool probe = true;
};

struct BoundarySpec {
  FixedParameter fixed = FixedParameter::Delta;
  double value = 0.5;
  BoundaryTraceOptions trace;
  bool verify = false;  // verdicts at +-offset around every traced point
  double offset = 1e-3;
  double verify_eps = 1e-6;  // counting margin used by the offset check
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Converge;
  ModelId model = ModelId::MP_AM;
  SchemeVariant scheme = SchemeVariant::AMP_VC;
  double beta_d = 1.0;
  double alpha = 0.5;
  ModelProblemParams params;
  ForcingSpec forcing;
  std::vector<int> grids{1, 2, 3, 4};
  GridLaw grid_law;
  double T = 1.0;
  bool max_over_time = false;  // converge: max error over all steps instead of at t = T
  int samples = 100;           // exact: number of time intervals sampled
  ProbeSpec probe;
  SweepSpec sweep;
  BoundarySpec boundary;
  StabilityOptions stability;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = ".";
  std::string prefix;  // empty selects the experiment name

  std::vector<std::string> defaults_used;  // top-level keys filled from defaults

  std::vector<ResolvedGrid> resolved_grids() const;
  RectSchemeConfig scheme_config(double dt) const;
  std::string output_prefix() const { return prefix.empty() ? to_string(experiment) : prefix; }
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical JSON of the resolved configuration; parse_config of the result reproduces it.
std::string dump_config(const ExperimentConfig& config);

// Resolved configuration without the keys that cannot change results (threads, output).
std::string canonical_config(const ExperimentConfig& config);

std::uint64_t fnv1a64(const std::string& bytes);
std::string config_hash(const ExperimentConfig& config);

}  // namespace amprb
