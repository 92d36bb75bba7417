#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amprb/annulus.hpp"
#include "amprb/rect.hpp"
#include "amprb/stability.hpp"

namespace amprb {

enum class GrowthSignature { Decaying, RealGrowth, SignAlternating, Oscillatory };

std::string to_string(GrowthSignature s);

struct ProbeSettings {
  double T = 50.0;
  long min_steps = 500;  // runs at least this many steps when dt is large
  long max_steps = 20000;
  double threshold = 1e3;   // amplification counted as unstable
  double slope_tol = 1e-3;  // largest trailing-half log-amplitude slope still counted as stable
  double abort_factor = 1e12;
  std::uint64_t seed = 1;
  void validate() const;
};

struct ProbeVerdict {
  bool stable = true;
  double growth_rate = 0.0;  // per unit time, +inf on overflow
  GrowthSignature signature = GrowthSignature::Decaying;
  double period = 0.0;  // oscillatory signature only
  double max_amplitude = 0.0;
  double initial_amplitude = 0.0;
  long steps = 0;
  long steps_to_threshold = -1;
  double dt = 0.0;
};

// Time series collected by a probe run.
struct ProbeSeries {
  std::vector<double> t, amplitude, accel;
};

ProbeVerdict analyze_growth(const ProbeSeries& series, const ProbeSettings& settings);

// Sliding-block perturbation problem at a point in (mbar, delta, beta_d).
struct RectProbeGrid {
  int N = 400;
  double H = 10.0;
  double nu = 0.1;
};

ProbeVerdict probe_mp_ad(const RectStabilityParams& point, SchemeVariant variant, const ProbeSettings& settings = {},
                         const RectProbeGrid& grid = {}, ProbeSeries* series = nullptr);

// Piston perturbation problem at added-mass ratio M_r = m_b / (rho L H).
ProbeVerdict probe_mp_am(double M_r, SchemeVariant variant, const ProbeSettings& settings = {},
                         ProbeSeries* series = nullptr);

// Rotating-disk perturbation problem at a point in (Ibar, delta~, beta_d).
struct AnnularProbeGrid {
  int N = 40;
  double r1 = 1.0, r2 = 2.0;
  double nu = 0.1;
  AnnularGeometry geometry() const;
};

ProbeVerdict probe_mp_ada(const AnnularStabilityParams& point, SchemeVariant variant,
                          const ProbeSettings& settings = {}, const AnnularProbeGrid& grid = {},
                          ProbeSeries* series = nullptr);

// Annular added-mass perturbation problem with m_b = ratio * M_a.
ProbeVerdict probe_mp_ama(double ratio, SchemeVariant variant, const ProbeSettings& settings = {},
                          ProbeSeries* series = nullptr);

// Dimensional parameters used by the probes for a stability point.
struct RectProbeSetup {
  ModelProblemParams params;
  RectGrid grid;
  RectSchemeConfig config;
};
RectProbeSetup rect_probe_setup(const RectStabilityParams& point, SchemeVariant variant, const RectProbeGrid& grid);

struct AnnularProbeSetup {
  ModelProblemParams params;
  RadialGrid grid;
  AnnularSchemeConfig config;
};
AnnularProbeSetup annular_probe_setup(const AnnularStabilityParams& point, SchemeVariant variant,
                                      const AnnularProbeGrid& grid);

// Expected probe signature for a theoretical instability region.
GrowthSignature expected_signature(InstabilityRegion region);

}  // namespace amprb
