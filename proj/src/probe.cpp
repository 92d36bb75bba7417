#include "amprb/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace amprb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long step_count(double dt, const ProbeSettings& s) {
  const long want = static_cast<long>(std::ceil(s.T / dt - 1e-9));
  return std::min(std::max(want, s.min_steps), s.max_steps);
}

// Least-squares slope of log(max amplitude) over windows of the trailing half.
double envelope_slope(const ProbeSeries& s) {
  const size_t n = s.t.size();
  if (n < 4) return 0.0;
  const size_t first = n / 2, len = n - first;
  const size_t w = std::max<size_t>(1, len / 20);
  std::vector<double> xs, ys;
  for (size_t a = first; a + w <= n; a += w) {
    double m = 0.0;
    for (size_t k = a; k < a + w; ++k) m = std::max(m, s.amplitude[k]);
    xs.push_back(0.5 * (s.t[a] + s.t[a + w - 1]));
    ys.push_back(std::log(std::max(m, 1e-300)));
  }
  if (xs.size() < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0.0, sxx = 0.0;
  for (size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

template <class Step, class State, class Measure>
ProbeVerdict run_probe(State s, double dt, const ProbeSettings& settings, Step step, Measure measure,
                       ProbeSeries* out) {
  ProbeSeries series;
  const long steps = step_count(dt, settings);
  auto push = [&](const State& st) {
    const auto [amp, acc] = measure(st);
    series.t.push_back(st.t);
    series.amplitude.push_back(amp);
    series.accel.push_back(acc);
  };
  push(s);
  const double a0 = series.amplitude.front();
  bool overflow = false;
  bool singular = false;
  for (long n = 0; n < steps; ++n) {
    try {
      s = step(s);
    } catch (const NumericalError&) {
      singular = true;
      break;
    }
    push(s);
    const double a = series.amplitude.back();
    if (!std::isfinite(a) || !std::isfinite(series.accel.back())) {
      overflow = true;
      break;
    }
    if (a > settings.abort_factor * a0) break;
  }
  if (overflow) {
    series.t.pop_back();
    series.amplitude.pop_back();
    series.accel.pop_back();
  }
  ProbeVerdict v = analyze_growth(series, settings);
  v.dt = dt;
  if (overflow || singular) {
    v.stable = false;
    v.growth_rate = kInf;
  }
  if (out) *out = std::move(series);
  return v;
}

std::vector<double> random_profile(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

std::string to_string(GrowthSignature s) {
  switch (s) {
    case GrowthSignature::Decaying: return "decaying";
    case GrowthSignature::RealGrowth: return "real-growth";
    case GrowthSignature::SignAlternating: return "sign-alternating";
    case GrowthSignature::Oscillatory: return "oscillatory";
  }
  return "unknown";
}

void ProbeSettings::validate() const {
  if (!(T > 0.0)) throw std::invalid_argument("ProbeSettings: T must be positive");
  if (min_steps < 0 || max_steps < 1 || max_steps < min_steps)
    throw std::invalid_argument("ProbeSettings: need 0 <= min_steps <= max_steps");
  if (!(threshold > 1.0)) throw std::invalid_argument("ProbeSettings: threshold must exceed 1");
  if (!(abort_factor >= threshold)) throw std::invalid_argument("ProbeSettings: abort_factor must be >= threshold");
  if (!std::isfinite(slope_tol)) throw std::invalid_argument("ProbeSettings: slope_tol must be finite");
}

ProbeVerdict analyze_growth(const ProbeSeries& s, const ProbeSettings& settings) {
  if (s.t.empty() || s.t.size() != s.amplitude.size() || s.t.size() != s.accel.size())
    throw std::invalid_argument("analyze_growth: inconsistent series");
  ProbeVerdict v;
  v.steps = static_cast<long>(s.t.size()) - 1;
  v.initial_amplitude = s.amplitude.front();
  const double a0 = v.initial_amplitude > 0.0 ? v.initial_amplitude : 1.0;
  for (size_t k = 0; k < s.amplitude.size(); ++k) {
    v.max_amplitude = std::max(v.max_amplitude, s.amplitude[k]);
    if (v.steps_to_threshold < 0 && s.amplitude[k] >= settings.threshold * a0) v.steps_to_threshold = static_cast<long>(k);
  }
  v.growth_rate = envelope_slope(s);
  v.stable = v.max_amplitude < settings.threshold * a0 && v.growth_rate <= settings.slope_tol;
  if (v.stable) return v;

  const size_t first = s.t.size() / 2;
  int changes = 0, pairs = 0;
  double prev = 0.0;
  for (size_t k = first; k < s.accel.size(); ++k) {
    const double a = s.accel[k];
    if (a == 0.0) continue;
    if (prev != 0.0) {
      ++pairs;
      if ((a > 0.0) != (prev > 0.0)) ++changes;
    }
    prev = a;
  }
  if (pairs > 0 && changes > 0.75 * pairs) {
    v.signature = GrowthSignature::SignAlternating;
  } else if (changes <= 2) {
    v.signature = GrowthSignature::RealGrowth;
  } else {
    v.signature = GrowthSignature::Oscillatory;
    v.period = 2.0 * (s.t.back() - s.t[first]) / changes;
  }
  return v;
}

RectProbeSetup rect_probe_setup(const RectStabilityParams& point, SchemeVariant variant, const RectProbeGrid& g) {
  point.validate();
  if (!(g.nu > 0.0)) throw std::invalid_argument("RectProbeGrid: nu must be positive");
  RectProbeSetup s{ModelProblemParams{}, RectGrid(g.N, g.H), RectSchemeConfig{}};
  s.params.rho = 1.0;
  s.params.mu = g.nu;
  s.params.L = 1.0;
  s.params.H = g.H;
  const double dy = s.grid.dy;
  s.params.m_b = point.mbar * s.params.rho * s.params.L * dy / (point.delta * point.delta);
  s.config.variant = variant;
  s.config.beta_d = point.beta_d;
  s.config.dt = 2.0 * (dy / point.delta) * (dy / point.delta) / g.nu;
  return s;
}

ProbeVerdict probe_mp_ad(const RectStabilityParams& point, SchemeVariant variant, const ProbeSettings& settings,
                         const RectProbeGrid& grid, ProbeSeries* series) {
  settings.validate();
  const RectProbeSetup su = rect_probe_setup(point, variant, grid);
  RectCoupledState s;
  s.vel = random_profile(su.grid.N + 1, settings.seed);
  s.vel.front() = 1.0;
  s.vel.back() = 0.0;
  s.vel_prev = s.vel;
  s.p.assign(su.grid.N + 1, 0.0);
  s.body.v = s.body_prev.v = 1.0;
  const RectForcing none;
  auto step = [&](const RectCoupledState& st) { return step_mp_ad(st, su.grid, su.config, su.params, none); };
  auto measure = [](const RectCoupledState& st) {
    double m = std::abs(st.body.v);
    for (double u : st.vel) m = std::max(m, std::abs(u));
    return std::pair<double, double>{m, st.body.a};
  };
  return run_probe(s, su.config.dt, settings, step, measure, series);
}

ProbeVerdict probe_mp_am(double M_r, SchemeVariant variant, const ProbeSettings& settings, ProbeSeries* series) {
  settings.validate();
  if (!(M_r >= 0.0) || !std::isfinite(M_r)) throw std::invalid_argument("probe_mp_am: M_r must be >= 0");
  ModelProblemParams prm;
  prm.m_b = M_r * prm.rho * prm.L * prm.H;
  const RectGrid grid(10, prm.H);
  RectSchemeConfig cfg;
  cfg.variant = variant;
  cfg.dt = 0.1;
  RectCoupledState s;
  s.vel.assign(grid.N + 1, 0.0);
  s.vel_prev = s.vel;
  s.p.assign(grid.N + 1, 0.0);
  s.body.a = s.body_prev.a = 1.0;
  const RectForcing none;
  auto step = [&](const RectCoupledState& st) { return step_mp_am(st, grid, cfg, prm, none); };
  auto measure = [](const RectCoupledState& st) { return std::pair<double, double>{std::abs(st.body.a), st.body.a}; };
  return run_probe(s, cfg.dt, settings, step, measure, series);
}

AnnularGeometry AnnularProbeGrid::geometry() const { return {r1, r2, (r2 - r1) / N}; }

AnnularProbeSetup annular_probe_setup(const AnnularStabilityParams& point, SchemeVariant variant,
                                      const AnnularProbeGrid& g) {
  point.validate();
  if (!(g.nu > 0.0)) throw std::invalid_argument("AnnularProbeGrid: nu must be positive");
  AnnularProbeSetup s{ModelProblemParams::disk(0.0, g.r1, g.r2, 1.0, g.nu), RadialGrid(g.N, g.r1, g.r2),
                      AnnularSchemeConfig{}};
  const double dr = s.grid.dr, r1 = g.r1, rho = s.params.rho;
  s.params.rho_b = 0.0;
  s.params.m_b = 0.0;
  s.params.I_b = point.Ibar * rho * (2.0 * std::numbers::pi * r1) * dr * r1 * r1 /
                 (point.delta_tilde * point.delta_tilde);
  s.config.variant = variant;
  s.config.beta_d = point.beta_d;
  s.config.dt = 2.0 * (dr / point.delta_tilde) * (dr / point.delta_tilde) / g.nu;
  return s;
}

ProbeVerdict probe_mp_ada(const AnnularStabilityParams& point, SchemeVariant variant, const ProbeSettings& settings,
                          const AnnularProbeGrid& grid, ProbeSeries* series) {
  settings.validate();
  const AnnularProbeSetup su = annular_probe_setup(point, variant, grid);
  const int n = su.grid.N + 1;
  AnnularState s;
  s.uhat.assign(n, 0.0);
  s.uhat_prev = s.uhat;
  s.p = s.p_prev = s.uhat;
  s.vhat = random_profile(n, settings.seed);
  s.vhat.front() = su.grid.r1;  // omega_b r1
  s.vhat.back() = 0.0;
  s.vhat_prev = s.vhat;
  s.body.v = s.body_prev.v = 1.0;
  const TimeFunction none = [](double) { return 0.0; };
  auto step = [&](const AnnularState& st) { return step_mp_ada(st, su.grid, su.config, su.params, none); };
  auto measure = [](const AnnularState& st) {
    double m = std::abs(st.body.v);
    for (double v : st.vhat) m = std::max(m, std::abs(v));
    return std::pair<double, double>{m, st.body.a};
  };
  return run_probe(s, su.config.dt, settings, step, measure, series);
}

ProbeVerdict probe_mp_ama(double ratio, SchemeVariant variant, const ProbeSettings& settings, ProbeSeries* series) {
  settings.validate();
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) throw std::invalid_argument("probe_mp_ama: ratio must be >= 0");
  ModelProblemParams prm = ModelProblemParams::disk(0.0);
  prm.m_b = ratio * annular_added_mass(prm);
  const RadialGrid grid(20, prm.r1, prm.r2);
  AnnularSchemeConfig cfg;
  cfg.variant = variant;
  cfg.dt = 0.05;
  AnnularState s;
  s.uhat.assign(grid.N + 1, 0.0);
  s.vhat = s.uhat_prev = s.vhat_prev = s.p = s.p_prev = s.uhat;
  s.body.a = s.body_prev.a = 1.0;
  const TimeFunction none = [](double) { return 0.0; };
  auto step = [&](const AnnularState& st) { return step_mp_ama(st, grid, cfg, prm, none); };
  auto measure = [](const AnnularState& st) { return std::pair<double, double>{std::abs(st.body.a), st.body.a}; };
  return run_probe(s, cfg.dt, settings, step, measure, series);
}

GrowthSignature expected_signature(InstabilityRegion region) {
  switch (region) {
    case InstabilityRegion::None: return GrowthSignature::Decaying;
    case InstabilityRegion::I: return GrowthSignature::RealGrowth;
    case InstabilityRegion::III: return GrowthSignature::SignAlternating;
    case InstabilityRegion::II:
    case InstabilityRegion::IV: return GrowthSignature::Oscillatory;
  }
  return GrowthSignature::Decaying;
}

}  // namespace amprb
