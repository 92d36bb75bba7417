#include "amprb/rect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amprb {

std::string to_string(SchemeVariant v) {
  switch (v) {
    case SchemeVariant::TP: return "TP";
    case SchemeVariant::AMP_NVC: return "AMP-NVC";
    case SchemeVariant::AMP_VC: return "AMP-VC";
  }
  return "?";
}

SchemeVariant scheme_variant_from_string(const std::string& s) {
  if (s == "TP") return SchemeVariant::TP;
  if (s == "AMP-NVC" || s == "NVC") return SchemeVariant::AMP_NVC;
  if (s == "AMP-VC" || s == "VC") return SchemeVariant::AMP_VC;
  throw std::invalid_argument("unknown scheme variant '" + s + "'");
}

RectGrid::RectGrid(int N_, double H_) : N(N_), H(H_), dy(H_ / N_) {
  if (N < 4) throw std::invalid_argument("RectGrid: N must be at least 4");
  if (!(H > 0.0)) throw std::invalid_argument("RectGrid: H must be positive");
}

void RectSchemeConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("scheme config: dt must be positive");
  if (!(beta_d >= 0.0)) throw std::invalid_argument("scheme config: beta_d must be non-negative");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("scheme config: alpha must lie in (0, 1]");
  if (!(alpha_bar >= 0.0 && alpha_bar <= 1.0)) throw std::invalid_argument("scheme config: alpha_bar must lie in [0, 1]");
}

double added_damping_eta(double delta) {
  return 1.0 / (1.0 + 0.5 * delta * delta + delta * std::sqrt(1.0 + 0.25 * delta * delta));
}

AddedDampingInfo added_damping_coefficient(double mu, double L, double dy, double nu, double dt, double alpha,
                                           DampingFormula formula) {
  if (!(mu >= 0.0) || !(L > 0.0) || !(dy > 0.0) || !(nu > 0.0) || !(dt > 0.0) || !(alpha > 0.0))
    throw std::invalid_argument("added_damping_coefficient: inputs must be positive");
  AddedDampingInfo d;
  d.delta = dy / std::sqrt(alpha * nu * dt);
  d.eta = added_damping_eta(d.delta);
  const double em = -std::expm1(-d.delta);
  d.dn = dy / em;
  switch (formula) {
    case DampingFormula::D1: d.Du = mu * L * (1.0 - d.eta) / dy; break;
    case DampingFormula::D2: d.Du = mu * L * (3.0 - 4.0 * d.eta + d.eta * d.eta) / (2.0 * dy); break;
    case DampingFormula::Dn: d.Du = mu * L * em / dy; break;
  }
  return d;
}

std::vector<double> variational_w(const RectGrid& grid, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("variational_w: delta must be positive");
  const double eta = added_damping_eta(delta);
  const int N = grid.N;
  const double e2N = std::pow(eta, 2 * N);
  std::vector<double> w(N + 1);
  for (int j = 0; j <= N; ++j) w[j] = (std::pow(eta, j) - std::pow(eta, 2 * N - j)) / (1.0 - e2N);
  w[0] = 1.0;
  w[N] = 0.0;
  return w;
}

namespace {

double one_sided_derivative(const std::vector<double>& f, double h) {
  return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
}

void check_state(const RectCoupledState& s, const RectGrid& g) {
  const size_t n = static_cast<size_t>(g.N) + 1;
  if (s.vel.size() != n || s.p.size() != n) throw std::invalid_argument("rect step: state size does not match grid");
}

// Trapezoidal-type diffusion step with Dirichlet data at both ends.
std::vector<double> diffuse(const std::vector<double>& u, const RectGrid& g, double nu, double dt, double alpha,
                            double left, double right) {
  const int N = g.N;
  const double r = nu * dt / (g.dy * g.dy);
  BandedSystem sys(N - 1, 1, 1);
  for (int j = 1; j < N; ++j) {
    const int i = j - 1;
    sys.at(i, i) = 1.0 + 2.0 * alpha * r;
    if (i > 0) sys.at(i, i - 1) = -alpha * r;
    if (i < N - 2) sys.at(i, i + 1) = -alpha * r;
    sys.rhs[i] = u[j] + (1.0 - alpha) * r * (u[j + 1] - 2.0 * u[j] + u[j - 1]);
  }
  sys.rhs[0] += alpha * r * left;
  sys.rhs[N - 2] += alpha * r * right;
  const std::vector<double> x = solve_banded(std::move(sys));
  std::vector<double> out(N + 1);
  out[0] = left;
  out[N] = right;
  std::copy(x.begin(), x.end(), out.begin() + 1);
  return out;
}

// Affine pressure with the body acceleration as an extra unknown (ordering a, p_0..p_N).
// AMP: m_b a + L p_0 = g and D_yh p_0 + rho a = 0 are solved together.
// TP: a is given and only the momentum condition is imposed at the interface.
struct PressureSolve {
  std::vector<double> p;
  double a = 0.0;
};

PressureSolve solve_pressure_amp(const RectGrid& g, const ModelProblemParams& prm, double gv, double pH) {
  const int N = g.N;
  BandedSystem sys(N + 2, 1, 3);
  sys.at(0, 0) = prm.m_b;
  sys.at(0, 1) = prm.L;
  sys.rhs[0] = gv;
  const double h = g.dy;
  sys.at(1, 0) = prm.rho;
  sys.at(1, 1) = -3.0 / (2.0 * h);
  sys.at(1, 2) = 4.0 / (2.0 * h);
  sys.at(1, 3) = -1.0 / (2.0 * h);
  for (int j = 1; j < N; ++j) {
    sys.at(j + 1, j) = 1.0;
    sys.at(j + 1, j + 1) = -2.0;
    sys.at(j + 1, j + 2) = 1.0;
  }
  sys.at(N + 1, N + 1) = 1.0;
  sys.rhs[N + 1] = pH;
  std::vector<double> x;
  try {
    x = solve_banded(std::move(sys));
  } catch (const NumericalError&) {
    throw NumericalError("step_mp_am: singular coupled pressure/acceleration system (m_b + M_a ~ 0)");
  }
  PressureSolve out;
  out.a = x[0];
  out.p.assign(x.begin() + 1, x.end());
  return out;
}

std::vector<double> solve_pressure_tp(const RectGrid& g, const ModelProblemParams& prm, double a, double pH) {
  const int N = g.N;
  BandedSystem sys(N + 1, 1, 2);
  const double h = g.dy;
  sys.at(0, 0) = -3.0 / (2.0 * h);
  sys.at(0, 1) = 4.0 / (2.0 * h);
  sys.at(0, 2) = -1.0 / (2.0 * h);
  sys.rhs[0] = -prm.rho * a;
  for (int j = 1; j < N; ++j) {
    sys.at(j, j - 1) = 1.0;
    sys.at(j, j) = -2.0;
    sys.at(j, j + 1) = 1.0;
  }
  sys.at(N, N) = 1.0;
  sys.rhs[N] = pH;
  return solve_banded(std::move(sys));
}

}  // namespace

RectCoupledState step_mp_am(const RectCoupledState& s, const RectGrid& g, const RectSchemeConfig& cfg,
                            const ModelProblemParams& prm, const RectForcing& f) {
  cfg.validate();
  check_state(s, g);
  const double dt = cfg.dt, tn1 = s.t + dt;
  const double ab = cfg.alpha_bar;
  const bool amp = cfg.variant != SchemeVariant::TP;
  if (!amp && prm.m_b == 0.0) throw NumericalError("step_mp_am: TP update is singular for m_b = 0");
  const double gv = f.g(tn1), pH = f.far(tn1);
  // Interface value of the viscous term for the k = 0 mode (identically zero).
  const double viscous = 0.0;

  // Step 1: extrapolated acceleration, leap-frog velocity.
  const double a_e = 2.0 * s.body.a - s.body_prev.a;
  const double v_e = s.body_prev.v + 2.0 * dt * s.body.a;
  // Step 2: the predicted fluid velocity is uniform (discrete divergence) and equal to v_e.
  (void)v_e;

  // Step 3: predicted pressure and body acceleration.
  std::vector<double> p_p;
  double a_p;
  if (amp) {
    PressureSolve ps = solve_pressure_amp(g, prm, gv + viscous, pH);
    p_p = std::move(ps.p);
    a_p = ps.a;
  } else {
    p_p = solve_pressure_tp(g, prm, a_e, pH);
    a_p = (-prm.L * p_p[0] + gv) / prm.m_b;
  }
  // Step 4: predicted body velocity.
  const double v_p = s.body.v + dt * (ab * a_p + (1.0 - ab) * s.body.a);
  // Step 5: fluid velocity matches the predicted body velocity.
  RectCoupledState out;
  out.t = tn1;
  out.vel.assign(g.N + 1, v_p);
  // Step 6: corrected pressure and acceleration.
  double a_n1;
  if (amp) {
    PressureSolve ps = solve_pressure_amp(g, prm, gv + viscous, pH);
    out.p = std::move(ps.p);
    a_n1 = ps.a;
  } else {
    out.p = solve_pressure_tp(g, prm, a_p, pH);
    a_n1 = (-prm.L * out.p[0] + gv) / prm.m_b;
  }
  // Step 7: body update.
  out.body.a = a_n1;
  out.body.v = s.body.v + dt * (ab * a_n1 + (1.0 - ab) * s.body.a);
  out.body.x = s.body.x + dt * (ab * out.body.v + (1.0 - ab) * s.body.v);
  // Step 8: velocity correction.
  if (cfg.velocity_correction()) std::fill(out.vel.begin(), out.vel.end(), out.body.v);
  out.vel_prev = s.vel;
  out.body_prev = s.body;
  return out;
}

RectCoupledState step_mp_ad(const RectCoupledState& s, const RectGrid& g, const RectSchemeConfig& cfg,
                            const ModelProblemParams& prm, const RectForcing& f) {
  cfg.validate();
  check_state(s, g);
  const double dt = cfg.dt, tn1 = s.t + dt;
  const double ab = cfg.alpha_bar;
  const double nu = prm.nu();
  const double beta = cfg.effective_beta();
  const AddedDampingInfo ad = added_damping_coefficient(prm.mu, prm.L, g.dy, nu, dt, cfg.alpha, cfg.damping_formula);
  const double relax = beta * dt * ad.Du;
  const double mass = prm.m_b + relax;
  if (mass == 0.0) throw NumericalError("step_mp_ad: singular body update (m_b + beta_d dt D^u = 0)");
  const double gu = f.g(tn1), uH = f.far(tn1);
  const double muL = prm.mu * prm.L;

  // Step 1
  const double a_e = 2.0 * s.body.a - s.body_prev.a;
  const double u_e = s.body_prev.v + 2.0 * dt * s.body.a;
  // Step 2
  const std::vector<double> u_p = diffuse(s.vel, g, nu, dt, cfg.alpha, u_e, uH);
  // Step 3
  const double a_p = (muL * one_sided_derivative(u_p, g.dy) + relax * a_e + gu) / mass;
  // Step 4
  const double ub_p = s.body.v + dt * (ab * a_p + (1.0 - ab) * s.body.a);
  // Step 5
  RectCoupledState out;
  out.t = tn1;
  out.vel = diffuse(s.vel, g, nu, dt, cfg.alpha, ub_p, uH);
  // Step 6
  const double a_n1 = (muL * one_sided_derivative(out.vel, g.dy) + relax * a_p + gu) / mass;
  // Step 7
  out.body.a = a_n1;
  out.body.v = s.body.v + dt * (ab * a_n1 + (1.0 - ab) * s.body.a);
  out.body.x = s.body.x + dt * (ab * out.body.v + (1.0 - ab) * s.body.v);
  // Step 8
  if (cfg.velocity_correction()) out.vel = diffuse(s.vel, g, nu, dt, cfg.alpha, out.body.v, uH);
  out.p.assign(g.N + 1, 0.0);
  out.vel_prev = s.vel;
  out.body_prev = s.body;
  return out;
}

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

RectRecord record_of(const RectCoupledState& s) {
  return {s.t, s.body, max_abs(s.vel), max_abs(s.p)};
}

}  // namespace

std::vector<RectRecord> run_rect(RectProblem problem, const RectSchemeConfig& cfg, const ModelProblemParams& prm,
                                 const RectGrid& grid, double T, const RectCoupledState& initial,
                                 const RectForcing& forcing, const RectObserver& observer) {
  if (!(T >= 0.0)) throw std::invalid_argument("run_rect: T must be non-negative");
  cfg.validate();
  prm.validate();
  const long steps = static_cast<long>(std::ceil(T / cfg.dt - 1e-9));
  std::vector<RectRecord> out;
  out.reserve(steps + 1);
  RectCoupledState s = initial;
  out.push_back(record_of(s));
  if (observer) observer(s);
  for (long n = 0; n < steps; ++n) {
    s = problem == RectProblem::MP_AM ? step_mp_am(s, grid, cfg, prm, forcing) : step_mp_ad(s, grid, cfg, prm, forcing);
    out.push_back(record_of(s));
    if (observer) observer(s);
    if (!std::isfinite(s.body.a) || !std::isfinite(s.body.v)) break;
  }
  return out;
}

RectForcing piston_forcing(const ModelProblemParams& prm, const PistonMotion& motion) {
  RectForcing f;
  f.body = [](double) { return 0.0; };
  f.boundary = [prm, motion](double t) { return piston_exact(prm, motion, t).p_H; };
  return f;
}

RectCoupledState piston_initial_state(const RectGrid& g, const ModelProblemParams& prm, const PistonMotion& motion,
                                      double dt) {
  const PistonSolution e0 = piston_exact(prm, motion, 0.0);
  const PistonSolution em = piston_exact(prm, motion, -dt);
  RectCoupledState s;
  s.t = 0.0;
  s.body = {e0.y_b, e0.v_b, e0.a_v};
  s.body_prev = {em.y_b, em.v_b, em.a_v};
  s.vel.assign(g.N + 1, e0.v_b);
  s.vel_prev.assign(g.N + 1, em.v_b);
  s.p.resize(g.N + 1);
  for (int j = 0; j <= g.N; ++j) s.p[j] = e0.pressure(g.y(j));
  return s;
}

RectCoupledState sliding_block_initial_state(const RectGrid& g, const ModelProblemParams& prm,
                                             const SlidingBlockSolution& sol, double dt) {
  const double rate = prm.nu() * sol.lambda * sol.lambda;
  auto body = [&](double t) {
    const double ub = sol.ub(t);
    const double x = rate > 0.0 ? sol.amplitude * (-std::expm1(-rate * t)) / rate : sol.amplitude * t;
    return BodyState{x, ub, -rate * ub};
  };
  RectCoupledState s;
  s.t = 0.0;
  s.body = body(0.0);
  s.body_prev = body(-dt);
  s.vel.resize(g.N + 1);
  s.vel_prev.resize(g.N + 1);
  for (int j = 0; j <= g.N; ++j) {
    s.vel[j] = sol.u(g.y(j), 0.0);
    s.vel_prev[j] = sol.u(g.y(j), -dt);
  }
  s.p.assign(g.N + 1, 0.0);
  return s;
}

}  // namespace amprb
