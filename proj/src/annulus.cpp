#include "amprb/annulus.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "amprb/numerics.hpp"

namespace amprb {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

RadialGrid::RadialGrid(int N_, double r1_, double r2_) : N(N_), r1(r1_), r2(r2_), dr((r2_ - r1_) / N_) {
  if (N < 4) throw std::invalid_argument("RadialGrid: N must be at least 4");
  if (!(r1 > 0.0) || !(r2 > r1)) throw std::invalid_argument("RadialGrid: need 0 < r1 < r2");
}

AnnularDampingInfo added_damping_coefficient_annular(double mu, double r1, double dr, double nu, double dt, double rho,
                                                     double I_b) {
  if (!(mu >= 0.0) || !(r1 > 0.0) || !(dr > 0.0) || !(nu > 0.0) || !(dt > 0.0) || !(rho > 0.0))
    throw std::invalid_argument("added_damping_coefficient_annular: inputs must be positive");
  AnnularDampingInfo d;
  d.delta_tilde = dr / std::sqrt(0.5 * nu * dt);
  d.Dbar_omega = -std::expm1(-d.delta_tilde);
  d.Domega = mu * (2.0 * kPi * r1) * r1 * r1 * d.Dbar_omega / dr;
  d.Ibar = I_b * d.delta_tilde * d.delta_tilde / (rho * (2.0 * kPi * r1) * dr * r1 * r1);
  return d;
}

double translational_damping_coefficient(double mu, double r1, double dr, double nu, double dt) {
  const AnnularDampingInfo d = added_damping_coefficient_annular(mu, r1, dr, nu, dt);
  return mu * kPi * r1 * d.Dbar_omega / dr;
}

namespace {

std::array<double, 3> solve3(const std::array<double, 3>& x, const std::array<double, 3>& target) {
  Eigen::Matrix3d M;
  Eigen::Vector3d t(target[0], target[1], target[2]);
  for (int k = 0; k < 3; ++k) {
    M(0, k) = 1.0;
    M(1, k) = x[k];
    M(2, k) = 1.0 / x[k];
  }
  const Eigen::Vector3d w = M.colPivHouseholderQr().solve(t);
  return {w(0), w(1), w(2)};
}

}  // namespace

std::array<double, 3> span_exact_derivative_weights(const std::array<double, 3>& nodes, double at) {
  return solve3(nodes, {0.0, 1.0, -1.0 / (at * at)});
}

std::array<double, 3> span_exact_pressure_weights(const std::array<double, 3>& nodes) {
  return solve3(nodes, {-1.0 / nodes[1], 0.0, 0.0});
}

namespace {

std::array<double, 3> nodes_of(const RadialGrid& g, int j0) { return {g.r(j0), g.r(j0 + 1), g.r(j0 + 2)}; }

// Derivative weights at node j using the stencil starting at first(j).
int stencil_start(const RadialGrid& g, int j) { return std::clamp(j - 1, 0, g.N - 2); }

std::vector<std::array<double, 3>> derivative_table(const RadialGrid& g) {
  std::vector<std::array<double, 3>> w(g.N + 1);
  for (int j = 0; j <= g.N; ++j) w[j] = span_exact_derivative_weights(nodes_of(g, stencil_start(g, j)), g.r(j));
  return w;
}

std::vector<double> pressure_gradient(const RadialGrid& g, const std::vector<double>& p) {
  const auto w = derivative_table(g);
  std::vector<double> out(g.N + 1);
  for (int j = 0; j <= g.N; ++j) {
    const int s = stencil_start(g, j);
    out[j] = w[j][0] * p[s] + w[j][1] * p[s + 1] + w[j][2] * p[s + 2];
  }
  return out;
}

double forward_derivative(const std::vector<double>& f, double h) {
  return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
}

double backward_derivative(const std::vector<double>& f, double h) {
  const size_t n = f.size() - 1;
  return (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * h);
}

// Radial pressure for the k = 1 mode coupled to a body acceleration (ordering a, p_0..p_N).
// Row 0 is m a + r1 pi p_0 = body_rhs (coupled) or a = a_given (decoupled).
// Row 1 is p_r(r1) + rho a = left_rhs, the last row is p_r(r2) = right_rhs.
struct RadialPressure {
  std::vector<double> p;
  double a = 0.0;
};

RadialPressure solve_radial_pressure(const RadialGrid& g, double rho, bool coupled, double mass, double body_rhs,
                                     double a_given, double left_rhs, double right_rhs) {
  const int N = g.N;
  BandedSystem sys(N + 2, 2, 3);
  if (coupled) {
    sys.at(0, 0) = mass;
    sys.at(0, 1) = kPi * g.r1;
    sys.rhs[0] = body_rhs;
  } else {
    sys.at(0, 0) = 1.0;
    sys.rhs[0] = a_given;
  }
  const auto d0 = span_exact_derivative_weights(nodes_of(g, 0), g.r1);
  sys.at(1, 0) = rho;
  for (int k = 0; k < 3; ++k) sys.at(1, 1 + k) = d0[k];
  sys.rhs[1] = left_rhs;
  for (int j = 1; j < N; ++j) {
    const auto w = span_exact_pressure_weights(nodes_of(g, j - 1));
    for (int k = 0; k < 3; ++k) sys.at(j + 1, j + k) = w[k];
  }
  const auto dN = span_exact_derivative_weights(nodes_of(g, N - 2), g.r2);
  for (int k = 0; k < 3; ++k) sys.at(N + 1, N - 1 + k) = dN[k];
  sys.rhs[N + 1] = right_rhs;
  std::vector<double> x;
  try {
    x = solve_banded(std::move(sys));
  } catch (const NumericalError&) {
    throw NumericalError("radial pressure: singular coupled pressure/acceleration system");
  }
  RadialPressure out;
  out.a = x[0];
  out.p.assign(x.begin() + 1, x.end());
  return out;
}

// Coefficients of (1/r)(r f_r)_r - c f / r^2 at interior node j: {lower, diag, upper}.
std::array<double, 3> cylindrical_row(const RadialGrid& g, int j, double c) {
  const double r = g.r(j), h2 = g.dr * g.dr;
  const double lo = (r - 0.5 * g.dr) / (r * h2), up = (r + 0.5 * g.dr) / (r * h2);
  return {lo, -(lo + up) - c / (r * r), up};
}

// Trapezoidal-type step of v_t = nu (L v + source) with Dirichlet ends, L the scalar cylindrical operator.
std::vector<double> diffuse_cylindrical(const RadialGrid& g, const std::vector<double>& v, double nu, double dt,
                                        double alpha, double left, double right) {
  const int N = g.N;
  BandedSystem sys(N - 1, 1, 1);
  for (int j = 1; j < N; ++j) {
    const int i = j - 1;
    const auto c = cylindrical_row(g, j, 1.0);
    const double Lv = c[0] * v[j - 1] + c[1] * v[j] + c[2] * v[j + 1];
    sys.at(i, i) = 1.0 - alpha * nu * dt * c[1];
    if (i > 0) sys.at(i, i - 1) = -alpha * nu * dt * c[0];
    if (i < N - 2) sys.at(i, i + 1) = -alpha * nu * dt * c[2];
    sys.rhs[i] = v[j] + (1.0 - alpha) * nu * dt * Lv;
    if (j == 1) sys.rhs[i] += alpha * nu * dt * c[0] * left;
    if (j == N - 1) sys.rhs[i] += alpha * nu * dt * c[2] * right;
  }
  const std::vector<double> x = solve_banded(std::move(sys));
  std::vector<double> out(N + 1);
  out[0] = left;
  out[N] = right;
  std::copy(x.begin(), x.end(), out.begin() + 1);
  return out;
}

// Coupled k = 1 viscous step for (u, v) interleaved at interior nodes, with the pressure
// gradient (pr) and p/r terms (pq) supplied as time-averaged sources.
struct VelocityPair {
  std::vector<double> u, v;
};

VelocityPair viscous_pair_step(const RadialGrid& g, const VelocityPair& s, const std::vector<double>& pr,
                               const std::vector<double>& pq, double rho, double nu, double dt, double alpha,
                               double left, double right) {
  const int N = g.N;
  const int n = 2 * (N - 1);
  BandedSystem sys(n, 2, 2);
  const double ai = alpha * nu * dt, ae = (1.0 - alpha) * nu * dt;
  for (int j = 1; j < N; ++j) {
    const int iu = 2 * (j - 1), iv = iu + 1;
    const double r = g.r(j);
    const auto c = cylindrical_row(g, j, 2.0);
    const double cross = 2.0 / (r * r);
    const double Lu = c[0] * s.u[j - 1] + c[1] * s.u[j] + c[2] * s.u[j + 1] + cross * s.v[j];
    const double Lv = c[0] * s.v[j - 1] + c[1] * s.v[j] + c[2] * s.v[j + 1] + cross * s.u[j];
    sys.at(iu, iu) = 1.0 - ai * c[1];
    sys.at(iu, iv) = -ai * cross;
    sys.at(iv, iv) = 1.0 - ai * c[1];
    sys.at(iv, iu) = -ai * cross;
    if (j > 1) {
      sys.at(iu, iu - 2) = -ai * c[0];
      sys.at(iv, iv - 2) = -ai * c[0];
    }
    if (j < N - 1) {
      sys.at(iu, iu + 2) = -ai * c[2];
      sys.at(iv, iv + 2) = -ai * c[2];
    }
    sys.rhs[iu] = s.u[j] + ae * Lu - dt * pr[j] / rho;
    sys.rhs[iv] = s.v[j] + ae * Lv - dt * pq[j] / rho;
    if (j == 1) {
      sys.rhs[iu] += ai * c[0] * left;
      sys.rhs[iv] += ai * c[0] * left;
    }
    if (j == N - 1) {
      sys.rhs[iu] += ai * c[2] * right;
      sys.rhs[iv] += ai * c[2] * right;
    }
  }
  const std::vector<double> x = solve_banded(std::move(sys));
  VelocityPair out;
  out.u.assign(N + 1, 0.0);
  out.v.assign(N + 1, 0.0);
  out.u[0] = out.v[0] = left;
  out.u[N] = out.v[N] = right;
  for (int j = 1; j < N; ++j) {
    out.u[j] = x[2 * (j - 1)];
    out.v[j] = x[2 * (j - 1) + 1];
  }
  return out;
}

void check_state(const AnnularState& s, const RadialGrid& g, bool need_pair) {
  const size_t n = static_cast<size_t>(g.N) + 1;
  if (s.vhat.size() != n) throw std::invalid_argument("annular step: state size does not match grid");
  if (need_pair && (s.uhat.size() != n || s.p.size() != n || s.p_prev.size() != n))
    throw std::invalid_argument("annular step: state size does not match grid");
}

std::vector<double> average(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
  return out;
}

std::vector<double> over_r(const RadialGrid& g, const std::vector<double>& p) {
  std::vector<double> out(p.size());
  for (size_t j = 0; j < p.size(); ++j) out[j] = p[j] / g.r(static_cast<int>(j));
  return out;
}

// Vorticity amplitude W = (u - (r v)_r) / r at an end of the annulus.
double vorticity_at(const RadialGrid& g, const VelocityPair& s, bool left) {
  std::vector<double> rv(g.N + 1);
  for (int j = 0; j <= g.N; ++j) rv[j] = g.r(j) * s.v[j];
  if (left) return (s.u[0] - forward_derivative(rv, g.dr)) / g.r1;
  return (s.u[g.N] - backward_derivative(rv, g.dr)) / g.r2;
}

}  // namespace

std::vector<double> solve_radial_pressure_neumann(const RadialGrid& g, double left, double right) {
  return solve_radial_pressure(g, 1.0, false, 0.0, 0.0, 0.0, left, right).p;
}

std::vector<double> apply_cylindrical_operator(const RadialGrid& g, const std::vector<double>& v) {
  if (v.size() != static_cast<size_t>(g.N) + 1) throw std::invalid_argument("apply_cylindrical_operator: size mismatch");
  std::vector<double> out(g.N + 1, 0.0);
  for (int j = 1; j < g.N; ++j) {
    const auto c = cylindrical_row(g, j, 1.0);
    out[j] = c[0] * v[j - 1] + c[1] * v[j] + c[2] * v[j + 1];
  }
  return out;
}

AnnularState step_mp_ama(const AnnularState& s, const RadialGrid& g, const AnnularSchemeConfig& cfg,
                         const ModelProblemParams& prm, const TimeFunction& g_u) {
  cfg.validate();
  check_state(s, g, true);
  const double dt = cfg.dt, tn1 = s.t + dt, ab = cfg.alpha_bar;
  const bool amp = cfg.variant != SchemeVariant::TP;
  if (!amp && prm.m_b == 0.0) throw NumericalError("step_mp_ama: TP update is singular for m_b = 0");
  const double gu = g_u ? g_u(tn1) : 0.0;
  const double r1pi = kPi * g.r1;

  auto pressure = [&](double a_ref) {
    RadialPressure rp = solve_radial_pressure(g, prm.rho, amp, prm.m_b, gu, a_ref, 0.0, 0.0);
    if (!amp) rp.a = (gu - r1pi * rp.p[0]) / prm.m_b;
    return rp;
  };
  auto fluid = [&](const std::vector<double>& p_new, double ub, AnnularState& out) {
    const std::vector<double> pr = average(pressure_gradient(g, p_new), pressure_gradient(g, s.p));
    const std::vector<double> pq = average(over_r(g, p_new), over_r(g, s.p));
    out.uhat = s.uhat;
    out.vhat = s.vhat;
    for (int j = 0; j <= g.N; ++j) {
      out.uhat[j] -= dt * pr[j] / prm.rho;
      out.vhat[j] -= dt * pq[j] / prm.rho;
    }
    out.uhat[0] = ub;
    out.uhat[g.N] = 0.0;
  };

  // Step 1
  const double a_e = 2.0 * s.body.a - s.body_prev.a;
  // Step 3
  const RadialPressure pp = pressure(a_e);
  // Step 4
  const double ub_p = s.body.v + dt * (ab * pp.a + (1.0 - ab) * s.body.a);
  // Step 5
  AnnularState out;
  out.t = tn1;
  fluid(pp.p, ub_p, out);
  // Step 6
  const RadialPressure pc = pressure(pp.a);
  out.p = pc.p;
  // Step 7
  out.body.a = pc.a;
  out.body.v = s.body.v + dt * (ab * pc.a + (1.0 - ab) * s.body.a);
  out.body.x = s.body.x + dt * (ab * out.body.v + (1.0 - ab) * s.body.v);
  // Step 8
  if (cfg.velocity_correction()) fluid(out.p, out.body.v, out);
  out.p_prev = s.p;
  out.uhat_prev = s.uhat;
  out.vhat_prev = s.vhat;
  out.body_prev = s.body;
  return out;
}

AnnularState step_mp_ada(const AnnularState& s, const RadialGrid& g, const AnnularSchemeConfig& cfg,
                         const ModelProblemParams& prm, const TimeFunction& g_omega) {
  cfg.validate();
  check_state(s, g, false);
  const double dt = cfg.dt, tn1 = s.t + dt, ab = cfg.alpha_bar;
  const double nu = prm.nu();
  const double beta = cfg.effective_beta();
  const AnnularDampingInfo ad = added_damping_coefficient_annular(prm.mu, g.r1, g.dr, nu, dt);
  const double relax = beta * dt * ad.Domega;
  const double inertia = prm.I_b + relax;
  if (inertia == 0.0) throw NumericalError("step_mp_ada: singular body update (I_b + beta_d dt D^omega = 0)");
  const double gw = g_omega ? g_omega(tn1) : 0.0;
  const double r1 = g.r1;

  auto torque = [&](const std::vector<double>& v) {
    const std::vector<double> q = over_r(g, v);
    return 2.0 * kPi * r1 * r1 * prm.mu * r1 * forward_derivative(q, g.dr);
  };

  // Step 1
  const double b_e = 2.0 * s.body.a - s.body_prev.a;
  const double w_e = s.body_prev.v + 2.0 * dt * s.body.a;
  // Step 2
  const std::vector<double> v_p = diffuse_cylindrical(g, s.vhat, nu, dt, cfg.alpha, r1 * w_e, 0.0);
  // Step 3
  const double b_p = (torque(v_p) + relax * b_e + gw) / inertia;
  // Step 4
  const double w_p = s.body.v + dt * (ab * b_p + (1.0 - ab) * s.body.a);
  // Step 5
  AnnularState out;
  out.t = tn1;
  out.vhat = diffuse_cylindrical(g, s.vhat, nu, dt, cfg.alpha, r1 * w_p, 0.0);
  // Step 6
  const double b_n1 = (torque(out.vhat) + relax * b_p + gw) / inertia;
  // Step 7
  out.body.a = b_n1;
  out.body.v = s.body.v + dt * (ab * b_n1 + (1.0 - ab) * s.body.a);
  out.body.x = s.body.x + dt * (ab * out.body.v + (1.0 - ab) * s.body.v);
  // Step 8
  if (cfg.velocity_correction()) out.vhat = diffuse_cylindrical(g, s.vhat, nu, dt, cfg.alpha, r1 * out.body.v, 0.0);
  out.uhat.assign(g.N + 1, 0.0);
  out.p.assign(g.N + 1, 0.0);
  out.p_prev = out.p;
  out.uhat_prev = s.uhat;
  out.vhat_prev = s.vhat;
  out.body_prev = s.body;
  return out;
}

AnnularState step_translating_disk_radial(const AnnularState& s, const RadialGrid& g, const AnnularSchemeConfig& cfg,
                                          const ModelProblemParams& prm) {
  cfg.validate();
  check_state(s, g, true);
  const double dt = cfg.dt, tn1 = s.t + dt, ab = cfg.alpha_bar;
  const double nu = prm.nu(), mu = prm.mu, rho = prm.rho;
  const bool amp = cfg.variant != SchemeVariant::TP;
  const double beta = cfg.effective_beta();
  const double relax = beta * dt * translational_damping_coefficient(mu, g.r1, g.dr, nu, dt);
  const double mass = prm.m_b + relax;
  if (mass == 0.0) throw NumericalError("step_translating_disk_radial: singular body update (m_b + beta_d dt D = 0)");
  const double r1pi = kPi * g.r1;
  const VelocityPair now{s.uhat, s.vhat};

  auto velocity = [&](const std::vector<double>& p_new, double ub) {
    const std::vector<double> pr = average(pressure_gradient(g, p_new), pressure_gradient(g, s.p));
    const std::vector<double> pq = average(over_r(g, p_new), over_r(g, s.p));
    return viscous_pair_step(g, now, pr, pq, rho, nu, dt, cfg.alpha, ub, 0.0);
  };
  // Pressure and acceleration from the velocity field w, relaxing towards a_ref.
  auto pressure = [&](const VelocityPair& w, double a_ref) {
    const double shear = r1pi * mu * forward_derivative(w.v, g.dr);
    const double left = -mu * vorticity_at(g, w, true) / g.r1;
    const double right = -mu * vorticity_at(g, w, false) / g.r2;
    RadialPressure rp = solve_radial_pressure(g, rho, amp, mass, shear + relax * a_ref, a_ref, left, right);
    if (!amp) rp.a = (shear - r1pi * rp.p[0]) / prm.m_b;
    return rp;
  };
  if (!amp && prm.m_b == 0.0) throw NumericalError("step_translating_disk_radial: TP update is singular for m_b = 0");

  // Step 1
  const double a_e = 2.0 * s.body.a - s.body_prev.a;
  const double u_e = s.body_prev.v + 2.0 * dt * s.body.a;
  std::vector<double> p_e(s.p.size());
  for (size_t j = 0; j < p_e.size(); ++j) p_e[j] = 2.0 * s.p[j] - s.p_prev[j];
  // Step 2
  const VelocityPair w_p = velocity(p_e, u_e);
  // Step 3
  const RadialPressure pp = pressure(w_p, a_e);
  // Step 4
  const double ub_p = s.body.v + dt * (ab * pp.a + (1.0 - ab) * s.body.a);
  // Step 5
  VelocityPair w = velocity(pp.p, ub_p);
  // Step 6
  const RadialPressure pc = pressure(w, pp.a);
  AnnularState out;
  out.t = tn1;
  out.p = pc.p;
  // Step 7
  out.body.a = pc.a;
  out.body.v = s.body.v + dt * (ab * pc.a + (1.0 - ab) * s.body.a);
  out.body.x = s.body.x + dt * (ab * out.body.v + (1.0 - ab) * s.body.v);
  // Step 8
  if (cfg.velocity_correction()) w = velocity(out.p, out.body.v);
  out.uhat = std::move(w.u);
  out.vhat = std::move(w.v);
  out.p_prev = s.p;
  out.uhat_prev = s.uhat;
  out.vhat_prev = s.vhat;
  out.body_prev = s.body;
  return out;
}

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

AnnularRecord record_of(const AnnularState& s) {
  return {s.t, s.body, std::max(max_abs(s.uhat), max_abs(s.vhat)), max_abs(s.p)};
}

}  // namespace

std::vector<AnnularRecord> run_annulus(AnnularProblem problem, const AnnularSchemeConfig& cfg,
                                       const ModelProblemParams& prm, const RadialGrid& grid, double T,
                                       const AnnularState& initial, const TimeFunction& forcing,
                                       const AnnularObserver& observer) {
  if (!(T >= 0.0)) throw std::invalid_argument("run_annulus: T must be non-negative");
  cfg.validate();
  prm.validate();
  const long steps = static_cast<long>(std::ceil(T / cfg.dt - 1e-9));
  std::vector<AnnularRecord> out;
  out.reserve(steps + 1);
  AnnularState s = initial;
  out.push_back(record_of(s));
  if (observer) observer(s);
  for (long n = 0; n < steps; ++n) {
    switch (problem) {
      case AnnularProblem::MP_AMA: s = step_mp_ama(s, grid, cfg, prm, forcing); break;
      case AnnularProblem::MP_ADA: s = step_mp_ada(s, grid, cfg, prm, forcing); break;
      case AnnularProblem::TRANSLATING_DISK: s = step_translating_disk_radial(s, grid, cfg, prm); break;
    }
    out.push_back(record_of(s));
    if (observer) observer(s);
    if (!std::isfinite(s.body.a) || !std::isfinite(s.body.v)) break;
  }
  return out;
}

AnnularState mp_ama_initial_state(const RadialGrid& g, const ModelProblemParams& prm, const ScalarForcing& g_u,
                                  double u_b0, double dt) {
  AnnularState s;
  const size_t n = static_cast<size_t>(g.N) + 1;
  for (auto* v : {&s.uhat, &s.vhat, &s.uhat_prev, &s.vhat_prev, &s.p, &s.p_prev}) v->resize(n);
  for (int j = 0; j <= g.N; ++j) {
    const AnnularAddedMassSolution e0 = mp_ama_exact(prm, g_u, u_b0, 0.0, g.r(j));
    const AnnularAddedMassSolution em = mp_ama_exact(prm, g_u, u_b0, -dt, g.r(j));
    s.uhat[j] = e0.u_hat;
    s.vhat[j] = e0.v_hat;
    s.p[j] = e0.p_hat;
    s.uhat_prev[j] = em.u_hat;
    s.vhat_prev[j] = em.v_hat;
    s.p_prev[j] = em.p_hat;
    if (j == 0) {
      s.body = {0.0, e0.u_b, e0.a_u};
      s.body_prev = {-0.5 * dt * (e0.u_b + em.u_b), em.u_b, em.a_u};
    }
  }
  return s;
}

namespace {

BodyState decaying_body(double amplitude, double rate, double t) {
  const double v = amplitude * std::exp(-rate * t);
  const double x = rate > 0.0 ? amplitude * (-std::expm1(-rate * t)) / rate : amplitude * t;
  return {x, v, -rate * v};
}

}  // namespace

AnnularState rotating_disk_initial_state(const RadialGrid& g, const RotatingDiskSolution& sol, double dt) {
  AnnularState s;
  const size_t n = static_cast<size_t>(g.N) + 1;
  s.vhat.resize(n);
  s.vhat_prev.resize(n);
  s.uhat.assign(n, 0.0);
  s.uhat_prev.assign(n, 0.0);
  s.p.assign(n, 0.0);
  s.p_prev.assign(n, 0.0);
  for (int j = 0; j <= g.N; ++j) {
    s.vhat[j] = sol.v_theta(g.r(j), 0.0);
    s.vhat_prev[j] = sol.v_theta(g.r(j), -dt);
  }
  const double rate = sol.lambda * sol.lambda * sol.params.nu();
  const double w0 = sol.omega_b(0.0);
  s.body = decaying_body(w0, rate, 0.0);
  s.body_prev = decaying_body(w0, rate, -dt);
  return s;
}

AnnularState translating_disk_initial_state(const RadialGrid& g, const TranslatingDiskSolution& sol, double dt) {
  AnnularState s;
  const size_t n = static_cast<size_t>(g.N) + 1;
  for (auto* v : {&s.uhat, &s.vhat, &s.uhat_prev, &s.vhat_prev, &s.p, &s.p_prev}) v->resize(n);
  for (int j = 0; j <= g.N; ++j) {
    const double r = g.r(j);
    s.uhat[j] = sol.uhat(r, 0.0);
    s.vhat[j] = sol.vhat(r, 0.0);
    s.p[j] = sol.phat(r, 0.0);
    s.uhat_prev[j] = sol.uhat(r, -dt);
    s.vhat_prev[j] = sol.vhat(r, -dt);
    s.p_prev[j] = sol.phat(r, -dt);
  }
  const double rate = sol.lambda * sol.lambda * sol.params.nu();
  s.body = decaying_body(sol.params.alpha_b, rate, 0.0);
  s.body_prev = decaying_body(sol.params.alpha_b, rate, -dt);
  return s;
}

}  // namespace amprb
