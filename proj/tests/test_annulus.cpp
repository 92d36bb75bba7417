#include <doctest.h>

#include "amprb/annulus.hpp"
#include "amprb/numerics.hpp"

#include <cmath>
#include <numbers>

using namespace amprb;

namespace {

AnnularState zero_annular_state(const RadialGrid& g) {
  AnnularState s;
  s.uhat.assign(g.N + 1, 0.0);
  s.vhat = s.uhat_prev = s.vhat_prev = s.p = s.p_prev = s.uhat;
  return s;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double rotating_error(double rho_b, int j) {
  const ModelProblemParams prm = ModelProblemParams::disk(rho_b);
  const RotatingDiskSolution sol = rotating_disk_exact(rotating_disk_eigenvalue(prm), prm);
  const RadialGrid g(10 * j, prm.r1, prm.r2);
  AnnularSchemeConfig cfg;
  cfg.dt = 1.0 / (10 * j);
  const auto rec = run_annulus(AnnularProblem::MP_ADA, cfg, prm, g, 1.0, rotating_disk_initial_state(g, sol, cfg.dt));
  return std::abs(rec.back().body.v - sol.omega_b(rec.back().t));
}

double translating_error(double rho_b, int j, SchemeVariant variant = SchemeVariant::AMP_VC) {
  const ModelProblemParams prm = ModelProblemParams::disk(rho_b);
  const TranslatingDiskSolution sol = translating_disk_exact(translating_disk_eigenvalue(prm), prm);
  const RadialGrid g(10 * j, prm.r1, prm.r2);
  AnnularSchemeConfig cfg;
  cfg.variant = variant;
  cfg.dt = 1.0 / (10 * j);
  const auto rec =
      run_annulus(AnnularProblem::TRANSLATING_DISK, cfg, prm, g, 1.0, translating_disk_initial_state(g, sol, cfg.dt));
  return std::abs(rec.back().body.v - sol.ub(rec.back().t));
}

// Rotational model problem at delta = 0.5 (dr = 0.025, dt = 0.05, nu = 0.1) with Ibar = 0.01.
std::vector<double> rotation_probe(SchemeVariant variant, double beta, double T = 20.0) {
  ModelProblemParams prm = ModelProblemParams::disk(0.0);
  const RadialGrid g(40, 1.0, 2.0);
  prm.I_b = 0.01 * (2.0 * std::numbers::pi) * g.dr / 0.25;
  AnnularSchemeConfig cfg;
  cfg.variant = variant;
  cfg.beta_d = beta;
  cfg.dt = 0.05;
  AnnularState s = zero_annular_state(g);
  s.body = {0.0, 1e-3, 0.0};
  s.body_prev = s.body;
  s.vhat[0] = 1e-3;
  for (int k = 1; k < g.N; ++k) s.vhat[k] = 1e-3 * std::sin(0.3 * k * k);
  s.vhat_prev = s.vhat;
  std::vector<double> b;
  for (const auto& r : run_annulus(AnnularProblem::MP_ADA, cfg, prm, g, T, s)) b.push_back(r.body.a);
  return b;
}

int sign_changes(const std::vector<double>& b, size_t last) {
  int n = 0;
  for (size_t i = b.size() - last; i + 1 < b.size(); ++i)
    if (b[i] * b[i + 1] < 0.0) ++n;
  return n;
}

}  // namespace

TEST_CASE("radial grid and annular added damping") {
  const RadialGrid g(40, 1.0, 2.0);
  CHECK(g.dr == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(g.r(40) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(RadialGrid(3, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(RadialGrid(10, 0.0, 2.0), std::invalid_argument);

  const AnnularDampingInfo d = added_damping_coefficient_annular(0.1, 1.0, 0.025, 0.1, 0.025);
  CHECK(d.delta_tilde == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  const double expected = 0.1 * 2.0 * std::numbers::pi * (1.0 - std::exp(-std::sqrt(0.5))) / 0.025;
  CHECK(std::abs(d.Domega - expected) < 1e-12 * expected);
  CHECK(added_damping_coefficient_annular(0.0, 1.0, 0.025, 0.1, 0.025).Domega == 0.0);
  const AnnularDampingInfo big = added_damping_coefficient_annular(0.1, 1.0, 0.5, 0.1, 1e-6);
  CHECK(big.Domega == doctest::Approx(0.1 * 2.0 * std::numbers::pi / 0.5).epsilon(1e-12));
  // Ibar maps I_b back through delta, rho, r1 and dr.
  const AnnularDampingInfo ib = added_damping_coefficient_annular(0.1, 1.0, 0.025, 0.1, 0.05, 1.0, 0.3);
  CHECK(ib.Ibar == doctest::Approx(0.3 * 0.25 / (2.0 * std::numbers::pi * 0.025)).epsilon(1e-13));
  CHECK(translational_damping_coefficient(0.1, 1.0, 0.025, 0.1, 0.025) == doctest::Approx(0.5 * d.Domega));
  CHECK_THROWS_AS(added_damping_coefficient_annular(0.1, 1.0, 0.0, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("k = 1 pressure solve reproduces c1 r + c2/r") {
  for (int N : {4, 10, 37}) {
    const RadialGrid g(N, 0.7, 2.3);
    for (auto [c1, c2] : {std::pair{1.0, 0.0}, {0.0, 1.0}, {-2.5, 3.75}}) {
      auto dp = [&](double r) { return c1 - c2 / (r * r); };
      const std::vector<double> p = solve_radial_pressure_neumann(g, dp(g.r1), dp(g.r2));
      for (int j = 0; j <= N; ++j) CHECK(std::abs(p[j] - (c1 * g.r(j) + c2 / g.r(j))) < 1e-12);
    }
  }
  const auto w = span_exact_derivative_weights({1.0, 1.1, 1.2}, 1.0);
  CHECK(std::abs(w[0] + w[1] + w[2]) < 1e-12);
  CHECK(std::abs(w[0] * 1.0 + w[1] * 1.1 + w[2] * 1.2 - 1.0) < 1e-12);
}

TEST_CASE("cylindrical operator: exact on c r, second order on c/r") {
  std::vector<double> res;
  for (int N : {20, 40, 80}) {
    const RadialGrid g(N, 1.0, 2.0);
    std::vector<double> lin(N + 1), inv(N + 1);
    for (int j = 0; j <= N; ++j) {
      lin[j] = 3.0 * g.r(j);
      inv[j] = 3.0 / g.r(j);
    }
    for (double x : apply_cylindrical_operator(g, lin)) CHECK(std::abs(x) < 1e-10);
    double m = 0.0;
    for (double x : apply_cylindrical_operator(g, inv)) m = std::max(m, std::abs(x));
    res.push_back(m);
  }
  const double q1 = std::log2(res[0] / res[1]), q2 = std::log2(res[1] / res[2]);
  CHECK(q1 > 1.8);
  CHECK(q2 > q1);
  CHECK(q2 < 2.05);
}

TEST_CASE("MP-AMA: zero state and exact AMP acceleration") {
  const RadialGrid g(20, 1.0, 2.0);
  ModelProblemParams prm;
  AnnularSchemeConfig cfg;
  cfg.dt = 0.05;
  AnnularState z = zero_annular_state(g);
  const AnnularState z1 = step_mp_ama(z, g, cfg, prm, {});
  CHECK(std::abs(z1.body.a) == 0.0);
  CHECK(max_abs_diff(z1.p, z.p) == 0.0);
  CHECK(max_abs_diff(z1.uhat, z.uhat) == 0.0);

  const ScalarForcing gs = ScalarForcing::sine(1.0, 2.0 * std::numbers::pi);
  for (double m_b : {0.0, 1.0, 10.0}) {
    prm.m_b = m_b;
    double ea = 0.0, ep = 0.0;
    auto obs = [&](const AnnularState& s) {
      ea = std::max(ea, std::abs(s.body.a - gs.value(s.t) / (m_b + annular_added_mass(prm))));
      for (int k = 0; k <= g.N; ++k) ep = std::max(ep, std::abs(s.p[k] - mp_ama_exact(prm, gs, 0.0, s.t, g.r(k)).p_hat));
    };
    for (auto v : {SchemeVariant::AMP_NVC, SchemeVariant::AMP_VC}) {
      cfg.variant = v;
      run_annulus(AnnularProblem::MP_AMA, cfg, prm, g, 1.0, mp_ama_initial_state(g, prm, gs, 0.0, cfg.dt), gs.value,
                  obs);
      CHECK(ea < 1e-10);
      CHECK(ep < 1e-10);
    }
  }
}

TEST_CASE("MP-AMA: interface velocity, TP threshold and AMP boundedness") {
  const RadialGrid g(20, 1.0, 2.0);
  ModelProblemParams prm;
  const double Ma = annular_added_mass(prm);
  const ScalarForcing gs = ScalarForcing::sine(1.0, 2.0 * std::numbers::pi);
  AnnularSchemeConfig cfg;
  cfg.dt = 0.05;
  const AnnularState s1 = step_mp_ama(mp_ama_initial_state(g, prm, gs, 0.0, cfg.dt), g, cfg, prm, gs.value);
  CHECK(s1.uhat[0] == s1.body.v);
  CHECK(s1.uhat[g.N] == 0.0);

  cfg.variant = SchemeVariant::TP;
  CHECK_THROWS_AS(step_mp_ama(s1, g, cfg, prm, gs.value), NumericalError);
  auto tp_max = [&](double ratio) {
    ModelProblemParams q = prm;
    q.m_b = ratio * Ma;
    double m = 0.0;
    for (const auto& r : run_annulus(AnnularProblem::MP_AMA, cfg, q, g, 5.0,
                                     mp_ama_initial_state(g, q, gs, 0.0, cfg.dt), gs.value))
      m = std::max(m, std::abs(r.body.a));
    return m;
  };
  CHECK(tp_max(0.8) > 1e10);
  CHECK(tp_max(1.2) < 1.0);

  // Bound in terms of the forcing, independent of m_b >= 0, over 10^3 steps.
  cfg.variant = SchemeVariant::AMP_VC;
  for (double m_b : {0.0, 1.0, 10.0}) {
    ModelProblemParams q = prm;
    q.m_b = m_b;
    double um = 0.0, am = 0.0;
    for (const auto& r : run_annulus(AnnularProblem::MP_AMA, cfg, q, g, 1000 * cfg.dt,
                                     mp_ama_initial_state(g, q, gs, 0.0, cfg.dt), gs.value)) {
      um = std::max(um, std::abs(r.body.v));
      am = std::max(am, std::abs(r.body.a));
    }
    CHECK(am <= 1.0 / Ma * (1.0 + 1e-9));
    CHECK(um <= 1.05 * 2.0 / (2.0 * std::numbers::pi) / Ma);
  }
}

TEST_CASE("MP-ADA: zero state, interface matching and singular update") {
  const RadialGrid g(20, 1.0, 2.0);
  ModelProblemParams prm = ModelProblemParams::disk(1.0);
  AnnularSchemeConfig cfg;
  cfg.dt = 0.05;
  const AnnularState z1 = step_mp_ada(zero_annular_state(g), g, cfg, prm, {});
  CHECK(z1.body.a == 0.0);
  CHECK(max_abs_diff(z1.vhat, zero_annular_state(g).vhat) == 0.0);

  const RotatingDiskSolution sol = rotating_disk_exact(rotating_disk_eigenvalue(prm), prm);
  const AnnularState s1 = step_mp_ada(rotating_disk_initial_state(g, sol, cfg.dt), g, cfg, prm, {});
  CHECK(s1.vhat[0] == g.r1 * s1.body.v);
  CHECK(s1.vhat[g.N] == 0.0);

  prm = ModelProblemParams::disk(0.0);
  cfg.variant = SchemeVariant::TP;
  CHECK_THROWS_AS(step_mp_ada(zero_annular_state(g), g, cfg, prm, {}), NumericalError);
}

TEST_CASE("rotating disk: second-order convergence of omega_b") {
  for (double rho_b : {0.0, 1.0}) {
    std::vector<double> h, e;
    for (int j = 1; j <= 4; ++j) {
      h.push_back(1.0 / (10 * j));
      e.push_back(rotating_error(rho_b, j));
    }
    CHECK(std::abs(fit_convergence_rate(h, e) - 2.0) < 0.2);
  }
  // Heavy disk: the one-sided torque leaves an h^3 term on the coarsest grids.
  std::vector<double> h, e;
  for (int j : {4, 8, 16}) {
    h.push_back(1.0 / (10 * j));
    e.push_back(rotating_error(10.0, j));
  }
  CHECK(fit_convergence_rate(h, e) > 1.9);
  CHECK(e.back() < 2e-5);
}

TEST_CASE("translating disk: zero state, interface matching, convergence") {
  const RadialGrid g(20, 1.0, 2.0);
  const ModelProblemParams prm = ModelProblemParams::disk(1.0);
  AnnularSchemeConfig cfg;
  cfg.dt = 0.05;
  const AnnularState z1 = step_translating_disk_radial(zero_annular_state(g), g, cfg, prm);
  CHECK(z1.body.a == 0.0);
  CHECK(max_abs_diff(z1.p, zero_annular_state(g).p) == 0.0);

  const TranslatingDiskSolution sol = translating_disk_exact(translating_disk_eigenvalue(prm), prm);
  const AnnularState s1 = step_translating_disk_radial(translating_disk_initial_state(g, sol, cfg.dt), g, cfg, prm);
  CHECK(s1.uhat[0] == s1.body.v);
  CHECK(s1.vhat[0] == s1.body.v);
  CHECK(s1.uhat[g.N] == 0.0);

  for (double rho_b : {0.0, 1.0, 10.0}) {
    std::vector<double> h, e;
    for (int j = 1; j <= 4; ++j) {
      h.push_back(1.0 / (10 * j));
      e.push_back(translating_error(rho_b, j));
    }
    CHECK(std::abs(fit_convergence_rate(h, e) - 2.0) < 0.3);
  }
}

TEST_CASE("translating disk: massless body stays bounded") {
  const ModelProblemParams prm = ModelProblemParams::disk(0.0);
  const TranslatingDiskSolution sol = translating_disk_exact(translating_disk_eigenvalue(prm), prm);
  const RadialGrid g(40, prm.r1, prm.r2);
  AnnularSchemeConfig cfg;
  cfg.dt = 0.025;
  for (const auto& r :
       run_annulus(AnnularProblem::TRANSLATING_DISK, cfg, prm, g, 1.0, translating_disk_initial_state(g, sol, cfg.dt))) {
    CHECK(std::isfinite(r.body.v));
    CHECK(std::abs(r.body.v) <= prm.alpha_b * 1.01);
  }
}

TEST_CASE("rotating probe signatures by added-damping parameter") {
  // beta_d = 0.1: monotone growth.
  const auto small = rotation_probe(SchemeVariant::AMP_VC, 0.1, 5.0);
  CHECK(std::abs(small.back()) > 1e3);
  CHECK(sign_changes(small, 20) == 0);
  // NVC at beta_d = 1: sign-alternating growth.
  const auto alt = rotation_probe(SchemeVariant::AMP_NVC, 1.0);
  CHECK(std::abs(alt.back()) > 1e3);
  CHECK(sign_changes(alt, 40) >= 35);
  // beta_d = 20: slow oscillatory growth.
  const auto slow = rotation_probe(SchemeVariant::AMP_VC, 20.0);
  CHECK(std::abs(slow.back()) > 1e3);
  const int sc = sign_changes(slow, 40);
  CHECK(sc >= 2);
  CHECK(sc <= 12);
  // VC at beta_d = 1 decays.
  const auto vc = rotation_probe(SchemeVariant::AMP_VC, 1.0);
  CHECK(std::abs(vc.back()) < 1e-6);
}

TEST_CASE("run_annulus edge cases") {
  const RadialGrid g(10, 1.0, 2.0);
  ModelProblemParams prm;
  AnnularSchemeConfig cfg;
  AnnularState s = zero_annular_state(g);
  s.body.v = 0.3;
  const auto rec = run_annulus(AnnularProblem::MP_AMA, cfg, prm, g, 0.0, s);
  REQUIRE(rec.size() == 1);
  CHECK(rec[0].body.v == 0.3);
  CHECK_THROWS_AS(run_annulus(AnnularProblem::MP_AMA, cfg, prm, g, -1.0, s), std::invalid_argument);
  AnnularState bad = s;
  bad.vhat.pop_back();
  CHECK_THROWS_AS(step_mp_ada(bad, g, cfg, prm, {}), std::invalid_argument);
}
