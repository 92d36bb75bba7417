#pragma once

#include <array>
#include <functional>
#include <vector>

#include "amprb/exact.hpp"
#include "amprb/rect.hpp"

namespace amprb {

// r_j = r1 + j dr, j = 0..N, interface at r1 and a fixed wall at r2.
struct RadialGrid {
  int N = 10;
  double r1 = 1.0, r2 = 2.0, dr = 0.1;

  RadialGrid() = default;
  RadialGrid(int N, double r1, double r2);
  double r(int j) const { return r1 + j * dr; }
};

using AnnularSchemeConfig = RectSchemeConfig;

struct AnnularDampingInfo {
  double delta_tilde = 0.0;
  double Domega = 0.0;
  double Dbar_omega = 0.0;
  double Ibar = 0.0;
};

AnnularDampingInfo added_damping_coefficient_annular(double mu, double r1, double dr, double nu, double dt,
                                                     double rho = 1.0, double I_b = 0.0);

// Translational coefficient for the k = 1 mode: mu pi r1 (1 - exp(-delta)) / dr.
double translational_damping_coefficient(double mu, double r1, double dr, double nu, double dt);

// Body fields hold (u_b, a_u) for translation and (omega_b, b_omega) for rotation.
struct AnnularState {
  double t = 0.0;
  std::vector<double> uhat, vhat, uhat_prev, vhat_prev;
  std::vector<double> p, p_prev;
  BodyState body, body_prev;
};

// Three-point weights exact on span{1, r, 1/r}.
std::array<double, 3> span_exact_derivative_weights(const std::array<double, 3>& nodes, double at);
// Weights for r p'' + p' - p/r (the k = 1 pressure operator times r^2), exact on span{1, r, 1/r}.
std::array<double, 3> span_exact_pressure_weights(const std::array<double, 3>& nodes);

// k = 1 pressure solve with Neumann data p_r(r1) = left, p_r(r2) = right.
std::vector<double> solve_radial_pressure_neumann(const RadialGrid& grid, double left, double right);

// (1/r)(r v_r)_r - v/r^2 at interior nodes (end entries are zero).
std::vector<double> apply_cylindrical_operator(const RadialGrid& grid, const std::vector<double>& v);

using TimeFunction = std::function<double(double)>;

AnnularState step_mp_ama(const AnnularState& state, const RadialGrid& grid, const AnnularSchemeConfig& config,
                         const ModelProblemParams& params, const TimeFunction& g_u);

AnnularState step_mp_ada(const AnnularState& state, const RadialGrid& grid, const AnnularSchemeConfig& config,
                         const ModelProblemParams& params, const TimeFunction& g_omega);

AnnularState step_translating_disk_radial(const AnnularState& state, const RadialGrid& grid,
                                          const AnnularSchemeConfig& config, const ModelProblemParams& params);

enum class AnnularProblem { MP_AMA, MP_ADA, TRANSLATING_DISK };

struct AnnularRecord {
  double t = 0.0;
  BodyState body;
  double fluid_max = 0.0;
  double pressure_max = 0.0;
};

using AnnularObserver = std::function<void(const AnnularState&)>;

std::vector<AnnularRecord> run_annulus(AnnularProblem problem, const AnnularSchemeConfig& config,
                                       const ModelProblemParams& params, const RadialGrid& grid, double T,
                                       const AnnularState& initial, const TimeFunction& forcing = {},
                                       const AnnularObserver& observer = {});

AnnularState mp_ama_initial_state(const RadialGrid& grid, const ModelProblemParams& params, const ScalarForcing& g_u,
                                  double u_b0, double dt);
AnnularState rotating_disk_initial_state(const RadialGrid& grid, const RotatingDiskSolution& sol, double dt);
AnnularState translating_disk_initial_state(const RadialGrid& grid, const TranslatingDiskSolution& sol, double dt);

}  // namespace amprb
