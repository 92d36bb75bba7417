#pragma once

#include <functional>
#include <string>
#include <vector>

#include "amprb/exact.hpp"

namespace amprb {

enum class SchemeVariant { TP, AMP_NVC, AMP_VC };
enum class DampingFormula { D1, D2, Dn };

std::string to_string(SchemeVariant v);
SchemeVariant scheme_variant_from_string(const std::string& s);

// Uniform grid y_j = j dy, j = 0..N, interface at y = 0.
struct RectGrid {
  int N = 10;
  double H = 1.0;
  double dy = 0.1;

  RectGrid() = default;
  RectGrid(int N, double H);
  double y(int j) const { return j * dy; }
};

struct RectSchemeConfig {
  SchemeVariant variant = SchemeVariant::AMP_VC;
  double beta_d = 1.0;
  double dt = 0.1;
  double alpha = 0.5;      // implicit weight of the diffusion solve
  double alpha_bar = 0.5;  // weight of the body velocity/position update
  DampingFormula damping_formula = DampingFormula::Dn;

  // beta_d as used by the scheme (zero for TP).
  double effective_beta() const { return variant == SchemeVariant::TP ? 0.0 : beta_d; }
  bool velocity_correction() const { return variant == SchemeVariant::AMP_VC; }
  void validate() const;
};

struct AddedDampingInfo {
  double delta = 0.0;
  double dn = 0.0;
  double eta = 0.0;
  double Du = 0.0;
};

AddedDampingInfo added_damping_coefficient(double mu, double L, double dy, double nu, double dt, double alpha = 0.5,
                                           DampingFormula formula = DampingFormula::Dn);

// eta = 1 + d^2/2 - d sqrt(1 + d^2/4), computed without cancellation.
double added_damping_eta(double delta);

std::vector<double> variational_w(const RectGrid& grid, double delta);

struct BodyState {
  double x = 0.0;  // position
  double v = 0.0;  // velocity
  double a = 0.0;  // acceleration
};

// Fluid velocity is the normal component for MP-AM and the tangential one for MP-AD.
struct RectCoupledState {
  double t = 0.0;
  std::vector<double> vel, vel_prev;
  std::vector<double> p;
  BodyState body, body_prev;
};

struct RectForcing {
  std::function<double(double)> body;      // g(t)
  std::function<double(double)> boundary;  // p_H(t) for MP-AM, u_H(t) for MP-AD

  double g(double t) const { return body ? body(t) : 0.0; }
  double far(double t) const { return boundary ? boundary(t) : 0.0; }
};

RectCoupledState step_mp_am(const RectCoupledState& state, const RectGrid& grid, const RectSchemeConfig& config,
                            const ModelProblemParams& params, const RectForcing& forcing);

RectCoupledState step_mp_ad(const RectCoupledState& state, const RectGrid& grid, const RectSchemeConfig& config,
                            const ModelProblemParams& params, const RectForcing& forcing);

enum class RectProblem { MP_AM, MP_AD };

struct RectRecord {
  double t = 0.0;
  BodyState body;
  double fluid_max = 0.0;
  double pressure_max = 0.0;
};

using RectObserver = std::function<void(const RectCoupledState&)>;

std::vector<RectRecord> run_rect(RectProblem problem, const RectSchemeConfig& config, const ModelProblemParams& params,
                                 const RectGrid& grid, double T, const RectCoupledState& initial,
                                 const RectForcing& forcing, const RectObserver& observer = {});

// Initial data sampled from the exact solutions at t = 0, with the body level at -dt.
RectCoupledState piston_initial_state(const RectGrid& grid, const ModelProblemParams& params,
                                      const PistonMotion& motion, double dt);
RectForcing piston_forcing(const ModelProblemParams& params, const PistonMotion& motion);

RectCoupledState sliding_block_initial_state(const RectGrid& grid, const ModelProblemParams& params,
                                             const SlidingBlockSolution& sol, double dt);

}  // namespace amprb
