#pragma once

#include <array>
#include <functional>

#include "amprb/numerics.hpp"

namespace amprb {

struct ModelProblemParams {
  double rho = 1.0;
  double mu = 0.1;
  double L = 1.0;
  double H = 1.0;
  double m_b = 0.0;
  double r1 = 1.0;
  double r2 = 2.0;
  double rho_b = 0.0;
  double I_b = 0.0;
  double alpha_b = 1.0;
  double p0 = 0.0;

  double nu() const { return mu / rho; }
  void validate() const;

  // Disk of uniform density rho_b in the annulus r1 < r < r2.
  static ModelProblemParams disk(double rho_b, double r1 = 1.0, double r2 = 2.0, double rho = 1.0,
                                 double mu = 0.1);
};

// Scalar forcing with a known antiderivative (integral from 0 to t).
struct ScalarForcing {
  std::function<double(double)> value;
  std::function<double(double)> integral;

  static ScalarForcing zero();
  static ScalarForcing sine(double amplitude, double omega);
};

// ------------------------------------------------------------------ piston

// Prescribed body position y_b(t) = y0 + v0 t + amplitude sin(omega t).
struct PistonMotion {
  double y0 = 0.0;
  double v0 = 0.0;
  double amplitude = 0.25;
  double omega = 2.0 * 3.14159265358979323846;
};

struct PistonSolution {
  double M_a = 0.0;
  double t = 0.0;
  double y_b = 0.0, v_b = 0.0, a_v = 0.0;
  double g_v = 0.0, p_H = 0.0;
  double H = 1.0, L = 1.0, m_b = 0.0;

  double pressure(double y) const;
  double velocity() const { return v_b; }
};

PistonSolution piston_exact(const ModelProblemParams& params, const PistonMotion& motion, double t,
                            const std::function<double(double)>& g_v = {});

// ----------------------------------------------------------- sliding block

double sliding_block_eigenvalue(double M_r, int index = 0);

struct SlidingBlockSolution {
  double lambda = 0.0;  // 1/length
  double M_r = 0.0;
  double H = 1.0, nu = 0.1, amplitude = 1.0;

  double u(double y, double t) const;
  double uy(double y, double t) const;
  double ub(double t) const { return u(0.0, t); }
};

SlidingBlockSolution sliding_block_solution(const ModelProblemParams& params, int index = 0);
double sliding_block_exact(double lambda, const ModelProblemParams& params, double y, double t);

// ------------------------------------------------------------------ MP-AMA

double annular_added_mass(const ModelProblemParams& params);

struct AnnularAddedMassSolution {
  double Ma_annular = 0.0;
  double u_b = 0.0, a_u = 0.0, g_u = 0.0;
  double p_hat = 0.0, u_hat = 0.0, v_hat = 0.0;
};

AnnularAddedMassSolution mp_ama_exact(const ModelProblemParams& params, const ScalarForcing& g_u, double u_b0,
                                      double t, double r);

// -------------------------------------------------------- translating disk

struct TranslatingDiskSolution {
  double lambda = 0.0;
  double A_p = 0.0, B_p = 0.0, A_1 = 0.0, B_1 = 0.0;
  double b11 = 0.0, b12 = 0.0, b21 = 0.0, b22 = 0.0;
  double c11 = 0.0, c12 = 0.0, c21 = 0.0, c22 = 0.0;
  ModelProblemParams params;

  double decay(double t) const;
  double Q(double r) const;
  double Qp(double r) const;
  double Qpp(double r) const;
  double uhat(double r, double t) const;
  double vhat(double r, double t) const;
  double phat(double r, double t) const;
  double ub(double t) const;
  std::array<double, 2> velocity(double r, double theta, double t) const;
  double pressure(double r, double theta, double t) const;
};

// Left-hand side of the transcendental eigenvalue equation.
double translating_disk_equation(double lambda, const ModelProblemParams& params);
// Same equation multiplied through by its (pole-producing) denominator.
double translating_disk_equation_cleared(double lambda, const ModelProblemParams& params);
double translating_disk_eigenvalue(const ModelProblemParams& params, int index = 0);
TranslatingDiskSolution translating_disk_exact(double lambda, const ModelProblemParams& params);

// ----------------------------------------------------------- rotating disk

double rotating_disk_constraint(double lambda, const ModelProblemParams& params);
double rotating_disk_eigenvalue(const ModelProblemParams& params, int index = 0);

struct RotatingDiskSolution {
  double lambda = 0.0;
  ModelProblemParams params;

  double shape(double r) const;  // J1/Y1 combination normalised to 1 at r1
  double shape_r(double r) const;
  double decay(double t) const;
  double v_theta(double r, double t) const;
  double omega_b(double t) const;
  double pressure(double r, double t) const;
};

RotatingDiskSolution rotating_disk_exact(double lambda, const ModelProblemParams& params);

}  // namespace amprb
