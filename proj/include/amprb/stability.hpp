#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "amprb/annulus.hpp"
#include "amprb/numerics.hpp"
#include "amprb/rect.hpp"

namespace amprb {

enum class InstabilityRegion { None, I, II, III, IV };
enum class RootMethod { Polynomial, ArgumentPrinciple };

std::string to_string(InstabilityRegion r);
std::string to_string(RootMethod m);

struct RectStabilityParams {
  double mbar = 0.0;  // m_b delta^2 / (rho L dy)
  double delta = 0.5;
  double beta_d = 1.0;
  void validate() const;
};

struct AnnularStabilityParams {
  double Ibar = 0.0;  // I_b delta~^2 / (rho (2 pi r1) dr r1^2)
  double delta_tilde = 0.5;
  double beta_d = 1.0;
  void validate() const;
};

// Radii and spacing; zeta_1 = delta~ / dr follows from the dimensionless parameters.
struct AnnularGeometry {
  double r1 = 1.0, r2 = 2.0, dr = 0.025;
  void validate() const;
};

AnnularGeometry annular_geometry(const RadialGrid& grid);

RectStabilityParams rect_stability_params(const ModelProblemParams& params, const RectGrid& grid,
                                          const RectSchemeConfig& config);
AnnularStabilityParams annular_stability_params(const ModelProblemParams& params, const RadialGrid& grid,
                                                const AnnularSchemeConfig& config);

struct TransferCoefficients {
  Complex xi;
  double eta = 0.0;
  Complex C_xi;
  double C_eta = 0.0;
  Complex C1_tilde, C2_tilde;
  double zeta1 = 0.0;  // annular only
  Complex zeta2;
  Complex gamma_b, gamma_v, gamma_0;
};

// C_eta = (3 - 4 eta + eta^2) / 2.
double dtn_coefficient_eta(double delta);

TransferCoefficients transfer_coeffs_rect(Complex A, double delta);
TransferCoefficients transfer_coeffs_rect(Complex A, const RectStabilityParams& params);

Complex eval_Nb(Complex A, const RectStabilityParams& params);
Complex eval_Nv(Complex A, const RectStabilityParams& params);
// TP uses N_b with beta_d = 0.
Complex eval_constraint_rect(Complex A, const RectStabilityParams& params, SchemeVariant variant);

// Degree-eight polynomial (highest power first) whose roots contain those of the constraint.
std::vector<Complex> rect_constraint_polynomial(const RectStabilityParams& params, SchemeVariant variant);

// Mode shape for the annular velocity problems, equal to 1 at r1 and 0 at r2.
Complex annular_mode_shape(Complex zeta, double r, const AnnularGeometry& geom);
Complex annular_dtn_coefficient(Complex zeta, const AnnularGeometry& geom);

TransferCoefficients transfer_coeffs_annular(Complex A, const AnnularStabilityParams& params,
                                             const AnnularGeometry& geom);
Complex eval_Nb_annular(Complex A, const AnnularStabilityParams& params, const AnnularGeometry& geom);
Complex eval_Nv_annular(Complex A, const AnnularStabilityParams& params, const AnnularGeometry& geom);
Complex eval_constraint_annular(Complex A, const AnnularStabilityParams& params, const AnnularGeometry& geom,
                                SchemeVariant variant);

struct StabilityOptions {
  double eps = 1e-3;  // counting region is 1 + eps <= |A| <= R
  double R = std::numeric_limits<double>::infinity();
  int budget = 256;
  double residual_tol = 1e-8;
  int max_depth = 30;
};

struct UnstableRoot {
  Complex A;
  double residual = 0.0;
  InstabilityRegion region = InstabilityRegion::None;
};

struct RootReport {
  std::vector<UnstableRoot> roots;
  RootMethod method = RootMethod::Polynomial;

  bool stable() const { return roots.empty(); }
  std::string verdict() const { return stable() ? "stable" : "unstable"; }
  double max_modulus() const;
};

struct MethodDisagreement : NumericalError {
  using NumericalError::NumericalError;
};

// Relative residual |N(A)| / (sum of the magnitudes of its terms).
double constraint_residual_rect(Complex A, const RectStabilityParams& params, SchemeVariant variant);

RootReport unstable_roots_rect(const RectStabilityParams& params, SchemeVariant variant, RootMethod method,
                               const StabilityOptions& opts = {});
// Runs both methods and throws MethodDisagreement when the counts differ.
RootReport unstable_roots_rect(const RectStabilityParams& params, SchemeVariant variant,
                               const StabilityOptions& opts = {});

RootReport unstable_roots_annular(const AnnularStabilityParams& params, const AnnularGeometry& geom,
                                  SchemeVariant variant, const StabilityOptions& opts = {});

InstabilityRegion classify_instability(Complex root, SchemeVariant variant, const RectStabilityParams& params);
InstabilityRegion classify_instability_annular(Complex root, SchemeVariant variant,
                                               const AnnularStabilityParams& params, const AnnularGeometry& geom);

// Roots of M_r^2 A^2 - 2A + 1 = 0.
std::array<Complex, 2> tp_mp_am_amplification(double M_r);

enum class FixedParameter { Delta, Mass };

struct BoundaryTraceOptions {
  double x_min = 0.0, x_max = 5.0;  // range of the free parameter (mass-like or delta)
  int nx = 101;                     // sampling of the free parameter for explicit branches
  double beta_min = 0.0, beta_max = 6.0;
  int ntheta = 2000;   // unit-circle scan (rectangular)
  int coarse_nx = 21;  // coarse count sweep (annular)
  int coarse_nbeta = 25;
  double step = 0.01;  // continuation step in window-scaled units (annular)
  int max_points = 4000;
  int threads = 0;  // 0 selects the hardware concurrency
  StabilityOptions roots;
};

struct BoundaryCurve {
  std::vector<std::array<double, 2>> points;  // (free parameter, beta_d)
  std::string kind;
  bool truncated = false;
};

// Free plane is (mbar, beta_d) for fixed delta and (delta, beta_d) for fixed mbar.
// For TP the free plane is (delta, mbar) and `fixed` and `value` are ignored.
std::vector<BoundaryCurve> trace_boundary_rect(FixedParameter fixed, double value, SchemeVariant variant,
                                               const BoundaryTraceOptions& opts = {});

// Values of mbar on the TP stability boundary at this delta, ascending.
std::vector<double> tp_boundary_mbar(double delta, int ntheta = 4000);
// Smallest mbar above which TP is stable.
double tp_threshold_mbar(double delta);

// Free plane is (Ibar, beta_d) for fixed delta~ and (delta~, beta_d) for fixed Ibar.
std::vector<BoundaryCurve> trace_boundary_annular(FixedParameter fixed, double value, SchemeVariant variant,
                                                  const AnnularGeometry& geom, const BoundaryTraceOptions& opts = {});

}  // namespace amprb
