#include "amprb/exact.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace amprb {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Brackets of sign changes of f on (lo, hi] sampled uniformly.
std::vector<std::pair<double, double>> scanSignChanges(const std::function<double(double)>& f, double lo,
                                                       double hi, int samples) {
  std::vector<std::pair<double, double>> out;
  double xPrev = lo, fPrev = f(lo);
  for (int k = 1; k <= samples; ++k) {
    const double x = lo + (hi - lo) * k / samples;
    const double fx = f(x);
    if (fPrev == 0.0) {
      out.emplace_back(xPrev, xPrev);
    } else if (std::isfinite(fx) && std::isfinite(fPrev) && (fx > 0.0) != (fPrev > 0.0) && fx != 0.0) {
      out.emplace_back(xPrev, x);
    }
    xPrev = x;
    fPrev = fx;
  }
  return out;
}

// index-th smallest positive root of f, growing the window until found.
double nthRoot(const std::function<double(double)>& f, double window, int index, int samples,
               const char* what) {
  double lo = window * 1e-4;
  for (int grow = 0; grow < 8; ++grow) {
    const auto br = scanSignChanges(f, lo, window, samples);
    if (static_cast<int>(br.size()) > index) {
      const auto [a, b] = br[index];
      if (a == b) return a;
      return find_root_bracketed(f, a, b, 1e-15);
    }
    window *= 2.0;
    samples *= 2;
  }
  throw NumericalError(std::string(what) + ": no root in scan window");
}

double j1p(double x) { return besselJ0(x) - besselJ1(x) / x; }
double y1p(double x) { return besselY0(x) - besselY1(x) / x; }
// Second derivative from Bessel's equation of order one.
double j1pp(double x) { return -j1p(x) / x - (1.0 - 1.0 / (x * x)) * besselJ1(x); }
double y1pp(double x) { return -y1p(x) / x - (1.0 - 1.0 / (x * x)) * besselY1(x); }

struct DiskCoefficients {
  double b11, b12, b21, b22, c11, c12, c21, c22, det;
};

DiskCoefficients diskCoefficients(double lam, const ModelProblemParams& p) {
  const double r1 = p.r1, r2 = p.r2;
  const double x2 = lam * r2, x1 = lam * r1;
  DiskCoefficients c{};
  c.b11 = kPi * r2 / (2.0 * r1) * (2.0 * besselY1(x2) - x2 * besselY0(x2));
  c.b12 = kPi / 2.0 * x1 * besselY0(x2);
  c.b21 = kPi * r2 / (2.0 * r1) * (2.0 * besselJ1(x2) - x2 * besselJ0(x2));
  c.b22 = kPi / 2.0 * x1 * besselJ0(x2);
  const double L2 = x1 * x1;
  const double J1 = besselJ1(x1), Y1 = besselY1(x1), dJ = j1p(x1), dY = y1p(x1);
  c.c11 = (c.b11 * J1 - c.b21 * Y1 + 1.0) / L2;
  c.c12 = (c.b12 * J1 - c.b22 * Y1 - 1.0) / L2;
  c.c21 = (c.b11 * x1 * dJ - c.b21 * x1 * dY + 1.0) / L2;
  c.c22 = (c.b12 * x1 * dJ - c.b22 * x1 * dY + 1.0) / L2;
  c.det = c.c11 * c.c22 - c.c12 * c.c21;
  return c;
}

struct DiskEquationTerms {
  double t0, t1, t2, det;  // equation = t0 + (t1 + t2)/det
};

DiskEquationTerms diskEquationTerms(double lam, const ModelProblemParams& p) {
  const DiskCoefficients c = diskCoefficients(lam, p);
  const double x1 = lam * p.r1;
  const double ddJ = j1pp(x1), ddY = y1pp(x1);
  DiskEquationTerms t{};
  t.t0 = p.m_b / (p.rho * kPi) * lam * lam;
  t.t1 = (-1.0 + c.b11 * ddJ - c.b21 * ddY) * (c.c22 - c.c12);
  t.t2 = (-1.0 + c.b12 * ddJ - c.b22 * ddY - 2.0 / (x1 * x1)) * (c.c11 - c.c21);
  t.det = c.det;
  return t;
}

}  // namespace

// ------------------------------------------------------------------ params

void ModelProblemParams::validate() const {
  require(rho > 0.0, "rho must be positive");
  require(mu >= 0.0, "mu must be non-negative");
  require(L > 0.0, "L must be positive");
  require(H > 0.0, "H must be positive");
  require(m_b >= 0.0, "m_b must be non-negative");
  require(r1 > 0.0 && r1 < r2, "radii must satisfy 0 < r1 < r2");
  require(I_b >= 0.0, "I_b must be non-negative");
}

ModelProblemParams ModelProblemParams::disk(double rho_b, double r1, double r2, double rho, double mu) {
  ModelProblemParams p;
  p.rho = rho;
  p.mu = mu;
  p.r1 = r1;
  p.r2 = r2;
  p.rho_b = rho_b;
  p.m_b = rho_b * kPi * r1 * r1;
  p.I_b = rho_b * kPi * std::pow(r1, 4) / 2.0;
  return p;
}

ScalarForcing ScalarForcing::zero() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }};
}

ScalarForcing ScalarForcing::sine(double amplitude, double omega) {
  return {[=](double t) { return amplitude * std::sin(omega * t); },
          [=](double t) { return amplitude * (1.0 - std::cos(omega * t)) / omega; }};
}

// ------------------------------------------------------------------ piston

double PistonSolution::pressure(double y) const {
  return p_H + (1.0 - y / H) * (g_v / L - p_H) / (m_b / M_a + 1.0);
}

PistonSolution piston_exact(const ModelProblemParams& params, const PistonMotion& motion, double t,
                            const std::function<double(double)>& g_v) {
  params.validate();
  PistonSolution s;
  s.M_a = params.rho * params.L * params.H;
  if (params.m_b + s.M_a <= 0.0) throw DomainError("piston_exact: m_b + M_a must be positive");
  s.t = t;
  s.H = params.H;
  s.L = params.L;
  s.m_b = params.m_b;
  const double w = motion.omega;
  s.y_b = motion.y0 + motion.v0 * t + motion.amplitude * std::sin(w * t);
  s.v_b = motion.v0 + motion.amplitude * w * std::cos(w * t);
  s.a_v = -motion.amplitude * w * w * std::sin(w * t);
  s.g_v = g_v ? g_v(t) : 0.0;
  s.p_H = (s.g_v - (params.m_b + s.M_a) * s.a_v) / params.L;
  return s;
}

// ----------------------------------------------------------- sliding block

double sliding_block_eigenvalue(double M_r, int index) {
  if (!(M_r >= 0.0)) throw std::invalid_argument("sliding_block_eigenvalue: M_r must be non-negative");
  if (index < 0) throw std::invalid_argument("sliding_block_eigenvalue: negative index");
  const double base = index * kPi;
  if (M_r == 0.0) return base + kPi / 2.0;
  // M_r x sin x - cos x changes sign once on each (k pi, k pi + pi/2].
  auto f = [M_r](double x) { return M_r * x * std::sin(x) - std::cos(x); };
  if (index == 0) return find_root_bracketed(f, 0.0, kPi / 2.0, 1e-16);
  return find_root_bracketed(f, base, base + kPi / 2.0, 1e-16);
}

double SlidingBlockSolution::u(double y, double t) const {
  return -amplitude * std::sin(lambda * (y - H)) / std::sin(lambda * H) * std::exp(-nu * lambda * lambda * t);
}

double SlidingBlockSolution::uy(double y, double t) const {
  return -amplitude * lambda * std::cos(lambda * (y - H)) / std::sin(lambda * H) *
         std::exp(-nu * lambda * lambda * t);
}

SlidingBlockSolution sliding_block_solution(const ModelProblemParams& params, int index) {
  params.validate();
  SlidingBlockSolution s;
  s.M_r = params.m_b / (params.rho * params.L * params.H);
  s.lambda = sliding_block_eigenvalue(s.M_r, index) / params.H;
  s.H = params.H;
  s.nu = params.nu();
  s.amplitude = params.alpha_b;
  return s;
}

double sliding_block_exact(double lambda, const ModelProblemParams& params, double y, double t) {
  const double sH = std::sin(lambda * params.H);
  if (std::abs(sH) < 1e-14) throw DomainError("sliding_block_exact: sin(lambda H) = 0");
  return -std::sin(lambda * (y - params.H)) / sH * std::exp(-params.nu() * lambda * lambda * t);
}

// ------------------------------------------------------------------ MP-AMA

double annular_added_mass(const ModelProblemParams& p) {
  const double q = (p.r1 / p.r2) * (p.r1 / p.r2);
  return p.rho * kPi * p.r1 * p.r1 * (1.0 + q) / (1.0 - q);
}

AnnularAddedMassSolution mp_ama_exact(const ModelProblemParams& p, const ScalarForcing& g_u, double u_b0, double t,
                                      double r) {
  p.validate();
  AnnularAddedMassSolution s;
  s.Ma_annular = annular_added_mass(p);
  const double mt = p.m_b + s.Ma_annular;
  if (mt <= 0.0) throw DomainError("mp_ama_exact: m_b + added mass must be positive");
  s.g_u = g_u.value(t);
  s.a_u = s.g_u / mt;
  s.u_b = g_u.integral(t) / mt + u_b0;
  const double r1 = p.r1, r2 = p.r2;
  s.p_hat = p.rho * r1 * s.a_u / (r2 / r1 - r1 / r2) * (r / r2 + r2 / r);
  const double g = (r1 / r) * (r1 / r) / (r2 * r2 - r1 * r1);
  s.u_hat = (r2 * r2 - r * r) * g * s.u_b;
  s.v_hat = -(r2 * r2 + r * r) * g * s.u_b;
  return s;
}

// -------------------------------------------------------- translating disk

double translating_disk_equation(double lambda, const ModelProblemParams& params) {
  const DiskEquationTerms t = diskEquationTerms(lambda, params);
  return t.t0 + (t.t1 + t.t2) / t.det;
}

double translating_disk_equation_cleared(double lambda, const ModelProblemParams& params) {
  const DiskEquationTerms t = diskEquationTerms(lambda, params);
  return t.t0 * t.det + t.t1 + t.t2;
}

double translating_disk_eigenvalue(const ModelProblemParams& params, int index) {
  params.validate();
  auto f = [&params](double lam) { return translating_disk_equation_cleared(lam, params); };
  const double window = 30.0 / (params.r2 - params.r1);
  const double lam = nthRoot(f, window, index, 10000, "translating_disk_eigenvalue");
  const DiskEquationTerms t = diskEquationTerms(lam, params);
  const double scale = std::abs(t.t0) + (std::abs(t.t1) + std::abs(t.t2)) / std::abs(t.det);
  const double res = std::abs(t.t0 + (t.t1 + t.t2) / t.det) / scale;
  if (!(res < 1e-10)) throw NumericalError("translating_disk_eigenvalue: residual check failed");
  return lam;
}

double TranslatingDiskSolution::decay(double t) const {
  return std::exp(-lambda * lambda * params.nu() * t);
}

double TranslatingDiskSolution::Q(double r) const {
  const double x = lambda * r;
  return A_1 * besselJ1(x) + B_1 * besselY1(x) + (A_p * r - B_p / r) / (lambda * lambda);
}

double TranslatingDiskSolution::Qp(double r) const {
  const double x = lambda * r;
  return lambda * (A_1 * j1p(x) + B_1 * y1p(x)) + (A_p + B_p / (r * r)) / (lambda * lambda);
}

double TranslatingDiskSolution::Qpp(double r) const {
  const double x = lambda * r;
  return lambda * lambda * (A_1 * j1pp(x) + B_1 * y1pp(x)) - 2.0 * B_p / (r * r * r * lambda * lambda);
}

double TranslatingDiskSolution::uhat(double r, double t) const { return Q(r) / r * decay(t); }
double TranslatingDiskSolution::vhat(double r, double t) const { return Qp(r) * decay(t); }
double TranslatingDiskSolution::phat(double r, double t) const {
  return params.mu * (A_p * r + B_p / r) * decay(t);
}
double TranslatingDiskSolution::ub(double t) const { return params.alpha_b * decay(t); }

std::array<double, 2> TranslatingDiskSolution::velocity(double r, double theta, double t) const {
  const double c = std::cos(theta), s = std::sin(theta);
  const double a = Q(r) / r * decay(t), b = Qp(r) * decay(t);
  return {a * c * c + b * s * s, a * s * c - b * s * c};
}

double TranslatingDiskSolution::pressure(double r, double theta, double t) const {
  return phat(r, t) * std::cos(theta) + params.p0;
}

TranslatingDiskSolution translating_disk_exact(double lambda, const ModelProblemParams& params) {
  params.validate();
  if (!(lambda > 0.0)) throw std::invalid_argument("translating_disk_exact: lambda must be positive");
  const DiskCoefficients c = diskCoefficients(lambda, params);
  TranslatingDiskSolution s;
  s.lambda = lambda;
  s.params = params;
  s.b11 = c.b11;
  s.b12 = c.b12;
  s.b21 = c.b21;
  s.b22 = c.b22;
  s.c11 = c.c11;
  s.c12 = c.c12;
  s.c21 = c.c21;
  s.c22 = c.c22;
  const double r1 = params.r1, a = params.alpha_b;
  s.A_p = a / (r1 * r1) * (c.c22 - c.c12) / c.det;
  s.B_p = a * (c.c11 - c.c21) / c.det;
  s.A_1 = (r1 * r1 * c.b11 * s.A_p + c.b12 * s.B_p) / (r1 * lambda * lambda);
  s.B_1 = -(r1 * r1 * c.b21 * s.A_p + c.b22 * s.B_p) / (r1 * lambda * lambda);
  return s;
}

// ----------------------------------------------------------- rotating disk

namespace {

double rotShape(double lam, double r, double r2) {
  return besselJ1(lam * r) * besselY1(lam * r2) - besselJ1(lam * r2) * besselY1(lam * r);
}

double rotShapeR(double lam, double r, double r2) {
  return lam * (j1p(lam * r) * besselY1(lam * r2) - besselJ1(lam * r2) * y1p(lam * r));
}

}  // namespace

double rotating_disk_constraint(double lambda, const ModelProblemParams& p) {
  const double z = rotShape(lambda, p.r1, p.r2), dz = rotShapeR(lambda, p.r1, p.r2);
  const double k = 1.0 / p.r1 - lambda * lambda * p.I_b / (2.0 * kPi * p.rho * std::pow(p.r1, 3));
  return dz - k * z;
}

double rotating_disk_eigenvalue(const ModelProblemParams& params, int index) {
  params.validate();
  auto f = [&params](double lam) { return rotating_disk_constraint(lam, params); };
  const double window = 30.0 / (params.r2 - params.r1);
  const double lam = nthRoot(f, window, index, 10000, "rotating_disk_eigenvalue");
  const double z = rotShape(lam, params.r1, params.r2), dz = rotShapeR(lam, params.r1, params.r2);
  const double k = 1.0 / params.r1 - lam * lam * params.I_b / (2.0 * kPi * params.rho * std::pow(params.r1, 3));
  const double scale = std::abs(dz) + std::abs(k * z);
  if (!(std::abs(dz - k * z) < 1e-10 * scale)) throw NumericalError("rotating_disk_eigenvalue: residual check failed");
  return lam;
}

double RotatingDiskSolution::shape(double r) const {
  return rotShape(lambda, r, params.r2) / rotShape(lambda, params.r1, params.r2);
}

double RotatingDiskSolution::shape_r(double r) const {
  return rotShapeR(lambda, r, params.r2) / rotShape(lambda, params.r1, params.r2);
}

double RotatingDiskSolution::decay(double t) const { return std::exp(-lambda * lambda * params.nu() * t); }

double RotatingDiskSolution::v_theta(double r, double t) const { return params.alpha_b * shape(r) * decay(t); }

double RotatingDiskSolution::omega_b(double t) const { return params.alpha_b * decay(t) / params.r1; }

double RotatingDiskSolution::pressure(double r, double t) const {
  if (r == params.r1) return params.p0;
  auto integrand = [this, t](double s) {
    const double v = v_theta(s, t);
    return v * v / s;
  };
  double err = 0.0;
  const double val =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, params.r1, r, 15, 1e-12, &err);
  return params.rho * val + params.p0;
}

RotatingDiskSolution rotating_disk_exact(double lambda, const ModelProblemParams& params) {
  params.validate();
  if (!(lambda > 0.0)) throw std::invalid_argument("rotating_disk_exact: lambda must be positive");
  RotatingDiskSolution s;
  s.lambda = lambda;
  s.params = params;
  return s;
}

}  // namespace amprb
