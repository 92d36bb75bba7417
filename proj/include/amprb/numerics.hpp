#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace amprb {

using Complex = std::complex<double>;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- Bessel

enum class BesselKind { J, Y, I, K };

// J, Y: real positive argument (imaginary part must be zero).
// I, K: Re(z) >= 0, z != 0 for K.
Complex bessel(BesselKind kind, int order, Complex z);

double besselJ0(double x);
double besselJ1(double x);
double besselY0(double x);
double besselY1(double x);

// Modified Bessel functions of complex argument, order 0 and 1, and their
// exponentially scaled forms  e^{-z} I_n(z),  e^{z} K_n(z).
struct ModifiedBesselPair {
  Complex i0, i1, k0, k1;
};
ModifiedBesselPair modifiedBesselScaled(Complex z);
ModifiedBesselPair modifiedBessel(Complex z);

// ----------------------------------------------------------- linear solve

// Square band matrix with kl sub- and ku super-diagonals.  Storage leaves
// room for fill-in from partial pivoting.
struct BandedSystem {
  int n = 0, kl = 0, ku = 0;
  std::vector<double> band;
  std::vector<double> rhs;

  BandedSystem() = default;
  BandedSystem(int n, int kl, int ku);

  int width() const { return 2 * kl + ku + 1; }
  bool inBand(int i, int j) const { return j >= i - kl && j <= i + ku; }
  double& at(int i, int j);
  double get(int i, int j) const;
  std::vector<double> multiply(const std::vector<double>& x) const;
};

std::vector<double> solve_banded(BandedSystem system);

// ----------------------------------------------------------- root finding

double find_root_bracketed(const std::function<double(double)>& f, double a,
                           double b, double tol = 1e-14);

// Coefficients ordered from highest degree to constant term.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);
Complex polyval(const std::vector<Complex>& coeffs, Complex x);
std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots);

struct ClosedContour {
  enum class Shape { Circle, Annulus } shape = Shape::Circle;
  Complex center{0.0, 0.0};
  double radius = 1.0;       // circle radius, or outer radius of the annulus
  double innerRadius = 0.0;  // annulus only
  int sampleBudget = 256;
  double refinementTolerance = 1e-10;  // smallest parameter step allowed
  double zeroThreshold = 1e-300;

  static ClosedContour circle(Complex c, double r, int budget = 256);
  static ClosedContour annulus(double inner, double outer, int budget = 256);
};

struct ZeroOnContour : NumericalError {
  using NumericalError::NumericalError;
};

int count_zeros_argument_principle(const std::function<Complex(Complex)>& f,
                                   const ClosedContour& contour);

// Winding number of f along a closed path z(s), s in [0, 1].
int winding_number_path(const std::function<Complex(Complex)>& f, const std::function<Complex(double)>& path,
                        int budget, double minStep, double zeroThreshold);

// Winding number of f around the circle |A - c| = r (positive orientation).
int winding_number_circle(const std::function<Complex(Complex)>& f, Complex c,
                          double r, int budget, double minStep,
                          double zeroThreshold);

// Newton iteration with a numerical derivative; returns the polished point.
Complex newton_polish(const std::function<Complex(Complex)>& f, Complex z0,
                      int maxIter = 50, double tol = 1e-14);

// Least-squares slope of log(err) against log(h).
double fit_convergence_rate(const std::vector<double>& h,
                            const std::vector<double>& err);

}  // namespace amprb
