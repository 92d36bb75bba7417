#include "amprb/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace amprb {

// ------------------------------------------------------------ banded solve

BandedSystem::BandedSystem(int n_, int kl_, int ku_) : n(n_), kl(kl_), ku(ku_) {
  if (n <= 0 || kl < 0 || ku < 0) throw std::invalid_argument("BandedSystem: bad dimensions");
  band.assign(static_cast<size_t>(n) * width(), 0.0);
  rhs.assign(n, 0.0);
}

double& BandedSystem::at(int i, int j) {
  if (i < 0 || i >= n || !inBand(i, j)) throw std::out_of_range("BandedSystem: entry outside band");
  return band[static_cast<size_t>(i) * width() + (j - i + kl)];
}

double BandedSystem::get(int i, int j) const {
  if (i < 0 || i >= n || j < 0 || j >= n || !inBand(i, j)) return 0.0;
  return band[static_cast<size_t>(i) * width() + (j - i + kl)];
}

std::vector<double> BandedSystem::multiply(const std::vector<double>& x) const {
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) y[i] += get(i, j) * x[j];
  return y;
}

std::vector<double> solve_banded(BandedSystem s) {
  const int n = s.n, kl = s.kl, ku = s.ku, w = s.width();
  if (static_cast<int>(s.rhs.size()) != n || static_cast<int>(s.band.size()) != n * w)
    throw std::invalid_argument("solve_banded: inconsistent dimensions");
  // Row i holds columns i-kl .. i+ku+kl.
  auto el = [&](int i, int j) -> double& { return s.band[static_cast<size_t>(i) * w + (j - i + kl)]; };
  double scale = 0.0;
  for (double v : s.band) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw NumericalError("solve_banded: singular pivot (zero matrix)");
  const double tiny = scale * 1e-15;
  std::vector<double>& b = s.rhs;

  for (int k = 0; k < n; ++k) {
    const int last = std::min(n - 1, k + kl);
    int piv = k;
    for (int i = k + 1; i <= last; ++i)
      if (std::abs(el(i, k)) > std::abs(el(piv, k))) piv = i;
    if (std::abs(el(piv, k)) <= tiny) throw NumericalError("solve_banded: singular pivot at row " + std::to_string(k));
    const int cmax = std::min(n - 1, k + ku + kl);
    if (piv != k) {
      for (int j = k; j <= cmax; ++j) std::swap(el(k, j), el(piv, j));
      std::swap(b[k], b[piv]);
    }
    const double pk = el(k, k);
    for (int i = k + 1; i <= last; ++i) {
      const double l = el(i, k) / pk;
      if (l == 0.0) continue;
      el(i, k) = 0.0;
      for (int j = k + 1; j <= cmax; ++j) el(i, j) -= l * el(k, j);
      b[i] -= l * b[k];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double acc = b[i];
    const int cmax = std::min(n - 1, i + ku + kl);
    for (int j = i + 1; j <= cmax; ++j) acc -= el(i, j) * x[j];
    x[i] = acc / el(i, i);
  }
  return x;
}

// ------------------------------------------------------- bracketed roots

double find_root_bracketed(const std::function<double(double)>& f, double a, double b, double tol) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw NumericalError("find_root_bracketed: no sign change on [a, b]");
  double lo = a, hi = b, flo = fa;
  double x = 0.5 * (a + b), fx = f(x);
  double xPrev = a, fPrev = fa;
  for (int it = 0; it < 400; ++it) {
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    // Newton step with a secant slope, rejected if it leaves the bracket
    // or fails to halve the bracket quickly enough.
    double next = 0.5 * (lo + hi);
    if (fx != fPrev) {
      const double slope = (fx - fPrev) / (x - xPrev);
      const double cand = x - fx / slope;
      const double lo2 = std::min(lo, hi), hi2 = std::max(lo, hi);
      if (slope != 0.0 && cand > lo2 && cand < hi2 && std::abs(cand - x) < 0.5 * std::abs(hi - lo)) next = cand;
    }
    xPrev = x;
    fPrev = fx;
    const double step = std::abs(next - x);
    x = next;
    fx = f(x);
    if (step <= tol * std::max(1.0, std::abs(x)) || std::abs(hi - lo) <= tol * std::max(1.0, std::abs(x))) {
      if (fx == 0.0) return x;
      return x;
    }
  }
  return x;
}

// --------------------------------------------------------- polynomials

Complex polyval(const std::vector<Complex>& c, Complex x) {
  Complex acc = 0.0;
  for (const Complex& v : c) acc = acc * x + v;
  return acc;
}

std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c.swap(next);
  }
  return c;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  size_t lead = 0;
  while (lead < coeffs.size() && coeffs[lead] == Complex(0.0, 0.0)) ++lead;
  if (lead == coeffs.size()) throw DomainError("polynomial_roots: zero polynomial");
  std::vector<Complex> c(coeffs.begin() + static_cast<long>(lead), coeffs.end());
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) throw DomainError("polynomial_roots: degree 0 polynomial has no roots");

  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) comp(0, j) = -c[j + 1] / c[0];
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericalError("polynomial_roots: eigenvalue iteration failed");

  std::vector<Complex> dc(n);
  for (int i = 0; i < n; ++i) dc[i] = c[i] * double(n - i);
  std::vector<Complex> roots(n);
  for (int i = 0; i < n; ++i) {
    Complex z = es.eigenvalues()[i];
    for (int it = 0; it < 8; ++it) {
      const Complex p = polyval(c, z), dp = polyval(dc, z);
      if (dp == Complex(0.0, 0.0)) break;
      const Complex step = p / dp;
      const Complex zn = z - step;
      if (std::abs(polyval(c, zn)) >= std::abs(p)) break;
      z = zn;
      if (std::abs(step) <= 1e-16 * std::abs(z)) break;
    }
    roots[i] = z;
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

// ---------------------------------------------------- argument principle

ClosedContour ClosedContour::circle(Complex c, double r, int budget) {
  ClosedContour k;
  k.shape = Shape::Circle;
  k.center = c;
  k.radius = r;
  k.sampleBudget = budget;
  return k;
}

ClosedContour ClosedContour::annulus(double inner, double outer, int budget) {
  ClosedContour k;
  k.shape = Shape::Annulus;
  k.innerRadius = inner;
  k.radius = outer;
  k.sampleBudget = budget;
  return k;
}

int winding_number_path(const std::function<Complex(Complex)>& f, const std::function<Complex(double)>& path,
                        int budget, double minStep, double zeroThreshold) {
  if (budget < 4) budget = 4;
  const double twoPi = 2.0 * std::numbers::pi;
  auto eval = [&](double s) {
    const Complex v = f(path(s));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) <= zeroThreshold)
      throw ZeroOnContour("argument principle: function vanishes (or is not finite) on the contour");
    return v;
  };
  double total = 0.0;
  // Explicit stack of parameter intervals with cached endpoint values.
  struct Seg {
    double s0, s1;
    Complex f0, f1;
  };
  std::vector<Seg> stack;
  std::vector<Complex> vals(budget + 1);
  for (int k = 0; k < budget; ++k) vals[k] = eval(double(k) / budget);
  vals[budget] = vals[0];
  for (int k = budget - 1; k >= 0; --k) stack.push_back({double(k) / budget, double(k + 1) / budget, vals[k], vals[k + 1]});
  while (!stack.empty()) {
    Seg g = stack.back();
    stack.pop_back();
    const double dphi = std::arg(g.f1 / g.f0);
    const bool phaseJump = std::abs(dphi) >= 0.5 * std::numbers::pi;
    // Samples that differ by more than their size can straddle a zero close to the path.
    const bool coarse = std::abs(g.f1 - g.f0) >= std::min(std::abs(g.f0), std::abs(g.f1)) &&
                        g.s1 - g.s0 >= std::max(minStep, 1e-10);
    if (phaseJump || coarse) {
      if (g.s1 - g.s0 < minStep)
        throw ZeroOnContour("argument principle: phase jump not resolved by refinement (zero near contour)");
      const double sm = 0.5 * (g.s0 + g.s1);
      const Complex fm = eval(sm);
      stack.push_back({sm, g.s1, fm, g.f1});
      stack.push_back({g.s0, sm, g.f0, fm});
      continue;
    }
    total += dphi;
  }
  return static_cast<int>(std::lround(total / twoPi));
}

int winding_number_circle(const std::function<Complex(Complex)>& f, Complex c, double r, int budget,
                          double minStep, double zeroThreshold) {
  const double twoPi = 2.0 * std::numbers::pi;
  return winding_number_path(f, [&](double s) { return c + r * std::polar(1.0, twoPi * s); }, budget, minStep,
                             zeroThreshold);
}

int count_zeros_argument_principle(const std::function<Complex(Complex)>& f, const ClosedContour& contour) {
  const double minStep = contour.refinementTolerance;
  if (contour.shape == ClosedContour::Shape::Circle)
    return winding_number_circle(f, contour.center, contour.radius, contour.sampleBudget, minStep, contour.zeroThreshold);
  const int outer = winding_number_circle(f, contour.center, contour.radius, contour.sampleBudget, minStep, contour.zeroThreshold);
  const int inner =
      winding_number_circle(f, contour.center, contour.innerRadius, contour.sampleBudget, minStep, contour.zeroThreshold);
  return outer - inner;
}

Complex newton_polish(const std::function<Complex(Complex)>& f, Complex z, int maxIter, double tol) {
  for (int it = 0; it < maxIter; ++it) {
    const double h = 1e-7 * std::max(1.0, std::abs(z));
    const Complex fz = f(z);
    const Complex df = (f(z + h) - f(z - h)) / (2.0 * h);
    if (df == Complex(0.0, 0.0)) break;
    const Complex step = fz / df;
    z -= step;
    if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

// ------------------------------------------------------------ rate fit

double fit_convergence_rate(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size()) throw std::invalid_argument("fit_convergence_rate: size mismatch");
  if (h.size() < 2) throw std::invalid_argument("fit_convergence_rate: need at least two points");
  const size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    if (!(h[i] > 0.0)) throw std::invalid_argument("fit_convergence_rate: h must be positive");
    if (!(err[i] > 0.0)) throw std::invalid_argument("fit_convergence_rate: errors must be positive");
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("fit_convergence_rate: all h identical");
  return (n * sxy - sx * sy) / den;
}

}  // namespace amprb
