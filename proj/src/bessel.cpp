#include "amprb/numerics.hpp"

#include <cmath>
#include <numbers>

namespace amprb {

namespace {

constexpr double kEuler = 0.57721566490153286061;
constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-17;
constexpr double kTiny = 1e-300;

// ---- real J/Y

struct JY {
  double j0, j1, y0, y1;
};

JY jySeries(double x) {
  const double q = -0.25 * x * x;
  double t0 = 1.0, t1 = 1.0;  // (q)^k/(k!)^2  and  (q)^k/(k!(k+1)!)
  double h = 0.0;             // harmonic number H_k
  double j0 = 0.0, j1 = 0.0, s0 = 0.0, s1 = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      t0 *= q / (double(k) * k);
      t1 *= q / (double(k) * (k + 1));
      h += 1.0 / k;
    }
    const double psi1 = -kEuler + h;
    const double psi2 = psi1 + 1.0 / (k + 1);
    j0 += t0;
    j1 += t1;
    s0 += psi1 * t0;
    s1 += (psi1 + psi2) * t1;
    if (std::abs(t0) < kEps * std::abs(j0) && std::abs(t1) < kEps * std::abs(j1)) break;
  }
  j1 *= 0.5 * x;
  const double lg = std::log(0.5 * x);
  JY r;
  r.j0 = j0;
  r.j1 = j1;
  r.y0 = (2.0 / kPi) * lg * j0 - (2.0 / kPi) * s0;
  r.y1 = -2.0 / (kPi * x) + (2.0 / kPi) * lg * j1 - (x / (2.0 * kPi)) * s1;
  return r;
}

// Steed's method (order zero), x >= 2.
JY jySteed(double x) {
  const double xi = 1.0 / x, xi2 = 2.0 * xi, w = xi * (2.0 / kPi);
  int isign = 1;
  double h = kTiny, b = 0.0, d = 0.0, c = h;
  int i = 0;
  for (; i < 100000; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b - 1.0 / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) < 5e-16) break;
  }
  if (i >= 100000) throw NumericalError("bessel: J continued fraction did not converge");
  const double rjl = isign * kTiny;
  const double rjpl = h * rjl;
  const double f = rjpl / rjl;

  double a = 0.25, p = -0.5 * xi, q = 1.0;
  double br = 2.0 * x, bi = 2.0;
  double fact = a * xi / (p * p + q * q);
  double cr = br + q * fact, ci = bi + p * fact;
  double den = br * br + bi * bi;
  double dr = br / den, di = -bi / den;
  double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
  double temp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = temp;
  for (i = 1; i < 100000; ++i) {
    a += 2.0 * i;
    bi += 2.0;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < kTiny) dr = kTiny;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::abs(cr) + std::abs(ci) < kTiny) cr = kTiny;
    den = dr * dr + di * di;
    dr /= den;
    di /= -den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    if (std::abs(dlr - 1.0) + std::abs(dli) < 5e-16) break;
  }
  if (i >= 100000) throw NumericalError("bessel: Y continued fraction did not converge");
  const double gam = (p - f) / q;
  double rjmu = std::sqrt(w / ((p - f) * gam + q));
  rjmu = std::copysign(rjmu, rjl);
  const double rymu = rjmu * gam;
  const double rymup = rymu * (p + q / gam);
  const double scale = rjmu / rjl;
  JY r;
  r.j0 = rjl * scale;
  r.j1 = -rjpl * scale;
  r.y0 = rymu;
  r.y1 = -rymup;
  return r;
}

JY jyAll(double x) {
  if (!(x > 0.0)) throw DomainError("bessel: J/Y need a positive real argument");
  return x < 2.0 ? jySeries(x) : jySteed(x);
}

// ---- complex I/K

ModifiedBesselPair ikSeries(Complex z) {
  const Complex q = 0.25 * z * z;
  Complex t0 = 1.0, t1 = 1.0;
  double h = 0.0;
  Complex i0 = 0.0, i1 = 0.0, s0 = 0.0, s1 = 0.0;
  for (int k = 0; k < 80; ++k) {
    if (k > 0) {
      t0 *= q / (double(k) * k);
      t1 *= q / (double(k) * (k + 1));
      h += 1.0 / k;
    }
    const double psi1 = -kEuler + h;
    const double psi2 = psi1 + 1.0 / (k + 1);
    i0 += t0;
    i1 += t1;
    s0 += psi1 * t0;
    s1 += (psi1 + psi2) * t1;
    if (std::abs(t0) < kEps * std::abs(i0) && std::abs(t1) < kEps * std::abs(i1)) break;
  }
  i1 *= 0.5 * z;
  const Complex lg = std::log(0.5 * z);
  ModifiedBesselPair r;
  r.i0 = i0;
  r.i1 = i1;
  r.k0 = -lg * i0 + s0;
  r.k1 = 1.0 / z + lg * i1 - 0.25 * z * s1;
  return r;
}

// Scaled K0, K1 from Steed's second continued fraction; I0, I1 from the
// ratio continued fraction and the Wronskian I0 K1 + I1 K0 = 1/z.
ModifiedBesselPair ikSteedScaled(Complex z) {
  const Complex zi = 1.0 / z;
  Complex b = 2.0 * (1.0 + z);
  Complex d = 1.0 / b;
  Complex h = d, delh = d;
  Complex q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  Complex q = a1, c = a1;
  double a = -a1;
  Complex s = 1.0 + q * delh;
  int i = 1;
  for (; i < 200000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const Complex qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const Complex dels = q * delh;
    s += dels;
    if (std::abs(dels) < 1e-17 * std::abs(s)) break;
  }
  if (i >= 200000) throw NumericalError("bessel: K continued fraction did not converge");
  h *= a1;
  ModifiedBesselPair r;
  r.k0 = std::sqrt(kPi / (2.0 * z)) / s;
  r.k1 = r.k0 * (z + 0.5 - h) * zi;

  // t = I1/I0 = 1/(2/z + 1/(4/z + ...)) by modified Lentz.
  Complex f = kTiny, C = f, D = 0.0;
  for (i = 1; i < 200000; ++i) {
    const Complex bi = 2.0 * i * zi;
    D = bi + D;
    if (std::abs(D) < kTiny) D = kTiny;
    C = bi + 1.0 / C;
    if (std::abs(C) < kTiny) C = kTiny;
    D = 1.0 / D;
    const Complex del = C * D;
    f *= del;
    if (std::abs(del - 1.0) < 5e-16) break;
  }
  if (i >= 200000) throw NumericalError("bessel: I continued fraction did not converge");
  const Complex t = f;
  if (std::abs(t) <= 1.0) {
    r.i0 = zi / (r.k1 + t * r.k0);
    r.i1 = t * r.i0;
  } else {
    r.i1 = zi / (r.k1 / t + r.k0);
    r.i0 = r.i1 / t;
  }
  return r;
}

ModifiedBesselPair ikAsymptoticScaled(Complex z) {
  const Complex zi = 1.0 / z;
  const Complex pre = 1.0 / std::sqrt(2.0 * kPi * z);
  Complex sumI[2], sumK[2];
  for (int nu = 0; nu < 2; ++nu) {
    const double m = 4.0 * nu * nu;
    Complex term = 1.0, sI = 1.0, sK = 1.0;
    double prevMag = 1.0;
    for (int k = 1; k < 200; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= (m - odd * odd) / (8.0 * k) * zi;
      const double mag = std::abs(term);
      if (mag > prevMag) break;
      prevMag = mag;
      sK += term;
      sI += (k % 2 ? -1.0 : 1.0) * term;
      if (mag < 1e-17) break;
    }
    sumI[nu] = sI;
    sumK[nu] = sK;
  }
  ModifiedBesselPair r;
  const Complex kpre = std::sqrt(kPi / (2.0 * z));
  r.k0 = kpre * sumK[0];
  r.k1 = kpre * sumK[1];
  // Contribution of the recessive exponential, relevant off the real axis.
  Complex e2 = 0.0;
  double sgn = 0.0;
  if (z.imag() > 0.0) sgn = 1.0;
  if (z.imag() < 0.0) sgn = -1.0;
  if (sgn != 0.0) e2 = std::exp(-2.0 * z);
  r.i0 = pre * (sumI[0] + sgn * Complex(0.0, 1.0) * e2 * sumK[0]);
  r.i1 = pre * (sumI[1] - sgn * Complex(0.0, 1.0) * e2 * sumK[1]);
  return r;
}

constexpr double kSeriesRadius = 2.0;
constexpr double kAsymptoticRadius = 25.0;

}  // namespace

ModifiedBesselPair modifiedBesselScaled(Complex z) {
  if (z.real() < 0.0) throw DomainError("bessel: I/K need Re(z) >= 0");
  if (z == Complex(0.0, 0.0)) throw DomainError("bessel: K is singular at z = 0");
  const double az = std::abs(z);
  if (az <= kSeriesRadius) {
    ModifiedBesselPair r = ikSeries(z);
    const Complex em = std::exp(-z), ep = std::exp(z);
    return {r.i0 * em, r.i1 * em, r.k0 * ep, r.k1 * ep};
  }
  if (az <= kAsymptoticRadius) return ikSteedScaled(z);
  return ikAsymptoticScaled(z);
}

ModifiedBesselPair modifiedBessel(Complex z) {
  if (z.real() < 0.0) throw DomainError("bessel: I/K need Re(z) >= 0");
  if (z == Complex(0.0, 0.0)) throw DomainError("bessel: K is singular at z = 0");
  if (std::abs(z) <= kSeriesRadius) return ikSeries(z);
  ModifiedBesselPair r = modifiedBesselScaled(z);
  const Complex em = std::exp(-z), ep = std::exp(z);
  return {r.i0 * ep, r.i1 * ep, r.k0 * em, r.k1 * em};
}

double besselJ0(double x) { return x == 0.0 ? 1.0 : jyAll(x).j0; }
double besselJ1(double x) { return x == 0.0 ? 0.0 : jyAll(x).j1; }
double besselY0(double x) { return jyAll(x).y0; }
double besselY1(double x) { return jyAll(x).y1; }

Complex bessel(BesselKind kind, int order, Complex z) {
  if (order != 0 && order != 1) throw DomainError("bessel: only orders 0 and 1 are supported");
  switch (kind) {
    case BesselKind::J:
    case BesselKind::Y: {
      if (z.imag() != 0.0) throw DomainError("bessel: J/Y need a real argument");
      const double x = z.real();
      if (kind == BesselKind::J) {
        if (x == 0.0) return order == 0 ? 1.0 : 0.0;
        if (x < 0.0) throw DomainError("bessel: J needs a non-negative argument");
        const JY r = jyAll(x);
        return order == 0 ? r.j0 : r.j1;
      }
      if (x <= 0.0) throw DomainError("bessel: Y needs a positive argument");
      const JY r = jyAll(x);
      return order == 0 ? r.y0 : r.y1;
    }
    case BesselKind::I: {
      if (z == Complex(0.0, 0.0)) return order == 0 ? 1.0 : 0.0;
      const ModifiedBesselPair r = modifiedBessel(z);
      return order == 0 ? r.i0 : r.i1;
    }
    case BesselKind::K: {
      const ModifiedBesselPair r = modifiedBessel(z);
      return order == 0 ? r.k0 : r.k1;
    }
  }
  throw DomainError("bessel: unknown kind");
}

}  // namespace amprb
