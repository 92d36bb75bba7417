#include "amprb/stability.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "amprb/parallel.hpp"

namespace amprb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double damping_bar(double delta) { return -std::expm1(-delta); }

// Value of gamma_b (A-1)^3 + gamma_0 [mass (A-1) + C (A+1)] A^2 with the sum of term magnitudes.
struct Parts {
  Complex value;
  double scale = 0.0;
  double residual() const { return scale > 0.0 ? std::abs(value) / scale : std::abs(value); }
};

Parts assemble(Complex A, Complex gb, Complex g0, double mass, Complex C) {
  const Complex am1 = A - 1.0, ap1 = A + 1.0;
  const Complex bracket = mass * am1 + C * ap1;
  const double a2 = std::norm(A), m1 = std::abs(am1);
  Parts p;
  p.value = gb * am1 * am1 * am1 + g0 * bracket * A * A;
  p.scale = std::abs(gb) * m1 * m1 * m1 + std::abs(g0) * (std::abs(mass) * m1 + std::abs(C) * std::abs(ap1)) * a2;
  return p;
}

struct XiValue {
  Complex xi, one_minus_xi;
};

XiValue xi_rect(Complex A, double delta) {
  if (A == Complex(-1.0, 0.0)) throw DomainError("transfer_coeffs_rect: A = -1 is a pole of q");
  const double c = 0.5 * delta * delta;
  const Complex qm1 = c * (A - 1.0) / (A + 1.0);
  const Complex q = 1.0 + qm1;
  Complex s = std::sqrt(qm1 * (q + 1.0));
  if (std::abs(q - s) > std::abs(q + s)) s = -s;
  return {1.0 / (q + s), (qm1 + s) / (q + s)};
}

Complex dtn_from_one_minus(Complex omx) { return 0.5 * omx * (2.0 + omx); }

struct RectModel {
  double mbar, delta, beta, Dbar, Ceta;
  bool vc;

  RectModel(const RectStabilityParams& p, SchemeVariant v)
      : mbar(p.mbar),
        delta(p.delta),
        beta(v == SchemeVariant::TP ? 0.0 : p.beta_d),
        Dbar(damping_bar(p.delta)),
        Ceta(dtn_coefficient_eta(p.delta)),
        vc(v == SchemeVariant::AMP_VC) {
    p.validate();
  }

  Parts parts(Complex A) const {
    const Complex Cxi = dtn_from_one_minus(xi_rect(A, delta).one_minus_xi);
    const double b = 2.0 * beta * Dbar;
    const Complex gb = vc ? Complex((b - Ceta) * (b - Ceta)) : (b - Cxi) * (b - Ceta);
    const double g0 = mbar + 2.0 * b - Ceta;
    return assemble(A, gb, g0, mbar, Cxi);
  }
  Complex operator()(Complex A) const { return parts(A).value; }
  double gamma0_beta() const { return (Ceta - mbar) / (4.0 * Dbar); }
  // N grows like (2 beta Dbar + mbar)^2 A^3, or like A^2 when that vanishes.
  int growth_order() const { return 2.0 * beta * Dbar + mbar > 0.0 ? 3 : 2; }
};

struct AnnularModel {
  AnnularGeometry geom;
  double Ibar, delta, beta, Dbar, zeta1, C1;
  bool vc;

  AnnularModel(const AnnularStabilityParams& p, const AnnularGeometry& g, SchemeVariant v, bool check = true)
      : geom(g),
        Ibar(p.Ibar),
        delta(p.delta_tilde),
        beta(v == SchemeVariant::TP ? 0.0 : p.beta_d),
        Dbar(damping_bar(p.delta_tilde)),
        zeta1(p.delta_tilde / g.dr),
        C1(0.0),
        vc(v == SchemeVariant::AMP_VC) {
    if (check) p.validate();
    g.validate();
    C1 = annular_dtn_coefficient(Complex(zeta1, 0.0), g).real();
  }

  Complex zeta2(Complex A) const {
    if (A == Complex(-1.0, 0.0)) throw DomainError("transfer_coeffs_annular: A = -1 is a pole of zeta_2");
    return zeta1 * std::sqrt((A - 1.0) / (A + 1.0));
  }
  Parts parts(Complex A) const {
    const Complex C2 = annular_dtn_coefficient(zeta2(A), geom);
    const double b = 2.0 * beta * Dbar;
    const Complex gb = vc ? Complex((b - C1) * (b - C1)) : (b - C2) * (b - C1);
    const double g0 = Ibar + 2.0 * b - C1;
    return assemble(A, gb, g0, Ibar, C2);
  }
  Complex operator()(Complex A) const { return parts(A).value; }
  double gamma0_beta() const { return (C1 - Ibar) / (4.0 * Dbar); }
  int growth_order() const { return 2.0 * beta * Dbar + Ibar > 0.0 ? 3 : 2; }
};

// ------------------------------------------------------------ polynomial

using Poly = std::vector<double>;  // lowest power first

Poly pmul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly padd(const Poly& a, const Poly& b, double sb = 1.0) {
  Poly c(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] += sb * b[i];
  return c;
}

Poly pscale(Poly a, double s) {
  for (double& v : a) v *= s;
  return a;
}

Poly pdeflate(const Poly& a, double root) {
  const size_t n = a.size() - 1;
  Poly q(n, 0.0);
  double carry = 0.0;
  for (size_t k = n; k >= 1; --k) {
    carry = a[k] + root * carry;
    q[k - 1] = carry;
  }
  return q;
}

// --------------------------------------------------------- root isolation

struct SectorBox {
  double r0, r1, t0, t1;
  int count;
  int depth;
};

Complex sector_point(const SectorBox& b, double s) {
  const double u = 4.0 * s;
  const int k = std::min(static_cast<int>(u), 3);
  const double v = u - k;
  switch (k) {
    case 0: return std::polar(b.r0 * std::pow(b.r1 / b.r0, v), b.t0);
    case 1: return std::polar(b.r1, b.t0 + (b.t1 - b.t0) * v);
    case 2: return std::polar(b.r1 * std::pow(b.r0 / b.r1, v), b.t1);
    default: return std::polar(b.r0, b.t1 + (b.t0 - b.t1) * v);
  }
}

std::optional<int> sector_count(const std::function<Complex(Complex)>& f, const SectorBox& b, int budget) {
  try {
    return winding_number_path(f, [&](double s) { return sector_point(b, s); }, budget, 1e-13, 0.0);
  } catch (const ZeroOnContour&) {
    return std::nullopt;
  }
}

bool inside(const SectorBox& b, Complex z) {
  const double r = std::abs(z);
  if (r < b.r0 * (1.0 - 1e-9) || r > b.r1 * (1.0 + 1e-9)) return false;
  const double d = std::fmod(std::arg(z) - b.t0 + 4.0 * kPi, 2.0 * kPi);
  return d <= (b.t1 - b.t0) + 1e-9 || d >= 2.0 * kPi - 1e-9;
}

using PartsFn = std::function<Parts(Complex)>;

std::vector<Complex> isolate_roots(const PartsFn& parts, int total, double rout, const StabilityOptions& o) {
  std::vector<Complex> found;
  if (total <= 0) return found;
  const auto f = [&](Complex A) { return parts(A).value; };
  const int budget = std::max(64, o.budget);
  const double rin = 1.0 + o.eps;

  std::vector<SectorBox> stack;
  bool seeded = false;
  for (double offset : {0.2718281828, 0.5772156649, 0.1414213562}) {
    std::vector<SectorBox> init;
    int sum = 0;
    bool ok = true;
    for (int k = 0; k < 4 && ok; ++k) {
      SectorBox b{rin, rout, offset + k * 0.5 * kPi, offset + (k + 1) * 0.5 * kPi, 0, 0};
      const auto c = sector_count(f, b, budget);
      if (!c || *c < 0) {
        ok = false;
        break;
      }
      b.count = *c;
      sum += *c;
      if (*c > 0) init.push_back(b);
    }
    if (ok && sum == total) {
      stack = init;
      seeded = true;
      break;
    }
  }
  if (!seeded) throw NumericalError("root isolation: sector counts do not add up to the annulus count");

  const double fracs[] = {0.5, 0.4617, 0.5381, 0.4239, 0.5773};
  while (!stack.empty()) {
    const SectorBox b = stack.back();
    stack.pop_back();
    const double rad = std::log(b.r1 / b.r0), ang = b.t1 - b.t0;
    const Complex center = std::polar(std::sqrt(b.r0 * b.r1), 0.5 * (b.t0 + b.t1));
    if (b.count == 1 || rad < 1e-7 || ang < 1e-7 || b.depth >= o.max_depth) {
      const Complex z = newton_polish(f, center);
      const bool good = finite(z) && inside(b, z) && parts(z).residual() <= o.residual_tol;
      if (good && (b.count == 1 || rad < 1e-7 || ang < 1e-7)) {
        for (int k = 0; k < b.count; ++k) found.push_back(z);
        continue;
      }
      if (b.depth >= o.max_depth) {
        std::ostringstream msg;
        msg << "root isolation: could not converge to the root(s) near " << center;
        throw NumericalError(msg.str());
      }
    }
    bool split = false;
    for (double fr : fracs) {
      SectorBox c1 = b, c2 = b;
      if (rad > ang) {
        const double rm = b.r0 * std::pow(b.r1 / b.r0, fr);
        c1.r1 = rm;
        c2.r0 = rm;
      } else {
        const double tm = b.t0 + fr * ang;
        c1.t1 = tm;
        c2.t0 = tm;
      }
      c1.depth = c2.depth = b.depth + 1;
      const auto n1 = sector_count(f, c1, budget);
      const auto n2 = sector_count(f, c2, budget);
      if (!n1 || !n2 || *n1 < 0 || *n2 < 0 || *n1 + *n2 != b.count) continue;
      c1.count = *n1;
      c2.count = *n2;
      if (c1.count > 0) stack.push_back(c1);
      if (c2.count > 0) stack.push_back(c2);
      split = true;
      break;
    }
    if (!split) throw NumericalError("root isolation: sector subdivision failed (zero on a sector edge)");
  }
  std::sort(found.begin(), found.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return found;
}

int circle_winding(const std::function<Complex(Complex)>& f, double r, int budget) {
  return winding_number_circle(f, Complex(0.0, 0.0), r, budget, 1e-13, 0.0);
}

// Zeros with 1 + eps <= |A| <= R.  For infinite R the exterior of the inner circle is
// counted through the pole of order `order` at infinity.
int annulus_count(const std::function<Complex(Complex)>& f, int order, const StabilityOptions& o) {
  const double rin = 1.0 + o.eps;
  const int n = std::isfinite(o.R) ? circle_winding(f, o.R, o.budget) - circle_winding(f, rin, o.budget)
                                   : order - circle_winding(f, rin, o.budget);
  if (n < 0) throw NumericalError("argument principle: negative zero count");
  return n;
}

// Finite radius enclosing every zero counted by annulus_count.
double enclosing_radius(const std::function<Complex(Complex)>& f, int order, const StabilityOptions& o) {
  if (std::isfinite(o.R)) return o.R;
  for (double r = 100.0; r < 1e16; r *= 10.0)
    if (order - circle_winding(f, r, o.budget) == 0) return r;
  throw NumericalError("argument principle: could not enclose the unstable roots");
}

std::vector<Complex> argument_principle_roots(const PartsFn& parts, int order, const StabilityOptions& o) {
  const auto f = [&](Complex A) { return parts(A).value; };
  const int total = annulus_count(f, order, o);
  if (total == 0) return {};
  return isolate_roots(parts, total, enclosing_radius(f, order, o), o);
}

// -------------------------------------------------------- classification

using ModelAt = std::function<Parts(Complex, double)>;

// Complex roots: follow the root while beta_d decreases.  Reaching |A| <= 1 means the
// instability comes from too much stabilization (IV); otherwise it is II.
InstabilityRegion classify_common(Complex root, bool tp, double beta, double gamma0_beta, const ModelAt& at) {
  if (!(std::abs(root) > 1.0)) return InstabilityRegion::None;
  if (!finite(root) || std::abs(root.imag()) <= 1e-9 * std::abs(root))
    return root.real() > 0.0 ? InstabilityRegion::I : InstabilityRegion::III;
  if (tp) return InstabilityRegion::II;
  auto solve = [&](double b, Complex z0) -> std::optional<Complex> {
    const auto f = [&](Complex A) { return at(A, b).value; };
    const Complex z = newton_polish(f, z0);
    if (!finite(z) || at(z, b).residual() > 1e-8) return std::nullopt;
    return z;
  };
  const auto start = solve(beta, root);
  if (!start || std::abs(*start - root) > 0.05 * std::abs(root))
    return beta > gamma0_beta ? InstabilityRegion::IV : InstabilityRegion::II;
  Complex z = *start;
  double b = beta, h = 1e-3 * std::max(1.0, beta);
  for (int k = 0; k < 4000 && b > 0.0; ++k) {
    const double bn = std::max(0.0, b - h);
    const auto zn = solve(bn, z);
    if (!zn || std::abs(*zn - z) > 0.05 * std::abs(z)) {
      h *= 0.5;
      if (h < 1e-10) break;
      continue;
    }
    if (std::abs(*zn) <= 1.0) return InstabilityRegion::IV;
    if (std::abs(zn->imag()) <= 1e-7 * std::abs(*zn)) break;
    z = *zn;
    b = bn;
    h = std::min(1.5 * h, 0.05 * std::max(1.0, b));
  }
  return InstabilityRegion::II;
}

// ------------------------------------------------------- boundary helpers

struct Quadratic {
  Complex a2, a1, a0;
};

// Coefficients of N(A) = 0 as a quadratic in beta_d at fixed A.
Quadratic beta_quadratic(Complex A, double mass, double Dbar, double C1, Complex C2, bool vc) {
  const Complex am1 = A - 1.0;
  const Complex E = am1 * am1 * am1, B = mass * am1 + C2 * (A + 1.0), A2 = A * A;
  Quadratic q;
  q.a2 = 4.0 * Dbar * Dbar * E;
  if (vc) {
    q.a1 = -4.0 * Dbar * C1 * E + 4.0 * Dbar * B * A2;
    q.a0 = C1 * C1 * E + (mass - C1) * B * A2;
  } else {
    q.a1 = -2.0 * Dbar * (C2 + C1) * E + 4.0 * Dbar * B * A2;
    q.a0 = C2 * C1 * E + (mass - C1) * B * A2;
  }
  return q;
}

// Coefficients of the beta_d = 0 constraint as a quadratic in the mass parameter.
Quadratic mass_quadratic(Complex A, double C1, Complex C2) {
  const Complex am1 = A - 1.0, A2 = A * A;
  Quadratic q;
  q.a2 = am1 * A2;
  q.a1 = (C2 * (A + 1.0) - C1 * am1) * A2;
  q.a0 = C2 * C1 * (am1 * am1 * am1 - (A + 1.0) * A2);
  return q;
}

std::array<Complex, 2> quadratic_roots(const Quadratic& q) {
  if (q.a2 == Complex(0.0, 0.0)) {
    const Complex r = q.a1 == Complex(0.0, 0.0) ? Complex(std::numeric_limits<double>::quiet_NaN(), 0.0) : -q.a0 / q.a1;
    return {r, Complex(std::numeric_limits<double>::infinity(), 0.0)};
  }
  const Complex disc = std::sqrt(q.a1 * q.a1 - 4.0 * q.a2 * q.a0);
  const double sgn = (std::conj(q.a1) * disc).real() >= 0.0 ? 1.0 : -1.0;
  const Complex w = -0.5 * (q.a1 + sgn * disc);
  if (w == Complex(0.0, 0.0)) return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
  return {w / q.a2, q.a0 / w};
}

std::vector<double> real_quadratic_roots(double a2, double a1, double a0) {
  std::vector<double> out;
  if (a2 == 0.0) {
    if (a1 != 0.0) out.push_back(-a0 / a1);
    return out;
  }
  const double disc = a1 * a1 - 4.0 * a2 * a0;
  if (disc < 0.0) return out;
  const double w = -0.5 * (a1 + std::copysign(std::sqrt(disc), a1));
  if (w == 0.0) {
    out.push_back(0.0);
    return out;
  }
  out.push_back(w / a2);
  out.push_back(a0 / w);
  std::sort(out.begin(), out.end());
  return out;
}

// Values v(theta) of the two quadratic roots for theta in (0, pi) where Im v changes sign.
std::vector<double> unit_circle_crossings(const std::function<Quadratic(double)>& quadAt, int ntheta) {
  std::vector<double> out;
  if (ntheta < 4) ntheta = 4;
  auto rootsAt = [&](double th) { return quadratic_roots(quadAt(th)); };
  auto nearest = [](const std::array<Complex, 2>& r, Complex target) {
    return std::abs(r[0] - target) <= std::abs(r[1] - target) ? r[0] : r[1];
  };
  const double dth = kPi / ntheta;
  std::array<Complex, 2> prev = rootsAt(dth);
  for (int k = 2; k < ntheta; ++k) {
    const double th = k * dth;
    std::array<Complex, 2> cur = rootsAt(th);
    if (std::abs(cur[0] - prev[0]) + std::abs(cur[1] - prev[1]) > std::abs(cur[0] - prev[1]) + std::abs(cur[1] - prev[0]))
      std::swap(cur[0], cur[1]);
    for (int b = 0; b < 2; ++b) {
      if (!finite(prev[b]) || !finite(cur[b])) continue;
      if (prev[b].imag() * cur[b].imag() > 0.0) continue;
      double lo = th - dth, hi = th;
      Complex vlo = prev[b], vhi = cur[b];
      for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Complex vm = nearest(rootsAt(mid), 0.5 * (vlo + vhi));
        if (vm.imag() * vlo.imag() > 0.0) {
          lo = mid;
          vlo = vm;
        } else {
          hi = mid;
          vhi = vm;
        }
      }
      const Complex v = std::abs(vlo.imag()) < std::abs(vhi.imag()) ? vlo : vhi;
      if (finite(v) && std::abs(v.imag()) <= 1e-7 * (1.0 + std::abs(v.real()))) out.push_back(v.real());
    }
    prev = cur;
  }
  return out;
}

struct ColumnPoint {
  double y;
  std::string kind;
};

// Joins per-column boundary values into ordered curves by matching against a linear prediction.
std::vector<BoundaryCurve> link_columns(const std::vector<double>& xs, const std::vector<std::vector<ColumnPoint>>& cols,
                                        double ymin, double ymax) {
  struct Open {
    size_t curve;
    size_t col;
  };
  std::vector<BoundaryCurve> curves;
  std::vector<Open> open;
  const double tol = 0.15 * (ymax - ymin);
  for (size_t i = 0; i < xs.size(); ++i) {
    std::vector<ColumnPoint> pts = cols[i];
    std::sort(pts.begin(), pts.end(), [](const ColumnPoint& a, const ColumnPoint& b) {
      return a.kind != b.kind ? a.kind < b.kind : a.y < b.y;
    });
    struct Cand {
      double d;
      size_t o, p;
    };
    std::vector<Cand> cands;
    for (size_t o = 0; o < open.size(); ++o) {
      const BoundaryCurve& c = curves[open[o].curve];
      if (open[o].col + 1 != i) continue;
      for (size_t p = 0; p < pts.size(); ++p) {
        if (pts[p].kind != c.kind) continue;
        const size_t n = c.points.size();
        const double last = c.points[n - 1][1];
        const double slope = n >= 2 ? last - c.points[n - 2][1] : 0.0;
        const double d = std::abs(pts[p].y - (last + slope));
        if (d <= tol + 0.5 * std::abs(slope)) cands.push_back({d, o, p});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.d != b.d) return a.d < b.d;
      return a.o != b.o ? a.o < b.o : a.p < b.p;
    });
    std::vector<bool> usedO(open.size(), false), usedP(pts.size(), false);
    std::vector<Open> next;
    for (const Cand& c : cands) {
      if (usedO[c.o] || usedP[c.p]) continue;
      usedO[c.o] = usedP[c.p] = true;
      curves[open[c.o].curve].points.push_back({xs[i], pts[c.p].y});
      next.push_back({open[c.o].curve, i});
    }
    for (size_t p = 0; p < pts.size(); ++p) {
      if (usedP[p]) continue;
      BoundaryCurve c;
      c.kind = pts[p].kind;
      c.points.push_back({xs[i], pts[p].y});
      curves.push_back(std::move(c));
      next.push_back({curves.size() - 1, i});
    }
    open = std::move(next);
  }
  return curves;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  if (n <= 0) return v;
  if (n == 1) return {a};
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

void check_window(const BoundaryTraceOptions& o) {
  if (!(o.x_max > o.x_min) || !(o.beta_max > o.beta_min))
    throw std::invalid_argument("boundary trace: empty parameter window");
  if (o.nx < 2) throw std::invalid_argument("boundary trace: nx must be at least 2");
}

// Crossing values of beta_d for the rectangular constraint at one (mbar, delta).
std::vector<ColumnPoint> rect_beta_column(double mbar, double delta, bool vc, int ntheta) {
  std::vector<ColumnPoint> out;
  const double Dbar = damping_bar(delta), Ceta = dtn_coefficient_eta(delta);
  auto quadAt = [&](double th) {
    const Complex A = std::polar(1.0, th);
    const Complex Cxi = dtn_from_one_minus(xi_rect(A, delta).one_minus_xi);
    return beta_quadratic(A, mbar, Dbar, Ceta, Cxi, vc);
  };
  for (double b : unit_circle_crossings(quadAt, ntheta)) out.push_back({b, "complex"});
  const Quadratic qm = beta_quadratic(Complex(-1.0, 0.0), mbar, Dbar, Ceta, Complex(1.5, 0.0), vc);
  for (double b : real_quadratic_roots(qm.a2.real(), qm.a1.real(), qm.a0.real())) out.push_back({b, "negative-real"});
  out.push_back({(Ceta - mbar) / (4.0 * Dbar), "gamma0"});
  return out;
}

}  // namespace

// ------------------------------------------------------------------- API

std::string to_string(InstabilityRegion r) {
  switch (r) {
    case InstabilityRegion::None: return "none";
    case InstabilityRegion::I: return "I";
    case InstabilityRegion::II: return "II";
    case InstabilityRegion::III: return "III";
    case InstabilityRegion::IV: return "IV";
  }
  return "none";
}

std::string to_string(RootMethod m) { return m == RootMethod::Polynomial ? "polynomial" : "argument_principle"; }

void RectStabilityParams::validate() const {
  if (!(mbar >= 0.0) || !std::isfinite(mbar)) throw std::invalid_argument("RectStabilityParams: mbar must be >= 0");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("RectStabilityParams: delta must be > 0");
  if (!(beta_d >= 0.0) || !std::isfinite(beta_d)) throw std::invalid_argument("RectStabilityParams: beta_d must be >= 0");
}

void AnnularStabilityParams::validate() const {
  if (!(Ibar >= 0.0) || !std::isfinite(Ibar)) throw std::invalid_argument("AnnularStabilityParams: Ibar must be >= 0");
  if (!(delta_tilde > 0.0) || !std::isfinite(delta_tilde))
    throw std::invalid_argument("AnnularStabilityParams: delta_tilde must be > 0");
  if (!(beta_d >= 0.0) || !std::isfinite(beta_d))
    throw std::invalid_argument("AnnularStabilityParams: beta_d must be >= 0");
}

void AnnularGeometry::validate() const {
  if (!(r1 > 0.0) || !(r2 > r1)) throw std::invalid_argument("AnnularGeometry: need 0 < r1 < r2");
  if (!(dr > 0.0) || r1 + 2.0 * dr > r2 * (1.0 + 1e-12))
    throw std::invalid_argument("AnnularGeometry: need dr > 0 and r1 + 2 dr <= r2");
}

AnnularGeometry annular_geometry(const RadialGrid& grid) { return {grid.r1, grid.r2, grid.dr}; }

RectStabilityParams rect_stability_params(const ModelProblemParams& params, const RectGrid& grid,
                                          const RectSchemeConfig& config) {
  params.validate();
  config.validate();
  RectStabilityParams p;
  p.delta = grid.dy / std::sqrt(0.5 * params.nu() * config.dt);
  p.mbar = params.m_b / (params.rho * params.L * grid.dy) * p.delta * p.delta;
  p.beta_d = config.effective_beta();
  return p;
}

AnnularStabilityParams annular_stability_params(const ModelProblemParams& params, const RadialGrid& grid,
                                                const AnnularSchemeConfig& config) {
  params.validate();
  config.validate();
  const AnnularDampingInfo d =
      added_damping_coefficient_annular(params.mu, grid.r1, grid.dr, params.nu(), config.dt, params.rho, params.I_b);
  AnnularStabilityParams p;
  p.delta_tilde = d.delta_tilde;
  p.Ibar = d.Ibar;
  p.beta_d = config.effective_beta();
  return p;
}

double dtn_coefficient_eta(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("dtn_coefficient_eta: delta must be positive");
  const double eta = added_damping_eta(delta);
  const double omx = (0.5 * delta * delta + delta * std::sqrt(1.0 + 0.25 * delta * delta)) * eta;
  return 0.5 * omx * (2.0 + omx);
}

TransferCoefficients transfer_coeffs_rect(Complex A, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("transfer_coeffs_rect: delta must be positive");
  const XiValue x = xi_rect(A, delta);
  TransferCoefficients t;
  t.xi = x.xi;
  t.eta = added_damping_eta(delta);
  t.C_xi = dtn_from_one_minus(x.one_minus_xi);
  t.C_eta = dtn_coefficient_eta(delta);
  return t;
}

TransferCoefficients transfer_coeffs_rect(Complex A, const RectStabilityParams& params) {
  params.validate();
  TransferCoefficients t = transfer_coeffs_rect(A, params.delta);
  const double b = 2.0 * params.beta_d * damping_bar(params.delta);
  t.gamma_b = (b - t.C_xi) * (b - t.C_eta);
  t.gamma_v = (b - t.C_eta) * (b - t.C_eta);
  t.gamma_0 = params.mbar + 2.0 * b - t.C_eta;
  return t;
}

Complex eval_Nb(Complex A, const RectStabilityParams& params) {
  return RectModel(params, SchemeVariant::AMP_NVC)(A);
}

Complex eval_Nv(Complex A, const RectStabilityParams& params) { return RectModel(params, SchemeVariant::AMP_VC)(A); }

Complex eval_constraint_rect(Complex A, const RectStabilityParams& params, SchemeVariant variant) {
  return RectModel(params, variant)(A);
}

double constraint_residual_rect(Complex A, const RectStabilityParams& params, SchemeVariant variant) {
  return RectModel(params, variant).parts(A).residual();
}

std::vector<Complex> rect_constraint_polynomial(const RectStabilityParams& params, SchemeVariant variant) {
  const RectModel m(params, variant);
  const double c = 0.5 * m.delta * m.delta;
  const double b = 2.0 * m.beta * m.Dbar;
  const double k1 = b - m.Ceta;
  const double g0 = m.mbar + 2.0 * b - m.Ceta;
  const Poly am1{-1.0, 1.0}, ap1{1.0, 1.0}, sq{0.0, 0.0, 1.0};
  const Poly cube = pmul(am1, pmul(am1, am1));
  // N = a0 + C_xi a1
  Poly a0, a1;
  if (m.vc) {
    a0 = padd(pscale(cube, k1 * k1), pscale(pmul(am1, sq), g0 * m.mbar));
    a1 = pscale(pmul(ap1, sq), g0);
  } else {
    a0 = padd(pscale(cube, b * k1), pscale(pmul(am1, sq), g0 * m.mbar));
    a1 = padd(pscale(cube, -k1), pscale(pmul(ap1, sq), g0));
  }
  // With u = c(A-1) and w = A+1: w^2 C_xi = u^2 + sqrt(R)(w - u), R = u(2w + u).
  const Poly u = pscale(am1, c);
  const Poly w2 = pmul(ap1, ap1);
  const Poly R = pmul(u, padd(pscale(ap1, 2.0), u));
  const Poly P = padd(pmul(w2, a0), pmul(a1, pmul(u, u)));
  const Poly Q = pmul(a1, padd(ap1, u, -1.0));
  Poly F = padd(pmul(P, P), pmul(R, pmul(Q, Q)), -1.0);
  F = pdeflate(pdeflate(F, 1.0), -1.0);
  double big = 0.0;
  for (double v : F) big = std::max(big, std::abs(v));
  if (big == 0.0) throw NumericalError("rect_constraint_polynomial: polynomial vanishes identically");
  while (F.size() > 1 && std::abs(F.back()) <= 1e-13 * big) F.pop_back();
  std::vector<Complex> out;
  for (auto it = F.rbegin(); it != F.rend(); ++it) out.emplace_back(*it, 0.0);
  return out;
}

namespace {

// With beta_d = 0 and zero mass the leading coefficient vanishes and one root sits at infinity.
void append_root_at_infinity(RootReport& rep, int order) {
  if (order == 3) return;
  rep.roots.push_back({Complex(std::numeric_limits<double>::infinity(), 0.0), 0.0, InstabilityRegion::I});
}

}  // namespace

double RootReport::max_modulus() const {
  double m = 0.0;
  for (const auto& r : roots) m = std::max(m, std::abs(r.A));
  return m;
}

InstabilityRegion classify_instability(Complex root, SchemeVariant variant, const RectStabilityParams& params) {
  const RectModel base(params, variant);
  const ModelAt at = [&](Complex A, double b) {
    RectStabilityParams p = params;
    p.beta_d = b;
    return RectModel(p, variant).parts(A);
  };
  return classify_common(root, variant == SchemeVariant::TP, base.beta, base.gamma0_beta(), at);
}

InstabilityRegion classify_instability_annular(Complex root, SchemeVariant variant,
                                               const AnnularStabilityParams& params, const AnnularGeometry& geom) {
  const AnnularModel base(params, geom, variant);
  const ModelAt at = [&](Complex A, double b) {
    AnnularModel m = base;
    m.beta = b;
    return m.parts(A);
  };
  return classify_common(root, variant == SchemeVariant::TP, base.beta, base.gamma0_beta(), at);
}

RootReport unstable_roots_rect(const RectStabilityParams& params, SchemeVariant variant, RootMethod method,
                               const StabilityOptions& opts) {
  const RectModel m(params, variant);
  const auto f = [&](Complex A) { return m(A); };
  std::vector<Complex> roots;
  if (method == RootMethod::Polynomial) {
    const std::vector<Complex> raw = polynomial_roots(rect_constraint_polynomial(params, variant));
    std::vector<std::pair<Complex, Complex>> kept;  // (raw, polished)
    for (Complex z : raw) {
      if (!finite(z) || std::abs(z) < 1.0 + 0.5 * opts.eps || std::abs(z) > 2.0 * opts.R) continue;
      if (std::abs(z + 1.0) < 1e-12) continue;
      if (m.parts(z).residual() > 1e-4) continue;
      const Complex zp = newton_polish(f, z);
      if (!finite(zp) || std::abs(zp - z) > 1e-3 * std::max(1.0, std::abs(z))) continue;
      if (m.parts(zp).residual() > opts.residual_tol) continue;
      if (std::abs(zp) < 1.0 + opts.eps || std::abs(zp) > opts.R) continue;
      bool duplicate = false;
      for (const auto& [r0, r1] : kept)
        if (std::abs(r1 - zp) <= 1e-9 * std::abs(zp) && std::abs(r0 - z) > 1e-5 * std::abs(z)) duplicate = true;
      if (!duplicate) kept.emplace_back(z, zp);
    }
    for (const auto& kr : kept) roots.push_back(kr.second);
  } else {
    roots = argument_principle_roots([&](Complex A) { return m.parts(A); }, m.growth_order(), opts);
  }
  RootReport rep;
  rep.method = method;
  for (Complex z : roots) rep.roots.push_back({z, m.parts(z).residual(), classify_instability(z, variant, params)});
  append_root_at_infinity(rep, m.growth_order());
  return rep;
}

RootReport unstable_roots_rect(const RectStabilityParams& params, SchemeVariant variant, const StabilityOptions& opts) {
  RootReport poly = unstable_roots_rect(params, variant, RootMethod::Polynomial, opts);
  const RectModel m(params, variant);
  int count = -1;
  try {
    count = annulus_count([&](Complex A) { return m(A); }, m.growth_order(), opts);
  } catch (const ZeroOnContour& e) {
    throw MethodDisagreement(std::string("argument principle failed near the counting contour: ") + e.what());
  }
  if (m.growth_order() == 2) ++count;
  if (count != static_cast<int>(poly.roots.size())) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "unstable_roots_rect: polynomial route found " << poly.roots.size() << " root(s), argument principle counted "
        << count << " (mbar=" << params.mbar << ", delta=" << params.delta << ", beta_d=" << params.beta_d
        << ", variant=" << to_string(variant) << "); parameters are likely near a stability boundary";
    throw MethodDisagreement(msg.str());
  }
  return poly;
}

std::array<Complex, 2> tp_mp_am_amplification(double M_r) {
  if (!(M_r > 0.0)) throw DomainError("tp_mp_am_amplification: M_r must be positive");
  const double m2 = M_r * M_r;
  const Complex s = std::sqrt(Complex(1.0 - m2, 0.0));
  return {(1.0 + s) / m2, (1.0 - s) / m2};
}

// ----------------------------------------------------------------- annular

Complex annular_mode_shape(Complex zeta, double r, const AnnularGeometry& geom) {
  geom.validate();
  const double r1 = geom.r1, r2 = geom.r2;
  if (r < r1 * (1.0 - 1e-14) || r > r2 * (1.0 + 1e-14)) throw DomainError("annular_mode_shape: r outside [r1, r2]");
  if (zeta.real() < 0.0) zeta = -zeta;
  if (zeta == Complex(0.0, 0.0)) return (r2 * r2 / r - r) / (r2 * r2 / r1 - r1);
  const ModifiedBesselPair outer = modifiedBesselScaled(zeta * r2);
  auto numer = [&](double s) {
    const ModifiedBesselPair b = modifiedBesselScaled(zeta * s);
    return std::exp(-2.0 * zeta * (r2 - s)) * b.i1 * outer.k1 - outer.i1 * b.k1;
  };
  return std::exp(-zeta * (r - r1)) * numer(r) / numer(r1);
}

Complex annular_dtn_coefficient(Complex zeta, const AnnularGeometry& geom) {
  const double r1 = geom.r1, h = geom.dr;
  if (!finite(zeta)) return {1.5, 0.0};
  const Complex p1 = annular_mode_shape(zeta, r1 + h, geom);
  const Complex p2 = annular_mode_shape(zeta, r1 + 2.0 * h, geom);
  return 0.5 * r1 * (3.0 / r1 - 4.0 * p1 / (r1 + h) + p2 / (r1 + 2.0 * h));
}

TransferCoefficients transfer_coeffs_annular(Complex A, const AnnularStabilityParams& params,
                                             const AnnularGeometry& geom) {
  const AnnularModel m(params, geom, SchemeVariant::AMP_NVC);
  TransferCoefficients t;
  t.zeta1 = m.zeta1;
  t.zeta2 = m.zeta2(A);
  t.C1_tilde = m.C1;
  t.C2_tilde = annular_dtn_coefficient(t.zeta2, geom);
  const double b = 2.0 * m.beta * m.Dbar;
  t.gamma_b = (b - t.C2_tilde) * (b - t.C1_tilde);
  t.gamma_v = (b - t.C1_tilde) * (b - t.C1_tilde);
  t.gamma_0 = m.Ibar + 2.0 * b - t.C1_tilde;
  return t;
}

Complex eval_Nb_annular(Complex A, const AnnularStabilityParams& params, const AnnularGeometry& geom) {
  return AnnularModel(params, geom, SchemeVariant::AMP_NVC)(A);
}

Complex eval_Nv_annular(Complex A, const AnnularStabilityParams& params, const AnnularGeometry& geom) {
  return AnnularModel(params, geom, SchemeVariant::AMP_VC)(A);
}

Complex eval_constraint_annular(Complex A, const AnnularStabilityParams& params, const AnnularGeometry& geom,
                                SchemeVariant variant) {
  return AnnularModel(params, geom, variant)(A);
}

RootReport unstable_roots_annular(const AnnularStabilityParams& params, const AnnularGeometry& geom,
                                  SchemeVariant variant, const StabilityOptions& opts) {
  const AnnularModel m(params, geom, variant);
  const std::vector<Complex> roots =
      argument_principle_roots([&](Complex A) { return m.parts(A); }, m.growth_order(), opts);
  RootReport rep;
  rep.method = RootMethod::ArgumentPrinciple;
  for (Complex z : roots)
    rep.roots.push_back({z, m.parts(z).residual(), classify_instability_annular(z, variant, params, geom)});
  append_root_at_infinity(rep, m.growth_order());
  return rep;
}

// ---------------------------------------------------------------- tracing

std::vector<double> tp_boundary_mbar(double delta, int ntheta) {
  if (!(delta > 0.0)) throw std::invalid_argument("tp_boundary_mbar: delta must be positive");
  const double Ceta = dtn_coefficient_eta(delta);
  auto quadAt = [&](double th) {
    const Complex A = std::polar(1.0, th);
    return mass_quadratic(A, Ceta, dtn_from_one_minus(xi_rect(A, delta).one_minus_xi));
  };
  std::vector<double> v;
  for (double m : unit_circle_crossings(quadAt, ntheta))
    if (m >= 0.0) v.push_back(m);
  const Quadratic qm = mass_quadratic(Complex(-1.0, 0.0), Ceta, Complex(1.5, 0.0));
  for (double m : real_quadratic_roots(qm.a2.real(), qm.a1.real(), qm.a0.real()))
    if (m >= 0.0) v.push_back(m);
  v.push_back(Ceta);
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double m : v)
    if (out.empty() || std::abs(m - out.back()) > 1e-10 * std::max(1.0, m)) out.push_back(m);
  return out;
}

double tp_threshold_mbar(double delta) {
  const std::vector<double> b = tp_boundary_mbar(delta);
  return b.back();
}

std::vector<BoundaryCurve> trace_boundary_rect(FixedParameter fixed, double value, SchemeVariant variant,
                                               const BoundaryTraceOptions& opts) {
  check_window(opts);
  const bool tp = variant == SchemeVariant::TP;
  const bool deltaFree = tp || fixed == FixedParameter::Mass;
  if (!tp) {
    if (fixed == FixedParameter::Delta && !(value > 0.0))
      throw std::invalid_argument("trace_boundary_rect: delta must be positive");
    if (fixed == FixedParameter::Mass && !(value >= 0.0))
      throw std::invalid_argument("trace_boundary_rect: mbar must be >= 0");
  }
  const double xlo = deltaFree ? std::max(opts.x_min, 1e-2) : std::max(opts.x_min, 0.0);
  if (!(opts.x_max > xlo)) throw std::invalid_argument("trace_boundary_rect: empty parameter window");
  const std::vector<double> xs = linspace(xlo, opts.x_max, opts.nx);
  std::vector<std::vector<ColumnPoint>> cols(xs.size());
  parallel_for(
      xs.size(),
      [&](size_t i) {
        std::vector<ColumnPoint> pts;
        if (tp) {
          for (double m : tp_boundary_mbar(xs[i], opts.ntheta))
            pts.push_back({m, std::abs(m - dtn_coefficient_eta(xs[i])) < 1e-12 ? "gamma0" : "complex"});
        } else {
          const double mbar = deltaFree ? value : xs[i];
          const double delta = deltaFree ? xs[i] : value;
          pts = rect_beta_column(mbar, delta, variant == SchemeVariant::AMP_VC, opts.ntheta);
        }
        std::vector<ColumnPoint> kept;
        for (const auto& p : pts)
          if (p.y >= opts.beta_min && p.y <= opts.beta_max) kept.push_back(p);
        cols[i] = std::move(kept);
      },
      opts.threads);
  return link_columns(xs, cols, opts.beta_min, opts.beta_max);
}

namespace {

struct AnnularPlane {
  FixedParameter fixed;
  double value;
  SchemeVariant variant;
  AnnularGeometry geom;

  // Free coordinates (x, y): (Ibar, beta) for fixed delta~, (delta~, beta) for fixed Ibar, (delta~, Ibar) for TP.
  AnnularStabilityParams params(double x, double y) const {
    AnnularStabilityParams p;
    if (variant == SchemeVariant::TP) {
      p.delta_tilde = x;
      p.Ibar = y;
      p.beta_d = 0.0;
    } else if (fixed == FixedParameter::Delta) {
      p.delta_tilde = value;
      p.Ibar = x;
      p.beta_d = y;
    } else {
      p.delta_tilde = x;
      p.Ibar = value;
      p.beta_d = y;
    }
    return p;
  }
  // Continuation may probe slightly outside the physical window.
  AnnularModel model(double x, double y, bool check = true) const {
    return AnnularModel(params(x, y), geom, variant, check);
  }
};

}  // namespace

std::vector<BoundaryCurve> trace_boundary_annular(FixedParameter fixed, double value, SchemeVariant variant,
                                                  const AnnularGeometry& geom, const BoundaryTraceOptions& opts) {
  check_window(opts);
  geom.validate();
  const bool tp = variant == SchemeVariant::TP;
  const bool deltaFree = tp || fixed == FixedParameter::Mass;
  if (!tp) {
    if (fixed == FixedParameter::Delta && !(value > 0.0))
      throw std::invalid_argument("trace_boundary_annular: delta_tilde must be positive");
    if (fixed == FixedParameter::Mass && !(value >= 0.0))
      throw std::invalid_argument("trace_boundary_annular: Ibar must be >= 0");
  }
  const AnnularPlane plane{fixed, value, variant, geom};
  const double xlo = deltaFree ? std::max(opts.x_min, 1e-2) : std::max(opts.x_min, 0.0);
  const double xhi = opts.x_max, ylo = std::max(opts.beta_min, 0.0), yhi = opts.beta_max;
  if (!(xhi > xlo) || !(yhi > ylo)) throw std::invalid_argument("trace_boundary_annular: empty parameter window");
  const double sx = xhi - xlo, sy = yhi - ylo;
  const StabilityOptions& ro = opts.roots;

  // Explicit real crossings at A = 1 (gamma_0 = 0) and A = -1.
  const std::vector<double> xs = linspace(xlo, xhi, opts.nx);
  std::vector<std::vector<ColumnPoint>> cols(xs.size());
  const int nyScan = 400;
  parallel_for(
      xs.size(),
      [&](size_t i) {
        const double x = xs[i];
        auto g0 = [&](double y) {
          const AnnularModel m = plane.model(x, y);
          return m.Ibar + 4.0 * m.beta * m.Dbar - m.C1;
        };
        auto nm1 = [&](double y) {
          const AnnularModel m = plane.model(x, y);
          const double b = 2.0 * m.beta * m.Dbar;
          const double gb = m.vc ? (b - m.C1) * (b - m.C1) : (b - 1.5) * (b - m.C1);
          return -8.0 * gb - 2.0 * m.Ibar * (m.Ibar + 2.0 * b - m.C1);
        };
        const std::pair<std::function<double(double)>, std::string> fns[] = {{g0, "gamma0"}, {nm1, "negative-real"}};
        for (const auto& [fn, kind] : fns) {
          double yprev = ylo, fprev = fn(ylo);
          if (fprev == 0.0) cols[i].push_back({ylo, kind});
          for (int k = 1; k <= nyScan; ++k) {
            const double y = ylo + sy * k / nyScan;
            const double fy = fn(y);
            if (fy == 0.0) {
              cols[i].push_back({y, kind});
            } else if (fprev * fy < 0.0) {
              cols[i].push_back({find_root_bracketed(fn, yprev, y), kind});
            }
            yprev = y;
            fprev = fy;
          }
        }
      },
      opts.threads);
  std::vector<BoundaryCurve> curves = link_columns(xs, cols, ylo, yhi);

  // Coarse count sweep.
  const int cnx = std::max(2, opts.coarse_nx), cny = std::max(2, opts.coarse_nbeta);
  const std::vector<double> cxs = linspace(xlo, xhi, cnx), cys = linspace(ylo, yhi, cny);
  auto countAt = [&](double x, double y) -> int {
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double yy = attempt == 0 ? y : y + 1e-9 * attempt * sy;
      try {
        const AnnularModel m = plane.model(x, yy);
        return annulus_count([&](Complex A) { return m(A); }, m.growth_order(), ro);
      } catch (const ZeroOnContour&) {
      }
    }
    throw NumericalError("trace_boundary_annular: zero on the counting contour");
  };
  std::vector<int> counts(static_cast<size_t>(cnx * cny));
  parallel_for(
      counts.size(), [&](size_t k) { counts[k] = countAt(cxs[k / cny], cys[k % cny]); }, opts.threads);
  auto cnt = [&](int i, int j) { return counts[static_cast<size_t>(i * cny + j)]; };

  struct Seed {
    double x, y;  // on the side with more roots
    bool alongY;
  };
  std::vector<Seed> seeds;
  auto bisect = [&](double xa, double ya, int ca, double xb, double yb, int cb, bool alongY) {
    for (int it = 0; it < 30; ++it) {
      const double xm = 0.5 * (xa + xb), ym = 0.5 * (ya + yb);
      const int cm = countAt(xm, ym);
      if (cm == ca) {
        xa = xm;
        ya = ym;
      } else {
        xb = xm;
        yb = ym;
        cb = cm;
      }
      if (std::abs(xb - xa) < 1e-7 * sx && std::abs(yb - ya) < 1e-7 * sy) break;
    }
    if (cb > ca) seeds.push_back({xb, yb, alongY});
    else seeds.push_back({xa, ya, alongY});
  };
  for (int i = 0; i < cnx; ++i)
    for (int j = 0; j < cny; ++j) {
      if (j + 1 < cny && cnt(i, j) != cnt(i, j + 1)) bisect(cxs[i], cys[j], cnt(i, j), cxs[i], cys[j + 1], cnt(i, j + 1), true);
      if (i + 1 < cnx && cnt(i, j) != cnt(i + 1, j))
        bisect(cxs[i], cys[j], cnt(i, j), cxs[i + 1], cys[j], cnt(i + 1, j), false);
    }

  // Continuation of N(e^{i theta}; x, y) = 0 in scaled coordinates (X, Y, theta / pi).
  using V3 = Eigen::Vector3d;
  auto toPhys = [&](const V3& u) { return std::array<double, 3>{xlo + sx * u(0), ylo + sy * u(1), kPi * u(2)}; };
  auto residualVec = [&](const V3& u, double scale) {
    const auto p = toPhys(u);
    try {
      const Complex v = plane.model(p[0], p[1], false)(std::polar(1.0, p[2])) / scale;
      return Eigen::Vector2d(v.real(), v.imag());
    } catch (const std::exception&) {
      return Eigen::Vector2d(kNaN, kNaN);
    }
  };
  auto jacobian = [&](const V3& u, double scale) {
    Eigen::Matrix<double, 2, 3> J;
    const double h = 1e-7;
    for (int k = 0; k < 3; ++k) {
      V3 up = u, um = u;
      up(k) += h;
      um(k) -= h;
      J.col(k) = (residualVec(up, scale) - residualVec(um, scale)) / (2.0 * h);
    }
    return J;
  };
  auto scaleAt = [&](const V3& u) {
    const auto p = toPhys(u);
    try {
      const Parts pr = plane.model(p[0], p[1], false).parts(std::polar(1.0, p[2]));
      return pr.scale > 0.0 ? pr.scale : 1.0;
    } catch (const std::exception&) {
      return 1.0;
    }
  };
  auto tangent = [&](const V3& u, double scale) {
    const Eigen::Matrix<double, 2, 3> J = jacobian(u, scale);
    V3 t = V3(J.row(0).transpose()).cross(V3(J.row(1).transpose()));
    const double n = t.norm();
    if (!(n > 0.0) || !std::isfinite(n)) return std::optional<V3>{};
    return std::optional<V3>{t / n};
  };
  auto insideWindow = [&](const V3& u) {
    return u(0) >= -1e-12 && u(0) <= 1.0 + 1e-12 && u(1) >= -1e-12 && u(1) <= 1.0 + 1e-12 && u(2) > 1e-7 &&
           u(2) < 1.0 - 1e-7;
  };

  struct Branch {
    std::vector<V3> pts;
    bool truncated = false;
  };
  auto follow = [&](const V3& u0, const V3& t0) {
    Branch br;
    V3 u = u0, t = t0;
    double h = opts.step;
    while (static_cast<int>(br.pts.size()) < opts.max_points) {
      const V3 up = u + h * t;
      const double scale = scaleAt(up);
      V3 v = up;
      bool ok = false;
      int iters = 0;
      for (; iters < 12; ++iters) {
        Eigen::Matrix3d M;
        M.topRows<2>() = jacobian(v, scale);
        M.row(2) = t.transpose();
        Eigen::Vector3d rhs;
        rhs.head<2>() = -residualVec(v, scale);
        rhs(2) = -t.dot(v - up);
        const V3 dv = M.colPivHouseholderQr().solve(rhs);
        if (!dv.allFinite()) break;
        v += dv;
        if (dv.norm() < 1e-11 && residualVec(v, scale).norm() < 1e-9) {
          ok = true;
          break;
        }
      }
      if (!ok || (v - u).norm() > 2.0 * h) {
        h *= 0.5;
        if (h < 1e-6 * opts.step) {
          br.truncated = true;
          break;
        }
        continue;
      }
      const auto tn = tangent(v, scale);
      if (!tn) {
        br.truncated = true;
        break;
      }
      V3 tt = *tn;
      if (tt.dot(t) < 0.0) tt = -tt;
      u = v;
      t = tt;
      if (!insideWindow(u)) break;
      br.pts.push_back(u);
      if (br.pts.size() > 5 && (u - u0).norm() < h) break;
      if (iters <= 3) h = std::min(1.5 * h, opts.step);
    }
    if (static_cast<int>(br.pts.size()) >= opts.max_points) br.truncated = true;
    return br;
  };

  std::vector<std::vector<V3>> traced;
  for (const Seed& s : seeds) {
    const V3 sScaled((s.x - xlo) / sx, (s.y - ylo) / sy, 0.0);
    bool known = false;
    for (const auto& c : traced)
      for (const V3& p : c)
        if ((p.head<2>() - sScaled.head<2>()).norm() < 3.0 * opts.step) known = true;
    if (known) continue;

    // Root that just crossed the counting circle.
    const AnnularModel m = plane.model(s.x, s.y);
    std::vector<Complex> roots;
    try {
      roots = argument_principle_roots([&](Complex A) { return m.parts(A); }, m.growth_order(), ro);
    } catch (const NumericalError&) {
      continue;
    }
    if (roots.empty()) continue;
    Complex best = roots.front();
    for (Complex z : roots)
      if (std::abs(std::abs(z) - (1.0 + ro.eps)) < std::abs(std::abs(best) - (1.0 + ro.eps))) best = z;
    if (std::abs(std::abs(best) - (1.0 + ro.eps)) > 1e-2) continue;
    if (std::abs(best.imag()) < 1e-6 * std::abs(best)) continue;  // real crossing, covered by the explicit branches
    const double th = std::abs(std::arg(best));

    // Correct onto |A| = 1 holding the coordinate that was not bisected.
    V3 u(sScaled(0), sScaled(1), th / kPi);
    const int fixedIdx = s.alongY ? 0 : 1;
    const double scale = scaleAt(u);
    bool ok = false;
    for (int it = 0; it < 30; ++it) {
      const Eigen::Matrix<double, 2, 3> J = jacobian(u, scale);
      Eigen::Matrix2d M;
      const int free0 = fixedIdx == 0 ? 1 : 0;
      M.col(0) = J.col(free0);
      M.col(1) = J.col(2);
      const Eigen::Vector2d d = M.colPivHouseholderQr().solve(-residualVec(u, scale));
      if (!d.allFinite()) break;
      u(free0) += d(0);
      u(2) += d(1);
      if (d.norm() < 1e-12 && residualVec(u, scale).norm() < 1e-9) {
        ok = true;
        break;
      }
    }
    if (!ok || !insideWindow(u)) continue;
    const auto t0 = tangent(u, scale);
    if (!t0) continue;
    const Branch fwd = follow(u, *t0);
    const Branch bwd = follow(u, -*t0);
    std::vector<V3> all(bwd.pts.rbegin(), bwd.pts.rend());
    all.push_back(u);
    all.insert(all.end(), fwd.pts.begin(), fwd.pts.end());
    BoundaryCurve c;
    c.kind = "complex";
    c.truncated = fwd.truncated || bwd.truncated;
    for (const V3& p : all) {
      const auto q = toPhys(p);
      c.points.push_back({q[0], q[1]});
    }
    traced.push_back(std::move(all));
    curves.push_back(std::move(c));
  }
  return curves;
}

}  // namespace amprb
