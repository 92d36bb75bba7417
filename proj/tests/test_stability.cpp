#include <doctest.h>

#include "oracles.hpp"

#include "amprb/stability.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

using namespace amprb;
using namespace amprb::testing;

namespace {

constexpr double kPi = std::numbers::pi;

size_t count_rect(double mbar, double delta, double beta, SchemeVariant v, double eps = 1e-6) {
  StabilityOptions o;
  o.eps = eps;
  return unstable_roots_rect({mbar, delta, beta}, v, RootMethod::Polynomial, o).roots.size();
}

size_t count_annular(double Ibar, double delta, double beta, SchemeVariant v, const AnnularGeometry& g,
                     double eps = 1e-6) {
  StabilityOptions o;
  o.eps = eps;
  return unstable_roots_annular({Ibar, delta, beta}, g, v, o).roots.size();
}

bool has_region(const RootReport& r, InstabilityRegion region) {
  for (const auto& root : r.roots)
    if (root.region == region) return true;
  return false;
}

}  // namespace

TEST_CASE("rect transfer coefficients") {
  SUBCASE("large A gives xi -> eta") {
    for (double delta : {0.05, 0.5, 2.0}) {
      const auto t = transfer_coeffs_rect(Complex(1e12, 0.0), delta);
      CHECK(std::abs(t.xi - t.eta) < 1e-9);
      CHECK(std::abs(t.C_xi - t.C_eta) < 1e-9);
    }
  }
  SUBCASE("A = 1") {
    const auto t = transfer_coeffs_rect(Complex(1.0, 0.0), 0.7);
    CHECK(std::abs(t.xi - 1.0) < 1e-15);
    CHECK(std::abs(t.C_xi) < 1e-15);
  }
  SUBCASE("C_eta asymptotics") {
    CHECK(dtn_coefficient_eta(1e-4) == doctest::Approx(1e-4).epsilon(1e-3));
    CHECK(dtn_coefficient_eta(1e3) == doctest::Approx(1.5).epsilon(1e-6));
    const double e = transfer_coeffs_rect(Complex(2.0, 0.0), 0.5).eta;
    CHECK(e > 0.0);
    CHECK(e < 1.0);
    CHECK(dtn_coefficient_eta(0.5) == doctest::Approx(0.5 * (3.0 - 4.0 * e + e * e)).epsilon(1e-14));
  }
  SUBCASE("A = -1 is a pole") { CHECK_THROWS_AS(transfer_coeffs_rect(Complex(-1.0, 0.0), 0.5), DomainError); }
  SUBCASE("branch guard") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-4.0, 4.0), d(0.01, 5.0);
    for (int k = 0; k < 500; ++k) {
      const Complex A(u(rng), u(rng));
      const double delta = d(rng);
      const auto t = transfer_coeffs_rect(A, delta);
      const Complex q = 1.0 + 0.5 * delta * delta * (A - 1.0) / (A + 1.0);
      CHECK(std::abs(t.xi) <= 1.0 + 1e-12);
      CHECK(std::abs(t.xi * t.xi - 2.0 * q * t.xi + 1.0) < 1e-10 * std::max(1.0, std::abs(q)));
      // The other root of xi^2 - 2 q xi + 1 is 1 / xi.
      CHECK(std::abs(1.0 / t.xi) >= 1.0 - 1e-12);
      CHECK(std::abs(t.C_xi - 0.5 * (3.0 - 4.0 * t.xi + t.xi * t.xi)) < 1e-12);
    }
  }
}

TEST_CASE("rect constraint functions") {
  SUBCASE("N(1) = 0 for random parameters") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> m(0.0, 10.0), d(0.01, 5.0), b(0.0, 10.0);
    for (int k = 0; k < 100; ++k) {
      const RectStabilityParams p{m(rng), d(rng), b(rng)};
      CHECK(std::abs(eval_Nb(Complex(1.0, 0.0), p)) < 1e-14);
      CHECK(std::abs(eval_Nv(Complex(1.0, 0.0), p)) < 1e-14);
    }
  }
  SUBCASE("gamma factors vanish when 2 beta Dbar = C_eta") {
    const double delta = 0.5, mbar = 0.3;
    const double Dbar = 1.0 - std::exp(-delta);
    const RectStabilityParams p{mbar, delta, dtn_coefficient_eta(delta) / (2.0 * Dbar)};
    const Complex A(0.3, 1.7);
    const auto t = transfer_coeffs_rect(A, p);
    CHECK(std::abs(t.gamma_b) < 1e-14);
    CHECK(std::abs(t.gamma_v) < 1e-14);
    const Complex bracket = t.gamma_0 * (mbar * (A - 1.0) + t.C_xi * (A + 1.0)) * A * A;
    CHECK(std::abs(eval_Nv(A, p) - bracket) < 1e-13);
    CHECK(std::abs(eval_Nb(A, p) - bracket) < 1e-13);
  }
  SUBCASE("explicit formula") {
    const RectStabilityParams p{0.7, 0.4, 1.3};
    const Complex A(-0.4, 2.1);
    const auto t = transfer_coeffs_rect(A, p);
    const double Dbar = 1.0 - std::exp(-0.4), b = 2.0 * 1.3 * Dbar;
    const Complex gb = (b - t.C_xi) * (b - t.C_eta);
    const double g0 = 0.7 + 4.0 * 1.3 * Dbar - t.C_eta;
    const Complex nb = gb * std::pow(A - 1.0, 3) + g0 * (0.7 * (A - 1.0) + t.C_xi * (A + 1.0)) * A * A;
    CHECK(std::abs(eval_Nb(A, p) - nb) < 1e-12 * std::abs(nb));
    CHECK(std::abs(eval_constraint_rect(A, p, SchemeVariant::AMP_NVC) - nb) < 1e-12 * std::abs(nb));
    RectStabilityParams tp = p;
    tp.beta_d = 0.0;
    CHECK(eval_constraint_rect(A, p, SchemeVariant::TP) == eval_Nb(A, tp));
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(eval_Nb(Complex(2.0, 0.0), {-1.0, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(eval_Nb(Complex(2.0, 0.0), {0.0, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(eval_Nb(Complex(2.0, 0.0), {0.0, 0.5, -1.0}), std::invalid_argument);
  }
}

TEST_CASE("degree-eight polynomial contains the constraint roots") {
  for (auto v : {SchemeVariant::AMP_NVC, SchemeVariant::AMP_VC, SchemeVariant::TP}) {
    const RectStabilityParams p{0.2, 0.5, 20.0};
    const auto poly = rect_constraint_polynomial(p, v);
    REQUIRE(poly.size() == 9);
    CHECK(std::abs(poly.front()) > 0.0);
    const auto rep = unstable_roots_rect(p, v, RootMethod::Polynomial);
    for (const auto& r : rep.roots) {
      double scale = 0.0;
      for (size_t k = 0; k < poly.size(); ++k) scale += std::abs(poly[k]) * std::pow(std::abs(r.A), 8.0 - k);
      CHECK(std::abs(polyval(poly, r.A)) < 1e-9 * scale);
    }
  }
}

TEST_CASE("rect unstable roots") {
  SUBCASE("NVC at delta 0.5, mbar 0") {
    const RectStabilityParams p{0.0, 0.5, 3.0};
    CHECK(unstable_roots_rect(p, SchemeVariant::AMP_NVC).stable());

    const auto low = unstable_roots_rect({0.0, 0.5, 0.1}, SchemeVariant::AMP_NVC);
    CHECK(low.verdict() == "unstable");
    CHECK((has_region(low, InstabilityRegion::I) || has_region(low, InstabilityRegion::II)));
    REQUIRE(low.roots.size() == 1);
    CHECK(low.roots[0].A.real() == doctest::Approx(99.69574).epsilon(1e-6));

    const auto high = unstable_roots_rect({0.0, 0.5, 20.0}, SchemeVariant::AMP_NVC);
    CHECK_FALSE(high.stable());
    CHECK(has_region(high, InstabilityRegion::IV));
  }
  SUBCASE("VC is stable near beta 1") {
    CHECK(unstable_roots_rect({5.0, 0.5, 1.0}, SchemeVariant::AMP_VC).stable());
    for (double m : {0.0, 1.0, 100.0})
      for (double d : {0.05, 0.5, 5.0}) CHECK(unstable_roots_rect({m, d, 1.0}, SchemeVariant::AMP_VC).stable());
  }
  SUBCASE("NVC narrow gap at small delta") {
    CHECK_FALSE(unstable_roots_rect({0.0, 0.05, 0.3}, SchemeVariant::AMP_NVC).stable());
    CHECK_FALSE(unstable_roots_rect({0.0, 0.05, 0.8}, SchemeVariant::AMP_NVC).stable());
    // The stable window sits at beta in roughly [0.434, 0.512]; beyond it a root A < -1 appears.
    for (double b : {0.44, 0.47, 0.5}) CHECK(unstable_roots_rect({0.0, 0.05, b}, SchemeVariant::AMP_NVC).stable());
    const auto r = unstable_roots_rect({0.0, 0.05, 0.54}, SchemeVariant::AMP_NVC);
    REQUIRE(r.roots.size() == 1);
    CHECK(r.roots[0].region == InstabilityRegion::III);
    CHECK(r.roots[0].A.real() == doctest::Approx(-1.23535).epsilon(1e-4));
  }
  SUBCASE("TP around the threshold") {
    CHECK_FALSE(unstable_roots_rect({0.6, 0.5, 1.0}, SchemeVariant::TP).stable());
    CHECK(unstable_roots_rect({0.7, 0.5, 1.0}, SchemeVariant::TP).stable());
  }
  SUBCASE("degenerate TP corner has a root at infinity") {
    for (auto m : {RootMethod::Polynomial, RootMethod::ArgumentPrinciple}) {
      const auto r = unstable_roots_rect({0.0, 0.5, 0.0}, SchemeVariant::TP, m);
      REQUIRE_FALSE(r.stable());
      CHECK(std::isinf(r.max_modulus()));
    }
  }
  SUBCASE("report invariants") {
    for (double b : {0.05, 0.3, 1.0, 8.0, 40.0}) {
      const auto r = unstable_roots_rect({0.1, 0.3, b}, SchemeVariant::AMP_NVC);
      for (const auto& root : r.roots) {
        CHECK(std::abs(root.A) > 1.0);
        CHECK(root.residual < 1e-8);
        CHECK(root.region != InstabilityRegion::None);
      }
    }
  }
}

TEST_CASE("polynomial and argument-principle routes agree on a lattice") {
  int compared = 0;
  for (double delta : {0.1, 0.5, 2.0})
    for (int i = 0; i < 15; ++i)
      for (int j = 0; j < 15; ++j)
        for (auto v : {SchemeVariant::AMP_NVC, SchemeVariant::AMP_VC}) {
          const RectStabilityParams p{5.0 * i / 14.0, delta, 6.0 * j / 14.0};
          const auto a = unstable_roots_rect(p, v, RootMethod::Polynomial);
          const auto b = unstable_roots_rect(p, v, RootMethod::ArgumentPrinciple);
          CHECK(a.roots.size() == b.roots.size());
          ++compared;
        }
  CHECK(compared == 2 * 3 * 15 * 15);
}

TEST_CASE("classification") {
  const RectStabilityParams p{0.0, 0.5, 20.0};
  CHECK(classify_instability(Complex(1.5, 0.0), SchemeVariant::AMP_NVC, p) == InstabilityRegion::I);
  CHECK(classify_instability(Complex(-1.2, 0.0), SchemeVariant::AMP_NVC, p) == InstabilityRegion::III);
  CHECK(classify_instability(Complex(1.01, 0.3), SchemeVariant::AMP_NVC, p) == InstabilityRegion::IV);
  CHECK(classify_instability(Complex(0.5, 0.5), SchemeVariant::AMP_NVC, p) == InstabilityRegion::None);
  // Complex roots at small beta are under-stabilized.
  const auto r = unstable_roots_rect({0.0, 0.05, 0.3}, SchemeVariant::AMP_NVC);
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[0].region == InstabilityRegion::II);
  CHECK(to_string(InstabilityRegion::IV) == "IV");
}

TEST_CASE("TP MP-AM amplification factors") {
  auto one = tp_mp_am_amplification(1.0);
  CHECK(std::abs(one[0] - 1.0) < 1e-7);
  CHECK(std::abs(one[1] - 1.0) < 1e-7);
  for (Complex a : tp_mp_am_amplification(2.0)) CHECK(std::abs(a) == doctest::Approx(0.5));
  const auto half = tp_mp_am_amplification(0.5);
  CHECK(std::max(std::abs(half[0]), std::abs(half[1])) == doctest::Approx((1.0 + std::sqrt(0.75)) / 0.25));
  CHECK_THROWS(tp_mp_am_amplification(0.0));
}

TEST_CASE("TP boundary follows the fitted law") {
  CHECK(tp_threshold_mbar(0.5) == doctest::Approx(1.405 * 0.46659).epsilon(0.01));
  for (int k = 0; k <= 20; ++k) {
    const double delta = 0.05 * std::pow(100.0, k / 20.0);
    const double m = tp_threshold_mbar(delta);
    CHECK(std::abs(m - 1.405 * dtn_coefficient_eta(delta)) / m <= 0.05);
    CHECK(count_rect(m * 1.02, delta, 0.0, SchemeVariant::TP) == 0);
    CHECK(count_rect(m * 0.98, delta, 0.0, SchemeVariant::TP) > 0);
  }
}

TEST_CASE("rect boundary tracing") {
  BoundaryTraceOptions o;
  SUBCASE("boundary points separate different root counts") {
    for (auto v : {SchemeVariant::AMP_NVC, SchemeVariant::AMP_VC}) {
      const auto curves = trace_boundary_rect(FixedParameter::Delta, 0.5, v, o);
      REQUIRE_FALSE(curves.empty());
      int checked = 0;
      for (const auto& c : curves)
        for (size_t i = 0; i < c.points.size(); i += 3) {
          const auto [m, b] = c.points[i];
          if (m < 2e-3 || b < 2e-3) continue;
          const bool changesInBeta =
              count_rect(m, 0.5, b - 1e-3, v) != count_rect(m, 0.5, b + 1e-3, v);
          const bool changesInMass =
              count_rect(m - 1e-3, 0.5, b, v) != count_rect(m + 1e-3, 0.5, b, v);
          CHECK((changesInBeta || changesInMass));
          ++checked;
        }
      CHECK(checked > 5);
    }
  }
  SUBCASE("gamma0 branch") {
    const auto curves = trace_boundary_rect(FixedParameter::Delta, 0.5, SchemeVariant::AMP_NVC, o);
    const double Dbar = 1.0 - std::exp(-0.5);
    bool found = false;
    for (const auto& c : curves) {
      if (c.kind != "gamma0") continue;
      found = true;
      for (const auto& [m, b] : c.points) CHECK(b == doctest::Approx((dtn_coefficient_eta(0.5) - m) / (4.0 * Dbar)));
    }
    CHECK(found);
  }
  SUBCASE("delta-free plane") {
    BoundaryTraceOptions od;
    od.x_min = 0.05;
    od.x_max = 2.0;
    od.nx = 40;
    const auto curves = trace_boundary_rect(FixedParameter::Mass, 0.0, SchemeVariant::AMP_NVC, od);
    REQUIRE_FALSE(curves.empty());
    for (const auto& c : curves)
      for (size_t i = 0; i < c.points.size(); i += 4) {
        const auto [d, b] = c.points[i];
        if (b < 2e-3) continue;
        const bool changes = count_rect(0.0, d, b - 1e-3, SchemeVariant::AMP_NVC) !=
                                 count_rect(0.0, d, b + 1e-3, SchemeVariant::AMP_NVC) ||
                             count_rect(0.0, d - 1e-3, b, SchemeVariant::AMP_NVC) !=
                                 count_rect(0.0, d + 1e-3, b, SchemeVariant::AMP_NVC);
        CHECK(changes);
      }
  }
  SUBCASE("TP plane") {
    BoundaryTraceOptions ot;
    ot.x_min = 0.1;
    ot.x_max = 0.9;
    ot.nx = 9;
    ot.beta_max = 3.0;
    const auto curves = trace_boundary_rect(FixedParameter::Delta, 0.0, SchemeVariant::TP, ot);
    double best = 1e300;
    for (const auto& c : curves)
      for (const auto& [d, m] : c.points)
        if (std::abs(d - 0.5) < 1e-12) best = std::min(best, std::abs(m - tp_threshold_mbar(0.5)));
    CHECK(best < 1e-6);
  }
  SUBCASE("stable window gives no curves") {
    BoundaryTraceOptions s;
    s.x_min = 1.0;
    s.x_max = 3.0;
    s.beta_min = 0.9;
    s.beta_max = 1.1;
    CHECK(trace_boundary_rect(FixedParameter::Delta, 0.5, SchemeVariant::AMP_VC, s).empty());
  }
  SUBCASE("thread count does not change the result") {
    BoundaryTraceOptions a = o, b = o;
    a.threads = 1;
    b.threads = 4;
    const auto ca = trace_boundary_rect(FixedParameter::Delta, 0.5, SchemeVariant::AMP_NVC, a);
    const auto cb = trace_boundary_rect(FixedParameter::Delta, 0.5, SchemeVariant::AMP_NVC, b);
    REQUIRE(ca.size() == cb.size());
    for (size_t k = 0; k < ca.size(); ++k) CHECK(ca[k].points == cb[k].points);
  }
  SUBCASE("bad window") {
    BoundaryTraceOptions bad;
    bad.beta_max = -1.0;
    CHECK_THROWS_AS(trace_boundary_rect(FixedParameter::Delta, 0.5, SchemeVariant::AMP_NVC, bad),
                    std::invalid_argument);
    CHECK_THROWS_AS(trace_boundary_rect(FixedParameter::Delta, 0.0, SchemeVariant::AMP_NVC), std::invalid_argument);
  }
}

TEST_CASE("annular mode shape and DtN coefficient") {
  const AnnularGeometry g;
  SUBCASE("boundary values") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 50; ++k) {
      const AnnularStabilityParams p{0.1, 0.5, 1.0};
      const Complex A(u(rng), u(rng));
      const auto t = transfer_coeffs_annular(A, p, g);
      CHECK(t.zeta2.real() >= 0.0);
      for (Complex z : {Complex(t.zeta1, 0.0), t.zeta2}) {
        CHECK(std::abs(annular_mode_shape(z, g.r1, g) - 1.0) < 1e-12);
        CHECK(std::abs(annular_mode_shape(z, g.r2, g)) < 1e-12);
      }
    }
  }
  SUBCASE("agrees with a collocation solution of the radial problem") {
    for (Complex z : {Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(20.0, 0.0), Complex(13.017, 3.073),
                      Complex(4.0, -6.0), Complex(60.0, 20.0)}) {
      const ChebyshevShape cheb(z, g.r1, g.r2, 160);
      for (double r : {1.0, 1.025, 1.05, 1.3, 1.9})
        CHECK(std::abs(annular_mode_shape(z, r, g) - cheb(r)) < 1e-9);
      const Complex ref = dtn_from_shape([&](double r) { return cheb(r); }, g);
      CHECK(std::abs(annular_dtn_coefficient(z, g) - ref) < 1e-8);
    }
  }
  SUBCASE("coefficients at the default geometry") {
    const auto t = transfer_coeffs_annular(Complex(2.0, 0.0), {0.0, 0.5, 1.0}, g);
    CHECK(t.zeta1 == doctest::Approx(20.0));
    const ChebyshevShape c1(Complex(20.0, 0.0), g.r1, g.r2, 160);
    CHECK(std::abs(t.C1_tilde - dtn_from_shape([&](double r) { return c1(r); }, g)) < 1e-8);
    const ChebyshevShape c2(t.zeta2, g.r1, g.r2, 160);
    CHECK(std::abs(t.C2_tilde - dtn_from_shape([&](double r) { return c2(r); }, g)) < 1e-8);
  }
  SUBCASE("A = -1 is a pole") {
    CHECK_THROWS_AS(eval_Nb_annular(Complex(-1.0, 0.0), {0.0, 0.5, 1.0}, g), DomainError);
  }
  SUBCASE("r outside the annulus") { CHECK_THROWS_AS(annular_mode_shape(1.0, 2.5, g), DomainError); }
}

TEST_CASE("annular unstable roots") {
  const AnnularGeometry g;
  SUBCASE("TP with no inertia is unstable") {
    CHECK_FALSE(unstable_roots_annular({0.0, 0.5, 1.0}, g, SchemeVariant::TP).stable());
  }
  SUBCASE("VC near beta 1") {
    for (double I : {0.0, 1.0, 100.0}) CHECK(unstable_roots_annular({I, 0.5, 1.0}, g, SchemeVariant::AMP_VC).stable());
  }
  SUBCASE("NVC has a region III root at small delta") {
    const auto r = unstable_roots_annular({0.0, 0.05, 1.0}, g, SchemeVariant::AMP_NVC);
    REQUIRE(r.roots.size() == 1);
    CHECK(r.roots[0].A.imag() == doctest::Approx(0.0));
    CHECK(r.roots[0].A.real() < -1.0);
    CHECK(r.roots[0].region == InstabilityRegion::III);
  }
  SUBCASE("over-stabilized VC") {
    const auto r = unstable_roots_annular({0.01, 0.5, 20.0}, g, SchemeVariant::AMP_VC);
    REQUIRE(r.roots.size() == 2);
    CHECK(r.roots[0].region == InstabilityRegion::IV);
    CHECK(std::abs(r.roots[0].A) < 1.2);
  }
  SUBCASE("under-stabilized VC") {
    const auto r = unstable_roots_annular({0.01, 0.5, 0.1}, g, SchemeVariant::AMP_VC);
    REQUIRE(r.roots.size() == 1);
    CHECK(r.roots[0].region == InstabilityRegion::I);
  }
  SUBCASE("report invariants") {
    for (double b : {0.1, 0.5, 3.0, 20.0}) {
      const auto r = unstable_roots_annular({0.2, 0.3, b}, g, SchemeVariant::AMP_NVC);
      for (const auto& root : r.roots) {
        CHECK(std::abs(root.A) > 1.0);
        CHECK(root.residual < 1e-8);
        CHECK(std::abs(eval_constraint_annular(root.A, {0.2, 0.3, b}, g, SchemeVariant::AMP_NVC)) <
              1e-6 * std::pow(std::abs(root.A), 3));
      }
    }
  }
}

TEST_CASE("annular boundary tracing") {
  const AnnularGeometry g;
  SUBCASE("boundary points separate different counts") {
    BoundaryTraceOptions o;
    o.x_max = 2.0;
    const auto curves = trace_boundary_annular(FixedParameter::Delta, 0.5, SchemeVariant::AMP_VC, g, o);
    REQUIRE_FALSE(curves.empty());
    bool complex = false;
    int checked = 0;
    for (const auto& c : curves) {
      complex = complex || c.kind == "complex";
      CHECK_FALSE(c.truncated);
      for (size_t i = 0; i < c.points.size(); i += std::max<size_t>(1, c.points.size() / 6)) {
        const auto [I, b] = c.points[i];
        if (b < 2e-3 || I < 2e-3) continue;
        const bool changes = count_annular(I, 0.5, b - 2e-3, SchemeVariant::AMP_VC, g) !=
                                 count_annular(I, 0.5, b + 2e-3, SchemeVariant::AMP_VC, g) ||
                             count_annular(I - 2e-3, 0.5, b, SchemeVariant::AMP_VC, g) !=
                                 count_annular(I + 2e-3, 0.5, b, SchemeVariant::AMP_VC, g);
        CHECK(changes);
        ++checked;
      }
    }
    CHECK(complex);
    CHECK(checked > 5);
  }
  SUBCASE("VC keeps a stable band around beta 1 for any inertia") {
    BoundaryTraceOptions o;
    o.x_min = 0.0;
    o.x_max = 1000.0;
    o.beta_min = 0.8;
    o.beta_max = 1.2;
    CHECK(trace_boundary_annular(FixedParameter::Delta, 0.5, SchemeVariant::AMP_VC, g, o).empty());
    for (double I : {0.0, 0.01, 1.0, 10.0, 100.0, 1000.0})
      for (double b : {0.8, 1.0, 1.2}) CHECK(count_annular(I, 0.5, b, SchemeVariant::AMP_VC, g, 1e-3) == 0);
  }
}
