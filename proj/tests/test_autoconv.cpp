#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "triconv/autoconv.hpp"
#include "triconv/errors.hpp"
#include "triconv/numeric.hpp"

namespace triconv {
namespace {

constexpr double kOrigin = kTwoPi / kSqrt3;  // F(0,0) times lambda

TripleConvolution model(double lambda, double a, double r = 0.05, std::vector<double> phi = {}) {
  return TripleConvolution(CurveParams{r, lambda, a, std::move(phi)});
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

// rho at xi = 0, phi = 0, written without cancellation.
double rho_closed(double lambda, double a, double v) {
  return std::sqrt(4.0 * v * v / (lambda + std::sqrt(lambda * lambda + 8.0 * a * v * v)));
}

TEST(AngularFrame, Examples) {
  const auto f0 = angular_frame(0.0);
  EXPECT_DOUBLE_EQ(f0.alpha, -1.0 / kSqrt2);
  EXPECT_DOUBLE_EQ(f0.beta, 1.0 / kSqrt2);
  EXPECT_EQ(f0.gamma, 0.0);

  const auto f1 = angular_frame(kPi / 2.0);
  EXPECT_NEAR(f1.alpha, -1.0 / kSqrt6, 1e-16);
  EXPECT_NEAR(f1.beta, -1.0 / kSqrt6, 1e-16);
  EXPECT_NEAR(f1.gamma, 2.0 / kSqrt6, 1e-16);

  const auto f2 = angular_frame(2.0 * kPi / 3.0);
  EXPECT_NEAR(f2.alpha, 0.0, 1e-15);
  EXPECT_NEAR(f2.beta, -1.0 / kSqrt2, 1e-15);
  EXPECT_NEAR(f2.gamma, 1.0 / kSqrt2, 1e-15);
}

TEST(AngularFrame, PowerSumIdentities) {
  testing::Gen gen(1001);
  for (int i = 0; i < 10000; ++i) {
    const auto f = angular_frame(gen.uniform(0.0, kTwoPi));
    EXPECT_NEAR(f.power_sum(1), 0.0, 1e-12);
    EXPECT_NEAR(f.power_sum(2), 1.0, 1e-12);
    EXPECT_NEAR(f.power_sum(3), -std::sin(3.0 * f.theta) / kSqrt6, 1e-12);
    EXPECT_NEAR(f.power_sum(4), 0.5, 1e-12);
  }
}

TEST(AngularFrame, ShiftByThirdTurnPermutes) {
  testing::Gen gen(1002);
  for (int i = 0; i < 10000; ++i) {
    const double t = gen.uniform(0.0, kTwoPi);
    auto a = angular_frame(t).coefficients();
    auto b = angular_frame(t + kTwoPi / 3.0).coefficients();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
}

TEST(Psi, Examples) {
  const auto m = model(2.0, 1.0, 0.5);
  EXPECT_EQ(m.psi(0.3, 0.0, 1.1), 0.0);
  for (double t : {0.0, 0.7, 2.0}) EXPECT_NEAR(m.psi(0.0, 0.5, t), 0.28125, 1e-16);
  testing::Gen gen(1003);
  for (int i = 0; i < 200; ++i) {
    const double xi = gen.uniform(-1.5, 1.5), rho = gen.uniform(0.0, 1.0), t = gen.uniform(0.0, kTwoPi);
    EXPECT_NEAR(m.psi(xi, rho, t), m.psi(xi, rho, t + kTwoPi / 3.0), 1e-14);
  }
}

TEST(Psi, MatchesDirectSumOfCurveValues) {
  testing::Gen gen(1004);
  for (int i = 0; i < 300; ++i) {
    const auto p = gen.convex_params(true);
    const TripleConvolution m(p);
    const double xi = gen.uniform(-3.0 * p.r, 3.0 * p.r);
    const double rho = gen.uniform(0.0, 2.0 * p.r);
    const double t = gen.uniform(0.0, kTwoPi);
    const auto f = angular_frame(t);
    const auto& c = m.curve();
    double direct = -3.0 * c.g(xi / 3.0);
    for (double k : f.coefficients()) direct += c.g(xi / 3.0 + k * rho);
    EXPECT_NEAR(m.psi(xi, rho, t), direct, 1e-15);
    // Exact rho-derivative against the chain rule.
    double slope = 0.0;
    for (double k : f.coefficients()) slope += k * c.g_prime(xi / 3.0 + k * rho);
    EXPECT_NEAR(m.dpsi_drho(xi, rho, t), slope, 1e-13);
  }
}

TEST(Psi, PhaseCoefficientsHavePeriodThirdTurn) {
  testing::Gen gen(1005);
  for (int i = 0; i < 200; ++i) {
    const auto p = gen.convex_params(true);
    const TripleConvolution m(p);
    const double xi = gen.uniform(-3.0 * p.r, 3.0 * p.r);
    const double t = gen.uniform(0.0, kTwoPi);
    const auto a = m.radial_phase(xi, angular_frame(t));
    const auto b = m.radial_phase(xi, angular_frame(t + kTwoPi / 3.0));
    ASSERT_EQ(a.degree(), b.degree());
    for (int k = 2; k <= a.degree(); ++k) EXPECT_NEAR(a.coefficient(k), b.coefficient(k), 1e-12);
  }
}

TEST(SolveRho, Examples) {
  const auto m = model(2.0, 1.0, 0.5);
  const auto zero = m.solve_rho(0.0, 0.4, 0.0);
  EXPECT_EQ(zero.rho, 0.0);
  EXPECT_DOUBLE_EQ(zero.rho_over_dpsi, 0.5);

  for (double t : {0.0, 1.0, 4.0}) {
    const auto s = m.solve_rho(0.0, t, 1.0);
    EXPECT_NEAR(s.rho, 0.855599677167352193, 1e-15);
    EXPECT_LE(std::abs(s.residual), 1e-12);
    EXPECT_GT(s.dpsi_drho, 0.0);
  }

  // Bisection oracle on [0, r].
  const double xi = 0.05, t = kPi / 6.0, v = 0.1;
  const auto s = m.solve_rho(xi, t, v);
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (m.psi(xi, mid, t) < v * v ? lo : hi) = mid;
  }
  EXPECT_LE(std::abs(s.residual), 1e-12);
  EXPECT_NEAR(s.rho, lo, 1e-14);
}

TEST(SolveRho, ClosedFormAtXiZero) {
  for (auto [lam, a] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {2.0, 3.0}}) {
    const auto m = model(lam, a, 0.5);
    for (int i = 0; i < 100; ++i) {
      const double v = std::pow(10.0, -6.0 + 6.0 * i / 99.0) * 0.5;
      const auto s = m.solve_rho(0.0, 0.9, v);
      EXPECT_LT(rel(s.rho, rho_closed(lam, a, v)), 1e-10) << lam << " " << a << " v=" << v;
      EXPECT_LT(rel(s.rho_over_dpsi, 1.0 / std::sqrt(lam * lam + 8.0 * a * v * v)), 1e-10);
      EXPECT_LE(std::abs(s.residual), 1e-12 * std::max(1.0, v * v));
    }
  }
}

TEST(SolveRho, RatioBoundedByInverseLambda) {
  testing::Gen gen(1006);
  for (int i = 0; i < 2000; ++i) {
    const auto p = gen.convex_params(false);
    const TripleConvolution m(p);
    const double xi = gen.uniform(-3.0 * p.r, 3.0 * p.r);
    const double v = gen.uniform(0.0, 0.5 * m.eps_max());
    const auto s = m.solve_rho(xi, gen.uniform(0.0, kTwoPi), v);
    EXPECT_LE(s.rho_over_dpsi, (1.0 + 1e-12) / p.lambda);
    EXPECT_EQ(s.rho == 0.0, v == 0.0);
  }
}

TEST(SolveRho, Errors) {
  const auto m = model(2.0, 1.0, 0.05);
  EXPECT_THROW(m.solve_rho(0.2, 0.0, 0.01), std::invalid_argument);
  EXPECT_THROW(m.solve_rho(0.0, 0.0, -1.0), std::invalid_argument);
  EXPECT_THROW(m.solve_rho(0.0, 0.0, 10.0), NoConvergence);
}

TEST(Monotonicity, RejectsLargeCapForConcaveCurve) {
  // g'' = 2 - 36 y^2 turns negative at |y| = 0.236.
  EXPECT_THROW(model(2.0, -3.0, 0.2), MonotonicityViolated);
  EXPECT_NO_THROW(model(2.0, -3.0, 0.02));
  try {
    model(2.0, -3.0, 0.2);
  } catch (const MonotonicityViolated& e) {
    EXPECT_NE(std::string(e.what()).find("r=0.2"), std::string::npos);
  }
}

TEST(Density, Examples) {
  EXPECT_NEAR(model(2.0, 1.0).density({0.0, 0.0}), kPi / kSqrt3, 1e-15);
  EXPECT_NEAR(model(2.0, 5.0).density({0.0, 0.0}), kPi / kSqrt3, 1e-15);
  const auto m = model(2.0, 1.0);
  EXPECT_LT(rel(m.density({0.03, 0.0}), kOrigin / m.curve().curvature(0.01)), 1e-12);
}

TEST(Density, SmallEpsExpansionAtXiZero) {
  // (2 pi/sqrt3)(1 + lambda^2 rho^2/2)/sqrt(lambda^2 + 8 a eps^2) up to O(eps^4).
  const double lam = 2.0, a = 1.0;
  const auto m = model(lam, a, 0.5);
  auto err = [&](double eps) {
    const double rho = rho_closed(lam, a, eps);
    const double approx = kOrigin * (1.0 + lam * lam * rho * rho / 2.0) / std::sqrt(lam * lam + 8.0 * a * eps * eps);
    return std::abs(m.density({0.0, eps}) - approx);
  };
  const double e1 = err(0.05), e2 = err(0.025);
  EXPECT_LT(e1, 0.05 * 0.05 * 0.05 * 0.05 * 10.0);
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.2);
}

TEST(Density, BoundaryFormula) {
  for (auto phi : {std::vector<double>{}, std::vector<double>{5.0}}) {
    const auto m = model(2.0, 3.0, 0.05, phi);
    for (double xi : linspace(-0.05, 0.05, 50)) {
      EXPECT_LT(rel(m.density({xi, 0.0}), kOrigin / m.curve().curvature(xi / 3.0)), 1e-9) << xi;
    }
  }
}

TEST(Density, OutsideSupportIsZero) {
  const auto m = model(2.0, 3.0);
  EXPECT_EQ(m.density({0.16, 0.0}), 0.0);
  EXPECT_EQ(m.density({0.0, 1.01 * m.eps_max()}), 0.0);
  EXPECT_GT(m.density({0.0, 0.99 * m.eps_max()}), 0.0);
  EXPECT_THROW(m.density({0.0, -0.1}), std::invalid_argument);
  EXPECT_THROW(m.density({0.0, 0.0}, 2), std::invalid_argument);
}

TEST(Density, QuadratureConvergence) {
  testing::Gen gen(1007);
  for (int i = 0; i < 20; ++i) {
    const auto p = gen.convex_params(i % 2 == 1);
    const TripleConvolution m(p);
    const BoundaryCoords pt{gen.uniform(-p.r, p.r), gen.uniform(0.0, 0.5 * m.eps_max())};
    const double f256 = m.density(pt, 256);
    EXPECT_LT(rel(m.density(pt, 512), f256), 1e-10);
    // Node counts that are not multiples of three see the same integral.
    EXPECT_LT(rel(m.density(pt, 257), f256), 1e-10);
  }
}

TEST(Density, PositiveBoundedAndEven) {
  testing::Gen gen(1008);
  for (int i = 0; i < 40; ++i) {
    const auto p = gen.convex_params(false);
    const TripleConvolution m(p);
    const double xi = gen.uniform(-2.5 * p.r, 2.5 * p.r);
    const double eps = gen.uniform(0.0, 0.3 * m.eps_max());
    const double f = m.density({xi, eps});
    EXPECT_GT(f, 0.0);
    double gmax = 0.0;
    for (double y : linspace(-2.0 * p.r, 2.0 * p.r, 2001)) gmax = std::max(gmax, m.curve().weight(y));
    EXPECT_LE(f, kOrigin / p.lambda * std::pow(gmax, 3) * (1 + 1e-12));
    EXPECT_LT(rel(m.density({-xi, eps}), f), 1e-13);
  }
}

TEST(Density, EpsDerivativeVanishesAtBoundary) {
  const auto m = model(2.0, 3.0);
  for (double xi : {-0.05, 0.0, 0.02, 0.05}) {
    const double f0 = m.density({xi, 0.0});
    const double d1 = (m.density({xi, 1e-4}) - f0) / 1e-4;
    const double d2 = (m.density({xi, 5e-5}) - f0) / 5e-5;
    EXPECT_LT(std::abs(d1), 1e-2);
    EXPECT_NEAR(d1 / d2, 2.0, 0.05) << xi;
  }
}

TEST(TripleConv, Examples) {
  const auto m = model(2.0, 1.0);
  const auto below = m.triple_conv(0.0, -0.1);
  EXPECT_TRUE(below.out_of_support);
  EXPECT_EQ(below.value, 0.0);
  EXPECT_NEAR(m.triple_conv(0.0, 0.0).value, kPi / kSqrt3, 1e-15);
  EXPECT_TRUE(m.triple_conv(0.2, 0.01).out_of_support);
  testing::Gen gen(1009);
  for (int i = 0; i < 50; ++i) {
    const double xi = gen.uniform(0.0, 0.15), tau = gen.uniform(0.0, 0.01);
    const double v = m.triple_conv(xi, tau).value;
    EXPECT_NEAR(m.triple_conv(-xi, tau).value, v, 1e-13 * std::max(v, 1.0));
  }
  const auto s = m.triple_conv(0.03, m.lower_boundary(0.03) + 1e-4);
  EXPECT_NEAR(s.eps, 0.01, 1e-15);
  EXPECT_EQ(s.value, m.density({0.03, s.eps}));
}

TEST(Hessian, ClosedFormExamples) {
  const auto h = model(1.0, 1.0).hessian_at_origin(5e-5);
  EXPECT_NEAR(h.closed_form.xx, kOrigin * (-7.0 / 3.0), 1e-13);
  EXPECT_NEAR(h.closed_form.ee, kOrigin * -6.0, 1e-13);
  EXPECT_EQ(h.closed_form.xe, 0.0);
  EXPECT_TRUE(h.is_strict_max);
  EXPECT_EQ(model(2.0, 2.0).hessian_at_origin(5e-5).closed_form.ee, 0.0);
  EXPECT_EQ(model(2.0, 1.0).hessian_at_origin(5e-5).closed_form.xx, 0.0);
}

TEST(Hessian, FiniteDifferencesMatchClosedForm) {
  for (auto [lam, a] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {2.0, 1.5}, {2.0, 3.0}, {0.7, 0.3}}) {
    const auto m = model(lam, a);
    const auto h = m.hessian_at_origin(m.default_fd_step());
    EXPECT_LT(rel(h.fd.xx, h.closed_form.xx), 1e-3) << lam << " " << a;
    EXPECT_LT(rel(h.fd.ee, h.closed_form.ee), 1e-3) << lam << " " << a;
    EXPECT_LT(std::abs(h.mixed), 1e-6);
    EXPECT_EQ(h.is_strict_max, h.closed_form.xx < 0 && h.closed_form.ee < 0);
  }
}

TEST(Hessian, StepPrecondition) {
  const auto m = model(2.0, 3.0);
  EXPECT_THROW(m.hessian_at_origin(0.02), std::invalid_argument);
  EXPECT_THROW(m.hessian_at_origin(0.0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(m.default_fd_step(), 5e-5);
}

TEST(SupScan, SupercriticalStrictAtOrigin) {
  const auto s = model(2.0, 3.0).sup_scan(GridSpec{61, 61});
  EXPECT_EQ(s.argmax.xi, 0.0);
  EXPECT_EQ(s.argmax.eps, 0.0);
  EXPECT_TRUE(s.strict_at_origin);
  EXPECT_EQ(s.near_max.size(), 1u);
}

TEST(SupScan, BelowMinimumThresholdNotStrict) {
  const auto m = model(2.0, 0.5);
  const auto s = m.sup_scan(GridSpec{61, 61});
  EXPECT_FALSE(s.strict_at_origin);
  EXPECT_GT(s.max_value, s.origin_value);
  EXPECT_FALSE(s.argmax.xi == 0.0 && s.argmax.eps == 0.0);
}

TEST(SupScan, SinglePointGrid) {
  const auto s = model(2.0, 3.0).sup_scan(GridSpec{1, 1});
  EXPECT_EQ(s.argmax.xi, 0.0);
  EXPECT_EQ(s.argmax.eps, 0.0);
  EXPECT_TRUE(s.strict_at_origin);
}

TEST(SupScan, VanishingGridPointsKeepStrictness) {
  // Most of this grid lies above the support, where F vanishes identically.
  const auto s = model(2.0, 3.0).sup_scan(GridSpec{5, 5, 0.05, 1.0});
  EXPECT_TRUE(s.strict_at_origin);
}

TEST(EvaluateGrid, LayoutAndDeterminism) {
  const auto m = model(2.0, 3.0);
  set_worker_count(1);
  const auto a = m.evaluate_grid(GridSpec{7, 5});
  set_worker_count(3);
  const auto b = m.evaluate_grid(GridSpec{7, 5});
  set_worker_count(0);
  EXPECT_EQ(a.values, b.values);
  ASSERT_EQ(a.values.size(), 35u);
  EXPECT_EQ(a.at(3, 0), m.density({0.0, 0.0}));
  EXPECT_NEAR(a.xi.back(), 0.15 * 0.95, 1e-15);
  EXPECT_EQ(a.tau[2 * 5 + 4], m.lower_boundary(a.xi[2]) + a.eps[4] * a.eps[4]);
  EXPECT_THROW(m.evaluate_grid(GridSpec{0, 5}), std::invalid_argument);
}

}  // namespace
}  // namespace triconv
