#include "triconv/autoconv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "triconv/errors.hpp"
#include "triconv/numeric.hpp"

namespace triconv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxNewton = 60;

std::string describe(const CurveParams& p) {
  std::ostringstream ss;
  ss << "lambda=" << p.lambda << " a=" << p.a << " r=" << p.r;
  return ss.str();
}

}  // namespace

double AngularFrame::power_sum(int k) const {
  return std::pow(alpha, k) + std::pow(beta, k) + std::pow(gamma, k);
}

AngularFrame angular_frame(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {theta, -c / kSqrt2 - s / kSqrt6, c / kSqrt2 - s / kSqrt6, 2.0 * s / kSqrt6};
}

double RadialPhase::value(double rho) const { return rho * rho * reduced(rho); }

double RadialPhase::reduced(double rho) const {
  double acc = 0.0;
  for (int k = degree_; k >= 2; --k) acc = acc * rho + c_[static_cast<std::size_t>(k)];
  return acc;
}

double RadialPhase::slope_ratio(double rho) const {
  double acc = 0.0;
  for (int k = degree_; k >= 2; --k) acc = acc * rho + k * c_[static_cast<std::size_t>(k)];
  return acc;
}

double RadialPhase::derivative(double rho) const { return rho * slope_ratio(rho); }

TripleConvolution::TripleConvolution(CurveParams params) : curve_(std::move(params)) {
  validate_monotonicity();
}

RadialPhase TripleConvolution::radial_phase(double xi, const AngularFrame& frame) const {
  const double a = curve_.a();
  std::array<double, kMaxPhiDegree + 1> c{};
  const double s3 = std::sin(3.0 * frame.theta);
  c[2] = curve_.lambda() / 2.0 + (2.0 / 3.0) * a * xi * xi;
  c[3] = -std::pow(2.0 / 3.0, 1.5) * a * xi * s3;
  c[4] = a / 2.0;
  int degree = 4;
  if (curve_.has_phi()) {
    // phi(x + c_i rho) - phi(x) expanded exactly; the linear terms cancel
    // because the coefficients sum to zero.
    const auto taylor = curve_.phi_polynomial().taylor_coefficients(xi / 3.0);
    const auto coeffs = frame.coefficients();
    std::array<double, 3> powers{1.0, 1.0, 1.0};
    for (std::size_t k = 1; k < taylor.size(); ++k) {
      for (std::size_t i = 0; i < 3; ++i) powers[i] *= coeffs[i];
      if (k < 2) continue;
      c[k] += taylor[k] * (powers[0] + powers[1] + powers[2]);
      degree = std::max(degree, static_cast<int>(k));
    }
  }
  return RadialPhase(c, degree);
}

double TripleConvolution::psi(double xi, double rho, double theta) const {
  return radial_phase(xi, angular_frame(theta)).value(rho);
}

double TripleConvolution::dpsi_drho(double xi, double rho, double theta) const {
  return radial_phase(xi, angular_frame(theta)).derivative(rho);
}

double TripleConvolution::support_radius(double xi, const AngularFrame& frame, double halfwidth) const {
  const double x = xi / 3.0;
  double best = std::numeric_limits<double>::infinity();
  for (double c : frame.coefficients()) {
    if (c > 0.0) {
      best = std::min(best, (halfwidth - x) / c);
    } else if (c < 0.0) {
      best = std::min(best, (-halfwidth - x) / c);
    }
  }
  return std::max(best, 0.0);
}

double TripleConvolution::rho_cap() const {
  // The three coefficients spread by at least sqrt(3/2), so some argument
  // leaves [-2r, 2r] once rho exceeds 4r / sqrt(3/2).
  return 4.0 * curve_.r() / std::sqrt(1.5);
}

void TripleConvolution::validate_monotonicity() const {
  const double r = curve_.r();
  const auto xis = symmetric_grid(3.0 * r, 25);
  const auto rhos = linspace(0.0, rho_cap(), 64);
  constexpr int kThetas = 48;
  for (double xi : xis) {
    for (int t = 0; t < kThetas; ++t) {
      const auto frame = angular_frame(kTwoPi / 3.0 * t / kThetas);
      const auto phase = radial_phase(xi, frame);
      for (double rho : rhos) {
        if (phase.slope_ratio(rho) <= 0.0) {
          std::ostringstream ss;
          ss << "r=" << r << " too large: d psi/d rho <= 0 at xi=" << xi << " rho=" << rho
             << " theta=" << frame.theta << " (" << describe(params()) << ")";
          throw MonotonicityViolated(ss.str());
        }
      }
    }
  }
}

RhoSolution TripleConvolution::solve_rho(double xi, double theta, double v) const {
  if (std::abs(xi) > 3.0 * curve_.r()) {
    throw std::invalid_argument("solve_rho: |xi| must not exceed 3r");
  }
  return solve_rho(radial_phase(xi, angular_frame(theta)), v, rho_cap());
}

RhoSolution TripleConvolution::solve_rho(const RadialPhase& phase, double v, double rho_hi) const {
  if (!(v >= 0.0)) throw std::invalid_argument("solve_rho: v must be nonnegative");
  RhoSolution sol;
  if (v == 0.0) {
    sol.rho_over_dpsi = 1.0 / phase.slope_ratio(0.0);
    return sol;
  }
  const double c2 = phase.coefficient(2);
  if (c2 <= 0.0) {
    throw MonotonicityViolated("solve_rho: g''(xi/3) <= 0 (" + describe(params()) + ")");
  }

  // Newton on h(rho) = sqrt(psi(rho)) - v = rho sqrt(psi/rho^2) - v, started
  // from the linearization rho0 = v / sqrt(c2).
  double rho = v / std::sqrt(c2);
  bool converged = false;
  int it = 0;
  if (rho <= rho_hi) {
    for (it = 1; it <= kMaxNewton; ++it) {
      const double q = phase.reduced(rho);
      if (q <= 0.0) break;
      const double sq = std::sqrt(q);
      const double slope = phase.slope_ratio(rho) / (2.0 * sq);
      if (slope <= 0.0) break;
      const double step = (rho * sq - v) / slope;
      const double next = rho - step;
      if (!(next > 0.0) || next > rho_hi) break;
      rho = next;
      if (std::abs(step) <= 4.0 * kEps * rho) {
        converged = true;
        break;
      }
    }
  }

  if (!converged) {
    // Bisection on the monotone branch [0, rho_hi].
    auto h = [&](double x) { return std::sqrt(std::max(phase.value(x), 0.0)) - v; };
    double lo = 0.0;
    double hi = rho_hi;
    if (!(h(hi) >= 0.0)) {
      std::ostringstream ss;
      ss << "solve_rho: level v=" << v << " exceeds the monotone branch [0, " << rho_hi << "] ("
         << describe(params()) << ")";
      throw NoConvergence(ss.str());
    }
    int bis = 0;
    while (hi - lo > 2.0 * kEps * hi && bis < 400) {
      const double mid = 0.5 * (lo + hi);
      (h(mid) < 0.0 ? lo : hi) = mid;
      ++bis;
    }
    rho = 0.5 * (lo + hi);
    it += bis;
  }

  sol.rho = rho;
  sol.iterations = it;
  const double slope = phase.slope_ratio(rho);
  if (slope <= 0.0) {
    std::ostringstream ss;
    ss << "solve_rho: d psi/d rho <= 0 at rho=" << rho << "; r too large (" << describe(params()) << ")";
    throw MonotonicityViolated(ss.str());
  }
  sol.dpsi_drho = rho * slope;
  sol.rho_over_dpsi = 1.0 / slope;
  sol.residual = phase.value(rho) - v * v;
  if (std::abs(sol.residual) > 1e-12 * std::max(1.0, v * v)) {
    std::ostringstream ss;
    ss << "solve_rho: residual " << sol.residual << " at v=" << v << " (" << describe(params()) << ")";
    throw NoConvergence(ss.str());
  }
  return sol;
}

double TripleConvolution::theta_term(double xi, double eps, double theta, const WeightFn* weight) const {
  const auto frame = angular_frame(theta);
  const auto phase = radial_phase(xi, frame);
  double rho = 0.0;
  double quotient = 0.0;
  if (eps == 0.0) {
    quotient = 1.0 / phase.slope_ratio(0.0);
  } else {
    const double rho_s = support_radius(xi, frame, 2.0 * curve_.r());
    // psi is increasing in rho, so rho(eps) >= rho_s and the cutoff vanishes.
    if (phase.value(rho_s) <= eps * eps) return 0.0;
    const auto sol = solve_rho(phase, eps, rho_s);
    rho = sol.rho;
    quotient = sol.rho_over_dpsi;
  }
  double product = quotient;
  for (double c : frame.coefficients()) {
    const double y = xi / 3.0 + c * rho;
    product *= curve_.weight(y);
    if (weight != nullptr) product *= (*weight)(y);
    if (product == 0.0) return 0.0;
  }
  return product;
}

double TripleConvolution::density_impl(BoundaryCoords pt, int quad_nodes, const WeightFn* weight) const {
  if (quad_nodes < 3) throw std::invalid_argument("density: need at least 3 quadrature nodes");
  if (!(pt.eps >= 0.0)) throw std::invalid_argument("density: eps must be nonnegative");
  if (std::abs(pt.xi) > 3.0 * curve_.r()) return 0.0;
  std::vector<double> terms(static_cast<std::size_t>(quad_nodes));
  const double h = kTwoPi / quad_nodes;
  for (int j = 0; j < quad_nodes; ++j) {
    terms[static_cast<std::size_t>(j)] = theta_term(pt.xi, pt.eps, h * j, weight);
  }
  return h * pairwise_sum(terms) / kSqrt3;
}

double TripleConvolution::density(BoundaryCoords pt, int quad_nodes) const {
  return density_impl(pt, quad_nodes, nullptr);
}

double TripleConvolution::density(BoundaryCoords pt, int quad_nodes, const WeightFn& weight) const {
  return density_impl(pt, quad_nodes, &weight);
}

DensitySample TripleConvolution::triple_conv(double xi, double tau, int quad_nodes) const {
  DensitySample s;
  s.xi = xi;
  s.tau = tau;
  const double lift = tau - lower_boundary(xi);
  if (std::abs(xi) > 3.0 * curve_.r() || lift < 0.0) {
    s.out_of_support = true;
    return s;
  }
  s.eps = std::sqrt(lift);
  s.value = density({xi, s.eps}, quad_nodes);
  return s;
}

double TripleConvolution::default_fd_step() const { return 1e-3 * std::min(curve_.r(), 1.0); }

HessianReport TripleConvolution::hessian_at_origin(double fd_step, int quad_nodes) const {
  if (!(fd_step > 0.0) || 3.0 * fd_step >= curve_.r()) {
    throw std::invalid_argument("hessian_at_origin: fd_step must satisfy 0 < 3 fd_step < r");
  }
  auto F = [&](double xi, double eps) { return density({xi, eps}, quad_nodes); };
  const double f00 = F(0.0, 0.0);

  struct Stencil {
    double ee, xx, xe;
  };
  auto stencil = [&](double h) {
    const double fx_p = F(h, 0.0);
    const double fx_m = F(-h, 0.0);
    Stencil s;
    // One-sided in eps: F is only defined for eps >= 0.
    s.ee = (f00 - 2.0 * F(0.0, h) + F(0.0, 2.0 * h)) / (h * h);
    s.xx = (fx_p - 2.0 * f00 + fx_m) / (h * h);
    s.xe = ((F(h, h) - F(-h, h)) - (fx_p - fx_m)) / (2.0 * h * h);
    return s;
  };
  const Stencil coarse = stencil(fd_step);
  const Stencil fine = stencil(fd_step / 2.0);

  HessianReport rep;
  rep.step = fd_step;
  rep.regime = classify_regime(params());
  // The one-sided and cross stencils are first order, the central one second order.
  rep.d2_eps = 2.0 * fine.ee - coarse.ee;
  rep.d2_xi = (4.0 * fine.xx - coarse.xx) / 3.0;
  rep.mixed = 2.0 * fine.xe - coarse.xe;
  rep.fd = {rep.d2_xi, rep.mixed, rep.d2_eps};

  const double lam = curve_.lambda();
  const double a = curve_.a();
  const double scale = kTwoPi / kSqrt3 / lam;
  rep.closed_form = {scale * (lam * lam / 3.0 - 8.0 * a / (3.0 * lam)), 0.0, scale * (2.0 * lam - 8.0 * a / (lam * lam))};
  rep.is_strict_max = rep.d2_xi < 0.0 && rep.d2_eps < 0.0;
  return rep;
}

double TripleConvolution::eps_max() const {
  constexpr int kThetas = 192;
  double best = 0.0;
  for (int t = 0; t < kThetas; ++t) {
    const auto frame = angular_frame(kTwoPi / 3.0 * t / kThetas);
    const auto phase = radial_phase(0.0, frame);
    best = std::max(best, phase.value(support_radius(0.0, frame, 2.0 * curve_.r())));
  }
  return std::sqrt(best);
}

double TripleConvolution::eps_extent(double halfwidth) const {
  const double hw = std::min(halfwidth, 2.0 * curve_.r());
  const double xi_max = std::min(3.0 * curve_.r(), 3.0 * hw);
  constexpr int kThetas = 96;
  double best = 0.0;
  for (double xi : symmetric_grid(xi_max, 41)) {
    for (int t = 0; t < kThetas; ++t) {
      const auto frame = angular_frame(kTwoPi / 3.0 * t / kThetas);
      const double rho_s = std::min(support_radius(xi, frame, hw), rho_cap());
      best = std::max(best, radial_phase(xi, frame).value(rho_s));
    }
  }
  return 1.05 * std::sqrt(best);
}

DensityGrid TripleConvolution::evaluate_grid(const GridSpec& spec, int quad_nodes) const {
  if (spec.nx == 0 || spec.ne == 0) throw std::invalid_argument("grid needs at least one node per axis");
  DensityGrid grid;
  grid.xi = symmetric_grid(3.0 * curve_.r() * (1.0 - spec.margin), spec.nx);
  grid.eps = linspace(0.0, spec.eps_max > 0.0 ? spec.eps_max : eps_max(), spec.ne);
  const std::size_t ne = grid.eps.size();
  grid.values.assign(grid.xi.size() * ne, 0.0);
  grid.tau.assign(grid.values.size(), 0.0);
  parallel_for(grid.values.size(), [&](std::size_t k) {
    const double xi = grid.xi[k / ne];
    const double eps = grid.eps[k % ne];
    grid.values[k] = density({xi, eps}, quad_nodes);
    grid.tau[k] = lower_boundary(xi) + eps * eps;
  });
  return grid;
}

SupScanResult TripleConvolution::sup_scan(const GridSpec& spec, int quad_nodes) const {
  if (quad_nodes < 6) throw std::invalid_argument("sup_scan: need at least 6 quadrature nodes");
  const auto grid = evaluate_grid(spec, quad_nodes);
  const std::size_t ne = grid.eps.size();
  const std::size_t n = grid.values.size();

  // Error estimate from halving the angular resolution.
  std::vector<double> err(n);
  parallel_for(n, [&](std::size_t k) {
    const double coarse = density({grid.xi[k / ne], grid.eps[k % ne]}, quad_nodes / 2);
    err[k] = std::abs(grid.values[k] - coarse) + 16.0 * kEps * std::abs(grid.values[k]);
  });

  SupScanResult res;
  std::size_t best = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (grid.values[k] > grid.values[best]) best = k;
  }
  res.argmax = {grid.xi[best / ne], grid.eps[best % ne]};
  res.max_value = grid.values[best];
  res.error_bound = *std::max_element(err.begin(), err.end());
  for (std::size_t k = 0; k < n; ++k) {
    if (grid.values[best] - grid.values[k] <= err[best] + err[k]) {
      res.near_max.push_back({grid.xi[k / ne], grid.eps[k % ne]});
    }
  }

  const std::size_t mid = grid.xi.size() / 2;
  const bool origin_on_grid = grid.xi[mid] == 0.0 && grid.eps.front() == 0.0;
  if (origin_on_grid) {
    const std::size_t origin = mid * ne;
    res.origin_value = grid.values[origin];
    res.strict_at_origin = true;
    for (std::size_t k = 0; k < n && res.strict_at_origin; ++k) {
      if (k == origin) continue;
      res.strict_at_origin = grid.values[origin] - grid.values[k] > err[origin] + err[k];
    }
  } else {
    res.origin_value = density({0.0, 0.0}, quad_nodes);
  }
  return res;
}

}  // namespace triconv
