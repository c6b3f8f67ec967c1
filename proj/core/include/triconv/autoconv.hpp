#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "triconv/curve_model.hpp"

namespace triconv {

/// The orthonormal triple (alpha, beta, gamma)(theta) spanning the plane
/// alpha + beta + gamma = 0. Its power sums are 0, 1, -sin(3 theta)/sqrt6
/// and 1/2 for exponents 1..4.
struct AngularFrame {
  double theta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  std::array<double, 3> coefficients() const { return {alpha, beta, gamma}; }
  double power_sum(int k) const;
};

AngularFrame angular_frame(double theta);

/// Desingularized coordinates: tau = 3 g(xi/3) + eps^2, eps >= 0.
struct BoundaryCoords {
  double xi = 0.0;
  double eps = 0.0;
};

/// The radial phase psi(xi; rho, theta) at fixed (xi, theta), stored as the
/// polynomial sum_{k=2}^{n} c_k rho^k. It equals
/// sum_i g(xi/3 + c_i rho) - 3 g(xi/3) exactly, without cancellation.
class RadialPhase {
 public:
  RadialPhase() = default;
  RadialPhase(std::array<double, kMaxPhiDegree + 1> coeffs, int degree) : c_(coeffs), degree_(degree) {}

  double value(double rho) const;
  double derivative(double rho) const;
  /// psi / rho^2
  double reduced(double rho) const;
  /// d psi/d rho divided by rho; equals g''(xi/3) at rho = 0.
  double slope_ratio(double rho) const;
  double coefficient(int k) const { return c_[static_cast<std::size_t>(k)]; }
  int degree() const { return degree_; }

 private:
  std::array<double, kMaxPhiDegree + 1> c_{};
  int degree_ = 2;
};

struct RhoSolution {
  double rho = 0.0;
  double dpsi_drho = 0.0;      ///< vanishes only at rho = 0
  double rho_over_dpsi = 0.0;  ///< rho / (d psi/d rho), finite at rho = 0
  int iterations = 0;
  double residual = 0.0;       ///< psi(rho) - v^2
};

struct DensitySample {
  double xi = 0.0;
  double tau = 0.0;
  double eps = 0.0;
  double value = 0.0;
  bool out_of_support = false;
};

/// 2x2 symmetric matrix in (xi, eps) ordering.
struct Matrix2 {
  double xx = 0.0;
  double xe = 0.0;
  double ee = 0.0;
};

struct HessianReport {
  double d2_eps = 0.0;  ///< Richardson-extrapolated finite difference
  double d2_xi = 0.0;
  double mixed = 0.0;
  Matrix2 closed_form;
  Matrix2 fd;
  bool is_strict_max = false;
  double step = 0.0;
  RegimeReport regime;
};

/// Tensor grid over |xi| <= 3r (1 - margin), 0 <= eps <= eps_max.
/// eps_max <= 0 selects the support extent at xi = 0.
struct GridSpec {
  std::size_t nx = 201;
  std::size_t ne = 201;
  double margin = 0.05;
  double eps_max = 0.0;
};

struct DensityGrid {
  std::vector<double> xi;
  std::vector<double> eps;
  std::vector<double> tau;     ///< row-major, xi outer
  std::vector<double> values;  ///< row-major, xi outer

  double at(std::size_t i, std::size_t j) const { return values[i * eps.size() + j]; }
};

struct SupScanResult {
  BoundaryCoords argmax;
  double max_value = 0.0;
  double origin_value = 0.0;
  bool strict_at_origin = false;
  double error_bound = 0.0;  ///< largest quadrature error estimate on the grid
  std::vector<BoundaryCoords> near_max;
};

/// Multiplicative weight f applied at every curve point of the convolution.
using WeightFn = std::function<double(double)>;

/// Angular-integral evaluation of the triple autoconvolution sigma*sigma*sigma
/// of the cutoff arclength measure.
///
/// Construction validates that d psi/d rho > 0 on a (xi, rho, theta) lattice
/// covering |xi| <= 3r, 0 <= rho <= rho_cap(), one angular period, and throws
/// MonotonicityViolated otherwise.
class TripleConvolution {
 public:
  static constexpr int kDefaultNodes = 256;

  explicit TripleConvolution(CurveParams params);

  const Curve& curve() const { return curve_; }
  const CurveParams& params() const { return curve_.params(); }

  RadialPhase radial_phase(double xi, const AngularFrame& frame) const;
  double psi(double xi, double rho, double theta) const;
  double dpsi_drho(double xi, double rho, double theta) const;

  /// Smallest rho at which one of xi/3 + c_i rho leaves (-halfwidth, halfwidth).
  double support_radius(double xi, const AngularFrame& frame, double halfwidth) const;

  /// Radius beyond which the cutoff product vanishes for every |xi| <= 3r.
  double rho_cap() const;

  /// Solves psi(xi; rho, theta) = v^2 for rho in [0, rho_cap()].
  RhoSolution solve_rho(double xi, double theta, double v) const;
  RhoSolution solve_rho(const RadialPhase& phase, double v, double rho_hi) const;

  /// Lower boundary of the support, 3 g(xi/3).
  double lower_boundary(double xi) const { return 3.0 * curve_.g(xi / 3.0); }

  /// F(xi, eps) by the periodic trapezoid rule with quad_nodes angles.
  double density(BoundaryCoords pt, int quad_nodes = kDefaultNodes) const;
  /// Density of (f sigma)^{*3} in (xi, eps) coordinates.
  double density(BoundaryCoords pt, int quad_nodes, const WeightFn& weight) const;

  DensitySample triple_conv(double xi, double tau, int quad_nodes = kDefaultNodes) const;

  double default_fd_step() const;
  HessianReport hessian_at_origin(double fd_step, int quad_nodes = kDefaultNodes) const;

  /// Largest eps with F(0, eps) > 0.
  double eps_max() const;
  /// Upper bound on the eps-support over |xi| <= min(3r, 3 halfwidth) when
  /// the weight vanishes outside [-halfwidth, halfwidth].
  double eps_extent(double halfwidth) const;

  DensityGrid evaluate_grid(const GridSpec& spec, int quad_nodes = kDefaultNodes) const;
  SupScanResult sup_scan(const GridSpec& spec, int quad_nodes = kDefaultNodes) const;

 private:
  void validate_monotonicity() const;
  double theta_term(double xi, double eps, double theta, const WeightFn* weight) const;
  double density_impl(BoundaryCoords pt, int quad_nodes, const WeightFn* weight) const;

  Curve curve_;
};

}  // namespace triconv
