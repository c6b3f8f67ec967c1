#pragma once

#include <vector>

#include "triconv/autoconv.hpp"
#include "triconv/curve_model.hpp"

namespace triconv {

/// Weight f on the curve, evaluated at the parameter y of gamma(y).
class TrialFunction {
 public:
  enum class Kind { gaussian, tabulated, constant };

  /// f(y) = delta^{-1/2} exp(-lambda y^2 / (2 delta^2)).
  static TrialFunction gaussian(double delta);
  /// Piecewise-linear interpolant of (nodes, values); zero outside the nodes.
  static TrialFunction tabulated(std::vector<double> nodes, std::vector<double> values);
  static TrialFunction constant(double value);

  Kind kind() const { return kind_; }
  double delta() const { return delta_; }

  double value(double y, double lambda) const;

  /// Half-width outside of which |f|^2 is below 1e-16 of its peak (or exactly
  /// zero). Infinite for a nonzero constant.
  double halfwidth(double lambda) const;

  /// Points where f is not smooth (tabulated nodes).
  std::vector<double> breakpoints() const;

  /// |f|
  TrialFunction magnitude() const;

 private:
  Kind kind_ = Kind::constant;
  double delta_ = 0.0;
  double constant_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> values_;
};

/// Tensor trapezoid grid in (xi, eps) for the L6 norm; the window is sized
/// from the trial function's support. nx and ne count intervals and must be
/// even so that the half grid can be formed from the same samples.
struct ExtensionGrid {
  std::size_t nx = 512;
  std::size_t ne = 512;
  int quad_nodes = 128;
  double tolerance = 1e-3;  ///< relative change allowed between n/2 and n
};

struct L6Result {
  double norm = 0.0;               ///< ||Tf||_6
  double norm6 = 0.0;              ///< ||Tf||_6^6
  double refinement_change = 0.0;  ///< |I_n - I_{n/2}| / I_n
  double xi_max = 0.0;
  double eps_max = 0.0;
};

/// (f sigma)^{*3} density in (xi, eps) coordinates. With f == 1 this is the
/// unweighted density bit for bit.
double weighted_density_F(const TripleConvolution& model, const TrialFunction& f, BoundaryCoords pt,
                          int quad_nodes = TripleConvolution::kDefaultNodes);

/// ||Tf||_6 through ||Tf||_6^6 = (2 pi)^2 int int |(f sigma)^{*3}|^2 dxi dtau with
/// dtau = 2 eps d eps. Throws GridUnresolved when halving the grid changes
/// the integral by more than grid.tolerance.
L6Result extension_L6(const TripleConvolution& model, const TrialFunction& f, const ExtensionGrid& grid);
double extension_L6_norm(const TripleConvolution& model, const TrialFunction& f, const ExtensionGrid& grid);

/// ||f||_{L^2(sigma)} with the cutoff arclength measure, by adaptive
/// Gauss-Kronrod quadrature.
double L2_norm(const Curve& curve, const TrialFunction& f);

/// Sharp constant for the parabola z = lambda y^2 / 2:
/// ((2 pi)^3 / (sqrt3 lambda))^{1/6}.
double foschi_constant(double lambda);

struct ConstantsReport {
  double foschi = 0.0;
  double linf_triple = 0.0;
  double holder_cap = 0.0;  ///< (2 pi)^{1/3} linf^{1/6}
  double origin_value = 0.0;
  double origin_closed_form = 0.0;  ///< 2 pi / (sqrt3 lambda)
};

/// linf_triple is the maximum of a sup scan on `scan`.
ConstantsReport constants_report(const TripleConvolution& model, const GridSpec& scan,
                                 int quad_nodes = TripleConvolution::kDefaultNodes);

struct RatioPoint {
  double delta = 0.0;
  double ratio = 0.0;
  double foschi = 0.0;
  double gap = 0.0;  ///< (ratio - foschi) / foschi
};

/// ||T f_delta||_6 / ||f_delta||_{L^2(sigma)} for Gaussian trial functions.
std::vector<RatioPoint> ratio_sweep(const TripleConvolution& model, const std::vector<double>& deltas,
                                    const ExtensionGrid& grid);

struct HolderCheck {
  double lhs = 0.0;  ///< ||T|f|||_6^6
  double rhs = 0.0;  ///< (2 pi)^2 linf ||f||_2^6
  bool holds = false;
};

/// lhs <= rhs (1 + 1e-8), using |f|.
HolderCheck holder_bound_check(const TripleConvolution& model, const TrialFunction& f, const ExtensionGrid& grid,
                               double linf_triple);

}  // namespace triconv
