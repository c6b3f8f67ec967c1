#pragma once

#include <string_view>
#include <vector>

#include "triconv/polynomial.hpp"

namespace triconv {

/// Highest monomial degree admitted in the perturbation phi.
inline constexpr int kMaxPhiDegree = 12;

/// Local model of the curve y -> (y, g(y)) with
/// g(y) = lambda/2 y^2 + a y^4 + phi(y), phi(y) = sum_{k>=5} c_k y^k.
struct CurveParams {
  double r = 0.05;       ///< cap half-width; the cutoff lives on [-2r, 2r]
  double lambda = 1.0;   ///< curvature at the origin
  double a = 1.0;        ///< quartic coefficient
  std::vector<double> phi;  ///< c5, c6, ..., at most up to c12

  /// Throws std::invalid_argument on r <= 0, lambda <= 0, non-finite
  /// values, or more than 8 phi coefficients.
  void validate() const;
};

enum class Regime { not_a_minimum, extremizers_exist, open_gap, no_extremizers };

std::string_view to_string(Regime regime);

struct RegimeReport {
  double a_value = 0.0;
  double threshold_min = 0.0;        ///< (lambda/2)^3
  double threshold_exist = 0.0;      ///< 3/2 (lambda/2)^3
  double threshold_nonexist = 0.0;   ///< 2 (lambda/2)^3
  Regime regime = Regime::not_a_minimum;
  double kappa_s2_at_origin = 0.0;   ///< d^2 kappa / ds^2 at 0, i.e. 24a - 3 lambda^3
};

RegimeReport classify_regime(const CurveParams& params);

/// Smooth plateau cutoff: 1 on [-1, 1], 0 outside (-2, 2), even, with a
/// logistic-exponential transition in between.
double mollifier(double x);

/// Curve with cached polynomial derivatives. Cheap to copy.
class Curve {
 public:
  explicit Curve(CurveParams params);

  const CurveParams& params() const { return params_; }
  double r() const { return params_.r; }
  double lambda() const { return params_.lambda; }
  double a() const { return params_.a; }

  double g(double y) const { return g_(y); }
  double g_prime(double y) const { return g1_(y); }
  double g_double_prime(double y) const { return g2_(y); }

  double phi(double y) const { return phi_(y); }
  double phi_double_prime(double y) const { return phi2_(y); }
  bool has_phi() const { return has_phi_; }

  const Polynomial& g_polynomial() const { return g_; }
  const Polynomial& phi_polynomial() const { return phi_; }

  /// eta(y / r)
  double cutoff(double y) const { return mollifier(y / params_.r); }

  /// Arclength density times cutoff, G_r(y) = (1 + g'(y)^2)^{1/2} eta_r(y).
  double weight(double y) const;

  /// kappa(y) = g''(y) / (1 + g'(y)^2)^{3/2}
  double curvature(double y) const;

 private:
  CurveParams params_;
  Polynomial g_, g1_, g2_;
  Polynomial phi_, phi2_;
  bool has_phi_ = false;
};

}  // namespace triconv
