#include "triconv/curve_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace triconv {

void CurveParams::validate() const {
  if (!std::isfinite(r) || r <= 0.0) throw std::invalid_argument("r must be positive, got " + std::to_string(r));
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw std::invalid_argument("lambda must be positive, got " + std::to_string(lambda));
  }
  if (!std::isfinite(a)) throw std::invalid_argument("a must be finite");
  if (phi.size() > static_cast<std::size_t>(kMaxPhiDegree - 4)) {
    throw std::invalid_argument("phi admits at most " + std::to_string(kMaxPhiDegree - 4) +
                                " coefficients (degrees 5.." + std::to_string(kMaxPhiDegree) + ")");
  }
  for (double c : phi) {
    if (!std::isfinite(c)) throw std::invalid_argument("phi coefficients must be finite");
  }
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::not_a_minimum: return "not_a_minimum";
    case Regime::extremizers_exist: return "extremizers_exist";
    case Regime::open_gap: return "open_gap";
    case Regime::no_extremizers: return "no_extremizers";
  }
  return "unknown";
}

RegimeReport classify_regime(const CurveParams& params) {
  const double half_cubed = std::pow(params.lambda / 2.0, 3);
  RegimeReport rep;
  rep.a_value = params.a;
  rep.threshold_min = half_cubed;
  rep.threshold_exist = 1.5 * half_cubed;
  rep.threshold_nonexist = 2.0 * half_cubed;
  rep.kappa_s2_at_origin = 24.0 * params.a - 3.0 * std::pow(params.lambda, 3);
  if (params.a < rep.threshold_min) {
    rep.regime = Regime::not_a_minimum;
  } else if (params.a < rep.threshold_exist) {
    rep.regime = Regime::extremizers_exist;
  } else if (params.a <= rep.threshold_nonexist) {
    rep.regime = Regime::open_gap;
  } else {
    rep.regime = Regime::no_extremizers;
  }
  return rep;
}

double mollifier(double x) {
  const double ax = std::abs(x);
  if (ax <= 1.0) return 1.0;
  if (ax >= 2.0) return 0.0;
  // B(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}) with t = 2 - |x| in (0, 1),
  // written as a logistic in the exponent difference to avoid underflow.
  const double t = 2.0 - ax;
  const double d = 1.0 / t - 1.0 / (1.0 - t);
  return 1.0 / (1.0 + std::exp(d));
}

namespace {

std::vector<double> phi_coefficients(const CurveParams& p) {
  std::vector<double> c(5 + p.phi.size(), 0.0);
  for (std::size_t k = 0; k < p.phi.size(); ++k) c[5 + k] = p.phi[k];
  return c;
}

}  // namespace

Curve::Curve(CurveParams params) : params_(std::move(params)) {
  params_.validate();
  auto phi = phi_coefficients(params_);
  auto g = phi;
  if (g.size() < 5) g.resize(5, 0.0);
  g[2] += params_.lambda / 2.0;
  g[4] += params_.a;
  g_ = Polynomial(std::move(g));
  g1_ = g_.derivative();
  g2_ = g1_.derivative();
  for (double c : params_.phi) has_phi_ = has_phi_ || c != 0.0;
  phi_ = Polynomial(std::move(phi));
  phi2_ = phi_.derivative().derivative();
}

double Curve::weight(double y) const {
  const double eta = cutoff(y);
  if (eta == 0.0) return 0.0;
  const double s = g1_(y);
  return std::sqrt(1.0 + s * s) * eta;
}

double Curve::curvature(double y) const {
  const double s = g1_(y);
  return g2_(y) / std::pow(1.0 + s * s, 1.5);
}

}  // namespace triconv
