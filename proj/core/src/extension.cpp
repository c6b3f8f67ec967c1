#include "triconv/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "triconv/errors.hpp"
#include "triconv/numeric.hpp"

namespace triconv {

TrialFunction TrialFunction::gaussian(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("gaussian trial: delta must be positive");
  TrialFunction f;
  f.kind_ = Kind::gaussian;
  f.delta_ = delta;
  return f;
}

TrialFunction TrialFunction::tabulated(std::vector<double> nodes, std::vector<double> values) {
  if (nodes.size() < 2 || nodes.size() != values.size()) {
    throw std::invalid_argument("tabulated trial: need matching nodes/values, at least two");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || !std::isfinite(values[i])) {
      throw std::invalid_argument("tabulated trial: values must be finite");
    }
    if (i > 0 && !(nodes[i] > nodes[i - 1])) throw std::invalid_argument("tabulated trial: nodes must increase");
  }
  TrialFunction f;
  f.kind_ = Kind::tabulated;
  f.nodes_ = std::move(nodes);
  f.values_ = std::move(values);
  return f;
}

TrialFunction TrialFunction::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("constant trial: value must be finite");
  TrialFunction f;
  f.kind_ = Kind::constant;
  f.constant_ = value;
  return f;
}

double TrialFunction::value(double y, double lambda) const {
  switch (kind_) {
    case Kind::gaussian: {
      const double s = y / delta_;
      return std::exp(-0.5 * lambda * s * s) / std::sqrt(delta_);
    }
    case Kind::tabulated: {
      if (y < nodes_.front() || y > nodes_.back()) return 0.0;
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), y);
      if (it == nodes_.end()) return values_.back();
      const auto k = static_cast<std::size_t>(it - nodes_.begin());
      const double t = (y - nodes_[k - 1]) / (nodes_[k] - nodes_[k - 1]);
      return values_[k - 1] + t * (values_[k] - values_[k - 1]);
    }
    case Kind::constant:
      return constant_;
  }
  return 0.0;
}

double TrialFunction::halfwidth(double lambda) const {
  switch (kind_) {
    case Kind::gaussian:
      return delta_ * std::sqrt(16.0 * std::log(10.0) / lambda);
    case Kind::tabulated:
      return std::max(std::abs(nodes_.front()), std::abs(nodes_.back()));
    case Kind::constant:
      return constant_ == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

std::vector<double> TrialFunction::breakpoints() const {
  return kind_ == Kind::tabulated ? nodes_ : std::vector<double>{};
}

TrialFunction TrialFunction::magnitude() const {
  TrialFunction f = *this;
  for (double& v : f.values_) v = std::abs(v);
  f.constant_ = std::abs(f.constant_);
  return f;
}

double weighted_density_F(const TripleConvolution& model, const TrialFunction& f, BoundaryCoords pt,
                          int quad_nodes) {
  const double lambda = model.params().lambda;
  const WeightFn weight = [&f, lambda](double y) { return f.value(y, lambda); };
  return model.density(pt, quad_nodes, weight);
}

L6Result extension_L6(const TripleConvolution& model, const TrialFunction& f, const ExtensionGrid& grid) {
  if (grid.nx < 2 || grid.ne < 2 || grid.nx % 2 != 0 || grid.ne % 2 != 0) {
    throw std::invalid_argument("extension grid: nx and ne must be even and at least 2");
  }
  const double r = model.params().r;
  const double lambda = model.params().lambda;
  L6Result res;
  const double hw = std::min(2.0 * r, f.halfwidth(lambda));
  if (!(hw > 0.0)) return res;
  res.xi_max = std::min(3.0 * r, 3.0 * hw);
  res.eps_max = model.eps_extent(hw);

  const auto xs = linspace(-res.xi_max, res.xi_max, grid.nx + 1);
  const auto es = linspace(0.0, res.eps_max, grid.ne + 1);
  const std::size_t ne1 = es.size();
  std::vector<double> vals(xs.size() * ne1);
  const WeightFn weight = [&f, lambda](double y) { return f.value(y, lambda); };
  parallel_for(vals.size(), [&](std::size_t k) {
    const double eps = es[k % ne1];
    const double v = model.density({xs[k / ne1], eps}, grid.quad_nodes, weight);
    vals[k] = v * v * 2.0 * eps;
  });

  auto trapezoid = [&](std::size_t stride) {
    const double hx = (xs.back() - xs.front()) / static_cast<double>(grid.nx) * static_cast<double>(stride);
    const double he = (es.back() - es.front()) / static_cast<double>(grid.ne) * static_cast<double>(stride);
    std::vector<double> terms;
    terms.reserve(vals.size() / (stride * stride) + 1);
    for (std::size_t i = 0; i < xs.size(); i += stride) {
      const double wx = (i == 0 || i + 1 == xs.size()) ? 0.5 : 1.0;
      for (std::size_t j = 0; j < ne1; j += stride) {
        const double we = (j == 0 || j + 1 == ne1) ? 0.5 : 1.0;
        terms.push_back(wx * we * vals[i * ne1 + j]);
      }
    }
    return hx * he * pairwise_sum(terms);
  };
  const double fine = trapezoid(1);
  const double coarse = trapezoid(2);
  if (fine == 0.0) return res;
  res.refinement_change = std::abs(fine - coarse) / std::abs(fine);
  if (res.refinement_change > grid.tolerance) {
    std::ostringstream ss;
    ss << "L6 integral changed by " << res.refinement_change << " under halving (tolerance "
       << grid.tolerance << ")";
    throw GridUnresolved(ss.str());
  }
  res.norm6 = kTwoPi * kTwoPi * fine;
  res.norm = std::pow(res.norm6, 1.0 / 6.0);
  return res;
}

double extension_L6_norm(const TripleConvolution& model, const TrialFunction& f, const ExtensionGrid& grid) {
  return extension_L6(model, f, grid).norm;
}

double L2_norm(const Curve& curve, const TrialFunction& f) {
  const double r = curve.r();
  const double lambda = curve.lambda();
  std::vector<double> cuts{-2.0 * r, -r, 0.0, r, 2.0 * r};
  for (double b : f.breakpoints()) cuts.push_back(b);
  if (f.kind() == TrialFunction::Kind::gaussian) {
    const double w = f.halfwidth(lambda);
    for (double b : {-w, -w / 4.0, w / 4.0, w}) cuts.push_back(b);
  }
  std::erase_if(cuts, [r](double c) { return c < -2.0 * r || c > 2.0 * r; });
  std::sort(cuts.begin(), cuts.end());
  // Nearly coincident cuts would leave slivers that the adaptive rule
  // cannot resolve below its relative tolerance.
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [r](double x, double y) { return y - x <= 1e-12 * r; }),
             cuts.end());

  auto integrand = [&](double y) {
    const double v = f.value(y, lambda);
    return v * v * curve.weight(y);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  std::vector<double> pieces;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    pieces.push_back(GK::integrate(integrand, cuts[k], cuts[k + 1], 15, 1e-12));
  }
  return std::sqrt(pairwise_sum(pieces));
}

double foschi_constant(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("foschi_constant: lambda must be positive");
  return std::pow(kTwoPi * kTwoPi * kTwoPi / (kSqrt3 * lambda), 1.0 / 6.0);
}

ConstantsReport constants_report(const TripleConvolution& model, const GridSpec& scan, int quad_nodes) {
  const double lambda = model.params().lambda;
  ConstantsReport rep;
  rep.foschi = foschi_constant(lambda);
  rep.linf_triple = model.sup_scan(scan, quad_nodes).max_value;
  rep.holder_cap = std::cbrt(kTwoPi) * std::pow(rep.linf_triple, 1.0 / 6.0);
  rep.origin_value = model.density({0.0, 0.0}, quad_nodes);
  rep.origin_closed_form = kTwoPi / (kSqrt3 * lambda);
  return rep;
}

std::vector<RatioPoint> ratio_sweep(const TripleConvolution& model, const std::vector<double>& deltas,
                                    const ExtensionGrid& grid) {
  std::vector<RatioPoint> out;
  const double foschi = foschi_constant(model.params().lambda);
  for (double delta : deltas) {
    const auto f = TrialFunction::gaussian(delta);
    RatioPoint p;
    p.delta = delta;
    p.ratio = extension_L6_norm(model, f, grid) / L2_norm(model.curve(), f);
    p.foschi = foschi;
    p.gap = (p.ratio - foschi) / foschi;
    out.push_back(p);
  }
  return out;
}

HolderCheck holder_bound_check(const TripleConvolution& model, const TrialFunction& f, const ExtensionGrid& grid,
                               double linf_triple) {
  const auto g = f.magnitude();
  HolderCheck chk;
  chk.lhs = extension_L6(model, g, grid).norm6;
  const double l2 = L2_norm(model.curve(), g);
  chk.rhs = kTwoPi * kTwoPi * linf_triple * std::pow(l2, 6);
  chk.holds = chk.lhs <= chk.rhs * (1.0 + 1e-8);
  return chk;
}

}  // namespace triconv
