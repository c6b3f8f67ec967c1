#include "triconv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "triconv/numeric.hpp"

namespace triconv {

namespace {

/// Fejer's first rule on [-1, 1]: Chebyshev nodes cos((2j+1) pi / 2n).
struct FejerRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const FejerRule& fejer_rule(int n) {
  static std::mutex mu;
  static std::map<int, FejerRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  FejerRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double th = kPi * (2.0 * j + 1.0) / (2.0 * n);
    double s = 0.0;
    for (int k = 1; k <= n / 2; ++k) s += std::cos(2.0 * k * th) / (4.0 * k * k - 1.0);
    rule.nodes[static_cast<std::size_t>(j)] = std::cos(th);
    rule.weights[static_cast<std::size_t>(j)] = 2.0 / n * (1.0 - 2.0 * s);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

template <class F>
double fejer_integrate(F&& f, double a, double b, int n) {
  if (!(b > a)) return 0.0;
  const auto& rule = fejer_rule(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::vector<double> terms(rule.nodes.size());
  for (std::size_t j = 0; j < terms.size(); ++j) terms[j] = rule.weights[j] * f(mid + half * rule.nodes[j]);
  return half * pairwise_sum(terms);
}

/// Root of a monotone f on [a, b] with f(a), f(b) of opposite sign or zero.
template <class F>
double bracketed_root(F&& f, double a, double b, double fa, double fb) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
  std::uintmax_t max_iter = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, max_iter);
  return 0.5 * (lo + hi);
}

}  // namespace

void OracleConfig::validate() const {
  if (!(delta_width > 0.0)) throw std::invalid_argument("oracle: delta_width must be positive");
  if (grid_n < 64) throw std::invalid_argument("oracle: grid_n must be at least 64");
}

OracleConfig default_oracle_config(const CurveParams& params) {
  OracleConfig cfg;
  cfg.delta_width = 1e-5 * params.lambda * params.r * params.r;
  return cfg;
}

BruteForceOracle::BruteForceOracle(CurveParams params) : curve_(std::move(params)) {
  const double r = curve_.r();
  for (double y : linspace(-2.0 * r, 2.0 * r, 4001)) {
    if (curve_.g_double_prime(y) <= 0.0) {
      throw std::invalid_argument("oracle: g must be strictly convex on [-2r, 2r]");
    }
  }
}

double BruteForceOracle::min_phase(double xi, double y1) const {
  const double r2 = 2.0 * curve_.r();
  const double lo = std::max(-r2, xi - y1 - r2);
  const double hi = std::min(r2, xi - y1 + r2);
  // g' is increasing, so the phase in y2 is minimized where y2 = y3.
  const double y2 = std::clamp(0.5 * (xi - y1), lo, hi);
  return curve_.g(y1) + curve_.g(y2) + curve_.g(xi - y1 - y2);
}

double BruteForceOracle::inner(double xi, double y1, double lower, double upper) const {
  const double r2 = 2.0 * curve_.r();
  const double lo = std::max(-r2, xi - y1 - r2);
  const double hi = std::min(r2, xi - y1 + r2);
  if (!(hi > lo)) return 0.0;
  const double g1 = curve_.g(y1);
  auto phase = [&](double y2) { return g1 + curve_.g(y2) + curve_.g(xi - y1 - y2); };
  const double ymin = std::clamp(0.5 * (xi - y1), lo, hi);
  const double m = phase(ymin);
  if (m > upper) return 0.0;

  auto left = [&](double level) {
    const double f_lo = phase(lo) - level;
    if (f_lo <= 0.0) return lo;
    return bracketed_root([&](double y) { return phase(y) - level; }, lo, ymin, f_lo, m - level);
  };
  auto right = [&](double level) {
    const double f_hi = phase(hi) - level;
    if (f_hi <= 0.0) return hi;
    return bracketed_root([&](double y) { return phase(y) - level; }, ymin, hi, m - level, f_hi);
  };
  auto pair_weight = [&](double y2) { return curve_.weight(y2) * curve_.weight(xi - y1 - y2); };
  using GL = boost::math::quadrature::gauss<double, 10>;

  const double l_up = left(upper);
  const double r_up = right(upper);
  double total = 0.0;
  if (m >= lower) {
    total = GL::integrate(pair_weight, l_up, r_up);
  } else {
    const double l_lo = left(lower);
    const double r_lo = right(lower);
    if (l_lo > l_up) total += GL::integrate(pair_weight, l_up, l_lo);
    if (r_up > r_lo) total += GL::integrate(pair_weight, r_lo, r_up);
  }
  return curve_.weight(y1) * total;
}

double BruteForceOracle::box_average(double xi, double tau, double width, int grid_n) const {
  const double r = curve_.r();
  const double a = std::max(-2.0 * r, xi - 4.0 * r);
  const double b = std::min(2.0 * r, xi + 4.0 * r);
  if (!(b > a)) return 0.0;
  // The minimal phase over y2 is convex in y1 with its minimum at y1 = xi/3.
  const double center = std::clamp(xi / 3.0, a, b);
  const double m_min = min_phase(xi, center);
  const double upper = tau + width;
  const double lower = tau - width;
  if (m_min > upper) return 0.0;

  auto m_minus = [&](double level) {
    return [this, xi, level](double y1) { return min_phase(xi, y1) - level; };
  };
  auto left = [&](double level) {
    const double fa = min_phase(xi, a) - level;
    if (fa <= 0.0) return a;
    return bracketed_root(m_minus(level), a, center, fa, m_min - level);
  };
  auto right = [&](double level) {
    const double fb = min_phase(xi, b) - level;
    if (fb <= 0.0) return b;
    return bracketed_root(m_minus(level), center, b, m_min - level, fb);
  };

  std::vector<double> breaks{left(upper)};
  if (m_min < lower) {
    breaks.push_back(left(lower));
    breaks.push_back(right(lower));
  }
  breaks.push_back(right(upper));

  auto integrand = [&](double y1) { return inner(xi, y1, lower, upper); };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    total += fejer_integrate(integrand, breaks[k], breaks[k + 1], grid_n);
  }
  return total / (2.0 * width);
}

OracleValue BruteForceOracle::triple_conv(double xi, double tau, const OracleConfig& cfg) const {
  cfg.validate();
  const double w = cfg.delta_width;
  const double half = box_average(xi, tau, w / 2.0, cfg.grid_n);
  const double half_coarse = box_average(xi, tau, w / 2.0, cfg.grid_n / 2);
  OracleValue out;
  if (!cfg.extrapolate) {
    out.value = half;
    out.error_estimate = std::abs(half - half_coarse);
    return out;
  }
  const double full = box_average(xi, tau, w, cfg.grid_n);
  // The box average is even in w: error w^2 D''/6 + O(w^4).
  out.value = (4.0 * half - full) / 3.0;
  out.error_estimate = std::abs(out.value - half) + std::abs(half - half_coarse);
  return out;
}

ComparisonReport compare_on_grid(const TripleConvolution& formula, const BruteForceOracle& oracle,
                                 const ComparisonGrid& grid, const OracleConfig& cfg, int quad_nodes,
                                 double floor, double tolerance) {
  cfg.validate();
  const double r = formula.params().r;
  const double e_max = formula.eps_max();
  const double xi_half = grid.xi_half > 0.0 ? grid.xi_half : r;
  const double eps_lo = grid.eps_lo > 0.0 ? grid.eps_lo : 0.15 * e_max;
  const double eps_hi = grid.eps_hi > 0.0 ? grid.eps_hi : 0.75 * e_max;
  if (eps_lo < 2.0 * std::sqrt(cfg.delta_width)) {
    throw std::invalid_argument("compare_on_grid: eps_lo must be at least 2 sqrt(delta_width)");
  }
  if (xi_half > 3.0 * r) throw std::invalid_argument("compare_on_grid: xi_half must not exceed 3r");

  const auto xis = symmetric_grid(xi_half, grid.nx);
  const auto epss = linspace(eps_lo, eps_hi, grid.ne);
  ComparisonReport rep;
  rep.rows.resize(xis.size() * epss.size());
  parallel_for(rep.rows.size(), [&](std::size_t k) {
    ComparisonRow row;
    row.xi = xis[k / epss.size()];
    row.eps = epss[k % epss.size()];
    row.formula = formula.density({row.xi, row.eps}, quad_nodes);
    const double tau = formula.lower_boundary(row.xi) + row.eps * row.eps;
    row.oracle = oracle.triple_conv(row.xi, tau, cfg).value;
    row.rel_err = std::abs(row.oracle - row.formula) / std::max(std::abs(row.formula), floor);
    rep.rows[k] = row;
  });
  for (const auto& row : rep.rows) rep.max_rel_error = std::max(rep.max_rel_error, row.rel_err);
  rep.flagged = rep.max_rel_error > tolerance;
  return rep;
}

double gaussian_flow_ratio(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("gaussian_flow_ratio: lambda must be positive");
  // ||G||_2^2 by the trapezoid rule (spectrally accurate for a Gaussian).
  const double y_max = std::sqrt(92.0 / lambda);
  const int n_y = 2001;
  const double hy = 2.0 * y_max / (n_y - 1);
  std::vector<double> g2(n_y);
  for (int j = 0; j < n_y; ++j) {
    const double y = -y_max + hy * j;
    g2[static_cast<std::size_t>(j)] = std::exp(-lambda * y * y);
  }
  const double norm2_sq = hy * pairwise_sum(g2);

  // |G_1(x, t)| is even in x and in t, so integrate the quarter plane. The
  // map t = tan(u) turns the algebraic decay in t into a bounded integrand.
  auto flow = [lambda, y_max](double x, double t) {
    const double scale = std::sqrt(lambda * (1.0 + t * t));
    // Trapezoid in y: aliasing is negligible once 2 pi / h clears |x| by
    // ~9.5 dispersion widths.
    const double h = kTwoPi / (std::abs(x) + 9.5 * scale);
    const auto n = static_cast<long>(std::ceil(y_max / h));
    double re = 0.0;
    double im = 0.0;
    for (long j = -n; j <= n; ++j) {
      const double y = h * static_cast<double>(j);
      const double amp = std::exp(-0.5 * lambda * y * y);
      const double phase = x * y - 0.5 * t * lambda * y * y;
      re += amp * std::cos(phase);
      im += amp * std::sin(phase);
    }
    return std::hypot(re * h, im * h);
  };
  auto x_integral = [&](double t) {
    const double x_max = 6.0 * std::sqrt(lambda * (1.0 + t * t));
    constexpr int kNx = 96;
    const double hx = x_max / kNx;
    std::vector<double> vals(kNx + 1);
    for (int i = 0; i <= kNx; ++i) {
      const double v = flow(hx * i, t);
      vals[static_cast<std::size_t>(i)] = (i == 0 ? 0.5 : 1.0) * std::pow(v, 6);
    }
    return hx * pairwise_sum(vals);
  };
  using GL = boost::math::quadrature::gauss<double, 48>;
  const double quarter = GL::integrate(
      [&](double u) {
        const double t = std::tan(u);
        return (1.0 + t * t) * x_integral(t);
      },
      0.0, kPi / 2.0);
  const double norm6_6 = 4.0 * quarter;
  return std::pow(norm6_6, 1.0 / 6.0) / std::sqrt(norm2_sq);
}

}  // namespace triconv
