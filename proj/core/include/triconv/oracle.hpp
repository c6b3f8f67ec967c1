#pragma once

#include <vector>

#include "triconv/autoconv.hpp"
#include "triconv/curve_model.hpp"

namespace triconv {

/// Thickened-delta brute force settings. The Dirac factor is replaced by the
/// box 1{|u| <= w} / (2w).
struct OracleConfig {
  double delta_width = 0.0;  ///< w
  int grid_n = 2048;         ///< outer quadrature nodes per piece
  bool extrapolate = true;   ///< Richardson over w and w/2

  void validate() const;
};

/// w = 1e-5 lambda r^2, 2048 nodes, extrapolated.
OracleConfig default_oracle_config(const CurveParams& params);

struct OracleValue {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Evaluates sigma*sigma*sigma straight from the convolution integral
///
///   int int G(y1) G(y2) G(xi - y1 - y2) delta_w(tau - g(y1) - g(y2) - g(xi - y1 - y2)) dy1 dy2
///
/// over [-2r, 2r]^2, with no use of the angular parametrization. For each y1
/// the y2-set where the thickened delta is active is located exactly (the
/// phase is convex in y2), and the outer y1 integral is split at the points
/// where that set changes topology and integrated with a cosine substitution
/// that absorbs the square-root endpoint behaviour.
class BruteForceOracle {
 public:
  /// Throws std::invalid_argument unless g'' > 0 on [-2r, 2r].
  explicit BruteForceOracle(CurveParams params);

  const Curve& curve() const { return curve_; }

  OracleValue triple_conv(double xi, double tau, const OracleConfig& cfg) const;

  /// Unextrapolated thickened-delta value for a single width.
  double box_average(double xi, double tau, double width, int grid_n) const;

 private:
  double inner(double xi, double y1, double lower, double upper) const;
  double min_phase(double xi, double y1) const;

  Curve curve_;
};

struct ComparisonRow {
  double xi = 0.0;
  double eps = 0.0;
  double formula = 0.0;
  double oracle = 0.0;
  double rel_err = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  double max_rel_error = 0.0;
  bool flagged = false;  ///< max_rel_error above the requested tolerance
};

/// Interior comparison lattice: |xi| <= xi_half, eps in [eps_lo, eps_hi].
struct ComparisonGrid {
  std::size_t nx = 5;
  std::size_t ne = 5;
  double xi_half = 0.0;  ///< <= 0 selects r
  double eps_lo = 0.0;   ///< <= 0 selects 0.15 eps_max
  double eps_hi = 0.0;   ///< <= 0 selects 0.75 eps_max
};

/// max |oracle - F| / max(|F|, floor) over the lattice. Throws
/// std::invalid_argument when eps_lo < 2 sqrt(w), where the thickened delta
/// smears the boundary jump.
ComparisonReport compare_on_grid(const TripleConvolution& formula, const BruteForceOracle& oracle,
                                 const ComparisonGrid& grid, const OracleConfig& cfg,
                                 int quad_nodes = TripleConvolution::kDefaultNodes, double floor = 1e-12,
                                 double tolerance = 1e-2);

/// ||G_1||_6 / ||G||_2 for G(y) = exp(-lambda y^2 / 2) and its free
/// Schroedinger evolution G_1(x, t) = int G(y) exp(-i t lambda y^2/2 + i x y) dy,
/// computed by direct quadrature of the oscillatory integral on a mapped
/// (x, t) grid.
double gaussian_flow_ratio(double lambda);

}  // namespace triconv
