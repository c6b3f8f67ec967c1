#pragma once

#include <span>
#include <vector>

namespace triconv {

/// Dense real polynomial c0 + c1 x + ... + cn x^n evaluated by Horner's rule.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);

  double operator()(double x) const;
  Polynomial derivative() const;

  /// Coefficients of p(x0 + h) as a polynomial in h, i.e. p^(k)(x0)/k!.
  std::vector<double> taylor_coefficients(double x0) const;

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coefficients() const { return coeffs_; }

 private:
  std::vector<double> coeffs_;
};

}  // namespace triconv
