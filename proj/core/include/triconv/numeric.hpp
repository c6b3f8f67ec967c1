#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace triconv {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kSqrt3 = 1.73205080756887729353;
inline constexpr double kSqrt6 = 2.44948974278317809820;

/// Pairwise (cascade) summation. The result depends only on the order of
/// `values`, never on how the values were produced.
double pairwise_sum(std::span<const double> values);

/// Number of workers used by parallel_for. Defaults to the hardware
/// concurrency; 0 restores the default.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; the
/// body must write only to index-owned storage.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// `n` points from lo to hi inclusive. n == 1 yields {lo}.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Symmetric grid on [-half, half] with odd n containing 0 exactly.
std::vector<double> symmetric_grid(double half, std::size_t n);

/// Decimal rendering with 17 significant digits (round-trips a double).
std::string format_real(double x);

}  // namespace triconv
