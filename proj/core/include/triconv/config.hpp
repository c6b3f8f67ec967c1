#pragma once

#include <filesystem>
#include <string_view>

#include "triconv/curve_model.hpp"

namespace triconv {

/// Parses a key-value parameter file:
///
///     # comment
///     r      = 0.05
///     lambda = 2
///     a      = 3
///     phi    = [0.0, 1.5]    # c5, c6, ...
///
/// r, lambda and a are required; phi is optional. Numbers are parsed with
/// correctly rounded decimal conversion. Unknown or repeated keys and
/// trailing garbage raise ConfigError naming the line and key.
CurveParams parse_curve_params(std::string_view text);

CurveParams load_curve_params(const std::filesystem::path& path);

/// Strict decimal parse of a whole token; throws ConfigError mentioning
/// `what` on failure.
double parse_real(std::string_view token, std::string_view what);

}  // namespace triconv
