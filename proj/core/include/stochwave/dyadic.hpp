#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace stochwave {

// Time steps are powers of two throughout; keeping them exact makes coarse
// grids nest bitwise into the fine noise grid.

/// Returns j for k == 2^-j; throws ConfigError if k is not of that form.
int dyadic_level(double k);

/// 2^-level.
double dyadic_value(int level);

/// Parses a "2^-j" literal (j in [0, 60]); nullopt on any other shape.
std::optional<double> parse_dyadic(std::string_view text);

/// Formats 2^-j as "2^-j".
std::string format_dyadic(double k);

}  // namespace stochwave
