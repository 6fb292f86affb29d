#include "stochwave/dyadic.hpp"

#include <cmath>
#include <charconv>

#include "stochwave/errors.hpp"

namespace stochwave {

int dyadic_level(double k) {
  if (!(k > 0.0) || k > 1.0) {
    throw ConfigError("step " + std::to_string(k) + " is not a dyadic 2^-j");
  }
  int exp = 0;
  double mant = std::frexp(k, &exp);  // k = mant * 2^exp, mant in [0.5, 1)
  if (mant != 0.5) {
    throw ConfigError("step " + std::to_string(k) + " is not a dyadic 2^-j");
  }
  return 1 - exp;
}

double dyadic_value(int level) { return std::ldexp(1.0, -level); }

std::optional<double> parse_dyadic(std::string_view text) {
  if (text.substr(0, 3) != "2^-") return std::nullopt;
  std::string_view digits = text.substr(3);
  if (digits.empty()) return std::nullopt;
  int j = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), j);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  if (j < 0 || j > 60) return std::nullopt;
  return dyadic_value(j);
}

std::string format_dyadic(double k) {
  return "2^-" + std::to_string(dyadic_level(k));
}

}  // namespace stochwave
