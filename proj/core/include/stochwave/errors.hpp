#pragma once

#include <stdexcept>
#include <string>

namespace stochwave {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Fine time grid cannot represent the requested coarse resolution.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration, spec, or argument value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A trajectory produced a non-finite or absurdly large nodal value.
class BlowUpError : public Error {
 public:
  BlowUpError(int step, double max_norm)
      : Error("solution blew up at step " + std::to_string(step) +
              " (max nodal magnitude " + std::to_string(max_norm) + ")"),
        step_(step),
        max_norm_(max_norm) {}

  int step() const noexcept { return step_; }
  double max_norm() const noexcept { return max_norm_; }

 private:
  int step_;
  double max_norm_;
};

/// More than the allowed fraction of Monte-Carlo samples diverged.
class BlowUpBudgetError : public Error {
 public:
  BlowUpBudgetError(int excluded, int mc)
      : Error(std::to_string(excluded) + " of " + std::to_string(mc) +
              " Monte-Carlo samples blew up (budget is 5%)"),
        excluded_(excluded),
        mc_(mc) {}

  int excluded() const noexcept { return excluded_; }
  int mc() const noexcept { return mc_; }

 private:
  int excluded_;
  int mc_;
};

}  // namespace stochwave
