#pragma once

#include <cmath>
#include <functional>

namespace stochwave {

/// Worker pool width: hardware concurrency, capped by the STOCHWAVE_THREADS
/// environment variable when set. At least 1.
int worker_count();

/// Runs fn(0), ..., fn(n-1) on the worker pool. Rethrows the first exception
/// raised by any task after all workers have stopped.
void parallel_for(int n, const std::function<void(int)>& fn);

/// Neumaier compensated summation. Reductions over Monte-Carlo samples add
/// in sample-index order through this accumulator, so results do not depend
/// on the thread schedule.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace stochwave
