#pragma once

#include "exeq/types.hpp"

namespace exeq {

/// Trading grid 0 = t_0 < t_1 < ... < t_n = T. Immutable value type.
class TradingGrid {
 public:
  explicit TradingGrid(Vector times) : times_(std::move(times)) {
    if (times_.size() < 2) throw DomainError("grid needs at least two times");
    if (times_[0] != 0.0) throw DomainError("grid must start at 0");
    for (Index k = 0; k + 1 < times_.size(); ++k)
      if (!(times_[k] < times_[k + 1]))
        throw DomainError("grid times must be strictly increasing");
  }

  /// Uniform grid with n intervals on [0, T].
  static TradingGrid uniform(Scalar horizon, Index n) {
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
    if (n < 1) throw DomainError("uniform grid needs n >= 1");
    Vector times = Vector::LinSpaced(n + 1, 0.0, horizon);
    times[n] = horizon;  // LinSpaced endpoint can drift by one ulp
    return TradingGrid(std::move(times));
  }

  const Vector& times() const { return times_; }
  Scalar horizon() const { return times_[times_.size() - 1]; }
  /// Number of grid points (block slots).
  Index points() const { return times_.size(); }
  /// Number of open intervals (rate slots).
  Index intervals() const { return times_.size() - 1; }
  Scalar dt(Index k) const { return times_[k + 1] - times_[k]; }

  friend bool operator==(const TradingGrid& a, const TradingGrid& b) {
    return a.times_.size() == b.times_.size() && a.times_ == b.times_;
  }
  friend bool operator!=(const TradingGrid& a, const TradingGrid& b) { return !(a == b); }

 private:
  Vector times_;
};

}  // namespace exeq
