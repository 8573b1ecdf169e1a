#pragma once

#include <string>
#include <vector>

#include "exeq/grid.hpp"
#include "exeq/kernel.hpp"
#include "exeq/types.hpp"

namespace exeq {

/// Inventory path of one trader on a grid: initial holding x0, an immediate
/// block trade at every grid time (may be zero), and a constant trading rate
/// on every open interval between grid times. The path is cadlag, constant
/// after T, and of bounded total variation by construction.
class Strategy {
 public:
  Strategy(Scalar x0, TradingGrid grid, Vector blocks, Vector rates);

  /// All-zero strategy (constant inventory x0).
  static Strategy flat(Scalar x0, TradingGrid grid);

  Scalar x0() const { return x0_; }
  const TradingGrid& grid() const { return grid_; }
  const Vector& blocks() const { return blocks_; }
  const Vector& rates() const { return rates_; }

  bool has_blocks() const { return blocks_.cwiseAbs().maxCoeff() != 0.0; }
  bool has_rates() const { return rates_.size() > 0 && rates_.cwiseAbs().maxCoeff() != 0.0; }

  /// X_t. Includes the block at t (cadlag); clamps to X_T for t >= T.
  Scalar inventory_at(Scalar t) const;
  Scalar terminal_inventory() const { return inventory_at(grid_.horizon()); }

  /// Sum of |block| plus |rate| * interval length.
  Scalar total_variation() const;

 private:
  Scalar x0_;
  TradingGrid grid_;
  Vector blocks_;  // one per grid time
  Vector rates_;   // one per interval
};

/// a - b on a common grid; x0 is differenced as well.
Strategy difference(const Strategy& a, const Strategy& b);

/// alpha * a + (1 - alpha) * b on a common grid with common x0.
Strategy convex_combination(Scalar alpha, const Strategy& a, const Strategy& b);

/// Finite mixture of strategies on one grid with one x0: one trader's private
/// randomization device realized as a finite sample space.
class RandomizedStrategy {
 public:
  struct Scenario {
    Scalar probability;
    Strategy strategy;
  };

  explicit RandomizedStrategy(std::vector<Scenario> scenarios);

  /// Degenerate single-scenario device.
  static RandomizedStrategy deterministic(Strategy strategy);

  const std::vector<Scenario>& scenarios() const { return scenarios_; }
  Index scenario_count() const { return static_cast<Index>(scenarios_.size()); }
  const TradingGrid& grid() const { return scenarios_.front().strategy.grid(); }
  Scalar x0() const { return scenarios_.front().strategy.x0(); }

  /// True iff at least two scenarios differ on some block or rate.
  bool strictly_randomized() const;

 private:
  std::vector<Scenario> scenarios_;
};

/// Scenario average: blocks and rates are probability-weighted sums. This is
/// the projection of the randomized strategy onto market information, and is
/// itself admissible.
Strategy derandomize(const RandomizedStrategy& randomized);

struct AdmissibilityReport {
  bool admissible = false;
  std::string reason;
  /// Kernel energy of the total-variation measure,
  /// integral of G(|t-s|) d|X|_s d|X|_t; +inf when inadmissible.
  Scalar kernel_energy = 0.0;
};

/// Admissibility of a strategy under a kernel. Bounded kernels admit every
/// grid strategy. Singular kernels reject any nonzero block and otherwise
/// require the kernel energy of |X| to be finite (it always is for pure-rate
/// grid strategies; the value is reported).
AdmissibilityReport check_admissible(const Strategy& strategy, const Kernel& kernel);

}  // namespace exeq
