#pragma once

#include <vector>

#include "exeq/kernel.hpp"
#include "exeq/strategy.hpp"
#include "exeq/types.hpp"

namespace exeq {

/// Terminal inventories within this tolerance of zero satisfy a hard
/// liquidation constraint; beyond it the cost is the +inf sentinel.
inline constexpr Scalar kLiquidationTol = 1e-9;

/// Quadratic trading-cost family: rate cost, per-grid-time block costs, and a
/// terminal penalty. Hard liquidation is a flag, never an infinite phi.
/// `grid_restricted` charges +inf for any trading outside the grid dates,
/// i.e. for any nonzero rate.
struct CostSpec {
  Scalar epsilon = 0.0;
  Vector theta;  // one weight per grid time; empty means zero
  Scalar phi = 0.0;
  bool liquidate = false;
  bool grid_restricted = false;

  static CostSpec zero() { return CostSpec{}; }
};

/// Throws if weights are negative, phi is not finite, or phi is combined with
/// the liquidation flag.
void validate(const CostSpec& spec);

/// int int G(|t-s|) dX_s dX_t over [0,T]^2 (no 1/2 factor). Strictly positive
/// for every non-constant strategy under a strictly PD kernel.
Scalar self_quadratic_form(const Kernel& kernel, const Strategy& strategy);

/// Cross cost of one opponent on `own`: the ordered integral of G(t-s) dX^opp_s
/// dX^own_t over {s < t} plus the half-G(0) simultaneous-block term.
Scalar cross_term(const Kernel& kernel, const Strategy& own, const Strategy& opponent);

/// C(X): (eps/2) int rate^2 + (1/2) sum theta (block)^2 + terminal penalty.
/// Returns +inf when eps > 0 meets a block trade, when the liquidation flag
/// meets nonzero terminal inventory, or when grid restriction meets a rate.
Scalar additional_cost(const CostSpec& spec, const Strategy& strategy);

struct ObjectiveBreakdown {
  Scalar self_half = 0.0;
  Scalar cross = 0.0;
  Scalar additional = 0.0;
  Scalar total = 0.0;
};

/// Execution cost J of `own` against fixed opponents:
/// (1/2) self + sum of cross terms + C(own).
Scalar objective(const Kernel& kernel, const CostSpec& spec, const Strategy& own,
                 const std::vector<Strategy>& others);

ObjectiveBreakdown objective_breakdown(const Kernel& kernel, const CostSpec& spec,
                                       const Strategy& own,
                                       const std::vector<Strategy>& others);

/// Exact expectation of J over the product of the traders' independent
/// randomization devices, by enumeration of all scenario combinations.
/// Throws NumericalError once the combination count exceeds the cap; use the
/// Monte Carlo estimator in market_sim beyond that.
inline constexpr long kEnumerationCap = 1000000;
Scalar objective_randomized(const Kernel& kernel, const CostSpec& spec,
                            const RandomizedStrategy& own,
                            const std::vector<RandomizedStrategy>& others);

ObjectiveBreakdown objective_randomized_breakdown(const Kernel& kernel, const CostSpec& spec,
                                                  const RandomizedStrategy& own,
                                                  const std::vector<RandomizedStrategy>& others);

struct DerandomizationGap {
  Scalar j_randomized = 0.0;
  Scalar j_derandomized = 0.0;
  Scalar gap = 0.0;
  /// sum_k p_k * (1/2) * self_quadratic_form(X_k - average); the gap equals
  /// this exactly when C vanishes and can only exceed it for quadratic C.
  Scalar predicted_kernel_gap = 0.0;
};

/// Cost reduction achieved by replacing a randomized strategy with its
/// scenario average, opponents held fixed. Positive whenever the strategy is
/// strictly randomized.
DerandomizationGap derandomization_gap(const Kernel& kernel, const CostSpec& spec,
                                       const RandomizedStrategy& own,
                                       const std::vector<RandomizedStrategy>& others);

/// |(1/2) int int G(|t-s|) dM dM  -  [ordered integral + half-G(0) jump sum]|.
/// The two sides run through independent code paths (symmetric Gram/cells vs
/// ordered contraction), so the residual is a consistency oracle.
Scalar fubini_identity_residual(const Kernel& kernel, const Strategy& strategy);

}  // namespace exeq
