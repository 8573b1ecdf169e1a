#include "exeq/cost.hpp"

#include <cmath>
#include <functional>

namespace exeq {

void validate(const CostSpec& spec) {
  if (!(spec.epsilon >= 0.0)) throw DomainError("epsilon must be nonnegative");
  if (spec.theta.size() > 0 && spec.theta.minCoeff() < 0.0)
    throw DomainError("theta weights must be nonnegative");
  if (!(spec.phi >= 0.0) || !std::isfinite(spec.phi))
    throw DomainError("phi must be finite and nonnegative; use the liquidation flag for phi = inf");
  if (spec.liquidate && spec.phi != 0.0)
    throw DomainError("phi and the liquidation flag are mutually exclusive");
}

namespace {

void require_no_blocks_under_singular(const Kernel& kernel, const Strategy& strategy) {
  if (kernel.singular_at_zero() && strategy.has_blocks())
    throw AdmissibilityError("nonzero block under singular kernel");
}

}  // namespace

Scalar self_quadratic_form(const Kernel& kernel, const Strategy& strategy) {
  require_no_blocks_under_singular(kernel, strategy);
  const Vector& times = strategy.grid().times();
  const Vector& b = strategy.blocks();
  const Vector& r = strategy.rates();
  Scalar total = 0.0;
  if (strategy.has_blocks()) {
    const Matrix gram = gram_matrix(kernel, times);
    total += b.dot(gram * b);
    for (Index k = 0; k < b.size(); ++k) {
      if (b[k] == 0.0) continue;
      for (Index j = 0; j < r.size(); ++j) {
        if (r[j] == 0.0) continue;
        total += 2.0 * b[k] * r[j] * kernel.interval_integral(times[k], times[j], times[j + 1]);
      }
    }
  }
  for (Index j = 0; j < r.size(); ++j) {
    if (r[j] == 0.0) continue;
    for (Index l = 0; l < r.size(); ++l) {
      if (r[l] == 0.0) continue;
      total += r[j] * r[l] *
               cell_double_integral(kernel, Interval{times[l], times[l + 1]},
                                    Interval{times[j], times[j + 1]});
    }
  }
  return total;
}

Scalar cross_term(const Kernel& kernel, const Strategy& own, const Strategy& opponent) {
  require_no_blocks_under_singular(kernel, own);
  require_no_blocks_under_singular(kernel, opponent);
  const Vector& ot = own.grid().times();
  const Vector& pt = opponent.grid().times();
  const Vector& ob = own.blocks();
  const Vector& orate = own.rates();
  const Vector& pb = opponent.blocks();
  const Vector& prate = opponent.rates();

  Scalar total = 0.0;
  // opponent block (s) against own block (t), s < t; equal times use the
  // average-execution-price rule via half G(0).
  for (Index k = 0; k < ob.size(); ++k) {
    if (ob[k] == 0.0) continue;
    for (Index l = 0; l < pb.size(); ++l) {
      if (pb[l] == 0.0) continue;
      if (pt[l] < ot[k])
        total += pb[l] * ob[k] * kernel(ot[k] - pt[l]);
      else if (pt[l] == ot[k])
        total += 0.5 * kernel(0.0) * pb[l] * ob[k];
    }
  }
  // opponent rate (s) against own block at t: integrate over s in [0, t).
  for (Index k = 0; k < ob.size(); ++k) {
    if (ob[k] == 0.0) continue;
    for (Index l = 0; l < prate.size(); ++l) {
      if (prate[l] == 0.0) continue;
      const Scalar hi = std::min(pt[l + 1], ot[k]);
      if (pt[l] < hi) total += ob[k] * prate[l] * kernel.interval_integral(ot[k], pt[l], hi);
    }
  }
  // opponent block at s against own rate (t): integrate over t in (s, T].
  for (Index k = 0; k < orate.size(); ++k) {
    if (orate[k] == 0.0) continue;
    for (Index l = 0; l < pb.size(); ++l) {
      if (pb[l] == 0.0) continue;
      const Scalar lo = std::max(ot[k], pt[l]);
      if (lo < ot[k + 1])
        total += orate[k] * pb[l] * kernel.interval_integral(pt[l], lo, ot[k + 1]);
    }
  }
  // rate against rate over the ordered region {s < t}.
  for (Index k = 0; k < orate.size(); ++k) {
    if (orate[k] == 0.0) continue;
    for (Index l = 0; l < prate.size(); ++l) {
      if (prate[l] == 0.0) continue;
      total += orate[k] * prate[l] *
               ordered_cell_integral(kernel, Interval{pt[l], pt[l + 1]},
                                     Interval{ot[k], ot[k + 1]});
    }
  }
  return total;
}

Scalar additional_cost(const CostSpec& spec, const Strategy& strategy) {
  validate(spec);
  const Vector& b = strategy.blocks();
  if (spec.theta.size() > 0 && spec.theta.size() != b.size())
    throw StructuralError("theta weights must match the strategy grid");
  if (spec.grid_restricted && strategy.has_rates()) return kInfinity;
  if (spec.epsilon > 0.0 && strategy.has_blocks()) return kInfinity;

  Scalar value = 0.0;
  if (spec.epsilon > 0.0) {
    const Vector& r = strategy.rates();
    for (Index k = 0; k < r.size(); ++k)
      value += 0.5 * spec.epsilon * r[k] * r[k] * strategy.grid().dt(k);
  }
  if (spec.theta.size() > 0) value += 0.5 * spec.theta.dot(b.cwiseProduct(b));
  const Scalar terminal = strategy.terminal_inventory();
  if (spec.liquidate) {
    if (std::abs(terminal) > kLiquidationTol) return kInfinity;
  } else if (spec.phi > 0.0) {
    value += 0.5 * spec.phi * terminal * terminal;
  }
  return value;
}

ObjectiveBreakdown objective_breakdown(const Kernel& kernel, const CostSpec& spec,
                                       const Strategy& own,
                                       const std::vector<Strategy>& others) {
  ObjectiveBreakdown out;
  out.self_half = 0.5 * self_quadratic_form(kernel, own);
  for (const Strategy& opp : others) out.cross += cross_term(kernel, own, opp);
  out.additional = additional_cost(spec, own);
  out.total = out.self_half + out.cross + out.additional;
  return out;
}

Scalar objective(const Kernel& kernel, const CostSpec& spec, const Strategy& own,
                 const std::vector<Strategy>& others) {
  return objective_breakdown(kernel, spec, own, others).total;
}

namespace {

// Enumerates the product of independent scenario measures, invoking
// visit(weight, own scenario, opponent selection).
void enumerate_scenarios(
    const RandomizedStrategy& own, const std::vector<RandomizedStrategy>& others,
    const std::function<void(Scalar, const Strategy&, const std::vector<Strategy>&)>& visit) {
  long combos = own.scenario_count();
  for (const auto& opp : others) {
    combos *= opp.scenario_count();
    if (combos > kEnumerationCap)
      throw NumericalError(
          "scenario combinations exceed the exact-enumeration cap; "
          "estimate by Monte Carlo via market_sim instead",
          static_cast<Scalar>(combos));
  }
  std::vector<std::size_t> pick(others.size(), 0);
  while (true) {
    std::vector<Strategy> selection;
    selection.reserve(others.size());
    Scalar opp_weight = 1.0;
    for (std::size_t j = 0; j < others.size(); ++j) {
      const auto& sc = others[j].scenarios()[pick[j]];
      opp_weight *= sc.probability;
      selection.push_back(sc.strategy);
    }
    for (const auto& own_sc : own.scenarios())
      visit(own_sc.probability * opp_weight, own_sc.strategy, selection);
    // odometer over the opponents' scenario indices
    std::size_t j = 0;
    for (; j < others.size(); ++j) {
      if (++pick[j] < others[j].scenarios().size()) break;
      pick[j] = 0;
    }
    if (j == others.size()) break;
  }
}

}  // namespace

ObjectiveBreakdown objective_randomized_breakdown(const Kernel& kernel, const CostSpec& spec,
                                                  const RandomizedStrategy& own,
                                                  const std::vector<RandomizedStrategy>& others) {
  ObjectiveBreakdown out;
  enumerate_scenarios(own, others,
                      [&](Scalar w, const Strategy& x, const std::vector<Strategy>& sel) {
                        const ObjectiveBreakdown one = objective_breakdown(kernel, spec, x, sel);
                        out.self_half += w * one.self_half;
                        out.cross += w * one.cross;
                        out.additional += w * one.additional;
                      });
  out.total = out.self_half + out.cross + out.additional;
  return out;
}

Scalar objective_randomized(const Kernel& kernel, const CostSpec& spec,
                            const RandomizedStrategy& own,
                            const std::vector<RandomizedStrategy>& others) {
  return objective_randomized_breakdown(kernel, spec, own, others).total;
}

DerandomizationGap derandomization_gap(const Kernel& kernel, const CostSpec& spec,
                                       const RandomizedStrategy& own,
                                       const std::vector<RandomizedStrategy>& others) {
  DerandomizationGap out;
  out.j_randomized = objective_randomized(kernel, spec, own, others);
  const Strategy average = derandomize(own);
  out.j_derandomized =
      objective_randomized(kernel, spec, RandomizedStrategy::deterministic(average), others);
  out.gap = out.j_randomized - out.j_derandomized;
  for (const auto& sc : own.scenarios())
    out.predicted_kernel_gap +=
        sc.probability * 0.5 * self_quadratic_form(kernel, difference(sc.strategy, average));
  return out;
}

Scalar fubini_identity_residual(const Kernel& kernel, const Strategy& strategy) {
  const Scalar symmetric_half = 0.5 * self_quadratic_form(kernel, strategy);
  const Scalar ordered_route = cross_term(kernel, strategy, strategy);
  return std::abs(symmetric_half - ordered_route);
}

}  // namespace exeq
