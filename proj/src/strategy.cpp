#include "exeq/strategy.hpp"

#include <cmath>
#include <utility>

namespace exeq {

Strategy::Strategy(Scalar x0, TradingGrid grid, Vector blocks, Vector rates)
    : x0_(x0), grid_(std::move(grid)), blocks_(std::move(blocks)), rates_(std::move(rates)) {
  if (blocks_.size() != grid_.points())
    throw DomainError("blocks must have one entry per grid time");
  if (rates_.size() != grid_.intervals())
    throw DomainError("rates must have one entry per grid interval");
  if (!blocks_.allFinite() || !rates_.allFinite() || !std::isfinite(x0_))
    throw DomainError("strategy entries must be finite");
}

Strategy Strategy::flat(Scalar x0, TradingGrid grid) {
  Vector blocks = Vector::Zero(grid.points());
  Vector rates = Vector::Zero(grid.intervals());
  return Strategy(x0, std::move(grid), std::move(blocks), std::move(rates));
}

Scalar Strategy::inventory_at(Scalar t) const {
  if (t < 0.0) throw DomainError("inventory requested at negative time");
  const Vector& times = grid_.times();
  const Scalar clamped = std::min(t, grid_.horizon());
  Scalar x = x0_;
  for (Index k = 0; k < times.size(); ++k) {
    if (times[k] <= clamped) x += blocks_[k];
    if (k + 1 < times.size() && times[k] < clamped)
      x += rates_[k] * (std::min(clamped, times[k + 1]) - times[k]);
  }
  return x;
}

Scalar Strategy::total_variation() const {
  Scalar tv = blocks_.cwiseAbs().sum();
  for (Index k = 0; k < rates_.size(); ++k) tv += std::abs(rates_[k]) * grid_.dt(k);
  return tv;
}

namespace {

void require_same_grid(const Strategy& a, const Strategy& b, const char* op) {
  if (a.grid() != b.grid())
    throw StructuralError(std::string(op) + " requires strategies on a common grid");
}

}  // namespace

Strategy difference(const Strategy& a, const Strategy& b) {
  require_same_grid(a, b, "difference");
  return Strategy(a.x0() - b.x0(), a.grid(), a.blocks() - b.blocks(), a.rates() - b.rates());
}

Strategy convex_combination(Scalar alpha, const Strategy& a, const Strategy& b) {
  require_same_grid(a, b, "convex combination");
  if (a.x0() != b.x0())
    throw StructuralError("convex combination requires a common initial holding");
  return Strategy(a.x0(), a.grid(), alpha * a.blocks() + (1.0 - alpha) * b.blocks(),
                  alpha * a.rates() + (1.0 - alpha) * b.rates());
}

RandomizedStrategy::RandomizedStrategy(std::vector<Scenario> scenarios)
    : scenarios_(std::move(scenarios)) {
  if (scenarios_.empty()) throw DomainError("randomized strategy needs at least one scenario");
  Scalar total = 0.0;
  const Strategy& first = scenarios_.front().strategy;
  for (const Scenario& sc : scenarios_) {
    if (!(sc.probability > 0.0)) throw DomainError("scenario probabilities must be positive");
    total += sc.probability;
    if (sc.strategy.grid() != first.grid())
      throw StructuralError("all scenarios must share one grid");
    if (sc.strategy.x0() != first.x0())
      throw StructuralError("all scenarios must share one initial holding");
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw DomainError("scenario probabilities must sum to 1");
}

RandomizedStrategy RandomizedStrategy::deterministic(Strategy strategy) {
  return RandomizedStrategy({Scenario{1.0, std::move(strategy)}});
}

bool RandomizedStrategy::strictly_randomized() const {
  const Strategy& first = scenarios_.front().strategy;
  for (const Scenario& sc : scenarios_) {
    if (sc.strategy.blocks() != first.blocks() || sc.strategy.rates() != first.rates())
      return true;
  }
  return false;
}

Strategy derandomize(const RandomizedStrategy& randomized) {
  const Strategy& first = randomized.scenarios().front().strategy;
  Vector blocks = Vector::Zero(first.blocks().size());
  Vector rates = Vector::Zero(first.rates().size());
  for (const auto& sc : randomized.scenarios()) {
    blocks += sc.probability * sc.strategy.blocks();
    rates += sc.probability * sc.strategy.rates();
  }
  return Strategy(first.x0(), first.grid(), std::move(blocks), std::move(rates));
}

AdmissibilityReport check_admissible(const Strategy& strategy, const Kernel& kernel) {
  AdmissibilityReport report;
  if (kernel.singular_at_zero() && strategy.has_blocks()) {
    report.admissible = false;
    report.reason = "nonzero block under singular kernel";
    report.kernel_energy = kInfinity;
    return report;
  }

  // Energy of the total-variation measure |X| = sum |b_k| delta_{t_k} + |r| ds.
  const Vector& times = strategy.grid().times();
  const Vector b = strategy.blocks().cwiseAbs();
  const Vector r = strategy.rates().cwiseAbs();
  Scalar energy = 0.0;
  if (b.maxCoeff() != 0.0) {
    const Matrix gram = gram_matrix(kernel, times);
    energy += b.dot(gram * b);
  }
  for (Index k = 0; k < b.size(); ++k) {
    if (b[k] == 0.0) continue;
    for (Index j = 0; j < r.size(); ++j) {
      if (r[j] == 0.0) continue;
      energy += 2.0 * b[k] * r[j] * kernel.interval_integral(times[k], times[j], times[j + 1]);
    }
  }
  for (Index j = 0; j < r.size(); ++j) {
    if (r[j] == 0.0) continue;
    for (Index l = 0; l < r.size(); ++l) {
      if (r[l] == 0.0) continue;
      energy += r[j] * r[l] *
                cell_double_integral(kernel, Interval{times[l], times[l + 1]},
                                     Interval{times[j], times[j + 1]});
    }
  }
  report.admissible = std::isfinite(energy);
  report.kernel_energy = energy;
  if (!report.admissible) report.reason = "kernel energy is not finite";
  return report;
}

}  // namespace exeq
