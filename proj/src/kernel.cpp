#include "exeq/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace exeq {

namespace {

Scalar sign_of(Scalar x) { return x < 0.0 ? -1.0 : 1.0; }

// ((1+u)^p - 1) / p, continuous in p (p = 0 gives log(1+u)).
Scalar powm1_over(Scalar u, Scalar p) {
  const Scalar lw = std::log1p(u);
  if (std::abs(p) < 1e-12) return lw;
  return std::expm1(p * lw) / p;
}

// exp(-u) - 1 + u, accurate for small u.
Scalar expm1_minus_u(Scalar u) {
  if (std::abs(u) < 1e-4) {
    // u^2/2 - u^3/6 + u^4/24 - u^5/120
    return u * u * (0.5 + u * (-1.0 / 6.0 + u * (1.0 / 24.0 - u / 120.0)));
  }
  return std::expm1(-u) + u;
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Exponential: return "exponential";
    case KernelFamily::TruncatedPowerLaw: return "truncated_power_law";
    case KernelFamily::SingularPowerLaw: return "singular_power_law";
    case KernelFamily::ShiftedSingular: return "shifted_singular";
    case KernelFamily::Constant: return "constant";
  }
  return "unknown";
}

Kernel::Kernel(KernelFamily family, Scalar eta, Scalar lambda, Scalar gamma, Scalar shift)
    : family_(family), eta_(eta), lambda_(lambda), gamma_(gamma), shift_(shift) {}

Kernel Kernel::exponential(Scalar eta, Scalar lambda) {
  if (!(eta > 0.0) || !(lambda > 0.0))
    throw DomainError("exponential kernel requires eta > 0 and lambda > 0");
  return Kernel(KernelFamily::Exponential, eta, lambda, 0.0, 0.0);
}

Kernel Kernel::truncated_power_law(Scalar eta, Scalar lambda, Scalar gamma) {
  if (!(eta > 0.0) || !(lambda > 0.0) || !(gamma > 0.0))
    throw DomainError("truncated power-law kernel requires eta, lambda, gamma > 0");
  return Kernel(KernelFamily::TruncatedPowerLaw, eta, lambda, gamma, 0.0);
}

Kernel Kernel::singular_power_law(Scalar gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw DomainError("singular power-law kernel requires gamma in (0,1)");
  return Kernel(KernelFamily::SingularPowerLaw, 1.0, 0.0, gamma, 0.0);
}

Kernel Kernel::shifted_singular(Scalar gamma, Scalar shift) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw DomainError("shifted singular kernel requires gamma in (0,1)");
  if (!(shift > 0.0)) throw DomainError("shifted singular kernel requires shift > 0");
  return Kernel(KernelFamily::ShiftedSingular, 1.0, 0.0, gamma, shift);
}

Kernel Kernel::constant_for_tests(Scalar level) {
  if (!(level > 0.0)) throw DomainError("constant test kernel requires level > 0");
  return Kernel(KernelFamily::Constant, level, 0.0, 0.0, 0.0);
}

Scalar Kernel::operator()(Scalar t) const {
  if (t < 0.0) throw DomainError("kernel evaluated at negative time");
  switch (family_) {
    case KernelFamily::Exponential:
      return eta_ * std::exp(-lambda_ * t);
    case KernelFamily::TruncatedPowerLaw:
      return eta_ * std::pow(1.0 + lambda_ * t, -gamma_);
    case KernelFamily::SingularPowerLaw:
      if (t == 0.0) return kInfinity;
      return std::pow(t, -gamma_);
    case KernelFamily::ShiftedSingular:
      return std::pow(t + shift_, -gamma_);
    case KernelFamily::Constant:
      return eta_;
  }
  throw StructuralError("unreachable kernel family");
}

Scalar Kernel::antiderivative(Scalar x) const {
  const Scalar ax = std::abs(x);
  const Scalar s = sign_of(x);
  switch (family_) {
    case KernelFamily::Exponential:
      return s * (eta_ / lambda_) * (-std::expm1(-lambda_ * ax));
    case KernelFamily::TruncatedPowerLaw:
      return s * (eta_ / lambda_) * powm1_over(lambda_ * ax, 1.0 - gamma_);
    case KernelFamily::SingularPowerLaw:
      return s * std::pow(ax, 1.0 - gamma_) / (1.0 - gamma_);
    case KernelFamily::ShiftedSingular:
      return s * (std::pow(ax + shift_, 1.0 - gamma_) - std::pow(shift_, 1.0 - gamma_)) /
             (1.0 - gamma_);
    case KernelFamily::Constant:
      return eta_ * x;
  }
  throw StructuralError("unreachable kernel family");
}

Scalar Kernel::second_antiderivative(Scalar x) const {
  const Scalar ax = std::abs(x);
  switch (family_) {
    case KernelFamily::Exponential:
      return (eta_ / (lambda_ * lambda_)) * expm1_minus_u(lambda_ * ax);
    case KernelFamily::TruncatedPowerLaw: {
      const Scalar u = lambda_ * ax;
      if (std::abs(gamma_ - 1.0) < 1e-12) {
        // int log(1+u): (1+u)log(1+u) - u
        const Scalar l = std::log1p(u);
        return (eta_ / (lambda_ * lambda_)) * ((1.0 + u) * l - u);
      }
      // ((1+u)^(2-g) - 1)/(2-g) - u, all over lambda^2 (1-g)
      const Scalar inner = powm1_over(u, 2.0 - gamma_) - u;
      return (eta_ / (lambda_ * lambda_)) * inner / (1.0 - gamma_);
    }
    case KernelFamily::SingularPowerLaw:
      return std::pow(ax, 2.0 - gamma_) / ((1.0 - gamma_) * (2.0 - gamma_));
    case KernelFamily::ShiftedSingular: {
      const Scalar c = shift_;
      const Scalar head =
          (std::pow(ax + c, 2.0 - gamma_) - std::pow(c, 2.0 - gamma_)) / (2.0 - gamma_);
      return (head - std::pow(c, 1.0 - gamma_) * ax) / (1.0 - gamma_);
    }
    case KernelFamily::Constant:
      return 0.5 * eta_ * ax * ax;
  }
  throw StructuralError("unreachable kernel family");
}

Scalar Kernel::interval_integral(Scalar t, Scalar a, Scalar b) const {
  if (b < a) throw DomainError("interval_integral requires a <= b");
  return antiderivative(t - a) - antiderivative(t - b);
}

namespace {

void validate_times(const Vector& times) {
  if (times.size() < 1) throw DomainError("times must be non-empty");
  for (Index k = 0; k + 1 < times.size(); ++k)
    if (!(times[k] < times[k + 1]))
      throw DomainError("times must be strictly increasing");
}

void validate_interval(const Interval& iv) {
  if (!(iv.lo >= 0.0) || !(iv.hi >= iv.lo))
    throw DomainError("interval must satisfy 0 <= lo <= hi");
}

}  // namespace

Matrix gram_matrix(const Kernel& kernel, const Vector& times) {
  if (kernel.singular_at_zero())
    throw StructuralError(
        "Gram matrix is undefined for a singular kernel: block trades have "
        "infinite impact; use rate-based cell integrals or a shifted surrogate");
  validate_times(times);
  const Index n = times.size();
  Matrix m(n, n);
  for (Index k = 0; k < n; ++k) {
    m(k, k) = kernel(0.0);
    for (Index l = 0; l < k; ++l) {
      m(k, l) = kernel(times[k] - times[l]);
      m(l, k) = m(k, l);
    }
  }
  return m;
}

PdReport check_positive_definite(const Kernel& kernel, const Vector& times) {
  const Matrix m = gram_matrix(kernel, times);
  Eigen::LDLT<Matrix> ldlt(m);
  PdReport report;
  report.min_pivot = ldlt.vectorD().minCoeff();
  const Scalar scale = m.diagonal().maxCoeff();
  report.is_strictly_pd =
      ldlt.info() == Eigen::Success && report.min_pivot > 1e-12 * scale;
  return report;
}

Kernel shift_approximation(const Kernel& kernel, int n) {
  if (kernel.family() != KernelFamily::SingularPowerLaw)
    throw StructuralError("shift approximation applies to singular kernels only");
  if (n < 1) throw DomainError("shift approximation requires n >= 1");
  return Kernel::shifted_singular(kernel.gamma(), 1.0 / static_cast<Scalar>(n));
}

Scalar cell_double_integral(const Kernel& kernel, const Interval& s_iv, const Interval& t_iv) {
  validate_interval(s_iv);
  validate_interval(t_iv);
  if (s_iv.length() == 0.0 || t_iv.length() == 0.0) return 0.0;
  const Scalar p = s_iv.lo, q = s_iv.hi, u = t_iv.lo, v = t_iv.hi;
  return kernel.second_antiderivative(v - p) - kernel.second_antiderivative(u - p) -
         kernel.second_antiderivative(v - q) + kernel.second_antiderivative(u - q);
}

Scalar ordered_cell_integral(const Kernel& kernel, const Interval& s_iv, const Interval& t_iv) {
  validate_interval(s_iv);
  validate_interval(t_iv);
  if (s_iv.length() == 0.0 || t_iv.length() == 0.0) return 0.0;
  if (s_iv.hi <= t_iv.lo) return cell_double_integral(kernel, s_iv, t_iv);
  if (s_iv.lo >= t_iv.hi) return 0.0;

  // Cut both intervals at the common breakpoints; the resulting pieces are
  // pairwise identical or disjoint, so each pair is a full, half, or empty cell.
  std::array<Scalar, 4> cuts = {s_iv.lo, s_iv.hi, t_iv.lo, t_iv.hi};
  std::sort(cuts.begin(), cuts.end());
  Scalar total = 0.0;
  for (int i = 0; i + 1 < 4; ++i) {
    if (!(cuts[i] < cuts[i + 1])) continue;
    const Interval ps{cuts[i], cuts[i + 1]};
    if (ps.lo < s_iv.lo || ps.hi > s_iv.hi) continue;
    for (int j = 0; j + 1 < 4; ++j) {
      if (!(cuts[j] < cuts[j + 1])) continue;
      const Interval qt{cuts[j], cuts[j + 1]};
      if (qt.lo < t_iv.lo || qt.hi > t_iv.hi) continue;
      if (ps.hi <= qt.lo) {
        total += cell_double_integral(kernel, ps, qt);
      } else if (ps.lo == qt.lo && ps.hi == qt.hi) {
        total += 0.5 * cell_double_integral(kernel, ps, qt);
      }
    }
  }
  return total;
}

namespace {

// Tensor 3x3 Gauss-Legendre estimate on a rectangle.
Scalar gauss3x3(const Kernel& kernel, const Interval& s_iv, const Interval& t_iv) {
  static const std::array<Scalar, 3> nodes = {-0.774596669241483377, 0.0,
                                              0.774596669241483377};
  static const std::array<Scalar, 3> weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const Scalar sc = 0.5 * (s_iv.lo + s_iv.hi), sh = 0.5 * s_iv.length();
  const Scalar tc = 0.5 * (t_iv.lo + t_iv.hi), th = 0.5 * t_iv.length();
  Scalar sum = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      sum += weights[i] * weights[j] * kernel(std::abs((tc + th * nodes[j]) - (sc + sh * nodes[i])));
  return sum * sh * th;
}

struct QuadAccumulator {
  Scalar value = 0.0;
  Scalar error_bound = 0.0;
  long cells = 0;
};

void quad_recurse(const Kernel& kernel, const Interval& s_iv, const Interval& t_iv,
                  Scalar tol, int depth, QuadAccumulator& acc) {
  const Scalar coarse = gauss3x3(kernel, s_iv, t_iv);
  const Scalar sm = 0.5 * (s_iv.lo + s_iv.hi), tm = 0.5 * (t_iv.lo + t_iv.hi);
  const std::array<Interval, 2> ss = {Interval{s_iv.lo, sm}, Interval{sm, s_iv.hi}};
  const std::array<Interval, 2> ts = {Interval{t_iv.lo, tm}, Interval{tm, t_iv.hi}};
  Scalar fine = 0.0;
  for (const auto& a : ss)
    for (const auto& b : ts) fine += gauss3x3(kernel, a, b);
  const Scalar err = std::abs(fine - coarse);
  if (err <= tol || depth >= 30) {
    acc.value += fine;
    acc.error_bound += err;
    acc.cells += 1;
    return;
  }
  for (const auto& a : ss)
    for (const auto& b : ts) quad_recurse(kernel, a, b, 0.25 * tol, depth + 1, acc);
}

}  // namespace

Scalar cell_double_integral_quadrature(const Kernel& kernel, const Interval& s_iv,
                                       const Interval& t_iv, Scalar abs_tol) {
  if (kernel.singular_at_zero())
    throw StructuralError("quadrature requires a bounded kernel");
  validate_interval(s_iv);
  validate_interval(t_iv);
  if (s_iv.length() == 0.0 || t_iv.length() == 0.0) return 0.0;

  // Pre-split across the diagonal t = s so the kink lies on cell boundaries
  // wherever possible; remaining diagonal cells shrink adaptively.
  std::vector<Scalar> s_cuts = {s_iv.lo, s_iv.hi};
  std::vector<Scalar> t_cuts = {t_iv.lo, t_iv.hi};
  const Scalar olo = std::max(s_iv.lo, t_iv.lo), ohi = std::min(s_iv.hi, t_iv.hi);
  if (olo < ohi) {
    for (Scalar c : {olo, ohi}) {
      if (c > s_iv.lo && c < s_iv.hi) s_cuts.insert(s_cuts.end() - 1, c);
      if (c > t_iv.lo && c < t_iv.hi) t_cuts.insert(t_cuts.end() - 1, c);
    }
    std::sort(s_cuts.begin(), s_cuts.end());
    std::sort(t_cuts.begin(), t_cuts.end());
  }

  QuadAccumulator acc;
  const int n_cells =
      static_cast<int>((s_cuts.size() - 1) * (t_cuts.size() - 1));
  for (std::size_t i = 0; i + 1 < s_cuts.size(); ++i)
    for (std::size_t j = 0; j + 1 < t_cuts.size(); ++j)
      quad_recurse(kernel, Interval{s_cuts[i], s_cuts[i + 1]},
                   Interval{t_cuts[j], t_cuts[j + 1]}, abs_tol / n_cells, 0, acc);
  if (acc.error_bound > abs_tol)
    throw NumericalError("cell quadrature did not reach the requested tolerance",
                         acc.error_bound);
  return acc.value;
}

}  // namespace exeq
