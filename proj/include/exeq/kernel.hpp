#pragma once

#include <string>

#include "exeq/types.hpp"

namespace exeq {

enum class KernelFamily {
  Exponential,       // G(t) = eta * exp(-lambda * t)
  TruncatedPowerLaw, // G(t) = eta * (1 + lambda * t)^(-gamma)
  SingularPowerLaw,  // G(t) = t^(-gamma), gamma in (0,1); G(0) = +inf
  ShiftedSingular,   // G(t) = (t + shift)^(-gamma), bounded surrogate
  Constant,          // G(t) = eta; test-only, not strictly positive definite
};

std::string to_string(KernelFamily family);

/// Impact decay kernel. Immutable after construction; all operations are
/// pure, so a kernel can be shared freely across threads.
///
/// Every non-constant family is non-increasing and convex on (0, inf) and
/// therefore strictly positive definite. The constant family deliberately
/// violates that and exists only to exercise negative paths in tests; it is
/// gated behind an explicitly named factory.
class Kernel {
 public:
  static Kernel exponential(Scalar eta, Scalar lambda);
  static Kernel truncated_power_law(Scalar eta, Scalar lambda, Scalar gamma);
  static Kernel singular_power_law(Scalar gamma);
  static Kernel shifted_singular(Scalar gamma, Scalar shift);
  static Kernel constant_for_tests(Scalar level);

  KernelFamily family() const { return family_; }
  Scalar eta() const { return eta_; }
  Scalar lambda() const { return lambda_; }
  Scalar gamma() const { return gamma_; }
  Scalar shift() const { return shift_; }

  /// True iff G(0) is the infinity sentinel (SingularPowerLaw only).
  bool singular_at_zero() const { return family_ == KernelFamily::SingularPowerLaw; }

  /// G(t). Requires t >= 0. For a singular kernel at t = 0 this returns the
  /// +infinity sentinel; callers must never feed that value to arithmetic.
  Scalar operator()(Scalar t) const;

  /// Odd first antiderivative: F1(x) = sign(x) * int_0^|x| G(u) du.
  /// Finite for every family (the singularity at 0 is integrable).
  Scalar antiderivative(Scalar x) const;

  /// Even second antiderivative: F2(x) = int_0^|x| F1(v) dv, F2(0) = 0.
  Scalar second_antiderivative(Scalar x) const;

  /// int_a^b G(|t - s|) ds for a <= b. Finite even when t lies inside [a, b]
  /// for singular kernels.
  Scalar interval_integral(Scalar t, Scalar a, Scalar b) const;

 private:
  Kernel(KernelFamily family, Scalar eta, Scalar lambda, Scalar gamma, Scalar shift);

  KernelFamily family_;
  Scalar eta_;
  Scalar lambda_;
  Scalar gamma_;
  Scalar shift_;
};

/// Closed time interval [lo, hi], lo <= hi, lo >= 0.
struct Interval {
  Scalar lo = 0.0;
  Scalar hi = 0.0;
  Scalar length() const { return hi - lo; }
};

struct PdReport {
  Scalar min_pivot = 0.0;
  bool is_strictly_pd = false;
};

/// Symmetric matrix M[k][l] = G(|t_k - t_l|) for strictly increasing times.
/// Singular kernels are rejected: block trades are inadmissible under them,
/// so their Gram matrix has no meaning; use the rate-based cell integrals.
Matrix gram_matrix(const Kernel& kernel, const Vector& times);

/// Strict positive definiteness of the Gram matrix on `times`, decided by a
/// symmetric factorization: strictly PD iff every pivot exceeds
/// 1e-12 * (largest diagonal entry). Failure is a report, not an error.
PdReport check_positive_definite(const Kernel& kernel, const Vector& times);

/// Bounded surrogate G^n(t) = G(t + 1/n) for a singular kernel; G^n increases
/// pointwise to G as n grows.
Kernel shift_approximation(const Kernel& kernel, int n);

/// Integral of G(|t - s|) over s in s_iv, t in t_iv, in closed form.
Scalar cell_double_integral(const Kernel& kernel, const Interval& s_iv, const Interval& t_iv);

/// Same integral restricted to the ordered region {s < t}.
Scalar ordered_cell_integral(const Kernel& kernel, const Interval& s_iv, const Interval& t_iv);

/// Adaptive-bisection quadrature for the cell integral, used as the fallback
/// for kernels without a closed form and as an independent cross-check.
/// Splits across the diagonal t = s where the integrand kinks. Bounded
/// kernels only. Throws NumericalError with the achieved tolerance if the
/// subdivision budget is exhausted.
Scalar cell_double_integral_quadrature(const Kernel& kernel, const Interval& s_iv,
                                       const Interval& t_iv, Scalar abs_tol = 1e-10);

}  // namespace exeq
