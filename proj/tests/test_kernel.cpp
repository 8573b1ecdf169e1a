#include "exeq/kernel.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace exeq;

namespace {

// Composite 2x2 Gauss rule on an m x m partition (~1e4 points at m = 50),
// independent of the closed forms under test.
Scalar brute_cell_integral(const Kernel& kernel, const Interval& s_iv, const Interval& t_iv,
                           int m = 50) {
  const Scalar g = 1.0 / std::sqrt(3.0);
  const Scalar hs = s_iv.length() / m, ht = t_iv.length() / m;
  Scalar sum = 0.0;
  for (int i = 0; i < m; ++i) {
    const Scalar sc = s_iv.lo + (i + 0.5) * hs;
    for (int j = 0; j < m; ++j) {
      const Scalar tc = t_iv.lo + (j + 0.5) * ht;
      for (int a = -1; a <= 1; a += 2)
        for (int b = -1; b <= 1; b += 2)
          sum += kernel(std::abs((tc + 0.5 * ht * g * b) - (sc + 0.5 * hs * g * a)));
    }
  }
  return sum * hs * ht / 4.0;
}

}  // namespace

TEST_CASE("kernel evaluation by family") {
  CHECK(Kernel::exponential(2.0, 1.0)(0.0) == doctest::Approx(2.0));
  CHECK(Kernel::truncated_power_law(1.0, 1.0, 2.0)(1.0) == doctest::Approx(0.25));
  CHECK(Kernel::singular_power_law(0.5)(0.0) == kInfinity);
  CHECK(Kernel::singular_power_law(0.5)(4.0) == doctest::Approx(0.5));
  CHECK(Kernel::shifted_singular(0.5, 0.25)(0.0) == doctest::Approx(2.0));
  CHECK(Kernel::constant_for_tests(3.0)(17.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(Kernel::exponential(1.0, 1.0)(-0.1), DomainError);
  CHECK_THROWS_AS(Kernel::singular_power_law(1.5), DomainError);
}

TEST_CASE("eval is non-increasing in t for every family") {
  const Kernel kernels[] = {
      Kernel::exponential(1.3, 0.7), Kernel::truncated_power_law(1.0, 2.0, 0.8),
      Kernel::singular_power_law(0.4), Kernel::shifted_singular(0.6, 0.05)};
  std::mt19937 rng(7);
  std::uniform_real_distribution<Scalar> u(1e-6, 20.0);
  for (const Kernel& k : kernels) {
    for (int i = 0; i < 200; ++i) {
      Scalar a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      CHECK(k(a) >= k(b));
    }
  }
}

TEST_CASE("gram matrix") {
  SUBCASE("exponential two-point") {
    Vector times(2);
    times << 0.0, 1.0;
    const Matrix m = gram_matrix(Kernel::exponential(1.0, 1.0), times);
    CHECK(m(0, 0) == doctest::Approx(1.0));
    CHECK(m(1, 1) == doctest::Approx(1.0));
    CHECK(m(0, 1) == doctest::Approx(std::exp(-1.0)));
    CHECK(m(1, 0) == m(0, 1));
  }
  SUBCASE("single point is [[G(0)]]") {
    Vector t0(1);
    t0 << 0.7;
    const Matrix m = gram_matrix(Kernel::truncated_power_law(2.0, 1.0, 1.0), t0);
    CHECK(m.rows() == 1);
    CHECK(m(0, 0) == doctest::Approx(2.0));
  }
  SUBCASE("constant kernel gives all-ones") {
    Vector times(3);
    times << 0.0, 1.0, 2.0;
    const Matrix m = gram_matrix(Kernel::constant_for_tests(1.0), times);
    CHECK((m - Matrix::Ones(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("singular kernel is rejected") {
    Vector times(2);
    times << 0.0, 1.0;
    CHECK_THROWS_AS(gram_matrix(Kernel::singular_power_law(0.5), times), StructuralError);
  }
}

TEST_CASE("positive definiteness checks") {
  std::mt19937 rng(42);

  SUBCASE("exponential on 100 random distinct times") {
    std::uniform_real_distribution<Scalar> u(0.0, 10.0);
    std::vector<Scalar> raw(100);
    for (auto& t : raw) t = u(rng);
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    Vector times = Eigen::Map<Vector>(raw.data(), static_cast<Index>(raw.size()));
    const PdReport rep = check_positive_definite(Kernel::exponential(1.0, 1.0), times);
    CHECK(rep.is_strictly_pd);
    CHECK(rep.min_pivot > 0.0);
  }

  SUBCASE("constant kernel fails on two or more points") {
    Vector times(3);
    times << 0.0, 0.5, 2.0;
    const PdReport rep = check_positive_definite(Kernel::constant_for_tests(1.0), times);
    CHECK_FALSE(rep.is_strictly_pd);
  }

  SUBCASE("truncated power law agrees with eigenvalue brute force") {
    Vector times(3);
    times << 0.0, 0.5, 1.0;
    const Kernel k = Kernel::truncated_power_law(1.0, 1.0, 0.5);
    const PdReport rep = check_positive_definite(k, times);
    CHECK(rep.is_strictly_pd);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_matrix(k, times));
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }

  SUBCASE("exponential and TPL gram matrices up to 200 times stay strictly PD") {
    std::uniform_real_distribution<Scalar> u(0.0, 10.0);
    for (const Kernel& k :
         {Kernel::exponential(0.8, 2.0), Kernel::truncated_power_law(1.0, 1.0, 1.4)}) {
      std::vector<Scalar> raw(200);
      for (auto& t : raw) t = u(rng);
      std::sort(raw.begin(), raw.end());
      raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
      Vector times = Eigen::Map<Vector>(raw.data(), static_cast<Index>(raw.size()));
      CHECK(check_positive_definite(k, times).is_strictly_pd);
    }
  }
}

TEST_CASE("shift approximation of singular kernels") {
  const Kernel singular = Kernel::singular_power_law(0.5);
  CHECK(shift_approximation(singular, 4)(0.0) == doctest::Approx(2.0));
  CHECK(shift_approximation(singular, 1)(3.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(shift_approximation(Kernel::exponential(1.0, 1.0), 4), StructuralError);

  SUBCASE("surrogates increase pointwise in n and stay below the parent") {
    const Kernel g10 = shift_approximation(singular, 10);
    const Kernel g100 = shift_approximation(singular, 100);
    for (Scalar t : {0.0, 0.01, 0.3, 1.0, 5.0}) {
      CHECK(g10(t) <= g100(t));
      CHECK(g100(t) <= singular(t));
    }
  }
}

TEST_CASE("cell double integral closed forms") {
  SUBCASE("exponential unit square equals 2/e") {
    const Kernel k = Kernel::exponential(1.0, 1.0);
    const Scalar v = cell_double_integral(k, Interval{0.0, 1.0}, Interval{0.0, 1.0});
    CHECK(v == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(v == doctest::Approx(brute_cell_integral(k, {0.0, 1.0}, {0.0, 1.0})).epsilon(1e-4));
  }
  SUBCASE("singular power law unit square equals 8/3") {
    const Kernel k = Kernel::singular_power_law(0.5);
    const Scalar v = cell_double_integral(k, Interval{0.0, 1.0}, Interval{0.0, 1.0});
    CHECK(v == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
    // shifted surrogates must increase monotonically to the singular value
    Scalar prev = 0.0;
    for (int n : {100, 10000, 1000000, 100000000}) {
      const Scalar approx =
          cell_double_integral(shift_approximation(k, n), {0.0, 1.0}, {0.0, 1.0});
      CHECK(approx > prev);
      CHECK(approx < v);
      prev = approx;
    }
    CHECK(v - prev < 1e-3);
  }
  SUBCASE("degenerate rectangles vanish") {
    const Kernel k = Kernel::truncated_power_law(1.0, 1.0, 2.0);
    CHECK(cell_double_integral(k, Interval{2.0, 2.0}, Interval{5.0, 6.0}) == 0.0);
    CHECK(cell_double_integral(k, Interval{0.0, 1.0}, Interval{3.0, 3.0}) == 0.0);
  }
}

TEST_CASE("cell integral symmetry and quadrature agreement") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<Scalar> u(0.0, 3.0);
  const Kernel kernels[] = {Kernel::exponential(1.5, 0.8),
                            Kernel::truncated_power_law(1.0, 2.0, 1.0),
                            Kernel::truncated_power_law(0.5, 1.0, 2.0),
                            Kernel::constant_for_tests(0.7)};
  for (const Kernel& k : kernels) {
    for (int i = 0; i < 10; ++i) {
      Scalar a = u(rng), b = u(rng), c = u(rng), d = u(rng);
      if (a > b) std::swap(a, b);
      if (c > d) std::swap(c, d);
      const Interval s{a, b}, t{c, d};
      const Scalar st = cell_double_integral(k, s, t);
      CHECK(std::abs(st - cell_double_integral(k, t, s)) < 1e-12);
      CHECK(std::abs(st - cell_double_integral_quadrature(k, s, t)) < 1e-9);
    }
  }
  CHECK_THROWS_AS(cell_double_integral_quadrature(Kernel::singular_power_law(0.5),
                                                  Interval{0.0, 1.0}, Interval{0.0, 1.0}),
                  StructuralError);
}

TEST_CASE("ordered cell integral") {
  const Kernel k = Kernel::exponential(1.0, 1.0);
  SUBCASE("disjoint ordered intervals give the full cell") {
    const Scalar full = cell_double_integral(k, {0.0, 1.0}, {2.0, 3.0});
    CHECK(ordered_cell_integral(k, {0.0, 1.0}, {2.0, 3.0}) == doctest::Approx(full));
    CHECK(ordered_cell_integral(k, {2.0, 3.0}, {0.0, 1.0}) == 0.0);
  }
  SUBCASE("identical intervals give half the cell") {
    const Scalar full = cell_double_integral(k, {1.0, 2.0}, {1.0, 2.0});
    CHECK(ordered_cell_integral(k, {1.0, 2.0}, {1.0, 2.0}) == doctest::Approx(0.5 * full));
  }
  SUBCASE("partial overlap splits consistently") {
    // s in [0,2], t in [1,3]: ordered part + mirrored part = full cell
    const Scalar full = cell_double_integral(k, {0.0, 2.0}, {1.0, 3.0});
    const Scalar fwd = ordered_cell_integral(k, {0.0, 2.0}, {1.0, 3.0});
    const Scalar bwd = ordered_cell_integral(k, {1.0, 3.0}, {0.0, 2.0});
    CHECK(fwd + bwd == doctest::Approx(full).epsilon(1e-13));
  }
}

TEST_CASE("interval integral matches quadrature") {
  const Kernel k = Kernel::truncated_power_law(1.0, 1.0, 0.5);
  // int_1^2 G(|1.5 - s|) ds by fine midpoint rule
  Scalar brute = 0.0;
  const int m = 20000;
  for (int i = 0; i < m; ++i) {
    const Scalar s = 1.0 + (i + 0.5) / m;
    brute += k(std::abs(1.5 - s)) / m;
  }
  CHECK(k.interval_integral(1.5, 1.0, 2.0) == doctest::Approx(brute).epsilon(1e-6));
}
