#include "qlocal/bounds.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

using namespace qlocal;
using doctest::Approx;

// Reference values in this file were computed independently with 30-digit
// arithmetic from the closed-form definitions and frozen before wiring the
// checks up.

namespace {
BoundParams chain_params() {
  BoundParams p;
  p.range_a = 1;
  p.max_neighbors = 3;
  p.term_norm = 1;
  p.growth_prefactor = 2;
  p.growth_exponent = 0;
  return p;
}
}  // namespace

TEST_CASE("propagation speed") {
  // e * Z * ||l||
  CHECK(lr_velocity(chain_params()) ==
        Approx(8.15484548537713570608086241406).epsilon(1e-15));
  BoundParams p = chain_params();
  p.max_neighbors = 5;
  p.term_norm = 0.5;
  CHECK(lr_velocity(p) == Approx(std::exp(1.0) * 2.5).epsilon(1e-15));
}

TEST_CASE("light-cone envelope") {
  // Z=3, ||l||=1, both extension volumes 2, distance/a = 4, t - r = 0.2
  const double expect = 0.0623809080579057228938109202599;
  CHECK(lr_bound(chain_params(), 2, 2, 4.0, 0.0, 0.2, 1.0, 1.0) ==
        Approx(expect).epsilon(1e-13));

  SUBCASE("scales linearly in both norms") {
    CHECK(lr_bound(chain_params(), 2, 2, 4.0, 0.0, 0.2, 2.0, 3.0) ==
          Approx(6 * expect).epsilon(1e-13));
  }
  SUBCASE("grows with time, shrinks with distance") {
    const BoundParams p = chain_params();
    CHECK(lr_bound(p, 2, 2, 4.0, 0.0, 0.4, 1, 1) > expect);
    CHECK(lr_bound(p, 2, 2, 5.0, 0.0, 0.2, 1, 1) < expect);
  }
  SUBCASE("r = t gives the distance-only envelope") {
    const BoundParams p = chain_params();
    const double at0 = lr_bound(p, 2, 2, 4.0, 0.7, 0.7, 1, 1);
    CHECK(at0 == Approx((2.0 / 3.0) * std::exp(-4.0)).epsilon(1e-13));
  }
  SUBCASE("zero range with positive distance: disconnected, zero bound") {
    BoundParams p = chain_params();
    p.range_a = 0;
    CHECK(lr_bound(p, 2, 2, 4.0, 0.0, 0.2, 1, 1) == 0.0);
  }
  SUBCASE("needs r <= t") {
    CHECK_THROWS_AS(lr_bound(chain_params(), 2, 2, 4.0, 1.0, 0.5, 1, 1),
                    precondition_error);
  }
}

TEST_CASE("truncation envelope") {
  // kappa=0, M=2, Z=3, D=5, v(t-r)=1: evaluated at t-r = 1/velocity
  BoundParams p = chain_params();
  const double tr = 1.0 / lr_velocity(p);
  CHECK(quasi_locality_bound(p, 5, 0.0, tr, 1.0) ==
        Approx(0.0244208518516455737249573616977).epsilon(1e-12));

  SUBCASE("validity threshold: D > 2 kappa + 1") {
    CHECK_THROWS_AS(quasi_locality_bound(p, 1, 0.0, 0.1, 1.0), precondition_error);
    CHECK(quasi_locality_bound(p, 2, 0.0, 0.1, 1.0) > 0);  // kappa = 0 admits D = 2
    BoundParams p1 = p;
    p1.growth_exponent = 1;
    CHECK_THROWS_AS(quasi_locality_bound(p1, 3, 0.0, 0.1, 1.0), precondition_error);
    CHECK(quasi_locality_bound(p1, 4, 0.0, 0.1, 1.0) > 0);
  }
  SUBCASE("monotone: deeper cones give smaller envelopes") {
    CHECK(quasi_locality_bound(p, 6, 0.0, tr, 1.0) <
          quasi_locality_bound(p, 5, 0.0, tr, 1.0));
  }
  SUBCASE("scales linearly in the observable norm") {
    CHECK(quasi_locality_bound(p, 5, 0.0, tr, 2.0) ==
          Approx(2 * quasi_locality_bound(p, 5, 0.0, tr, 1.0)).epsilon(1e-14));
  }
}

TEST_CASE("single-slice product-formula envelope") {
  // dt=0.1, Z=3, volume=5, ||l||=1
  CHECK(slice_trotter_bound(0.1, 3, 5, 1.0) ==
        Approx(0.165775637711347143721756173974).epsilon(1e-13));
  // quadratic in dt up to the exponential correction
  const double quarter = slice_trotter_bound(0.05, 3, 5, 1.0);
  CHECK(quarter < 0.3 * slice_trotter_bound(0.1, 3, 5, 1.0));
  CHECK(slice_trotter_bound(0.0, 3, 5, 1.0) == 0.0);
}

TEST_CASE("whole-circuit envelope") {
  // five slices t_n = 0.1 n, depths 4..8, volumes 3,5,...,11, kappa=0, M=2, Z=5:
  // total = sum_n [ 0.8 exp(13.59.. t_n - D_n) + 0.01*5*vol_n*e^0.1 ]
  BoundParams p;
  p.range_a = 1;
  p.max_neighbors = 5;
  p.term_norm = 1;
  p.growth_prefactor = 2;
  p.growth_exponent = 0;
  std::vector<double> times{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> depths{4, 5, 6, 7, 8};
  std::vector<int> vols{3, 5, 7, 9, 11};
  TrotterBoundBreakdown b = trotter_total_bound(p, times, depths, vols);
  CHECK(b.total == Approx(2.59721442668253172372228169251).epsilon(1e-13));
  CHECK(b.total == Approx(b.truncation + b.trotter).epsilon(1e-15));
  CHECK(b.truncation > 0);
  CHECK(b.trotter > 0);

  SUBCASE("infinite depth removes the truncation part") {
    std::vector<double> inf_depths(5, std::numeric_limits<double>::infinity());
    TrotterBoundBreakdown nb = trotter_total_bound(p, times, inf_depths, vols);
    CHECK(nb.truncation == 0.0);
    CHECK(nb.total == Approx(nb.trotter).epsilon(1e-15));
    CHECK(nb.trotter == Approx(b.trotter).epsilon(1e-15));
  }
  SUBCASE("argument lengths must be consistent") {
    CHECK_THROWS_AS(trotter_total_bound(p, times, depths, {3, 5}), precondition_error);
    CHECK_THROWS_AS(trotter_total_bound(p, {0.0, -0.1}, {4}, {3}), precondition_error);
  }
}

TEST_CASE("exponential tail: exact sum and envelope") {
  SUBCASE("frozen values") {
    TailSum t = partial_exp_sum(1.0, 2);
    CHECK(t.exact == Approx(0.718281828459045235360287471353).epsilon(1e-14));
    CHECK(t.bound == Approx(2.05090637269250134037699684435).epsilon(1e-14));
    TailSum t10 = partial_exp_sum(1.0, 10);
    CHECK(t10.exact == Approx(3.02885852995501380945779470258e-7).epsilon(1e-13));
    CHECK(t10.bound == Approx(6.88002441365434844513103117822e-4).epsilon(1e-13));
  }
  SUBCASE("start 0 gives the full series e^x") {
    TailSum t = partial_exp_sum(0.7, 0);
    CHECK(t.exact == Approx(std::exp(0.7)).epsilon(1e-14));
  }
  SUBCASE("tiny but positive far into the tail") {
    TailSum t = partial_exp_sum(0.1, 30);
    CHECK(t.exact > 0);
    CHECK(t.exact < 1e-55);
    CHECK(t.exact <= t.bound);
  }
  SUBCASE("envelope covers the exact value on a grid") {
    for (double x = 0.0; x <= 5.0; x += 0.5)
      for (int n : {0, 1, 2, 5, 10, 20, 30}) {
        TailSum t = partial_exp_sum(x, n);
        CHECK(t.exact <= t.bound * (1 + 1e-12) + 1e-300);
      }
  }
  SUBCASE("negative start is refused") {
    CHECK_THROWS_AS(partial_exp_sum(1.0, -1), precondition_error);
  }
}

TEST_CASE("polynomially weighted geometric tail") {
  SUBCASE("frozen values") {
    TailSum t = exp_tail_sum(1.0, 4);
    CHECK(t.exact == Approx(0.13276238145953278462386351566).epsilon(1e-14));
    CHECK(t.bound == Approx(0.398296546942911543834739325201).epsilon(1e-14));
    TailSum t0 = exp_tail_sum(0.0, 1);
    CHECK(t0.exact == Approx(0.581976706869326424385002005109).epsilon(1e-14));
    CHECK(t0.bound == Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("kappa = 0: geometric closed form q^D / (1 - q)") {
    const double q = std::exp(-1.0);
    for (int d = 1; d <= 30; ++d) {
      TailSum t = exp_tail_sum(0.0, d);
      const double closed = std::pow(q, d) / (1 - q);
      CHECK(t.exact == Approx(closed).epsilon(1e-13));
      CHECK(t.exact <= t.bound * (1 + 1e-12));
    }
  }
  SUBCASE("kappa = 1: closed form q^D (D - (D-1) q) / (1-q)^2") {
    const double q = std::exp(-1.0);
    for (int d = 4; d <= 30; ++d) {
      TailSum t = exp_tail_sum(1.0, d);
      const double closed = std::pow(q, d) * (d - (d - 1) * q) / ((1 - q) * (1 - q));
      CHECK(t.exact == Approx(closed).epsilon(1e-13));
      CHECK(t.exact <= t.bound * (1 + 1e-12));
    }
  }
  SUBCASE("validity: start > 2 kappa + 1, relaxed to start >= 1 at kappa = 0") {
    CHECK_THROWS_AS(exp_tail_sum(0.0, 0), precondition_error);
    CHECK(exp_tail_sum(0.0, 1).exact > 0);
    CHECK_THROWS_AS(exp_tail_sum(1.0, 3), precondition_error);
    CHECK(exp_tail_sum(1.0, 4).exact > 0);
    CHECK_THROWS_AS(exp_tail_sum(0.5, 2), precondition_error);
    CHECK(exp_tail_sum(0.5, 3).exact > 0);
    CHECK_THROWS_AS(exp_tail_sum(-0.5, 5), precondition_error);
  }
  SUBCASE("monotone decrease in the start index") {
    for (double kappa : {0.0, 0.5, 1.0, 2.0}) {
      const int first = kappa == 0.0 ? 1 : static_cast<int>(2 * kappa + 1) + 1;
      double prev = std::numeric_limits<double>::infinity();
      for (int d = first; d <= 20; ++d) {
        TailSum t = exp_tail_sum(kappa, d);
        CHECK(t.exact < prev);
        prev = t.exact;
      }
    }
  }
}
