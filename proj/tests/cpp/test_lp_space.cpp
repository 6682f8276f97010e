#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "treeflow/errors.hpp"
#include "treeflow/lp_space.hpp"

using namespace treeflow;
using testutil::make_chain;
using testutil::make_regular;

TEST_CASE("config validation") {
  LpConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.p = 0.5;
  CHECK_THROWS_AS(cfg.validate(), Error);  // InvalidExponent
  cfg.p = 2.0;
  cfg.N = 48;  // not a power of two
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("grid function container semantics") {
  GridFunction f(8);
  CHECK(f.is_zero());
  CHECK(f.support_size() == 0);
  f.at(3)[2] = 1.5;
  CHECK_FALSE(f.is_zero());
  CHECK(f.support_size() == 1);
  CHECK(f.find(3) != nullptr);
  CHECK(f.find(4) == nullptr);
  f.at(5);  // creates an all-zero row
  CHECK(f.support_size() == 2);
  f.prune();
  CHECK(f.support_size() == 1);  // zero row dropped
}

TEST_CASE("vector arithmetic helpers") {
  GridFunction a(4), b(4);
  a.at(0) = {1.0, 2.0, 3.0, 4.0};
  b.at(0) = {0.5, 0.5, 0.5, 0.5};
  b.at(1) = {1.0, 0.0, 0.0, 0.0};
  GridFunction c = add_scaled(a, 2.0, b);
  CHECK(c.at(0) == std::vector<double>{2.0, 3.0, 4.0, 5.0});
  CHECK(c.at(1) == std::vector<double>{2.0, 0.0, 0.0, 0.0});
  GridFunction d = subtract(c, a);
  CHECK(max_abs_difference(d, add_scaled(GridFunction(4), 2.0, b)) == 0.0);
  CHECK(max_abs(d) == 2.0);
}

TEST_CASE("norm against the direct-loop oracle") {
  DirectedTree t = make_regular(2, 4);
  WeightFamily W = WeightFamily::exponential(t, -0.7, 0.2);
  std::mt19937_64 rng(99);
  for (Quadrature q : {Quadrature::rectangle, Quadrature::trapezoid})
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      LpConfig cfg;
      cfg.p = p;
      cfg.N = 16;
      cfg.quadrature = q;
      GridFunction f = random_test_function(t, rng(), 4, cfg);
      double got = norm(f, t, W, cfg);
      double want = testutil::oracle_norm(f, W, p, cfg);
      CHECK(got == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("quadrature converges on a smooth weighted integrand") {
  // ||1_[e0]||_2^2 = int_0^1 e^{-s} ds = 1 - e^{-1}
  DirectedTree t = make_chain(2);
  WeightFamily W = WeightFamily::exponential(t, -1.0);
  const double exact = 1.0 - std::exp(-1.0);
  double prev_err = 1.0;
  for (int N : {16, 64, 256}) {
    LpConfig cfg;
    cfg.N = N;
    GridFunction f(N);
    f.at(0).assign(N, 1.0);
    double err = std::abs(std::pow(norm(f, t, W, cfg), 2.0) - exact);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 2e-3);
}

TEST_CASE("norm splitting inequality holds on both kinds") {
  LpConfig cfg;
  cfg.N = 8;
  DirectedTree r = make_regular(2, 5);
  WeightFamily Wr = WeightFamily::constant(r, 1.0);
  DirectedTree u = make_regular(2, 3, 3);
  WeightFamily Wu = WeightFamily::exponential(u, -0.5);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    GridFunction fr = random_test_function(r, rng(), 3, cfg);
    GridFunction fu = random_test_function(u, rng(), 3, cfg);
    for (int n : {1, 2}) {
      CHECK(check_disnorm(fr, r, Wr, n, cfg));
      CHECK(check_disnorm(fu, u, Wu, n, cfg));
    }
  }
}

TEST_CASE("random test functions are deterministic and bounded") {
  DirectedTree t = make_regular(3, 4);
  LpConfig cfg;
  cfg.N = 8;
  GridFunction a = random_test_function(t, 42, 3, cfg);
  GridFunction b = random_test_function(t, 42, 3, cfg);
  CHECK(max_abs_difference(a, b) == 0.0);
  CHECK_FALSE(a.is_zero());
  CHECK(a.support_size() <= 3);
  CHECK(max_abs(a) <= 1.0);
  GridFunction c = random_test_function(t, 43, 3, cfg);
  CHECK(max_abs_difference(a, c) > 0.0);
}
