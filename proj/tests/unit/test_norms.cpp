#include "doctest.h"

#include "../support/helpers.hpp"
#include "../support/oracles.hpp"

#include <cmath>

using namespace stratclass;
using testing_support::vec;

TEST_CASE("norm values") {
  CHECK(CostModel(NormKind::l2(), 1.0, 2).norm(vec({3, 4})) == doctest::Approx(5.0));
  CHECK(CostModel(NormKind::l1(), 1.0, 2).norm(vec({1, -2})) == doctest::Approx(3.0));
  CHECK(CostModel(NormKind::weighted_l1(vec({2, 1})), 1.0, 2).norm(vec({1, -2})) == doctest::Approx(4.0));
  CHECK(CostModel(NormKind::linf(), 1.0, 3).norm(vec({1, -7, 2})) == doctest::Approx(7.0));
  CHECK(CostModel(NormKind::lp(3.0), 1.0, 2).norm(vec({1, 1})) == doctest::Approx(std::cbrt(2.0)));
}

TEST_CASE("dual norm values") {
  CHECK(CostModel(NormKind::l1(), 1.0, 2).dual_norm(vec({2, -5})) == doctest::Approx(5.0));
  CHECK(CostModel(NormKind::l2(), 1.0, 2).dual_norm(vec({3, 4})) == doctest::Approx(5.0));
  CHECK(CostModel(NormKind::lp(3.0), 1.0, 2).dual_norm(vec({1, 1})) == doctest::Approx(std::pow(2.0, 2.0 / 3.0)));
  CHECK(CostModel(NormKind::linf(), 1.0, 2).dual_norm(vec({2, -5})) == doctest::Approx(7.0));
  // Weighted l-infinity with inverse weights.
  CHECK(CostModel(NormKind::weighted_l1(vec({2, 1})), 1.0, 2).dual_norm(vec({4, -1})) == doctest::Approx(2.0));
}

TEST_CASE("manipulation direction examples") {
  CHECK(CostModel(NormKind::l2(), 1.0, 2).manipulation_direction(vec({3, 4})).isApprox(vec({0.6, 0.8})));
  CHECK(CostModel(NormKind::l1(), 1.0, 2).manipulation_direction(vec({2, -5})) == vec({0, -1}));
  std::mt19937_64 gen(7);
  for (const auto& nk : testing_support::all_norms(gen, 2)) {
    CHECK(CostModel(nk, 1.0, 2).manipulation_direction(vec({0, 0})) == vec({0, 0}));
  }
  // Ties: lowest index, and a zero coordinate never wins over a positive one.
  CHECK(CostModel(NormKind::l1(), 1.0, 3).manipulation_direction(vec({-2, 2, 2})) == vec({-1, 0, 0}));
  CHECK(CostModel(NormKind::linf(), 1.0, 3).manipulation_direction(vec({0, -1, 2})) == vec({1, -1, 1}));
}

TEST_CASE("l1 direction matches brute force over the ball's vertices") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 500; ++trial) {
    Vector y = testing_support::gaussian(gen, 4);
    if (trial % 5 == 0) y[2] = y[0];  // force some ties in magnitude
    CostModel m(NormKind::l1(), 1.0, 4);
    CHECK(m.manipulation_direction(y) == oracle::l1_direction(y));
  }
}

TEST_CASE("linf dual norm matches brute force over sign vectors") {
  std::mt19937_64 gen(12);
  CostModel m(NormKind::linf(), 1.0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    Vector y = testing_support::gaussian(gen, 5);
    CHECK(m.dual_norm(y) == doctest::Approx(oracle::linf_support(y)).epsilon(1e-12));
  }
}

TEST_CASE("envelope constant") {
  CHECK(CostModel(NormKind::l2(), 1.0, 7).l2_envelope_constant() == 1.0);
  CHECK(CostModel(NormKind::l1(), 1.0, 7).l2_envelope_constant() == 1.0);
  CHECK(CostModel(NormKind::linf(), 1.0, 4).l2_envelope_constant() == doctest::Approx(2.0));
  CHECK(CostModel(NormKind::weighted_l1(vec({0.5, 2})), 1.0, 2).l2_envelope_constant() == doctest::Approx(2.0));

  // C is a max over y of ||v(y)||_2: random directions never exceed it, and
  // for the polyhedral and Lp norms it is reached or approached.
  std::mt19937_64 gen(13);
  for (int d : {2, 3, 5}) {
    for (const auto& nk : testing_support::all_norms(gen, d)) {
      CostModel m(nk, 1.0, d);
      double C = m.l2_envelope_constant(), seen = 0.0;
      for (int k = 0; k < 4000; ++k) {
        seen = std::max(seen, m.manipulation_direction(testing_support::gaussian(gen, d)).norm());
      }
      // all-equal magnitudes are where the Lp maximum sits
      seen = std::max(seen, m.manipulation_direction(Vector::Ones(d)).norm());
      CHECK(seen <= C + 1e-9);
      CHECK(seen >= 0.9 * C);
    }
  }
}

TEST_CASE("dual identity and unit norm of v(y), 1000 trials per norm") {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 1000; ++trial) {
    int d = 1 + static_cast<int>(gen() % 6);
    for (const auto& nk : testing_support::all_norms(gen, d)) {
      CostModel m(nk, 2.0, d);
      Vector y = testing_support::gaussian(gen, d, 3.0);
      Vector v = m.manipulation_direction(y);
      CHECK(std::abs(y.dot(v) - m.dual_norm(y)) <= 1e-9 * std::max(1.0, m.dual_norm(y)));
      CHECK(std::abs(m.norm(v) - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("v(y) is invariant under positive scaling") {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 300; ++trial) {
    for (const auto& nk : testing_support::all_norms(gen, 3)) {
      CostModel m(nk, 1.0, 3);
      Vector y = testing_support::gaussian(gen, 3);
      for (double g : {0.25, 3.0, 1e3}) {
        CHECK((m.manipulation_direction(g * y) - m.manipulation_direction(y)).norm() <= 1e-12);
      }
    }
  }
}

TEST_CASE("Hoelder inequality") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 500; ++trial) {
    for (const auto& nk : testing_support::all_norms(gen, 4)) {
      CostModel m(nk, 1.0, 4);
      Vector x = testing_support::gaussian(gen, 4), y = testing_support::gaussian(gen, 4);
      CHECK(std::abs(y.dot(x)) <= m.norm(x) * m.dual_norm(y) + 1e-12);
    }
  }
}

TEST_CASE("nonnegative y gives nonnegative v(y) for l1-type norms") {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 300; ++trial) {
    Vector y = testing_support::gaussian(gen, 4).cwiseAbs();
    if (trial % 3 == 0) y[1] = 0.0;
    for (const auto& nk : {NormKind::l1(), NormKind::weighted_l1(vec({1, 2, 0.5, 3}))}) {
      CHECK((CostModel(nk, 1.0, 4).manipulation_direction(y).array() >= 0.0).all());
    }
  }
}

TEST_CASE("norm tokens") {
  CHECK(NormKind::parse("l2").type() == NormType::L2);
  CHECK(NormKind::parse("linf").type() == NormType::LInf);
  NormKind lp = NormKind::parse("lp:3");
  CHECK(lp.type() == NormType::Lp);
  CHECK(lp.q() == doctest::Approx(1.5));
  NormKind w = NormKind::parse("wl1:1,2.5");
  CHECK(w.weights() == vec({1, 2.5}));
  for (const char* t : {"l2", "l1", "linf", "lp:3", "wl1:1,2.5"}) {
    CHECK(NormKind::parse(NormKind::parse(t).token()).token() == NormKind::parse(t).token());
  }
  CHECK_THROWS_AS(NormKind::parse("lp:1"), InvalidArgument);
  CHECK_THROWS_AS(NormKind::parse("lp:abc"), InvalidArgument);
  CHECK_THROWS_AS(NormKind::parse("wl1:1,-1"), InvalidArgument);
  CHECK_THROWS_AS(NormKind::parse("l3"), InvalidArgument);
}

TEST_CASE("cost model validation") {
  CHECK_THROWS_AS(CostModel(NormKind::l2(), 0.0, 2), InvalidArgument);
  CHECK_THROWS_AS(CostModel(NormKind::l2(), 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(CostModel(NormKind::weighted_l1(vec({1, 2})), 1.0, 3), InvalidArgument);
  CostModel m(NormKind::l2(), 4.0, 2);
  CHECK(m.budget() == 0.5);
  CHECK(m.strictly_convex());
  CHECK_FALSE(CostModel(NormKind::l1(), 1.0, 2).strictly_convex());
  CHECK(CostModel(NormKind::lp(4), 1.0, 2).strictly_convex());
  CHECK_THROWS_AS(m.norm(vec({1, 2, 3})), InvalidArgument);
  CHECK_THROWS_AS(m.dual_norm(vec({1})), InvalidArgument);
  CHECK_THROWS_AS(m.manipulation_direction(vec({1, 2, 3})), InvalidArgument);
}
