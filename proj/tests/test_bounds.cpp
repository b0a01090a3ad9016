#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "permsum/bounds.hpp"
#include "permsum/rng.hpp"

using namespace permsum;

namespace {

double as_double(const Rational& r) { return static_cast<double>(r); }

}  // namespace

TEST_CASE("delta: adjacent gaps, repeats, and rational inputs") {
  CHECK(delta(RationalVector{1, 2, 4}) == 1);
  CHECK(delta(RationalVector{3, 3, 5}) == 0);
  CHECK(delta(RationalVector({Rational(1, 2), Rational(2), Rational(7, 2)})) == Rational(3, 2));
  CHECK(delta(RationalVector{4, 1, 2}) == 1);  // order does not matter
  CHECK_THROWS_AS(delta(RationalVector{1}), precondition_error);
}

TEST_CASE("main theorem bound: direct substitution at len 0") {
  // (1 + 0) / ((2+2) sqrt(2)) = 1/(4 sqrt 2); reported value rounds the root
  // down, so it can only exceed the true value, and by less than 2^-60
  BoundReport r = main_theorem_bound(RationalVector{0, 0, 1, 1}, RationalVector{1, 2, 3, 4}, Rational(0), 2, 2);
  REQUIRE(r.preconditions_ok);
  REQUIRE(r.value.has_value());
  CHECK(r.constant_mode);
  double truth = 1.0 / (4.0 * std::sqrt(2.0));
  CHECK(as_double(*r.value) >= truth - 1e-15);
  CHECK(as_double(*r.value) <= truth + 1e-12);
  // exact direction: value^2 * 32 >= 1 since sqrt_lower(2)^2 <= 2
  CHECK((*r.value) * (*r.value) * 32 >= 1);
}

TEST_CASE("main theorem bound: point-mass specialization and failure modes") {
  // len_I = 0 makes the numerator exactly 1
  BoundReport r = main_theorem_bound(RationalVector{0, 1, 2, 3, 4}, RationalVector{1, 2, 3, 4, 5}, Rational(0), 1, 1);
  REQUIRE(r.value.has_value());
  CHECK(*r.value == Rational(1, 2));  // 1/((1+1) * sqrt(1))

  // zero weight gap: i2-th largest equals i1-th smallest
  BoundReport flat = main_theorem_bound(RationalVector{1, 1, 1, 1}, RationalVector{1, 2, 3, 4}, Rational(0), 2, 2);
  CHECK_FALSE(flat.preconditions_ok);
  CHECK_FALSE(flat.value.has_value());
  CHECK_FALSE(flat.violations.empty());

  // index out of budget
  CHECK_FALSE(main_theorem_bound(RationalVector{0, 1, 2}, RationalVector{1, 2, 3}, Rational(0), 2, 2).preconditions_ok);
  // repeated v
  CHECK_FALSE(main_theorem_bound(RationalVector{0, 1, 2}, RationalVector{1, 1, 3}, Rational(0), 1, 1).preconditions_ok);
  // negative interval length
  CHECK_FALSE(main_theorem_bound(RationalVector{0, 1, 2}, RationalVector{1, 2, 3}, Rational(-1), 1, 1).preconditions_ok);
}

TEST_CASE("main theorem bound: unsorted inputs are sorted and recorded") {
  BoundReport sorted = main_theorem_bound(RationalVector{0, 0, 1, 1}, RationalVector{1, 2, 3, 4}, Rational(1), 1, 1);
  BoundReport shuffled = main_theorem_bound(RationalVector{1, 0, 1, 0}, RationalVector{4, 2, 1, 3}, Rational(1), 1, 1);
  REQUIRE(sorted.value.has_value());
  REQUIRE(shuffled.value.has_value());
  CHECK(*sorted.value == *shuffled.value);
  bool recorded = false;
  for (const auto& [key, value] : shuffled.inputs) recorded |= key == "sorted_internally";
  CHECK(recorded);
}

TEST_CASE("main theorem bound is monotone on a fixed-gap grid") {
  // two-level weights keep the gap at 1 wherever the pair is valid
  RationalVector w{0, 0, 0, 0, 1, 1, 1, 1};
  RationalVector v{1, 2, 3, 4, 5, 6, 7, 8};
  Rational len(2);
  auto value = [&](int i1, int i2) {
    BoundReport r = main_theorem_bound(w, v, len, i1, i2);
    return r.value;
  };
  for (int i1 = 1; i1 <= 4; ++i1)
    for (int i2 = 1; i2 <= 4; ++i2) {
      if (i1 + i2 > 8) continue;
      auto here = value(i1, i2);
      REQUIRE(here.has_value());
      if (i1 + 1 <= 4 && i1 + 1 + i2 <= 8) {
        auto right = value(i1 + 1, i2);
        REQUIRE(right.has_value());
        CHECK(*right <= *here);
      }
      if (i2 + 1 <= 4 && i1 + i2 + 1 <= 8) {
        auto up = value(i1, i2 + 1);
        REQUIRE(up.has_value());
        CHECK(*up <= *here);
      }
    }

  // non-increasing in the weight gap and in delta(v)
  RationalVector v4{1, 2, 3, 4};
  BoundReport gap1 = main_theorem_bound(RationalVector{0, 0, 1, 1}, v4, len, 2, 2);
  BoundReport gap3 = main_theorem_bound(RationalVector{0, 0, 3, 3}, v4, len, 2, 2);
  REQUIRE(gap1.value.has_value());
  REQUIRE(gap3.value.has_value());
  CHECK(*gap3.value <= *gap1.value);

  BoundReport dv1 = main_theorem_bound(RationalVector{0, 0, 1, 1}, RationalVector{1, 2, 3, 4}, len, 2, 2);
  BoundReport dv2 = main_theorem_bound(RationalVector{0, 0, 1, 1}, RationalVector{2, 4, 6, 8}, len, 2, 2);
  REQUIRE(dv1.value.has_value());
  REQUIRE(dv2.value.has_value());
  CHECK(*dv2.value <= *dv1.value);
}

TEST_CASE("optimize_indices: exhaustive verification and tie-breaking") {
  Xoshiro256pp rng(424242);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + rng.bounded(7);
    std::vector<Rational> wc, vc;
    for (std::size_t i = 0; i < n; ++i) {
      wc.emplace_back(static_cast<long long>(rng.bounded(5)) - 2);
      vc.emplace_back(static_cast<long long>(i * 2 + 1 + rng.bounded(2)));
    }
    std::sort(wc.begin(), wc.end());
    std::sort(vc.begin(), vc.end());
    RationalVector w(wc), v(vc);
    Rational len(rng.bounded(4), 1 + rng.bounded(2));
    if (w.is_constant()) {
      CHECK_THROWS_AS(optimize_indices(w, v, len), precondition_error);
      continue;
    }
    OptimizedIndices best = optimize_indices(w, v, len);
    REQUIRE(best.report.value.has_value());
    // no valid pair beats it, and ties resolve to the smallest (i1, i2)
    for (int i1 = 1; i1 <= static_cast<int>(n); ++i1)
      for (int i2 = 1; i1 + i2 <= static_cast<int>(n); ++i2) {
        BoundReport r = main_theorem_bound(w, v, len, i1, i2);
        if (!r.value) continue;
        REQUIRE(*best.report.value <= *r.value);
        if (*r.value == *best.report.value) {
          REQUIRE(best.i1 <= i1);
          if (best.i1 == i1) REQUIRE(best.i2 <= i2);
        }
      }
  }
}

TEST_CASE("optimize_indices: frozen small cases") {
  // distinct increasing weights, n=8, len 0: brute force over the 28 valid
  // pairs puts the balanced split (4,4) on top
  OptimizedIndices best =
      optimize_indices(RationalVector{1, 2, 3, 4, 5, 6, 7, 8}, RationalVector{1, 2, 3, 4, 5, 6, 7, 8}, Rational(0));
  CHECK(best.i1 == 4);
  CHECK(best.i2 == 4);

  // single raised weight: only i2 = 1 survives, i1 pushes to n-1
  OptimizedIndices single =
      optimize_indices(RationalVector{0, 0, 0, 0, 0, 1}, RationalVector{1, 2, 3, 4, 5, 6}, Rational(0));
  CHECK(single.i2 == 1);
  CHECK(single.i1 == 5);

  CHECK_THROWS_AS(optimize_indices(RationalVector{2, 2, 2}, RationalVector{1, 2, 3}, Rational(0)),
                  precondition_error);
}

TEST_CASE("repetition corollary bound") {
  // n=9, eps=1/3: 1/(eps n^{3/2}) = 1/((1/3) * 27) = 1/9, exact because
  // sqrt(9) is an integer
  std::vector<Rational> w9;
  for (int i = 0; i < 9; ++i) w9.emplace_back(i % 3);  // max multiplicity 3 <= (2/3)*9
  BoundReport r = repetition_corollary_bound(RationalVector(w9), RationalVector{1, 2, 3, 4, 5, 6, 7, 8, 9},
                                             Rational(1, 3));
  REQUIRE(r.preconditions_ok);
  CHECK(*r.value == Rational(1, 9));
  CHECK(r.constant_mode);

  // eps=1 forces all-distinct w; 1/(1 * 4^{3/2}) = 1/8 exactly
  BoundReport d = repetition_corollary_bound(RationalVector{1, 2, 3, 4}, RationalVector{1, 2, 3, 4}, Rational(1));
  REQUIRE(d.preconditions_ok);
  CHECK(*d.value == Rational(1, 8));

  // constant w: multiplicity n > (1-eps) n
  BoundReport flat = repetition_corollary_bound(RationalVector{5, 5, 5}, RationalVector{1, 2, 3}, Rational(1, 2));
  CHECK_FALSE(flat.preconditions_ok);
  CHECK_FALSE(flat.value.has_value());

  // boundary multiplicity exactly (1-eps) n is allowed
  std::vector<Rational> w4{Rational(0), Rational(0), Rational(1), Rational(2)};
  BoundReport edge = repetition_corollary_bound(RationalVector(w4), RationalVector{1, 2, 3, 4}, Rational(1, 2));
  CHECK(edge.preconditions_ok);

  // repeated v rejected; eps out of range rejected
  CHECK_FALSE(repetition_corollary_bound(RationalVector{1, 2, 3}, RationalVector{1, 1, 3}, Rational(1, 2))
                  .preconditions_ok);
  CHECK_FALSE(repetition_corollary_bound(RationalVector{1, 2, 3}, RationalVector{1, 2, 3}, Rational(0))
                  .preconditions_ok);
  CHECK_FALSE(repetition_corollary_bound(RationalVector{1, 2, 3}, RationalVector{1, 2, 3}, Rational(2))
                  .preconditions_ok);
}

TEST_CASE("sigma corollary bound") {
  // len 0: exactly 1/n
  BoundReport zero = sigma_corollary_bound(RationalVector{-1, 0, 0, 1}, RationalVector{1, 2, 3, 4}, Rational(0));
  REQUIRE(zero.preconditions_ok);
  CHECK(*zero.value == Rational(1, 4));

  // constant w: sigma = 0
  CHECK_FALSE(sigma_corollary_bound(RationalVector{3, 3, 3}, RationalVector{1, 2, 3}, Rational(1)).preconditions_ok);
  // delta(v) = 0
  CHECK_FALSE(sigma_corollary_bound(RationalVector{0, 1, 2}, RationalVector{1, 1, 3}, Rational(1)).preconditions_ok);

  // n=4, w=(-1,0,0,1), v=(1,2,3,4), len 1: sqrt(log 4)/(4 sqrt 2) + 1/4
  BoundReport r = sigma_corollary_bound(RationalVector{-1, 0, 0, 1}, RationalVector{1, 2, 3, 4}, Rational(1));
  REQUIRE(r.preconditions_ok);
  double truth = std::sqrt(std::log(4.0)) / (4.0 * std::sqrt(2.0)) + 0.25;
  CHECK(as_double(*r.value) == Catch::Approx(truth).epsilon(1e-9));
  // sanity floor derived from a frozen lower bound on ln 4 (1.3862943611...)
  Rational ln4_low(13862943611LL, 10000000000LL);
  CHECK(*r.value >= sqrt_lower(ln4_low) / (4 * sqrt_upper(Rational(2))) + Rational(1, 4));
}

TEST_CASE("pawlowski check: sharp cases and preconditions") {
  PawlowskiResult odd = pawlowski_check(RationalVector{1, -1, 0}, RationalVector{1, 2, 3});
  CHECK(odd.bound == Rational(1, 3));
  CHECK(odd.max_mass == Rational(1, 3));
  CHECK(odd.satisfied);

  PawlowskiResult even = pawlowski_check(RationalVector{1, -1, 0, 0}, RationalVector{1, 2, 3, 4});
  CHECK(even.bound == Rational(1, 3));
  CHECK(even.satisfied);

  CHECK_THROWS_AS(pawlowski_check(RationalVector{2, 2, 2}, RationalVector{1, 2, 3}), precondition_error);
  CHECK_THROWS_AS(pawlowski_check(RationalVector{1, -1, 0}, RationalVector{1, 1, 3}), precondition_error);
  ExactOptions tiny;
  tiny.cap = 2;
  CHECK_THROWS_AS(pawlowski_check(RationalVector{1, -1, 0}, RationalVector{1, 2, 3}, tiny), cap_exceeded_error);
}

TEST_CASE("pawlowski verdict is invariant under affine maps of the inputs") {
  Xoshiro256pp rng(606);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t n = 2 + rng.bounded(4);
    std::vector<Rational> wc, vc;
    for (std::size_t i = 0; i < n; ++i) {
      wc.emplace_back(static_cast<long long>(rng.bounded(5)) - 2);
      vc.emplace_back(static_cast<long long>(i * 3 + 1 + rng.bounded(2)));
    }
    RationalVector w(wc), v(vc);
    if (w.is_constant() || !v.all_distinct()) continue;
    PawlowskiResult base = pawlowski_check(w, v);

    Rational lambda(2, 3), c(-5, 2);
    std::vector<Rational> wt, vt;
    for (const Rational& x : w) wt.push_back(lambda * x + c);
    for (const Rational& x : v) vt.push_back(x + c);
    PawlowskiResult mapped = pawlowski_check(RationalVector(wt), RationalVector(vt));
    CHECK(base.satisfied == mapped.satisfied);
    CHECK(base.max_mass == mapped.max_mass);
  }
}

TEST_CASE("subset lemma bounds") {
  BoundReport with = subset_lemma_bound(100, 25, SubsetMode::with_replacement);
  REQUIRE(with.preconditions_ok);
  CHECK(*with.value == Rational(1, 500));  // sqrt(25) exact

  BoundReport without = subset_lemma_bound(10, 9, SubsetMode::without_replacement);
  REQUIRE(without.preconditions_ok);
  CHECK(*without.value == Rational(1, 10));  // min(9,1) = 1

  BoundReport single = subset_lemma_bound(17, 1, SubsetMode::with_replacement);
  CHECK(*single.value == Rational(1, 17));

  CHECK_FALSE(subset_lemma_bound(10, 0, SubsetMode::with_replacement).preconditions_ok);
  CHECK_FALSE(subset_lemma_bound(10, 11, SubsetMode::with_replacement).preconditions_ok);
  CHECK_FALSE(subset_lemma_bound(10, 10, SubsetMode::without_replacement).preconditions_ok);
}

TEST_CASE("soze profile records the normalization it applied") {
  // w = (3, 1, 2): mean 2, centered (1, -1, 0), norm^2 = 2
  SozeProfile profile = soze_decay_profile(RationalVector{3, 1, 2}, {Rational(0)}, 20000, 17);
  CHECK(profile.mean_shift == 2);
  CHECK(profile.norm2 == 2);
  REQUIRE(profile.points.size() == 1);
  CHECK(std::abs(profile.points[0].estimate.estimate - 2.0 / 3.0) <= 4 * profile.points[0].estimate.stderr_);
}
