#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "otkit/homogeneity.hpp"

using namespace otkit;
using testutil::moment_curve;
using testutil::random_sequence;

namespace {

Point pt(std::initializer_list<int64_t> vs) {
  Point p;
  for (int64_t v : vs) p.x.push_back(Rational(v));
  return p;
}

PointSequence line(std::initializer_list<int64_t> vs) {
  PointSequence s(1);
  for (int64_t v : vs) s.push_back(pt({v}));
  return s;
}

bool strong_general_position(const PointSequence& seq) {
  for (int j = 1; j <= seq.dim; ++j) {
    PointSequence pj = project(seq, j);
    bool ok = detail::for_each_combination(
        seq.size(), static_cast<size_t>(j) + 1, [&](std::span<const int> idx) {
          std::vector<Point> pts;
          for (int i : idx) pts.push_back(pj[static_cast<size_t>(i)]);
          return orientation(std::span<const Point>(pts)) != Sign::zero;
        });
    if (!ok) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("order-type homogeneity fixed cases") {
  CHECK(is_order_type_homogeneous(line({1, 2, 3, 4})).status == Homogeneity::positive);
  CHECK(is_order_type_homogeneous(line({4, 3, 2, 1})).status == Homogeneity::negative);

  PointSequence ccw(2, {pt({0, 0}), pt({2, 0}), pt({3, 2}), pt({1, 3})});
  CHECK(is_order_type_homogeneous(ccw).status == Homogeneity::positive);

  PointSequence cw(2, {pt({1, 3}), pt({3, 2}), pt({2, 0}), pt({0, 0})});
  CHECK(is_order_type_homogeneous(cw).status == Homogeneity::negative);

  PointSequence mixed(2, {pt({0, 0}), pt({2, 0}), pt({1, 1}), pt({3, 1})});
  HomogeneityVerdict v = is_order_type_homogeneous(mixed);
  CHECK(v.status == Homogeneity::not_homogeneous);
  REQUIRE(v.witness.has_value());
  CHECK(*v.witness == std::vector<int>{1, 3, 4});

  // Degenerate tuples report the least offender.
  PointSequence degen(2, {pt({0, 0}), pt({1, 0}), pt({2, 0}), pt({1, 3})});
  HomogeneityVerdict dv = is_order_type_homogeneous(degen);
  CHECK(dv.status == Homogeneity::not_homogeneous);
  CHECK(*dv.witness == std::vector<int>{1, 2, 3});

  // Too short: vacuously homogeneous.
  CHECK(is_order_type_homogeneous(PointSequence(2, {pt({0, 0}), pt({1, 0})})).homogeneous());
}

TEST_CASE("graded and super order-type homogeneity") {
  PointSequence curve = moment_curve(3, {Rational(1), Rational(2), Rational(3), Rational(5)});
  for (int k = 1; k <= 3; ++k) CHECK(is_order_type_homogeneous_to_level(curve, k));
  CHECK(is_super_order_type_homogeneous(curve));

  // Level 1 monotone but level 2 mixed.
  PointSequence seq(2, {pt({0, 0}), pt({2, 0}), pt({3, 5}), pt({4, 1})});
  CHECK(is_order_type_homogeneous_to_level(seq, 1));
  CHECK_FALSE(is_order_type_homogeneous_to_level(seq, 2));
  CHECK_THROWS_AS(is_order_type_homogeneous_to_level(seq, 3), index_error);
}

TEST_CASE("monotonicity checkers") {
  CHECK_FALSE(is_monotone_to_level(line({1, 3, 2}), 1));
  CHECK(is_monotone_to_level(line({1, 3, 9}), 1));
  CHECK(is_monotone_to_level(line({9, 3, 1}), 1));

  // Parabola samples: slopes 1, 3, 5 increase.
  PointSequence par(2, {pt({0, 0}), pt({1, 1}), pt({2, 4}), pt({3, 9})});
  CHECK(is_monotone_to_level(par, 2));
  CHECK(is_super_monotone(par));

  PointSequence two(2, {pt({0, 5}), pt({1, 0})});
  CHECK(is_monotone_to_level(two, 1));

  // An undefined window (equal first coordinates) is not monotone, and
  // the report names the level and window.
  PointSequence undef(2, {pt({0, 0}), pt({0, 1}), pt({1, 3})});
  MonotoneReport rep = monotone_to_level_report(undef, 2);
  CHECK_FALSE(rep.monotone);
  CHECK(*rep.level == 1);  // already not monotone at the first level
  PointSequence undef2(2, {pt({0, 0}), pt({1, 1}), pt({1, 3})});
  MonotoneReport rep2 = monotone_to_level_report(undef2, 2);
  CHECK_FALSE(rep2.monotone);
}

TEST_CASE("monotone direction may differ per level") {
  // First coordinates increase, slopes decrease.
  PointSequence seq(2, {pt({0, 9}), pt({1, 5}), pt({2, 2}), pt({3, 0})});
  CHECK(is_super_monotone(seq));
  CHECK(is_super_order_type_homogeneous(seq));
}

TEST_CASE("predicate homogeneity") {
  Predicate yes;
  yes.arity = 2;
  yes.dim = 0;
  yes.name = "always";
  yes.eval = [](std::span<const Point>) { return true; };
  CHECK(is_phi_homogeneous(line({1, 2, 3}), yes).status == Homogeneity::positive);

  PointSequence cw(2, {pt({1, 3}), pt({3, 2}), pt({2, 0}), pt({0, 0})});
  CHECK(is_phi_homogeneous(cw, orientation_predicate(2)).status == Homogeneity::negative);

  PointSequence mixed(2, {pt({0, 0}), pt({2, 0}), pt({1, 1}), pt({3, 1})});
  HomogeneityVerdict v = is_phi_homogeneous(mixed, orientation_predicate(2));
  CHECK(v.status == Homogeneity::not_homogeneous);
  CHECK(v.witness.has_value());
}

TEST_CASE("Markov systems") {
  PointSequence curve = moment_curve(3, {Rational(1), Rational(2), Rational(3), Rational(4)});
  CHECK(is_markov_system(curve));
  CHECK(is_super_order_type_homogeneous(curve));

  // Negate the second coordinate: still super homogeneous, but the
  // all-positive normalization fails.
  PointSequence flipped = curve;
  for (Point& p : flipped.pts) p.x[1] = -p.x[1];
  CHECK_FALSE(is_markov_system(flipped));
  CHECK(is_super_order_type_homogeneous(flipped));

  CHECK_FALSE(is_markov_system(PointSequence(1, {pt({3}), pt({1})})));
}

TEST_CASE("equivalence of super-monotone and super homogeneity") {
  std::mt19937_64 rng(41);
  int agree = 0;
  for (int d = 2; d <= 4; ++d) {
    for (int n = d + 1; n <= d + 4; ++n) {
      for (int t = 0; t < 120; ++t) {
        PointSequence seq = random_sequence(rng, d, n, 9, 4);
        if (!strong_general_position(seq)) continue;
        bool mono = is_super_monotone(seq);
        bool hom = is_super_order_type_homogeneous(seq);
        CHECK(mono == hom);
        for (int k = 1; k <= d; ++k) {
          CHECK(is_monotone_to_level(seq, k) == is_order_type_homogeneous_to_level(seq, k));
        }
        ++agree;
      }
    }
  }
  CHECK(agree > 800);
}

TEST_CASE("heredity of super homogeneity") {
  std::mt19937_64 rng(42);
  int found = 0;
  for (int t = 0; t < 400 && found < 60; ++t) {
    int d = 2 + static_cast<int>(rng() % 2);
    PointSequence seq = random_sequence(rng, d, d + 2, 9, 4);
    if (!is_super_order_type_homogeneous(seq)) continue;
    ++found;
    // Every subsequence stays super homogeneous.
    detail::for_each_combination(seq.size(), seq.size() - 1, [&](std::span<const int> idx) {
      std::vector<int> v(idx.begin(), idx.end());
      CHECK(is_super_order_type_homogeneous(seq.subsequence(v)));
      return true;
    });
  }
  // Also check on the moment curve, which is always homogeneous.
  PointSequence curve =
      moment_curve(3, {Rational(1), Rational(2), Rational(4), Rational(7), Rational(9)});
  detail::for_each_combination(curve.size(), 4, [&](std::span<const int> idx) {
    std::vector<int> v(idx.begin(), idx.end());
    CHECK(is_super_order_type_homogeneous(curve.subsequence(v)));
    return true;
  });
}

TEST_CASE("reversal preserves super-monotonicity") {
  std::mt19937_64 rng(43);
  int hits = 0;
  for (int t = 0; t < 600 && hits < 50; ++t) {
    int d = 2 + static_cast<int>(rng() % 2);
    PointSequence seq = random_sequence(rng, d, d + 2, 9, 4);
    if (!is_super_monotone(seq)) continue;
    ++hits;
    PointSequence rev(seq.dim);
    for (size_t i = seq.size(); i-- > 0;) rev.push_back(seq[i]);
    CHECK(is_super_monotone(rev));
  }
  PointSequence curve = moment_curve(2, {Rational(1), Rational(3), Rational(4)});
  PointSequence rev(2);
  for (size_t i = curve.size(); i-- > 0;) rev.push_back(curve[i]);
  CHECK(is_super_monotone(curve));
  CHECK(is_super_monotone(rev));
}
