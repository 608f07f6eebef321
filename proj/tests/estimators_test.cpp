#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "cockedhat/errors.hpp"
#include "cockedhat/estimators.hpp"
#include "cockedhat/random.hpp"
#include "cockedhat/scenarios.hpp"

using namespace cockedhat;

namespace {

Scenario equilateral() {
  Scenario s;
  for (int k = 0; k < 3; ++k) {
    const double a = kPi / 2 + k * 2 * kPi / 3;
    s.points.push_back({std::cos(a), std::sin(a)});
  }
  s.target = {0, 0};
  return s;
}

ErrorModel ten_degrees(std::size_t n) { return ErrorModel::uniform(n, TwoRaySiteModel::symmetric(Angle::degrees(10))); }

}  // namespace

TEST(SelectionPattern, SignsAndText) {
  const auto p = SelectionPattern::from_signs({1, -1, 1});
  EXPECT_EQ(p.mask, 0b101u);
  EXPECT_EQ(p.sign(1), -1);
  EXPECT_EQ(p.to_string(), "(+,-,+)");
}

TEST(Formulation, RoundTrip) {
  for (auto f : {Formulation::kConjunction, Formulation::kConditional, Formulation::kLines, Formulation::kConstrained})
    EXPECT_EQ(parse_formulation(to_string(f)), f);
  EXPECT_THROW(parse_formulation("bogus"), UsageError);
}

TEST(Wilson, QuarterAtOneMillion) {
  const auto [lo, hi] = wilson_interval(250'000, 1'000'000);
  // Closed form: half-width about 1.96 sqrt(p q / N).
  const double normal = 2 * 1.96 * std::sqrt(0.25 * 0.75 / 1e6);
  EXPECT_NEAR(hi - lo, normal, 1e-6);
  EXPECT_NEAR(hi - lo, 0.0017, 1e-4);
  EXPECT_LT(lo, 0.25);
  EXPECT_GT(hi, 0.25);
}

TEST(Wilson, ClampedAtExtremes) {
  const auto [lo0, hi0] = wilson_interval(0, 100);
  EXPECT_EQ(lo0, 0.0);
  EXPECT_GT(hi0, 0.0);
  const auto [lo1, hi1] = wilson_interval(100, 100);
  EXPECT_EQ(hi1, 1.0);
  EXPECT_LT(lo1, 1.0);
}

TEST(ExactDelta, EquilateralTenDegrees) {
  const auto r = exact_two_ray_delta(equilateral(), ten_degrees(3), Formulation::kConstrained);
  EXPECT_EQ(r.numerator, 2u);
  EXPECT_EQ(r.denominator, 8u);
  EXPECT_EQ(r.fraction(), "2/8");
  const std::set<std::uint32_t> masks{r.favorable[0].mask, r.favorable[1].mask};
  EXPECT_EQ(masks, (std::set<std::uint32_t>{0u, 7u}));
}

TEST(ExactDelta, EveryPatternMatchesDirectGeometry) {
  const Scenario s = equilateral();
  const auto m = ten_degrees(3);
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    const SelectionPattern p{mask, 3};
    std::array<Ray, 3> r;
    for (std::size_t i = 0; i < 3; ++i) r[i] = plotted_ray(s, i, p.sign(i) * 10 * kPi / 180);
    const auto hat = cocked_hat(r[0], r[1], r[2]);
    const auto out = evaluate_pattern(s, m, p, Formulation::kConjunction);
    EXPECT_EQ(out.hat_forms, hat.has_value());
    EXPECT_EQ(out.target_inside, hat && point_in_triangle(s.target, *hat));
  }
}

TEST(ExactDelta, InvalidModelRejected) {
  const auto wide = ErrorModel::uniform(3, TwoRaySiteModel::symmetric(Angle::degrees(80)));
  EXPECT_THROW(exact_two_ray_delta(equilateral(), wide, Formulation::kConstrained), ValidationError);
}

TEST(ExactDelta, RandomValidModelsGiveOneQuarter) {
  RandomStream rng(51);
  for (auto tag : {CaseTag::kCase1, CaseTag::kCase2, CaseTag::kCase3}) {
    for (int k = 0; k < 10; ++k) {
      const auto [s, intervals] = random_valid_scenario(3, rng, tag);
      const auto m = random_valid_two_ray_model(s, intervals, rng);
      const auto r = exact_two_ray_delta(s, m, Formulation::kConstrained);
      EXPECT_EQ(r.fraction(), "2/8");
    }
  }
}

TEST(McDelta, EquilateralNearQuarter) {
  const auto m = ErrorModel::uniform(3, SymmetricIntervalSiteModel::make(Angle::degrees(10)));
  const auto r = mc_estimate_delta(equilateral(), m, Formulation::kConstrained, {200'000, 3, 1});
  EXPECT_NEAR(r.p_hat, 0.25, 4 * std::sqrt(0.1875 / 200'000));
  EXPECT_LE(r.ci_low, r.p_hat);
  EXPECT_GE(r.ci_high, r.p_hat);
  EXPECT_EQ(r.trials, 200'000u);
}

TEST(McDelta, DeterministicAcrossWorkerCounts) {
  const auto m = ErrorModel::uniform(3, SymmetricIntervalSiteModel::make(Angle::degrees(10)));
  const auto a = mc_estimate_delta(equilateral(), m, Formulation::kConstrained, {300'000, 9, 1});
  const auto b = mc_estimate_delta(equilateral(), m, Formulation::kConstrained, {300'000, 9, 8});
  EXPECT_EQ(a.successes, b.successes);
  const auto c = mc_estimate_delta(equilateral(), m, Formulation::kConstrained, {300'000, 10, 1});
  EXPECT_NE(a.successes, c.successes);
}

TEST(McDelta, RejectsWrongSiteCountAndLinesOverQuarterTurn) {
  Scenario four = equilateral();
  four.points.push_back({0.2, -2});
  EXPECT_THROW(mc_estimate_delta(four, ten_degrees(4), Formulation::kConstrained, {1000, 1, 1}), UsageError);
  const auto wide = ErrorModel::uniform(3, TwoRaySiteModel::make(Angle(-0.1), Angle(1.7)));
  EXPECT_THROW(mc_estimate_delta(equilateral(), wide, Formulation::kLines, {1000, 1, 1}), std::invalid_argument);
}

TEST(McDelta, ConditionalReportsDenominator) {
  const auto m = ErrorModel::uniform(3, SymmetricIntervalSiteModel::make(Angle::degrees(10)));
  const auto r = mc_estimate_delta(equilateral(), m, Formulation::kConditional, {50'000, 1, 1});
  ASSERT_TRUE(r.conditioning_count);
  EXPECT_EQ(*r.conditioning_count, 50'000u);  // valid model: every hat forms
  EXPECT_EQ(r.formulation, Formulation::kConditional);
}

TEST(McUnbounded, FiveSitesNearTenThirtySeconds) {
  RandomStream rng(61);
  const auto [s, m] = random_valid_scenario(5, rng);
  const auto r = mc_estimate_unbounded(s, m, {200'000, 5, 1});
  EXPECT_NEAR(r.p_hat, 10.0 / 32, 4 * std::sqrt((10.0 / 32) * (22.0 / 32) / 200'000));
}

TEST(ExactUnbounded, TwoToTheOneMinusNTimesN) {
  RandomStream rng(71);
  for (std::size_t n = 3; n <= 8; ++n) {
    const auto [s, intervals] = random_valid_scenario(n, rng);
    const auto m = random_valid_two_ray_model(s, intervals, rng);
    const auto r = exact_two_ray_unbounded(s, m);
    EXPECT_EQ(r.numerator, 2 * n) << "n = " << n;
    EXPECT_EQ(r.denominator, std::uint64_t{1} << n);
  }
}

TEST(ExactUnbounded, WorkerCountDoesNotChangeResult) {
  RandomStream rng(73);
  const auto [s, intervals] = random_valid_scenario(9, rng);
  const auto m = random_valid_two_ray_model(s, intervals, rng);
  EXPECT_EQ(exact_two_ray_unbounded(s, m, 20, 1).numerator, exact_two_ray_unbounded(s, m, 20, 4).numerator);
}

TEST(ExactUnbounded, CapEnforced) {
  RandomStream rng(79);
  const auto [s, intervals] = random_valid_scenario(6, rng);
  const auto m = random_valid_two_ray_model(s, intervals, rng);
  EXPECT_THROW(exact_two_ray_unbounded(s, m, 5), UsageError);
}

TEST(TangentReduction, TangencyAndSpecialCount) {
  RandomStream rng(83);
  for (std::size_t n = 3; n <= 10; ++n) {
    const auto [s, intervals] = random_valid_scenario(n, rng);
    const auto m = random_valid_two_ray_model(s, intervals, rng);
    const auto r = tangent_reduction(s, m);
    ASSERT_EQ(r.sites.size(), n);
    for (const auto& t : r.sites) {
      // Each translated line touches the unit circle about F.
      EXPECT_NEAR(std::abs(signed_distance(t.m_plus, r.center)), 1.0, 1e-9);
      EXPECT_NEAR(std::abs(signed_distance(t.m_minus, r.center)), 1.0, 1e-9);
      EXPECT_LT(t.arc.length, kPi);
    }
    EXPECT_NO_THROW(check_arc_conditions(r));
    const auto special = count_special_selections(r);
    EXPECT_EQ(special.count, 2 * n);
    const auto mult = endpoint_multiplicity(r);
    EXPECT_EQ(mult.size(), 2 * n);
    for (const auto& [id, k] : mult) EXPECT_EQ(k, 2) << id.to_string();
  }
}

TEST(TangentReduction, SpecialSelectionsMatchUnboundedPatterns) {
  RandomStream rng(89);
  const auto [s, intervals] = random_valid_scenario(6, rng);
  const auto m = random_valid_two_ray_model(s, intervals, rng);
  const auto special = count_special_selections(tangent_reduction(s, m));
  const auto exact = exact_two_ray_unbounded(s, m);
  std::set<std::uint32_t> a, b;
  for (const auto& w : special.witnesses) a.insert(w.pattern.mask);
  for (const auto& p : exact.favorable) b.insert(p.mask);
  EXPECT_EQ(a, b);
}

TEST(ArcConditions, UnionExceedsHalf) {
  const auto a = DirectionArc::from_start(Angle(0), 2.0);
  const auto b = DirectionArc::from_start(Angle(1.5), 2.0);
  EXPECT_TRUE(arcs_union_exceeds_half(a, b));
  const auto c = DirectionArc::from_start(Angle(3.0), 0.5);
  EXPECT_FALSE(arcs_union_exceeds_half(a, c));
}
