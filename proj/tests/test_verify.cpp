#include <gtest/gtest.h>

#include <random>

#include "relaxround/error.hpp"
#include "relaxround/instances.hpp"
#include "relaxround/verify.hpp"

using namespace relaxround;

namespace {

const Bundle kA = bundle_of({0});
const Bundle kB = bundle_of({1});
const Bundle kAB = bundle_of({0, 1});

Allocation alloc(std::vector<Bundle> b) { return Allocation{std::move(b)}; }

const RationalVector kGrid{0, 1, 2, 3};

}  // namespace

TEST(BruteForceOpt, SingleMindedExample) {
  const Instance inst = make_single_minded_ca(2, {kAB, kA, kB});
  const auto [best, value] = brute_force_opt(inst, single_minded_profile(inst, {5, 3, 3}));
  EXPECT_EQ(best, alloc({0, kA, kB}));
  EXPECT_EQ(value, 6);
}

TEST(BruteForceOpt, SingleItemAndZero) {
  const Instance inst = make_single_item(2);
  const auto [best, value] = brute_force_opt(inst, single_item_profile({5, 3}));
  EXPECT_EQ(best, alloc({kA, 0}));
  EXPECT_EQ(value, 5);
  const auto [none, zero] = brute_force_opt(inst, single_item_profile({0, 0}));
  EXPECT_EQ(none, Allocation::empty(2));
  EXPECT_EQ(zero, 0);
}

TEST(GridProfiles, BidderZeroVariesFastest) {
  const auto profiles = grid_profiles(make_single_item(2), {0, 1, 2});
  ASSERT_EQ(profiles.size(), 9u);
  EXPECT_EQ(profiles[1], single_item_profile({1, 0}));
  EXPECT_EQ(profiles[3], single_item_profile({0, 1}));
  EXPECT_THROW(grid_profiles(make_single_item(2), {}), Error);
}

TEST(Misreports, SingleMindedIncludeBundles) {
  const Instance inst = make_single_minded_ca(2, {kA, kB});
  // 3 nonempty bundles x 4 values.
  EXPECT_EQ(misreports(inst, 0, kGrid).size(), 12u);
  EXPECT_EQ(misreports(make_single_item(2), 0, kGrid).size(), 4u);
}

TEST(Truthfulness, SingleItemPasses) {
  const VerificationReport r = check_truthfulness(make_single_item(2), kGrid, kGrid);
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_TRUE(r.all_pass());
  // 16 profiles x 2 bidders x 4 misreports.
  EXPECT_EQ(r.checks[0].cases, 128u);
  EXPECT_NE(r.checks[0].domain.find("n=2"), std::string::npos);
}

TEST(Truthfulness, SingleBidderPasses) {
  EXPECT_TRUE(check_truthfulness(make_single_item(1), kGrid, kGrid).all_pass());
}

TEST(Truthfulness, FirstPriceFailsWithWitness) {
  Instance inst = make_single_item(2);
  inst.payment_rule = PaymentRule::kFirstPrice;
  const VerificationReport r = check_truthfulness(inst, kGrid, kGrid);
  EXPECT_FALSE(r.all_pass());
  ASSERT_FALSE(r.checks[0].witnesses.empty());
  const Witness& w = r.checks[0].witnesses.front();
  EXPECT_GT(w.lhs, w.rhs);
  // Replay the witness through expected_utility.
  const auto profiles = grid_profiles(inst, kGrid);
  const ValuationProfile& truth = profiles[w.profile_id];
  bool replayed = false;
  for (const Valuation& lie : misreports(inst, w.bidder, kGrid)) {
    if (valuation_to_string(lie) != w.misreport) continue;
    ValuationProfile reported = truth;
    reported.valuations[w.bidder] = lie;
    EXPECT_EQ(expected_utility(inst, truth, reported, w.bidder), w.lhs);
    EXPECT_EQ(expected_utility(inst, truth, truth, w.bidder), w.rhs);
    replayed = true;
  }
  EXPECT_TRUE(replayed);
}

TEST(Truthfulness, BudgetTruncates) {
  const VerificationReport r = check_truthfulness(make_single_item(2), kGrid, kGrid, 10);
  EXPECT_EQ(r.checks[0].status, CheckStatus::kTruncated);
  EXPECT_FALSE(r.all_pass());
  EXPECT_EQ(r.checks[0].cases, 10u);
}

TEST(Approximation, Examples) {
  const ApproximationResult one =
      check_approximation(make_single_item(3), single_item_profile({2, 7, 1}));
  ASSERT_TRUE(one.ratio);
  EXPECT_EQ(*one.ratio, 1);

  const Instance half = make_case_b_family(2, Rational(1, 2));
  const ApproximationResult b = check_approximation(half, single_item_profile({5, 3}));
  EXPECT_EQ(*b.ratio, Rational(1, 2));
  EXPECT_TRUE(b.pass);
  EXPECT_TRUE(check_approximation_grid(half, kGrid).all_pass());

  const ApproximationResult zero =
      check_approximation(make_single_item(2), single_item_profile({0, 0}));
  EXPECT_FALSE(zero.ratio);
  EXPECT_TRUE(zero.pass);
}

TEST(Obliviousness, FixedPointIgnoresProfiles) {
  const Instance inst = make_single_item(2);
  const FractionalPoint x{{Rational(1, 2), Rational(1, 2)}};
  EXPECT_TRUE(check_obliviousness(inst, {single_item_profile({5, 3}),
                                         single_item_profile({3, 5})},
                                  x)
                  .all_pass());
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> v(0, 20);
  std::vector<ValuationProfile> many;
  for (int t = 0; t < 10; ++t) many.push_back(single_item_profile({v(rng), v(rng)}));
  EXPECT_TRUE(check_obliviousness(inst, many, x).all_pass());
}

TEST(Obliviousness, UnderdogRounderReadsReports) {
  const Instance inst = make_single_item(2);
  const FractionalPoint x{{Rational(1, 2), Rational(1, 2)}};
  const VerificationReport r = check_obliviousness(
      inst, {single_item_profile({5, 3}), single_item_profile({3, 5})}, x,
      underdog_rounder(inst));
  EXPECT_FALSE(r.all_pass());
}

TEST(NonObliviousCondition, ObliviousRounderPasses) {
  const Instance inst = make_single_item(2);
  EXPECT_TRUE(check_nonoblivious_condition(oblivious_rounder(inst), inst, kGrid).all_pass());
}

TEST(NonObliviousCondition, UnderdogRounderFails) {
  const Instance inst = make_single_item(2);
  const VerificationReport r =
      check_nonoblivious_condition(underdog_rounder(inst), inst, kGrid);
  EXPECT_FALSE(r.all_pass());
  const Witness& w = r.checks[0].witnesses.front();
  EXPECT_GT(w.lhs, w.rhs);
}

TEST(NonObliviousCondition, SingleProfileGridIsVacuous) {
  const Instance inst = make_single_item(2);
  EXPECT_TRUE(
      check_nonoblivious_condition(underdog_rounder(inst), inst, {3}).all_pass());
}

TEST(WithoutMoney, LotteryPasses) {
  const Instance inst = make_no_money(3, NoMoneyKind::kLottery);
  EXPECT_TRUE(check_without_money(inst, single_item_profile({1, 4, 2}), 1).all_pass());
  // A wrong beta is caught.
  EXPECT_FALSE(
      check_without_money(inst, single_item_profile({1, 4, 2}), Rational(1, 2)).all_pass());
}

TEST(WithoutMoney, MedianSupportIsFeasible) {
  const Instance inst = make_no_money(3, NoMoneyKind::kSinglePeaked, 7);
  const VerificationReport r = check_without_money(inst, peak_profile({1, 5, 3}), 1);
  EXPECT_TRUE(r.checks[0].passed());
}

TEST(WithoutMoney, CorruptedLotteryRejectedUpstream) {
  const Allocation b1 = alloc({kA, 0});
  const Allocation b2 = alloc({0, kA});
  EXPECT_THROW(AllocationDistribution({{b1, Rational(3, 5)}, {b2, Rational(3, 5)}}), Error);
}

TEST(Median, NoImprovementOnGrid) {
  const Instance inst = make_no_money(3, NoMoneyKind::kSinglePeaked, 7);
  const VerificationReport r = check_median_no_improvement(inst, {0, 1, 2, 3, 4, 5, 6});
  EXPECT_TRUE(r.all_pass());
  // 343 profiles x 3 bidders x 7 misreports.
  EXPECT_EQ(r.checks[0].cases, 343u * 3u * 7u);
}

TEST(UtilityIdentity, HoldsOnShippedFamilies) {
  EXPECT_TRUE(check_utility_identity(make_single_item(3), kGrid).all_pass());
  EXPECT_TRUE(check_utility_identity(make_case_b_family(2, Rational(1, 3)), kGrid).all_pass());
  EXPECT_TRUE(check_utility_identity(
                  make_single_minded_ca(3, {bundle_of({0, 1}), bundle_of({1, 2}), kA}), kGrid)
                  .all_pass());
  EXPECT_TRUE(check_utility_identity(make_gap_toy(2, 1), kGrid).all_pass());
}

TEST(DecompositionIdentities, HoldOnShippedFamilies) {
  EXPECT_TRUE(check_decomposition_identities(make_single_item(3), kGrid).all_pass());
  EXPECT_TRUE(check_decomposition_identities(
                  make_single_minded_ca(2, {kAB, kA, kB}), kGrid)
                  .all_pass());
}

TEST(ProbePoints, InsidePolytope) {
  const Instance inst = make_single_minded_ca(3, {bundle_of({0, 1}), bundle_of({1, 2}), kA});
  const auto points = probe_points(inst, quarter_grid());
  EXPECT_FALSE(points.empty());
  const Polytope p = build_polytope(inst);
  for (const FractionalPoint& x : points) EXPECT_TRUE(contains(p, x));
  // Oracle count for one item, two bidders: pairs of quarters summing to <= 1.
  EXPECT_EQ(probe_points(make_single_item(2), quarter_grid()).size(), 15u);
}
