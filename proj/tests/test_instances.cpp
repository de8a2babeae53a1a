#include <gtest/gtest.h>

#include "relaxround/error.hpp"
#include "relaxround/instances.hpp"
#include "relaxround/mechanism.hpp"
#include "relaxround/verify.hpp"

using namespace relaxround;

namespace {

const Bundle kA = bundle_of({0});
const Bundle kB = bundle_of({1});
const Bundle kAB = bundle_of({0, 1});

Allocation alloc(std::vector<Bundle> b) { return Allocation{std::move(b)}; }

}  // namespace

TEST(FindMax, Examples) {
  EXPECT_EQ(find_max({5, 3, 9}), (std::pair<int, Rational>{2, 9}));
  EXPECT_EQ(find_max({4, 4}), (std::pair<int, Rational>{0, 4}));
  EXPECT_EQ(find_max({7}), (std::pair<int, Rational>{0, 7}));
  EXPECT_THROW(find_max({}), Error);
}

TEST(SingleItem, WinnerAndSecondPrice) {
  for (const RationalVector& bids :
       {RationalVector{5, 3}, RationalVector{5, 3, 2}, RationalVector{7}}) {
    const Instance inst = make_single_item(static_cast<int>(bids.size()));
    const ValuationProfile p = single_item_profile(bids);
    const MechanismOutcome o = run(inst, p, 0);
    EXPECT_EQ(o.realized.bundles[0], kA);
    const Rational second = bids.size() > 1 ? bids[1] : Rational(0);
    EXPECT_EQ(o.expected_payments[0], second);
  }
}

TEST(SingleMinded, OptExample) {
  const Instance inst = make_single_minded_ca(2, {kAB, kA, kB});
  EXPECT_EQ(brute_force_opt(inst, single_minded_profile(inst, {5, 3, 3})).second, 6);
}

TEST(SingleMinded, DisjointDesiresGiveIntegralOptimum) {
  const Instance inst = make_single_minded_ca(3, {kA, kB, bundle_of({2})});
  const ValuationProfile p = single_minded_profile(inst, {2, 5, 1});
  const Allocated a = allocate(inst, p);
  EXPECT_EQ(a.point.coords, (RationalVector{1, 1, 1}));
  // The decomposition of an integral point at scale 1 is a point mass.
  EXPECT_EQ(exact_distribution(convex_decompose(a.point, 1, inst)),
            AllocationDistribution::point_mass(alloc({kA, kB, bundle_of({2})})));
}

TEST(SingleMinded, LoneBidderActsLikeSingleItem) {
  const Instance inst = make_single_minded_ca(2, {kAB});
  const ValuationProfile p = single_minded_profile(inst, {6});
  const Allocated a = allocate(inst, p);
  EXPECT_EQ(a.point.coords, (RationalVector{1}));
  EXPECT_EQ(payments(inst, p, a.distribution), (RationalVector{0}));
  EXPECT_EQ(expected_welfare(a.distribution, p), inst.spec.alpha * 6);
}

TEST(SingleMinded, RejectsBadArguments) {
  EXPECT_THROW(make_single_minded_ca(5, {kA}), Error);
  EXPECT_THROW(make_single_minded_ca(2, {bundle_of({2})}), Error);
  EXPECT_THROW(make_single_minded_ca(2, {0}), Error);
  EXPECT_THROW(make_single_minded_ca(2, {kA}, BundleSpace::kDeclared, 0), Error);
}

TEST(SingleMinded, OverScaledAlphaFailsConstruction) {
  // Three pairwise-overlapping bundles with equal values give
  // x* = (1/2, 1/2, 1/2), outside the hull of feasible allocations at scale 1.
  try {
    make_single_minded_ca(3, {bundle_of({0, 1}), bundle_of({1, 2}), bundle_of({0, 2})},
                          BundleSpace::kDeclared, 1);
    FAIL() << "expected a construction error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConstruction);
  }
}

TEST(GapToy, CurveAndCalibration) {
  const Instance inst = make_gap_toy(1, 1);
  // l(t) = t(2 - t)/2, so l(1) = 1/2 and 2 l(t) is the unit-peak curve.
  EXPECT_EQ(gap_curve_exact(1), Rational(1, 2));
  EXPECT_EQ(2 * gap_curve_exact(1), 1);
  const ValuationProfile p = gap_profile(inst, {4});
  const Allocated a = allocate(inst, p);
  EXPECT_EQ(a.point.coords, (RationalVector{1}));
  // Before r' the point is a sure win worth 4; after r' the keep
  // probability 1/2 brings it to 4 * l(1) = 2.
  const auto before = exact_distribution(convex_decompose(a.point, 1, inst));
  EXPECT_EQ(expected_welfare(before, p), 4);
  EXPECT_EQ(expected_welfare(a.distribution, p), 2);
  EXPECT_EQ(a.relaxed_value, 2);
}

TEST(GapToy, ZeroValuations) {
  const Instance inst = make_gap_toy(3, 2);
  const ValuationProfile p = gap_profile(inst, {0, 0, 0});
  const Allocated a = allocate(inst, p);
  EXPECT_EQ(a.relaxed_value, 0);
  EXPECT_EQ(expected_welfare(a.distribution, p), 0);
  EXPECT_EQ(payments(inst, p, a.distribution), (RationalVector{0, 0, 0}));
}

TEST(CaseB, ThinsTheWinner) {
  const Instance inst = make_case_b_family(2, Rational(1, 2));
  const ValuationProfile p = single_item_profile({5, 3});
  const Allocated a = allocate(inst, p);
  EXPECT_EQ(a.distribution, AllocationDistribution({{alloc({kA, 0}), Rational(1, 2)},
                                                    {Allocation::empty(2), Rational(1, 2)}}));
  EXPECT_EQ(expected_welfare(a.distribution, p), Rational(5, 2));
  EXPECT_EQ(*check_approximation(inst, p).ratio, Rational(1, 2));
}

TEST(CaseB, BetaOneMatchesSingleItem) {
  const Instance plain = make_single_item(3);
  const Instance b1 = make_case_b_family(3, 1);
  for (const ValuationProfile& p : grid_profiles(plain, {0, 2, 5})) {
    EXPECT_EQ(allocate(b1, p).distribution, allocate(plain, p).distribution);
  }
  EXPECT_THROW(make_case_b_family(2, 0), Error);
  EXPECT_THROW(make_case_b_family(2, Rational(3, 2)), Error);
}

TEST(CaseB, WelfareIsBetaTimesSingleItem) {
  const Rational beta(2, 3);
  const Instance plain = make_single_item(3);
  const Instance thinned = make_case_b_family(3, beta);
  for (const ValuationProfile& p : grid_profiles(plain, {0, 1, 4})) {
    EXPECT_EQ(expected_welfare(allocate(thinned, p).distribution, p),
              beta * expected_welfare(allocate(plain, p).distribution, p));
  }
}

TEST(NoMoney, Constructors) {
  const Instance lottery = make_no_money(4, NoMoneyKind::kLottery);
  EXPECT_EQ(lottery.num_vars(), 4);
  const Instance sp = make_no_money(2, NoMoneyKind::kSinglePeaked, 9);
  EXPECT_EQ(sp.num_vars(), 9);
  EXPECT_EQ(run_without_money(sp, peak_profile({2, 8})).point.coords[2], 1);
  EXPECT_THROW(make_no_money(0, NoMoneyKind::kLottery), Error);
}

TEST(AuditFamily, RejectsBrokenInstances) {
  Instance inst = make_single_item(2);
  inst.variables.push_back(inst.variables.front());
  EXPECT_THROW(audit_family(inst), Error);
}
