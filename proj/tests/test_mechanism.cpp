#include <gtest/gtest.h>

#include <random>

#include "relaxround/error.hpp"
#include "relaxround/instances.hpp"
#include "relaxround/mechanism.hpp"
#include "relaxround/verify.hpp"

using namespace relaxround;

namespace {

const Bundle kA = bundle_of({0});
const Bundle kB = bundle_of({1});

Allocation alloc(std::vector<Bundle> b) { return Allocation{std::move(b)}; }

struct Market {
  Instance instance;
  ValuationProfile profile;
};

std::vector<Market> random_markets(int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> v(0, 6);
  const std::vector<Instance> families{
      make_single_item(3),
      make_case_b_family(3, Rational(1, 2)),
      make_single_minded_ca(3, {bundle_of({0, 1}), bundle_of({1, 2}), kA}),
      make_single_minded_ca(2, {bundle_of({0, 1}), kB}, BundleSpace::kAll),
      make_gap_toy(3, 2),
  };
  std::vector<Market> out;
  for (int t = 0; t < count; ++t) {
    const Instance& inst = families[t % families.size()];
    RationalVector values;
    for (int i = 0; i < inst.n; ++i) values.push_back(v(rng));
    ValuationProfile p;
    if (inst.family == Family::kSingleMindedCa) {
      p = single_minded_profile(inst, values);
    } else if (inst.family == Family::kGapToy) {
      p = gap_profile(inst, values);
    } else {
      p = single_item_profile(values);
    }
    out.push_back({inst, p});
  }
  return out;
}

}  // namespace

TEST(Allocate, SingleItemExamples) {
  const Instance inst = make_single_item(2);
  const Allocated a = allocate(inst, single_item_profile({5, 3}));
  EXPECT_EQ(a.point.coords, (RationalVector{1, 0}));
  EXPECT_EQ(a.distribution, AllocationDistribution::point_mass(alloc({kA, 0})));
  EXPECT_EQ(allocate(inst, single_item_profile({4, 4})).distribution,
            AllocationDistribution::point_mass(alloc({kA, 0})));
  EXPECT_EQ(allocate(inst, single_item_profile({0, 0})).distribution,
            AllocationDistribution::point_mass(Allocation::empty(2)));
}

TEST(Allocate, RejectsFamiliesWithoutPayments) {
  const Instance lottery = make_no_money(2, NoMoneyKind::kLottery);
  try {
    allocate(lottery, single_item_profile({1, 2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedFamily);
  }
}

TEST(Payments, VickreyExamples) {
  const auto pay = [](RationalVector bids) {
    const Instance inst = make_single_item(static_cast<int>(bids.size()));
    const ValuationProfile p = single_item_profile(bids);
    return payments(inst, p, allocate(inst, p).distribution);
  };
  EXPECT_EQ(pay({5, 3}), (RationalVector{3, 0}));
  EXPECT_EQ(pay({7}), (RationalVector{0}));
  EXPECT_EQ(pay({4, 4}), (RationalVector{4, 0}));
  EXPECT_EQ(pay({5, 3, 2}), (RationalVector{3, 0, 0}));
  EXPECT_EQ(pay({0, 0}), (RationalVector{0, 0}));
}

TEST(Payments, FirstPriceControlChargesOwnValue) {
  Instance inst = make_single_item(2);
  inst.payment_rule = PaymentRule::kFirstPrice;
  const ValuationProfile p = single_item_profile({5, 3});
  EXPECT_EQ(payments(inst, p, allocate(inst, p).distribution), (RationalVector{5, 0}));
}

TEST(Payments, NonNegativeAndIndividuallyRational) {
  for (const Market& m : random_markets(60, 21)) {
    const Allocated a = allocate(m.instance, m.profile);
    const RationalVector pay = payments(m.instance, m.profile, a.distribution);
    const RationalVector val = expected_value_per_bidder(a.distribution, m.profile);
    for (int k = 0; k < m.instance.n; ++k) {
      EXPECT_GE(pay[k], 0) << family_tag(m.instance.family);
      EXPECT_GE(val[k] - pay[k], 0) << family_tag(m.instance.family);
    }
  }
}

TEST(Payments, ExpectedRealizedPaymentMatches) {
  for (const Market& m : random_markets(40, 22)) {
    const Allocated a = allocate(m.instance, m.profile);
    const RationalVector pay = payments(m.instance, m.profile, a.distribution);
    for (int k = 0; k < m.instance.n; ++k) {
      // Oracle: sum over both pipelines' supports of the realized VCG charge.
      const Allocated ex = allocate_without(m.instance, m.profile, k);
      Rational direct = 0;
      for (const auto& [t, q] : ex.distribution.mass()) {
        for (const auto& [s, p] : a.distribution.mass()) {
          Rational charge = 0;
          for (int i = 0; i < m.instance.n; ++i) {
            if (i != k) charge += value_of(m.profile, i, t) - value_of(m.profile, i, s);
          }
          direct += p * q * charge;
        }
      }
      EXPECT_EQ(expected_realized_payment(m.instance, m.profile, a.distribution, k), direct);
      EXPECT_EQ(direct, pay[k]) << family_tag(m.instance.family) << " bidder " << k;
    }
  }
}

TEST(Run, SingleItemOutcome) {
  const Instance inst = make_single_item(2);
  for (std::uint64_t seed : {0ULL, 7ULL, 123456789ULL}) {
    const MechanismOutcome o = run(inst, single_item_profile({5, 3}), seed);
    EXPECT_EQ(o.realized, alloc({kA, 0}));
    EXPECT_EQ(o.expected_payments, (RationalVector{3, 0}));
    EXPECT_EQ(o.realized_payments, (RationalVector{3, 0}));
    EXPECT_EQ(o.seed, seed);
  }
  const MechanismOutcome zero = run(inst, single_item_profile({0, 0}), 1);
  EXPECT_EQ(zero.expected_payments, (RationalVector{0, 0}));
  EXPECT_EQ(zero.realized_payments, (RationalVector{0, 0}));
}

TEST(Run, RealizedInSupportAndDeterministic) {
  for (const Market& m : random_markets(30, 23)) {
    const MechanismOutcome o = run(m.instance, m.profile, 99);
    EXPECT_TRUE(o.distribution.contains(o.realized));
    const MechanismOutcome again = run(m.instance, m.profile, 99);
    EXPECT_EQ(again.realized, o.realized);
    EXPECT_EQ(again.realized_payments, o.realized_payments);
  }
}

TEST(Range, SingleItemMembers) {
  const RangeDescriptor range = distributional_range(make_single_item(2));
  EXPECT_TRUE(range.contains(AllocationDistribution::point_mass(alloc({kA, 0}))));
  EXPECT_TRUE(range.contains(AllocationDistribution::point_mass(alloc({0, kA}))));
  EXPECT_TRUE(range.contains(AllocationDistribution(
      {{alloc({kA, 0}), Rational(1, 2)}, {alloc({0, kA}), Rational(1, 2)}})));
}

TEST(Range, RejectsDistributionsWithoutPreimage) {
  // Infeasible support: both bidders hold the single item.
  const RangeDescriptor item = distributional_range(make_single_item(2));
  EXPECT_FALSE(item.contains(AllocationDistribution::point_mass(alloc({kA, kA}))));

  // Case b at beta = 1/2 can never give bidder 0 more than mass 1/2.
  const RangeDescriptor thinned = distributional_range(make_case_b_family(2, Rational(1, 2)));
  EXPECT_FALSE(thinned.contains(AllocationDistribution(
      {{alloc({kA, 0}), Rational(3, 4)}, {Allocation::empty(2), Rational(1, 4)}})));
  EXPECT_TRUE(thinned.contains(AllocationDistribution(
      {{alloc({kA, 0}), Rational(1, 2)}, {Allocation::empty(2), Rational(1, 2)}})));

  // Single-minded at scale 1/2: each winner's mass is at most 1/2.
  const Instance ca = make_single_minded_ca(2, {kA, kB});
  const RangeDescriptor ls = distributional_range(ca);
  EXPECT_FALSE(ls.contains(AllocationDistribution::point_mass(alloc({kA, kB}))));

  // Two lotteries share the marginals (1/2, 1/2); only the one the
  // decomposition actually returns for x = (1, 1) is in the range.
  const AllocationDistribution joint({{alloc({kA, kB}), Rational(1, 2)},
                                      {Allocation::empty(2), Rational(1, 2)}});
  const AllocationDistribution split({{alloc({kA, 0}), Rational(1, 2)},
                                      {alloc({0, kB}), Rational(1, 2)}});
  const AllocationDistribution image = round_oblivious(ca, FractionalPoint{{1, 1}});
  ASSERT_TRUE(image == joint || image == split);
  EXPECT_TRUE(ls.contains(image));
  EXPECT_FALSE(ls.contains(image == joint ? split : joint));
}

TEST(Range, GapToyPreimageInvertsKeepRule) {
  const Instance inst = make_gap_toy(2, 1);
  const RangeDescriptor range = distributional_range(inst);
  for (const FractionalPoint& x : probe_points(inst, quarter_grid())) {
    const auto pre = range.preimage(round_oblivious(inst, x));
    ASSERT_TRUE(pre);
    EXPECT_EQ(*pre, x);
  }
  // Marginal 1/2 for bidder 0 needs x = 1 and keep 1/2: in range. Marginal
  // 1/3 needs sqrt(1/3), which is irrational: not in range.
  EXPECT_TRUE(range.contains(AllocationDistribution(
      {{Allocation::empty(2), Rational(1, 2)}, {alloc({kA, 0}), Rational(1, 2)}})));
  EXPECT_FALSE(range.contains(AllocationDistribution(
      {{Allocation::empty(2), Rational(2, 3)}, {alloc({kA, 0}), Rational(1, 3)}})));
}

TEST(Range, EveryAllocateOutputIsAMember) {
  for (const Market& m : random_markets(40, 24)) {
    const RangeDescriptor range = distributional_range(m.instance);
    EXPECT_TRUE(range.contains_allocation_of(m.profile));
    EXPECT_TRUE(range.contains(allocate(m.instance, m.profile).distribution))
        << family_tag(m.instance.family) << " " << profile_to_string(m.profile);
  }
}

TEST(WithoutMoney, LotteryIsUniform) {
  const Instance inst = make_no_money(2, NoMoneyKind::kLottery);
  const ValuationProfile p = single_item_profile({4, 6});
  const WithoutMoneyOutcome o = run_without_money(inst, p);
  EXPECT_EQ(o.point.coords, (RationalVector{Rational(1, 2), Rational(1, 2)}));
  EXPECT_EQ(o.distribution, AllocationDistribution({{alloc({kA, 0}), Rational(1, 2)},
                                                    {alloc({0, kA}), Rational(1, 2)}}));
  const RationalVector ev = expected_value_per_bidder(o.distribution, p);
  for (int i = 0; i < 2; ++i) EXPECT_EQ(ev[i], fractional_value(inst, p, i, o.point));

  const Instance four = make_no_money(4, NoMoneyKind::kLottery);
  const WithoutMoneyOutcome o4 = run_without_money(four, single_item_profile({1, 2, 3, 4}));
  for (int i = 0; i < 4; ++i) {
    Allocation win = Allocation::empty(4);
    win.bundles[i] = kA;
    EXPECT_EQ(o4.distribution.probability(win), Rational(1, 4));
  }
}

TEST(WithoutMoney, MedianPeak) {
  EXPECT_EQ(median_peak({1, 5, 3}), 3);
  EXPECT_EQ(median_peak({2, 8}), 2);
  EXPECT_EQ(median_peak({6}), 6);
  EXPECT_THROW(median_peak({}), Error);

  const Instance inst = make_no_money(3, NoMoneyKind::kSinglePeaked, 7);
  const WithoutMoneyOutcome o = run_without_money(inst, peak_profile({1, 5, 3}));
  const Bundle three = Bundle{1} << 3;
  EXPECT_EQ(o.distribution, AllocationDistribution::point_mass(
                                Allocation{std::vector<Bundle>(3, three)}));

  const Instance big = make_no_money(1, NoMoneyKind::kSinglePeaked, 8);
  const WithoutMoneyOutcome solo = run_without_money(big, peak_profile({7}));
  EXPECT_EQ(solo.point.coords[7], 1);
}
