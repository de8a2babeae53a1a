#ifndef RELAXROUND_MECHANISM_HPP_
#define RELAXROUND_MECHANISM_HPP_

#include <cstdint>
#include <optional>

#include "relaxround/relaxation.hpp"
#include "relaxround/rounding.hpp"

namespace relaxround {

struct Allocated {
  FractionalPoint point;  // x*
  AllocationDistribution distribution;
  Rational relaxed_value;  // L(x*)
};

// x* = argmax_P L, then r'(r(x*)).
Allocated allocate(const Instance& instance, const ValuationProfile& profile);

// Same pipeline on L^{-k}: the market with bidder k's reports zeroed.
Allocated allocate_without(const Instance& instance,
                           const ValuationProfile& profile, int bidder);

// Expected payments. VCG: p_k = c * max_P L^{-k} - E[sum_{i != k} v_i(S_i)]
// with c the family's calibration factor, so both terms live on the scale
// of E[f(X')]. First-price (negative control): p_k = E[v_k(S_k)].
RationalVector payments(const Instance& instance,
                        const ValuationProfile& profile,
                        const AllocationDistribution& dist);

// Expectation, over the two pipelines' exact distributions, of the realized
// VCG payment sum_{i != k} v_i(T_i) - sum_{i != k} v_i(S_i).
Rational expected_realized_payment(const Instance& instance,
                                   const ValuationProfile& profile,
                                   const AllocationDistribution& dist,
                                   int bidder);

struct MechanismOutcome {
  FractionalPoint point;
  AllocationDistribution distribution;
  Allocation realized;
  RationalVector expected_payments;
  // Realized VCG payments from seeded runs of the bidder-excluded pipelines.
  RationalVector realized_payments;
  Rational relaxed_value;
  std::uint64_t seed = 0;
};

// Seed used for bidder k's excluded pipeline in run().
std::uint64_t excluded_seed(std::uint64_t seed, int bidder);

MechanismOutcome run(const Instance& instance, const ValuationProfile& profile,
                     std::uint64_t seed);

// The image of r' o r over P. Built from the instance alone.
class RangeDescriptor {
 public:
  explicit RangeDescriptor(Instance instance);

  const Instance& instance() const { return instance_; }
  const Polytope& polytope() const { return polytope_; }

  // A point x in P with r'(r(x)) == dist, if one exists.
  std::optional<FractionalPoint> preimage(
      const AllocationDistribution& dist) const;
  bool contains(const AllocationDistribution& dist) const {
    return preimage(dist).has_value();
  }
  // allocate()'s output for `profile` equals the pipeline applied to its own
  // x*, i.e. the mechanism picked a member of the range.
  bool contains_allocation_of(const ValuationProfile& profile) const;

 private:
  Instance instance_;
  Polytope polytope_;
};

RangeDescriptor distributional_range(const Instance& instance);

struct WithoutMoneyOutcome {
  FractionalPoint point;
  AllocationDistribution distribution;
};

// no-money-lottery: constant point x_i = 1/n rounded by decomposition (a
// uniform lottery). single-peaked: point mass on the lower median peak.
WithoutMoneyOutcome run_without_money(const Instance& instance,
                                      const ValuationProfile& profile);

// Lower median: element (n-1)/2 of the sorted list.
Rational median_peak(RationalVector peaks);

// v_i extended linearly to fractional points: sum_v x_v v_i(bundle_v) over
// variables bidder i can receive (all variables for a public outcome).
Rational fractional_value(const Instance& instance,
                          const ValuationProfile& profile, int bidder,
                          const FractionalPoint& x);

}  // namespace relaxround

#endif  // RELAXROUND_MECHANISM_HPP_
