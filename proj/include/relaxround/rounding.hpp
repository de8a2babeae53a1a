#ifndef RELAXROUND_ROUNDING_HPP_
#define RELAXROUND_ROUNDING_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "relaxround/lp.hpp"
#include "relaxround/model.hpp"

namespace relaxround {

struct DecompositionTerm {
  Rational weight;
  Allocation alloc;
};

// sum_j weight_j chi(alloc_j) = scale * x with positive weights summing to 1.
struct ConvexDecomposition {
  std::vector<DecompositionTerm> terms;
};

// Lottery over allocations with exact positive probabilities summing to 1.
// Construction rejects anything else.
class AllocationDistribution {
 public:
  using MassMap = std::map<Allocation, Rational>;

  explicit AllocationDistribution(MassMap mass);
  static AllocationDistribution point_mass(const Allocation& alloc);

  const MassMap& mass() const { return mass_; }
  std::size_t support_size() const { return mass_.size(); }
  Rational probability(const Allocation& alloc) const;
  bool contains(const Allocation& alloc) const { return mass_.count(alloc) > 0; }

  bool operator==(const AllocationDistribution&) const = default;

 private:
  MassMap mass_;
};

// Solves for lottery weights over enumerate_feasible(instance) with phase-one
// simplex; the empty allocation absorbs slack. Never reads valuations.
// Throws DecompositionInfeasible when scale * x is outside the convex hull.
ConvexDecomposition convex_decompose(const FractionalPoint& x,
                                     const Rational& scale,
                                     const Instance& instance);

AllocationDistribution exact_distribution(const ConvexDecomposition& d);

// r': each bidder independently keeps its bundle with probability
// keep_prob[i] and is emptied otherwise. Case c requires all ones and is the
// identity.
AllocationDistribution adjust(const AllocationDistribution& dist,
                              RoundingCase rounding_case,
                              const RationalVector& keep_prob);

// Family keep probabilities. Reads the fractional point only.
RationalVector keep_probabilities(const Instance& instance,
                                  const FractionalPoint& x);

// r'(r(x)) for the instance's family.
AllocationDistribution round_oblivious(const Instance& instance,
                                       const FractionalPoint& x);

Rational expected_welfare(const AllocationDistribution& dist,
                          const ValuationProfile& profile);
RationalVector expected_value_per_bidder(const AllocationDistribution& dist,
                                         const ValuationProfile& profile);

// sum_a mass(a) chi(a): the distribution's marginal on each variable.
RationalVector marginals(const AllocationDistribution& dist,
                         const Instance& instance);

// Inverse-CDF draw over the ordered support. The generator is
// std::mt19937_64 seeded with `seed`; its first output u is read as the
// exact rational u / 2^64.
Allocation sample(const AllocationDistribution& dist, std::uint64_t seed);

}  // namespace relaxround

#endif  // RELAXROUND_ROUNDING_HPP_
