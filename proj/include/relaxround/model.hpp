#ifndef RELAXROUND_MODEL_HPP_
#define RELAXROUND_MODEL_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "relaxround/rational.hpp"

namespace relaxround {

// Set of items as a bitmask: bit j set iff item j is in the bundle.
using Bundle = std::uint32_t;
inline constexpr int kMaxItems = 16;
inline constexpr std::uint64_t kDefaultEnumerationBound = 50000;

Bundle bundle_of(std::initializer_list<int> items);
std::string bundle_to_string(Bundle bundle);
inline bool is_subset(Bundle inner, Bundle outer) {
  return (inner & ~outer) == 0;
}

// One bundle per bidder. Ordered colexicographically: the last bidder's
// bitmask is the most significant key, so for a single item the order is
// empty, bidder 0 wins, bidder 1 wins, ...
struct Allocation {
  std::vector<Bundle> bundles;

  static Allocation empty(int n) {
    return Allocation{std::vector<Bundle>(static_cast<std::size_t>(n), 0)};
  }
  int size() const { return static_cast<int>(bundles.size()); }
  bool is_empty() const;
  std::string to_string() const;

  bool operator==(const Allocation&) const = default;
  std::strong_ordering operator<=>(const Allocation& other) const;
};

struct AdditiveValuation {
  RationalVector item_values;
  bool operator==(const AdditiveValuation&) const = default;
};

// Values `value` for any superset of `bundle`, zero otherwise.
struct SingleMindedValuation {
  Bundle bundle = 0;
  Rational value;
  bool operator==(const SingleMindedValuation&) const = default;
};

// Explicit bundle -> value table. Lookups outside the table are errors,
// except the empty bundle which is always worth zero.
struct TableValuation {
  std::map<Bundle, Rational> values;
  bool operator==(const TableValuation&) const = default;
};

// Position on the line of locations 0..m-1. The value of location j is
// -|j - peak|.
struct SinglePeakedValuation {
  Rational peak;
  bool operator==(const SinglePeakedValuation&) const = default;
};

using Valuation = std::variant<AdditiveValuation, SingleMindedValuation,
                               TableValuation, SinglePeakedValuation>;

struct ValuationProfile {
  std::vector<Valuation> valuations;

  int size() const { return static_cast<int>(valuations.size()); }
  bool operator==(const ValuationProfile&) const = default;
};

enum class Family {
  kSingleItem,
  kSingleMindedCa,
  kGapToy,
  kNoMoneyLottery,
  kSinglePeaked,
};

std::string_view family_tag(Family family);
Family parse_family(std::string_view tag);
bool is_auction_family(Family family);

enum class RoundingCase { kA, kB, kC };
std::string_view rounding_case_tag(RoundingCase c);

// How r' derives per-bidder keep probabilities from the fractional point.
enum class KeepRule {
  kOnes,      // case c: r' is the identity
  kUniform,   // every bidder keeps with probability beta
  kGapCurve,  // keep_i = 1 - x_i / 2, bidder i's single variable
};

enum class PaymentRule {
  kVcg,
  // Negative control: each bidder pays its own expected reported value.
  kFirstPrice,
};

enum class BundleSpace {
  kDeclared,  // one variable per bidder, for its declared bundle
  kAll,       // one variable per bidder per nonempty bundle
};

struct FamilySpec {
  Rational alpha{1};
  RoundingCase rounding_case = RoundingCase::kC;
  Rational beta{1};
  // Factor applied to x* before decomposition. alpha for LS-style families.
  Rational decomposition_scale{1};
  KeepRule keep_rule = KeepRule::kOnes;

  // E[f(X')] = calibration_factor() * L(x) for every x the pipeline rounds.
  Rational calibration_factor() const;
  bool operator==(const FamilySpec&) const = default;
};

// Bidder index used by variables of a public outcome (single-peaked).
inline constexpr int kPublicOutcome = -1;

struct VariableKey {
  int bidder = 0;
  Bundle bundle = 0;
  bool operator==(const VariableKey&) const = default;
};

struct Instance {
  Family family = Family::kSingleItem;
  int n = 1;
  int m = 1;
  FamilySpec spec;
  PaymentRule payment_rule = PaymentRule::kVcg;

  // Single-minded CA: declared bundle per bidder and the variable space.
  std::vector<Bundle> declared_bundles;
  BundleSpace bundle_space = BundleSpace::kDeclared;

  // Gap toy: machine each bidder is eligible for; breakpoints per variable
  // of the piecewise-linear surrogate of the concave curve.
  std::vector<int> machine_of;
  int breakpoints = 16;

  // Relaxation variables; position in this vector is the variable index.
  std::vector<VariableKey> variables;

  int num_vars() const { return static_cast<int>(variables.size()); }
  std::optional<int> variable_of(int bidder, Bundle bundle) const;
  // Variables owned by `bidder`, in index order.
  std::vector<int> variables_of(int bidder) const;

  // Checks n, m, and that `variables` is duplicate-free and in range.
  void validate() const;
  bool operator==(const Instance&) const = default;
};

// Rebuilds instance.variables from the family-specific fields.
void assign_variables(Instance& instance);

Rational value_of_bundle(const Valuation& valuation, Bundle bundle);
Rational value_of(const ValuationProfile& profile, int bidder,
                  const Allocation& alloc);
Rational social_welfare(const ValuationProfile& profile,
                        const Allocation& alloc);

// Throws Error(kInvalidInput) naming the offending bidder/field when the
// profile does not fit the instance.
void validate_profile(const Instance& instance,
                      const ValuationProfile& profile);

bool is_feasible(const Instance& instance, const Allocation& alloc);

// All feasible allocations in ascending Allocation order, duplicate-free.
// Auction families include the all-empty allocation.
std::vector<Allocation> enumerate_feasible(
    const Instance& instance,
    std::uint64_t bound = kDefaultEnumerationBound);

// Indicator embedding chi(alloc) into the relaxation variable space.
RationalVector indicator(const Instance& instance, const Allocation& alloc);

}  // namespace relaxround

#endif  // RELAXROUND_MODEL_HPP_
