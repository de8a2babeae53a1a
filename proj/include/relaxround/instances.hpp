#ifndef RELAXROUND_INSTANCES_HPP_
#define RELAXROUND_INSTANCES_HPP_

#include <utility>
#include <vector>

#include "relaxround/model.hpp"

namespace relaxround {

// One item, additive bids, alpha = 1, case c. The pipeline reduces to a
// second-price auction.
Instance make_single_item(int n);

// Single item with r' thinning every bidder uniformly by beta (case b).
Instance make_case_b_family(int n, const Rational& beta);

// Single-minded bidders with declared bundles `desires` (one per bidder,
// m <= 4). Decomposition runs at scale alpha; construction probes value
// profiles over {0, 1, 2} and throws Error(kConstruction) if some optimum
// cannot be decomposed at that scale.
Instance make_single_minded_ca(int m, const std::vector<Bundle>& desires,
                               BundleSpace space = BundleSpace::kDeclared,
                               const Rational& alpha = Rational(1, 2));

// Bidder i is a job eligible for machine i mod machines; each machine takes
// one job. L uses the concave curve t(2 - t)/2 per variable (alpha = 1/2,
// case a) with keep probability 1 - x_i/2. Construction audits the exact
// calibration on quarter-grid probe points.
Instance make_gap_toy(int bidders, int machines, int breakpoints = 16);

enum class NoMoneyKind { kLottery, kSinglePeaked };

// kLottery: one item, n bidders. kSinglePeaked: locations 0..locations-1.
Instance make_no_money(int n, NoMoneyKind kind, int locations = 7);

// Scalar-valued profile helpers for the families above.
ValuationProfile single_item_profile(const RationalVector& bids);
ValuationProfile single_minded_profile(const Instance& instance,
                                       const RationalVector& values);
ValuationProfile gap_profile(const Instance& instance,
                             const RationalVector& values);
ValuationProfile peak_profile(const RationalVector& peaks);

// Linear scan keeping the first maximum: max := a_1, replace on a strictly
// larger a_i.
std::pair<int, Rational> find_max(const RationalVector& values);

// Construction-time audits shared by the constructors and the file loader.
void audit_family(const Instance& instance);

}  // namespace relaxround

#endif  // RELAXROUND_INSTANCES_HPP_
