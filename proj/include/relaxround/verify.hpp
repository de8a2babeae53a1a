#ifndef RELAXROUND_VERIFY_HPP_
#define RELAXROUND_VERIFY_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relaxround/mechanism.hpp"

namespace relaxround {

inline constexpr std::uint64_t kDefaultRunBudget = 1000000;
inline constexpr std::size_t kMaxStoredFailures = 100;

enum class CheckStatus { kPass, kFail, kTruncated };
std::string_view check_status_tag(CheckStatus status);

// One failing case. `lhs` is the quantity that must not exceed `rhs` (or
// must equal it, for identity checks).
struct Witness {
  std::uint64_t profile_id = 0;
  std::string profile;
  int bidder = -1;
  std::string misreport;
  Rational lhs;
  Rational rhs;
  std::string note;
};

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kPass;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  // Quantification domain: family, n, m, grid.
  std::string domain;
  std::vector<Witness> witnesses;  // first kMaxStoredFailures failures

  bool passed() const { return status == CheckStatus::kPass; }
  void record_failure(Witness w);
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_pass() const;
  std::uint64_t total_failures() const;
};

// Exact argmax of f over the enumerated feasible set; first maximum wins.
std::pair<Allocation, Rational> brute_force_opt(const Instance& instance,
                                                const ValuationProfile& profile);

// Every profile whose per-bidder scalar (bid, single-minded value at the
// declared bundle, gap-toy machine value, or peak) ranges over `grid`.
std::vector<ValuationProfile> grid_profiles(const Instance& instance,
                                            const RationalVector& grid);

// Reports bidder k may submit: its scalar over `grid`, plus every nonempty
// bundle for single-minded bidders when m <= 3.
std::vector<Valuation> misreports(const Instance& instance, int bidder,
                                  const RationalVector& grid);

std::string valuation_to_string(const Valuation& v);
std::string profile_to_string(const ValuationProfile& profile);
std::string domain_string(const Instance& instance, const RationalVector& grid);

// E[v_k(X)] - p_k under true valuation `truth` when `reported` is submitted.
Rational expected_utility(const Instance& instance,
                          const ValuationProfile& truth,
                          const ValuationProfile& reported, int bidder);

// Truthful-in-expectation inequality for every grid profile, bidder and
// misreport, with zero tolerance.
VerificationReport check_truthfulness(const Instance& instance,
                                      const RationalVector& value_grid,
                                      const RationalVector& misreport_grid,
                                      std::uint64_t budget = kDefaultRunBudget);

struct ApproximationResult {
  std::optional<Rational> ratio;  // unset when OPT = 0
  Rational expected_welfare;
  Rational opt;
  Rational bound;  // alpha * beta
  bool pass = true;
};

ApproximationResult check_approximation(const Instance& instance,
                                        const ValuationProfile& profile);
VerificationReport check_approximation_grid(const Instance& instance,
                                            const RationalVector& grid);

// r(x, v): a rounding that may read reports.
using Rounder = std::function<AllocationDistribution(
    const FractionalPoint&, const ValuationProfile&)>;

Rounder oblivious_rounder(const Instance& instance);
// Negative control for single-item-structured families: hands all of x's
// mass to the bidder with the lowest reported value among those with x_i > 0.
Rounder underdog_rounder(const Instance& instance);

// Rounds the fixed point x under every profile; all outputs must be
// bit-identical.
VerificationReport check_obliviousness(const Instance& instance,
                                       const std::vector<ValuationProfile>& profiles,
                                       const FractionalPoint& x,
                                       const Rounder& rounder);
VerificationReport check_obliviousness(const Instance& instance,
                                       const std::vector<ValuationProfile>& profiles,
                                       const FractionalPoint& x);

// E[f_v(r(x, v'_k, v_{-k}))] <= E[f_v(r(x, v))] over probe points x, grid
// profiles v, bidders k and grid misreports v'_k.
VerificationReport check_nonoblivious_condition(const Rounder& rounder,
                                                const Instance& instance,
                                                const RationalVector& value_grid);

// Pr[X in S] = 1 and E[v_i(X)] = beta v_i(x) for every bidder, exactly.
VerificationReport check_without_money(const Instance& instance,
                                       const ValuationProfile& profile,
                                       const Rational& beta);

// Median rule: no misreported peak moves the outcome closer to the true
// peak, over peak_grid^n.
VerificationReport check_median_no_improvement(const Instance& instance,
                                               const RationalVector& peak_grid);

// E[u_k] = c (L(x*) - max_P L^{-k}) for every grid profile and bidder.
VerificationReport check_utility_identity(const Instance& instance,
                                          const RationalVector& grid);

// Decomposition identity, normalization, positivity and support bound for
// x* of every grid profile and every probe point of P.
VerificationReport check_decomposition_identities(const Instance& instance,
                                                  const RationalVector& grid);

// Points of P whose coordinates all lie in `coords` (default quarters).
std::vector<FractionalPoint> probe_points(const Instance& instance,
                                          const RationalVector& coords,
                                          std::size_t limit = 20000);
RationalVector quarter_grid();

}  // namespace relaxround

#endif  // RELAXROUND_VERIFY_HPP_
