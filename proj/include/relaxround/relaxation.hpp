#ifndef RELAXROUND_RELAXATION_HPP_
#define RELAXROUND_RELAXATION_HPP_

#include <optional>
#include <string>
#include <vector>

#include "relaxround/lp.hpp"
#include "relaxround/model.hpp"

namespace relaxround {

// Concave curve on [0, 1], stored as its piecewise-linear secant surrogate:
// values at knots 0 = t_0 < ... < t_K = 1, linear in between.
struct ConcaveCurve {
  RationalVector knots;
  RationalVector values;

  Rational operator()(const Rational& t) const;
  // Slope of each of the K segments; strictly decreasing for a strictly
  // concave curve.
  RationalVector slopes() const;
  bool operator==(const ConcaveCurve&) const = default;
};

// t (2 - t) / 2, the gap toy's per-variable curve.
Rational gap_curve_exact(const Rational& t);
ConcaveCurve make_gap_curve(int breakpoints);
// max over segments of (exact - secant) at the segment midpoint, exact for
// the quadratic gap curve.
Rational gap_curve_secant_error(const ConcaveCurve& curve);

// L(x) = sum_v coeffs[v] * g(x_v), where g is the identity for a linear
// objective and `curve` otherwise. owner[v] is the bidder of variable v,
// which realizes L = sum_i L_i.
struct RelaxedObjective {
  RationalVector coeffs;
  std::optional<ConcaveCurve> curve;
  Rational alpha{1};
  std::vector<int> owner;

  bool is_linear() const { return !curve.has_value(); }
  Rational evaluate(const FractionalPoint& x) const;
  Rational evaluate_bidder(const FractionalPoint& x, int bidder) const;
};

struct Relaxation {
  RelaxedObjective objective;
  Polytope polytope;
};

// The family's packing polytope P, independent of any profile.
Polytope build_polytope(const Instance& instance);

Relaxation build_relaxation(const Instance& instance,
                            const ValuationProfile& profile);

struct RelaxedOptimum {
  FractionalPoint point;
  Rational value;  // L(point)
};

// argmax over P. Linear objectives go straight to the simplex; concave ones
// are split into one bounded variable per curve segment first.
RelaxedOptimum solve_relaxation(const RelaxedObjective& objective,
                                const Polytope& poly);

// L^{-k}: every coefficient owned by bidder k set to zero.
RelaxedObjective residual_objective(const RelaxedObjective& objective,
                                    int bidder, int num_bidders);

struct AlphaAudit {
  bool pass = true;
  bool checked_equality = false;
  std::optional<Allocation> counterexample;
  Rational relaxed;  // L(chi(s)) at the counterexample
  Rational welfare;  // f(s) at the counterexample
  std::string message;
};

// Checks L(chi(s)) >= alpha f(s) on every feasible s, and equality
// L(chi(s)) = f(s) as well for linear (LS-style) objectives.
AlphaAudit audit_alpha(const RelaxedObjective& objective,
                       const Instance& instance,
                       const ValuationProfile& profile);

}  // namespace relaxround

#endif  // RELAXROUND_RELAXATION_HPP_
