#include "relaxround/relaxation.hpp"

#include "relaxround/error.hpp"

namespace relaxround {

Rational ConcaveCurve::operator()(const Rational& t) const {
  if (t < knots.front() || t > knots.back()) {
    throw Error(ErrorKind::kEvaluation,
                "curve argument " + format_rational(t) + " outside [0, 1]");
  }
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    if (t <= knots[k + 1]) {
      const Rational w = (t - knots[k]) / (knots[k + 1] - knots[k]);
      return values[k] + w * (values[k + 1] - values[k]);
    }
  }
  return values.back();
}

RationalVector ConcaveCurve::slopes() const {
  RationalVector out;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    out.push_back((values[k + 1] - values[k]) / (knots[k + 1] - knots[k]));
  }
  return out;
}

Rational gap_curve_exact(const Rational& t) { return t * (2 - t) / 2; }

ConcaveCurve make_gap_curve(int breakpoints) {
  if (breakpoints < 1) {
    throw Error(ErrorKind::kInvalidInput, "breakpoints: must be >= 1");
  }
  ConcaveCurve curve;
  for (int k = 0; k <= breakpoints; ++k) {
    const Rational t = ratio(k, breakpoints);
    curve.knots.push_back(t);
    curve.values.push_back(gap_curve_exact(t));
  }
  return curve;
}

Rational gap_curve_secant_error(const ConcaveCurve& curve) {
  Rational worst = 0;
  for (std::size_t k = 0; k + 1 < curve.knots.size(); ++k) {
    const Rational mid = (curve.knots[k] + curve.knots[k + 1]) / 2;
    const Rational gap = gap_curve_exact(mid) - curve(mid);
    if (gap > worst) worst = gap;
  }
  return worst;
}

Rational RelaxedObjective::evaluate(const FractionalPoint& x) const {
  if (x.size() != static_cast<int>(coeffs.size())) {
    throw Error(ErrorKind::kInvalidInput, "objective: dimension mismatch");
  }
  Rational sum = 0;
  for (std::size_t v = 0; v < coeffs.size(); ++v) {
    if (coeffs[v] == 0) continue;
    sum += coeffs[v] * (curve ? (*curve)(x.coords[v]) : x.coords[v]);
  }
  return sum;
}

Rational RelaxedObjective::evaluate_bidder(const FractionalPoint& x,
                                           int bidder) const {
  Rational sum = 0;
  for (std::size_t v = 0; v < coeffs.size(); ++v) {
    if (owner[v] != bidder || coeffs[v] == 0) continue;
    sum += coeffs[v] * (curve ? (*curve)(x.coords[v]) : x.coords[v]);
  }
  return sum;
}

Polytope build_polytope(const Instance& instance) {
  Polytope poly;
  poly.num_vars = instance.num_vars();
  poly.packing = true;
  const auto row_over = [&](auto&& member) {
    Constraint c;
    c.bound = 1;
    c.coeffs.assign(instance.variables.size(), Rational(0));
    for (int v = 0; v < instance.num_vars(); ++v) {
      if (member(instance.variables[v])) c.coeffs[v] = 1;
    }
    return c;
  };
  switch (instance.family) {
    case Family::kSingleItem:
    case Family::kNoMoneyLottery:
    case Family::kSinglePeaked:
      poly.constraints.push_back(row_over([](const VariableKey&) { return true; }));
      break;
    case Family::kGapToy:
      for (int j = 0; j < instance.m; ++j) {
        const Bundle item = Bundle{1} << j;
        poly.constraints.push_back(
            row_over([item](const VariableKey& k) { return k.bundle == item; }));
      }
      break;
    case Family::kSingleMindedCa:
      for (int j = 0; j < instance.m; ++j) {
        const Bundle item = Bundle{1} << j;
        poly.constraints.push_back(row_over(
            [item](const VariableKey& k) { return (k.bundle & item) != 0; }));
      }
      for (int i = 0; i < instance.n; ++i) {
        poly.constraints.push_back(
            row_over([i](const VariableKey& k) { return k.bidder == i; }));
      }
      break;
  }
  return poly;
}

Relaxation build_relaxation(const Instance& instance,
                            const ValuationProfile& profile) {
  if (instance.family == Family::kSinglePeaked) {
    throw Error(ErrorKind::kUnsupportedFamily,
                "family 'single-peaked' has no relaxation recipe");
  }
  validate_profile(instance, profile);
  Relaxation out;
  out.polytope = build_polytope(instance);
  RelaxedObjective& obj = out.objective;
  obj.alpha = instance.spec.alpha;
  for (const VariableKey& key : instance.variables) {
    obj.coeffs.push_back(
        value_of_bundle(profile.valuations[key.bidder], key.bundle));
    obj.owner.push_back(key.bidder);
  }
  if (instance.family == Family::kGapToy) {
    obj.curve = make_gap_curve(instance.breakpoints);
  }
  return out;
}

RelaxedOptimum solve_relaxation(const RelaxedObjective& objective,
                                const Polytope& poly) {
  if (static_cast<int>(objective.coeffs.size()) != poly.num_vars) {
    throw Error(ErrorKind::kInvalidInput,
                "relaxation: objective and polytope dimensions differ");
  }
  RelaxedOptimum out;
  if (objective.is_linear()) {
    LinearOptimum lp = maximize_linear(objective.coeffs, poly);
    out.point = std::move(lp.point);
    out.value = std::move(lp.value);
    return out;
  }

  // Segment variable (v, k) carries the part of x_v inside segment k.
  const ConcaveCurve& curve = *objective.curve;
  const RationalVector slopes = curve.slopes();
  const std::size_t segs = slopes.size();
  const std::size_t n = objective.coeffs.size();
  Polytope split;
  split.num_vars = static_cast<int>(n * segs);
  split.packing = poly.packing;
  for (const Constraint& c : poly.constraints) {
    Constraint row;
    row.bound = c.bound;
    row.coeffs.assign(n * segs, Rational(0));
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t k = 0; k < segs; ++k) row.coeffs[v * segs + k] = c.coeffs[v];
    }
    split.constraints.push_back(std::move(row));
  }
  RationalVector lifted(n * segs, Rational(0));
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t k = 0; k < segs; ++k) {
      Constraint width;
      width.bound = curve.knots[k + 1] - curve.knots[k];
      width.coeffs.assign(n * segs, Rational(0));
      width.coeffs[v * segs + k] = 1;
      split.constraints.push_back(std::move(width));
      lifted[v * segs + k] = objective.coeffs[v] * slopes[k];
    }
  }
  const LinearOptimum lp = maximize_linear(lifted, split);
  out.point.coords.assign(n, Rational(0));
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t k = 0; k < segs; ++k) {
      out.point.coords[v] += lp.point.coords[v * segs + k];
    }
  }
  out.value = objective.evaluate(out.point);
  return out;
}

RelaxedObjective residual_objective(const RelaxedObjective& objective,
                                    int bidder, int num_bidders) {
  if (bidder < 0 || bidder >= num_bidders) {
    throw Error(ErrorKind::kInvalidInput,
                "residual_objective: bidder " + std::to_string(bidder) +
                    " out of range");
  }
  RelaxedObjective out = objective;
  for (std::size_t v = 0; v < out.coeffs.size(); ++v) {
    if (out.owner[v] == bidder) out.coeffs[v] = 0;
  }
  return out;
}

AlphaAudit audit_alpha(const RelaxedObjective& objective,
                       const Instance& instance,
                       const ValuationProfile& profile) {
  AlphaAudit audit;
  audit.checked_equality = objective.is_linear();
  for (const Allocation& s : enumerate_feasible(instance)) {
    const Rational relaxed =
        objective.evaluate(FractionalPoint{indicator(instance, s)});
    const Rational welfare = social_welfare(profile, s);
    const bool ok = audit.checked_equality
                        ? relaxed == welfare
                        : relaxed >= objective.alpha * welfare;
    if (!ok) {
      audit.pass = false;
      audit.counterexample = s;
      audit.relaxed = relaxed;
      audit.welfare = welfare;
      audit.message = "L(chi(s)) = " + format_rational(relaxed) +
                      (audit.checked_equality ? " != f(s) = "
                                              : " < alpha * f(s), f(s) = ") +
                      format_rational(welfare) + " at s = " + s.to_string();
      return audit;
    }
  }
  audit.message = audit.checked_equality ? "L(chi(s)) = f(s) on every s"
                                         : "L(chi(s)) >= alpha f(s) on every s";
  return audit;
}

}  // namespace relaxround
