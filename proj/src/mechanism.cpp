#include "relaxround/mechanism.hpp"

#include <algorithm>

#include "relaxround/error.hpp"

namespace relaxround {

namespace {

Allocated allocate_with(const Instance& instance,
                        const RelaxedObjective& objective,
                        const Polytope& poly) {
  RelaxedOptimum opt = solve_relaxation(objective, poly);
  AllocationDistribution dist = round_oblivious(instance, opt.point);
  return Allocated{std::move(opt.point), std::move(dist), std::move(opt.value)};
}

void require_auction(const Instance& instance) {
  if (!is_auction_family(instance.family) ||
      instance.family == Family::kNoMoneyLottery) {
    throw Error(ErrorKind::kUnsupportedFamily,
                "family '" + std::string(family_tag(instance.family)) +
                    "' has no payment-based mechanism");
  }
}

Rational others_value(const RationalVector& per_bidder, int bidder) {
  Rational sum = 0;
  for (int i = 0; i < static_cast<int>(per_bidder.size()); ++i) {
    if (i != bidder) sum += per_bidder[i];
  }
  return sum;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t())) {
    return std::nullopt;
  }
  Rational r(sqrt(num), sqrt(den));
  r.canonicalize();
  return r;
}

}  // namespace

Allocated allocate(const Instance& instance, const ValuationProfile& profile) {
  require_auction(instance);
  const Relaxation relax = build_relaxation(instance, profile);
  return allocate_with(instance, relax.objective, relax.polytope);
}

Allocated allocate_without(const Instance& instance,
                           const ValuationProfile& profile, int bidder) {
  require_auction(instance);
  const Relaxation relax = build_relaxation(instance, profile);
  return allocate_with(instance,
                       residual_objective(relax.objective, bidder, instance.n),
                       relax.polytope);
}

RationalVector payments(const Instance& instance,
                        const ValuationProfile& profile,
                        const AllocationDistribution& dist) {
  require_auction(instance);
  const RationalVector expected = expected_value_per_bidder(dist, profile);
  if (instance.payment_rule == PaymentRule::kFirstPrice) return expected;

  const Relaxation relax = build_relaxation(instance, profile);
  const Rational factor = instance.spec.calibration_factor();
  RationalVector out(static_cast<std::size_t>(instance.n));
  for (int k = 0; k < instance.n; ++k) {
    const RelaxedOptimum residual = solve_relaxation(
        residual_objective(relax.objective, k, instance.n), relax.polytope);
    out[k] = factor * residual.value - others_value(expected, k);
  }
  return out;
}

Rational expected_realized_payment(const Instance& instance,
                                   const ValuationProfile& profile,
                                   const AllocationDistribution& dist,
                                   int bidder) {
  const Allocated excluded = allocate_without(instance, profile, bidder);
  return others_value(
             expected_value_per_bidder(excluded.distribution, profile),
             bidder) -
         others_value(expected_value_per_bidder(dist, profile), bidder);
}

std::uint64_t excluded_seed(std::uint64_t seed, int bidder) {
  return seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(bidder + 1));
}

MechanismOutcome run(const Instance& instance, const ValuationProfile& profile,
                     std::uint64_t seed) {
  Allocated alloc = allocate(instance, profile);
  MechanismOutcome out{alloc.point,
                       alloc.distribution,
                       sample(alloc.distribution, seed),
                       payments(instance, profile, alloc.distribution),
                       {},
                       alloc.relaxed_value,
                       seed};
  for (int k = 0; k < instance.n; ++k) {
    if (instance.payment_rule == PaymentRule::kFirstPrice) {
      out.realized_payments.push_back(value_of(profile, k, out.realized));
      continue;
    }
    const Allocated excluded = allocate_without(instance, profile, k);
    const Allocation t = sample(excluded.distribution, excluded_seed(seed, k));
    Rational paid = 0;
    for (int i = 0; i < instance.n; ++i) {
      if (i == k) continue;
      paid += value_of(profile, i, t) - value_of(profile, i, out.realized);
    }
    out.realized_payments.push_back(paid);
  }
  return out;
}

RangeDescriptor::RangeDescriptor(Instance instance)
    : instance_(std::move(instance)), polytope_(build_polytope(instance_)) {}

std::optional<FractionalPoint> RangeDescriptor::preimage(
    const AllocationDistribution& dist) const {
  for (const auto& [alloc, p] : dist.mass()) {
    if (!is_feasible(instance_, alloc)) return std::nullopt;
  }
  const RationalVector mu = marginals(dist, instance_);
  const int nv = instance_.num_vars();
  FractionalPoint x;

  if (instance_.spec.keep_rule == KeepRule::kGapCurve) {
    // mu_v = x_v (1 - x_v / 2)  =>  x_v = 1 - sqrt(1 - 2 mu_v).
    for (const Rational& m : mu) {
      auto root = rational_sqrt(1 - 2 * m);
      if (!root) return std::nullopt;
      x.coords.push_back(1 - *root);
    }
    if (!relaxround::contains(polytope_, x)) return std::nullopt;
  } else {
    // mu = c x with A x + s = b, x, s >= 0.
    const Rational factor = instance_.spec.calibration_factor();
    const int rows = static_cast<int>(polytope_.constraints.size());
    std::vector<EqualityRow> eqs;
    for (int v = 0; v < nv; ++v) {
      EqualityRow row;
      row.coeffs.assign(static_cast<std::size_t>(nv + rows), Rational(0));
      row.coeffs[v] = factor;
      row.rhs = mu[v];
      eqs.push_back(std::move(row));
    }
    for (int r = 0; r < rows; ++r) {
      EqualityRow row;
      row.coeffs.assign(static_cast<std::size_t>(nv + rows), Rational(0));
      for (int v = 0; v < nv; ++v) row.coeffs[v] = polytope_.constraints[r].coeffs[v];
      row.coeffs[nv + r] = 1;
      row.rhs = polytope_.constraints[r].bound;
      eqs.push_back(std::move(row));
    }
    auto solved = solve_feasibility(eqs, nv + rows);
    if (!solved) return std::nullopt;
    x.coords.assign(solved->begin(), solved->begin() + nv);
  }
  try {
    if (round_oblivious(instance_, x) == dist) return x;
  } catch (const DecompositionInfeasible&) {
  }
  return std::nullopt;
}

bool RangeDescriptor::contains_allocation_of(
    const ValuationProfile& profile) const {
  const Allocated out = allocate(instance_, profile);
  return relaxround::contains(polytope_, out.point) &&
         round_oblivious(instance_, out.point) == out.distribution;
}

RangeDescriptor distributional_range(const Instance& instance) {
  require_auction(instance);
  return RangeDescriptor(instance);
}

Rational median_peak(RationalVector peaks) {
  if (peaks.empty()) {
    throw Error(ErrorKind::kInvalidInput, "median of an empty peak list");
  }
  std::sort(peaks.begin(), peaks.end());
  return peaks[(peaks.size() - 1) / 2];
}

WithoutMoneyOutcome run_without_money(const Instance& instance,
                                      const ValuationProfile& profile) {
  validate_profile(instance, profile);
  if (instance.family == Family::kNoMoneyLottery) {
    FractionalPoint x{
        RationalVector(instance.variables.size(), ratio(1, instance.n))};
    AllocationDistribution dist = round_oblivious(instance, x);
    return {std::move(x), std::move(dist)};
  }
  if (instance.family == Family::kSinglePeaked) {
    RationalVector peaks;
    for (const Valuation& v : profile.valuations) {
      peaks.push_back(std::get<SinglePeakedValuation>(v).peak);
    }
    const int location = static_cast<int>(median_peak(peaks).get_num().get_si());
    FractionalPoint x{RationalVector(instance.variables.size(), Rational(0))};
    x.coords[location] = 1;
    const Allocation outcome{std::vector<Bundle>(
        static_cast<std::size_t>(instance.n), Bundle{1} << location)};
    return {std::move(x), AllocationDistribution::point_mass(outcome)};
  }
  throw Error(ErrorKind::kUnsupportedFamily,
              "family '" + std::string(family_tag(instance.family)) +
                  "' is not a without-money family");
}

Rational fractional_value(const Instance& instance,
                          const ValuationProfile& profile, int bidder,
                          const FractionalPoint& x) {
  Rational sum = 0;
  for (int v = 0; v < instance.num_vars(); ++v) {
    const VariableKey& key = instance.variables[v];
    if (key.bidder != bidder && key.bidder != kPublicOutcome) continue;
    if (x.coords[v] == 0) continue;
    sum += x.coords[v] * value_of_bundle(profile.valuations[bidder], key.bundle);
  }
  return sum;
}

}  // namespace relaxround
