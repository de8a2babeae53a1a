#include "relaxround/instances.hpp"

#include "relaxround/error.hpp"
#include "relaxround/mechanism.hpp"
#include "relaxround/verify.hpp"

namespace relaxround {

namespace {

const RationalVector& probe_values() {
  static const RationalVector values{Rational(0), Rational(1), Rational(2)};
  return values;
}

void audit_alpha_on_probes(const Instance& instance) {
  for (const ValuationProfile& p : grid_profiles(instance, probe_values())) {
    const Relaxation relax = build_relaxation(instance, p);
    const AlphaAudit audit = audit_alpha(relax.objective, instance, p);
    if (!audit.pass) {
      throw Error(ErrorKind::kConstruction,
                  "alpha audit failed for " + profile_to_string(p) + ": " +
                      audit.message);
    }
  }
}

void audit_decomposability(const Instance& instance) {
  for (const ValuationProfile& p : grid_profiles(instance, probe_values())) {
    const Relaxation relax = build_relaxation(instance, p);
    const RelaxedOptimum opt = solve_relaxation(relax.objective, relax.polytope);
    try {
      convex_decompose(opt.point, instance.spec.decomposition_scale, instance);
    } catch (const DecompositionInfeasible& e) {
      throw Error(ErrorKind::kConstruction,
                  "optimum for " + profile_to_string(p) +
                      " cannot be decomposed at scale " +
                      format_rational(instance.spec.decomposition_scale) +
                      " (residual " + format_rational(e.residual()) +
                      "); use a smaller alpha");
    }
  }
}

// Before r' the lottery must over-deliver, after r' it must hit L exactly.
void audit_gap_calibration(const Instance& instance) {
  std::vector<ValuationProfile> probes;
  RationalVector ones(static_cast<std::size_t>(instance.n), Rational(1));
  RationalVector ramp;
  for (int i = 0; i < instance.n; ++i) ramp.push_back(Rational(i + 1));
  probes.push_back(gap_profile(instance, ones));
  probes.push_back(gap_profile(instance, ramp));
  for (const FractionalPoint& x : probe_points(instance, quarter_grid())) {
    const AllocationDistribution before = exact_distribution(
        convex_decompose(x, instance.spec.decomposition_scale, instance));
    const AllocationDistribution after =
        adjust(before, RoundingCase::kA, keep_probabilities(instance, x));
    for (const ValuationProfile& p : probes) {
      const Relaxation relax = build_relaxation(instance, p);
      const Rational target = relax.objective.evaluate(x);
      const Rational raw = expected_welfare(before, p);
      const Rational thinned = expected_welfare(after, p);
      const bool over = target == 0 ? raw == 0 : raw > target;
      if (!over || thinned != target) {
        throw Error(ErrorKind::kConstruction,
                    "gap calibration failed at x with L(x) = " +
                        format_rational(target) + ": E[f(X)] = " +
                        format_rational(raw) + ", E[f(X')] = " +
                        format_rational(thinned) + ", gap " +
                        format_rational(thinned - target));
      }
    }
  }
}

}  // namespace

void audit_family(const Instance& instance) {
  instance.validate();
  switch (instance.family) {
    case Family::kSingleItem:
      audit_alpha_on_probes(instance);
      break;
    case Family::kSingleMindedCa:
      audit_alpha_on_probes(instance);
      audit_decomposability(instance);
      break;
    case Family::kGapToy:
      audit_alpha_on_probes(instance);
      audit_gap_calibration(instance);
      break;
    case Family::kNoMoneyLottery:
    case Family::kSinglePeaked:
      break;
  }
}

Instance make_single_item(int n) {
  if (n < 1) throw Error(ErrorKind::kInvalidInput, "n: must be >= 1");
  Instance inst;
  inst.family = Family::kSingleItem;
  inst.n = n;
  inst.m = 1;
  assign_variables(inst);
  audit_family(inst);
  return inst;
}

Instance make_case_b_family(int n, const Rational& beta) {
  if (beta <= 0 || beta > 1) {
    throw Error(ErrorKind::kInvalidInput, "beta: must lie in (0, 1]");
  }
  Instance inst = make_single_item(n);
  if (beta != 1) {
    inst.spec.rounding_case = RoundingCase::kB;
    inst.spec.beta = beta;
    inst.spec.keep_rule = KeepRule::kUniform;
  }
  return inst;
}

Instance make_single_minded_ca(int m, const std::vector<Bundle>& desires,
                               BundleSpace space, const Rational& alpha) {
  if (m < 1 || m > 4) {
    throw Error(ErrorKind::kInvalidInput, "m: single-minded CA needs 1..4 items");
  }
  if (desires.empty()) {
    throw Error(ErrorKind::kInvalidInput, "desires: need at least one bidder");
  }
  for (std::size_t i = 0; i < desires.size(); ++i) {
    if (desires[i] == 0 || desires[i] >= (Bundle{1} << m)) {
      throw Error(ErrorKind::kInvalidInput,
                  "desires[" + std::to_string(i) + "]: must be a nonempty item set");
    }
  }
  Instance inst;
  inst.family = Family::kSingleMindedCa;
  inst.n = static_cast<int>(desires.size());
  inst.m = m;
  inst.declared_bundles = desires;
  inst.bundle_space = space;
  inst.spec.alpha = alpha;
  inst.spec.decomposition_scale = alpha;
  assign_variables(inst);
  audit_family(inst);
  return inst;
}

Instance make_gap_toy(int bidders, int machines, int breakpoints) {
  if (bidders < 1 || machines < 1) {
    throw Error(ErrorKind::kInvalidInput, "gap toy needs bidders, machines >= 1");
  }
  Instance inst;
  inst.family = Family::kGapToy;
  inst.n = bidders;
  inst.m = machines;
  for (int i = 0; i < bidders; ++i) inst.machine_of.push_back(i % machines);
  inst.breakpoints = breakpoints;
  inst.spec.alpha = Rational(1, 2);
  inst.spec.rounding_case = RoundingCase::kA;
  inst.spec.keep_rule = KeepRule::kGapCurve;
  assign_variables(inst);
  audit_family(inst);
  return inst;
}

Instance make_no_money(int n, NoMoneyKind kind, int locations) {
  if (n < 1) throw Error(ErrorKind::kInvalidInput, "n: must be >= 1");
  Instance inst;
  inst.n = n;
  if (kind == NoMoneyKind::kLottery) {
    inst.family = Family::kNoMoneyLottery;
    inst.m = 1;
  } else {
    inst.family = Family::kSinglePeaked;
    inst.m = locations;
  }
  assign_variables(inst);
  audit_family(inst);
  return inst;
}

ValuationProfile single_item_profile(const RationalVector& bids) {
  ValuationProfile p;
  for (const Rational& b : bids) p.valuations.push_back(AdditiveValuation{{b}});
  return p;
}

ValuationProfile single_minded_profile(const Instance& instance,
                                       const RationalVector& values) {
  ValuationProfile p;
  for (std::size_t i = 0; i < values.size(); ++i) {
    p.valuations.push_back(
        SingleMindedValuation{instance.declared_bundles.at(i), values[i]});
  }
  return p;
}

ValuationProfile gap_profile(const Instance& instance,
                             const RationalVector& values) {
  ValuationProfile p;
  for (std::size_t i = 0; i < values.size(); ++i) {
    AdditiveValuation add{RationalVector(instance.m, Rational(0))};
    add.item_values[instance.machine_of.at(i)] = values[i];
    p.valuations.push_back(std::move(add));
  }
  return p;
}

ValuationProfile peak_profile(const RationalVector& peaks) {
  ValuationProfile p;
  for (const Rational& peak : peaks) {
    p.valuations.push_back(SinglePeakedValuation{peak});
  }
  return p;
}

std::pair<int, Rational> find_max(const RationalVector& values) {
  if (values.empty()) {
    throw Error(ErrorKind::kInvalidInput, "find_max: empty list");
  }
  int index = 0;
  Rational best = values[0];
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (best < values[i]) {
      best = values[i];
      index = static_cast<int>(i);
    }
  }
  return {index, best};
}

}  // namespace relaxround
