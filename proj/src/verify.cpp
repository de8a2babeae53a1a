#include "relaxround/verify.hpp"

#include <map>

#include "relaxround/error.hpp"

namespace relaxround {

std::string_view check_status_tag(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass:
      return "PASS";
    case CheckStatus::kFail:
      return "FAIL";
    case CheckStatus::kTruncated:
      return "TRUNCATED";
  }
  return "?";
}

void CheckResult::record_failure(Witness w) {
  ++failures;
  status = CheckStatus::kFail;
  if (witnesses.size() < kMaxStoredFailures) witnesses.push_back(std::move(w));
}

bool VerificationReport::all_pass() const {
  for (const CheckResult& c : checks) {
    if (!c.passed()) return false;
  }
  return true;
}

std::uint64_t VerificationReport::total_failures() const {
  std::uint64_t total = 0;
  for (const CheckResult& c : checks) total += c.failures;
  return total;
}

std::pair<Allocation, Rational> brute_force_opt(
    const Instance& instance, const ValuationProfile& profile) {
  const std::vector<Allocation> all = enumerate_feasible(instance);
  std::size_t best = 0;
  Rational best_value = social_welfare(profile, all[0]);
  for (std::size_t j = 1; j < all.size(); ++j) {
    Rational value = social_welfare(profile, all[j]);
    if (value > best_value) {
      best = j;
      best_value = std::move(value);
    }
  }
  return {all[best], best_value};
}

namespace {

Valuation scalar_valuation(const Instance& instance, int bidder,
                           const Rational& value) {
  switch (instance.family) {
    case Family::kSingleItem:
    case Family::kNoMoneyLottery:
      return AdditiveValuation{{value}};
    case Family::kGapToy: {
      AdditiveValuation add{RationalVector(instance.m, Rational(0))};
      add.item_values[instance.machine_of[bidder]] = value;
      return add;
    }
    case Family::kSingleMindedCa:
      return SingleMindedValuation{instance.declared_bundles.at(bidder), value};
    case Family::kSinglePeaked:
      return SinglePeakedValuation{value};
  }
  throw Error(ErrorKind::kUnsupportedFamily, "no scalar valuation");
}

std::string vector_to_string(const RationalVector& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_rational(values[i]);
  }
  return out + "]";
}

// Calls fn(profile_id, profile) for every grid profile; bidder 0 varies
// fastest.
template <typename Fn>
void for_each_grid_profile(const Instance& instance, const RationalVector& grid,
                           Fn&& fn) {
  if (grid.empty()) {
    throw Error(ErrorKind::kInvalidInput, "grid must be nonempty");
  }
  std::vector<std::size_t> digits(static_cast<std::size_t>(instance.n), 0);
  std::uint64_t id = 0;
  for (;;) {
    ValuationProfile p;
    for (int i = 0; i < instance.n; ++i) {
      p.valuations.push_back(scalar_valuation(instance, i, grid[digits[i]]));
    }
    if (!fn(id++, p)) return;
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == grid.size()) digits[i++] = 0;
    if (i == digits.size()) return;
  }
}

struct Evaluated {
  AllocationDistribution distribution;
  RationalVector payments;
};

class OutcomeCache {
 public:
  explicit OutcomeCache(const Instance& instance) : instance_(instance) {}

  const Evaluated& get(const ValuationProfile& profile) {
    const std::string key = profile_to_string(profile);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Allocated a = allocate(instance_, profile);
    RationalVector pay = payments(instance_, profile, a.distribution);
    return cache_
        .emplace(key, Evaluated{std::move(a.distribution), std::move(pay)})
        .first->second;
  }

 private:
  const Instance& instance_;
  std::map<std::string, Evaluated> cache_;
};

Rational utility_from(const Evaluated& e, const ValuationProfile& truth,
                      int bidder) {
  Rational u = 0;
  for (const auto& [alloc, p] : e.distribution.mass()) {
    u += p * value_of(truth, bidder, alloc);
  }
  return u - e.payments[bidder];
}

CheckResult make_check(std::string name, const Instance& instance,
                       const RationalVector& grid) {
  CheckResult c;
  c.name = std::move(name);
  c.domain = domain_string(instance, grid);
  return c;
}

}  // namespace

std::vector<ValuationProfile> grid_profiles(const Instance& instance,
                                            const RationalVector& grid) {
  std::vector<ValuationProfile> out;
  for_each_grid_profile(instance, grid,
                        [&](std::uint64_t, const ValuationProfile& p) {
                          out.push_back(p);
                          return true;
                        });
  return out;
}

std::vector<Valuation> misreports(const Instance& instance, int bidder,
                                  const RationalVector& grid) {
  std::vector<Valuation> out;
  if (instance.family == Family::kSingleMindedCa && instance.m <= 3) {
    const Bundle limit = Bundle{1} << instance.m;
    for (Bundle b = 1; b < limit; ++b) {
      for (const Rational& w : grid) out.push_back(SingleMindedValuation{b, w});
    }
    return out;
  }
  for (const Rational& w : grid) out.push_back(scalar_valuation(instance, bidder, w));
  return out;
}

std::string valuation_to_string(const Valuation& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, AdditiveValuation>) {
          return "additive" + vector_to_string(x.item_values);
        } else if constexpr (std::is_same_v<T, SingleMindedValuation>) {
          return bundle_to_string(x.bundle) + "@" + format_rational(x.value);
        } else if constexpr (std::is_same_v<T, TableValuation>) {
          std::string out = "table{";
          bool first = true;
          for (const auto& [b, value] : x.values) {
            if (!first) out += ";";
            out += bundle_to_string(b) + ":" + format_rational(value);
            first = false;
          }
          return out + "}";
        } else {
          return "peak " + format_rational(x.peak);
        }
      },
      v);
}

std::string profile_to_string(const ValuationProfile& profile) {
  std::string out = "(";
  for (int i = 0; i < profile.size(); ++i) {
    if (i) out += " | ";
    out += valuation_to_string(profile.valuations[i]);
  }
  return out + ")";
}

std::string domain_string(const Instance& instance, const RationalVector& grid) {
  return "family=" + std::string(family_tag(instance.family)) +
         " n=" + std::to_string(instance.n) + " m=" +
         std::to_string(instance.m) + " grid=" + vector_to_string(grid);
}

Rational expected_utility(const Instance& instance,
                          const ValuationProfile& truth,
                          const ValuationProfile& reported, int bidder) {
  const Allocated a = allocate(instance, reported);
  const RationalVector pay = payments(instance, reported, a.distribution);
  return utility_from(Evaluated{a.distribution, pay}, truth, bidder);
}

VerificationReport check_truthfulness(const Instance& instance,
                                      const RationalVector& value_grid,
                                      const RationalVector& misreport_grid,
                                      std::uint64_t budget) {
  if (misreport_grid.empty()) {
    throw Error(ErrorKind::kInvalidInput, "misreport grid must be nonempty");
  }
  CheckResult check = make_check("truthfulness", instance, value_grid);
  check.domain += " misreports=" + vector_to_string(misreport_grid);
  if (instance.family == Family::kSingleMindedCa && instance.m <= 3) {
    check.domain += " x all nonempty bundles";
  }
  std::vector<std::vector<Valuation>> lies(static_cast<std::size_t>(instance.n));
  for (int k = 0; k < instance.n; ++k) {
    lies[k] = misreports(instance, k, misreport_grid);
  }
  OutcomeCache cache(instance);
  bool truncated = false;
  for_each_grid_profile(instance, value_grid, [&](std::uint64_t id,
                                                  const ValuationProfile& truth) {
    const Evaluated truthful = cache.get(truth);
    for (int k = 0; k < instance.n; ++k) {
      const Rational honest = utility_from(truthful, truth, k);
      for (const Valuation& lie : lies[k]) {
        if (check.cases >= budget) {
          truncated = true;
          return false;
        }
        ++check.cases;
        ValuationProfile reported = truth;
        reported.valuations[k] = lie;
        const Rational deviating =
            utility_from(cache.get(reported), truth, k);
        if (deviating > honest) {
          check.record_failure({id, profile_to_string(truth), k,
                                valuation_to_string(lie), deviating, honest,
                                "misreport utility exceeds truthful utility"});
        }
      }
    }
    return true;
  });
  if (truncated && check.status == CheckStatus::kPass) {
    check.status = CheckStatus::kTruncated;
  }
  if (truncated) {
    check.domain += " (truncated at budget " + std::to_string(budget) + ")";
  }
  return VerificationReport{{std::move(check)}};
}

ApproximationResult check_approximation(const Instance& instance,
                                        const ValuationProfile& profile) {
  ApproximationResult r;
  const Allocated a = allocate(instance, profile);
  r.expected_welfare = expected_welfare(a.distribution, profile);
  r.opt = brute_force_opt(instance, profile).second;
  r.bound = instance.spec.alpha;
  if (instance.spec.rounding_case == RoundingCase::kB) r.bound *= instance.spec.beta;
  if (r.opt == 0) {
    r.pass = r.expected_welfare >= 0;
    return r;
  }
  r.ratio = r.expected_welfare / r.opt;
  r.pass = r.expected_welfare >= r.bound * r.opt;
  return r;
}

VerificationReport check_approximation_grid(const Instance& instance,
                                            const RationalVector& grid) {
  CheckResult check = make_check("approximation", instance, grid);
  std::optional<Rational> worst;
  for_each_grid_profile(instance, grid, [&](std::uint64_t id,
                                            const ValuationProfile& p) {
    ++check.cases;
    const ApproximationResult r = check_approximation(instance, p);
    if (r.ratio && (!worst || *r.ratio < *worst)) worst = r.ratio;
    if (!r.pass) {
      check.record_failure({id, profile_to_string(p), -1, "",
                            r.expected_welfare, r.bound * r.opt,
                            "E[f(X')] below alpha*beta*OPT"});
    }
    return true;
  });
  if (worst) check.domain += " min_ratio=" + format_rational(*worst);
  return VerificationReport{{std::move(check)}};
}

Rounder oblivious_rounder(const Instance& instance) {
  return [instance](const FractionalPoint& x, const ValuationProfile&) {
    return round_oblivious(instance, x);
  };
}

Rounder underdog_rounder(const Instance& instance) {
  if (instance.family != Family::kSingleItem &&
      instance.family != Family::kNoMoneyLottery) {
    throw Error(ErrorKind::kUnsupportedFamily,
                "underdog rounder needs a single-item structure");
  }
  return [instance](const FractionalPoint& x, const ValuationProfile& reported) {
    Rational total = 0;
    int pick = -1;
    Rational lowest;
    for (int i = 0; i < instance.n; ++i) {
      if (x.coords[i] == 0) continue;
      total += x.coords[i];
      const Rational v = value_of_bundle(reported.valuations[i], 1);
      if (pick < 0 || v < lowest) {
        pick = i;
        lowest = v;
      }
    }
    const Allocation none = Allocation::empty(instance.n);
    if (pick < 0) return AllocationDistribution::point_mass(none);
    Allocation win = none;
    win.bundles[pick] = 1;
    AllocationDistribution::MassMap mass{{win, total}};
    if (total < 1) mass[none] = 1 - total;
    return AllocationDistribution(std::move(mass));
  };
}

VerificationReport check_obliviousness(
    const Instance& instance, const std::vector<ValuationProfile>& profiles,
    const FractionalPoint& x, const Rounder& rounder) {
  if (profiles.size() < 2) {
    throw Error(ErrorKind::kInvalidInput,
                "obliviousness check needs at least two profiles");
  }
  CheckResult check;
  check.name = "obliviousness";
  check.domain = "family=" + std::string(family_tag(instance.family)) +
                 " x=" + vector_to_string(x.coords) +
                 " profiles=" + std::to_string(profiles.size());
  const AllocationDistribution reference = rounder(x, profiles.front());
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    ++check.cases;
    const AllocationDistribution out = rounder(x, profiles[p]);
    if (!(out == reference)) {
      check.record_failure({p, profile_to_string(profiles[p]), -1, "",
                            Rational(out.support_size()),
                            Rational(reference.support_size()),
                            "rounding output differs from profile 0"});
    }
  }
  return VerificationReport{{std::move(check)}};
}

VerificationReport check_obliviousness(
    const Instance& instance, const std::vector<ValuationProfile>& profiles,
    const FractionalPoint& x) {
  return check_obliviousness(instance, profiles, x, oblivious_rounder(instance));
}

VerificationReport check_nonoblivious_condition(const Rounder& rounder,
                                                const Instance& instance,
                                                const RationalVector& value_grid) {
  CheckResult check = make_check("nonoblivious-condition", instance, value_grid);
  const std::vector<FractionalPoint> points =
      probe_points(instance, quarter_grid(), 200);
  check.domain += " probe_points=" + std::to_string(points.size());
  for_each_grid_profile(instance, value_grid, [&](std::uint64_t id,
                                                  const ValuationProfile& truth) {
    for (const FractionalPoint& x : points) {
      const Rational honest = expected_welfare(rounder(x, truth), truth);
      for (int k = 0; k < instance.n; ++k) {
        for (const Valuation& lie : misreports(instance, k, value_grid)) {
          ++check.cases;
          ValuationProfile reported = truth;
          reported.valuations[k] = lie;
          const Rational deviating =
              expected_welfare(rounder(x, reported), truth);
          if (deviating > honest) {
            check.record_failure(
                {id, profile_to_string(truth), k, valuation_to_string(lie),
                 deviating, honest,
                 "misreport raises true expected welfare at x=" +
                     vector_to_string(x.coords)});
          }
        }
      }
    }
    return true;
  });
  return VerificationReport{{std::move(check)}};
}

VerificationReport check_without_money(const Instance& instance,
                                       const ValuationProfile& profile,
                                       const Rational& beta) {
  VerificationReport report;
  const WithoutMoneyOutcome out = run_without_money(instance, profile);
  const std::string domain = "family=" + std::string(family_tag(instance.family)) +
                             " n=" + std::to_string(instance.n) +
                             " beta=" + format_rational(beta);

  CheckResult feasibility;
  feasibility.name = "feasibility";
  feasibility.domain = domain;
  for (const auto& [alloc, p] : out.distribution.mass()) {
    ++feasibility.cases;
    if (!is_feasible(instance, alloc)) {
      feasibility.record_failure({0, profile_to_string(profile), -1,
                                  alloc.to_string(), p, Rational(0),
                                  "support allocation outside S"});
    }
  }
  report.checks.push_back(std::move(feasibility));

  CheckResult truthful;
  truthful.name = "fractional-calibration";
  truthful.domain = domain;
  const RationalVector expected =
      expected_value_per_bidder(out.distribution, profile);
  for (int i = 0; i < instance.n; ++i) {
    ++truthful.cases;
    const Rational target = beta * fractional_value(instance, profile, i, out.point);
    if (expected[i] != target) {
      truthful.record_failure({0, profile_to_string(profile), i, "",
                               expected[i], target, "E[v_i(X)] != beta v_i(x)"});
    }
  }
  report.checks.push_back(std::move(truthful));
  return report;
}

VerificationReport check_median_no_improvement(const Instance& instance,
                                               const RationalVector& peak_grid) {
  if (instance.family != Family::kSinglePeaked) {
    throw Error(ErrorKind::kUnsupportedFamily,
                "median check needs the single-peaked family");
  }
  CheckResult check = make_check("median-no-improvement", instance, peak_grid);
  for_each_grid_profile(instance, peak_grid, [&](std::uint64_t id,
                                                 const ValuationProfile& truth) {
    RationalVector peaks;
    for (const Valuation& v : truth.valuations) {
      peaks.push_back(std::get<SinglePeakedValuation>(v).peak);
    }
    const Rational outcome = median_peak(peaks);
    for (int k = 0; k < instance.n; ++k) {
      const Rational honest = rational_abs(outcome - peaks[k]);
      for (const Rational& lie : peak_grid) {
        ++check.cases;
        RationalVector reported = peaks;
        reported[k] = lie;
        const Rational moved = rational_abs(median_peak(reported) - peaks[k]);
        if (moved < honest) {
          check.record_failure({id, profile_to_string(truth), k,
                                "peak " + format_rational(lie), moved, honest,
                                "misreport moves the median closer"});
        }
      }
    }
    return true;
  });
  return VerificationReport{{std::move(check)}};
}

VerificationReport check_utility_identity(const Instance& instance,
                                          const RationalVector& grid) {
  CheckResult check = make_check("utility-identity", instance, grid);
  const Rational factor = instance.spec.calibration_factor();
  for_each_grid_profile(instance, grid, [&](std::uint64_t id,
                                            const ValuationProfile& p) {
    const Relaxation relax = build_relaxation(instance, p);
    const Allocated a = allocate(instance, p);
    const RationalVector pay = payments(instance, p, a.distribution);
    const RationalVector ev = expected_value_per_bidder(a.distribution, p);
    for (int k = 0; k < instance.n; ++k) {
      ++check.cases;
      const Rational residual =
          solve_relaxation(residual_objective(relax.objective, k, instance.n),
                           relax.polytope)
              .value;
      const Rational lhs = ev[k] - pay[k];
      const Rational rhs = factor * (a.relaxed_value - residual);
      if (lhs != rhs) {
        check.record_failure({id, profile_to_string(p), k, "", lhs, rhs,
                              "E[u_k] != c (L(x*) - max L^-k)"});
      }
    }
    return true;
  });
  return VerificationReport{{std::move(check)}};
}

namespace {

void audit_decomposition(const Instance& instance, const FractionalPoint& x,
                         std::uint64_t id, const std::string& label,
                         CheckResult& check) {
  ++check.cases;
  const Rational& scale = instance.spec.decomposition_scale;
  ConvexDecomposition d;
  try {
    d = convex_decompose(x, scale, instance);
  } catch (const DecompositionInfeasible& e) {
    check.record_failure({id, label, -1, vector_to_string(x.coords),
                          e.residual(), Rational(0), "decomposition infeasible"});
    return;
  }
  Rational total = 0;
  RationalVector combo(x.coords.size(), Rational(0));
  bool positive = true;
  for (const DecompositionTerm& t : d.terms) {
    positive = positive && t.weight > 0;
    total += t.weight;
    const RationalVector chi = indicator(instance, t.alloc);
    for (std::size_t v = 0; v < chi.size(); ++v) combo[v] += t.weight * chi[v];
  }
  std::string problem;
  if (!positive) problem = "nonpositive weight";
  if (total != 1) problem = "weights sum to " + format_rational(total);
  for (std::size_t v = 0; v < combo.size(); ++v) {
    if (combo[v] != scale * x.coords[v]) {
      problem = "sum lambda chi != scale x at variable " + std::to_string(v);
    }
  }
  if (static_cast<int>(d.terms.size()) > instance.num_vars() + 1) {
    problem = "support exceeds num_vars + 1";
  }
  if (!problem.empty()) {
    check.record_failure({id, label, -1, vector_to_string(x.coords),
                          Rational(d.terms.size()),
                          Rational(instance.num_vars() + 1), problem});
  }
}

}  // namespace

VerificationReport check_decomposition_identities(const Instance& instance,
                                                  const RationalVector& grid) {
  CheckResult check = make_check("decomposition-identities", instance, grid);
  for_each_grid_profile(instance, grid, [&](std::uint64_t id,
                                            const ValuationProfile& p) {
    const Relaxation relax = build_relaxation(instance, p);
    const RelaxedOptimum opt = solve_relaxation(relax.objective, relax.polytope);
    audit_decomposition(instance, opt.point, id, profile_to_string(p), check);
    return true;
  });
  const std::vector<FractionalPoint> points =
      probe_points(instance, quarter_grid(), 2000);
  check.domain += " probe_points=" + std::to_string(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    audit_decomposition(instance, points[i], i, "probe", check);
  }
  return VerificationReport{{std::move(check)}};
}

RationalVector quarter_grid() {
  return {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4),
          Rational(1)};
}

std::vector<FractionalPoint> probe_points(const Instance& instance,
                                          const RationalVector& coords,
                                          std::size_t limit) {
  const Polytope poly = build_polytope(instance);
  const std::size_t nv = instance.variables.size();
  std::vector<FractionalPoint> out;
  RationalVector point(nv, Rational(0));
  RationalVector load(poly.constraints.size(), Rational(0));
  // Coordinates are assigned in order; nonnegative rows let a partial point
  // that already violates a row be pruned.
  auto recurse = [&](auto&& self, std::size_t v) -> void {
    if (out.size() >= limit) return;
    if (v == nv) {
      out.push_back(FractionalPoint{point});
      return;
    }
    for (const Rational& c : coords) {
      bool ok = true;
      for (std::size_t r = 0; r < poly.constraints.size(); ++r) {
        if (load[r] + poly.constraints[r].coeffs[v] * c >
            poly.constraints[r].bound) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      for (std::size_t r = 0; r < poly.constraints.size(); ++r) {
        load[r] += poly.constraints[r].coeffs[v] * c;
      }
      point[v] = c;
      self(self, v + 1);
      for (std::size_t r = 0; r < poly.constraints.size(); ++r) {
        load[r] -= poly.constraints[r].coeffs[v] * c;
      }
      point[v] = 0;
      if (out.size() >= limit) return;
    }
  };
  recurse(recurse, 0);
  return out;
}

}  // namespace relaxround
