#include "relaxround/rounding.hpp"

#include <random>

#include "relaxround/error.hpp"

namespace relaxround {

AllocationDistribution::AllocationDistribution(MassMap mass)
    : mass_(std::move(mass)) {
  if (mass_.empty()) {
    throw Error(ErrorKind::kInvalidInput, "distribution: empty support");
  }
  Rational total = 0;
  for (const auto& [alloc, p] : mass_) {
    if (p <= 0) {
      throw Error(ErrorKind::kInvalidInput,
                  "distribution: nonpositive probability " +
                      format_rational(p) + " on " + alloc.to_string());
    }
    total += p;
  }
  if (total != 1) {
    throw Error(ErrorKind::kInvalidInput,
                "distribution: probabilities sum to " +
                    format_rational(total) + ", not 1");
  }
}

AllocationDistribution AllocationDistribution::point_mass(
    const Allocation& alloc) {
  return AllocationDistribution(MassMap{{alloc, Rational(1)}});
}

Rational AllocationDistribution::probability(const Allocation& alloc) const {
  auto it = mass_.find(alloc);
  return it == mass_.end() ? Rational(0) : it->second;
}

ConvexDecomposition convex_decompose(const FractionalPoint& x,
                                     const Rational& scale,
                                     const Instance& instance) {
  if (x.size() != instance.num_vars()) {
    throw Error(ErrorKind::kInvalidInput, "decompose: dimension mismatch");
  }
  if (scale <= 0 || scale > 1) {
    throw Error(ErrorKind::kInvalidInput, "decompose: scale outside (0, 1]");
  }
  for (const Rational& c : x.coords) {
    if (c < 0) {
      throw Error(ErrorKind::kInvalidInput, "decompose: negative coordinate");
    }
  }
  const std::vector<Allocation> columns = enumerate_feasible(instance);
  const int k = static_cast<int>(columns.size());
  std::vector<EqualityRow> rows(instance.variables.size() + 1);
  for (std::size_t v = 0; v < instance.variables.size(); ++v) {
    rows[v].coeffs.assign(columns.size(), Rational(0));
    rows[v].rhs = scale * x.coords[v];
  }
  EqualityRow& normalization = rows.back();
  normalization.coeffs.assign(columns.size(), Rational(1));
  normalization.rhs = 1;
  for (int j = 0; j < k; ++j) {
    const RationalVector chi = indicator(instance, columns[j]);
    for (std::size_t v = 0; v < chi.size(); ++v) rows[v].coeffs[j] = chi[v];
  }
  PhaseOneResult solved = phase_one(rows, k);
  if (!solved.solution) throw DecompositionInfeasible(solved.residual);
  ConvexDecomposition out;
  for (int j = 0; j < k; ++j) {
    const Rational& w = (*solved.solution)[j];
    if (w > 0) out.terms.push_back({w, columns[j]});
  }
  return out;
}

AllocationDistribution exact_distribution(const ConvexDecomposition& d) {
  AllocationDistribution::MassMap mass;
  for (const DecompositionTerm& t : d.terms) mass[t.alloc] += t.weight;
  return AllocationDistribution(std::move(mass));
}

AllocationDistribution adjust(const AllocationDistribution& dist,
                              RoundingCase rounding_case,
                              const RationalVector& keep_prob) {
  for (std::size_t i = 0; i < keep_prob.size(); ++i) {
    if (keep_prob[i] < 0 || keep_prob[i] > 1) {
      throw Error(ErrorKind::kInvalidInput,
                  "keep_prob[" + std::to_string(i) + "] = " +
                      format_rational(keep_prob[i]) + " outside [0, 1]");
    }
  }
  if (rounding_case == RoundingCase::kC) {
    for (const Rational& p : keep_prob) {
      if (p != 1) {
        throw Error(ErrorKind::kInvalidInput,
                    "case c requires every keep probability to be 1");
      }
    }
    return dist;
  }
  AllocationDistribution::MassMap out;
  for (const auto& [alloc, mass] : dist.mass()) {
    if (static_cast<int>(keep_prob.size()) != alloc.size()) {
      throw Error(ErrorKind::kInvalidInput,
                  "keep_prob: expected one entry per bidder");
    }
    // Only bidders holding a nonempty bundle branch.
    std::vector<int> holders;
    for (int i = 0; i < alloc.size(); ++i) {
      if (alloc.bundles[i] != 0) holders.push_back(i);
    }
    const std::uint64_t patterns = std::uint64_t{1} << holders.size();
    for (std::uint64_t pattern = 0; pattern < patterns; ++pattern) {
      Rational p = mass;
      Allocation thinned = alloc;
      for (std::size_t h = 0; h < holders.size() && p != 0; ++h) {
        const int i = holders[h];
        if (pattern & (std::uint64_t{1} << h)) {
          p *= keep_prob[i];
        } else {
          p *= 1 - keep_prob[i];
          thinned.bundles[i] = 0;
        }
      }
      if (p != 0) out[thinned] += p;
    }
  }
  return AllocationDistribution(std::move(out));
}

RationalVector keep_probabilities(const Instance& instance,
                                  const FractionalPoint& x) {
  RationalVector keep(static_cast<std::size_t>(instance.n), Rational(1));
  switch (instance.spec.keep_rule) {
    case KeepRule::kOnes:
      break;
    case KeepRule::kUniform:
      for (Rational& k : keep) k = instance.spec.beta;
      break;
    case KeepRule::kGapCurve:
      for (int v = 0; v < instance.num_vars(); ++v) {
        const int owner = instance.variables[v].bidder;
        keep[owner] = 1 - x.coords[v] / 2;
      }
      break;
  }
  return keep;
}

AllocationDistribution round_oblivious(const Instance& instance,
                                       const FractionalPoint& x) {
  const ConvexDecomposition d =
      convex_decompose(x, instance.spec.decomposition_scale, instance);
  return adjust(exact_distribution(d), instance.spec.rounding_case,
                keep_probabilities(instance, x));
}

Rational expected_welfare(const AllocationDistribution& dist,
                          const ValuationProfile& profile) {
  Rational total = 0;
  for (const auto& [alloc, p] : dist.mass()) {
    total += p * social_welfare(profile, alloc);
  }
  return total;
}

RationalVector expected_value_per_bidder(const AllocationDistribution& dist,
                                         const ValuationProfile& profile) {
  RationalVector out(static_cast<std::size_t>(profile.size()), Rational(0));
  for (const auto& [alloc, p] : dist.mass()) {
    for (int i = 0; i < profile.size(); ++i) {
      out[i] += p * value_of(profile, i, alloc);
    }
  }
  return out;
}

RationalVector marginals(const AllocationDistribution& dist,
                         const Instance& instance) {
  RationalVector out(instance.variables.size(), Rational(0));
  for (const auto& [alloc, p] : dist.mass()) {
    const RationalVector chi = indicator(instance, alloc);
    for (std::size_t v = 0; v < chi.size(); ++v) {
      if (chi[v] != 0) out[v] += p;
    }
  }
  return out;
}

Allocation sample(const AllocationDistribution& dist, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const std::uint64_t draw = gen();
  mpz_class numerator;
  mpz_import(numerator.get_mpz_t(), 1, 1, sizeof(draw), 0, 0, &draw);
  mpz_class two64 = 1;
  two64 <<= 64;
  Rational u(numerator, two64);
  u.canonicalize();
  Rational cumulative = 0;
  for (const auto& [alloc, p] : dist.mass()) {
    cumulative += p;
    if (u < cumulative) return alloc;
  }
  return dist.mass().rbegin()->first;
}

}  // namespace relaxround
