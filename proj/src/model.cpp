#include "relaxround/model.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <type_traits>

#include "relaxround/error.hpp"

namespace relaxround {

Bundle bundle_of(std::initializer_list<int> items) {
  Bundle b = 0;
  for (int item : items) b |= Bundle{1} << item;
  return b;
}

std::string bundle_to_string(Bundle bundle) {
  std::string out = "{";
  bool first = true;
  for (int j = 0; j < kMaxItems; ++j) {
    if (bundle & (Bundle{1} << j)) {
      if (!first) out += ",";
      out += std::to_string(j);
      first = false;
    }
  }
  return out + "}";
}

bool Allocation::is_empty() const {
  return std::all_of(bundles.begin(), bundles.end(),
                     [](Bundle b) { return b == 0; });
}

std::string Allocation::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    if (i) out += ",";
    out += bundle_to_string(bundles[i]);
  }
  return out + ")";
}

std::strong_ordering Allocation::operator<=>(const Allocation& other) const {
  if (auto c = bundles.size() <=> other.bundles.size(); c != 0) return c;
  for (std::size_t k = bundles.size(); k-- > 0;) {
    if (auto c = bundles[k] <=> other.bundles[k]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string_view family_tag(Family family) {
  switch (family) {
    case Family::kSingleItem:
      return "single-item";
    case Family::kSingleMindedCa:
      return "single-minded-ca";
    case Family::kGapToy:
      return "gap-toy";
    case Family::kNoMoneyLottery:
      return "no-money-lottery";
    case Family::kSinglePeaked:
      return "single-peaked";
  }
  return "unknown";
}

Family parse_family(std::string_view tag) {
  for (Family f : {Family::kSingleItem, Family::kSingleMindedCa,
                   Family::kGapToy, Family::kNoMoneyLottery,
                   Family::kSinglePeaked}) {
    if (family_tag(f) == tag) return f;
  }
  throw Error(ErrorKind::kUnsupportedFamily,
              "unknown family '" + std::string(tag) + "'");
}

bool is_auction_family(Family family) {
  return family != Family::kSinglePeaked;
}

std::string_view rounding_case_tag(RoundingCase c) {
  switch (c) {
    case RoundingCase::kA:
      return "a";
    case RoundingCase::kB:
      return "b";
    case RoundingCase::kC:
      return "c";
  }
  return "?";
}

Rational FamilySpec::calibration_factor() const {
  Rational factor = decomposition_scale;
  if (rounding_case == RoundingCase::kB) factor *= beta;
  return factor;
}

std::optional<int> Instance::variable_of(int bidder, Bundle bundle) const {
  for (int v = 0; v < num_vars(); ++v) {
    if (variables[v].bidder == bidder && variables[v].bundle == bundle) {
      return v;
    }
  }
  return std::nullopt;
}

std::vector<int> Instance::variables_of(int bidder) const {
  std::vector<int> out;
  for (int v = 0; v < num_vars(); ++v) {
    if (variables[v].bidder == bidder) out.push_back(v);
  }
  return out;
}

void Instance::validate() const {
  if (n < 1) throw Error(ErrorKind::kInvalidInput, "n: must be >= 1");
  if (m < 1 || m > kMaxItems) {
    throw Error(ErrorKind::kInvalidInput,
                "m: must be in [1, " + std::to_string(kMaxItems) + "]");
  }
  const Bundle all_items = (Bundle{1} << m) - 1;
  for (std::size_t v = 0; v < variables.size(); ++v) {
    const VariableKey& key = variables[v];
    const bool public_ok =
        family == Family::kSinglePeaked && key.bidder == kPublicOutcome;
    if (!public_ok && (key.bidder < 0 || key.bidder >= n)) {
      throw Error(ErrorKind::kInvalidInput,
                  "variables[" + std::to_string(v) + "]: bidder out of range");
    }
    if (key.bundle == 0 || !is_subset(key.bundle, all_items)) {
      throw Error(ErrorKind::kInvalidInput,
                  "variables[" + std::to_string(v) + "]: bad bundle " +
                      bundle_to_string(key.bundle));
    }
    for (std::size_t w = 0; w < v; ++w) {
      if (variables[w] == key) {
        throw Error(ErrorKind::kInvalidInput,
                    "variables: duplicate (bidder, bundle) pair at " +
                        std::to_string(v));
      }
    }
  }
  if (spec.alpha <= 0 || spec.alpha > 1) {
    throw Error(ErrorKind::kInvalidInput, "alpha: must lie in (0, 1]");
  }
  if (spec.beta <= 0 || spec.beta > 1) {
    throw Error(ErrorKind::kInvalidInput, "beta: must lie in (0, 1]");
  }
  if (spec.decomposition_scale <= 0 || spec.decomposition_scale > 1) {
    throw Error(ErrorKind::kInvalidInput,
                "decomposition_scale: must lie in (0, 1]");
  }
}

void assign_variables(Instance& instance) {
  std::vector<VariableKey> vars;
  switch (instance.family) {
    case Family::kSingleItem:
    case Family::kNoMoneyLottery:
      for (int i = 0; i < instance.n; ++i) vars.push_back({i, 1});
      break;
    case Family::kSingleMindedCa:
      if (instance.bundle_space == BundleSpace::kAll) {
        const Bundle limit = Bundle{1} << instance.m;
        for (int i = 0; i < instance.n; ++i) {
          for (Bundle b = 1; b < limit; ++b) vars.push_back({i, b});
        }
      } else {
        if (static_cast<int>(instance.declared_bundles.size()) != instance.n) {
          throw Error(ErrorKind::kInvalidInput,
                      "desires: expected one bundle per bidder");
        }
        for (int i = 0; i < instance.n; ++i) {
          vars.push_back({i, instance.declared_bundles[i]});
        }
      }
      break;
    case Family::kGapToy:
      if (static_cast<int>(instance.machine_of.size()) != instance.n) {
        throw Error(ErrorKind::kInvalidInput,
                    "machine_of: expected one machine per bidder");
      }
      for (int i = 0; i < instance.n; ++i) {
        const int machine = instance.machine_of[i];
        if (machine < 0 || machine >= instance.m) {
          throw Error(ErrorKind::kInvalidInput,
                      "machine_of[" + std::to_string(i) + "]: out of range");
        }
        vars.push_back({i, Bundle{1} << machine});
      }
      break;
    case Family::kSinglePeaked:
      for (int j = 0; j < instance.m; ++j) {
        vars.push_back({kPublicOutcome, Bundle{1} << j});
      }
      break;
  }
  instance.variables = std::move(vars);
}

Rational value_of_bundle(const Valuation& valuation, Bundle bundle) {
  if (bundle == 0) return 0;
  return std::visit(
      [bundle](const auto& v) -> Rational {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AdditiveValuation>) {
          Rational sum = 0;
          for (int j = 0; j < kMaxItems; ++j) {
            if (!(bundle & (Bundle{1} << j))) continue;
            if (j >= static_cast<int>(v.item_values.size())) {
              throw Error(ErrorKind::kEvaluation,
                          "additive valuation has no value for item " +
                              std::to_string(j));
            }
            sum += v.item_values[j];
          }
          return sum;
        } else if constexpr (std::is_same_v<T, SingleMindedValuation>) {
          return is_subset(v.bundle, bundle) ? v.value : Rational(0);
        } else if constexpr (std::is_same_v<T, TableValuation>) {
          auto it = v.values.find(bundle);
          if (it == v.values.end()) {
            throw Error(ErrorKind::kEvaluation,
                        "no table entry for bundle " + bundle_to_string(bundle));
          }
          return it->second;
        } else {
          if (std::popcount(bundle) != 1) {
            throw Error(ErrorKind::kEvaluation,
                        "single-peaked outcome must be one location, got " +
                            bundle_to_string(bundle));
          }
          const Rational location = std::countr_zero(bundle);
          return -rational_abs(location - v.peak);
        }
      },
      valuation);
}

Rational value_of(const ValuationProfile& profile, int bidder,
                  const Allocation& alloc) {
  if (bidder < 0 || bidder >= profile.size() || bidder >= alloc.size()) {
    throw Error(ErrorKind::kInvalidInput,
                "bidder " + std::to_string(bidder) + " out of range");
  }
  return value_of_bundle(profile.valuations[bidder], alloc.bundles[bidder]);
}

Rational social_welfare(const ValuationProfile& profile,
                        const Allocation& alloc) {
  Rational total = 0;
  for (int i = 0; i < profile.size(); ++i) total += value_of(profile, i, alloc);
  return total;
}

namespace {

std::string bidder_field(int i) {
  return "valuations[" + std::to_string(i) + "]";
}

void require_nonnegative(const Rational& r, const std::string& field) {
  if (r < 0) {
    throw Error(ErrorKind::kInvalidInput,
                field + ": negative value " + format_rational(r));
  }
}

}  // namespace

void validate_profile(const Instance& instance,
                      const ValuationProfile& profile) {
  if (profile.size() != instance.n) {
    throw Error(ErrorKind::kInvalidInput,
                "valuations: expected " + std::to_string(instance.n) +
                    " entries, got " + std::to_string(profile.size()));
  }
  const Bundle all_items = (Bundle{1} << instance.m) - 1;
  for (int i = 0; i < instance.n; ++i) {
    const std::string field = bidder_field(i);
    const Valuation& v = profile.valuations[i];
    if (instance.family == Family::kSinglePeaked) {
      const auto* sp = std::get_if<SinglePeakedValuation>(&v);
      if (!sp) {
        throw Error(ErrorKind::kInvalidInput,
                    field + ": single-peaked family needs a peak");
      }
      if (sp->peak.get_den() != 1 || sp->peak < 0 || sp->peak >= instance.m) {
        throw Error(ErrorKind::kInvalidInput,
                    field + ": peak must be a location in 0.." +
                        std::to_string(instance.m - 1));
      }
      continue;
    }
    if (std::holds_alternative<SinglePeakedValuation>(v)) {
      throw Error(ErrorKind::kInvalidInput,
                  field + ": peaks are only valid for single-peaked");
    }
    if (const auto* add = std::get_if<AdditiveValuation>(&v)) {
      if (static_cast<int>(add->item_values.size()) != instance.m) {
        throw Error(ErrorKind::kInvalidInput,
                    field + ": additive valuation needs " +
                        std::to_string(instance.m) + " item values");
      }
      for (const Rational& r : add->item_values) require_nonnegative(r, field);
    } else if (const auto* sm = std::get_if<SingleMindedValuation>(&v)) {
      if (sm->bundle == 0 || !is_subset(sm->bundle, all_items)) {
        throw Error(ErrorKind::kInvalidInput,
                    field + ": desired bundle must be a nonempty item set");
      }
      require_nonnegative(sm->value, field);
    } else if (const auto* table = std::get_if<TableValuation>(&v)) {
      for (const auto& [bundle, value] : table->values) {
        if (!is_subset(bundle, all_items)) {
          throw Error(ErrorKind::kInvalidInput,
                      field + ": bundle " + bundle_to_string(bundle) +
                          " names unknown items");
        }
        if (bundle == 0 && value != 0) {
          throw Error(ErrorKind::kInvalidInput,
                      field + ": empty bundle must be worth 0");
        }
        require_nonnegative(value, field);
      }
    }
  }
}

bool is_feasible(const Instance& instance, const Allocation& alloc) {
  if (alloc.size() != instance.n) return false;
  if (instance.family == Family::kSinglePeaked) {
    const Bundle b = alloc.bundles[0];
    if (std::popcount(b) != 1 || b >= (Bundle{1} << instance.m)) return false;
    return std::all_of(alloc.bundles.begin(), alloc.bundles.end(),
                       [b](Bundle x) { return x == b; });
  }
  Bundle used = 0;
  for (int i = 0; i < instance.n; ++i) {
    const Bundle b = alloc.bundles[i];
    if (b == 0) continue;
    if (used & b) return false;
    if (!instance.variable_of(i, b)) return false;
    used |= b;
  }
  return true;
}

std::vector<Allocation> enumerate_feasible(const Instance& instance,
                                           std::uint64_t bound) {
  std::vector<Allocation> out;
  if (instance.family == Family::kSinglePeaked) {
    if (static_cast<std::uint64_t>(instance.m) > bound) {
      throw EnumerationTooLarge(instance.m, bound);
    }
    for (int j = 0; j < instance.m; ++j) {
      out.push_back(Allocation{
          std::vector<Bundle>(static_cast<std::size_t>(instance.n),
                              Bundle{1} << j)});
    }
    return out;
  }

  std::vector<std::vector<Bundle>> options(instance.n);
  std::uint64_t estimate = 1;
  for (int i = 0; i < instance.n; ++i) {
    options[i].push_back(0);
    for (int v : instance.variables_of(i)) {
      options[i].push_back(instance.variables[v].bundle);
    }
    const std::uint64_t k = options[i].size();
    estimate = estimate > std::numeric_limits<std::uint64_t>::max() / k
                   ? std::numeric_limits<std::uint64_t>::max()
                   : estimate * k;
  }
  if (estimate > bound) throw EnumerationTooLarge(estimate, bound);

  Allocation current = Allocation::empty(instance.n);
  auto recurse = [&](auto&& self, int bidder, Bundle used) -> void {
    if (bidder == instance.n) {
      out.push_back(current);
      return;
    }
    for (Bundle b : options[bidder]) {
      if (used & b) continue;
      current.bundles[bidder] = b;
      self(self, bidder + 1, used | b);
    }
    current.bundles[bidder] = 0;
  };
  recurse(recurse, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

RationalVector indicator(const Instance& instance, const Allocation& alloc) {
  RationalVector chi(instance.variables.size(), Rational(0));
  for (int v = 0; v < instance.num_vars(); ++v) {
    const VariableKey& key = instance.variables[v];
    const int owner = key.bidder == kPublicOutcome ? 0 : key.bidder;
    if (owner < alloc.size() && alloc.bundles[owner] == key.bundle) chi[v] = 1;
  }
  return chi;
}

}  // namespace relaxround
