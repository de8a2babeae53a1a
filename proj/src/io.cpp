#include "relaxround/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "relaxround/error.hpp"
#include "relaxround/instances.hpp"

namespace relaxround {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::kInvalidInput, field + ": " + what);
}

const json& require(const json& obj, const std::string& key,
                    const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    field_error(where.empty() ? key : where + "." + key, "missing field");
  }
  return obj.at(key);
}

Rational rational_field(const json& j, const std::string& field) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      field_error(field, e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  field_error(field, "expected a \"p/q\" string or an integer");
}

int int_field(const json& obj, const std::string& key, const std::string& where) {
  const json& j = require(obj, key, where);
  if (!j.is_number_integer()) field_error(key, "expected an integer");
  return j.get<int>();
}

Bundle bundle_field(const json& j, const std::string& field, int m) {
  if (!j.is_array()) field_error(field, "expected a list of item indices");
  Bundle b = 0;
  for (const json& item : j) {
    if (!item.is_number_integer()) field_error(field, "item must be an integer");
    const int idx = item.get<int>();
    if (idx < 0 || idx >= m) {
      field_error(field, "item " + std::to_string(idx) + " outside 0.." +
                             std::to_string(m - 1));
    }
    b |= Bundle{1} << idx;
  }
  return b;
}

ordered_json bundle_json(Bundle b) {
  ordered_json out = ordered_json::array();
  for (int j = 0; j < kMaxItems; ++j) {
    if (b & (Bundle{1} << j)) out.push_back(j);
  }
  return out;
}

Valuation valuation_field(const json& j, const std::string& field, int m) {
  const std::string type = require(j, "type", field).get<std::string>();
  if (type == "additive") {
    const json& values = require(j, "values", field);
    if (!values.is_array()) field_error(field + ".values", "expected a list");
    AdditiveValuation v;
    for (std::size_t k = 0; k < values.size(); ++k) {
      v.item_values.push_back(
          rational_field(values[k], field + ".values[" + std::to_string(k) + "]"));
    }
    return v;
  }
  if (type == "single-minded") {
    return SingleMindedValuation{
        bundle_field(require(j, "bundle", field), field + ".bundle", m),
        rational_field(require(j, "value", field), field + ".value")};
  }
  if (type == "table") {
    TableValuation v;
    const json& entries = require(j, "entries", field);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const std::string f = field + ".entries[" + std::to_string(k) + "]";
      const Bundle b = bundle_field(require(entries[k], "bundle", f), f + ".bundle", m);
      if (v.values.count(b)) field_error(f, "duplicate bundle");
      v.values[b] = rational_field(require(entries[k], "value", f), f + ".value");
    }
    return v;
  }
  if (type == "single-peaked") {
    return SinglePeakedValuation{
        rational_field(require(j, "peak", field), field + ".peak")};
  }
  field_error(field + ".type", "unknown valuation type '" + type + "'");
}

ordered_json valuation_json(const Valuation& v) {
  ordered_json out;
  std::visit(
      [&out](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, AdditiveValuation>) {
          out["type"] = "additive";
          out["values"] = ordered_json::array();
          for (const Rational& r : x.item_values) {
            out["values"].push_back(format_rational(r));
          }
        } else if constexpr (std::is_same_v<T, SingleMindedValuation>) {
          out["type"] = "single-minded";
          out["bundle"] = bundle_json(x.bundle);
          out["value"] = format_rational(x.value);
        } else if constexpr (std::is_same_v<T, TableValuation>) {
          out["type"] = "table";
          out["entries"] = ordered_json::array();
          for (const auto& [b, value] : x.values) {
            out["entries"].push_back(
                ordered_json{{"bundle", bundle_json(b)},
                             {"value", format_rational(value)}});
          }
        } else {
          out["type"] = "single-peaked";
          out["peak"] = format_rational(x.peak);
        }
      },
      v);
  return out;
}

ordered_json rationals_json(const RationalVector& values) {
  ordered_json out = ordered_json::array();
  for (const Rational& r : values) out.push_back(format_rational(r));
  return out;
}

ordered_json allocation_json(const Allocation& a) {
  ordered_json out = ordered_json::array();
  for (Bundle b : a.bundles) out.push_back(b);
  return out;
}

ordered_json distribution_rows(const AllocationDistribution& dist) {
  ordered_json rows = ordered_json::array();
  for (const auto& [alloc, p] : dist.mass()) {
    rows.push_back(ordered_json{{"bundles", allocation_json(alloc)},
                                {"probability", format_rational(p)}});
  }
  return rows;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::pair<Instance, ValuationProfile> parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kInvalidInput,
                std::string("instance file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) field_error("<root>", "expected an object");
  try {
    const std::string tag = require(doc, "family", "").get<std::string>();
    Family family;
    try {
      family = parse_family(tag);
    } catch (const Error& e) {
      field_error("family", e.what());
    }
    const int n = int_field(doc, "n", "");
    const int m = int_field(doc, "m", "");
    if (n < 1) field_error("n", "must be >= 1");
    if (m < 1 || m > kMaxItems) field_error("m", "out of range");

    Instance inst;
    switch (family) {
      case Family::kSingleItem: {
        if (m != 1) field_error("m", "single-item needs m = 1");
        const Rational beta =
            doc.contains("beta") ? rational_field(doc["beta"], "beta") : Rational(1);
        if (beta <= 0 || beta > 1) field_error("beta", "must lie in (0, 1]");
        inst = make_case_b_family(n, beta);
        break;
      }
      case Family::kSingleMindedCa: {
        const json& desires = require(doc, "desires", "");
        if (!desires.is_array() || static_cast<int>(desires.size()) != n) {
          field_error("desires", "expected one bundle per bidder");
        }
        std::vector<Bundle> bundles;
        for (std::size_t i = 0; i < desires.size(); ++i) {
          bundles.push_back(bundle_field(
              desires[i], "desires[" + std::to_string(i) + "]", m));
        }
        BundleSpace space = BundleSpace::kDeclared;
        if (doc.contains("bundle_space")) {
          const std::string s = doc["bundle_space"].get<std::string>();
          if (s == "all") {
            space = BundleSpace::kAll;
          } else if (s != "declared") {
            field_error("bundle_space", "expected \"declared\" or \"all\"");
          }
        }
        const Rational alpha = doc.contains("alpha")
                                   ? rational_field(doc["alpha"], "alpha")
                                   : Rational(1, 2);
        if (alpha <= 0 || alpha > 1) field_error("alpha", "must lie in (0, 1]");
        inst = make_single_minded_ca(m, bundles, space, alpha);
        break;
      }
      case Family::kGapToy: {
        const int breakpoints =
            doc.contains("breakpoints") ? int_field(doc, "breakpoints", "") : 16;
        if (breakpoints < 1) field_error("breakpoints", "must be >= 1");
        inst = make_gap_toy(n, m, breakpoints);
        break;
      }
      case Family::kNoMoneyLottery:
        if (m != 1) field_error("m", "no-money-lottery needs m = 1");
        inst = make_no_money(n, NoMoneyKind::kLottery);
        break;
      case Family::kSinglePeaked:
        inst = make_no_money(n, NoMoneyKind::kSinglePeaked, m);
        break;
    }
    if (doc.contains("payment_rule")) {
      const std::string rule = doc["payment_rule"].get<std::string>();
      if (rule == "first-price") {
        inst.payment_rule = PaymentRule::kFirstPrice;
      } else if (rule != "vcg") {
        field_error("payment_rule", "expected \"vcg\" or \"first-price\"");
      }
    }

    ValuationProfile profile;
    if (doc.contains("valuations")) {
      const json& vals = doc["valuations"];
      if (!vals.is_array()) field_error("valuations", "expected a list");
      for (std::size_t i = 0; i < vals.size(); ++i) {
        profile.valuations.push_back(
            valuation_field(vals[i], "valuations[" + std::to_string(i) + "]", m));
      }
      validate_profile(inst, profile);
    }
    return {std::move(inst), std::move(profile)};
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput,
                std::string("instance file has a field of the wrong type: ") +
                    e.what());
  }
}

std::pair<Instance, ValuationProfile> load_instance(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kInvalidInput,
                "cannot open instance file '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string write_instance(const Instance& instance,
                           const ValuationProfile& profile) {
  ordered_json out;
  out["family"] = std::string(family_tag(instance.family));
  out["n"] = instance.n;
  out["m"] = instance.m;
  switch (instance.family) {
    case Family::kSingleItem:
      out["beta"] = format_rational(instance.spec.beta);
      break;
    case Family::kSingleMindedCa:
      out["desires"] = ordered_json::array();
      for (Bundle b : instance.declared_bundles) out["desires"].push_back(bundle_json(b));
      out["bundle_space"] =
          instance.bundle_space == BundleSpace::kAll ? "all" : "declared";
      out["alpha"] = format_rational(instance.spec.alpha);
      break;
    case Family::kGapToy:
      out["breakpoints"] = instance.breakpoints;
      break;
    case Family::kNoMoneyLottery:
    case Family::kSinglePeaked:
      break;
  }
  out["payment_rule"] =
      instance.payment_rule == PaymentRule::kFirstPrice ? "first-price" : "vcg";
  if (profile.size() > 0) {
    out["valuations"] = ordered_json::array();
    for (const Valuation& v : profile.valuations) {
      out["valuations"].push_back(valuation_json(v));
    }
  }
  return out.dump(2) + "\n";
}

std::string write_outcome(const Instance& instance,
                          const MechanismOutcome& outcome) {
  ordered_json out;
  out["family"] = std::string(family_tag(instance.family));
  out["n"] = instance.n;
  out["m"] = instance.m;
  out["seed"] = outcome.seed;
  out["fractional_point"] = rationals_json(outcome.point.coords);
  out["relaxed_value"] = format_rational(outcome.relaxed_value);
  out["distribution"] = distribution_rows(outcome.distribution);
  out["realized"] = allocation_json(outcome.realized);
  out["expected_payments"] = rationals_json(outcome.expected_payments);
  out["realized_payments"] = rationals_json(outcome.realized_payments);
  return out.dump(2) + "\n";
}

std::string write_distribution_json(const AllocationDistribution& dist) {
  return distribution_rows(dist).dump(2) + "\n";
}

std::string write_distribution_csv(const AllocationDistribution& dist) {
  std::string out = "bundles,probability\n";
  for (const auto& [alloc, p] : dist.mass()) {
    std::string masks;
    for (std::size_t i = 0; i < alloc.bundles.size(); ++i) {
      if (i) masks += " ";
      masks += std::to_string(alloc.bundles[i]);
    }
    out += masks + "," + format_rational(p) + "\n";
  }
  return out;
}

std::string write_decomposition(const Instance& instance,
                                const FractionalPoint& x,
                                const ConvexDecomposition& d,
                                const AllocationDistribution& dist) {
  ordered_json out;
  out["family"] = std::string(family_tag(instance.family));
  out["fractional_point"] = rationals_json(x.coords);
  out["scale"] = format_rational(instance.spec.decomposition_scale);
  out["terms"] = ordered_json::array();
  for (const DecompositionTerm& t : d.terms) {
    out["terms"].push_back(ordered_json{{"bundles", allocation_json(t.alloc)},
                                        {"weight", format_rational(t.weight)}});
  }
  out["distribution"] = distribution_rows(dist);
  return out.dump(2) + "\n";
}

std::string write_report_json(const VerificationReport& report) {
  ordered_json out;
  out["all_pass"] = report.all_pass();
  out["checks"] = ordered_json::array();
  for (const CheckResult& c : report.checks) {
    ordered_json check;
    check["name"] = c.name;
    check["status"] = std::string(check_status_tag(c.status));
    check["cases"] = c.cases;
    check["failures"] = c.failures;
    check["domain"] = c.domain;
    check["witnesses"] = ordered_json::array();
    for (const Witness& w : c.witnesses) {
      check["witnesses"].push_back(ordered_json{
          {"profile_id", w.profile_id},
          {"profile", w.profile},
          {"bidder", w.bidder},
          {"misreport", w.misreport},
          {"lhs", format_rational(w.lhs)},
          {"rhs", format_rational(w.rhs)},
          {"note", w.note}});
    }
    out["checks"].push_back(std::move(check));
  }
  return out.dump(2) + "\n";
}

std::string write_report_csv(const VerificationReport& report) {
  std::string out = "check,profile_id,bidder,misreport,lhs,rhs,pass\n";
  for (const CheckResult& c : report.checks) {
    if (c.witnesses.empty()) {
      out += csv_escape(c.name) + ",summary,,," + std::to_string(c.cases) +
             " cases,," + std::string(check_status_tag(c.status)) + "\n";
      continue;
    }
    for (const Witness& w : c.witnesses) {
      out += csv_escape(c.name) + "," + std::to_string(w.profile_id) + "," +
             (w.bidder >= 0 ? std::to_string(w.bidder) : std::string()) + "," +
             csv_escape(w.misreport) + "," + format_rational(w.lhs) + "," +
             format_rational(w.rhs) + ",FAIL\n";
    }
  }
  return out;
}

RationalVector parse_grid(const std::string& text) {
  RationalVector grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) {
      throw Error(ErrorKind::kInvalidInput, "grid: empty entry");
    }
    grid.push_back(parse_rational(item.substr(first, last - first + 1)));
  }
  if (grid.empty()) throw Error(ErrorKind::kInvalidInput, "grid: must be nonempty");
  return grid;
}

}  // namespace relaxround
