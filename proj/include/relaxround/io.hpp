#ifndef RELAXROUND_IO_HPP_
#define RELAXROUND_IO_HPP_

#include <filesystem>
#include <string>
#include <utility>

#include "relaxround/mechanism.hpp"
#include "relaxround/verify.hpp"

namespace relaxround {

// Instance file: {family, n, m, <family fields>, payment_rule, valuations}.
// Rationals are "p/q" strings (integers accepted on input). Loading goes
// through the family constructors, so construction audits run. A file with
// no "valuations" yields an empty profile.
std::pair<Instance, ValuationProfile> parse_instance(const std::string& text);
std::pair<Instance, ValuationProfile> load_instance(
    const std::filesystem::path& path);

// Canonical serialization; parse_instance(write_instance(i, p)) reproduces
// (i, p) and writing it again gives the same bytes.
std::string write_instance(const Instance& instance,
                           const ValuationProfile& profile);

std::string write_outcome(const Instance& instance,
                          const MechanismOutcome& outcome);
// Rows of (bundle bitmask per bidder, "p/q").
std::string write_distribution_json(const AllocationDistribution& dist);
std::string write_distribution_csv(const AllocationDistribution& dist);
std::string write_decomposition(const Instance& instance,
                                const FractionalPoint& x,
                                const ConvexDecomposition& d,
                                const AllocationDistribution& dist);

std::string write_report_json(const VerificationReport& report);
// Columns: check, profile_id, bidder, misreport, lhs, rhs, pass. One row per
// stored failure; a summary row per passing check.
std::string write_report_csv(const VerificationReport& report);

RationalVector parse_grid(const std::string& text);

}  // namespace relaxround

#endif  // RELAXROUND_IO_HPP_
