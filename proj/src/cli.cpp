#include "relaxround/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include <CLI11.hpp>

#include "relaxround/error.hpp"
#include "relaxround/io.hpp"

namespace relaxround {

namespace {

namespace fs = std::filesystem;

struct ExperimentConfig {
  std::string instance_path;
  std::string mode;
  std::string grid = "0,1,2,3";
  std::uint64_t seed = 0;
  std::string out_dir = "relaxround-out";
  std::string format = "json";
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error(ErrorKind::kInvalidInput, "cannot write '" + path.string() + "'");
  }
  f << text;
}

// Folds checks of the same name together, keeping first-seen order.
void merge_into(VerificationReport& into, const VerificationReport& from) {
  for (const CheckResult& c : from.checks) {
    auto it = std::find_if(into.checks.begin(), into.checks.end(),
                           [&](const CheckResult& x) { return x.name == c.name; });
    if (it == into.checks.end()) {
      into.checks.push_back(c);
      continue;
    }
    it->cases += c.cases;
    for (const Witness& w : c.witnesses) it->record_failure(w);
    // record_failure counted stored witnesses; add the unstored remainder.
    it->failures += c.failures - c.witnesses.size();
    if (c.status == CheckStatus::kTruncated) it->status = CheckStatus::kTruncated;
  }
}

void print_summary(const VerificationReport& report, std::ostream& out) {
  for (const CheckResult& c : report.checks) {
    out << c.name << ": " << check_status_tag(c.status) << " (" << c.cases
        << " cases";
    if (c.failures > 0) out << ", " << c.failures << " failures";
    out << ") [" << c.domain << "]\n";
  }
}

int emit_report(const ExperimentConfig& cfg, const VerificationReport& report,
                std::ostream& out) {
  const fs::path dir(cfg.out_dir);
  if (cfg.format != "csv") write_file(dir / "report.json", write_report_json(report));
  if (cfg.format != "json") write_file(dir / "report.csv", write_report_csv(report));
  print_summary(report, out);
  if (report.all_pass()) return kExitPass;

  VerificationReport failing;
  for (const CheckResult& c : report.checks) {
    if (!c.passed()) failing.checks.push_back(c);
  }
  const fs::path witness = dir / "witnesses.json";
  write_file(witness, write_report_json(failing));
  out << "witnesses written to " << witness.string() << "\n";
  return kExitFail;
}

const ValuationProfile& require_profile(const ValuationProfile& profile,
                                        const std::string& mode) {
  if (profile.size() == 0) {
    throw Error(ErrorKind::kInvalidInput,
                "valuations: required by --mode " + mode);
  }
  return profile;
}

int run_mode(const ExperimentConfig& cfg, std::ostream& out) {
  auto [instance, profile] = load_instance(cfg.instance_path);
  const RationalVector grid = parse_grid(cfg.grid);
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);

  if (cfg.mode == "run") {
    if (!is_auction_family(instance.family) ||
        instance.family == Family::kNoMoneyLottery) {
      const WithoutMoneyOutcome o =
          run_without_money(instance, require_profile(profile, cfg.mode));
      if (cfg.format != "csv") {
        write_file(dir / "outcome.json", write_distribution_json(o.distribution));
      }
      if (cfg.format != "json") {
        write_file(dir / "outcome.csv", write_distribution_csv(o.distribution));
      }
      out << "run: " << o.distribution.support_size()
          << " outcomes in support\n";
      return kExitPass;
    }
    const MechanismOutcome o =
        run(instance, require_profile(profile, cfg.mode), cfg.seed);
    if (cfg.format != "csv") write_file(dir / "outcome.json", write_outcome(instance, o));
    if (cfg.format != "json") {
      write_file(dir / "outcome.csv", write_distribution_csv(o.distribution));
    }
    out << "run: realized " << o.realized.to_string() << ", payments";
    for (const Rational& p : o.expected_payments) out << " " << format_rational(p);
    out << "\n";
    return kExitPass;
  }
  if (cfg.mode == "verify-truthfulness") {
    VerificationReport report = check_truthfulness(instance, grid, grid);
    if (instance.payment_rule == PaymentRule::kVcg) {
      merge_into(report, check_utility_identity(instance, grid));
    }
    return emit_report(cfg, report, out);
  }
  if (cfg.mode == "verify-ratio") {
    return emit_report(cfg, check_approximation_grid(instance, grid), out);
  }
  if (cfg.mode == "verify-no-money") {
    VerificationReport report;
    if (instance.family == Family::kSinglePeaked) {
      report = check_median_no_improvement(instance, grid);
    } else if (instance.family == Family::kNoMoneyLottery) {
      const Rational beta = instance.spec.calibration_factor();
      for (const ValuationProfile& p : grid_profiles(instance, grid)) {
        merge_into(report, check_without_money(instance, p, beta));
      }
    } else {
      throw Error(ErrorKind::kUnsupportedFamily,
                  "--mode verify-no-money needs a without-money family");
    }
    return emit_report(cfg, report, out);
  }
  if (cfg.mode == "decompose") {
    if (profile.size() > 0) {
      const Allocated a = allocate(instance, profile);
      const ConvexDecomposition d =
          convex_decompose(a.point, instance.spec.decomposition_scale, instance);
      write_file(dir / "decomposition.json",
                 write_decomposition(instance, a.point, d, a.distribution));
      out << "decompose: " << d.terms.size() << " terms\n";
    }
    return emit_report(cfg, check_decomposition_identities(instance, grid), out);
  }
  throw Error(ErrorKind::kInvalidInput, "unknown mode '" + cfg.mode + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  ExperimentConfig cfg;
  CLI::App app{"Relax-and-round mechanism runner and verifier", "relaxround"};
  app.add_option("--instance", cfg.instance_path, "Instance JSON file")
      ->required();
  app.add_option("--mode", cfg.mode, "What to do")
      ->required()
      ->check(CLI::IsMember({"run", "verify-truthfulness", "verify-ratio",
                             "verify-no-money", "decompose"}));
  app.add_option("--grid", cfg.grid, "Comma-separated rational value grid")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  app.add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  app.add_option("--format", cfg.format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    return run_mode(cfg, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace relaxround
