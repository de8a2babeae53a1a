#include "relaxround/rational.hpp"

#include <cctype>

#include "relaxround/error.hpp"

namespace relaxround {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput:
      return "invalid-input";
    case ErrorKind::kEvaluation:
      return "evaluation";
    case ErrorKind::kEnumerationTooLarge:
      return "enumeration-too-large";
    case ErrorKind::kUnboundedLp:
      return "unbounded-lp";
    case ErrorKind::kDecompositionInfeasible:
      return "decomposition-infeasible";
    case ErrorKind::kUnsupportedFamily:
      return "unsupported-family";
    case ErrorKind::kConstruction:
      return "construction";
  }
  return "unknown";
}

EnumerationTooLarge::EnumerationTooLarge(std::uint64_t estimate,
                                         std::uint64_t bound)
    : Error(ErrorKind::kEnumerationTooLarge,
            "enumeration too large: estimated " + std::to_string(estimate) +
                " allocations exceeds bound " + std::to_string(bound)),
      estimate_(estimate) {}

DecompositionInfeasible::DecompositionInfeasible(const mpq_class& residual)
    : Error(ErrorKind::kDecompositionInfeasible,
            "convex decomposition infeasible (residual " +
                residual.get_str() +
                "); the declared scale is too large for this point"),
      residual_(residual) {}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1")
                                      : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) ||
      den[0] == '-' || den[0] == '+') {
    throw Error(ErrorKind::kInvalidInput,
                "malformed rational '" + std::string(text) + "'");
  }
  std::string n(num);
  if (n[0] == '+') n.erase(0, 1);
  mpz_class p(n, 10);
  mpz_class q(std::string(den), 10);
  if (q == 0) {
    throw Error(ErrorKind::kInvalidInput,
                "zero denominator in '" + std::string(text) + "'");
  }
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational rational_abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

Rational ratio(long num, long den) {
  if (den == 0) throw Error(ErrorKind::kInvalidInput, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace relaxround
