#ifndef RELAXROUND_ERROR_HPP_
#define RELAXROUND_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace relaxround {

enum class ErrorKind {
  kInvalidInput,
  kEvaluation,
  kEnumerationTooLarge,
  kUnboundedLp,
  kDecompositionInfeasible,
  kUnsupportedFamily,
  kConstruction,
};

const char* to_string(ErrorKind kind);

// Every failure in the library surfaces as an Error carrying its kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class EnumerationTooLarge : public Error {
 public:
  EnumerationTooLarge(std::uint64_t estimate, std::uint64_t bound);
  std::uint64_t estimate() const { return estimate_; }

 private:
  std::uint64_t estimate_;
};

// The decomposition system has no nonnegative solution. `residual` is the
// phase-one optimum (sum of artificial variables), zero iff feasible.
class DecompositionInfeasible : public Error {
 public:
  explicit DecompositionInfeasible(const mpq_class& residual);
  const mpq_class& residual() const { return residual_; }

 private:
  mpq_class residual_;
};

}  // namespace relaxround

#endif  // RELAXROUND_ERROR_HPP_
