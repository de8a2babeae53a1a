#ifndef RELAXROUND_LP_HPP_
#define RELAXROUND_LP_HPP_

#include <optional>
#include <vector>

#include "relaxround/rational.hpp"

namespace relaxround {

// One row of A x <= b.
struct Constraint {
  RationalVector coeffs;
  Rational bound;
};

// {x >= 0 : A x <= b}. With `packing` set, every coefficient must be
// nonnegative, which makes the set closed downward.
struct Polytope {
  int num_vars = 0;
  std::vector<Constraint> constraints;
  bool packing = true;

  // Throws Error(kInvalidInput) if a row has the wrong length, a bound is
  // negative, or a packing polytope has a negative coefficient.
  void validate() const;
};

struct FractionalPoint {
  RationalVector coords;

  int size() const { return static_cast<int>(coords.size()); }
  bool operator==(const FractionalPoint&) const = default;
};

struct LinearOptimum {
  FractionalPoint point;
  Rational value;
};

// Exact primal simplex from the slack basis (the origin is feasible since
// b >= 0). Bland's rule: lowest-index improving column enters, ratio ties
// leave by lowest basic index.
LinearOptimum maximize_linear(const RationalVector& objective,
                              const Polytope& poly);

bool contains(const Polytope& poly, const FractionalPoint& x);

struct EqualityRow {
  RationalVector coeffs;
  Rational rhs;
};

struct PhaseOneResult {
  std::optional<RationalVector> solution;
  // Minimum of the sum of artificial variables; zero iff feasible.
  Rational residual;
};

// Finds a basic nonnegative solution of A x = b, or the infeasibility
// residual. At most rows.size() coordinates of the solution are nonzero.
PhaseOneResult phase_one(const std::vector<EqualityRow>& rows, int num_vars);

inline std::optional<RationalVector> solve_feasibility(
    const std::vector<EqualityRow>& rows, int num_vars) {
  return phase_one(rows, num_vars).solution;
}

Rational dot(const RationalVector& a, const RationalVector& b);

}  // namespace relaxround

#endif  // RELAXROUND_LP_HPP_
