#include "relaxround/lp.hpp"

#include <string>

#include "relaxround/error.hpp"

namespace relaxround {

namespace {

// Dense tableau: rows of [coefficients | rhs] with one basic column per row.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols),
        a_(rows, RationalVector(cols, Rational(0))),
        rhs_(rows, Rational(0)),
        basis_(rows, 0) {}

  std::size_t rows() const { return a_.size(); }
  std::size_t cols() const { return cols_; }
  Rational& at(std::size_t r, std::size_t c) { return a_[r][c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return a_[r][c]; }
  Rational& rhs(std::size_t r) { return rhs_[r]; }
  std::size_t& basic(std::size_t r) { return basis_[r]; }
  std::size_t basic(std::size_t r) const { return basis_[r]; }

  // Bland ratio test on column `col`. Returns rows() if the column is
  // unbounded.
  std::size_t leaving_row(std::size_t col) const {
    std::size_t best = rows();
    Rational best_ratio;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (a_[r][col] <= 0) continue;
      Rational ratio = rhs_[r] / a_[r][col];
      if (best == rows() || ratio < best_ratio ||
          (ratio == best_ratio && basis_[r] < basis_[best])) {
        best = r;
        best_ratio = std::move(ratio);
      }
    }
    return best;
  }

  // Pivots on (row, col), updating `reduced` (objective row, one entry per
  // column) and `objective` (current value) alongside.
  void pivot(std::size_t row, std::size_t col, RationalVector& reduced,
             Rational& objective) {
    const Rational p = a_[row][col];
    for (std::size_t c = 0; c < cols_; ++c) {
      if (a_[row][c] != 0) a_[row][c] /= p;
    }
    rhs_[row] /= p;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (r == row || a_[r][col] == 0) continue;
      const Rational factor = a_[r][col];
      for (std::size_t c = 0; c < cols_; ++c) {
        if (a_[row][c] != 0) a_[r][c] -= factor * a_[row][c];
      }
      rhs_[r] -= factor * rhs_[row];
    }
    if (reduced[col] != 0) {
      const Rational factor = reduced[col];
      for (std::size_t c = 0; c < cols_; ++c) {
        if (a_[row][c] != 0) reduced[c] -= factor * a_[row][c];
      }
      objective += factor * rhs_[row];
    }
    basis_[row] = col;
  }

  const Rational& rhs_at(std::size_t r) const { return rhs_[r]; }

 private:
  std::size_t cols_;
  std::vector<RationalVector> a_;
  RationalVector rhs_;
  std::vector<std::size_t> basis_;
};

// Maximizes with reduced costs `reduced` until no column in [0, limit) has
// a positive reduced cost. Returns false on an unbounded column.
bool run_simplex(Tableau& t, RationalVector& reduced, Rational& objective,
                 std::size_t limit) {
  for (;;) {
    std::size_t entering = limit;
    for (std::size_t c = 0; c < limit; ++c) {
      if (reduced[c] > 0) {
        entering = c;
        break;
      }
    }
    if (entering == limit) return true;
    const std::size_t row = t.leaving_row(entering);
    if (row == t.rows()) return false;
    t.pivot(row, entering, reduced, objective);
  }
}

}  // namespace

void Polytope::validate() const {
  for (std::size_t r = 0; r < constraints.size(); ++r) {
    const Constraint& c = constraints[r];
    if (static_cast<int>(c.coeffs.size()) != num_vars) {
      throw Error(ErrorKind::kInvalidInput,
                  "constraint " + std::to_string(r) + ": expected " +
                      std::to_string(num_vars) + " coefficients");
    }
    if (c.bound < 0) {
      throw Error(ErrorKind::kInvalidInput,
                  "constraint " + std::to_string(r) + ": negative bound");
    }
    if (packing) {
      for (const Rational& a : c.coeffs) {
        if (a < 0) {
          throw Error(ErrorKind::kInvalidInput,
                      "constraint " + std::to_string(r) +
                          ": negative coefficient in a packing polytope");
        }
      }
    }
  }
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kInvalidInput, "dot: dimension mismatch");
  }
  Rational sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) sum += a[i] * b[i];
  }
  return sum;
}

LinearOptimum maximize_linear(const RationalVector& objective,
                              const Polytope& poly) {
  if (static_cast<int>(objective.size()) != poly.num_vars) {
    throw Error(ErrorKind::kInvalidInput,
                "objective has " + std::to_string(objective.size()) +
                    " entries, polytope has " +
                    std::to_string(poly.num_vars) + " variables");
  }
  poly.validate();
  const std::size_t n = static_cast<std::size_t>(poly.num_vars);
  const std::size_t rows = poly.constraints.size();
  Tableau t(rows, n + rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = poly.constraints[r].coeffs[c];
    t.at(r, n + r) = 1;
    t.rhs(r) = poly.constraints[r].bound;
    t.basic(r) = n + r;
  }
  RationalVector reduced(n + rows, Rational(0));
  for (std::size_t c = 0; c < n; ++c) reduced[c] = objective[c];
  Rational value = 0;
  if (!run_simplex(t, reduced, value, n + rows)) {
    throw Error(ErrorKind::kUnboundedLp, "linear program is unbounded");
  }
  LinearOptimum out;
  out.point.coords.assign(n, Rational(0));
  for (std::size_t r = 0; r < rows; ++r) {
    if (t.basic(r) < n) out.point.coords[t.basic(r)] = t.rhs_at(r);
  }
  out.value = value;
  return out;
}

bool contains(const Polytope& poly, const FractionalPoint& x) {
  if (x.size() != poly.num_vars) {
    throw Error(ErrorKind::kInvalidInput, "contains: dimension mismatch");
  }
  for (const Rational& c : x.coords) {
    if (c < 0) return false;
  }
  for (const Constraint& c : poly.constraints) {
    if (dot(c.coeffs, x.coords) > c.bound) return false;
  }
  return true;
}

PhaseOneResult phase_one(const std::vector<EqualityRow>& rows, int num_vars) {
  if (num_vars < 0) {
    throw Error(ErrorKind::kInvalidInput, "phase_one: negative variable count");
  }
  const std::size_t n = static_cast<std::size_t>(num_vars);
  const std::size_t m = rows.size();
  Tableau t(m, n + m);
  for (std::size_t r = 0; r < m; ++r) {
    if (rows[r].coeffs.size() != n) {
      throw Error(ErrorKind::kInvalidInput,
                  "equality " + std::to_string(r) + ": expected " +
                      std::to_string(n) + " coefficients");
    }
    const bool flip = rows[r].rhs < 0;
    for (std::size_t c = 0; c < n; ++c) {
      t.at(r, c) = flip ? Rational(-rows[r].coeffs[c]) : rows[r].coeffs[c];
    }
    t.rhs(r) = flip ? Rational(-rows[r].rhs) : rows[r].rhs;
    t.at(r, n + r) = 1;
    t.basic(r) = n + r;
  }
  // Maximize -sum(artificials): reduced cost of column c is its column sum.
  RationalVector reduced(n + m, Rational(0));
  Rational objective = 0;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) reduced[c] += t.at(r, c);
    objective -= t.rhs_at(r);
  }
  // Artificials never re-enter, so only structural columns are scanned.
  run_simplex(t, reduced, objective, n);

  PhaseOneResult result;
  result.residual = -objective;
  if (result.residual != 0) return result;

  // Drive zero-level artificials out of the basis where possible; rows where
  // no structural column is nonzero are redundant and stay as they are.
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basic(r) < n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (t.at(r, c) != 0) {
        t.pivot(r, c, reduced, objective);
        break;
      }
    }
  }
  RationalVector x(n, Rational(0));
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basic(r) < n) x[t.basic(r)] = t.rhs_at(r);
  }
  result.solution = std::move(x);
  return result;
}

}  // namespace relaxround
