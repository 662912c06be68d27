#pragma once

#include <optional>
#include <vector>

#include "odx/rational.hpp"

namespace odx {

using RatVec = std::vector<Rational>;

struct RatMat {
  int rows = 0;
  int cols = 0;
  std::vector<Rational> a;

  RatMat() = default;
  RatMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  Rational& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Rational& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static RatMat identity(int n);
  RatMat transposed() const;
};

RatMat operator*(const RatMat& x, const RatMat& y);
RatVec operator*(const RatMat& x, const RatVec& v);
Rational dot(const RatVec& x, const RatVec& y);

// Exact solver for symmetric positive semidefinite systems M z = c via
// Gauss-Jordan with diagonal pivoting. For PSD input, a vanishing diagonal
// entry of the running Schur complement forces its whole row to vanish, so
// no off-diagonal pivoting is ever needed; a violation means the input was
// not PSD and is reported.
class SymPsdSolver {
public:
  explicit SymPsdSolver(const RatMat& m);

  int rank() const { return rank_; }

  // All elimination pivots positive; together with full rank this certifies
  // positive definiteness of the input.
  bool positive_pivots() const { return positive_pivots_; }

  // True iff c lies in the column space of M (= row space, M symmetric).
  bool consistent(const RatVec& c) const;

  // A particular solution of M z = c with free coordinates at zero, or
  // nullopt if the system is inconsistent.
  std::optional<RatVec> solve(const RatVec& c) const;

  // c' M^- c for consistent c; nullopt otherwise. Independent of the choice
  // of generalized inverse exactly when c is consistent.
  std::optional<Rational> quad_form(const RatVec& c) const;

private:
  int n_;
  int rank_;
  bool positive_pivots_ = true;
  RatMat reduced_;    // RREF of M
  RatMat transform_;  // E with E*M = reduced_
  std::vector<int> pivot_col_;  // per reduced row, -1 for zero rows
};

// Inverse of a symmetric positive definite matrix; throws std::domain_error
// when the matrix is singular or indefinite.
RatMat pd_inverse(const RatMat& m);

}  // namespace odx
