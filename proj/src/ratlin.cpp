#include "odx/ratlin.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace odx {

RatMat RatMat::identity(int n) {
  RatMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
  return m;
}

RatMat RatMat::transposed() const {
  RatMat t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  return t;
}

RatMat operator*(const RatMat& x, const RatMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch");
  RatMat z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Rational& xik = x.at(i, k);
      if (xik.is_zero()) continue;
      for (int j = 0; j < y.cols; ++j) {
        const Rational& ykj = y.at(k, j);
        if (!ykj.is_zero()) z.at(i, j) += xik * ykj;
      }
    }
  return z;
}

RatVec operator*(const RatMat& x, const RatVec& v) {
  if (x.cols != static_cast<int>(v.size())) throw std::invalid_argument("matrix shape mismatch");
  RatVec out(x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j)
      if (!x.at(i, j).is_zero() && !v[j].is_zero()) out[i] += x.at(i, j) * v[j];
  return out;
}

Rational dot(const RatVec& x, const RatVec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector length mismatch");
  Rational s;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero() && !y[i].is_zero()) s += x[i] * y[i];
  return s;
}

SymPsdSolver::SymPsdSolver(const RatMat& m) : n_(m.rows), rank_(0) {
  if (m.rows != m.cols) throw std::invalid_argument("square matrix expected");
  reduced_ = m;
  transform_ = RatMat::identity(n_);

  std::vector<int> pivots;
  for (int k = 0; k < n_; ++k) {
    if (reduced_.at(k, k).is_zero()) {
      // Once the diagonal of the running Schur complement vanishes, positive
      // semidefiniteness forces the whole row to vanish with it.
      for (int j = 0; j < n_; ++j)
        if (!reduced_.at(k, j).is_zero())
          throw std::domain_error("matrix is not positive semidefinite");
      continue;
    }
    if (reduced_.at(k, k).sign() < 0) positive_pivots_ = false;
    const Rational pinv = reduced_.at(k, k).inverse();
    for (int j = 0; j < n_; ++j) {
      reduced_.at(k, j) *= pinv;
      transform_.at(k, j) *= pinv;
    }
    for (int i = 0; i < n_; ++i) {
      if (i == k) continue;
      const Rational f = reduced_.at(i, k);
      if (f.is_zero()) continue;
      for (int j = 0; j < n_; ++j) {
        reduced_.at(i, j) -= f * reduced_.at(k, j);
        transform_.at(i, j) -= f * transform_.at(k, j);
      }
    }
    pivots.push_back(k);
  }

  rank_ = static_cast<int>(pivots.size());
  pivot_col_.assign(n_, -1);

  // Compact pivot rows to the top so zero rows of the reduction sit at the
  // bottom; the same permutation applied to the transform keeps E*M equal to
  // the reduced matrix.
  std::vector<int> order;
  order.reserve(n_);
  for (int k : pivots) order.push_back(k);
  for (int k = 0; k < n_; ++k)
    if (!std::binary_search(pivots.begin(), pivots.end(), k)) order.push_back(k);
  RatMat red(n_, n_), tr(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      red.at(i, j) = reduced_.at(order[i], j);
      tr.at(i, j) = transform_.at(order[i], j);
    }
  reduced_ = std::move(red);
  transform_ = std::move(tr);
  for (int i = 0; i < rank_; ++i) pivot_col_[i] = pivots[i];
}

bool SymPsdSolver::consistent(const RatVec& c) const {
  if (static_cast<int>(c.size()) != n_) throw std::invalid_argument("vector length mismatch");
  for (int i = rank_; i < n_; ++i) {
    Rational s;
    for (int j = 0; j < n_; ++j)
      if (!transform_.at(i, j).is_zero() && !c[j].is_zero()) s += transform_.at(i, j) * c[j];
    if (!s.is_zero()) return false;
  }
  return true;
}

std::optional<RatVec> SymPsdSolver::solve(const RatVec& c) const {
  if (!consistent(c)) return std::nullopt;
  RatVec z(n_);
  for (int i = 0; i < rank_; ++i) {
    Rational s;
    for (int j = 0; j < n_; ++j)
      if (!transform_.at(i, j).is_zero() && !c[j].is_zero()) s += transform_.at(i, j) * c[j];
    z[pivot_col_[i]] = s;
  }
  return z;
}

std::optional<Rational> SymPsdSolver::quad_form(const RatVec& c) const {
  auto z = solve(c);
  if (!z) return std::nullopt;
  return dot(c, *z);
}

RatMat pd_inverse(const RatMat& m) {
  SymPsdSolver s(m);
  if (s.rank() != m.rows) throw std::domain_error("matrix is singular");
  if (!s.positive_pivots()) throw std::domain_error("matrix is not positive definite");
  RatMat inv(m.rows, m.rows);
  for (int j = 0; j < m.rows; ++j) {
    RatVec e(m.rows);
    e[j] = Rational(1);
    const RatVec col = *s.solve(e);
    for (int i = 0; i < m.rows; ++i) inv.at(i, j) = col[i];
  }
  return inv;
}

}  // namespace odx
