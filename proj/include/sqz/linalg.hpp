#pragma once

// Exact dense linear algebra over a field scalar K (Rational or Fp).
// Conventions: vectors are columns, a linear map V -> W is a (dim W x dim V)
// matrix, subspace bases are stored as matrix *rows*.

#include "sqz/scalar.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

namespace sqz {

template <class K>
using Mat = Eigen::Matrix<K, Eigen::Dynamic, Eigen::Dynamic>;
template <class K>
using Vec = Eigen::Matrix<K, Eigen::Dynamic, 1>;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class K>
Mat<K> zero_mat(Eigen::Index r, Eigen::Index c) {
  Mat<K> m(r, c);
  m.setConstant(K(0));
  return m;
}

template <class K>
Mat<K> identity_mat(Eigen::Index n) {
  Mat<K> m = zero_mat<K>(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = K(1);
  return m;
}

template <class K>
bool is_zero_mat(const Mat<K>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != K(0)) return false;
  return true;
}

template <class K>
struct Rref {
  Mat<K> r;                 // reduced row echelon form
  std::vector<int> pivots;  // pivot column per nonzero row
  int rank = 0;
};

// Gaussian elimination with first-nonzero pivoting; deterministic over exact fields.
template <class K>
Rref<K> rref(Mat<K> m) {
  Rref<K> out;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = row; i < rows; ++i)
      if (m(i, col) != K(0)) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != row) m.row(piv).swap(m.row(row));
    K inv = inverse(m(row, col));
    for (Eigen::Index j = col; j < cols; ++j) m(row, j) = m(row, j) * inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == row || m(i, col) == K(0)) continue;
      K f = m(i, col);
      for (Eigen::Index j = col; j < cols; ++j) m(i, j) = m(i, j) - f * m(row, j);
    }
    out.pivots.push_back(static_cast<int>(col));
    ++row;
  }
  out.rank = static_cast<int>(row);
  out.r = std::move(m);
  return out;
}

template <class K>
int rank(const Mat<K>& m) {
  return rref(m).rank;
}

// Basis of { x : M x = 0 }, returned as rows.
template <class K>
Mat<K> kernel_basis(const Mat<K>& m) {
  const Eigen::Index cols = m.cols();
  Rref<K> rr = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int p : rr.pivots) is_pivot[p] = true;
  const Eigen::Index nfree = cols - rr.rank;
  Mat<K> ker = zero_mat<K>(nfree, cols);
  Eigen::Index kr = 0;
  for (Eigen::Index freecol = 0; freecol < cols; ++freecol) {
    if (is_pivot[freecol]) continue;
    ker(kr, freecol) = K(1);
    for (int prow = 0; prow < rr.rank; ++prow) {
      int pcol = rr.pivots[prow];
      ker(kr, pcol) = -rr.r(prow, freecol);
    }
    ++kr;
  }
  return ker;
}

// Basis of the column space, returned as rows (the pivot columns of M).
template <class K>
Mat<K> image_basis(const Mat<K>& m) {
  Rref<K> rr = rref(m);
  Mat<K> img = zero_mat<K>(rr.rank, m.rows());
  for (int i = 0; i < rr.rank; ++i) img.row(i) = m.col(rr.pivots[i]).transpose();
  return img;
}

// One solution of M x = b, if consistent.
template <class K>
std::optional<Vec<K>> solve(const Mat<K>& m, const Vec<K>& b) {
  if (b.size() != m.rows()) throw InputError("solve: dimension mismatch");
  Mat<K> aug(m.rows(), m.cols() + 1);
  aug.leftCols(m.cols()) = m;
  aug.col(m.cols()) = b;
  Rref<K> rr = rref(aug);
  for (int i = 0; i < rr.rank; ++i)
    if (rr.pivots[i] == static_cast<int>(m.cols())) return std::nullopt;
  Vec<K> x = Vec<K>::Constant(m.cols(), K(0));
  for (int i = 0; i < rr.rank; ++i) x(rr.pivots[i]) = rr.r(i, m.cols());
  return x;
}

// Solve M X = B column by column; nullopt if any column is inconsistent.
template <class K>
std::optional<Mat<K>> solve_matrix(const Mat<K>& m, const Mat<K>& b) {
  if (b.rows() != m.rows()) throw InputError("solve_matrix: dimension mismatch");
  Mat<K> aug(m.rows(), m.cols() + b.cols());
  aug.leftCols(m.cols()) = m;
  aug.rightCols(b.cols()) = b;
  Rref<K> rr = rref(aug);
  Mat<K> x = zero_mat<K>(m.cols(), b.cols());
  for (int i = 0; i < rr.rank; ++i) {
    if (rr.pivots[i] >= static_cast<int>(m.cols())) return std::nullopt;
    x.row(rr.pivots[i]) = rr.r.row(i).segment(m.cols(), b.cols());
  }
  return x;
}

template <class K>
std::optional<Mat<K>> inverse_matrix(const Mat<K>& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  auto x = solve_matrix(m, identity_mat<K>(m.rows()));
  if (!x) return std::nullopt;
  if (rank(m) != m.rows()) return std::nullopt;
  return x;
}

template <class K>
bool is_invertible(const Mat<K>& m) {
  return m.rows() == m.cols() && rank(m) == m.rows();
}

// Kronecker product under row-major basis ordering: index of the first factor
// varies slowest, (u (x) v)_{i*nb+j} = u_i v_j.  (A (x) B)(u (x) v) = Au (x) Bv.
template <class K>
Mat<K> kronecker(const Mat<K>& a, const Mat<K>& b) {
  Mat<K> out = zero_mat<K>(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) == K(0)) continue;
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

template <class K>
Mat<K> vstack(const Mat<K>& a, const Mat<K>& b) {
  if (a.cols() != b.cols() && a.rows() != 0 && b.rows() != 0)
    throw InputError("vstack: column mismatch");
  Eigen::Index cols = a.rows() == 0 ? b.cols() : a.cols();
  Mat<K> out(a.rows() + b.rows(), cols);
  if (a.rows() > 0) out.topRows(a.rows()) = a;
  if (b.rows() > 0) out.bottomRows(b.rows()) = b;
  return out;
}

// A subspace of k^n, basis rows independent.
template <class K>
class Subspace {
 public:
  Subspace() : ambient_(0) {}
  Subspace(Eigen::Index ambient, Mat<K> basis_rows) : ambient_(ambient) {
    if (basis_rows.rows() == 0) {
      basis_ = zero_mat<K>(0, ambient);
      return;
    }
    if (basis_rows.cols() != ambient) throw InputError("Subspace: ambient mismatch");
    Rref<K> rr = rref(basis_rows);
    basis_ = rr.r.topRows(rr.rank);  // canonical rref basis
  }

  static Subspace full(Eigen::Index ambient) { return Subspace(ambient, identity_mat<K>(ambient)); }
  static Subspace zero(Eigen::Index ambient) { return Subspace(ambient, zero_mat<K>(0, ambient)); }

  Eigen::Index ambient() const { return ambient_; }
  Eigen::Index dim() const { return basis_.rows(); }
  const Mat<K>& basis() const { return basis_; }

  bool contains(const Vec<K>& v) const {
    return solve<K>(basis_.transpose(), v).has_value();
  }
  bool contains(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw InputError("Subspace: ambient mismatch");
    for (Eigen::Index i = 0; i < other.dim(); ++i)
      if (!contains(Vec<K>(other.basis_.row(i).transpose()))) return false;
    return true;
  }
  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_.rows() == b.basis_.rows() && a.basis_ == b.basis_;
  }

  friend Subspace sum(const Subspace& a, const Subspace& b) {
    if (a.ambient_ != b.ambient_) throw InputError("Subspace: ambient mismatch");
    return Subspace(a.ambient_, vstack(a.basis_, b.basis_));
  }

  friend Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient_ != b.ambient_) throw InputError("Subspace: ambient mismatch");
    // x = s^T a.basis = t^T b.basis: kernel of [a.basis^T | -b.basis^T]
    Mat<K> sys(a.ambient_, a.dim() + b.dim());
    sys.leftCols(a.dim()) = a.basis_.transpose();
    sys.rightCols(b.dim()) = -b.basis_.transpose();
    Mat<K> ker = kernel_basis(sys);
    Mat<K> rows = zero_mat<K>(ker.rows(), a.ambient_);
    for (Eigen::Index i = 0; i < ker.rows(); ++i)
      rows.row(i) = ker.row(i).head(a.dim()) * a.basis_;
    return Subspace(a.ambient_, rows);
  }

 private:
  Eigen::Index ambient_;
  Mat<K> basis_;
};

// Quotient k^n / U: projection q (t x n) with ker q = U, and a section s
// (n x t) with q s = id.
template <class K>
struct QuotientMaps {
  Mat<K> projection;
  Mat<K> section;
};

template <class K>
QuotientMaps<K> quotient_maps(const Subspace<K>& u) {
  const Eigen::Index n = u.ambient();
  Rref<K> rr = rref(u.basis());
  std::vector<bool> is_pivot(n, false);
  for (int p : rr.pivots) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (Eigen::Index c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(static_cast<int>(c));
  const Eigen::Index t = static_cast<Eigen::Index>(free_cols.size());
  // x -> x - sum_i x_{p_i} * basisrow_i kills the pivot coordinates and is
  // the identity on U-cosets; the free coordinates then parametrize k^n / U.
  Mat<K> reduce = identity_mat<K>(n);
  for (int i = 0; i < rr.rank; ++i) {
    int pc = rr.pivots[i];
    for (Eigen::Index j = 0; j < n; ++j) reduce(j, pc) = reduce(j, pc) - rr.r(i, j);
  }
  Mat<K> q = zero_mat<K>(t, n);
  for (Eigen::Index i = 0; i < t; ++i) q.row(i) = reduce.row(free_cols[i]);
  Mat<K> s = zero_mat<K>(n, t);
  for (Eigen::Index i = 0; i < t; ++i) s(free_cols[i], i) = K(1);
  return {q, s};
}

// Seeded scalar generator for randomized suites.
template <class K>
struct ScalarSampler;

template <>
struct ScalarSampler<Fp> {
  template <class Rng>
  static Fp sample(Rng& rng) {
    return Fp(static_cast<long long>(rng() % Fp::modulus()));
  }
};

template <>
struct ScalarSampler<Rational> {
  template <class Rng>
  static Rational sample(Rng& rng) {
    return Rational(static_cast<long long>(rng() % 7) - 3);
  }
};

template <class K, class Rng>
Mat<K> random_mat(Eigen::Index r, Eigen::Index c, Rng& rng) {
  Mat<K> m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = ScalarSampler<K>::sample(rng);
  return m;
}

}  // namespace sqz
