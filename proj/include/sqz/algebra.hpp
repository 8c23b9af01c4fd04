#pragma once

// Finite-dimensional commutative unital k-algebras given by structure
// constants c_{ij}^k: e_i e_j = sum_k c_{ij}^k e_k.

#include "sqz/linalg.hpp"

#include <memory>
#include <string>
#include <vector>

namespace sqz {

template <class K>
class Algebra {
 public:
  // table[i][j] is the coordinate column of e_i * e_j.
  Algebra(std::vector<std::vector<Vec<K>>> table, Vec<K> unit, std::string name = "",
          std::optional<Mat<K>> radical_rows = std::nullopt, bool check = true)
      : dim_(static_cast<Eigen::Index>(table.size())),
        table_(std::move(table)),
        unit_(std::move(unit)),
        name_(std::move(name)),
        radical_rows_(std::move(radical_rows)) {
    if (check) validate();
  }

  Eigen::Index dim() const { return dim_; }
  const Vec<K>& unit() const { return unit_; }
  const std::string& name() const { return name_; }

  K structure_constant(int i, int j, int k) const { return table_[i][j](k); }

  Vec<K> mult_basis(int i, int j) const { return table_[i][j]; }

  Vec<K> mult(const Vec<K>& x, const Vec<K>& y) const {
    Vec<K> out = Vec<K>::Constant(dim_, K(0));
    for (Eigen::Index i = 0; i < dim_; ++i) {
      if (x(i) == K(0)) continue;
      for (Eigen::Index j = 0; j < dim_; ++j) {
        if (y(j) == K(0)) continue;
        out += x(i) * y(j) * table_[i][j];
      }
    }
    return out;
  }

  // Left multiplication by x as a matrix.
  Mat<K> left_mult(const Vec<K>& x) const {
    Mat<K> m = zero_mat<K>(dim_, dim_);
    for (Eigen::Index j = 0; j < dim_; ++j) {
      Vec<K> ej = Vec<K>::Constant(dim_, K(0));
      ej(j) = K(1);
      m.col(j) = mult(x, ej);
    }
    return m;
  }

  // Known radical basis (rows), when provided by the catalog.
  const std::optional<Mat<K>>& radical_rows() const { return radical_rows_; }

  bool same_as(const Algebra& other) const {
    if (dim_ != other.dim_ || unit_ != other.unit_) return false;
    for (Eigen::Index i = 0; i < dim_; ++i)
      for (Eigen::Index j = 0; j < dim_; ++j)
        if (table_[i][j] != other.table_[i][j]) return false;
    return true;
  }

  void validate() const {
    if (unit_.size() != dim_) throw ValidationError("algebra: unit has wrong length");
    if (static_cast<Eigen::Index>(table_.size()) != dim_)
      throw ValidationError("algebra: table has wrong shape");
    for (Eigen::Index i = 0; i < dim_; ++i) {
      if (static_cast<Eigen::Index>(table_[i].size()) != dim_)
        throw ValidationError("algebra: table has wrong shape");
      for (Eigen::Index j = 0; j < dim_; ++j)
        if (table_[i][j].size() != dim_) throw ValidationError("algebra: table has wrong shape");
    }
    for (Eigen::Index i = 0; i < dim_; ++i)
      for (Eigen::Index j = i + 1; j < dim_; ++j)
        if (table_[i][j] != table_[j][i])
          throw ValidationError("algebra: commutativity fails at pair (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
    for (Eigen::Index i = 0; i < dim_; ++i)
      for (Eigen::Index j = 0; j < dim_; ++j)
        for (Eigen::Index k = 0; k < dim_; ++k) {
          Vec<K> ek = Vec<K>::Constant(dim_, K(0));
          ek(k) = K(1);
          Vec<K> lhs = mult(mult_basis(static_cast<int>(i), static_cast<int>(j)), ek);
          Vec<K> ej = Vec<K>::Constant(dim_, K(0));
          ej(j) = K(1);
          Vec<K> rhs = mult(Vec<K>(Vec<K>::Unit(dim_, i)), mult(ej, ek));
          if (lhs != rhs)
            throw ValidationError("algebra: associativity fails at triple (" + std::to_string(i) +
                                  "," + std::to_string(j) + "," + std::to_string(k) + ")");
        }
    for (Eigen::Index j = 0; j < dim_; ++j) {
      Vec<K> ej = Vec<K>::Constant(dim_, K(0));
      ej(j) = K(1);
      if (mult(unit_, ej) != ej || mult(ej, unit_) != ej)
        throw ValidationError("algebra: unit fails at basis element " + std::to_string(j));
    }
  }

 private:
  Eigen::Index dim_;
  std::vector<std::vector<Vec<K>>> table_;
  Vec<K> unit_;
  std::string name_;
  std::optional<Mat<K>> radical_rows_;
};

template <class K>
using AlgebraPtr = std::shared_ptr<const Algebra<K>>;

// --- catalog ---------------------------------------------------------------

template <class K>
AlgebraPtr<K> ground_field() {
  std::vector<std::vector<Vec<K>>> t(1, std::vector<Vec<K>>(1));
  t[0][0] = Vec<K>::Constant(1, K(1));
  Vec<K> u = Vec<K>::Constant(1, K(1));
  return std::make_shared<Algebra<K>>(std::move(t), u, "k", zero_mat<K>(0, 1));
}

// k[x]/(x^n) with basis 1, x, ..., x^{n-1}.
template <class K>
AlgebraPtr<K> truncated_polynomial(int n) {
  std::vector<std::vector<Vec<K>>> t(n, std::vector<Vec<K>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec<K> v = Vec<K>::Constant(n, K(0));
      if (i + j < n) v(i + j) = K(1);
      t[i][j] = v;
    }
  Vec<K> u = Vec<K>::Constant(n, K(0));
  u(0) = K(1);
  Mat<K> rad = zero_mat<K>(n - 1, n);
  for (int i = 1; i < n; ++i) rad(i - 1, i) = K(1);
  return std::make_shared<Algebra<K>>(std::move(t), u, "k[x]/(x^" + std::to_string(n) + ")", rad);
}

// k[x,y]/(x,y)^2 with basis 1, x, y.
template <class K>
AlgebraPtr<K> fat_point() {
  int n = 3;
  std::vector<std::vector<Vec<K>>> t(n, std::vector<Vec<K>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec<K> v = Vec<K>::Constant(n, K(0));
      if (i == 0) v(j) = K(1);
      else if (j == 0) v(i) = K(1);
      t[i][j] = v;
    }
  Vec<K> u = Vec<K>::Constant(n, K(0));
  u(0) = K(1);
  Mat<K> rad = zero_mat<K>(2, 3);
  rad(0, 1) = K(1);
  rad(1, 2) = K(1);
  return std::make_shared<Algebra<K>>(std::move(t), u, "k[x,y]/(x,y)^2", rad);
}

// k x k with basis the two idempotents.
template <class K>
AlgebraPtr<K> split_pair() {
  int n = 2;
  std::vector<std::vector<Vec<K>>> t(n, std::vector<Vec<K>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec<K> v = Vec<K>::Constant(n, K(0));
      if (i == j) v(i) = K(1);
      t[i][j] = v;
    }
  Vec<K> u = Vec<K>::Constant(n, K(1));
  return std::make_shared<Algebra<K>>(std::move(t), u, "k x k", std::nullopt);
}

template <class K>
std::vector<AlgebraPtr<K>> catalog() {
  return {ground_field<K>(), truncated_polynomial<K>(2), truncated_polynomial<K>(3), fat_point<K>(),
          split_pair<K>()};
}

}  // namespace sqz
