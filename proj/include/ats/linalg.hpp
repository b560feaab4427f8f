#pragma once
// Dense and sparse exact linear algebra over Scalar.

#include <optional>
#include <utility>
#include <vector>

#include "ats/scalar.hpp"

namespace ats {

using Vec = std::vector<Scalar>;
/// Sorted by index, no zero entries.
using SparseVec = std::vector<std::pair<int, Scalar>>;

Vec zero_vec(int n);
Vec unit_vec(int n, int i);
bool is_zero(const Vec& v);
SparseVec to_sparse(const Vec& v);
Vec to_dense(const SparseVec& v, int n);
void axpy(Vec& y, const Scalar& a, const Vec& x);  // y += a*x
void axpy(SparseVec& y, const Scalar& a, const SparseVec& x);
SparseVec scaled(const SparseVec& x, const Scalar& a);

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<Scalar> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
  static Matrix identity(int n);

  Scalar& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const Scalar& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
  Vec column(int c) const;
  void set_column(int c, const Vec& v);
  Matrix transpose() const;
  Vec apply(const Vec& v) const;
  bool is_identity() const;
  friend Matrix operator*(const Matrix& x, const Matrix& y);
  friend Matrix operator+(const Matrix& x, const Matrix& y);
  friend Matrix operator*(const Scalar& s, const Matrix& x);
  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

/// Kronecker product; the left factor indexes the outer block.
Matrix kron(const Matrix& x, const Matrix& y);
/// Throws ScalarError if singular.
Matrix inverse(const Matrix& m);
int rank(const Matrix& m);
/// Basis of {v : m v = 0}, in reduced form.
std::vector<Vec> kernel(const Matrix& m);

/// Row space kept in reduced row echelon form with unit pivots.
class Subspace {
 public:
  explicit Subspace(int ambient) : n_(ambient) {}
  int ambient() const { return n_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<Vec>& basis() const { return rows_; }
  const std::vector<int>& pivots() const { return piv_; }

  /// Reduces v against the basis; zero iff v lies in the span.
  Vec reduce(Vec v) const;
  bool contains(const Vec& v) const { return is_zero(reduce(v)); }
  /// Adds v if independent; returns whether the rank grew.
  bool add(const Vec& v);
  /// Coordinates of v (which must lie in the span) in basis().
  Vec coords(const Vec& v) const;

 private:
  int n_;
  std::vector<Vec> rows_;  // sorted by pivot column
  std::vector<int> piv_;
};

/// Intersection of two subspaces of the same ambient space.
Subspace intersect(const Subspace& a, const Subspace& b);

/// The linear map sending each pair.first to pair.second. The sources must
/// span the source space; inconsistent pairs yield nullopt.
std::optional<Matrix> solve_map(int src_dim, int dst_dim,
                                const std::vector<std::pair<Vec, Vec>>& pairs);

}  // namespace ats
