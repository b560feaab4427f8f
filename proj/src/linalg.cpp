#include "ats/linalg.hpp"

#include <algorithm>

namespace ats {

Vec zero_vec(int n) { return Vec(n); }

Vec unit_vec(int n, int i) {
  Vec v(n);
  v[i] = Scalar(1);
  return v;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

SparseVec to_sparse(const Vec& v) {
  SparseVec s;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (!v[i].is_zero()) s.emplace_back(i, v[i]);
  return s;
}

Vec to_dense(const SparseVec& v, int n) {
  Vec d(n);
  for (const auto& [i, x] : v) d[i] = x;
  return d;
}

void axpy(Vec& y, const Scalar& a, const Vec& x) {
  if (a.is_zero()) return;
  for (size_t i = 0; i < y.size(); ++i)
    if (!x[i].is_zero()) y[i] += a * x[i];
}

void axpy(SparseVec& y, const Scalar& a, const SparseVec& x) {
  if (a.is_zero() || x.empty()) return;
  SparseVec out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, a * x[j].second);
      ++j;
    } else {
      Scalar s = y[i].second + a * x[j].second;
      if (!s.is_zero()) out.emplace_back(y[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

SparseVec scaled(const SparseVec& x, const Scalar& a) {
  SparseVec out;
  if (a.is_zero()) return out;
  out.reserve(x.size());
  for (const auto& [i, v] : x) out.emplace_back(i, a * v);
  return out;
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
  return m;
}

Vec Matrix::column(int c) const {
  Vec v(rows);
  for (int r = 0; r < rows; ++r) v[r] = at(r, c);
  return v;
}

void Matrix::set_column(int c, const Vec& v) {
  for (int r = 0; r < rows; ++r) at(r, c) = v[r];
}

Matrix Matrix::transpose() const {
  Matrix t(cols, rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
  return t;
}

Vec Matrix::apply(const Vec& v) const {
  Vec out(rows);
  for (int c = 0; c < cols; ++c) {
    if (v[c].is_zero()) continue;
    for (int r = 0; r < rows; ++r)
      if (!at(r, c).is_zero()) out[r] += at(r, c) * v[c];
  }
  return out;
}

bool Matrix::is_identity() const {
  if (rows != cols) return false;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (at(r, c) != Scalar(r == c ? 1 : 0)) return false;
  return true;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) throw ScalarError("matrix shape mismatch");
  Matrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Scalar& xik = x.at(i, k);
      if (xik.is_zero()) continue;
      for (int j = 0; j < y.cols; ++j)
        if (!y.at(k, j).is_zero()) z.at(i, j) += xik * y.at(k, j);
    }
  return z;
}

Matrix operator+(const Matrix& x, const Matrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw ScalarError("matrix shape mismatch");
  Matrix z = x;
  for (size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
  return z;
}

Matrix operator*(const Scalar& s, const Matrix& x) {
  Matrix z = x;
  for (auto& v : z.a) v *= s;
  return z;
}

Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix z(x.rows * y.rows, x.cols * y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      if (x.at(i, j).is_zero()) continue;
      for (int k = 0; k < y.rows; ++k)
        for (int l = 0; l < y.cols; ++l)
          if (!y.at(k, l).is_zero())
            z.at(i * y.rows + k, j * y.cols + l) = x.at(i, j) * y.at(k, l);
    }
  return z;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(std::vector<Vec>& m, int ncols) {
  std::vector<int> piv;
  size_t r = 0;
  for (int c = 0; c < ncols && r < m.size(); ++c) {
    size_t p = r;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[r], m[p]);
    Scalar inv = m[r][c].inverse();
    for (auto& x : m[r]) x *= inv;
    for (size_t q = 0; q < m.size(); ++q) {
      if (q == r || m[q][c].is_zero()) continue;
      Scalar f = -m[q][c];
      axpy(m[q], f, m[r]);
    }
    piv.push_back(c);
    ++r;
  }
  m.resize(r);
  return piv;
}

std::vector<Vec> rows_of(const Matrix& m) {
  std::vector<Vec> rows(m.rows, Vec(m.cols));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) rows[r][c] = m.at(r, c);
  return rows;
}

}  // namespace

Matrix inverse(const Matrix& m) {
  if (m.rows != m.cols) throw ScalarError("inverse of non-square matrix");
  int n = m.rows;
  std::vector<Vec> aug(n, Vec(2 * n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug[r][c] = m.at(r, c);
    aug[r][n + r] = Scalar(1);
  }
  auto piv = rref(aug, n);
  if (static_cast<int>(piv.size()) != n || piv.back() != n - 1)
    throw ScalarError("singular matrix");
  Matrix inv(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) inv.at(r, c) = aug[r][n + c];
  return inv;
}

int rank(const Matrix& m) {
  auto rows = rows_of(m);
  return static_cast<int>(rref(rows, m.cols).size());
}

std::vector<Vec> kernel(const Matrix& m) {
  auto rows = rows_of(m);
  auto piv = rref(rows, m.cols);
  std::vector<bool> is_piv(m.cols, false);
  for (int p : piv) is_piv[p] = true;
  std::vector<Vec> basis;
  for (int f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    Vec v(m.cols);
    v[f] = Scalar(1);
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -rows[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

Vec Subspace::reduce(Vec v) const {
  for (size_t r = 0; r < rows_.size(); ++r) {
    const Scalar& x = v[piv_[r]];
    if (x.is_zero()) continue;
    Scalar f = -x;
    axpy(v, f, rows_[r]);
  }
  return v;
}

bool Subspace::add(const Vec& v) {
  Vec w = reduce(v);
  int p = 0;
  while (p < n_ && w[p].is_zero()) ++p;
  if (p == n_) return false;
  Scalar inv = w[p].inverse();
  for (auto& x : w) x *= inv;
  // Keep the echelon form fully reduced at the new pivot.
  for (auto& row : rows_) {
    if (row[p].is_zero()) continue;
    Scalar f = -row[p];
    axpy(row, f, w);
  }
  auto pos = std::lower_bound(piv_.begin(), piv_.end(), p) - piv_.begin();
  piv_.insert(piv_.begin() + pos, p);
  rows_.insert(rows_.begin() + pos, std::move(w));
  return true;
}

Vec Subspace::coords(const Vec& v) const {
  Vec c(rows_.size());
  for (size_t r = 0; r < rows_.size(); ++r) c[r] = v[piv_[r]];
  return c;
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  // Solve sum x_i a_i = sum y_j b_j.
  int n = a.ambient();
  int ra = a.rank(), rb = b.rank();
  Matrix m(n, ra + rb);
  for (int i = 0; i < ra; ++i)
    for (int k = 0; k < n; ++k) m.at(k, i) = a.basis()[i][k];
  for (int j = 0; j < rb; ++j)
    for (int k = 0; k < n; ++k) m.at(k, ra + j) = -b.basis()[j][k];
  Subspace out(n);
  for (const auto& sol : kernel(m)) {
    Vec v(n);
    for (int i = 0; i < ra; ++i) axpy(v, sol[i], a.basis()[i]);
    out.add(v);
  }
  return out;
}

std::optional<Matrix> solve_map(int src_dim, int dst_dim,
                                const std::vector<std::pair<Vec, Vec>>& pairs) {
  std::vector<Vec> aug;
  aug.reserve(pairs.size());
  for (const auto& [s, d] : pairs) {
    Vec row(src_dim + dst_dim);
    for (int i = 0; i < src_dim; ++i) row[i] = s[i];
    for (int i = 0; i < dst_dim; ++i) row[src_dim + i] = d[i];
    aug.push_back(std::move(row));
  }
  auto piv = rref(aug, src_dim + dst_dim);
  Matrix f(dst_dim, src_dim);
  int covered = 0;
  for (size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] >= src_dim) return std::nullopt;  // 0 -> nonzero
    for (int c = 0; c < src_dim; ++c)
      if (c != piv[r] && !aug[r][c].is_zero()) return std::nullopt;
    for (int i = 0; i < dst_dim; ++i) f.at(i, piv[r]) = aug[r][src_dim + i];
    ++covered;
  }
  if (covered != src_dim) return std::nullopt;
  return f;
}

}  // namespace ats
