#include "ats/omega.hpp"
#include "ats/scan.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ats {

OmegaAlgebra::OmegaAlgebra(int dim, std::vector<std::string> labels)
    : dim_(dim), labels_(std::move(labels)) {
  if (labels_.empty())
    for (int i = 0; i < dim; ++i) labels_.push_back("e" + std::to_string(i));
  if (static_cast<int>(labels_.size()) != dim) throw std::invalid_argument("label count != dim");
}

size_t OmegaAlgebra::tuples(int arity) const {
  size_t n = 1;
  for (int i = 0; i < arity; ++i) n *= static_cast<size_t>(dim_);
  return n;
}

Operator& OmegaAlgebra::add_operator(const std::string& name, int arity) {
  if (has(name)) throw std::invalid_argument("duplicate operator " + name);
  if (arity < 0) throw std::invalid_argument("negative arity");
  ops_.push_back(Operator{name, arity, std::vector<SparseVec>(tuples(arity))});
  return ops_.back();
}

int OmegaAlgebra::find(const std::string& name) const {
  for (size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].name == name) return static_cast<int>(i);
  return -1;
}

const Operator& OmegaAlgebra::op(const std::string& name) const {
  int i = find(name);
  if (i < 0) throw std::invalid_argument("algebra has no operator " + name);
  return ops_[i];
}

Operator& OmegaAlgebra::op(const std::string& name) {
  int i = find(name);
  if (i < 0) throw std::invalid_argument("algebra has no operator " + name);
  return ops_[i];
}

void OmegaAlgebra::remove_operator(const std::string& name) {
  int i = find(name);
  if (i >= 0) ops_.erase(ops_.begin() + i);
}

size_t OmegaAlgebra::flat(const std::vector<int>& idx) const {
  size_t k = 0;
  for (int i : idx) k = k * dim_ + i;
  return k;
}

std::vector<int> OmegaAlgebra::unflat(size_t k, int arity) const {
  std::vector<int> idx(arity);
  for (int p = arity - 1; p >= 0; --p) {
    idx[p] = static_cast<int>(k % dim_);
    k /= dim_;
  }
  return idx;
}

SparseVec OmegaAlgebra::apply(const Operator& o, const std::vector<SparseVec>& args) const {
  if (static_cast<int>(args.size()) != o.arity) throw std::invalid_argument("arity mismatch for " + o.name);
  if (o.arity == 0) return o.table[0];
  for (const auto& a : args)
    if (a.empty()) return {};
  Vec acc(dim_);
  std::vector<size_t> pos(o.arity, 0);
  while (true) {
    size_t k = 0;
    Scalar c(1);
    for (int p = 0; p < o.arity; ++p) {
      k = k * dim_ + args[p][pos[p]].first;
      c *= args[p][pos[p]].second;
    }
    for (const auto& [j, x] : o.table[k]) acc[j] += c * x;
    int p = o.arity - 1;
    while (p >= 0 && ++pos[p] == args[p].size()) pos[p--] = 0;
    if (p < 0) break;
  }
  return to_sparse(acc);
}

Vec OmegaAlgebra::apply(const Operator& o, const std::vector<Vec>& args) const {
  std::vector<SparseVec> s;
  s.reserve(args.size());
  for (const auto& a : args) s.push_back(to_sparse(a));
  return to_dense(apply(o, s), dim_);
}

Matrix OmegaAlgebra::unary_matrix(const std::string& name) const {
  const Operator& o = op(name);
  if (o.arity != 1) throw std::invalid_argument(name + " is not unary");
  Matrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (const auto& [j, x] : o.table[i]) m.at(j, i) = x;
  return m;
}

GroupElement Grading::output_degree(const Operator& o, const std::vector<int>& idx) const {
  GroupElement d = group.identity();
  for (int i : idx) d = group.add(d, deg[i]);
  if (z_flip && o.name == "inv" && group.ncoords() > 0) {
    d.c[0] = -d.c[0];
    d = group.make(d.c);
  }
  return d;
}

std::vector<GroupElement> Grading::support() const {
  std::vector<GroupElement> s(deg.begin(), deg.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::vector<int> Grading::component(const GroupElement& g) const {
  std::vector<int> out;
  for (size_t i = 0; i < deg.size(); ++i)
    if (deg[i] == g) out.push_back(static_cast<int>(i));
  return out;
}

Grading trivial_grading(int dim, const AbelianGroup& group) {
  return Grading{group, std::vector<GroupElement>(dim, group.identity()), false};
}

void Report::fail(std::string what) {
  ok = false;
  ++failures;
  if (violations.size() < kMaxViolations) violations.push_back(std::move(what));
}

void Report::merge(const Report& o) {
  ok = ok && o.ok;
  checked += o.checked;
  failures += o.failures;
  for (const auto& v : o.violations)
    if (violations.size() < kMaxViolations) violations.push_back(v);
}

namespace {

using detail::scan;

std::string tuple_str(const OmegaAlgebra& A, const std::vector<int>& idx) {
  std::string s = "(";
  for (size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + A.labels()[idx[i]];
  return s + ")";
}

SparseVec map_sparse(const std::vector<SparseVec>& cols, const SparseVec& v) {
  SparseVec out;
  for (const auto& [i, x] : v) axpy(out, x, cols[i]);
  return out;
}

std::vector<SparseVec> sparse_columns(const Matrix& f) {
  std::vector<SparseVec> cols(f.cols);
  for (int i = 0; i < f.cols; ++i) cols[i] = to_sparse(f.column(i));
  return cols;
}

}  // namespace

Report check_grading(const OmegaAlgebra& A, const Grading& G, Exec exec) {
  Report total;
  if (static_cast<int>(G.deg.size()) != A.dim()) {
    total.fail("degree map has " + std::to_string(G.deg.size()) + " entries for dim " +
               std::to_string(A.dim()));
    return total;
  }
  for (const auto& o : A.ops()) {
    total.merge(scan(o.table.size(), exec, [&](size_t k) -> std::optional<std::string> {
      auto idx = A.unflat(k, o.arity);
      GroupElement want = G.output_degree(o, idx);
      for (const auto& [j, x] : o.table[k])
        if (G.deg[j] != want)
          return o.name + tuple_str(A, idx) + " has a component on " + A.labels()[j] +
                 " of degree " + G.group.format(G.deg[j]) + ", expected " + G.group.format(want);
      return std::nullopt;
    }));
  }
  return total;
}

Report check_morphism(const OmegaAlgebra& A, const OmegaAlgebra& B, const LinearMap& f,
                      const Grading* GA, const Grading* GB, Exec exec) {
  Report total;
  if (f.cols != A.dim() || f.rows != B.dim()) {
    total.fail("map shape does not match the algebras");
    return total;
  }
  auto cols = sparse_columns(f);
  for (const auto& o : A.ops()) {
    int bi = B.find(o.name);
    if (bi < 0 || B.ops()[bi].arity != o.arity) {
      total.fail("target lacks operator " + o.name);
      continue;
    }
    const Operator& ob = B.ops()[bi];
    total.merge(scan(o.table.size(), exec, [&](size_t k) -> std::optional<std::string> {
      auto idx = A.unflat(k, o.arity);
      SparseVec lhs = map_sparse(cols, o.table[k]);
      std::vector<SparseVec> args;
      for (int i : idx) args.push_back(cols[i]);
      SparseVec rhs = B.apply(ob, args);
      if (lhs != rhs) return "f(" + o.name + tuple_str(A, idx) + ") != " + o.name + "(f...)";
      return std::nullopt;
    }));
  }
  if (GA && GB) {
    total.merge(scan(A.dim(), exec, [&](size_t i) -> std::optional<std::string> {
      for (const auto& [j, x] : cols[i])
        if (GB->deg[j] != GA->deg[i])
          return "f(" + A.labels()[i] + ") leaves degree " + GA->group.format(GA->deg[i]);
      return std::nullopt;
    }));
  }
  return total;
}

Report check_involution(const OmegaAlgebra& A, const Grading* G, Exec exec) {
  Report total;
  if (!A.has("inv")) {
    total.fail("no involution operator");
    return total;
  }
  Matrix phi = A.unary_matrix("inv");
  auto cols = sparse_columns(phi);
  total.merge(scan(A.dim(), exec, [&](size_t i) -> std::optional<std::string> {
    SparseVec v = map_sparse(cols, cols[i]);
    if (v != SparseVec{{static_cast<int>(i), Scalar(1)}})
      return "inv(inv(" + A.labels()[i] + ")) != " + A.labels()[i];
    return std::nullopt;
  }));
  if (A.has("mul")) {
    const Operator& m = A.op("mul");
    int d = A.dim();
    total.merge(scan(m.table.size(), exec, [&](size_t k) -> std::optional<std::string> {
      int i = static_cast<int>(k / d), j = static_cast<int>(k % d);
      SparseVec lhs = map_sparse(cols, m.table[k]);
      SparseVec rhs = A.apply(m, {cols[j], cols[i]});
      if (lhs != rhs) return "inv(" + A.labels()[i] + A.labels()[j] + ") != inv(" +
                             A.labels()[j] + ")inv(" + A.labels()[i] + ")";
      return std::nullopt;
    }));
  }
  if (G) {
    const Operator& inv = A.op("inv");
    total.merge(scan(A.dim(), exec, [&](size_t i) -> std::optional<std::string> {
      GroupElement want = G->output_degree(inv, {static_cast<int>(i)});
      for (const auto& [j, x] : cols[i])
        if (G->deg[j] != want)
          return "inv(" + A.labels()[i] + ") not in degree " + G->group.format(want);
      return std::nullopt;
    }));
  }
  return total;
}

Report check_associative(const OmegaAlgebra& A, Exec exec) {
  const Operator& m = A.op("mul");
  size_t d = A.dim();
  return scan(d * d * d, exec, [&](size_t k) -> std::optional<std::string> {
    int i = static_cast<int>(k / (d * d)), j = static_cast<int>(k / d % d), l = static_cast<int>(k % d);
    SparseVec left, right;
    for (const auto& [p, x] : m.table[A.flat({i, j})]) axpy(left, x, m.table[A.flat({p, l})]);
    for (const auto& [p, x] : m.table[A.flat({j, l})]) axpy(right, x, m.table[A.flat({i, p})]);
    if (left != right) return "(xy)z != x(yz) at " + tuple_str(A, {i, j, l});
    return std::nullopt;
  });
}

Subspace ideal_closure(const OmegaAlgebra& A, const std::vector<Vec>& seed) {
  int d = A.dim();
  Subspace S(d);
  std::vector<Vec> queue;
  for (const auto& v : seed)
    if (S.add(v)) queue.push_back(v);
  for (size_t q = 0; q < queue.size() && S.rank() < d; ++q) {
    SparseVec v = to_sparse(queue[q]);
    for (const auto& o : A.ops()) {
      if (o.arity == 0) continue;
      size_t others = A.tuples(o.arity - 1);
      for (int p = 0; p < o.arity && S.rank() < d; ++p) {
        for (size_t r = 0; r < others && S.rank() < d; ++r) {
          // r enumerates the remaining slots; slot p carries v.
          std::vector<int> idx = A.unflat(r, o.arity - 1);
          idx.insert(idx.begin() + p, 0);
          Vec out(d);
          for (const auto& [i, x] : v) {
            idx[p] = i;
            for (const auto& [j, y] : o.table[A.flat(idx)]) out[j] += x * y;
          }
          if (!is_zero(out) && S.add(out)) queue.push_back(std::move(out));
        }
      }
    }
  }
  return S;
}

bool has_nontrivial_product(const OmegaAlgebra& A) {
  for (const auto& o : A.ops()) {
    if (o.arity < 2) continue;
    for (const auto& v : o.table)
      if (!v.empty()) return true;
  }
  return false;
}

int working_conductor(const OmegaAlgebra& A) {
  int n = 1;
  for (const auto& o : A.ops())
    for (const auto& v : o.table)
      for (const auto& [j, x] : v) n = std::lcm(n, x.conductor());
  return n;
}

Subspace center(const OmegaAlgebra& A) {
  int d = A.dim();
  Subspace Z(d);
  if (!A.has("mul")) return Z;
  const Operator& m = A.op("mul");
  Matrix C(d * d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      for (const auto& [k, x] : m.table[i * d + j]) C.at(j * d + k, i) += x;
      for (const auto& [k, x] : m.table[j * d + i]) C.at(j * d + k, i) -= x;
    }
  for (auto& v : kernel(C)) Z.add(v);
  return Z;
}

namespace {

std::vector<Scalar> eigen_candidates(int conductor) {
  std::vector<Scalar> c{Scalar(0), Scalar(2), Scalar(-2)};
  int n = std::lcm(conductor, 2);
  for (int k = 0; k < n; ++k) c.push_back(Scalar::root_of_unity(n, n, k));
  return c;
}

// Eigenvectors of the operator m for every candidate eigenvalue.
void push_eigenvectors(const Matrix& m, const std::vector<Scalar>& cands, std::vector<Vec>& out) {
  for (const auto& c : cands) {
    Matrix s = m;
    for (int i = 0; i < m.rows; ++i) s.at(i, i) -= c;
    for (auto& v : kernel(s)) out.push_back(std::move(v));
  }
}

bool proper(const Subspace& S, int d) { return S.rank() > 0 && S.rank() < d; }

}  // namespace

std::optional<Subspace> find_proper_ideal(const OmegaAlgebra& A, const SimplicityOptions& opt) {
  int d = A.dim();
  for (int i = 0; i < d; ++i) {
    Subspace S = ideal_closure(A, {unit_vec(d, i)});
    if (proper(S, d)) return S;
  }
  auto cands = eigen_candidates(working_conductor(A));
  if (A.has("mul")) {
    Subspace Z = center(A);
    if (Z.rank() > 1) {
      const auto& zb = Z.basis();
      std::vector<Vec> seeds;
      for (const auto& z : zb) {
        Matrix m(Z.rank(), Z.rank());
        for (int j = 0; j < Z.rank(); ++j) {
          Vec c = Z.coords(A.mul(z, zb[j]));
          for (int r = 0; r < Z.rank(); ++r) m.at(r, j) = c[r];
        }
        std::vector<Vec> ev;
        push_eigenvectors(m, cands, ev);
        for (const auto& e : ev) {
          Vec v(d);
          for (int r = 0; r < Z.rank(); ++r) axpy(v, e[r], zb[r]);
          seeds.push_back(std::move(v));
        }
      }
      for (const auto& s : seeds) {
        Subspace S = ideal_closure(A, {s});
        if (proper(S, d)) return S;
      }
    }
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<long> coef(-3, 3);
  for (int k = 0; k < opt.random_draws; ++k) {
    Vec v(d);
    for (auto& x : v) x = Scalar(coef(rng));
    if (is_zero(v)) continue;
    Subspace S = ideal_closure(A, {v});
    if (proper(S, d)) return S;
  }
  if (d <= opt.eigenspace_dim_cutoff) {
    std::vector<Vec> seeds;
    for (const auto& o : A.ops()) {
      if (o.arity < 2) continue;
      // x -> o(e_i, ..., x at slot p, ...) with the other slots on basis vectors.
      size_t others = A.tuples(o.arity - 1);
      for (int p = 0; p < o.arity; ++p)
        for (size_t r = 0; r < others; ++r) {
          std::vector<int> idx = A.unflat(r, o.arity - 1);
          idx.insert(idx.begin() + p, 0);
          Matrix m(d, d);
          for (int i = 0; i < d; ++i) {
            idx[p] = i;
            for (const auto& [j, x] : o.table[A.flat(idx)]) m.at(j, i) = x;
          }
          push_eigenvectors(m, cands, seeds);
        }
    }
    for (const auto& s : seeds) {
      Subspace S = ideal_closure(A, {s});
      if (proper(S, d)) return S;
    }
  }
  return std::nullopt;
}

bool is_simple(const OmegaAlgebra& A, const SimplicityOptions& opt) {
  if (A.dim() == 0 || !has_nontrivial_product(A)) return false;
  return !find_proper_ideal(A, opt).has_value();
}

OmegaAlgebra with_projections(const OmegaAlgebra& A, const Grading& G) {
  OmegaAlgebra P = A;
  for (const auto& g : G.support()) {
    Operator& o = P.add_operator("pi:" + G.group.format(g), 1);
    for (int i = 0; i < A.dim(); ++i)
      if (G.deg[i] == g) o.table[i] = {{i, Scalar(1)}};
  }
  return P;
}

bool is_graded_simple(const OmegaAlgebra& A, const Grading& G, const SimplicityOptions& opt) {
  return is_simple(with_projections(A, G), opt);
}

Grading coarsen(const Grading& G, const AbelianGroup& H,
                const std::function<GroupElement(const GroupElement&)>& alpha) {
  Grading out{H, {}, false};
  for (const auto& g : G.deg) out.deg.push_back(H.make(alpha(g).c));
  return out;
}

Grading coarsen_to_z(const Grading& G) {
  if (G.group.free_rank() < 1) throw GroupError("grading group has no Z slot");
  Grading out = coarsen(G, AbelianGroup(1, {}), [](const GroupElement& g) {
    return GroupElement{{g.c[0]}};
  });
  out.z_flip = G.z_flip;
  return out;
}

Grading coarsen_z_mod2(const Grading& G) {
  const AbelianGroup& A = G.group;
  if (A.free_rank() < 1) throw GroupError("grading group has no Z slot");
  std::vector<long> tors{2};
  tors.insert(tors.end(), A.torsion().begin(), A.torsion().end());
  AbelianGroup H(A.free_rank() - 1, tors);
  return coarsen(G, H, [&](const GroupElement& g) {
    std::vector<long> c(g.c.begin() + 1, g.c.begin() + A.free_rank());
    c.push_back(g.c[0]);
    c.insert(c.end(), g.c.begin() + A.free_rank(), g.c.end());
    return GroupElement{c};
  });
}

OmegaAlgebra opposite(const OmegaAlgebra& A) {
  OmegaAlgebra B = A;
  if (B.has("mul")) {
    Operator& m = B.op("mul");
    const Operator& a = A.op("mul");
    int d = A.dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m.table[i * d + j] = a.table[j * d + i];
  }
  return B;
}

std::pair<OmegaAlgebra, Grading> opposite(const OmegaAlgebra& A, const Grading& G) {
  Grading H = G;
  if (H.group.free_rank() >= 1)
    for (auto& g : H.deg) {
      g.c[0] = -g.c[0];
    }
  return {opposite(A), H};
}

OmegaAlgebra change_basis(const OmegaAlgebra& A, const Matrix& P) {
  Matrix Pinv = inverse(P);
  auto cols = sparse_columns(P);
  auto icols = sparse_columns(Pinv);
  OmegaAlgebra B(A.dim(), A.labels());
  for (const auto& o : A.ops()) {
    Operator& n = B.add_operator(o.name, o.arity);
    for (size_t k = 0; k < n.table.size(); ++k) {
      std::vector<SparseVec> args;
      for (int i : A.unflat(k, o.arity)) args.push_back(cols[i]);
      n.table[k] = map_sparse(icols, A.apply(o, args));
    }
  }
  return B;
}

std::pair<OmegaAlgebra, Grading> transport_grading(const OmegaAlgebra& B, const LinearMap& f,
                                                   const Grading& GA) {
  return {change_basis(B, f), GA};
}

}  // namespace ats
