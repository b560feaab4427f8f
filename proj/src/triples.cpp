#include "ats/triples.hpp"

#include <array>
#include <map>
#include <random>

#include "ats/scan.hpp"

namespace ats {

using detail::scan;

namespace {

SparseVec unit_sparse(int i) { return {{i, Scalar(1)}}; }

GroupElement drop_first(const GroupElement& g) {
  return GroupElement{std::vector<long>(g.c.begin() + 1, g.c.end())};
}

GroupElement prepend(long z, const GroupElement& g) {
  GroupElement out{{z}};
  out.c.insert(out.c.end(), g.c.begin(), g.c.end());
  return out;
}

// Operator pairs (f, g) in End(W) x End(W) are packed as f row-major, then g.
struct PairOps {
  int d;
  size_t sq() const { return static_cast<size_t>(d) * d; }
  Matrix first(const Vec& v) const { return block(v, 0); }
  Matrix second(const Vec& v) const { return block(v, sq()); }
  Matrix block(const Vec& v, size_t off) const {
    Matrix m(d, d);
    for (size_t k = 0; k < sq(); ++k) m.a[k] = v[off + k];
    return m;
  }
  Vec pack(const Matrix& f, const Matrix& g) const {
    Vec v(2 * sq());
    for (size_t k = 0; k < sq(); ++k) {
      v[k] = f.a[k];
      v[sq() + k] = g.a[k];
    }
    return v;
  }
  Vec swap(const Vec& v) const { return pack(second(v), first(v)); }
};

// Degree of a homogeneous operator pair: entry (k, m) maps W_m into W_k.
GroupElement pair_degree(const Vec& v, int d, const Grading& g) {
  std::optional<GroupElement> out;
  size_t sq = static_cast<size_t>(d) * d;
  for (size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    size_t e = k % sq;
    GroupElement h = g.group.sub(g.deg[e / d], g.deg[e % d]);
    if (out && *out != h) throw std::logic_error("operator pair is not homogeneous");
    out = h;
  }
  return out ? *out : g.group.identity();
}

Matrix left_op(const TripleSystem& W, int x, int y) {
  int d = W.dim();
  Matrix m(d, d);
  for (int c = 0; c < d; ++c)
    for (const auto& [k, v] : W.tri().table[W.alg.flat({x, y, c})]) m.at(k, c) = v;
  return m;
}

// r(z, y) x = {x, y, z}
Matrix right_op(const TripleSystem& W, int z, int y) {
  int d = W.dim();
  Matrix m(d, d);
  for (int c = 0; c < d; ++c)
    for (const auto& [k, v] : W.tri().table[W.alg.flat({c, y, z})]) m.at(k, c) = v;
  return m;
}

Vec lmul(const OmegaAlgebra& A, const Vec& a, const Vec& b) { return A.mul(a, b); }

}  // namespace

TripleSystem make_triple(int dim, std::vector<std::string> labels) {
  TripleSystem W;
  if (labels.empty())
    for (int i = 0; i < dim; ++i) labels.push_back("w" + std::to_string(i));
  W.alg = OmegaAlgebra(dim, std::move(labels));
  W.alg.add_operator("tri", 3);
  return W;
}

TripleSystem scalar_triple() {
  TripleSystem W = make_triple(1);
  W.alg.op("tri").table[0] = unit_sparse(0);
  return W;
}

TripleSystem zero_triple(int dim) { return make_triple(dim); }

TripleSystem direct_sum(const TripleSystem& a, const TripleSystem& b) {
  int da = a.dim(), db = b.dim();
  std::vector<std::string> labels;
  for (const auto& l : a.alg.labels()) labels.push_back("(" + l + ",0)");
  for (const auto& l : b.alg.labels()) labels.push_back("(0," + l + ")");
  TripleSystem W = make_triple(da + db, labels);
  auto& t = W.alg.op("tri").table;
  for (size_t k = 0; k < a.tri().table.size(); ++k) {
    auto i = a.alg.unflat(k, 3);
    t[W.alg.flat(i)] = a.tri().table[k];
  }
  for (size_t k = 0; k < b.tri().table.size(); ++k) {
    auto i = b.alg.unflat(k, 3);
    SparseVec s;
    for (const auto& [j, x] : b.tri().table[k]) s.emplace_back(j + da, x);
    t[W.alg.flat({i[0] + da, i[1] + da, i[2] + da})] = std::move(s);
  }
  if (a.grading && b.grading && a.grading->group == b.grading->group) {
    Grading g{a.grading->group, a.grading->deg, false};
    g.deg.insert(g.deg.end(), b.grading->deg.begin(), b.grading->deg.end());
    W.grading = g;
  }
  return W;
}

TripleSystem triple_from(const OmegaAlgebra& A, const Grading& G) {
  if (G.group.free_rank() < 1) throw TripleError("grading has no Z slot");
  int n = A.dim();
  std::vector<int> wm, pos(n, -1);
  for (int i = 0; i < n; ++i) {
    long z = G.deg[i].c[0];
    if (z < -1 || z > 1) throw TripleError("Z part is not a 3-grading");
    if (z == -1) {
      pos[i] = static_cast<int>(wm.size());
      wm.push_back(i);
    }
  }
  const Operator& inv = A.op("inv");
  const Operator& mul = A.op("mul");
  for (int i : wm)
    for (const auto& [j, x] : inv.table[i])
      if (G.deg[j].c[0] != 1) throw TripleError("involution does not send A_-1 to A_1");

  std::vector<std::string> labels;
  for (int i : wm) labels.push_back(A.labels()[i]);
  int d = static_cast<int>(wm.size());
  TripleSystem W = make_triple(d, labels);
  AbelianGroup H = G.group.drop_z();
  if (H.ncoords() > 0) {
    Grading g{H, {}, false};
    for (int i : wm) g.deg.push_back(drop_first(G.deg[i]));
    W.grading = g;
  }
  auto& t = W.alg.op("tri").table;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      SparseVec ab = A.apply(mul, {unit_sparse(wm[a]), inv.table[wm[b]]});
      for (int c = 0; c < d; ++c) {
        SparseVec out;
        for (const auto& [k, x] : A.apply(mul, {ab, unit_sparse(wm[c])})) {
          if (pos[k] < 0) throw TripleError("x inv(y) z leaves A_-1");
          out.emplace_back(pos[k], x);
        }
        t[W.alg.flat({a, b, c})] = std::move(out);
      }
    }
  return W;
}

Report check_at2(const TripleSystem& W, const At2Options& opt, Exec exec) {
  int d = W.dim();
  const OmegaAlgebra& A = W.alg;
  const Operator& T = W.tri();
  auto value = [&](const std::array<int, 5>& t) -> std::optional<std::string> {
    auto [u, v, x, y, z] = t;
    SparseVec lhs = A.apply(T, {T.table[A.flat({u, v, x})], unit_sparse(y), unit_sparse(z)});
    SparseVec mid = A.apply(T, {unit_sparse(u), T.table[A.flat({y, x, v})], unit_sparse(z)});
    SparseVec rhs = A.apply(T, {unit_sparse(u), unit_sparse(v), T.table[A.flat({x, y, z})]});
    if (lhs == mid && mid == rhs) return std::nullopt;
    const auto& l = A.labels();
    return "AT2 identity fails at (" + l[u] + "," + l[v] + "," + l[x] + "," + l[y] + "," + l[z] + ")";
  };
  if (d == 0) return Report{};
  if (d <= opt.exhaustive_max_dim) {
    size_t n = 1;
    for (int i = 0; i < 5; ++i) n *= static_cast<size_t>(d);
    return scan(n, exec, [&](size_t k) {
      std::array<int, 5> t;
      for (int i = 4; i >= 0; --i) {
        t[i] = static_cast<int>(k % d);
        k /= d;
      }
      return value(t);
    });
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> pick(0, d - 1);
  std::vector<std::array<int, 5>> tuples(static_cast<size_t>(opt.samples));
  for (auto& t : tuples)
    for (auto& x : t) x = pick(rng);
  return scan(tuples.size(), exec, [&](size_t k) { return value(tuples[k]); });
}

Vec EnvelopeResult::unit() const {
  Vec u = e1;
  axpy(u, Scalar(1), e2);
  return u;
}

EnvelopeResult loos_envelope(const TripleSystem& W) {
  int d = W.dim();
  if (d < 1) throw TripleError("envelope of a zero-dimensional triple");
  PairOps P{d};
  Grading wg = W.grading ? *W.grading : trivial_grading(d);

  std::vector<std::vector<Vec>> lam(d, std::vector<Vec>(d)), rho(d, std::vector<Vec>(d));
  Subspace L(static_cast<int>(2 * P.sq())), R(static_cast<int>(2 * P.sq()));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      lam[i][j] = P.pack(left_op(W, i, j), left_op(W, j, i));
      rho[i][j] = P.pack(right_op(W, j, i), right_op(W, i, j));
      L.add(lam[i][j]);
      R.add(rho[i][j]);
    }
  Vec id_pair = P.pack(Matrix::identity(d), Matrix::identity(d));
  L.add(id_pair);
  R.add(id_pair);

  EnvelopeResult E;
  E.dim_w = d;
  E.dim_l = L.rank();
  E.dim_r = R.rank();
  E.l_basis = L.basis();
  E.r_basis = R.basis();
  int n = E.dim_l + 2 * d + E.dim_r;

  std::vector<std::string> labels;
  for (int i = 0; i < E.dim_l; ++i) labels.push_back("L" + std::to_string(i));
  for (const auto& l : W.alg.labels()) labels.push_back(l);
  for (const auto& l : W.alg.labels()) labels.push_back("bar(" + l + ")");
  for (int i = 0; i < E.dim_r; ++i) labels.push_back("R" + std::to_string(i));
  E.alg = OmegaAlgebra(n, labels);

  AbelianGroup GZ = W.grading ? W.grading->group.with_z() : AbelianGroup(1, {});
  E.grading = Grading{GZ, {}, true};
  for (const auto& v : E.l_basis) E.grading.deg.push_back(prepend(0, pair_degree(v, d, wg)));
  for (int i = 0; i < d; ++i) E.grading.deg.push_back(prepend(-1, wg.deg[i]));
  for (int i = 0; i < d; ++i) E.grading.deg.push_back(prepend(1, wg.deg[i]));
  for (const auto& v : E.r_basis) E.grading.deg.push_back(prepend(0, pair_degree(v, d, wg)));
  if (!W.grading)
    for (auto& g : E.grading.deg) g.c.resize(1);

  std::vector<Matrix> l1, l2, r1, r2;
  for (const auto& v : E.l_basis) {
    l1.push_back(P.first(v));
    l2.push_back(P.second(v));
  }
  for (const auto& v : E.r_basis) {
    r1.push_back(P.first(v));
    r2.push_back(P.second(v));
  }

  enum Block { kL, kW, kWbar, kR };
  auto block_of = [&](int i) -> std::pair<Block, int> {
    if (i < E.w_begin()) return {kL, i};
    if (i < E.wbar_begin()) return {kW, i - E.w_begin()};
    if (i < E.r_begin()) return {kWbar, i - E.wbar_begin()};
    return {kR, i - E.r_begin()};
  };
  auto place = [&](Vec& out, int begin, const Vec& c) {
    for (size_t k = 0; k < c.size(); ++k) out[begin + k] = c[k];
  };

  Operator& mul = E.alg.add_operator("mul", 2);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      auto [bp, ip] = block_of(p);
      auto [bq, iq] = block_of(q);
      Vec out(n);
      bool any = true;
      if (bp == kL && bq == kL) {
        place(out, E.l_begin(), L.coords(P.pack(l1[ip] * l1[iq], l2[iq] * l2[ip])));
      } else if (bp == kL && bq == kW) {
        place(out, E.w_begin(), l1[ip].column(iq));
      } else if (bp == kW && bq == kWbar) {
        place(out, E.l_begin(), L.coords(lam[ip][iq]));
      } else if (bp == kW && bq == kR) {
        place(out, E.w_begin(), r1[iq].column(ip));
      } else if (bp == kWbar && bq == kL) {
        place(out, E.wbar_begin(), l2[iq].column(ip));
      } else if (bp == kWbar && bq == kW) {
        place(out, E.r_begin(), R.coords(rho[ip][iq]));
      } else if (bp == kR && bq == kWbar) {
        place(out, E.wbar_begin(), r2[ip].column(iq));
      } else if (bp == kR && bq == kR) {
        place(out, E.r_begin(), R.coords(P.pack(r1[iq] * r1[ip], r2[ip] * r2[iq])));
      } else {
        any = false;
      }
      if (any) mul.table[E.alg.flat({p, q})] = to_sparse(out);
    }

  Operator& inv = E.alg.add_operator("inv", 1);
  for (int p = 0; p < n; ++p) {
    auto [bp, ip] = block_of(p);
    Vec out(n);
    switch (bp) {
      case kL: place(out, E.l_begin(), L.coords(P.swap(E.l_basis[ip]))); break;
      case kW: out[E.wbar_begin() + ip] = Scalar(1); break;
      case kWbar: out[E.w_begin() + ip] = Scalar(1); break;
      case kR: place(out, E.r_begin(), R.coords(P.swap(E.r_basis[ip]))); break;
    }
    inv.table[p] = to_sparse(out);
  }

  E.embedding = Matrix(n, d);
  for (int i = 0; i < d; ++i) E.embedding.at(E.w_begin() + i, i) = Scalar(1);
  E.e1 = Vec(n);
  place(E.e1, E.l_begin(), L.coords(id_pair));
  E.e2 = Vec(n);
  place(E.e2, E.r_begin(), R.coords(id_pair));
  return E;
}

Report check_envelope(const TripleSystem& W, const EnvelopeResult& E, Exec exec) {
  const OmegaAlgebra& A = E.alg;
  int n = A.dim(), d = W.dim();
  Report total = check_associative(A, exec);
  total.merge(check_involution(A, &E.grading, exec));
  total.merge(check_grading(A, E.grading, exec));

  // {a,b,c} = a inv(b) c through the embedding.
  const Operator& mul = A.op("mul");
  const Operator& inv = A.op("inv");
  total.merge(scan(static_cast<size_t>(d) * d * d, exec, [&](size_t k) -> std::optional<std::string> {
    auto idx = W.alg.unflat(k, 3);
    SparseVec ab = A.apply(mul, {unit_sparse(E.w_begin() + idx[0]), inv.table[E.w_begin() + idx[1]]});
    SparseVec got = A.apply(mul, {ab, unit_sparse(E.w_begin() + idx[2])});
    SparseVec want;
    for (const auto& [j, x] : W.tri().table[k]) want.emplace_back(E.w_begin() + j, x);
    if (got != want) return "embedding breaks the triple product at " + std::to_string(k);
    return std::nullopt;
  }));

  Report idem;
  Vec u = E.unit();
  auto eq = [](const Vec& a, const Vec& b) { return a == b; };
  if (!eq(A.mul(E.e1, E.e1), E.e1) || !eq(A.mul(E.e2, E.e2), E.e2)) idem.fail("e1 or e2 is not idempotent");
  if (!is_zero(A.mul(E.e1, E.e2)) || !is_zero(A.mul(E.e2, E.e1))) idem.fail("e1, e2 not orthogonal");
  Matrix phi = A.unary_matrix("inv");
  if (!eq(phi.apply(E.e1), E.e1) || !eq(phi.apply(E.e2), E.e2)) idem.fail("e1 or e2 not symmetric");
  // Peirce blocks: e_a v e_b = v exactly on the block (a, b).
  for (int i = 0; i < n; ++i) {
    Vec v = unit_vec(n, i);
    if (!eq(A.mul(u, v), v) || !eq(A.mul(v, u), v)) {
      idem.fail("e1 + e2 is not the unit at " + A.labels()[i]);
      break;
    }
    const Vec& left = (i < E.wbar_begin()) ? E.e1 : E.e2;
    const Vec& right = (i < E.w_begin() || (i >= E.wbar_begin() && i < E.r_begin())) ? E.e1 : E.e2;
    if (!eq(A.mul(A.mul(left, v), right), v)) {
      idem.fail("Peirce block mismatch at " + A.labels()[i]);
      break;
    }
  }
  idem.checked = n;
  total.merge(idem);
  return total;
}

bool round_trip_exact(const TripleSystem& W, const EnvelopeResult& E) {
  TripleSystem back = triple_from(E.alg, E.grading);
  if (back.dim() != W.dim() || back.tri().table != W.tri().table) return false;
  if (W.grading.has_value() != back.grading.has_value()) return false;
  return !W.grading || W.grading->deg == back.grading->deg;
}

bool triple_is_simple(const TripleSystem& W, const SimplicityOptions& opt) {
  bool t = W.dim() > 0 && is_simple(W.alg, opt);
  if (W.dim() == 0) return false;
  bool e = is_simple(loos_envelope(W).alg, opt);
  if (t != e)
    throw std::logic_error(std::string("triple simplicity ") + (t ? "true" : "false") +
                           " disagrees with its envelope");
  return t;
}

Reconstruction reconstruct_iso(const OmegaAlgebra& A, const Grading& G, Exec exec) {
  Reconstruction out;
  out.W = triple_from(A, G);
  if (out.W.dim() == 0) throw TripleError("A_-1 is zero");
  out.envelope = loos_envelope(out.W);
  const EnvelopeResult& E = out.envelope;
  int n = A.dim(), m = E.alg.dim();
  if (n != m) throw TripleError("dimension mismatch " + std::to_string(n) + " vs " + std::to_string(m));

  std::vector<int> wm, wp;
  for (int i = 0; i < n; ++i) {
    if (G.deg[i].c[0] == -1) wm.push_back(i);
    if (G.deg[i].c[0] == 1) wp.push_back(i);
  }
  Matrix phiA = A.unary_matrix("inv"), phiE = E.alg.unary_matrix("inv");
  // psi on A_-1 lands on the W block in the same order.
  auto psi_minus = [&](const Vec& a) {
    Vec v(m);
    for (size_t k = 0; k < wm.size(); ++k) v[E.w_begin() + k] = a[wm[k]];
    return v;
  };
  std::vector<std::pair<Vec, Vec>> pairs;
  std::map<int, Vec> image;
  for (int i : wm) image[i] = psi_minus(unit_vec(n, i));
  for (int i : wp) image[i] = phiE.apply(psi_minus(phiA.apply(unit_vec(n, i))));
  for (const auto& [i, v] : image) pairs.emplace_back(unit_vec(n, i), v);
  for (int a : wm)
    for (int b : wp) {
      pairs.emplace_back(lmul(A, unit_vec(n, a), unit_vec(n, b)), E.alg.mul(image[a], image[b]));
      pairs.emplace_back(lmul(A, unit_vec(n, b), unit_vec(n, a)), E.alg.mul(image[b], image[a]));
    }
  auto f = solve_map(n, m, pairs);
  if (!f) throw TripleError("products of A_-1 and A_1 do not determine a map on A_0");
  out.psi = *f;
  out.report = check_morphism(A, E.alg, out.psi, &G, &E.grading, exec);
  if (rank(out.psi) != n) out.report.fail("psi is not bijective");
  return out;
}

Report check_peirce(const OmegaAlgebra& A, const Grading& G) {
  int n = A.dim();
  std::vector<int> wm, w0, wp;
  for (int i = 0; i < n; ++i) {
    long z = G.deg[i].c[0];
    (z == -1 ? wm : z == 0 ? w0 : wp).push_back(i);
  }
  Subspace pm(n), mp(n);
  for (int a : wp)
    for (int b : wm) {
      pm.add(A.mul(unit_vec(n, a), unit_vec(n, b)));
      mp.add(A.mul(unit_vec(n, b), unit_vec(n, a)));
    }
  Report r;
  r.checked = 3;
  Subspace zero(n);
  for (int i : w0) zero.add(unit_vec(n, i));
  for (const auto& v : pm.basis())
    if (!zero.contains(v)) r.fail("A_1 A_-1 leaves A_0");
  for (const auto& v : mp.basis())
    if (!zero.contains(v)) r.fail("A_-1 A_1 leaves A_0");
  if (intersect(pm, mp).rank() != 0) r.fail("A_1 A_-1 and A_-1 A_1 intersect");
  if (pm.rank() + mp.rank() != static_cast<int>(w0.size()))
    r.fail("A_1 A_-1 + A_-1 A_1 has dimension " + std::to_string(pm.rank() + mp.rank()) +
           ", A_0 has " + std::to_string(w0.size()));
  return r;
}

OmegaAlgebra corner(const OmegaAlgebra& A, const Vec& e) {
  int n = A.dim();
  if (A.mul(e, e) != e) throw TripleError("corner of a non-idempotent");
  Matrix phi = A.unary_matrix("inv");
  if (phi.apply(e) != e) throw TripleError("corner of a non-symmetric idempotent");
  Subspace C(n);
  for (int i = 0; i < n; ++i) C.add(A.mul(A.mul(e, unit_vec(n, i)), e));
  const auto& b = C.basis();
  int k = C.rank();
  OmegaAlgebra out(k);
  Operator& mul = out.add_operator("mul", 2);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) mul.table[out.flat({i, j})] = to_sparse(C.coords(A.mul(b[i], b[j])));
  Operator& inv = out.add_operator("inv", 1);
  for (int i = 0; i < k; ++i) inv.table[i] = to_sparse(C.coords(phi.apply(b[i])));
  return out;
}

LinearMap extend_automorphism(const TripleSystem& W, const EnvelopeResult& E, const LinearMap& psi) {
  int d = W.dim(), n = E.alg.dim();
  if (psi.rows != d || psi.cols != d || rank(psi) != d) throw TripleError("psi is not bijective on W");
  Report r = check_morphism(W.alg, W.alg, psi);
  if (!r.ok) throw TripleError("psi is not a triple automorphism: " + r.violations.front());
  Matrix phi = E.alg.unary_matrix("inv");
  std::vector<Vec> on_w(d), on_wbar(d);
  for (int i = 0; i < d; ++i) {
    on_w[i] = E.embedding.apply(psi.column(i));
    on_wbar[i] = phi.apply(on_w[i]);
  }
  std::vector<std::pair<Vec, Vec>> pairs;
  for (int i = 0; i < d; ++i) {
    pairs.emplace_back(unit_vec(n, E.w_begin() + i), on_w[i]);
    pairs.emplace_back(unit_vec(n, E.wbar_begin() + i), on_wbar[i]);
  }
  pairs.emplace_back(E.e1, E.e1);
  pairs.emplace_back(E.e2, E.e2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      pairs.emplace_back(E.alg.mul(unit_vec(n, E.w_begin() + i), unit_vec(n, E.wbar_begin() + j)),
                         E.alg.mul(on_w[i], on_wbar[j]));
      pairs.emplace_back(E.alg.mul(unit_vec(n, E.wbar_begin() + i), unit_vec(n, E.w_begin() + j)),
                         E.alg.mul(on_wbar[i], on_w[j]));
    }
  auto f = solve_map(n, n, pairs);
  if (!f) throw TripleError("A(psi) is not well defined on degree 0");
  return *f;
}

LinearMap random_triple_automorphism(const TripleSystem& W, const EnvelopeResult& E, uint64_t seed) {
  const OmegaAlgebra& A = E.alg;
  int n = A.dim(), d = W.dim();
  Matrix phi = A.unary_matrix("inv");
  std::vector<Vec> skew;
  Subspace S(n);
  for (int i = 0; i < n; ++i) {
    // Degree (0, e) keeps the automorphism graded.
    if ((i >= E.w_begin() && i < E.r_begin()) || E.grading.deg[i] != E.grading.group.identity()) continue;
    Vec v = unit_vec(n, i);
    axpy(v, Scalar(-1), phi.apply(unit_vec(n, i)));
    if (S.add(v)) skew.push_back(v);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coef(-2, 2);
  Vec one = E.unit();
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec s(n);
    for (const auto& v : skew) axpy(s, Scalar(coef(rng)), v);
    Vec plus = one, minus = one;
    axpy(plus, Scalar(1), s);
    axpy(minus, Scalar(-1), s);
    // Left multiplication by 1 + s; its inverse applied to 1 gives (1 + s)^-1.
    Matrix lp(n, n);
    for (int i = 0; i < n; ++i) lp.set_column(i, A.mul(plus, unit_vec(n, i)));
    Matrix lpi;
    try {
      lpi = inverse(lp);
    } catch (const ScalarError&) {
      continue;
    }
    Vec u = A.mul(minus, lpi.apply(one));
    Matrix lu(n, n);
    for (int i = 0; i < n; ++i) lu.set_column(i, A.mul(u, unit_vec(n, i)));
    Vec uinv = inverse(lu).apply(one);
    LinearMap psi(d, d);
    for (int i = 0; i < d; ++i) {
      Vec img = A.mul(A.mul(u, unit_vec(n, E.w_begin() + i)), uinv);
      for (int k = 0; k < n; ++k)
        if (!img[k].is_zero() && (k < E.w_begin() || k >= E.wbar_begin()))
          throw std::logic_error("conjugation left the W block");
      for (int k = 0; k < d; ++k) psi.at(k, i) = img[E.w_begin() + k];
    }
    return psi;
  }
  throw TripleError("no invertible Cayley transform found");
}

}  // namespace ats
