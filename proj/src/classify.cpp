#include "ats/classify.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace ats {

// ---- block multisets ------------------------------------------------------

GroupElement coset_rep(const GroupElement& g, const Subgroup& T) {
  const AbelianGroup& G = T.parent();
  GroupElement best = g;
  bool first = true;
  for (const auto& u : T.elements()) {
    GroupElement x = G.add(g, u);
    if (first || x < best) best = x;
    first = false;
  }
  return best;
}

int XiMultiset::total() const {
  int n = 0;
  for (const auto& [g, k] : counts) n += k;
  return n;
}

std::string XiMultiset::str() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [g, k] : counts) {
    s += (first ? "" : ", ") + G.format(g) + "T:" + std::to_string(k);
    first = false;
  }
  return s + "}";
}

XiMultiset xi_multiset(const std::vector<long>& kappa, const std::vector<GroupElement>& gamma,
                       const Subgroup& T) {
  XiMultiset x{T.parent(), T, {}};
  for (const auto& h : kappa_expand(kappa, gamma)) ++x.counts[coset_rep(h, T)];
  return x;
}

XiMultiset xi_shift(const XiMultiset& x, const GroupElement& g) {
  XiMultiset y{x.G, x.T, {}};
  for (const auto& [h, k] : x.counts) y.counts[coset_rep(x.G.add(g, h), x.T)] += k;
  return y;
}

XiMultiset xi_inverse(const XiMultiset& x) {
  XiMultiset y{x.G, x.T, {}};
  for (const auto& [h, k] : x.counts) y.counts[coset_rep(x.G.neg(h), x.T)] += k;
  return y;
}

std::vector<GroupElement> xi_shifts(const XiMultiset& x, const XiMultiset& y) {
  std::vector<GroupElement> out;
  if (x.total() != y.total() || x.counts.empty()) return out;
  std::set<GroupElement> cand;
  const GroupElement& x0 = x.counts.begin()->first;
  for (const auto& [h, k] : y.counts) cand.insert(coset_rep(x.G.sub(x0, h), x.T));
  GroupElement e = x.G.identity();
  if (cand.count(e) && xi_shift(y, e) == x) out.push_back(e);
  for (const auto& g : cand)
    if (g != e && xi_shift(y, g) == x) out.push_back(g);
  return out;
}

std::optional<GroupElement> xi_shift_equal(const XiMultiset& x, const XiMultiset& y) {
  auto s = xi_shifts(x, y);
  if (s.empty()) return std::nullopt;
  return s.front();
}

// ---- labels and decisions -------------------------------------------------

std::string ClassLabel::str() const {
  const AbelianGroup& G = p.G;
  std::ostringstream o;
  o << family_name(p.family) << " |T|=" << p.T.size();
  if (p.family == Family::ExchangeDivision) o << " t=" << G.format(p.t);
  auto side = [&](const BlockShape& b) {
    std::string s = "[";
    for (size_t i = 0; i < b.kappa.size(); ++i)
      s += (i ? " " : "") + std::to_string(b.kappa[i]) + "@" + G.format(b.gamma[i]);
    return s + "]";
  };
  o << " k0/g0=" << side(p.b0) << " k1/g1=" << side(p.b1);
  if (p.family != Family::ExchangePair) o << " delta=" << p.delta << " g=" << G.format(p.g);
  return o.str();
}

ClassLabel make_label(MatrixParams p, std::string name) {
  normalize(p);
  validate(p);
  ClassLabel L;
  L.p = p;
  L.support = p.family == Family::ExchangeDivision ? p.T.adjoin(p.t) : p.T;
  L.xi0 = xi_multiset(p.b0.kappa, p.b0.gamma, L.support);
  L.xi1 = xi_multiset(p.b1.kappa, p.b1.gamma, L.support);
  L.name = std::move(name);
  return L;
}

namespace {

std::vector<GroupElement> common(const std::vector<GroupElement>& a, const std::vector<GroupElement>& b) {
  std::vector<GroupElement> out;
  for (const auto& x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) out.push_back(x);
  return out;
}

Decision no(std::string why) { return Decision{false, Certificate{false, {}, std::move(why)}}; }

// Shift g'' with Xi_i = g'' Xi'_i and g = g' g''^-2.
Decision shifted_with_g(const ClassLabel& a, const ClassLabel& b) {
  const AbelianGroup& G = a.p.G;
  auto s = common(xi_shifts(a.xi0, b.xi0), xi_shifts(a.xi1, b.xi1));
  if (s.empty()) return no("no g'' with Xi(kappa_i, gamma_i) = g'' Xi(kappa'_i, gamma'_i)");
  for (const auto& h : s)
    if (G.sub(b.p.g, G.times(h, 2)) == a.p.g)
      return Decision{true, Certificate{false, h, "shift by " + G.format(h)}};
  return no("g = g' g''^-2 fails for every admissible shift g''");
}

}  // namespace

Decision decide_iso(const ClassLabel& a, const ClassLabel& b) {
  const MatrixParams &p = a.p, &q = b.p;
  if (!(p.G == q.G)) return no("different grading groups");
  if (p.family != q.family) return no("families differ: " + family_name(p.family) + " vs " + family_name(q.family));
  switch (p.family) {
    case Family::ExchangePair: {
      if (!p.T.same_set(q.T)) return no("T = T'");
      if (!p.beta.equals(q.beta)) return no("beta = beta'");
      auto s = common(xi_shifts(a.xi0, b.xi0), xi_shifts(a.xi1, b.xi1));
      if (!s.empty()) return Decision{true, Certificate{false, s.front(), "shift by " + p.G.format(s.front())}};
      // D(T, beta)^op = D(T, beta^-1) = D(T, beta) on elementary 2-groups.
      if (p.T.is_elementary_2()) {
        auto o = common(xi_shifts(a.xi0, xi_inverse(b.xi0)), xi_shifts(a.xi1, xi_inverse(b.xi1)));
        if (!o.empty())
          return Decision{true, Certificate{true, o.front(), "opposite, shift by " + p.G.format(o.front())}};
      }
      return no("no g with Xi_i = g Xi'_i or Xi_i = g Xi'^-1_i");
    }
    case Family::SimpleAlgebra:
      if (!p.T.same_set(q.T)) return no("T = T'");
      if (!p.beta.equals(q.beta)) return no("beta = beta'");
      if (p.delta != q.delta) return no("delta = delta'");
      return shifted_with_g(a, b);
    case Family::ExchangeDivision:
      if (!a.support.same_set(b.support)) return no("T<t> = T'<t'>");
      if (p.t != q.t) return no("t = t'");
      if (!extend_beta(p.beta, p.t).equals(extend_beta(q.beta, q.t))) return no("beta^[t] = beta'^[t']");
      return shifted_with_g(a, b);
  }
  return no("unknown family");
}

// ---- structured search ----------------------------------------------------

namespace {

struct Mono {
  int s = -1;
  Scalar c;
};

struct Side {
  const ClassLabel* label;
  const BuiltAlgebra* built;
  std::vector<GroupElement> h;
  int k0 = 0, n = 0;
  std::map<std::pair<int, int>, Mono> phi;
};

Side make_side(const ClassLabel& L, const BuiltAlgebra& B) {
  Side s{&L, &B, {}, 0, 0, {}};
  s.h = kappa_expand(L.p.b0.kappa, L.p.b0.gamma);
  s.k0 = static_cast<int>(s.h.size());
  auto h1 = kappa_expand(L.p.b1.kappa, L.p.b1.gamma);
  s.h.insert(s.h.end(), h1.begin(), h1.end());
  s.n = static_cast<int>(s.h.size());
  int q = B.M.D.size();
  for (const auto& [k, x] : B.Phi) {
    int ij = k / q;
    s.phi[{ij / s.n, ij % s.n}] = Mono{k % q, x};
  }
  return s;
}

std::optional<Scalar> sqrt_root_of_unity(const Scalar& r) {
  int m = 2 * std::lcm(r.conductor(), 2);
  for (int k = 0; k < m; ++k) {
    Scalar z = Scalar::root_of_unity(m, m, k);
    if (z * z == r) return z;
  }
  return std::nullopt;
}

struct Candidate {
  int branch;  // 0 plain, 1 opposite (exchange pair), 2 sign character (exchange division)
  int zsel;    // 0: z = 1, 1: z = Y_t
  std::vector<int> pi;
  std::vector<int> u;  // support indices
};

class Searcher {
 public:
  Searcher(const Side& a, const Side& b) : a_(a), b_(b), D_(a.built->M.D) {
    fam_ = a.label->p.family;
    const AbelianGroup& G = a.label->p.G;
    if (fam_ == Family::ExchangePair && a.label->p.T.is_elementary_2()) theta_ = transpose_form(D_).signs();
    if (fam_ == Family::ExchangeDivision) yt_ = D_.support.index_of(a.label->p.t);
    (void)G;
  }

  Mono mul(const Mono& x, const Mono& y) const {
    return Mono{D_.prod(x.s, y.s), x.c * y.c * D_.coef(x.s, y.s)};
  }
  Mono inv(int u) const {
    auto [s, k] = D_.inverse(u);
    return Mono{s, k};
  }
  Mono star(const Mono& x) const { return Mono{x.s, x.c * Scalar(D_.inv_sign[x.s])}; }
  Mono rho(int branch, const Mono& x) const {
    if (branch == 1) return Mono{x.s, x.c * Scalar(theta_[x.s])};
    if (branch == 2 && !D_.base.contains(D_.support.elements()[x.s])) return Mono{x.s, -x.c};
    return x;
  }

  // mu_i solving P^* Phi_B P = z rho(Phi_A); empty if the patterns disagree.
  std::optional<std::vector<Scalar>> solve_scalars(const Candidate& c) const {
    int n = a_.n;
    std::vector<Scalar> mu(n, Scalar(0));
    std::vector<bool> set(n, false);
    Mono z = c.zsel == 0 ? Mono{D_.identity_index(), Scalar(1)} : Mono{yt_, Scalar(1)};
    std::map<std::pair<int, int>, Scalar> r;
    for (const auto& [ij, x] : a_.phi) {
      auto [i, j] = ij;
      auto it = b_.phi.find({c.pi[i], c.pi[j]});
      if (it == b_.phi.end()) return std::nullopt;
      Mono lhs = mul(mul(star(Mono{c.u[i], Scalar(1)}), it->second), Mono{c.u[j], Scalar(1)});
      Mono rhs = mul(z, rho(c.branch, x));
      if (lhs.s != rhs.s) return std::nullopt;
      r[ij] = rhs.c / lhs.c;
    }
    if (a_.phi.size() != b_.phi.size()) return std::nullopt;
    for (const auto& [ij, v] : r) {
      auto [i, j] = ij;
      if (set[i] || set[j]) continue;
      if (i == j) {
        auto s = sqrt_root_of_unity(v);
        if (!s) return std::nullopt;
        mu[i] = *s;
        set[i] = true;
      } else {
        if (r.at({j, i}) != v) return std::nullopt;
        mu[i] = Scalar(1);
        mu[j] = v;
        set[i] = set[j] = true;
      }
    }
    return mu;
  }

  std::optional<LinearMap> build(const Candidate& c) const {
    int n = a_.n, q = D_.size();
    int N = n * n * q;
    std::vector<Scalar> mu(n, Scalar(1));
    if (fam_ != Family::ExchangePair) {
      auto m = solve_scalars(c);
      if (!m) return std::nullopt;
      mu = *m;
    }
    const MatrixAlgebra& MB = b_.built->M;
    int dim = b_.built->alg.dim();
    LinearMap f(dim, a_.built->alg.dim());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int s = 0; s < q; ++s) {
          int col = a_.built->M.index(s, i, j);
          Mono x{s, Scalar(1)};
          if (c.branch == 1) {
            // chi(X_s E_ij) = X_{u_j} theta(X_s) X_{u_i}^-1 E_{pi j, pi i}
            Mono y = mul(mul(Mono{c.u[j], Scalar(1)}, rho(1, x)), inv(c.u[i]));
            int row = MB.index(y.s, c.pi[j], c.pi[i]);
            f.at(N + row, col) = y.c;
            f.at(row, N + col) = y.c;
            continue;
          }
          Mono y = mul(mul(Mono{c.u[i], Scalar(1)}, rho(c.branch, x)), inv(c.u[j]));
          Scalar k = y.c * mu[i] / mu[j];
          int row = MB.index(y.s, c.pi[i], c.pi[j]);
          f.at(row, col) = k;
          if (fam_ == Family::ExchangePair) f.at(N + row, N + col) = k;
        }
    return f;
  }

  bool verify(const LinearMap& f) const {
    const BuiltAlgebra &A = *a_.built, &B = *b_.built;
    return check_morphism(A.alg, B.alg, f, &A.grading, &B.grading, Exec::Serial).ok;
  }

  // Candidates in a fixed order; false if the cap was hit.
  bool enumerate(const std::optional<Certificate>& hint, long cap, std::vector<Candidate>& out) const {
    const AbelianGroup& G = a_.label->p.G;
    const Subgroup& S = D_.support;
    std::vector<int> branches;
    if (fam_ == Family::ExchangePair) {
      if (!hint || !hint->opposite) branches.push_back(0);
      if (!theta_.empty() && (!hint || hint->opposite)) branches.push_back(1);
    } else if (fam_ == Family::SimpleAlgebra) {
      branches.push_back(0);
    } else {
      branches = {0, 2};
    }
    std::vector<int> zs = fam_ == Family::ExchangeDivision ? std::vector<int>{0, 1} : std::vector<int>{0};
    int n = a_.n;
    for (int br : branches) {
      bool opp = br == 1;
      // u_i = c0 + h_i - h'_{pi i}, or c0 - h_i - h'_{pi i} on the opposite branch.
      auto u_of = [&](const GroupElement& c0, int i, int j) {
        return opp ? G.sub(G.sub(c0, a_.h[i]), b_.h[j]) : G.sub(G.add(c0, a_.h[i]), b_.h[j]);
      };
      std::set<GroupElement> c0s;
      if (hint) {
        GroupElement base = opp ? hint->shift : G.neg(hint->shift);
        for (const auto& v : S.elements()) c0s.insert(G.add(base, v));
      } else {
        for (int j = 0; j < n; ++j)
          for (const auto& v : S.elements())
            c0s.insert(opp ? G.add(G.add(a_.h[0], b_.h[j]), v) : G.add(G.sub(b_.h[j], a_.h[0]), v));
      }
      for (const auto& c0 : c0s)
        for (int zsel : zs) {
          std::vector<int> pi(n, -1), u(n, -1);
          std::vector<bool> used(n, false);
          std::function<bool(int)> rec = [&](int i) -> bool {
            if (i == n) {
              if (static_cast<long>(out.size()) >= cap) return false;
              out.push_back(Candidate{br, zsel, pi, u});
              return true;
            }
            bool top = i < a_.k0;
            for (int j = top ? 0 : b_.k0; j < (top ? b_.k0 : b_.n); ++j) {
              if (used[j]) continue;
              int ui = S.index_of(u_of(c0, i, j));
              if (ui < 0) continue;
              used[j] = true;
              pi[i] = j;
              u[i] = ui;
              if (!rec(i + 1)) return false;
              used[j] = false;
            }
            return true;
          };
          if (!rec(0)) return false;
        }
    }
    return true;
  }

 private:
  const Side& a_;
  const Side& b_;
  const DivisionAlgebra& D_;
  Family fam_;
  std::vector<int> theta_;
  int yt_ = -1;
};

bool same_division(const ClassLabel& a, const ClassLabel& b) {
  const MatrixParams &p = a.p, &q = b.p;
  if (p.family != q.family || !p.T.same_set(q.T) || !p.beta.equals(q.beta)) return false;
  if (p.T.gens() != q.T.gens()) return false;  // same realization basis
  return p.family != Family::ExchangeDivision || p.t == q.t;
}

}  // namespace

SearchResult search_isomorphism(const ClassLabel& a, const BuiltAlgebra& A, const ClassLabel& b,
                                const BuiltAlgebra& B, const SearchOptions& opt) {
  SearchResult res;
  if (!same_division(a, b)) return res;  // outside the structured family
  Side sa = make_side(a, A), sb = make_side(b, B);
  if (sa.n != sb.n || sa.k0 != sb.k0 || A.alg.dim() != B.alg.dim()) {
    res.exhausted = true;  // no row bijection preserves the Z-blocks
    return res;
  }
  Searcher S(sa, sb);
  std::vector<Candidate> cands;
  bool complete = S.enumerate(opt.hint, opt.cap, cands);
  res.candidates = static_cast<long>(cands.size());
  long n = res.candidates;
  long best = n;
  if (opt.exec == Exec::Serial) {
    for (long k = 0; k < n && best == n; ++k) {
      auto f = S.build(cands[k]);
      if (f && S.verify(*f)) best = k;
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1) reduction(min : best)
    for (long k = 0; k < n; ++k) {
      if (k > best) continue;
      auto f = S.build(cands[k]);
      if (f && S.verify(*f)) best = std::min(best, k);
    }
  }
  if (best < n) {
    res.map = S.build(cands[best]);
    return res;
  }
  res.exhausted = complete;
  return res;
}

LinearMap witness_isomorphism(const ClassLabel& a, const ClassLabel& b, const Certificate& cert) {
  BuiltAlgebra A = build_M_inv(a.p), B = build_M_inv(b.p);
  SearchOptions opt;
  opt.hint = cert;
  auto r = search_isomorphism(a, A, b, B, opt);
  if (!r.map) {
    opt.hint.reset();
    r = search_isomorphism(a, A, b, B, opt);
  }
  if (!r.map)
    throw std::logic_error("no verified witness for " + a.str() + " ~ " + b.str() + " (" + cert.reason + ")");
  return *r.map;
}

// ---- intrinsic invariants -------------------------------------------------

std::map<std::pair<GroupElement, GroupElement>, Scalar> extract_bicharacter(const OmegaAlgebra& A,
                                                                            const Grading& G) {
  int n = A.dim();
  std::map<GroupElement, int> at;
  for (int i = 0; i < n; ++i)
    if (!at.emplace(G.deg[i], i).second) throw std::invalid_argument("component of dimension > 1");
  for (int i = 0; i < n; ++i) {
    Matrix m(n, n);
    for (int j = 0; j < n; ++j) m.set_column(j, A.mul(unit_vec(n, i), unit_vec(n, j)));
    if (rank(m) != n) throw std::invalid_argument("homogeneous element not invertible");
  }
  std::map<std::pair<GroupElement, GroupElement>, Scalar> beta;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec xy = A.mul(unit_vec(n, i), unit_vec(n, j)), yx = A.mul(unit_vec(n, j), unit_vec(n, i));
      int k = 0;
      while (xy[k].is_zero()) ++k;
      beta[{G.deg[i], G.deg[j]}] = xy[k] / yx[k];
    }
  return beta;
}

IntrinsicInvariants intrinsic_invariants(const OmegaAlgebra& A, const Grading& G, bool with_simplicity) {
  IntrinsicInvariants inv;
  for (const auto& g : G.deg) ++inv.dims[g];
  OmegaAlgebra plain = A;
  plain.remove_operator("inv");
  for (int i = plain.ops().size() - 1; i >= 0; --i)
    if (plain.ops()[i].name != "mul") plain.remove_operator(plain.ops()[i].name);
  Subspace Z = center(plain);
  std::set<GroupElement> zs;
  for (const auto& v : Z.basis())
    for (int k = 0; k < A.dim(); ++k)
      if (!v[k].is_zero()) zs.insert(G.deg[k]);
  inv.center_support.assign(zs.begin(), zs.end());
  if (with_simplicity) {
    inv.simple = is_simple(plain);
    inv.graded_simple = is_graded_simple(plain, G);
  }
  try {
    inv.beta = extract_bicharacter(plain, G);
    if (A.has("inv")) {
      std::map<GroupElement, int> signs;
      bool ok = true;
      for (int i = 0; i < A.dim() && ok; ++i) {
        const SparseVec& im = A.op("inv").table[i];
        if (im.size() == 1 && im[0].first == i && (im[0].second == Scalar(1) || im[0].second == Scalar(-1)))
          signs[G.deg[i]] = im[0].second == Scalar(1) ? 1 : -1;
        else
          ok = false;
      }
      if (ok) inv.inv_signs = signs;
    }
  } catch (const std::invalid_argument&) {
  }
  return inv;
}

std::string compare_invariants(const IntrinsicInvariants& a, const IntrinsicInvariants& b) {
  if (a.dims != b.dims) return "dimension functions differ";
  if (a.center_support != b.center_support) return "center supports differ";
  if (a.graded_simple != b.graded_simple) return "graded simplicity differs";
  if (a.simple != b.simple) return "simplicity differs";
  if (a.beta.has_value() != b.beta.has_value()) return "only one is a graded division algebra";
  if (a.beta && *a.beta != *b.beta) return "extracted bicharacters differ";
  if (a.inv_signs && b.inv_signs && *a.inv_signs != *b.inv_signs) return "involution signs differ";
  return {};
}

std::string refutation_name(Refutation r) {
  switch (r) {
    case Refutation::Invariant: return "invariant";
    case Refutation::Search: return "search";
    case Refutation::Inconclusive: return "INCONCLUSIVE";
    case Refutation::Contradiction: return "contradiction";
  }
  return "?";
}

RefutationReport refute_isomorphism(const ClassLabel& a, const BuiltAlgebra& A,
                                    const IntrinsicInvariants& ia, const ClassLabel& b,
                                    const BuiltAlgebra& B, const IntrinsicInvariants& ib,
                                    const SearchOptions& opt) {
  RefutationReport r;
  std::string diff = compare_invariants(ia, ib);
  if (!diff.empty()) {
    r.kind = Refutation::Invariant;
    r.detail = diff;
    return r;
  }
  SearchOptions o = opt;
  o.hint.reset();
  auto s = search_isomorphism(a, A, b, B, o);
  r.candidates = s.candidates;
  if (s.map) {
    r.kind = Refutation::Contradiction;
    r.detail = "a structured candidate is an isomorphism";
  } else if (s.exhausted) {
    r.kind = Refutation::Search;
    r.detail = "all " + std::to_string(s.candidates) + " structured candidates fail";
  } else {
    r.kind = Refutation::Inconclusive;
    r.detail = a.p.T.same_set(b.p.T) ? "search budget exhausted" : "different division parts";
  }
  return r;
}

// ---- census ---------------------------------------------------------------

namespace {

std::vector<Subgroup> elementary_2_subgroups(const AbelianGroup& G, int max_order) {
  std::vector<GroupElement> invol;
  Subgroup all(G, {});
  std::vector<GroupElement> elems;
  std::function<void(size_t, GroupElement)> walk = [&](size_t k, GroupElement g) {
    if (k == G.torsion().size()) {
      elems.push_back(g);
      return;
    }
    for (long v = 0; v < G.torsion()[k]; ++v) {
      g.c[G.free_rank() + k] = v;
      walk(k + 1, g);
    }
  };
  walk(0, G.identity());
  for (const auto& g : elems)
    if (G.order(g) == 2) invol.push_back(g);
  std::vector<Subgroup> out{Subgroup(G, {})};
  for (size_t q = 0; q < out.size(); ++q) {
    for (const auto& x : invol) {
      if (out[q].contains(x) || out[q].size() * 2 > max_order) continue;
      Subgroup s = out[q].adjoin(x);
      bool seen = false;
      for (const auto& o : out) seen = seen || o.same_set(s);
      if (!seen) out.push_back(s);
    }
  }
  return out;
}

std::vector<Bicharacter> nondegenerate_alternating(const Subgroup& T) {
  int k = static_cast<int>(T.gens().size());
  std::vector<Bicharacter> out;
  if (k == 0) return {Bicharacter::trivial(T)};
  int bits = k * (k - 1) / 2;
  for (int mask = 0; mask < (1 << bits); ++mask) {
    std::vector<std::vector<long>> m(k, std::vector<long>(k, 0));
    int b = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j, ++b) m[i][j] = m[j][i] = (mask >> b) & 1;
    Bicharacter beta = Bicharacter::from_generator_matrix(T, m);
    if (beta.is_nondegenerate_alternating()) out.push_back(beta);
  }
  return out;
}

struct ShapeTemplate {
  std::vector<long> kappa;
  int l = 0, m = 0;
  std::vector<int> s_signs;
};

// Ordered block sequences: odd blocks, even blocks with a sign each, equal pairs.
std::vector<ShapeTemplate> shapes(int rows, bool simple_family) {
  std::vector<ShapeTemplate> out;
  if (!simple_family) {
    std::function<void(int, std::vector<long>)> comp = [&](int left, std::vector<long> k) {
      if (left == 0) {
        out.push_back(ShapeTemplate{k, static_cast<int>(k.size()), static_cast<int>(k.size()), {}});
        return;
      }
      for (int q = 1; q <= left; ++q) {
        k.push_back(q);
        comp(left - q, k);
        k.pop_back();
      }
    };
    comp(rows, {});
    return out;
  }
  std::function<void(int, int, ShapeTemplate)> rec = [&](int left, int stage, ShapeTemplate s) {
    if (left == 0) {
      out.push_back(s);
      return;
    }
    for (int st = stage; st < 3; ++st)
      for (int q = 1; q <= left; ++q) {
        if (st == 0 && q % 2 == 0) continue;
        if (st == 1 && q % 2 == 1) continue;
        if (st == 2 && 2 * q > left) continue;
        ShapeTemplate t = s;
        if (st == 0) {
          t.kappa.push_back(q);
          ++t.l;
          ++t.m;
          rec(left - q, 0, t);
        } else if (st == 1) {
          for (int sg : {1, -1}) {
            ShapeTemplate u = t;
            u.kappa.push_back(q);
            ++u.m;
            u.s_signs.push_back(sg);
            rec(left - q, 1, u);
          }
        } else {
          t.kappa.push_back(q);
          t.kappa.push_back(q);
          rec(left - 2 * q, 2, t);
        }
      }
  };
  rec(rows, 0, ShapeTemplate{});
  return out;
}

std::vector<GroupElement> finite_elements(const AbelianGroup& G) {
  if (!G.is_finite()) throw std::invalid_argument("census needs a finite grading group");
  std::vector<GroupElement> elems;
  std::function<void(size_t, GroupElement)> walk = [&](size_t k, GroupElement g) {
    if (k == G.torsion().size()) {
      elems.push_back(g);
      return;
    }
    for (long v = 0; v < G.torsion()[k]; ++v) {
      g.c[k] = v;
      walk(k + 1, g);
    }
  };
  walk(0, G.identity());
  return elems;
}

void tuples_of(const std::vector<GroupElement>& pool, size_t len,
               const std::function<void(const std::vector<GroupElement>&)>& f) {
  std::vector<GroupElement> cur;
  std::function<void()> rec = [&]() {
    if (cur.size() == len) {
      f(cur);
      return;
    }
    for (const auto& g : pool) {
      cur.push_back(g);
      rec();
      cur.pop_back();
    }
  };
  rec();
}

}  // namespace

std::vector<ClassLabel> enumerate_labels(const AbelianGroup& G, const CensusOptions& opt) {
  std::vector<ClassLabel> out;
  auto elems = finite_elements(G);
  for (const auto& T : elementary_2_subgroups(G, opt.max_T))
    for (const auto& beta : nondegenerate_alternating(T))
      for (Family fam : {Family::ExchangePair, Family::SimpleAlgebra, Family::ExchangeDivision}) {
        std::vector<GroupElement> ts{G.identity()};
        if (fam == Family::ExchangeDivision) {
          ts.clear();
          for (const auto& t : elems)
            if (G.order(t) == 2 && !T.contains(t)) ts.push_back(t);
        }
        bool simple_family = fam != Family::ExchangePair;
        long dsize = T.size() * (fam == Family::ExchangeDivision ? 2 : 1);
        long factor = fam == Family::SimpleAlgebra ? 1 : 2;
        for (const auto& t : ts)
          for (int n = 2; n <= opt.max_rows; ++n) {
            if (factor * n * n * dsize > opt.max_dim) break;
            for (int r0 = 1; r0 < n; ++r0)
              for (const auto& s0 : shapes(r0, simple_family))
                for (const auto& s1 : shapes(n - r0, simple_family))
                  tuples_of(elems, s0.kappa.size(), [&](const std::vector<GroupElement>& g0) {
                    tuples_of(elems, s1.kappa.size(), [&](const std::vector<GroupElement>& g1) {
                      std::vector<GroupElement> gs = simple_family ? elems : std::vector<GroupElement>{G.identity()};
                      for (const auto& g : gs)
                        for (int delta : {1, -1}) {
                          if (delta == -1 && fam != Family::SimpleAlgebra) continue;
                          MatrixParams p;
                          p.family = fam;
                          p.G = G;
                          p.T = T;
                          p.beta = beta;
                          p.t = t;
                          p.b0 = BlockShape{s0.kappa, g0, s0.l, s0.m, s0.s_signs, {}};
                          p.b1 = BlockShape{s1.kappa, g1, s1.l, s1.m, s1.s_signs, {}};
                          if (!simple_family) p.b0.l = p.b0.m = p.b1.l = p.b1.m = -1;
                          p.delta = delta;
                          p.g = g;
                          try {
                            out.push_back(make_label(p));
                          } catch (const ConstructionError&) {
                          }
                        }
                    });
                  });
          }
      }
  for (size_t i = 0; i < out.size(); ++i) out[i].name = "L" + std::to_string(i);
  return out;
}

bool Census::ok() const {
  return inconclusive == 0 && contradictions == 0 && asymmetric == 0 && reflexive_failures == 0 &&
         witnessed == yes && refuted_invariant + refuted_search == no;
}

Census run_census(const AbelianGroup& G, const CensusOptions& opt) {
  Census c;
  c.labels = enumerate_labels(G, opt);
  size_t n = c.labels.size();
  std::vector<BuiltAlgebra> built;
  std::vector<IntrinsicInvariants> inv;
  for (const auto& L : c.labels) {
    built.push_back(build_M_inv(L.p));
    inv.push_back(intrinsic_invariants(built.back().alg, built.back().grading));
  }
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  SearchOptions so;
  so.cap = opt.cap;
  so.exec = opt.exec;
  for (size_t i = 0; i < n; ++i)
    if (!decide_iso(c.labels[i], c.labels[i]).iso) ++c.reflexive_failures;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      CensusPair pr;
      pr.i = static_cast<int>(i);
      pr.j = static_cast<int>(j);
      pr.decision = decide_iso(c.labels[i], c.labels[j]);
      pr.symmetric = decide_iso(c.labels[j], c.labels[i]).iso == pr.decision.iso;
      if (!pr.symmetric) ++c.asymmetric;
      if (pr.decision.iso) {
        ++c.yes;
        SearchOptions h = so;
        h.hint = pr.decision.cert;
        auto r = search_isomorphism(c.labels[i], built[i], c.labels[j], built[j], h);
        pr.witness_ok = r.map.has_value();
        if (pr.witness_ok) ++c.witnessed;
        parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
      } else {
        ++c.no;
        pr.refutation = refute_isomorphism(c.labels[i], built[i], inv[i], c.labels[j], built[j], inv[j], so);
        switch (pr.refutation.kind) {
          case Refutation::Invariant: ++c.refuted_invariant; break;
          case Refutation::Search: ++c.refuted_search; break;
          case Refutation::Inconclusive: ++c.inconclusive; break;
          case Refutation::Contradiction: ++c.contradictions; break;
        }
      }
      c.pairs.push_back(std::move(pr));
    }
  std::map<int, int> cls;
  for (size_t i = 0; i < n; ++i) {
    int r = find(static_cast<int>(i));
    if (!cls.count(r)) cls[r] = static_cast<int>(cls.size());
    c.class_of.push_back(cls[r]);
  }
  return c;
}

}  // namespace ats
