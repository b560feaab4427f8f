#include "ats/constructions.hpp"

#include <numeric>

namespace ats {

namespace {

long beta_order(const Bicharacter& b, int i, int j) {
  long m = b.modulus();
  return m / std::gcd(m, b.exponent(i, j));
}

Matrix mpow(const Matrix& x, long k) {
  Matrix r = Matrix::identity(x.rows);
  for (long i = 0; i < k; ++i) r = r * x;
  return r;
}

// First nonzero entry of a monomial matrix.
std::pair<int, int> lead(const Matrix& m) {
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c)
      if (!m.at(r, c).is_zero()) return {r, c};
  throw ConstructionError("zero matrix where a unit was expected");
}

// c with x = c * y, if any.
std::optional<Scalar> ratio(const Matrix& x, const Matrix& y) {
  auto [r, c] = lead(y);
  Scalar k = x.at(r, c) / y.at(r, c);
  if (!(x == k * y)) return std::nullopt;
  return k;
}

std::string elem_label(const char* prefix, const AbelianGroup& G, const GroupElement& g) {
  return prefix + G.format(g);
}

}  // namespace

SymplecticBasis symplectic_basis(const Bicharacter& beta) {
  const Subgroup& T = beta.domain();
  const AbelianGroup& G = T.parent();
  SymplecticBasis sb;
  std::vector<int> rest(T.size());
  std::iota(rest.begin(), rest.end(), 0);
  while (rest.size() > 1) {
    int a = rest[0];
    for (int x : rest)
      if (G.order(T.elements()[x]) > G.order(T.elements()[a])) a = x;
    long l = G.order(T.elements()[a]);
    int b = -1;
    for (int x : rest)
      if (beta_order(beta, a, x) == l) {
        b = x;
        break;
      }
    if (b < 0) throw ConstructionError("beta must be a nondegenerate alternating bicharacter on T");
    std::vector<int> next;
    for (int x : rest)
      if (beta.exponent(a, x) == 0 && beta.exponent(b, x) == 0) next.push_back(x);
    if (static_cast<long>(rest.size()) != l * l * static_cast<long>(next.size()))
      throw ConstructionError("T is not of the form Z_l1^2 x ... x Z_lr^2 for beta");
    sb.a.push_back(T.elements()[a]);
    sb.b.push_back(T.elements()[b]);
    sb.l.push_back(l);
    rest = std::move(next);
  }
  size_t r = sb.l.size();
  sb.coords.assign(T.size(), std::vector<long>(2 * r, 0));
  std::vector<long> e(2 * r, 0);
  for (int n = 0; n < T.size(); ++n) {
    GroupElement x = G.identity();
    for (size_t i = 0; i < r; ++i) {
      x = G.add(x, G.times(sb.a[i], e[2 * i]));
      x = G.add(x, G.times(sb.b[i], e[2 * i + 1]));
    }
    sb.coords[T.index_of(x)] = e;
    for (size_t p = 2 * r; p-- > 0;) {
      if (++e[p] < sb.l[p / 2]) break;
      e[p] = 0;
    }
  }
  return sb;
}

std::pair<int, Scalar> DivisionAlgebra::inverse(int s) const {
  int si = support.index_of(G.neg(support.elements()[s]));
  return {si, coef(s, si).inverse()};
}

OmegaAlgebra DivisionAlgebra::algebra() const {
  std::vector<std::string> labels;
  for (const auto& x : support.elements()) labels.push_back(elem_label(exchange ? "Y" : "X", G, x));
  OmegaAlgebra A(size(), labels);
  Operator& m = A.add_operator("mul", 2);
  for (int s = 0; s < size(); ++s)
    for (int u = 0; u < size(); ++u) m.table[s * size() + u] = {{prod(s, u), coef(s, u)}};
  if (has_involution()) {
    Operator& inv = A.add_operator("inv", 1);
    for (int s = 0; s < size(); ++s) inv.table[s] = {{s, Scalar(inv_sign[s])}};
  }
  return A;
}

Grading DivisionAlgebra::grading() const {
  return Grading{G, support.elements(), false};
}

DivisionAlgebra standard_realization(const Subgroup& T, const Bicharacter& beta) {
  if (!beta.is_nondegenerate_alternating())
    throw ConstructionError("beta must be a nondegenerate alternating bicharacter on T");
  SymplecticBasis sb = symplectic_basis(beta);
  const AbelianGroup& G = T.parent();
  size_t r = sb.l.size();
  std::vector<Matrix> Xi, Yi;
  for (size_t i = 0; i < r; ++i) {
    int l = static_cast<int>(sb.l[i]);
    Scalar eps = beta.eval(sb.a[i], sb.b[i]);
    Matrix X(l, l), Y(l, l);
    Scalar p(1);
    for (int k = 0; k < l; ++k) {
      X.at(k, k) = p;
      p *= eps;
      Y.at((k + 1) % l, k) = Scalar(1);
    }
    Xi.push_back(X);
    Yi.push_back(Y);
  }
  DivisionAlgebra D;
  D.G = G;
  D.support = T;
  D.beta = beta;
  for (int k = 0; k < T.size(); ++k) {
    Matrix m = Matrix::identity(1);
    for (size_t i = 0; i < r; ++i)
      m = kron(m, mpow(Xi[i], sb.coords[k][2 * i]) * mpow(Yi[i], sb.coords[k][2 * i + 1]));
    D.X.push_back(m);
  }
  int n = T.size();
  D.c.resize(static_cast<size_t>(n) * n);
  D.sum.resize(static_cast<size_t>(n) * n);
  for (int s = 0; s < n; ++s)
    for (int u = 0; u < n; ++u) {
      int su = T.index_of(G.add(T.elements()[s], T.elements()[u]));
      auto k = ratio(D.X[s] * D.X[u], D.X[su]);
      if (!k) throw ConstructionError("realizing matrices are not monomial in the X_t basis");
      D.c[s * n + u] = *k;
      D.sum[s * n + u] = su;
    }
  return D;
}

QuadraticForm transpose_form(const DivisionAlgebra& D) {
  if (D.X.empty()) throw ConstructionError("transpose form needs realizing matrices");
  std::vector<int> s;
  for (const auto& x : D.X) {
    auto k = ratio(x.transpose(), x);
    if (!k || !(*k == Scalar(1) || *k == Scalar(-1)))
      throw ConstructionError("transposition is not an involution of D(T,beta); T must be an elementary 2-group");
    s.push_back(*k == Scalar(1) ? 1 : -1);
  }
  return QuadraticForm(D.support, s);
}

DivisionAlgebra d_inv(const Subgroup& T, const Bicharacter& beta, const QuadraticForm& tau) {
  if (!T.is_elementary_2())
    throw ConstructionError("D(T,beta) admits an involution only when T is an elementary 2-group");
  if (!tau.domain().same_set(T)) throw ConstructionError("tau must be defined on T");
  if (!polar_form(tau).equals(beta)) throw ConstructionError("the polar form of tau must equal beta");
  DivisionAlgebra D = standard_realization(T, beta);
  D.inv_sign.resize(T.size());
  for (int k = 0; k < T.size(); ++k) D.inv_sign[k] = tau(T.elements()[k]);
  return D;
}

DivisionAlgebra d_inv(const Subgroup& T, const Bicharacter& beta) {
  if (!T.is_elementary_2())
    throw ConstructionError("D(T,beta) admits an involution only when T is an elementary 2-group");
  DivisionAlgebra D = standard_realization(T, beta);
  return d_inv(T, beta, transpose_form(D));
}

DivisionAlgebra exchange_double(const DivisionAlgebra& D, const GroupElement& t) {
  if (!D.has_involution()) throw ConstructionError("exchange double needs an involution");
  const AbelianGroup& G = D.G;
  if (G.order(t) != 2) throw ConstructionError("t must have order 2");
  if (D.support.contains(t)) throw ConstructionError("t must lie outside the support");
  DivisionAlgebra E;
  E.G = G;
  E.base = D.support;
  E.support = D.support.adjoin(t);
  E.beta = extend_beta(D.beta, t);
  E.exchange = true;
  E.t = t;
  int n = E.size();
  std::vector<int> u(n), k(n);
  for (int i = 0; i < n; ++i) {
    const auto& x = E.support.elements()[i];
    int j = D.support.index_of(x);
    if (j >= 0) {
      u[i] = j;
      k[i] = 0;
    } else {
      u[i] = D.support.index_of(G.sub(x, t));
      k[i] = 1;
    }
  }
  E.c.resize(static_cast<size_t>(n) * n);
  E.sum.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      E.c[a * n + b] = D.coef(u[a], u[b]);
      E.sum[a * n + b] = E.support.index_of(G.add(E.support.elements()[a], E.support.elements()[b]));
    }
  E.inv_sign.resize(n);
  for (int a = 0; a < n; ++a) E.inv_sign[a] = D.inv_sign[u[a]] * (k[a] ? -1 : 1);
  return E;
}

DivisionAlgebra opposite(const DivisionAlgebra& D) {
  DivisionAlgebra O = D;
  int n = D.size();
  std::vector<long> tab(static_cast<size_t>(n) * n);
  for (int s = 0; s < n; ++s)
    for (int u = 0; u < n; ++u) {
      O.c[s * n + u] = D.coef(u, s);
      tab[s * n + u] = D.beta.exponent(u, s);
    }
  O.beta = Bicharacter::from_table(D.support, D.beta.modulus(), tab);
  O.X.clear();
  return O;
}

namespace {

// A + A^op with ex; basis (b_i, 0) then (0, b_i).
OmegaAlgebra exchange_sum(const OmegaAlgebra& A) {
  int d = A.dim();
  std::vector<std::string> labels;
  for (const auto& l : A.labels()) labels.push_back("(" + l + ",0)");
  for (const auto& l : A.labels()) labels.push_back("(0," + l + ")");
  OmegaAlgebra S(2 * d, labels);
  Operator& m = S.add_operator("mul", 2);
  const Operator& a = A.op("mul");
  auto shift = [d](const SparseVec& v) {
    SparseVec w;
    for (const auto& [j, x] : v) w.emplace_back(j + d, x);
    return w;
  };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      m.table[i * 2 * d + j] = a.table[i * d + j];
      m.table[(i + d) * 2 * d + (j + d)] = shift(a.table[j * d + i]);
    }
  Operator& inv = S.add_operator("inv", 1);
  for (int i = 0; i < d; ++i) {
    inv.table[i] = {{i + d, Scalar(1)}};
    inv.table[i + d] = {{i, Scalar(1)}};
  }
  return S;
}

}  // namespace

std::pair<OmegaAlgebra, Grading> exchange_double(const OmegaAlgebra& A, const Grading& G,
                                                 const GroupElement& t) {
  if (!A.has("inv")) throw ConstructionError("exchange double needs an involution");
  const AbelianGroup& H = G.group;
  if (H.order(t) != 2) throw ConstructionError("t must have order 2");
  for (const auto& s : G.support())
    if (s == t) throw ConstructionError("t must lie outside the support");
  int d = A.dim();
  OmegaAlgebra S = exchange_sum(A);
  Matrix phi = A.unary_matrix("inv");
  Matrix P(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    P.at(i, i) = Scalar(1);
    P.at(i, i + d) = Scalar(1);
    for (int j = 0; j < d; ++j) {
      P.at(j + d, i) = phi.at(j, i);
      P.at(j + d, i + d) = -phi.at(j, i);
    }
  }
  OmegaAlgebra E = change_basis(S, P);
  std::vector<std::string> labels;
  for (const auto& l : A.labels()) labels.push_back("+" + l);
  for (const auto& l : A.labels()) labels.push_back("-" + l);
  E.set_labels(labels);
  Grading out{H, {}, false};
  for (int i = 0; i < d; ++i) out.deg.push_back(G.deg[i]);
  for (int i = 0; i < d; ++i) out.deg.push_back(H.add(G.deg[i], t));
  return {E, out};
}

std::pair<OmegaAlgebra, Grading> exchange_of_graded(const OmegaAlgebra& A, const Grading& G) {
  OmegaAlgebra S = exchange_sum(A);
  Grading out{G.group, G.deg, G.group.free_rank() >= 1};
  for (const auto& g : G.deg) {
    GroupElement h = g;
    if (G.group.free_rank() >= 1) h.c[0] = -h.c[0];
    out.deg.push_back(h);
  }
  return {S, out};
}

std::vector<GroupElement> kappa_expand(const std::vector<long>& kappa,
                                       const std::vector<GroupElement>& gamma) {
  if (kappa.size() != gamma.size())
    throw ConstructionError("kappa has " + std::to_string(kappa.size()) + " entries but gamma has " +
                            std::to_string(gamma.size()));
  std::vector<GroupElement> h;
  for (size_t i = 0; i < kappa.size(); ++i) {
    if (kappa[i] <= 0) throw ConstructionError("kappa entries must be positive");
    for (long k = 0; k < kappa[i]; ++k) h.push_back(gamma[i]);
  }
  return h;
}

MatrixAlgebra matrix_grading(const DivisionAlgebra& D, const std::vector<GroupElement>& h0,
                             const std::vector<GroupElement>& h1) {
  MatrixAlgebra M;
  M.D = D;
  M.k0 = static_cast<int>(h0.size());
  M.h = h0;
  M.h.insert(M.h.end(), h1.begin(), h1.end());
  M.n = static_cast<int>(M.h.size());
  if (M.n == 0) throw ConstructionError("matrix size must be positive");
  int n = M.n, q = D.size();
  int dim = n * n * q;
  OmegaAlgebra Dalg = D.algebra();
  std::vector<std::string> labels(dim);
  const AbelianGroup& G = D.G;
  AbelianGroup GZ = G.with_z();
  M.grading = Grading{GZ, std::vector<GroupElement>(dim), false};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int s = 0; s < q; ++s) {
        int k = M.index(s, i, j);
        labels[k] = Dalg.labels()[s] + "E" + std::to_string(i + 1) + "," + std::to_string(j + 1);
        GroupElement g = G.sub(G.add(M.h[i], D.support.elements()[s]), M.h[j]);
        std::vector<long> c{static_cast<long>(i >= M.k0) - static_cast<long>(j >= M.k0)};
        c.insert(c.end(), g.c.begin(), g.c.end());
        M.grading.deg[k] = GZ.make(c);
      }
  M.alg = OmegaAlgebra(dim, labels);
  Operator& m = M.alg.add_operator("mul", 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int s = 0; s < q; ++s)
          for (int u = 0; u < q; ++u)
            m.table[static_cast<size_t>(M.index(s, i, j)) * dim + M.index(u, j, l)] = {
                {M.index(D.prod(s, u), i, l), D.coef(s, u)}};
  return M;
}

Report check_opposite_iso(const DivisionAlgebra& D, const std::vector<GroupElement>& h0,
                          const std::vector<GroupElement>& h1) {
  MatrixAlgebra A = matrix_grading(D, h0, h1);
  auto [Aop, Gop] = opposite(A.alg, A.grading);
  auto neg = [&](const std::vector<GroupElement>& h) {
    std::vector<GroupElement> r;
    for (const auto& x : h) r.push_back(D.G.neg(x));
    return r;
  };
  MatrixAlgebra B = matrix_grading(opposite(D), neg(h0), neg(h1));
  Matrix f(B.alg.dim(), A.alg.dim());
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j)
      for (int s = 0; s < D.size(); ++s) f.at(B.index(s, j, i), A.index(s, i, j)) = Scalar(1);
  return check_morphism(Aop, B.alg, f, &Gop, &B.grading);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::ExchangePair: return "exchange-pair";
    case Family::SimpleAlgebra: return "simple";
    case Family::ExchangeDivision: return "exchange-division";
  }
  return "?";
}

DivisionAlgebra division_part(const MatrixParams& p) {
  switch (p.family) {
    case Family::ExchangePair: return standard_realization(p.T, p.beta);
    case Family::SimpleAlgebra: return d_inv(p.T, p.beta);
    case Family::ExchangeDivision: return exchange_double(d_inv(p.T, p.beta), p.t);
  }
  throw ConstructionError("unknown family");
}

namespace {

void normalize_shape(BlockShape& b, Family f, const AbelianGroup& G, const GroupElement& g) {
  int len = static_cast<int>(b.kappa.size());
  if (f == Family::ExchangePair) {
    b.l = b.m = len;
    return;
  }
  if (b.m < 0) b.m = len;
  if (b.l < 0) {
    b.l = 0;
    while (b.l < b.m && b.kappa[b.l] % 2 == 1) ++b.l;
  }
  if (b.s_signs.empty()) b.s_signs.assign(std::max(0, b.m - b.l), 1);
  if (b.t_values.empty() && b.m <= static_cast<int>(b.gamma.size()))
    for (int i = 0; i < b.m; ++i)
      b.t_values.push_back(G.sub(G.neg(g), G.times(b.gamma[i], 2)));
}

void validate_shape(const BlockShape& b, const char* side, const MatrixParams& p,
                    const DivisionAlgebra& D, const QuadraticForm* tau) {
  std::string s = side;
  const AbelianGroup& G = p.G;
  if (b.kappa.empty()) throw ConstructionError("kappa" + s + " must be nonempty");
  if (b.kappa.size() != b.gamma.size())
    throw ConstructionError("kappa" + s + " and gamma" + s + " must have the same length");
  for (long k : b.kappa)
    if (k <= 0) throw ConstructionError("kappa" + s + " entries must be positive");
  // Distinct cosets modulo the support of D.
  for (size_t i = 0; i < b.gamma.size(); ++i)
    for (size_t j = i + 1; j < b.gamma.size(); ++j)
      if (D.support.contains(G.sub(b.gamma[i], b.gamma[j])))
        throw ConstructionError("gamma" + s + " entries " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " coincide modulo T");
  if (p.family == Family::ExchangePair) return;
  int len = static_cast<int>(b.kappa.size());
  if (b.l < 0 || b.l > b.m || b.m > len || (len - b.m) % 2 != 0)
    throw ConstructionError("kappa" + s + " shape needs 0 <= l <= m <= len with an even number of paired entries");
  for (int i = 0; i < b.l; ++i)
    if (b.kappa[i] % 2 == 0) throw ConstructionError("kappa" + s + " entry " + std::to_string(i + 1) + " must be odd");
  for (int i = b.l; i < b.m; ++i)
    if (b.kappa[i] % 2 != 0) throw ConstructionError("kappa" + s + " entry " + std::to_string(i + 1) + " must be even");
  for (int i = b.m; i < len; i += 2)
    if (b.kappa[i] != b.kappa[i + 1])
      throw ConstructionError("kappa" + s + " paired entries " + std::to_string(i + 1) + "," +
                              std::to_string(i + 2) + " must be equal");
  if (static_cast<int>(b.s_signs.size()) != b.m - b.l)
    throw ConstructionError("S_signs" + s + " needs " + std::to_string(b.m - b.l) + " entries");
  for (int x : b.s_signs)
    if (x != 1 && x != -1) throw ConstructionError("S_signs" + s + " entries must be 1 or -1");
  if (static_cast<int>(b.t_values.size()) != b.m)
    throw ConstructionError("t_values" + s + " needs " + std::to_string(b.m) + " entries");
  GroupElement ginv = G.neg(p.g);
  for (int i = 0; i < b.m; ++i) {
    if (!D.support.contains(b.t_values[i]))
      throw ConstructionError("degree constraint g_i^2 t_i = g^-1: t" + s + "_" + std::to_string(i + 1) +
                              " = " + G.format(b.t_values[i]) + " is not in T");
    if (G.add(G.times(b.gamma[i], 2), b.t_values[i]) != ginv)
      throw ConstructionError("degree constraint g_i^2 t_i = g^-1 fails for block " + s + "." +
                              std::to_string(i + 1));
  }
  for (int i = b.m; i < len; i += 2)
    if (G.add(b.gamma[i], b.gamma[i + 1]) != ginv)
      throw ConstructionError("degree constraint g' g'' = g^-1 fails for pair " + s + "." +
                              std::to_string(i + 1));
  for (int i = 0; i < b.m; ++i) {
    int sg = i < b.l ? 1 : b.s_signs[i - b.l];
    if (sg * (*tau)(b.t_values[i]) != p.delta)
      throw ConstructionError("sign constraint delta = tau(t_i) = sgn(S_i) tau(t_i) fails for block " + s +
                              "." + std::to_string(i + 1));
  }
}

}  // namespace

void normalize(MatrixParams& p) {
  normalize_shape(p.b0, p.family, p.G, p.g);
  normalize_shape(p.b1, p.family, p.G, p.g);
}

void validate(const MatrixParams& p) {
  if (!(p.T.parent() == p.G)) throw ConstructionError("T must be a subgroup of G");
  if (!p.beta.domain().same_set(p.T)) throw ConstructionError("beta must be defined on T");
  if (!p.beta.is_nondegenerate_alternating())
    throw ConstructionError("beta must be a nondegenerate alternating bicharacter on T");
  if (p.family != Family::ExchangePair && !p.T.is_elementary_2())
    throw ConstructionError("T must be an elementary 2-group for an involution of D(T,beta)");
  if (p.family == Family::ExchangeDivision) {
    if (p.G.order(p.t) != 2 || p.T.contains(p.t))
      throw ConstructionError("t must have order 2 and lie outside T");
    if (p.delta != 1) throw ConstructionError("delta must be 1: the exchange division family requires sgn(B)=1");
  }
  if (p.delta != 1 && p.delta != -1) throw ConstructionError("delta must be 1 or -1");
  DivisionAlgebra D = division_part(p);
  std::optional<QuadraticForm> tau;
  if (p.family != Family::ExchangePair) tau = QuadraticForm(D.support, D.inv_sign);
  validate_shape(p.b0, "0", p, D, tau ? &*tau : nullptr);
  validate_shape(p.b1, "1", p, D, tau ? &*tau : nullptr);
}

SparseVec phi_matrix(const MatrixParams& p, const MatrixAlgebra& M) {
  if (p.family == Family::ExchangePair) return {};
  const DivisionAlgebra& D = M.D;
  int e = D.identity_index();
  Vec phi(M.alg.dim());
  int row = 0;
  auto put = [&](int i, int j, int s, const Scalar& x) { phi[M.index(s, i, j)] += x; };
  for (const BlockShape* b : {&p.b0, &p.b1}) {
    int len = static_cast<int>(b->kappa.size());
    for (int i = 0; i < b->m; ++i) {
      int ts = D.support.index_of(b->t_values[i]);
      long q = b->kappa[i];
      bool skew = i >= b->l && b->s_signs[i - b->l] == -1;
      if (!skew) {
        for (long r = 0; r < q; ++r) put(row + r, row + r, ts, Scalar(1));
      } else {
        long h = q / 2;
        for (long r = 0; r < h; ++r) {
          put(row + r, row + h + r, ts, Scalar(1));
          put(row + h + r, row + r, ts, Scalar(-1));
        }
      }
      row += q;
    }
    for (int i = b->m; i < len; i += 2) {
      long q = b->kappa[i];
      for (long r = 0; r < q; ++r) {
        put(row + r, row + q + r, e, Scalar(1));
        put(row + q + r, row + r, e, Scalar(p.delta));
      }
      row += 2 * q;
    }
  }
  return to_sparse(phi);
}

namespace {

// Inverse of a matrix over D with one unit entry per row and column.
SparseVec monomial_inverse(const MatrixAlgebra& M, const SparseVec& x) {
  int q = M.D.size();
  SparseVec out;
  for (const auto& [k, c] : x) {
    int s = k % q, ij = k / q, i = ij / M.n, j = ij % M.n;
    auto [si, kinv] = M.D.inverse(s);
    out.emplace_back(M.index(si, j, i), kinv / c);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

SparseVec identity_of(const MatrixAlgebra& M) {
  SparseVec id;
  for (int i = 0; i < M.n; ++i) id.emplace_back(M.index(M.D.identity_index(), i, i), Scalar(1));
  std::sort(id.begin(), id.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return id;
}

}  // namespace

BuiltAlgebra build_M_inv(const MatrixParams& params) {
  MatrixParams p = params;
  normalize(p);
  validate(p);
  DivisionAlgebra D = division_part(p);
  auto h0 = kappa_expand(p.b0.kappa, p.b0.gamma);
  auto h1 = kappa_expand(p.b1.kappa, p.b1.gamma);
  BuiltAlgebra out{p.family, matrix_grading(D, h0, h1), {}, {}, {}};
  const MatrixAlgebra& M = out.M;
  if (p.family == Family::ExchangePair) {
    auto [S, G] = exchange_of_graded(M.alg, M.grading);
    out.alg = std::move(S);
    out.grading = std::move(G);
    return out;
  }
  out.Phi = phi_matrix(p, M);
  SparseVec Pinv = monomial_inverse(M, out.Phi);
  const Operator& mul = M.alg.op("mul");
  if (M.alg.apply(mul, {out.Phi, Pinv}) != identity_of(M))
    throw ConstructionError("Phi is not invertible");
  out.alg = M.alg;
  Operator& inv = out.alg.add_operator("inv", 1);
  int q = D.size();
  for (int i = 0; i < M.n; ++i)
    for (int j = 0; j < M.n; ++j)
      for (int s = 0; s < q; ++s) {
        SparseVec star{{M.index(s, j, i), Scalar(D.inv_sign[s])}};
        inv.table[M.index(s, i, j)] = M.alg.apply(mul, {M.alg.apply(mul, {Pinv, star}), out.Phi});
      }
  out.grading = M.grading;
  out.grading.z_flip = true;
  return out;
}

namespace {

// Coordinates of the pair (a X_v, b X_v) in the exchange basis over D.
void pair_to_exchange(const DivisionAlgebra& E, const DivisionAlgebra& D, int v, const Scalar& a,
                      const Scalar& b, Matrix& m, int col) {
  const AbelianGroup& G = E.G;
  const GroupElement& x = D.support.elements()[v];
  Scalar tau(D.inv_sign[v]);
  Scalar half = Scalar::rational(1, 2);
  int plus = E.support.index_of(x);
  int minus = E.support.index_of(G.add(x, E.t));
  m.at(plus, col) += half * (a + tau * b);
  m.at(minus, col) += half * (a - tau * b);
}

QuadraticForm restrict_form(const QuadraticForm& tau, const Subgroup& S) {
  std::vector<int> s;
  for (const auto& x : S.elements()) s.push_back(tau(x));
  return QuadraticForm(S, s);
}

}  // namespace

Report check_exchange_iso(const Subgroup& T1, const QuadraticForm& tau1, const GroupElement& t,
                          const Subgroup& T2) {
  const AbelianGroup& G = T1.parent();
  Bicharacter beta1 = polar_form(tau1);
  DivisionAlgebra D1 = d_inv(T1, beta1, tau1);
  DivisionAlgebra E1 = exchange_double(D1, t);
  if (T2.contains(t) || !E1.support.same_set(T2.adjoin(t)))
    throw ConstructionError("T2 must be an index-2 subgroup of T1<t> not containing t");
  QuadraticForm tau2 = restrict_form(extend_tau(tau1, t), T2);
  Bicharacter beta2 = polar_form(tau2);
  DivisionAlgebra D2 = d_inv(T2, beta2, tau2);
  DivisionAlgebra E2 = exchange_double(D2, t);

  // f: D2 -> D1 on the symplectic generators of D2, scaled so squares agree.
  SymplecticBasis sb = symplectic_basis(beta2);
  OmegaAlgebra A1 = D1.algebra();
  int n1 = D1.size(), n2 = D2.size();
  auto image = [&](const GroupElement& g) {
    int v = D1.support.contains(g) ? D1.support.index_of(g) : D1.support.index_of(G.sub(g, t));
    int gi = D2.support.index_of(g);
    Scalar need = D2.coef(gi, gi) / D1.coef(v, v);
    Scalar c = need == Scalar(1) ? Scalar(1) : Scalar::root_of_unity(4, 4, 1);
    if (!(c * c == need)) throw ConstructionError("generator square is not +-1");
    return scaled(SparseVec{{v, Scalar(1)}}, c);
  };
  std::vector<SparseVec> ga, gb;
  for (size_t i = 0; i < sb.l.size(); ++i) {
    ga.push_back(image(sb.a[i]));
    gb.push_back(image(sb.b[i]));
  }
  const Operator& mul1 = A1.op("mul");
  Matrix F(n1, n2);
  for (int h = 0; h < n2; ++h) {
    SparseVec x{{D1.identity_index(), Scalar(1)}};
    for (size_t i = 0; i < sb.l.size(); ++i) {
      for (long k = 0; k < sb.coords[h][2 * i]; ++k) x = A1.apply(mul1, {x, ga[i]});
      for (long k = 0; k < sb.coords[h][2 * i + 1]; ++k) x = A1.apply(mul1, {x, gb[i]});
    }
    for (const auto& [v, c] : x) F.at(v, h) = c;
  }
  // Theta(x, y) = (f x, f y) in the exchange bases.
  Matrix Theta(E1.size(), E2.size());
  for (int k = 0; k < E2.size(); ++k) {
    const auto& y = E2.support.elements()[k];
    int u = D2.support.contains(y) ? D2.support.index_of(y) : D2.support.index_of(G.sub(y, t));
    Scalar second = Scalar(D2.inv_sign[u]) * Scalar(D2.support.contains(y) ? 1 : -1);
    for (int v = 0; v < n1; ++v)
      if (!F.at(v, u).is_zero()) pair_to_exchange(E1, D1, v, F.at(v, u), second * F.at(v, u), Theta, k);
  }
  Grading G1 = E1.grading(), G2 = E2.grading();
  return check_morphism(E2.algebra(), E1.algebra(), Theta, &G2, &G1);
}

Report check_remove_tau(const Subgroup& T1, const QuadraticForm& tau1,
                        const QuadraticForm& tau_prime, const GroupElement& t) {
  Bicharacter beta = polar_form(tau1);
  if (!polar_form(tau_prime).equals(beta))
    throw ConstructionError("tau1 and tau' must have the same polar form");
  DivisionAlgebra D1 = d_inv(T1, beta, tau1);
  DivisionAlgebra D2 = d_inv(T1, beta, tau_prime);
  DivisionAlgebra E1 = exchange_double(D1, t), E2 = exchange_double(D2, t);
  const AbelianGroup& G = T1.parent();
  // t' with beta(t', s) = tau'(s) tau1(s).
  int tp = -1;
  for (int a = 0; a < T1.size() && tp < 0; ++a) {
    bool ok = true;
    for (int s = 0; s < T1.size() && ok; ++s) {
      int want = tau_prime.at(s) * tau1.at(s);
      ok = (beta.exponent(a, s) == 0 ? 1 : -1) == want;
    }
    if (ok) tp = a;
  }
  if (tp < 0) throw ConstructionError("no t' with beta(t', s) = tau'(s) tau1(s)");
  // Psi on pairs, written in the exchange bases.
  Matrix Psi(E1.size(), E2.size());
  for (int k = 0; k < E2.size(); ++k) {
    const auto& y = E2.support.elements()[k];
    bool plus = T1.contains(y);
    int u = plus ? T1.index_of(y) : T1.index_of(G.sub(y, t));
    Scalar second = Scalar(D2.inv_sign[u] * (plus ? 1 : -1) * tau1.at(u) * tau_prime.at(u));
    pair_to_exchange(E1, D1, u, Scalar(1), second, Psi, k);
  }
  // Int(Y_t') o phi1 on E1.
  OmegaAlgebra A1 = E1.algebra();
  const Operator& mul = A1.op("mul");
  int yt = E1.support.index_of(T1.elements()[tp]);
  auto [yti, kinv] = E1.inverse(yt);
  SparseVec Y{{yt, Scalar(1)}}, Yinv{{yti, kinv}};
  std::vector<SparseVec> twisted(E1.size());
  for (int k = 0; k < E1.size(); ++k) {
    SparseVec x{{k, Scalar(E1.inv_sign[k])}};
    twisted[k] = A1.apply(mul, {A1.apply(mul, {Y, x}), Yinv});
  }
  A1.op("inv").table = twisted;
  Grading G1 = E1.grading(), G2 = E2.grading();
  Report r = check_involution(A1, &G1);
  r.merge(check_morphism(E2.algebra(), A1, Psi, &G2, &G1));
  return r;
}

}  // namespace ats
