#include <doctest.h>

#include "support.hpp"

using namespace ats;

namespace {

Subgroup standard_gens(const AbelianGroup& G) {
  std::vector<GroupElement> g;
  for (int i = 0; i < G.ncoords(); ++i) {
    std::vector<long> c(G.ncoords(), 0);
    c[i] = 1;
    g.push_back(G.make(c));
  }
  return Subgroup(G, g);
}

Matrix mat2(long a, long b, long c, long d) {
  Matrix m(2, 2);
  m.at(0, 0) = Scalar(a), m.at(0, 1) = Scalar(b), m.at(1, 0) = Scalar(c), m.at(1, 1) = Scalar(d);
  return m;
}

// Relation X_s X_u = beta(s,u) X_u X_s on the realizing matrices themselves.
bool matrices_commute_by_beta(const DivisionAlgebra& D) {
  const auto& E = D.support.elements();
  for (int s = 0; s < D.size(); ++s)
    for (int u = 0; u < D.size(); ++u)
      if (!(D.X[s] * D.X[u] == D.beta.eval(E[s], E[u]) * (D.X[u] * D.X[s]))) return false;
  return true;
}

}  // namespace

TEST_CASE("trivial support realizes the field") {
  AbelianGroup G(0, {2});
  Subgroup one(G, {});
  DivisionAlgebra D = standard_realization(one, Bicharacter::trivial(one));
  CHECK(D.size() == 1);
  CHECK(D.X[0].is_identity());
  DivisionAlgebra Di = d_inv(one, Bicharacter::trivial(one));
  CHECK(Di.inv_sign == std::vector<int>{1});
}

TEST_CASE("Klein group realizes M2 by Pauli matrices") {
  AbelianGroup G(0, {2, 2});
  Subgroup T = fixture::klein(G);
  DivisionAlgebra D = standard_realization(T, fixture::symplectic(T));
  CHECK(D.X[T.index_of(G.make({0, 1}))] == mat2(1, 0, 0, -1));
  CHECK(D.X[T.index_of(G.make({1, 0}))] == mat2(0, 1, 1, 0));
  CHECK(matrices_commute_by_beta(D));
  CHECK(is_simple(D.algebra()));
}

TEST_CASE("realizations over several supports") {
  for (auto tors : {std::vector<long>{2, 2}, {2, 2, 2, 2}, {3, 3}, {4, 4}, {2, 2, 4, 4}}) {
    AbelianGroup G(0, tors);
    Subgroup T = standard_gens(G);
    Bicharacter beta = fixture::symplectic(T);
    DivisionAlgebra D = standard_realization(T, beta);
    CAPTURE(G.str());
    CHECK(D.size() == T.size());
    CHECK(matrices_commute_by_beta(D));
    SymplecticBasis sb = symplectic_basis(beta);
    // beta(a_i, b_i) is a primitive l_i-th root of unity
    for (size_t i = 0; i < sb.l.size(); ++i) {
      Scalar v = beta.eval(sb.a[i], sb.b[i]);
      CHECK(v.pow(sb.l[i]) == Scalar(1));
      for (long k = 1; k < sb.l[i]; ++k) CHECK(v.pow(k) != Scalar(1));
    }
    OmegaAlgebra A = D.algebra();
    Grading GA = D.grading();
    CHECK(check_associative(A).ok);
    CHECK(check_grading(A, GA).ok);
    if (D.size() <= 16) CHECK(is_simple(A));
  }
}

TEST_CASE("involutions from quadratic forms") {
  AbelianGroup G(0, {2, 2});
  Subgroup T = fixture::klein(G);
  Bicharacter beta = fixture::symplectic(T);
  DivisionAlgebra D = d_inv(T, beta);
  CHECK(polar_form(transpose_form(D)).equals(beta));
  for (const auto& tau : quadratic_forms_with_polar(beta)) {
    DivisionAlgebra Dt = d_inv(T, beta, tau);
    OmegaAlgebra A = Dt.algebra();
    Grading GA = Dt.grading();
    CHECK(check_involution(A, &GA).ok);
    for (int s = 0; s < Dt.size(); ++s) CHECK(Dt.inv_sign[s] == tau(T.elements()[s]));
  }
  // a form whose polar is not beta is rejected
  CHECK_THROWS_AS(d_inv(T, beta, QuadraticForm::trivial(T)), ConstructionError);
}

TEST_CASE("exchange doubles of graded division algebras") {
  AbelianGroup G(0, {2, 2, 2});
  Subgroup T(G, {G.make({1, 0, 0}), G.make({0, 1, 0})});
  GroupElement t = G.make({0, 0, 1});
  DivisionAlgebra D = d_inv(T, fixture::symplectic(T));
  DivisionAlgebra X = exchange_double(D, t);
  CHECK(X.size() == 2 * D.size());
  OmegaAlgebra A = X.algebra();
  Grading GA = X.grading();
  CHECK(check_associative(A).ok);
  CHECK(check_involution(A, &GA).ok);
  CHECK(check_grading(A, GA).ok);
  CHECK_FALSE(is_simple(fixture::without_inv(A)));
  CHECK(is_graded_simple(A, GA));
}

TEST_CASE("exchange double of the field") {
  AbelianGroup Z2(0, {2});
  GroupElement t = Z2.make({1});
  OmegaAlgebra F = fixture::scalar_field();
  F.add_operator("inv", 1).table[0] = {{0, Scalar(1)}};
  auto [A, G] = exchange_double(F, trivial_grading(1, Z2), t);
  CHECK(A.dim() == 2);
  CHECK(G.deg[0] == Z2.identity());
  CHECK(G.deg[1] == t);
  CHECK(check_involution(A, &G).ok);
  CHECK(is_simple(A));

  AbelianGroup Z(1, {});
  auto [B, GB] = exchange_of_graded(fixture::scalar_field(), trivial_grading(1, Z));
  CHECK(B.dim() == 2);
  for (const auto& d : GB.deg) CHECK(d == Z.identity());
  CHECK(check_involution(B, &GB).ok);
}

TEST_CASE("block degree expansion") {
  AbelianGroup G(0, {2, 2});
  GroupElement e = G.identity(), a = G.make({1, 0}), b = G.make({0, 1});
  CHECK(kappa_expand({1}, {a}) == std::vector<GroupElement>{a});
  CHECK(kappa_expand({2, 1}, {a, b}) == std::vector<GroupElement>{a, a, b});
  CHECK(kappa_expand({1, 1, 2}, {a, b, e}) == std::vector<GroupElement>{a, b, e, e});
}

TEST_CASE("matrix grading over the field") {
  AbelianGroup G(0, {2});
  Subgroup one(G, {});
  DivisionAlgebra F = standard_realization(one, Bicharacter::trivial(one));
  MatrixAlgebra M = matrix_grading(F, {G.identity()}, {G.identity()});
  CHECK(M.alg.dim() == 4);
  AbelianGroup ZG = G.with_z();
  CHECK(M.grading.deg[M.index(0, 0, 1)] == ZG.make({-1, 0}));
  CHECK(M.grading.deg[M.index(0, 1, 0)] == ZG.make({1, 0}));
  CHECK(M.grading.deg[M.index(0, 0, 0)] == ZG.identity());
  CHECK(check_grading(M.alg, M.grading).ok);
  CHECK(check_opposite_iso(F, {G.make({1})}, {G.identity()}).ok);
}

TEST_CASE("smallest simple parameters give M2 with the transpose") {
  AbelianGroup G;
  MatrixParams p = fixture::blocks(G, Family::SimpleAlgebra, {G.identity()}, {G.identity()});
  normalize(p);
  BuiltAlgebra B = build_M_inv(p);
  CHECK(B.alg.dim() == 4);
  MatrixAlgebra& M = B.M;
  // Phi is the identity matrix
  CHECK(B.Phi == SparseVec{{M.index(0, 0, 0), Scalar(1)}, {M.index(0, 1, 1), Scalar(1)}});
  Matrix inv = B.alg.unary_matrix("inv");
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(inv.column(M.index(0, i, j)) == unit_vec(4, M.index(0, j, i)));
  CHECK(check_involution(B.alg, &B.grading).ok);
  CHECK(check_grading(B.alg, B.grading).ok);
  CHECK(is_simple(B.alg));
}

TEST_CASE("exchange pair with one block per side") {
  AbelianGroup G;
  MatrixParams p = fixture::blocks(G, Family::ExchangePair, {G.identity()}, {G.identity()});
  normalize(p);
  BuiltAlgebra B = build_M_inv(p);
  CHECK(B.alg.dim() == 8);
  CHECK(check_involution(B.alg, &B.grading).ok);
  CHECK(check_associative(B.alg).ok);
  CHECK(is_simple(B.alg));
  CHECK_FALSE(is_simple(fixture::without_inv(B.alg)));
  CHECK(check_peirce(B.alg, B.grading).ok);
}

TEST_CASE("parameter validation") {
  AbelianGroup G(0, {2, 2, 2});
  MatrixParams p = fixture::blocks(G, Family::ExchangeDivision, {G.identity()}, {G.identity()});
  p.T = Subgroup(G, {G.make({1, 0, 0}), G.make({0, 1, 0})});
  p.beta = fixture::symplectic(p.T);
  p.t = G.make({0, 0, 1});
  p.delta = -1;
  normalize(p);
  try {
    validate(p);
    FAIL("delta = -1 accepted for the exchange division family");
  } catch (const ConstructionError& e) {
    CHECK(std::string(e.what()).find("sgn(B)=1") != std::string::npos);
  }
  p.delta = 1;
  CHECK_NOTHROW(validate(p));

  MatrixParams q = fixture::blocks(G, Family::SimpleAlgebra, {G.identity()}, {G.identity()});
  q.T = Subgroup(G, {G.make({1, 0, 0}), G.make({0, 1, 0})});
  q.beta = Bicharacter::trivial(q.T);
  normalize(q);
  try {
    validate(q);
    FAIL("degenerate beta accepted");
  } catch (const ConstructionError& e) {
    CHECK(std::string(e.what()).find("nondegenerate alternating") != std::string::npos);
  }
}

TEST_CASE("exchange double isomorphism for index-2 subgroups") {
  AbelianGroup G(0, {2, 2, 2});
  GroupElement a = G.make({1, 0, 0}), b = G.make({0, 1, 0}), t = G.make({0, 0, 1});
  Subgroup T1(G, {a, b});
  Bicharacter beta = fixture::symplectic(T1);
  std::vector<Subgroup> T2s{Subgroup(G, {G.add(a, t), b}), Subgroup(G, {a, G.add(b, t)}),
                            Subgroup(G, {G.add(a, t), G.add(b, t)})};
  int checked = 0;
  for (const auto& tau : quadratic_forms_with_polar(beta))
    for (const auto& T2 : T2s) {
      Report r = check_exchange_iso(T1, tau, t, T2);
      CHECK(r.ok);
      ++checked;
    }
  CHECK(checked == 12);
}

TEST_CASE("changing the quadratic form inside an exchange double") {
  AbelianGroup G(0, {2, 2, 2});
  GroupElement t = G.make({0, 0, 1});
  Subgroup T1(G, {G.make({1, 0, 0}), G.make({0, 1, 0})});
  auto forms = quadratic_forms_with_polar(fixture::symplectic(T1));
  for (const auto& f : forms)
    for (const auto& g : forms) CHECK(check_remove_tau(T1, f, g, t).ok);
  Subgroup T0(G, {});
  CHECK(check_remove_tau(T0, QuadraticForm::trivial(T0), QuadraticForm::trivial(T0), t).ok);
}
