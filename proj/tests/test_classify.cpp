#include <doctest.h>

#include "support.hpp"

using namespace ats;
using fixture::blocks;

namespace {

AbelianGroup Z2(0, {2});
AbelianGroup Z4(0, {4});
AbelianGroup K(0, {2, 2});

GroupElement z2(long a) { return Z2.make({a}); }
GroupElement z4(long a) { return Z4.make({a}); }

// kappa = (2) on both sides with one even block of the given sign.
MatrixParams even_pair(int delta) {
  MatrixParams p = blocks(Z2, Family::SimpleAlgebra, {z2(0)}, {z2(0)});
  p.b0.kappa = {2};
  p.b1.kappa = {2};
  p.b0.s_signs = {delta};
  p.b1.s_signs = {delta};
  p.delta = delta;
  return p;
}

Bicharacter symplectic_z2_4(const Subgroup& T, bool paired_01) {
  std::vector<std::vector<long>> k(4, std::vector<long>(4, 0));
  auto pair = [&](int i, int j) { k[i][j] = k[j][i] = 1; };
  if (paired_01) pair(0, 1), pair(2, 3);
  else pair(0, 2), pair(1, 3);
  return Bicharacter::from_generator_matrix(T, k);
}

}  // namespace

TEST_CASE("coset multisets") {
  Subgroup one(K, {});
  GroupElement e = K.identity(), a = K.make({1, 0}), b = K.make({0, 1}), ab = K.make({1, 1});
  XiMultiset x = xi_multiset({1}, {e}, one);
  CHECK(x.counts == std::map<GroupElement, int>{{e, 1}});
  XiMultiset y = xi_multiset({2, 1}, {a, b}, one);
  CHECK(y.counts == std::map<GroupElement, int>{{a, 2}, {b, 1}});
  CHECK(y.total() == 3);
  Subgroup B(K, {b});
  XiMultiset z = xi_multiset({1, 1}, {a, ab}, B);
  CHECK(z.counts == std::map<GroupElement, int>{{a, 2}});
  CHECK(coset_rep(ab, B) == a);
}

TEST_CASE("shifts between coset multisets") {
  Subgroup one(K, {});
  GroupElement e = K.identity(), a = K.make({1, 0});
  XiMultiset x = xi_multiset({1}, {a}, one), y = xi_multiset({1}, {e}, one);
  CHECK(xi_shift_equal(x, x) == e);
  CHECK(xi_shift_equal(x, y) == a);
  CHECK(xi_shift(y, a) == x);
  // {e:1, a:2} and {e:2, a:1} differ by the shift a
  XiMultiset p = xi_multiset({1, 2}, {e, a}, one), q = xi_multiset({2, 1}, {e, a}, one);
  CHECK(xi_shifts(q, p) == std::vector<GroupElement>{a});
  // {e:1, a:2} and {e:1, b:2}: none of the four shifts matches
  XiMultiset u = xi_multiset({1, 2}, {e, K.make({0, 1})}, one);
  CHECK(xi_shifts(p, u).empty());
  CHECK_FALSE(xi_shift_equal(p, u).has_value());
  XiMultiset r = xi_multiset({1}, {z4(1)}, Subgroup(Z4, {}));
  CHECK(xi_inverse(r).counts == std::map<GroupElement, int>{{z4(3), 1}});
}

TEST_CASE("shift candidates are exactly the group elements that work") {
  Subgroup one(Z4, {});
  XiMultiset x = xi_multiset({1, 1}, {z4(0), z4(2)}, one);
  for (long g = 0; g < 4; ++g) {
    XiMultiset y = xi_shift(x, z4(g));
    auto s = xi_shifts(y, x);
    // x is stable under +2, so two shifts always qualify
    CHECK(s.size() == 2);
    for (const auto& h : s) CHECK(xi_shift(x, h) == y);
  }
}

TEST_CASE("decisions on small labels") {
  ClassLabel a = make_label(blocks(Z2, Family::SimpleAlgebra, {z2(0)}, {z2(0)}));
  Decision self = decide_iso(a, a);
  CHECK(self.iso);
  CHECK(self.cert.shift == Z2.identity());

  ClassLabel b = make_label(blocks(Z2, Family::SimpleAlgebra, {z2(1)}, {z2(1)}));
  Decision ab = decide_iso(a, b);
  CHECK(ab.iso);
  CHECK(ab.cert.shift == z2(1));

  ClassLabel p = make_label(even_pair(1)), m = make_label(even_pair(-1));
  Decision pm = decide_iso(p, m);
  CHECK_FALSE(pm.iso);
  CHECK(pm.cert.reason.find("delta") != std::string::npos);
}

TEST_CASE("witnesses") {
  ClassLabel a = make_label(blocks(Z2, Family::SimpleAlgebra, {z2(0)}, {z2(0)}));
  CHECK(witness_isomorphism(a, a, decide_iso(a, a).cert).is_identity());

  // shifting every block degree by a leaves the grading unchanged
  ClassLabel b = make_label(blocks(Z2, Family::SimpleAlgebra, {z2(1)}, {z2(1)}));
  LinearMap w = witness_isomorphism(a, b, decide_iso(a, b).cert);
  CHECK(w.is_identity());

  ClassLabel c = make_label(blocks(Z4, Family::ExchangePair, {z4(1)}, {z4(0)}));
  ClassLabel d = make_label(blocks(Z4, Family::ExchangePair, {z4(3)}, {z4(0)}));
  Decision cd = decide_iso(c, d);
  REQUIRE(cd.iso);
  CHECK(cd.cert.opposite);
  LinearMap f = witness_isomorphism(c, d, cd.cert);
  BuiltAlgebra C = build_M_inv(c.p), D = build_M_inv(d.p);
  CHECK(check_morphism(C.alg, D.alg, f, &C.grading, &D.grading).ok);
  CHECK(rank(f) == C.alg.dim());
}

TEST_CASE("delta sign pair is refuted by exhausting the search") {
  ClassLabel p = make_label(even_pair(1)), m = make_label(even_pair(-1));
  BuiltAlgebra P = build_M_inv(p.p), M = build_M_inv(m.p);
  IntrinsicInvariants ip = intrinsic_invariants(P.alg, P.grading), im = intrinsic_invariants(M.alg, M.grading);
  CHECK(compare_invariants(ip, im).empty());
  RefutationReport r = refute_isomorphism(p, P, ip, m, M, im);
  CHECK(r.kind == Refutation::Search);
  CHECK(r.candidates > 0);
}

TEST_CASE("distinct bicharacters on Z2^4 differ in the extracted commutation factor") {
  AbelianGroup G(0, {2, 2, 2, 2});
  Subgroup T(G, {G.make({1, 0, 0, 0}), G.make({0, 1, 0, 0}), G.make({0, 0, 1, 0}), G.make({0, 0, 0, 1})});
  DivisionAlgebra D1 = standard_realization(T, symplectic_z2_4(T, true));
  DivisionAlgebra D2 = standard_realization(T, symplectic_z2_4(T, false));
  IntrinsicInvariants i1 = intrinsic_invariants(D1.algebra(), D1.grading(), false);
  IntrinsicInvariants i2 = intrinsic_invariants(D2.algebra(), D2.grading(), false);
  REQUIRE(i1.beta.has_value());
  CHECK(i1.dims == i2.dims);
  CHECK(compare_invariants(i1, i2).find("bicharacter") != std::string::npos);
  auto b1 = extract_bicharacter(D1.algebra(), D1.grading());
  for (const auto& x : T.elements())
    for (const auto& y : T.elements()) CHECK(b1.at({x, y}) == D1.beta.eval(x, y));
}

TEST_CASE("different dimension functions are told apart") {
  ClassLabel a = make_label(blocks(Z2, Family::SimpleAlgebra, {z2(0)}, {z2(0)}));
  ClassLabel b = make_label(blocks(Z2, Family::SimpleAlgebra, {z2(0)}, {z2(1)}));
  CHECK_FALSE(decide_iso(a, b).iso);
  BuiltAlgebra A = build_M_inv(a.p), B = build_M_inv(b.p);
  IntrinsicInvariants ia = intrinsic_invariants(A.alg, A.grading), ib = intrinsic_invariants(B.alg, B.grading);
  CHECK(compare_invariants(ia, ib).find("dim") != std::string::npos);
  CHECK(refute_isomorphism(a, A, ia, b, B, ib).kind == Refutation::Invariant);
}

TEST_CASE("center of an exchange double sits in degrees e and t") {
  AbelianGroup G(0, {2, 2, 2});
  Subgroup T(G, {G.make({1, 0, 0}), G.make({0, 1, 0})});
  GroupElement t = G.make({0, 0, 1});
  DivisionAlgebra X = exchange_double(d_inv(T, fixture::symplectic(T)), t);
  IntrinsicInvariants inv = intrinsic_invariants(X.algebra(), X.grading());
  CHECK(inv.center_support == std::vector<GroupElement>{G.identity(), t});
  CHECK(inv.graded_simple);
  CHECK_FALSE(inv.simple);
}

TEST_CASE("decisions are symmetric and reflexive over enumerated labels") {
  CensusOptions o;
  o.max_dim = 8;
  o.max_T = 1;
  for (const auto& G : {Z2, Z4}) {
    auto labels = enumerate_labels(G, o);
    REQUIRE(!labels.empty());
    for (size_t i = 0; i < labels.size(); ++i) {
      CHECK(decide_iso(labels[i], labels[i]).iso);
      for (size_t j = i + 1; j < labels.size(); ++j)
        CHECK(decide_iso(labels[i], labels[j]).iso == decide_iso(labels[j], labels[i]).iso);
    }
  }
}

TEST_CASE("census on Z2 up to dimension 4") {
  CensusOptions o;
  o.max_dim = 4;
  Census c = run_census(Z2, o);
  CHECK(c.ok());
  CHECK(c.inconclusive == 0);
  CHECK(c.contradictions == 0);
  CHECK(c.labels.size() == 4);
  CHECK(c.witnessed == c.yes);
  CHECK(c.refuted_invariant + c.refuted_search == c.no);
}

TEST_CASE("census on Z4 up to dimension 8") {
  CensusOptions o;
  o.max_dim = 8;
  Census c = run_census(Z4, o);
  CHECK(c.ok());
  CHECK(c.inconclusive == 0);
  CHECK(c.witnessed == c.yes);
  CHECK(c.refuted_invariant + c.refuted_search == c.no);
  // classes are the connected components of the YES pairs
  for (const auto& pr : c.pairs) CHECK((c.class_of[pr.i] == c.class_of[pr.j]) == pr.decision.iso);
}
