#include <doctest.h>

#include "support.hpp"

using namespace ats;

// The OpenMP kernels must return the same verdict and count as the serial
// reference, and the same first violations (they are ordered by tuple).

namespace {

void same(const Report& a, const Report& b) {
  CHECK(a.ok == b.ok);
  CHECK(a.checked == b.checked);
  CHECK(a.failures == b.failures);
  CHECK(a.violations == b.violations);
}

std::vector<BuiltAlgebra> corpus_algebras() {
  std::vector<BuiltAlgebra> out;
  for (const auto& f : fixture::corpus_files())
    if (JobConfig c = load_config(f.string()); c.matrix) out.push_back(build_M_inv(*c.matrix));
  return out;
}

}  // namespace

TEST_CASE("grading, involution and associativity scans") {
  for (const auto& B : corpus_algebras()) {
    same(check_grading(B.alg, B.grading, Exec::Serial), check_grading(B.alg, B.grading, Exec::Parallel));
    same(check_involution(B.alg, &B.grading, Exec::Serial), check_involution(B.alg, &B.grading, Exec::Parallel));
    same(check_associative(B.alg, Exec::Serial), check_associative(B.alg, Exec::Parallel));
  }
  // failing scans agree too
  OmegaAlgebra A = fixture::matrix_units(2);
  Grading bad = fixture::m2_three_grading(1, 1);
  same(check_grading(A, bad, Exec::Serial), check_grading(A, bad, Exec::Parallel));
}

TEST_CASE("morphism scans") {
  for (const auto& B : corpus_algebras()) {
    Matrix id = Matrix::identity(B.alg.dim());
    same(check_morphism(B.alg, B.alg, id, &B.grading, &B.grading, Exec::Serial),
         check_morphism(B.alg, B.alg, id, &B.grading, &B.grading, Exec::Parallel));
    Matrix inv = B.alg.unary_matrix("inv");
    same(check_morphism(B.alg, B.alg, inv, nullptr, nullptr, Exec::Serial),
         check_morphism(B.alg, B.alg, inv, nullptr, nullptr, Exec::Parallel));
  }
}

TEST_CASE("AT2 scans exhaustive and sampled") {
  for (const auto& B : corpus_algebras()) {
    TripleSystem W = triple_from(B.alg, B.grading);
    At2Options o;
    o.exhaustive_max_dim = 3;
    o.samples = 300;
    o.seed = 4;
    same(check_at2(W, o, Exec::Serial), check_at2(W, o, Exec::Parallel));
  }
}

TEST_CASE("isomorphism search") {
  CensusOptions o;
  o.max_dim = 8;
  auto labels = enumerate_labels(AbelianGroup(0, {4}), o);
  REQUIRE(labels.size() > 4);
  for (size_t i = 0; i < 5; ++i)
    for (size_t j = 0; j < 5; ++j) {
      BuiltAlgebra A = build_M_inv(labels[i].p), B = build_M_inv(labels[j].p);
      SearchOptions s;
      s.exec = Exec::Serial;
      SearchResult rs = search_isomorphism(labels[i], A, labels[j], B, s);
      s.exec = Exec::Parallel;
      SearchResult rp = search_isomorphism(labels[i], A, labels[j], B, s);
      CHECK(rs.map.has_value() == rp.map.has_value());
      CHECK(rs.exhausted == rp.exhausted);
      if (rs.map && rp.map) CHECK(*rs.map == *rp.map);
    }
}
