#include <doctest.h>

#include <map>
#include <random>

#include "ats/scalar.hpp"

using ats::Scalar;

namespace {

// Independent reference: integer polynomials reduced modulo a monic cyclotomic
// polynomial written out by hand.
using Poly = std::vector<long>;

const std::map<int, Poly>& hand_cyclotomics() {
  static const std::map<int, Poly> m{
      {3, {1, 1, 1}}, {4, {1, 0, 1}}, {5, {1, 1, 1, 1, 1}}, {8, {1, 0, 0, 0, 1}}, {12, {1, 0, -1, 0, 1}}};
  return m;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly reduce(Poly p, const Poly& phi) {
  size_t d = phi.size() - 1;
  for (size_t k = p.size(); k-- > d;) {
    long lead = p[k];
    for (size_t i = 0; i <= d; ++i) p[k - d + i] -= lead * phi[i];
  }
  p.resize(d);
  return p;
}

Scalar from_ints(int n, const Poly& p) {
  std::vector<mpq_class> q(p.begin(), p.end());
  return Scalar::from_poly(n, q);
}

Poly random_poly(std::mt19937_64& rng, size_t len) {
  std::uniform_int_distribution<long> d(-4, 4);
  Poly p(len);
  for (auto& x : p) x = d(rng);
  return p;
}

}  // namespace

TEST_CASE("roots of unity at small orders") {
  CHECK(Scalar::root_of_unity(1, 1, 0) == Scalar(1));
  CHECK(Scalar::root_of_unity(2, 2, 1) == Scalar(-1));
  Scalar i = Scalar::root_of_unity(4, 4, 1);
  CHECK(i * i == Scalar(-1));
  CHECK(i.pow(4) == Scalar(1));
  CHECK(i.inverse() == -i);
}

TEST_CASE("zeta4 squared reduces to -1 modulo x^2+1") {
  Poly sq = reduce(poly_mul({0, 1}, {0, 1}), hand_cyclotomics().at(4));
  CHECK(sq == Poly{-1, 0});
  CHECK(from_ints(4, sq) == Scalar(-1));
  Scalar z = Scalar::root_of_unity(4, 4, 1);
  CHECK(z * z == from_ints(4, sq));
}

TEST_CASE("zeta3 plus its square is -1") {
  Poly s = reduce({0, 1, 1}, hand_cyclotomics().at(3));
  CHECK(s == Poly{-1, 0});
  Scalar z = Scalar::root_of_unity(3, 3, 1);
  CHECK(z + z * z == Scalar(-1));
}

TEST_CASE("rational arithmetic") {
  CHECK(Scalar::rational(1, 2) + Scalar::rational(1, 2) == Scalar(1));
  CHECK(Scalar(-1).inverse() == Scalar(-1));
  CHECK(Scalar::rational(2, 4) == Scalar::rational(1, 2));
  CHECK_THROWS_AS(Scalar(0).inverse(), ats::ScalarError);
}

TEST_CASE("cyclotomic polynomials match the hand table") {
  for (const auto& [n, phi] : hand_cyclotomics()) {
    CAPTURE(n);
    CHECK(ats::cyclotomic_poly(n) == phi);
    CHECK(ats::euler_phi(n) == static_cast<int>(phi.size()) - 1);
  }
}

TEST_CASE("products agree with hand reduction on random elements") {
  std::mt19937_64 rng(7);
  for (const auto& [n, phi] : hand_cyclotomics()) {
    size_t d = phi.size() - 1;
    for (int trial = 0; trial < 40; ++trial) {
      Poly a = random_poly(rng, d), b = random_poly(rng, d);
      CAPTURE(n);
      CHECK(from_ints(n, a) * from_ints(n, b) == from_ints(n, reduce(poly_mul(a, b), phi)));
    }
  }
}

TEST_CASE("field axioms on random elements of Q(zeta12)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    Scalar a = from_ints(12, random_poly(rng, 4)), b = from_ints(12, random_poly(rng, 4)),
           c = from_ints(12, random_poly(rng, 4));
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a - a == Scalar(0));
    if (!a.is_zero()) {
      CHECK(a * a.inverse() == Scalar(1));
      CHECK((b / a) * a == b);
    }
  }
}

TEST_CASE("embedding preserves values") {
  Scalar i = Scalar::root_of_unity(4, 4, 1);
  Scalar j = i.embed(12);
  CHECK(j.conductor() == 12);
  CHECK(j * j == Scalar(-1));
  CHECK(Scalar::root_of_unity(12, 4, 1) == i);
  CHECK(Scalar::root_of_unity(12, 12, 3) * Scalar::root_of_unity(12, 12, 3) == Scalar(-1));
}

TEST_CASE("parse and print round trip") {
  Scalar s = Scalar::parse("-1/2 + z{4}^1");
  CHECK(s == Scalar::rational(-1, 2) + Scalar::root_of_unity(4, 4, 1));
  CHECK(Scalar::parse(s.str()) == s);
  CHECK(Scalar::parse("3/6") == Scalar::rational(1, 2));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    Scalar a = from_ints(8, random_poly(rng, 4));
    CHECK(Scalar::parse(a.str()) == a);
  }
  CHECK_THROWS_AS(Scalar::parse("1 +"), ats::ScalarError);
}
