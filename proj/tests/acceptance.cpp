// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "ats/job.hpp"
#include "support.hpp"

using namespace ats;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream note;
  void require(bool c, const std::string& what) {
    if (!c && ok) note << "first failure: " << what << "; ";
    ok = ok && c;
  }
};

struct Loaded {
  std::string name;
  JobConfig cfg;
};

std::vector<Loaded> corpus() {
  std::vector<Loaded> out;
  for (const auto& f : fixture::corpus_files()) out.push_back({f.stem().string(), load_config(f.string())});
  return out;
}

bool has_triple(const JobConfig& c) { return c.triple || c.matrix; }

Subgroup standard_gens(const AbelianGroup& G) {
  std::vector<GroupElement> g;
  for (int i = 0; i < G.ncoords(); ++i) {
    std::vector<long> c(G.ncoords(), 0);
    c[i] = 1;
    g.push_back(G.make(c));
  }
  return Subgroup(G, g);
}

void realization(Outcome& o) {
  for (auto tors : {std::vector<long>{2, 2}, {2, 2, 2, 2}, {3, 3}, {4, 4}}) {
    AbelianGroup G(0, tors);
    Subgroup T = standard_gens(G);
    Bicharacter beta = fixture::symplectic(T);
    DivisionAlgebra D = standard_realization(T, beta);
    std::string g = G.str();
    o.require(D.size() == T.size() && D.X.front().rows * D.X.front().rows == T.size(), g + " dim");
    const auto& E = T.elements();
    for (int s = 0; s < D.size(); ++s)
      for (int u = 0; u < D.size(); ++u)
        o.require(D.X[s] * D.X[u] == beta.eval(E[s], E[u]) * (D.X[u] * D.X[s]), g + " commutation");
    SymplecticBasis sb = symplectic_basis(beta);
    for (size_t i = 0; i < sb.l.size(); ++i)
      for (const auto& x : {sb.a[i], sb.b[i]}) {
        Matrix X = D.X[T.index_of(x)], P = Matrix::identity(X.rows);
        for (long k = 0; k < sb.l[i]; ++k) P = P * X;
        o.require(P.is_identity(), g + " generator order");
      }
    o.require(is_simple(D.algebra()), g + " simple");
    o.note << g << " ";
  }
}

void involutions(Outcome& o, const std::vector<Loaded>& cs) {
  int n = 0, maxdim = 0;
  for (const auto& [name, c] : cs) {
    if (c.matrix) {
      BuiltAlgebra B = build_M_inv(*c.matrix);
      o.require(check_involution(B.alg, &B.grading).ok, name);
      maxdim = std::max(maxdim, B.alg.dim());
      ++n;
    }
    if (c.division && c.division->T.is_elementary_2()) {
      const DivisionInput& d = *c.division;
      DivisionAlgebra D = d.tau ? d_inv(d.T, d.beta, *d.tau) : d_inv(d.T, d.beta);
      if (d.t) D = exchange_double(D, *d.t);
      OmegaAlgebra A = D.algebra();
      Grading G = D.grading();
      o.require(check_involution(A, &G).ok, name);
      ++n;
    }
  }
  o.require(n >= 30, "fewer than 30 algebras with involution");
  o.note << n << " algebras, largest dim " << maxdim;
}

void at2(Outcome& o, const std::vector<Loaded>& cs) {
  int n = 0, sampled = 0;
  for (const auto& [name, c] : cs) {
    if (!has_triple(c)) continue;
    TripleSystem W = triple_of(c);
    At2Options a;
    a.exhaustive_max_dim = 8;
    a.samples = 10000;
    a.seed = c.seed;
    o.require(check_at2(W, a).ok, name);
    sampled += W.dim() > 8;
    ++n;
  }
  o.note << n << " triples, " << sampled << " sampled";
}

void round_trips(Outcome& o, const std::vector<Loaded>& cs) {
  int w = 0, a = 0;
  for (const auto& [name, c] : cs) {
    if (!has_triple(c)) continue;
    TripleSystem W = triple_of(c);
    o.require(round_trip_exact(W, loos_envelope(W)), name + " W(A(W))");
    ++w;
    if (c.matrix) {
      BuiltAlgebra B = build_M_inv(*c.matrix);
      Reconstruction R = reconstruct_iso(B.alg, B.grading);
      o.require(R.report.ok && rank(R.psi) == B.alg.dim(), name + " A(W(A))");
      ++a;
    }
  }
  o.note << w << " triples, " << a << " algebras";
}

void simplicity(Outcome& o, const std::vector<Loaded>& cs) {
  int n = 0, non_simple = 0;
  for (const auto& [name, c] : cs) {
    if (!has_triple(c)) continue;
    TripleSystem W = triple_of(c);
    try {
      bool s = triple_is_simple(W);
      non_simple += !s;
      ++n;
    } catch (const std::logic_error& e) {
      o.require(false, name + ": " + e.what());
    }
  }
  o.require(non_simple >= 2, "engineered non-simple triples missing");
  o.note << n << " instances agree, " << non_simple << " non-simple";
}

void peirce(Outcome& o, const std::vector<Loaded>& cs) {
  int n = 0;
  for (const auto& [name, c] : cs) {
    if (!c.matrix) continue;
    BuiltAlgebra B = build_M_inv(*c.matrix);
    if (!is_graded_simple(B.alg, B.grading)) continue;
    o.require(check_peirce(B.alg, B.grading).ok, name);
    ++n;
  }
  o.note << n << " algebras";
}

void census(Outcome& o) {
  for (const auto& G : {AbelianGroup(0, {2}), AbelianGroup(0, {4})}) {
    CensusOptions co;
    co.max_dim = 8;
    co.max_T = 4;
    Census c = run_census(G, co);
    o.require(c.ok(), G.str() + " census");
    o.require(c.witnessed == c.yes, G.str() + " unwitnessed YES");
    o.require(c.refuted_invariant + c.refuted_search == c.no, G.str() + " unrefuted NO");
    o.require(c.inconclusive == 0, G.str() + " inconclusive");
    o.note << G.str() << ": " << c.labels.size() << " labels, " << c.yes << " yes, " << c.no << " no; ";
  }
}

void exchange_doubles(Outcome& o, const std::vector<Loaded>& cs) {
  int iso = 0, rem = 0;
  for (const auto& [name, c] : cs) {
    for (const auto& x : c.exchange_iso) {
      o.require(check_exchange_iso(x.T1, x.tau1, x.t, x.T2).ok, name);
      o.require(x.T1.adjoin(x.t).gens().size() <= 3, name + " rank");
      ++iso;
    }
    for (const auto& x : c.remove_tau) {
      o.require(check_remove_tau(x.T1, x.tau1, x.tau_prime, x.t).ok, name);
      ++rem;
    }
  }
  o.require(iso >= 3 && rem >= 3, "fewer than 3 instances");
  o.note << iso << " exchange-iso, " << rem << " remove-tau";
}

void automorphisms(Outcome& o, const std::vector<Loaded>& cs) {
  int n = 0;
  for (const auto& [name, c] : cs) {
    if (!has_triple(c)) continue;
    TripleSystem W = triple_of(c);
    if (W.dim() == 0 || W.dim() > 6) continue;
    EnvelopeResult E = loos_envelope(W);
    for (uint64_t seed = 0; seed < 2; ++seed) {
      try {
        Matrix p = random_triple_automorphism(W, E, seed), q = random_triple_automorphism(W, E, seed + 7);
        Matrix A = extend_automorphism(W, E, p);
        bool ok = check_morphism(E.alg, E.alg, A, &E.grading, &E.grading).ok && rank(A) == E.alg.dim();
        for (int i = 0; i < W.dim(); ++i)
          for (int j = 0; j < W.dim(); ++j) ok = ok && A.at(E.w_begin() + i, E.w_begin() + j) == p.at(i, j);
        ok = ok && extend_automorphism(W, E, p * q) == A * extend_automorphism(W, E, q);
        o.require(ok, name + " seed " + std::to_string(seed));
        ++n;
      } catch (const TripleError& e) {
        o.require(false, name + ": " + e.what());
      }
    }
  }
  o.require(n >= 10, "fewer than 10 automorphisms");
  o.note << n << " automorphisms";
}

}  // namespace

int main() {
  std::vector<Loaded> cs = corpus();
  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"standard realizations", realization},
      {"involution suite", [&](Outcome& o) { involutions(o, cs); }},
      {"AT2 axiom", [&](Outcome& o) { at2(o, cs); }},
      {"envelope round trips", [&](Outcome& o) { round_trips(o, cs); }},
      {"simplicity transfer", [&](Outcome& o) { simplicity(o, cs); }},
      {"Peirce decomposition", [&](Outcome& o) { peirce(o, cs); }},
      {"classification census", census},
      {"exchange double isomorphisms", [&](Outcome& o) { exchange_doubles(o, cs); }},
      {"automorphism extension", [&](Outcome& o) { automorphisms(o, cs); }},
  };
  bool all = true;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.note << "exception: " << e.what();
    }
    all = all && o.ok;
    std::printf("%s %zu %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.note.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
