#pragma once
// Small fixtures shared by the test executables. Everything here is built by
// hand from matrix units so it stays independent of the constructions module.

#include <filesystem>
#include <string>
#include <vector>

#include "ats/classify.hpp"
#include "ats/config.hpp"
#include "ats/triples.hpp"

namespace fixture {

using namespace ats;

inline OmegaAlgebra scalar_field() {
  OmegaAlgebra F(1, {"1"});
  F.add_operator("mul", 2).table[0] = {{0, Scalar(1)}};
  return F;
}

// M_n(F), E_ij at index i*n + j.
inline OmegaAlgebra matrix_units(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
  OmegaAlgebra A(n * n, labels);
  Operator& m = A.add_operator("mul", 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) m.table[A.flat({i * n + j, j * n + k})] = {{i * n + k, Scalar(1)}};
  return A;
}

inline void add_transpose(OmegaAlgebra& A, int n) {
  Operator& t = A.add_operator("inv", 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.table[i * n + j] = {{j * n + i, Scalar(1)}};
}

// Z-grading of M_2 with E12 in degree -1 and E21 in degree 1.
inline Grading m2_three_grading(long e12 = -1, long e21 = 1) {
  AbelianGroup Z(1, {});
  return Grading{Z, {Z.make({0}), Z.make({e12}), Z.make({e21}), Z.make({0})}, true};
}

inline Subgroup klein(const AbelianGroup& G) { return Subgroup(G, {G.make({1, 0}), G.make({0, 1})}); }

inline Bicharacter symplectic(const Subgroup& T) {
  int r = static_cast<int>(T.gens().size());
  std::vector<std::vector<long>> k(r, std::vector<long>(r, 0));
  for (int i = 0; i + 1 < r; i += 2) k[i][i + 1] = 1, k[i + 1][i] = T.gen_orders()[i] - 1;
  return Bicharacter::from_generator_matrix(T, k);
}

// One block of size one per listed degree on each side, T trivial.
inline MatrixParams blocks(const AbelianGroup& G, Family f, std::vector<GroupElement> g0,
                           std::vector<GroupElement> g1) {
  MatrixParams p;
  p.family = f;
  p.G = G;
  p.T = Subgroup(G, {});
  p.beta = Bicharacter::trivial(p.T);
  p.b0.kappa.assign(g0.size(), 1);
  p.b0.gamma = std::move(g0);
  p.b1.kappa.assign(g1.size(), 1);
  p.b1.gamma = std::move(g1);
  p.g = G.identity();
  return p;
}

// W = F^2 with {x,y,z} = (x1 y2 z1, z2 y1 x2).
inline TripleSystem exchange_pair_triple() {
  TripleSystem W = make_triple(2);
  Operator& t = W.alg.op("tri");
  t.table[W.alg.flat({0, 1, 0})] = {{0, Scalar(1)}};
  t.table[W.alg.flat({1, 0, 1})] = {{1, Scalar(1)}};
  return W;
}

inline std::string corpus_dir() { return ATS_CORPUS_DIR; }

inline std::vector<std::filesystem::path> corpus_files(const std::string& prefix = {}) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir()))
    if (e.path().extension() == ".cfg" && e.path().filename().string().rfind(prefix, 0) == 0)
      out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline OmegaAlgebra without_inv(OmegaAlgebra A) {
  if (A.has("inv")) A.remove_operator("inv");
  return A;
}

inline Matrix diag(std::vector<long> d) {
  Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = Scalar(d[i]);
  return m;
}

}  // namespace fixture
