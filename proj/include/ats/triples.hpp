#pragma once
// Associative triple systems of the second kind, the triple carried by the
// degree -1 part of a 3-graded algebra with involution, and the Loos envelope.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ats/omega.hpp"

namespace ats {

class TripleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// W with the single ternary operator "tri"; degrees add under "tri".
struct TripleSystem {
  OmegaAlgebra alg;
  std::optional<Grading> grading;
  bool verified = false;

  int dim() const { return alg.dim(); }
  const Operator& tri() const { return alg.op("tri"); }
};

/// Empty product on dim basis vectors; fill alg.op("tri").table directly.
TripleSystem make_triple(int dim, std::vector<std::string> labels = {});
/// F with {x,y,z} = xyz.
TripleSystem scalar_triple();
TripleSystem zero_triple(int dim);
/// Componentwise product on W1 + W2.
TripleSystem direct_sum(const TripleSystem& a, const TripleSystem& b);

/// W = A_{-1} with {x,y,z} = x inv(y) z. G must have the Z slot first; the
/// remaining coordinates, if any, grade W.
TripleSystem triple_from(const OmegaAlgebra& A, const Grading& G);

struct At2Options {
  int exhaustive_max_dim = 12;
  long samples = 10000;
  uint64_t seed = 0;
};
/// {{u,v,x},y,z} = {u,{y,x,v},z} = {u,v,{x,y,z}} on basis 5-tuples, all of them
/// up to the cutoff and seeded samples above it. Sets nothing; callers mark verified.
Report check_at2(const TripleSystem& W, const At2Options& opt = {}, Exec exec = Exec::Parallel);

/// A(W) = L + W + Wbar + R, basis in that order. L and R live in pairs of
/// dim x dim operators, flattened row-major as (first, second).
struct EnvelopeResult {
  OmegaAlgebra alg;  // "mul", "inv"
  Grading grading;   // Z slot first, z_flip
  int dim_w = 0, dim_l = 0, dim_r = 0;
  std::vector<Vec> l_basis, r_basis;  // operator pairs, length 2 dim_w^2
  LinearMap embedding;                // W -> A(W), onto the W block
  Vec e1, e2;

  int l_begin() const { return 0; }
  int w_begin() const { return dim_l; }
  int wbar_begin() const { return dim_l + dim_w; }
  int r_begin() const { return dim_l + 2 * dim_w; }
  Vec unit() const;
};

EnvelopeResult loos_envelope(const TripleSystem& W);
/// Associativity, involution and grading of A(W), the embedding identity
/// {a,b,c} = a inv(b) c, and e1, e2 as orthogonal symmetric idempotents
/// summing to 1 whose Peirce blocks are L, W, Wbar, R.
Report check_envelope(const TripleSystem& W, const EnvelopeResult& E, Exec exec = Exec::Parallel);
/// W(A(W)) has literally the same tensor and degrees as W.
bool round_trip_exact(const TripleSystem& W, const EnvelopeResult& E);

/// Triple ideal test; throws std::logic_error if it disagrees with the
/// simplicity of the envelope as an algebra with involution.
bool triple_is_simple(const TripleSystem& W, const SimplicityOptions& opt = {});

struct Reconstruction {
  TripleSystem W;
  EnvelopeResult envelope;
  LinearMap psi;  // A -> A(W(A))
  Report report;
};
/// psi(a) = a on A_{-1}, inv psi inv on A_1, products on A_0.
Reconstruction reconstruct_iso(const OmegaAlgebra& A, const Grading& G, Exec exec = Exec::Parallel);

/// A_1 A_{-1} and A_{-1} A_1 are independent and together fill A_0.
Report check_peirce(const OmegaAlgebra& A, const Grading& G);
/// e A e with the restricted operators; throws unless e is an idempotent fixed by "inv".
OmegaAlgebra corner(const OmegaAlgebra& A, const Vec& e);

/// A(psi): psi on W, inv psi inv on Wbar, psi(x)psi(y) on products. Throws
/// TripleError when psi is not an automorphism or the assignment is inconsistent.
LinearMap extend_automorphism(const TripleSystem& W, const EnvelopeResult& E, const LinearMap& psi);
/// x -> u x u^-1 on W for a Cayley unitary u = (1 - s)(1 + s)^-1 built from a
/// seeded skew element s of degree 0 in every grading coordinate.
LinearMap random_triple_automorphism(const TripleSystem& W, const EnvelopeResult& E, uint64_t seed);

}  // namespace ats
