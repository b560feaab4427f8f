#pragma once
// Finite-dimensional multi-operator algebras stored as sparse structure tensors,
// together with gradings by homogeneous bases and the verification scans.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ats/group.hpp"
#include "ats/linalg.hpp"

namespace ats {

/// table[flat(i1,...,in)] = omega(e_i1,...,e_in), flat index with i1 most significant.
struct Operator {
  std::string name;
  int arity = 0;
  std::vector<SparseVec> table;
};

class OmegaAlgebra {
 public:
  OmegaAlgebra() = default;
  explicit OmegaAlgebra(int dim, std::vector<std::string> labels = {});

  int dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> l) { labels_ = std::move(l); }
  const std::vector<Operator>& ops() const { return ops_; }

  Operator& add_operator(const std::string& name, int arity);
  int find(const std::string& name) const;
  bool has(const std::string& name) const { return find(name) >= 0; }
  const Operator& op(const std::string& name) const;
  Operator& op(const std::string& name);
  void remove_operator(const std::string& name);

  size_t flat(const std::vector<int>& idx) const;
  std::vector<int> unflat(size_t k, int arity) const;
  size_t tuples(int arity) const;

  /// Multilinear evaluation on sparse arguments.
  SparseVec apply(const Operator& o, const std::vector<SparseVec>& args) const;
  Vec apply(const Operator& o, const std::vector<Vec>& args) const;
  Vec mul(const Vec& a, const Vec& b) const { return apply(op("mul"), {a, b}); }
  /// Matrix of a unary operator, columns are images of basis vectors.
  Matrix unary_matrix(const std::string& name) const;

 private:
  int dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<Operator> ops_;
};

/// Degrees of the basis vectors. With z_flip the operator "inv" sends degree
/// (i, g) to (-i, g); every other operator adds degrees.
struct Grading {
  AbelianGroup group;
  std::vector<GroupElement> deg;
  bool z_flip = false;

  /// Expected degree of an operator output from its argument degrees.
  GroupElement output_degree(const Operator& o, const std::vector<int>& idx) const;
  std::vector<GroupElement> support() const;
  std::vector<int> component(const GroupElement& g) const;
};

Grading trivial_grading(int dim, const AbelianGroup& group = AbelianGroup());

/// Columns are images of the source basis.
using LinearMap = Matrix;

struct Report {
  static constexpr size_t kMaxViolations = 16;
  bool ok = true;
  long checked = 0;
  long failures = 0;
  std::vector<std::string> violations;

  void fail(std::string what);
  void merge(const Report& o);
};

enum class Exec { Serial, Parallel };

Report check_grading(const OmegaAlgebra& A, const Grading& G, Exec exec = Exec::Parallel);

/// f: A -> B must satisfy f(omega(x..)) = omega(f x..) for every operator
/// present in both. With both gradings given, also f(A_g) in B_g.
Report check_morphism(const OmegaAlgebra& A, const OmegaAlgebra& B, const LinearMap& f,
                      const Grading* GA = nullptr, const Grading* GB = nullptr,
                      Exec exec = Exec::Parallel);

/// The operator "inv" squares to the identity and reverses "mul"; with a
/// z_flip grading it also sends (i,g) components onto (-i,g).
Report check_involution(const OmegaAlgebra& A, const Grading* G = nullptr,
                        Exec exec = Exec::Parallel);

/// (xy)z = x(yz) on all basis triples of "mul".
Report check_associative(const OmegaAlgebra& A, Exec exec = Exec::Parallel);

/// Smallest subspace containing seed and stable under every operator insertion.
Subspace ideal_closure(const OmegaAlgebra& A, const std::vector<Vec>& seed);

struct SimplicityOptions {
  uint64_t seed = 0;
  int random_draws = 20;
  int eigenspace_dim_cutoff = 8;
};

/// Some operator of arity >= 2 has a nonzero value.
bool has_nontrivial_product(const OmegaAlgebra& A);
/// Nontrivial product and no nonzero proper ideal among the tested seeds:
/// basis vectors, eigenvectors of central multiplications, seeded random
/// vectors and, for small dimension, eigenvectors of basis multiplications.
bool is_simple(const OmegaAlgebra& A, const SimplicityOptions& opt = {});
/// A proper nonzero ideal found by the same search, if any.
std::optional<Subspace> find_proper_ideal(const OmegaAlgebra& A, const SimplicityOptions& opt = {});

/// Adds the homogeneous projections as unary operators "pi:<degree>".
OmegaAlgebra with_projections(const OmegaAlgebra& A, const Grading& G);
bool is_graded_simple(const OmegaAlgebra& A, const Grading& G, const SimplicityOptions& opt = {});

/// Center of the operator "mul".
Subspace center(const OmegaAlgebra& A);

Grading coarsen(const Grading& G, const AbelianGroup& H,
                const std::function<GroupElement(const GroupElement&)>& alpha);
/// (i, g) -> i.
Grading coarsen_to_z(const Grading& G);
/// (i, g) -> (i mod 2, g).
Grading coarsen_z_mod2(const Grading& G);

/// Reversed "mul"; the Z slot of the degrees is negated when present.
std::pair<OmegaAlgebra, Grading> opposite(const OmegaAlgebra& A, const Grading& G);
OmegaAlgebra opposite(const OmegaAlgebra& A);

/// Structure tensors in the basis given by the columns of P (invertible).
OmegaAlgebra change_basis(const OmegaAlgebra& A, const Matrix& P);
/// Moves a grading of A along an isomorphism f: A -> B; returns B rewritten in
/// the basis f(e_i), which is homogeneous for the transported grading.
std::pair<OmegaAlgebra, Grading> transport_grading(const OmegaAlgebra& B, const LinearMap& f,
                                                   const Grading& GA);

/// Largest conductor among structure constants.
int working_conductor(const OmegaAlgebra& A);

}  // namespace ats
