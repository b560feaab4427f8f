#pragma once
// Graded division algebras, their exchange doubles and the 3-graded matrix
// algebras over them with the block involutions X -> Phi^-1 X^* Phi.

#include <optional>
#include <string>
#include <vector>

#include "ats/group.hpp"
#include "ats/omega.hpp"

namespace ats {

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// a_i, b_i with beta(a_i, b_i) of order l_i, pairs mutually orthogonal.
struct SymplecticBasis {
  std::vector<GroupElement> a, b;
  std::vector<long> l;
  /// coords[k] = (x_1, y_1, x_2, y_2, ...) for the k-th element of T.
  std::vector<std::vector<long>> coords;
};

SymplecticBasis symplectic_basis(const Bicharacter& beta);

/// Graded division algebra with one-dimensional components, basis X_s indexed
/// like support.elements(): X_s X_u = c(s,u) X_{su}.
struct DivisionAlgebra {
  AbelianGroup G;
  Subgroup support;
  Bicharacter beta;
  std::vector<Scalar> c;
  std::vector<int> sum;
  /// phi0(X_s) = inv_sign[s] X_s; empty without involution.
  std::vector<int> inv_sign;
  /// Realizing matrices (standard realizations only).
  std::vector<Matrix> X;
  bool exchange = false;
  GroupElement t;  // exchange element
  Subgroup base;   // T' for exchange doubles

  int size() const { return support.size(); }
  int identity_index() const { return support.index_of(G.identity()); }
  const Scalar& coef(int s, int u) const { return c[static_cast<size_t>(s) * size() + u]; }
  int prod(int s, int u) const { return sum[static_cast<size_t>(s) * size() + u]; }
  /// Index of the inverse degree and the scalar with X_s^-1 = k X_{s^-1}.
  std::pair<int, Scalar> inverse(int s) const;
  bool has_involution() const { return !inv_sign.empty(); }

  OmegaAlgebra algebra() const;
  Grading grading() const;
};

DivisionAlgebra standard_realization(const Subgroup& T, const Bicharacter& beta);
/// tau with X_t^T = tau(t) X_t; requires an elementary 2-group.
QuadraticForm transpose_form(const DivisionAlgebra& D);
DivisionAlgebra d_inv(const Subgroup& T, const Bicharacter& beta, const QuadraticForm& tau);
/// D(T, beta) with the transposition.
DivisionAlgebra d_inv(const Subgroup& T, const Bicharacter& beta);
/// Monomial exchange double: Y_u = (X_u, phi0 X_u), Y_{ut} = (X_u, -phi0 X_u).
DivisionAlgebra exchange_double(const DivisionAlgebra& D, const GroupElement& t);
/// Opposite algebra X_s o X_u = X_u X_s, same basis.
DivisionAlgebra opposite(const DivisionAlgebra& D);

/// (A + A^op, ex) with basis (b_i, phi b_i) of degree h and (b_i, -phi b_i) of degree ht.
std::pair<OmegaAlgebra, Grading> exchange_double(const OmegaAlgebra& A, const Grading& G,
                                                 const GroupElement& t);
/// (A + A^op, ex) with basis (b_i, 0) then (0, b_i); (0, b) of degree (-i, g) for b in A_(i,g).
std::pair<OmegaAlgebra, Grading> exchange_of_graded(const OmegaAlgebra& A, const Grading& G);

/// h_j = gamma_i for kappa_1 + ... + kappa_{i-1} < j <= kappa_1 + ... + kappa_i.
std::vector<GroupElement> kappa_expand(const std::vector<long>& kappa,
                                       const std::vector<GroupElement>& gamma);

/// M_n(D) with basis X_s E_ij at index (i*n + j)*|D| + s and degree
/// (d_i - d_j, h_i + s - h_j), d_i = 0 for i < k0 and 1 otherwise.
struct MatrixAlgebra {
  DivisionAlgebra D;
  int n = 0;
  int k0 = 0;
  std::vector<GroupElement> h;
  OmegaAlgebra alg;
  Grading grading;
  int index(int s, int i, int j) const { return (i * n + j) * D.size() + s; }
};

MatrixAlgebra matrix_grading(const DivisionAlgebra& D, const std::vector<GroupElement>& h0,
                             const std::vector<GroupElement>& h1);

/// dE_ij -> dE_ji from M(D, h0, h1)^op to M(D^op, -h0, -h1).
Report check_opposite_iso(const DivisionAlgebra& D, const std::vector<GroupElement>& h0,
                          const std::vector<GroupElement>& h1);

enum class Family { ExchangePair = 1, SimpleAlgebra = 2, ExchangeDivision = 3 };
std::string family_name(Family f);

/// One side of the block data. For the simple families kappa lists l odd
/// entries, then m - l even entries, then equal pairs; gamma carries g', g''
/// for each pair. For the exchange pair family every entry is a plain block.
struct BlockShape {
  std::vector<long> kappa;
  std::vector<GroupElement> gamma;
  int l = -1, m = -1;                   // -1: derive from kappa
  std::vector<int> s_signs;             // length m - l
  std::vector<GroupElement> t_values;   // length m; derived when empty
};

struct MatrixParams {
  Family family = Family::SimpleAlgebra;
  AbelianGroup G;
  Subgroup T;   // T, or T' for the exchange division family
  Bicharacter beta;
  GroupElement t;
  BlockShape b0, b1;
  int delta = 1;
  GroupElement g;
};

/// Defaults l, m from the shape and derives t_i = g^-1 g_i^-2 when absent.
void normalize(MatrixParams& p);
/// Throws ConstructionError naming the violated condition.
void validate(const MatrixParams& p);

struct BuiltAlgebra {
  Family family;
  MatrixAlgebra M;       // the matrix algebra (first summand for the exchange pair)
  SparseVec Phi;         // empty for the exchange pair
  OmegaAlgebra alg;      // with "mul" and "inv"
  Grading grading;       // Z x G, z_flip
};

/// The block matrix Phi as an element of M_n(D).
SparseVec phi_matrix(const MatrixParams& p, const MatrixAlgebra& M);
BuiltAlgebra build_M_inv(const MatrixParams& p);
/// Division algebra used by the construction.
DivisionAlgebra division_part(const MatrixParams& p);

/// Theta = f x f between exchange doubles over T1 and T2 = index-2 subgroups
/// of T1<t> not containing t, with tau2 = tau1^[t] restricted to T2.
Report check_exchange_iso(const Subgroup& T1, const QuadraticForm& tau1, const GroupElement& t,
                          const Subgroup& T2);
/// Psi(x, y) = (x, tau1(s) tau'(s) y) carries (D, phi_tau', Gamma_tau') onto
/// (D, Int(Y_t') o phi_tau1, Gamma_tau1).
Report check_remove_tau(const Subgroup& T1, const QuadraticForm& tau1,
                        const QuadraticForm& tau_prime, const GroupElement& t);

}  // namespace ats
