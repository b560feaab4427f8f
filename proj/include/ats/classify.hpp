#pragma once
// Isomorphism invariants, decisions and certificates for the three families
// of 3-graded algebras with involution, and the census over small groups.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ats/constructions.hpp"

namespace ats {

/// Cosets gT with multiplicity, keyed by the smallest coordinate tuple in the coset.
struct XiMultiset {
  AbelianGroup G;
  Subgroup T;
  std::map<GroupElement, int> counts;

  int total() const;
  std::string str() const;
  friend bool operator==(const XiMultiset& a, const XiMultiset& b) { return a.counts == b.counts; }
};

GroupElement coset_rep(const GroupElement& g, const Subgroup& T);
XiMultiset xi_multiset(const std::vector<long>& kappa, const std::vector<GroupElement>& gamma,
                       const Subgroup& T);
XiMultiset xi_shift(const XiMultiset& x, const GroupElement& g);
/// Entrywise inverse g T -> g^-1 T.
XiMultiset xi_inverse(const XiMultiset& x);
/// Every canonical g with x = g y, identity first when it qualifies.
std::vector<GroupElement> xi_shifts(const XiMultiset& x, const XiMultiset& y);
std::optional<GroupElement> xi_shift_equal(const XiMultiset& x, const XiMultiset& y);

/// Normalized parameters plus the block multisets modulo the support of D.
struct ClassLabel {
  MatrixParams p;
  Subgroup support;
  XiMultiset xi0, xi1;
  std::string name;

  std::string str() const;
};

ClassLabel make_label(MatrixParams p, std::string name = {});

struct Certificate {
  bool opposite = false;
  GroupElement shift;
  std::string reason;  // violated condition for NO, branch summary for YES
};

struct Decision {
  bool iso = false;
  Certificate cert;
};

Decision decide_iso(const ClassLabel& a, const ClassLabel& b);

struct SearchOptions {
  long cap = 1000000;
  Exec exec = Exec::Parallel;
  /// Restrict to one branch and shift (from a certificate).
  std::optional<Certificate> hint;
};

struct SearchResult {
  std::optional<LinearMap> map;
  long candidates = 0;
  bool exhausted = false;  // every candidate in the structured family was tried
};

/// Monomial maps x -> P rho(x) P^-1 between the built algebras, each verified
/// with check_morphism (operators and gradings).
SearchResult search_isomorphism(const ClassLabel& a, const BuiltAlgebra& A, const ClassLabel& b,
                                const BuiltAlgebra& B, const SearchOptions& opt = {});

/// The map named by a YES certificate, verified. Throws std::logic_error if
/// no verified map is found.
LinearMap witness_isomorphism(const ClassLabel& a, const ClassLabel& b, const Certificate& cert);

struct IntrinsicInvariants {
  std::map<GroupElement, int> dims;
  std::vector<GroupElement> center_support;
  bool graded_simple = false;  // without the involution
  bool simple = false;         // without the involution
  /// Graded division inputs only: beta(g,h) from x_g x_h = beta x_h x_g and the inv signs.
  std::optional<std::map<std::pair<GroupElement, GroupElement>, Scalar>> beta;
  std::optional<std::map<GroupElement, int>> inv_signs;
};

IntrinsicInvariants intrinsic_invariants(const OmegaAlgebra& A, const Grading& G,
                                         bool with_simplicity = true);
/// Graded division algebra bicharacter; throws std::invalid_argument otherwise.
std::map<std::pair<GroupElement, GroupElement>, Scalar> extract_bicharacter(const OmegaAlgebra& A,
                                                                            const Grading& G);
/// Names the first differing invariant, empty if none.
std::string compare_invariants(const IntrinsicInvariants& a, const IntrinsicInvariants& b);

enum class Refutation { Invariant, Search, Inconclusive, Contradiction };
std::string refutation_name(Refutation r);

struct RefutationReport {
  Refutation kind = Refutation::Inconclusive;
  std::string detail;
  long candidates = 0;
};

RefutationReport refute_isomorphism(const ClassLabel& a, const BuiltAlgebra& A,
                                    const IntrinsicInvariants& ia, const ClassLabel& b,
                                    const BuiltAlgebra& B, const IntrinsicInvariants& ib,
                                    const SearchOptions& opt = {});

struct CensusOptions {
  int max_dim = 8;
  int max_T = 1;
  int max_rows = 4;
  long cap = 1000000;
  Exec exec = Exec::Parallel;
};

struct CensusPair {
  int i = 0, j = 0;
  Decision decision;
  bool symmetric = true;
  bool witness_ok = false;
  RefutationReport refutation;
};

struct Census {
  std::vector<ClassLabel> labels;
  std::vector<CensusPair> pairs;  // i < j
  std::vector<int> class_of;
  int yes = 0, no = 0, witnessed = 0, refuted_invariant = 0, refuted_search = 0;
  int inconclusive = 0, contradictions = 0, asymmetric = 0, reflexive_failures = 0;
  bool ok() const;
};

/// All valid labels on G within the bounds, in a fixed enumeration order.
std::vector<ClassLabel> enumerate_labels(const AbelianGroup& G, const CensusOptions& opt);
Census run_census(const AbelianGroup& G, const CensusOptions& opt);

}  // namespace ats
