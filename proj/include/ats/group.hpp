#pragma once
// Finitely generated abelian groups Z^r x Z/m1 x ... x Z/ms, written additively.

#include <map>
#include <string>
#include <vector>

#include "ats/scalar.hpp"

namespace ats {

struct GroupElement {
  std::vector<long> c;
  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.c == b.c; }
  friend bool operator!=(const GroupElement& a, const GroupElement& b) { return a.c != b.c; }
  friend bool operator<(const GroupElement& a, const GroupElement& b) { return a.c < b.c; }
};

class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AbelianGroup {
 public:
  AbelianGroup() = default;
  AbelianGroup(int free_rank, std::vector<long> torsion);
  /// Parses "Z^r x Z/m1 x Z/m2"; "1" or "" is the trivial group.
  static AbelianGroup parse(const std::string& text);

  int free_rank() const { return free_rank_; }
  const std::vector<long>& torsion() const { return torsion_; }
  int ncoords() const { return free_rank_ + static_cast<int>(torsion_.size()); }
  bool is_finite() const { return free_rank_ == 0; }
  /// Z x G with the new free coordinate first.
  AbelianGroup with_z() const;
  /// G from Z x G (drops the first coordinate, which must be free).
  AbelianGroup drop_z() const;

  GroupElement identity() const { return GroupElement{std::vector<long>(ncoords(), 0)}; }
  GroupElement make(std::vector<long> coords) const;
  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement neg(const GroupElement& a) const;
  GroupElement sub(const GroupElement& a, const GroupElement& b) const { return add(a, neg(b)); }
  GroupElement times(const GroupElement& a, long k) const;
  /// 0 for elements of infinite order.
  long order(const GroupElement& a) const;
  bool is_identity(const GroupElement& a) const;

  std::string str() const;
  /// "(g1,...,gk)", or "(i; g1,...)" when the first coordinate is the Z slot.
  std::string format(const GroupElement& a, bool z_slot = false) const;
  GroupElement parse_element(const std::string& text) const;

  friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
    return a.free_rank_ == b.free_rank_ && a.torsion_ == b.torsion_;
  }

 private:
  int free_rank_ = 0;
  std::vector<long> torsion_;
};

/// Finite subgroup generated by an ordered tuple, enumerated eagerly.
class Subgroup {
 public:
  static constexpr int kMaxOrder = 1 << 16;
  Subgroup() = default;
  Subgroup(AbelianGroup parent, std::vector<GroupElement> gens);

  const AbelianGroup& parent() const { return parent_; }
  const std::vector<GroupElement>& gens() const { return gens_; }
  const std::vector<long>& gen_orders() const { return gen_orders_; }
  const std::vector<GroupElement>& elements() const { return elems_; }
  int size() const { return static_cast<int>(elems_.size()); }
  int index_of(const GroupElement& a) const;
  bool contains(const GroupElement& a) const { return index_of(a) >= 0; }
  /// Exponents over gens() of the element at index i (first found in enumeration).
  const std::vector<long>& exponents(int i) const { return exps_[i]; }
  /// True iff the group is the internal direct product of the cyclic groups <gens>.
  bool independent() const;
  bool is_elementary_2() const;
  long exponent() const;
  bool same_set(const Subgroup& o) const;
  /// The subgroup generated by gens() and one more element.
  Subgroup adjoin(const GroupElement& t) const;

 private:
  AbelianGroup parent_;
  std::vector<GroupElement> gens_;
  std::vector<long> gen_orders_;
  std::vector<GroupElement> elems_;
  std::vector<std::vector<long>> exps_;
  std::map<GroupElement, int> index_;
};

/// beta(s,t) = zeta_M^e(s,t) with M the exponent of the domain.
class Bicharacter {
 public:
  Bicharacter() = default;
  /// k[i][j] is the exponent of zeta_{gcd(o_i,o_j)} in beta(gen_i, gen_j);
  /// the generators must be independent.
  static Bicharacter from_generator_matrix(const Subgroup& dom,
                                           const std::vector<std::vector<long>>& k);
  static Bicharacter from_table(const Subgroup& dom, long modulus, std::vector<long> table);
  static Bicharacter trivial(const Subgroup& dom);

  const Subgroup& domain() const { return dom_; }
  long modulus() const { return m_; }
  /// Exponent of zeta_M at element indices (i, j).
  long exponent(int i, int j) const { return e_[static_cast<size_t>(i) * dom_.size() + j]; }
  Scalar eval(const GroupElement& s, const GroupElement& t) const;
  Scalar eval_index(int i, int j) const;
  bool is_alternating() const;
  bool is_nondegenerate_alternating() const;
  bool is_multiplicative() const;
  /// Same domain set and same values.
  bool equals(const Bicharacter& o) const;

 private:
  Subgroup dom_;
  long m_ = 1;
  std::vector<long> e_;
};

/// Sign function on an elementary abelian 2-group.
class QuadraticForm {
 public:
  QuadraticForm() = default;
  /// signs indexed like dom.elements(); each +1 or -1.
  QuadraticForm(Subgroup dom, std::vector<int> signs);
  static QuadraticForm trivial(const Subgroup& dom);
  const Subgroup& domain() const { return dom_; }
  int operator()(const GroupElement& t) const;
  int at(int i) const { return s_[i]; }
  const std::vector<int>& signs() const { return s_; }
  bool equals(const QuadraticForm& o) const;

 private:
  Subgroup dom_;
  std::vector<int> s_;
};

Bicharacter polar_form(const QuadraticForm& tau);
/// beta^[t](u t^a, v t^b) = beta(u, v).
Bicharacter extend_beta(const Bicharacter& beta, const GroupElement& t);
/// tau^[t](u t^k) = tau(u) (-1)^k.
QuadraticForm extend_tau(const QuadraticForm& tau, const GroupElement& t);
/// All quadratic forms on dom whose polar form is beta.
std::vector<QuadraticForm> quadratic_forms_with_polar(const Bicharacter& beta);

}  // namespace ats
