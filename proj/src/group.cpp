#include "ats/group.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <sstream>

namespace ats {

namespace {

long mod(long a, long m) { return ((a % m) + m) % m; }

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

AbelianGroup::AbelianGroup(int free_rank, std::vector<long> torsion)
    : free_rank_(free_rank), torsion_(std::move(torsion)) {
  if (free_rank_ < 0) throw GroupError("negative free rank");
  for (long m : torsion_)
    if (m < 2) throw GroupError("torsion entries must be >= 2");
}

AbelianGroup AbelianGroup::parse(const std::string& text) {
  std::string s = trim(text);
  if (s.empty() || s == "1") return AbelianGroup();
  int r = 0;
  std::vector<long> tors;
  std::stringstream ss(s);
  std::string part;
  static const std::regex zfree(R"(Z(\^(\d+))?)");
  static const std::regex zmod(R"(Z/(\d+))");
  // Factors separated by 'x'.
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t nx = s.find(" x ", pos);
    std::string f = trim(s.substr(pos, nx == std::string::npos ? std::string::npos : nx - pos));
    std::smatch m;
    if (std::regex_match(f, m, zmod)) {
      tors.push_back(std::stol(m[1]));
    } else if (std::regex_match(f, m, zfree)) {
      r += m[2].matched ? std::stoi(m[2]) : 1;
    } else {
      throw GroupError("bad group factor '" + f + "' in '" + text + "'");
    }
    if (nx == std::string::npos) break;
    pos = nx + 3;
  }
  return AbelianGroup(r, tors);
}

AbelianGroup AbelianGroup::with_z() const { return AbelianGroup(free_rank_ + 1, torsion_); }

AbelianGroup AbelianGroup::drop_z() const {
  if (free_rank_ < 1) throw GroupError("no Z slot to drop");
  return AbelianGroup(free_rank_ - 1, torsion_);
}

GroupElement AbelianGroup::make(std::vector<long> coords) const {
  if (static_cast<int>(coords.size()) != ncoords())
    throw GroupError("element has " + std::to_string(coords.size()) + " coordinates, group " +
                     str() + " needs " + std::to_string(ncoords()));
  for (size_t i = 0; i < torsion_.size(); ++i)
    coords[free_rank_ + i] = mod(coords[free_rank_ + i], torsion_[i]);
  return GroupElement{std::move(coords)};
}

GroupElement AbelianGroup::add(const GroupElement& a, const GroupElement& b) const {
  std::vector<long> c(ncoords());
  for (int i = 0; i < ncoords(); ++i) c[i] = a.c[i] + b.c[i];
  return make(std::move(c));
}

GroupElement AbelianGroup::neg(const GroupElement& a) const {
  std::vector<long> c(ncoords());
  for (int i = 0; i < ncoords(); ++i) c[i] = -a.c[i];
  return make(std::move(c));
}

GroupElement AbelianGroup::times(const GroupElement& a, long k) const {
  std::vector<long> c(ncoords());
  for (int i = 0; i < ncoords(); ++i) c[i] = a.c[i] * k;
  return make(std::move(c));
}

bool AbelianGroup::is_identity(const GroupElement& a) const {
  return std::all_of(a.c.begin(), a.c.end(), [](long x) { return x == 0; });
}

long AbelianGroup::order(const GroupElement& a) const {
  for (int i = 0; i < free_rank_; ++i)
    if (a.c[i] != 0) return 0;
  long o = 1;
  for (size_t i = 0; i < torsion_.size(); ++i) {
    long m = torsion_[i];
    long x = a.c[free_rank_ + i];
    o = std::lcm(o, m / std::gcd(m, x));
  }
  return o;
}

std::string AbelianGroup::str() const {
  std::vector<std::string> parts;
  if (free_rank_ == 1) parts.push_back("Z");
  if (free_rank_ > 1) parts.push_back("Z^" + std::to_string(free_rank_));
  for (long m : torsion_) parts.push_back("Z/" + std::to_string(m));
  if (parts.empty()) return "1";
  std::string s = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) s += " x " + parts[i];
  return s;
}

std::string AbelianGroup::format(const GroupElement& a, bool z_slot) const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (i > 0) os << (z_slot && i == 1 ? "; " : ",");
    os << a.c[i];
  }
  os << ")";
  return os.str();
}

GroupElement AbelianGroup::parse_element(const std::string& text) const {
  std::string s = trim(text);
  if (s == "e") return identity();
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    throw GroupError("group element must be written (a,b,...): '" + text + "'");
  std::string body = s.substr(1, s.size() - 2);
  std::replace(body.begin(), body.end(), ';', ',');
  std::vector<long> c;
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      size_t used = 0;
      c.push_back(std::stol(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw GroupError("bad coordinate '" + tok + "' in '" + text + "'");
    }
  }
  return make(std::move(c));
}

Subgroup::Subgroup(AbelianGroup parent, std::vector<GroupElement> gens)
    : parent_(std::move(parent)), gens_(std::move(gens)) {
  long total = 1;
  for (auto& g : gens_) {
    g = parent_.make(g.c);
    long o = parent_.order(g);
    if (o == 0) throw GroupError("subgroup generator " + parent_.format(g) + " has infinite order");
    gen_orders_.push_back(o);
    total *= o;
    if (total > kMaxOrder) throw GroupError("subgroup enumeration exceeds 2^16 elements");
  }
  // Mixed-radix sweep, last generator fastest.
  size_t k = gens_.size();
  std::vector<long> e(k, 0);
  for (long n = 0; n < total; ++n) {
    GroupElement x = parent_.identity();
    for (size_t i = 0; i < k; ++i)
      if (e[i]) x = parent_.add(x, parent_.times(gens_[i], e[i]));
    if (!index_.count(x)) {
      index_[x] = static_cast<int>(elems_.size());
      elems_.push_back(x);
      exps_.push_back(e);
    }
    for (size_t i = k; i-- > 0;) {
      if (++e[i] < gen_orders_[i]) break;
      e[i] = 0;
    }
  }
}

int Subgroup::index_of(const GroupElement& a) const {
  auto it = index_.find(a);
  return it == index_.end() ? -1 : it->second;
}

bool Subgroup::independent() const {
  long prod = 1;
  for (long o : gen_orders_) prod *= o;
  return prod == size();
}

bool Subgroup::is_elementary_2() const {
  for (const auto& x : elems_)
    if (parent_.order(x) > 2) return false;
  return true;
}

long Subgroup::exponent() const {
  long m = 1;
  for (const auto& x : elems_) m = std::lcm(m, parent_.order(x));
  return m;
}

bool Subgroup::same_set(const Subgroup& o) const {
  if (!(parent_ == o.parent_) || size() != o.size()) return false;
  for (const auto& x : elems_)
    if (!o.contains(x)) return false;
  return true;
}

Subgroup Subgroup::adjoin(const GroupElement& t) const {
  auto g = gens_;
  g.push_back(t);
  return Subgroup(parent_, g);
}

Bicharacter Bicharacter::from_table(const Subgroup& dom, long modulus, std::vector<long> table) {
  Bicharacter b;
  b.dom_ = dom;
  b.m_ = modulus;
  for (auto& x : table) x = mod(x, modulus);
  b.e_ = std::move(table);
  return b;
}

Bicharacter Bicharacter::trivial(const Subgroup& dom) {
  return from_table(dom, 1, std::vector<long>(static_cast<size_t>(dom.size()) * dom.size(), 0));
}

Bicharacter Bicharacter::from_generator_matrix(const Subgroup& dom,
                                               const std::vector<std::vector<long>>& k) {
  size_t r = dom.gens().size();
  if (k.size() != r) throw GroupError("beta matrix must be " + std::to_string(r) + "x" + std::to_string(r));
  for (const auto& row : k)
    if (row.size() != r) throw GroupError("beta matrix must be square over the generators of T");
  if (!dom.independent()) throw GroupError("generators of T must be independent");
  long m = std::max<long>(dom.exponent(), 1);
  const auto& o = dom.gen_orders();
  int n = dom.size();
  std::vector<long> tab(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      long s = 0;
      for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) {
          long g = std::gcd(o[i], o[j]);
          s += k[i][j] * dom.exponents(a)[i] * dom.exponents(b)[j] % m * (m / g);
          s %= m;
        }
      tab[static_cast<size_t>(a) * n + b] = s;
    }
  return from_table(dom, m, std::move(tab));
}

Scalar Bicharacter::eval_index(int i, int j) const {
  long e = exponent(i, j);
  if (e == 0) return Scalar(1);
  return Scalar::root_of_unity(static_cast<int>(m_), static_cast<int>(m_), e);
}

Scalar Bicharacter::eval(const GroupElement& s, const GroupElement& t) const {
  int i = dom_.index_of(s), j = dom_.index_of(t);
  if (i < 0 || j < 0) throw GroupError("bicharacter evaluated outside its domain");
  return eval_index(i, j);
}

bool Bicharacter::is_alternating() const {
  for (int i = 0; i < dom_.size(); ++i)
    if (exponent(i, i) != 0) return false;
  return true;
}

bool Bicharacter::is_nondegenerate_alternating() const {
  if (!is_alternating()) return false;
  for (int i = 0; i < dom_.size(); ++i) {
    bool radical = true;
    for (int j = 0; j < dom_.size() && radical; ++j) radical = exponent(i, j) == 0;
    if (radical && !dom_.parent().is_identity(dom_.elements()[i])) return false;
  }
  return true;
}

bool Bicharacter::is_multiplicative() const {
  const auto& G = dom_.parent();
  int n = dom_.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int ab = dom_.index_of(G.add(dom_.elements()[a], dom_.elements()[b]));
      for (int c = 0; c < n; ++c) {
        if (mod(exponent(ab, c) - exponent(a, c) - exponent(b, c), m_) != 0) return false;
        if (mod(exponent(c, ab) - exponent(c, a) - exponent(c, b), m_) != 0) return false;
      }
    }
  return true;
}

bool Bicharacter::equals(const Bicharacter& o) const {
  if (!dom_.same_set(o.dom_)) return false;
  long m = std::lcm(m_, o.m_);
  for (int i = 0; i < dom_.size(); ++i)
    for (int j = 0; j < dom_.size(); ++j) {
      int oi = o.dom_.index_of(dom_.elements()[i]);
      int oj = o.dom_.index_of(dom_.elements()[j]);
      if (mod(exponent(i, j) * (m / m_) - o.exponent(oi, oj) * (m / o.m_), m) != 0) return false;
    }
  return true;
}

QuadraticForm::QuadraticForm(Subgroup dom, std::vector<int> signs)
    : dom_(std::move(dom)), s_(std::move(signs)) {
  if (!dom_.is_elementary_2()) throw GroupError("quadratic form domain must be an elementary 2-group");
  if (static_cast<int>(s_.size()) != dom_.size())
    throw GroupError("quadratic form needs " + std::to_string(dom_.size()) + " signs");
  for (int x : s_)
    if (x != 1 && x != -1) throw GroupError("quadratic form values must be +1 or -1");
  if (s_[dom_.index_of(dom_.parent().identity())] != 1) throw GroupError("quadratic form must satisfy tau(e)=1");
}

QuadraticForm QuadraticForm::trivial(const Subgroup& dom) {
  return QuadraticForm(dom, std::vector<int>(dom.size(), 1));
}

int QuadraticForm::operator()(const GroupElement& t) const {
  int i = dom_.index_of(t);
  if (i < 0) throw GroupError("quadratic form evaluated outside its domain");
  return s_[i];
}

bool QuadraticForm::equals(const QuadraticForm& o) const {
  if (!dom_.same_set(o.dom_)) return false;
  for (int i = 0; i < dom_.size(); ++i)
    if (s_[i] != o(dom_.elements()[i])) return false;
  return true;
}

Bicharacter polar_form(const QuadraticForm& tau) {
  const Subgroup& T = tau.domain();
  const auto& G = T.parent();
  int n = T.size();
  std::vector<long> tab(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int ab = T.index_of(G.add(T.elements()[a], T.elements()[b]));
      int v = tau.at(ab) * tau.at(a) * tau.at(b);
      tab[static_cast<size_t>(a) * n + b] = v == 1 ? 0 : 1;
    }
  return Bicharacter::from_table(T, 2, std::move(tab));
}

namespace {

// Writes w = u + k t with u in T, k in {0,1}.
std::pair<int, int> split_off(const Subgroup& T, const GroupElement& t, const GroupElement& w) {
  int i = T.index_of(w);
  if (i >= 0) return {i, 0};
  i = T.index_of(T.parent().sub(w, t));
  if (i < 0) throw GroupError("element outside T<t>");
  return {i, 1};
}

void check_extension(const Subgroup& T, const GroupElement& t) {
  if (T.contains(t)) throw GroupError("extension element already lies in T");
  if (T.parent().order(t) != 2) throw GroupError("extension element must have order 2");
}

}  // namespace

Bicharacter extend_beta(const Bicharacter& beta, const GroupElement& t) {
  const Subgroup& T = beta.domain();
  check_extension(T, t);
  Subgroup Tt = T.adjoin(t);
  int n = Tt.size();
  std::vector<long> tab(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    int ua = split_off(T, t, Tt.elements()[a]).first;
    for (int b = 0; b < n; ++b) {
      int ub = split_off(T, t, Tt.elements()[b]).first;
      tab[static_cast<size_t>(a) * n + b] = beta.exponent(ua, ub);
    }
  }
  return Bicharacter::from_table(Tt, beta.modulus(), std::move(tab));
}

QuadraticForm extend_tau(const QuadraticForm& tau, const GroupElement& t) {
  const Subgroup& T = tau.domain();
  check_extension(T, t);
  Subgroup Tt = T.adjoin(t);
  std::vector<int> s(Tt.size());
  for (int a = 0; a < Tt.size(); ++a) {
    auto [u, k] = split_off(T, t, Tt.elements()[a]);
    s[a] = tau.at(u) * (k ? -1 : 1);
  }
  return QuadraticForm(Tt, s);
}

std::vector<QuadraticForm> quadratic_forms_with_polar(const Bicharacter& beta) {
  const Subgroup& T = beta.domain();
  if (!T.is_elementary_2()) throw GroupError("quadratic forms need an elementary 2-group");
  const auto& G = T.parent();
  // A quadratic form is fixed by its values on an independent generating set.
  std::vector<GroupElement> basis;
  {
    Subgroup acc(G, {});
    for (const auto& x : T.elements())
      if (!acc.contains(x)) {
        basis.push_back(x);
        acc = Subgroup(G, basis);
      }
  }
  std::vector<QuadraticForm> out;
  size_t r = basis.size();
  for (unsigned mask = 0; mask < (1u << r); ++mask) {
    std::vector<int> s(T.size(), 0);
    Subgroup B(G, basis);
    bool ok = true;
    for (int i = 0; i < B.size() && ok; ++i) {
      const auto& e = B.exponents(i);
      // tau(u + g) = beta(u, g) tau(u) tau(g), built up along the exponents.
      GroupElement u = G.identity();
      int val = 1;
      for (size_t j = 0; j < r; ++j) {
        if (!e[j]) continue;
        int tg = (mask >> j) & 1 ? -1 : 1;
        int bug = beta.exponent(T.index_of(u), T.index_of(basis[j])) ? -1 : 1;
        val = bug * val * tg;
        u = G.add(u, basis[j]);
      }
      s[T.index_of(B.elements()[i])] = val;
    }
    QuadraticForm q(T, s);
    if (polar_form(q).equals(beta)) out.push_back(q);
  }
  return out;
}

}  // namespace ats
