#include "ats/scalar.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

namespace ats {

namespace {

constexpr int kMaxConductor = 256;

std::vector<std::vector<long>> build_cyclotomic_table() {
  std::vector<std::vector<long>> t(kMaxConductor + 1);
  for (int n = 1; n <= kMaxConductor; ++n) {
    // x^n - 1 divided by Phi_d for every proper divisor d.
    std::vector<long> p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (int d = 1; d < n; ++d) {
      if (n % d != 0) continue;
      const auto& q = t[d];
      int dq = static_cast<int>(q.size()) - 1;
      int dp = static_cast<int>(p.size()) - 1;
      std::vector<long> quot(dp - dq + 1, 0);
      for (int k = dp; k >= dq; --k) {
        long c = p[k];
        quot[k - dq] = c;
        if (c == 0) continue;
        for (int j = 0; j <= dq; ++j) p[k - dq + j] -= c * q[j];
      }
      p = std::move(quot);
    }
    t[n] = std::move(p);
  }
  return t;
}

void reduce_mod(std::vector<mpq_class>& p, int n) {
  const auto& phi = cyclotomic_poly(n);
  int d = static_cast<int>(phi.size()) - 1;
  for (int k = static_cast<int>(p.size()) - 1; k >= d; --k) {
    if (sgn(p[k]) == 0) continue;
    mpq_class c = p[k];
    for (int j = 0; j < d; ++j)
      if (phi[j] != 0) p[k - d + j] -= c * phi[j];
    p[k] = 0;
  }
  p.resize(d);
}

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

void check_conductor(int n) {
  if (n < 1 || n > kMaxConductor)
    throw ScalarError("conductor out of range: " + std::to_string(n));
}

}  // namespace

int euler_phi(int n) {
  int r = n;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    r -= r / p;
  }
  if (n > 1) r -= r / n;
  return r;
}

const std::vector<long>& cyclotomic_poly(int n) {
  static const std::vector<std::vector<long>> table = build_cyclotomic_table();
  check_conductor(n);
  return table[n];
}

Scalar Scalar::rational(long num, long den) {
  if (den == 0) throw ScalarError("division by zero");
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(q);
}

Scalar Scalar::from_poly(int conductor, const std::vector<mpq_class>& poly) {
  check_conductor(conductor);
  std::vector<mpq_class> p = poly;
  int d = euler_phi(conductor);
  if (static_cast<int>(p.size()) < d) p.resize(d);
  reduce_mod(p, conductor);
  return Scalar(conductor, std::move(p));
}

Scalar Scalar::root_of_unity(int conductor, int order, long power) {
  check_conductor(conductor);
  if (order < 1 || conductor % order != 0)
    throw ScalarError("conductor mismatch: order " + std::to_string(order) +
                      " does not divide " + std::to_string(conductor));
  long e = (conductor / order) * (((power % order) + order) % order);
  std::vector<mpq_class> p(std::max<long>(e + 1, euler_phi(conductor)));
  p[e] = 1;
  return from_poly(conductor, p);
}

bool Scalar::is_zero() const {
  for (const auto& c : c_)
    if (sgn(c) != 0) return false;
  return true;
}

bool Scalar::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (sgn(c_[i]) != 0) return false;
  return true;
}

bool Scalar::is_one() const { return is_rational() && c_[0] == 1; }

mpq_class Scalar::to_rational() const {
  if (!is_rational()) throw ScalarError("not rational: " + str());
  return c_[0];
}

Scalar Scalar::embed(int m) const {
  if (m == n_) return *this;
  if (m % n_ != 0) throw ScalarError("conductor mismatch in embedding");
  int step = m / n_;
  std::vector<mpq_class> p(std::max<size_t>((c_.size() - 1) * step + 1, euler_phi(m)));
  for (size_t i = 0; i < c_.size(); ++i) p[i * step] = c_[i];
  return from_poly(m, p);
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.n_ != n_) {
    int m = lcm_int(n_, o.n_);
    if (m != n_) *this = embed(m);
    if (m != o.n_) return *this += o.embed(m);
  }
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (o.n_ != n_) {
    int m = lcm_int(n_, o.n_);
    if (m != n_) *this = embed(m);
    if (m != o.n_) return *this *= o.embed(m);
  }
  if (c_.size() == 1) {
    c_[0] *= o.c_[0];
    return *this;
  }
  size_t d = c_.size();
  std::vector<mpq_class> p(2 * d - 1);
  for (size_t i = 0; i < d; ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (size_t j = 0; j < d; ++j)
      if (sgn(o.c_[j]) != 0) p[i + j] += c_[i] * o.c_[j];
  }
  reduce_mod(p, n_);
  c_ = std::move(p);
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw ScalarError("division by zero");
  size_t d = c_.size();
  if (d == 1) return Scalar(n_, {1 / c_[0]});
  // Solve (multiplication by this) * x = 1 over Q.
  std::vector<std::vector<mpq_class>> m(d, std::vector<mpq_class>(d + 1));
  for (size_t j = 0; j < d; ++j) {
    std::vector<mpq_class> col(2 * d - 1);
    for (size_t i = 0; i < d; ++i) col[i + j] = c_[i];
    reduce_mod(col, n_);
    for (size_t i = 0; i < d; ++i) m[i][j] = col[i];
  }
  m[0][d] = 1;
  for (size_t c = 0; c < d; ++c) {
    size_t piv = c;
    while (piv < d && sgn(m[piv][c]) == 0) ++piv;
    if (piv == d) throw ScalarError("singular multiplication map");
    std::swap(m[c], m[piv]);
    mpq_class inv = 1 / m[c][c];
    for (size_t k = c; k <= d; ++k) m[c][k] *= inv;
    for (size_t r = 0; r < d; ++r) {
      if (r == c || sgn(m[r][c]) == 0) continue;
      mpq_class f = m[r][c];
      for (size_t k = c; k <= d; ++k) m[r][k] -= f * m[c][k];
    }
  }
  std::vector<mpq_class> x(d);
  for (size_t i = 0; i < d; ++i) x[i] = m[i][d];
  return Scalar(n_, std::move(x));
}

Scalar Scalar::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  Scalar result(1);
  result = result.embed(n_);
  Scalar base = *this;
  while (k) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.n_ != b.n_) {
    int m = lcm_int(a.n_, b.n_);
    return a.embed(m).c_ == b.embed(m).c_;
  }
  return a.c_ == b.c_;
}

std::string Scalar::str() const {
  if (is_rational()) return c_[0].get_str();
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < c_.size(); ++k) {
    mpq_class c = c_[k];
    if (sgn(c) == 0) continue;
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    mpq_class a = abs(c);
    if (k == 0) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << "z" << n_ << "^" << k;
    }
    first = false;
  }
  return os.str();
}

namespace {

struct ScalarParser {
  const std::string& s;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool at_digit() const { return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); }
  long integer() {
    skip();
    if (!at_digit()) fail("expected integer");
    long v = 0;
    while (at_digit()) v = v * 10 + (s[i++] - '0');
    return v;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ScalarError("bad scalar '" + s + "': " + what + " at offset " + std::to_string(i));
  }
  // term := rational ['*' zpow] | zpow
  Scalar term() {
    skip();
    Scalar coef(1);
    bool have_coef = false;
    if (at_digit()) {
      long num = integer();
      long den = 1;
      skip();
      if (i < s.size() && s[i] == '/') {
        ++i;
        den = integer();
      }
      coef = Scalar::rational(num, den);
      have_coef = true;
      skip();
      if (i < s.size() && s[i] == '*') {
        ++i;
        skip();
      } else {
        return coef;
      }
    }
    if (i < s.size() && s[i] == 'z') {
      ++i;
      skip();
      bool brace = i < s.size() && s[i] == '{';
      if (brace) ++i;
      long n = integer();
      if (brace) {
        skip();
        if (i >= s.size() || s[i] != '}') fail("expected '}'");
        ++i;
      }
      long k = 1;
      skip();
      if (i < s.size() && s[i] == '^') {
        ++i;
        skip();
        bool neg = false;
        if (i < s.size() && s[i] == '-') {
          neg = true;
          ++i;
        }
        k = integer();
        if (neg) k = -k;
      }
      return coef * Scalar::root_of_unity(static_cast<int>(n), static_cast<int>(n), k);
    }
    if (have_coef) fail("expected z after '*'");
    fail("expected term");
  }
  Scalar expr() {
    skip();
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    Scalar acc = term();
    if (neg) acc = -acc;
    for (;;) {
      skip();
      if (i >= s.size()) break;
      char op = s[i];
      if (op != '+' && op != '-') fail("unexpected character");
      ++i;
      Scalar t = term();
      acc = op == '+' ? acc + t : acc - t;
    }
    return acc;
  }
};

}  // namespace

Scalar Scalar::parse(const std::string& text) {
  ScalarParser p{text};
  return p.expr();
}

}  // namespace ats
