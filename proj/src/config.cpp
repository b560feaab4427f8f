#include "ats/config.hpp"

#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace ats {

std::string ConfigIssue::str() const {
  std::string where = file.empty() ? (line > 0 ? "line " + std::to_string(line) : "")
                                   : file + (line > 0 ? ":" + std::to_string(line) : "");
  return where.empty() ? message : where + ": " + message;
}

static std::string join_issues(const std::vector<ConfigIssue>& v) {
  std::string s;
  for (const auto& i : v) s += (s.empty() ? "" : "\n") + i.str();
  return s;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::string command_name(Command c) {
  switch (c) {
    case Command::Construct: return "construct";
    case Command::Verify: return "verify";
    case Command::Envelope: return "envelope";
    case Command::Triple: return "triple";
    case Command::CheckAt2: return "check-at2";
    case Command::DecideIso: return "decide-iso";
    case Command::Census: return "census";
  }
  return "?";
}

std::optional<Command> parse_command(const std::string& s) {
  for (Command c : {Command::Construct, Command::Verify, Command::Envelope, Command::Triple,
                    Command::CheckAt2, Command::DecideIso, Command::Census})
    if (command_name(c) == s) return c;
  return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Entry {
  std::string key, value;
  int line;
};

struct Section {
  std::string name;
  int line;
  std::vector<Entry> entries;

  const Entry* find(const std::string& k) const {
    for (const auto& e : entries)
      if (e.key == k) return &e;
    return nullptr;
  }
};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"job", {"command", "seed", "max_dim", "at2_samples", "at2_exhaustive_max_dim", "search_cap"}},
      {"group", {"G"}},
      {"division", {"T", "beta", "tau", "t"}},
      {"matrix",
       {"family", "T", "beta", "t", "kappa0", "kappa1", "gamma0", "gamma1", "l0", "l1", "m0", "m1",
        "S_signs0", "S_signs1", "t_values0", "t_values1", "delta", "g"}},
      {"triple", {"source", "dim", "parts", "entry"}},
      {"census", {"max_T", "max_dim", "max_rows"}},
      {"exchange-iso", {"T1", "beta", "tau1", "t", "T2"}},
      {"remove-tau", {"T1", "beta", "tau1", "tau_prime", "t"}},
  };
  return k;
}

bool repeatable_section(const std::string& s) { return s == "exchange-iso" || s == "remove-tau"; }
bool repeatable_key(const std::string& k) { return k == "entry"; }

// Everything below throws std::runtime_error-derived errors; the caller pins
// them to a line.
struct ValueError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

long to_long(const std::string& s) {
  size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw ValueError("expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw ValueError("expected an integer, got '" + s + "'");
  return v;
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ' ' || ch == '\t' || ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<long> int_list(const std::string& s) {
  std::vector<long> out;
  for (const auto& w : words(s)) out.push_back(to_long(w));
  return out;
}

std::vector<int> sign_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& w : words(s)) {
    if (w == "+" || w == "1" || w == "+1") out.push_back(1);
    else if (w == "-" || w == "-1") out.push_back(-1);
    else throw ValueError("expected a sign (+, -, 1 or -1), got '" + w + "'");
  }
  return out;
}

// Parenthesized tuples "(1,0) (0,1)", or "e" for the identity.
std::vector<GroupElement> element_list(const AbelianGroup& G, const std::string& s) {
  std::vector<GroupElement> out;
  size_t i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (ch == ' ' || ch == '\t' || ch == ',') {
      ++i;
    } else if (ch == 'e') {
      out.push_back(G.identity());
      ++i;
    } else if (ch == '(') {
      size_t j = s.find(')', i);
      if (j == std::string::npos) throw ValueError("unclosed '(' in '" + s + "'");
      out.push_back(G.parse_element(s.substr(i, j - i + 1)));
      i = j + 1;
    } else {
      throw ValueError("group elements are written (a,b,...) or e; got '" + s.substr(i) + "'");
    }
  }
  return out;
}

GroupElement element(const AbelianGroup& G, const std::string& s) {
  auto v = element_list(G, s);
  if (v.size() != 1) throw ValueError("expected one group element, got '" + s + "'");
  return v[0];
}

// Rows separated by ';'.
std::vector<std::vector<long>> int_matrix(const std::string& s) {
  std::vector<std::vector<long>> rows;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(int_list(row));
  return rows;
}

Bicharacter parse_beta(const Subgroup& T, const std::string& s) {
  auto k = int_matrix(s);
  size_t n = T.gens().size();
  if (n == 0 && trim(s) == "0") return Bicharacter::trivial(T);
  if (k.size() != n) throw ValueError("beta needs " + std::to_string(n) + " rows, one per generator of T");
  for (const auto& r : k)
    if (r.size() != n) throw ValueError("beta rows need " + std::to_string(n) + " entries");
  if (!T.independent()) throw ValueError("the generators of T must be independent");
  Bicharacter b = Bicharacter::from_generator_matrix(T, k);
  if (!b.is_nondegenerate_alternating())
    throw ValueError("beta must be a nondegenerate alternating bicharacter on T");
  return b;
}

// A quadratic form is fixed by its polar form and its values on generators.
QuadraticForm parse_tau(const Bicharacter& beta, const std::string& s) {
  auto signs = sign_list(s);
  const Subgroup& T = beta.domain();
  if (signs.size() != T.gens().size())
    throw ValueError("tau needs one sign per generator of T");
  if (!T.is_elementary_2()) throw ValueError("tau needs an elementary 2-group T");
  for (const auto& q : quadratic_forms_with_polar(beta)) {
    bool match = true;
    for (size_t i = 0; i < signs.size(); ++i) match = match && q(T.gens()[i]) == signs[i];
    if (match) return q;
  }
  throw ValueError("no quadratic form with polar form beta takes these generator values");
}

Family parse_family(const std::string& s) {
  if (s == "exchange-pair" || s == "1") return Family::ExchangePair;
  if (s == "simple" || s == "2") return Family::SimpleAlgebra;
  if (s == "exchange-division" || s == "3") return Family::ExchangeDivision;
  throw ValueError("family must be exchange-pair, simple or exchange-division (or 1, 2, 3)");
}

TripleInput parse_part(const std::string& w) {
  TripleInput p;
  if (w == "scalar") {
    p.source = TripleInput::Source::Scalar;
    p.dim = 1;
    return p;
  }
  std::smatch m;
  static const std::regex zero(R"(zero:(\d+))");
  if (std::regex_match(w, m, zero)) {
    p.source = TripleInput::Source::Zero;
    p.dim = static_cast<int>(to_long(m[1]));
    return p;
  }
  throw ValueError("direct-sum parts are scalar or zero:N, got '" + w + "'");
}

// "i j k -> m : c" with 0-based indices and a scalar coefficient.
TripleInput::Entry parse_entry(const std::string& s) {
  static const std::regex re(R"(\s*(\d+)\s+(\d+)\s+(\d+)\s*->\s*(\d+)\s*:\s*(.+))");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ValueError("entry must read 'i j k -> m : c', got '" + s + "'");
  TripleInput::Entry e{static_cast<int>(to_long(m[1])), static_cast<int>(to_long(m[2])),
                      static_cast<int>(to_long(m[3])), static_cast<int>(to_long(m[4])), Scalar(0)};
  try {
    e.c = Scalar::parse(trim(m[5]));
  } catch (const std::exception& x) {
    throw ValueError(std::string("bad coefficient: ") + x.what());
  }
  return e;
}

class Parser {
 public:
  explicit Parser(const std::string& text) { lex(text); }

  JobConfig run() {
    JobConfig c;
    for (const auto& s : sections_) {
      if (s.name == "job") job(s, c);
    }
    const Section* g = first("group");
    if (g) {
      if (const Entry* e = g->find("G")) guard(e->line, [&] { c.G = AbelianGroup::parse(e->value); });
    }
    for (const auto& s : sections_) {
      if (s.name == "division") division(s, c);
      else if (s.name == "matrix") matrix(s, c);
      else if (s.name == "triple") c.triple = guard_value<TripleInput>(s, [&] { return triple(s); });
      else if (s.name == "census") census(s, c);
      else if (s.name == "exchange-iso") exchange_iso(s, c);
      else if (s.name == "remove-tau") remove_tau(s, c);
    }
    if (!issues_.empty()) throw ConfigError(issues_);
    return c;
  }

 private:
  std::vector<Section> sections_;
  std::vector<ConfigIssue> issues_;
  int cur_line_ = 0;

  void issue(int line, std::string msg) { issues_.push_back(ConfigIssue{line, std::move(msg), {}}); }

  template <class F>
  bool guard(int line, F&& f) {
    try {
      f();
      return true;
    } catch (const std::exception& e) {
      issue(line, e.what());
      return false;
    }
  }

  template <class T, class F>
  std::optional<T> guard_value(const Section& s, F&& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      issue(cur_line_ ? cur_line_ : s.line, e.what());
      return std::nullopt;
    }
  }

  const Section* first(const std::string& name) const {
    for (const auto& s : sections_)
      if (s.name == name) return &s;
    return nullptr;
  }

  void lex(const std::string& text) {
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    std::set<std::string> seen;
    while (std::getline(ss, raw, '\n')) {
      ++line;
      size_t hash = raw.find('#');
      std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') {
          issue(line, "section header must be [name]");
          continue;
        }
        std::string name = trim(s.substr(1, s.size() - 2));
        if (!known_keys().count(name)) issue(line, "unknown section [" + name + "]");
        else if (seen.count(name) && !repeatable_section(name)) issue(line, "duplicate section [" + name + "]");
        seen.insert(name);
        sections_.push_back(Section{name, line, {}});
        continue;
      }
      size_t eq = s.find('=');
      if (eq == std::string::npos) {
        issue(line, "expected 'key = value' or a [section] header");
        continue;
      }
      std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
      if (sections_.empty()) {
        issue(line, "entry '" + key + "' appears before any section header");
        continue;
      }
      Section& sec = sections_.back();
      auto k = known_keys().find(sec.name);
      if (k == known_keys().end()) continue;
      if (!k->second.count(key)) {
        issue(line, "unknown key '" + key + "' in [" + sec.name + "]");
        continue;
      }
      if (value.empty()) {
        issue(line, "key '" + key + "' has an empty value");
        continue;
      }
      if (sec.find(key) && !repeatable_key(key)) {
        issue(line, "duplicate key '" + key + "' in [" + sec.name + "]");
        continue;
      }
      sec.entries.push_back(Entry{key, value, line});
    }
  }

  const Entry* need(const Section& s, const std::string& k) {
    const Entry* e = s.find(k);
    if (!e) issue(s.line, "[" + s.name + "] needs '" + k + "'");
    return e;
  }

  void job(const Section& s, JobConfig& c) {
    for (const auto& e : s.entries)
      guard(e.line, [&] {
        if (e.key == "command") {
          c.command = parse_command(e.value);
          if (!c.command) throw ValueError("unknown command '" + e.value + "'");
        } else if (e.key == "seed") {
          long v = to_long(e.value);
          if (v < 0) throw ValueError("seed must be nonnegative");
          c.seed = static_cast<uint64_t>(v);
        } else if (e.key == "max_dim") {
          c.max_dim = static_cast<int>(to_long(e.value));
        } else if (e.key == "at2_samples") {
          c.at2.samples = to_long(e.value);
        } else if (e.key == "at2_exhaustive_max_dim") {
          c.at2.exhaustive_max_dim = static_cast<int>(to_long(e.value));
        } else if (e.key == "search_cap") {
          c.search_cap = to_long(e.value);
        }
      });
  }

  std::optional<Subgroup> subgroup(const JobConfig& c, const Entry* e) {
    if (!e) return std::nullopt;
    std::optional<Subgroup> T;
    guard(e->line, [&] {
      auto gens = trim(e->value) == "1" ? std::vector<GroupElement>{} : element_list(c.G, e->value);
      T = Subgroup(c.G, gens);
    });
    return T;
  }

  std::optional<Bicharacter> beta(const Subgroup& T, const Entry* e) {
    if (!e) return std::nullopt;
    std::optional<Bicharacter> b;
    guard(e->line, [&] { b = parse_beta(T, e->value); });
    return b;
  }

  void division(const Section& s, JobConfig& c) {
    auto T = subgroup(c, need(s, "T"));
    if (!T) return;
    auto b = beta(*T, need(s, "beta"));
    if (!b) return;
    DivisionInput d{*T, *b, std::nullopt, std::nullopt};
    if (const Entry* e = s.find("tau")) guard(e->line, [&] { d.tau = parse_tau(*b, e->value); });
    if (const Entry* e = s.find("t")) guard(e->line, [&] { d.t = element(c.G, e->value); });
    c.division = d;
  }

  void matrix(const Section& s, JobConfig& c) {
    MatrixParams p;
    p.G = c.G;
    p.g = c.G.identity();
    p.t = c.G.identity();
    bool ok = true;
    if (const Entry* e = need(s, "family")) ok &= guard(e->line, [&] { p.family = parse_family(e->value); });
    auto T = subgroup(c, need(s, "T"));
    if (!T) return;
    p.T = *T;
    auto b = beta(*T, need(s, "beta"));
    if (!b) return;
    p.beta = *b;
    for (const auto& e : s.entries)
      ok &= guard(e.line, [&] {
        const std::string& k = e.key;
        if (k == "t") p.t = element(c.G, e.value);
        else if (k == "g") p.g = element(c.G, e.value);
        else if (k == "delta") {
          long d = to_long(e.value);
          if (d != 1 && d != -1) throw ValueError("delta must be 1 or -1");
          p.delta = static_cast<int>(d);
        } else if (k == "kappa0" || k == "kappa1") (k.back() == '0' ? p.b0 : p.b1).kappa = int_list(e.value);
        else if (k == "gamma0" || k == "gamma1") (k.back() == '0' ? p.b0 : p.b1).gamma = element_list(c.G, e.value);
        else if (k == "l0" || k == "l1") (k.back() == '0' ? p.b0 : p.b1).l = static_cast<int>(to_long(e.value));
        else if (k == "m0" || k == "m1") (k.back() == '0' ? p.b0 : p.b1).m = static_cast<int>(to_long(e.value));
        else if (k == "S_signs0" || k == "S_signs1") (k.back() == '0' ? p.b0 : p.b1).s_signs = sign_list(e.value);
        else if (k == "t_values0" || k == "t_values1")
          (k.back() == '0' ? p.b0 : p.b1).t_values = element_list(c.G, e.value);
      });
    if (!s.find("kappa0") || !s.find("kappa1") || !s.find("gamma0") || !s.find("gamma1")) {
      issue(s.line, "[matrix] needs kappa0, gamma0, kappa1 and gamma1");
      return;
    }
    if (p.family == Family::ExchangeDivision && !s.find("t")) {
      issue(s.line, "[matrix] family exchange-division needs 't'");
      return;
    }
    if (!ok) return;
    try {
      normalize(p);
      validate(p);
      c.matrix = p;
    } catch (const ConstructionError& e) {
      issue(blame(s, e.what()), e.what());
    }
  }

  // Line of the key the message names first, else the section header.
  static int blame(const Section& s, const std::string& msg) {
    size_t best = std::string::npos;
    int line = s.line;
    for (const auto& e : s.entries) {
      static const std::string word = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_0123456789";
      for (size_t at = msg.find(e.key); at != std::string::npos; at = msg.find(e.key, at + 1)) {
        bool left = at == 0 || word.find(msg[at - 1]) == std::string::npos;
        size_t r = at + e.key.size();
        bool right = r == msg.size() || word.find(msg[r]) == std::string::npos;
        if (left && right && at < best) {
          best = at;
          line = e.line;
        }
      }
    }
    return line;
  }

  TripleInput triple(const Section& s) {
    TripleInput t;
    const Entry* src = s.find("source");
    if (!src) {
      cur_line_ = s.line;
      throw ValueError("[triple] needs 'source'");
    }
    cur_line_ = src->line;
    const std::string& v = src->value;
    if (v == "scalar") {
      t.source = TripleInput::Source::Scalar;
      t.dim = 1;
    } else if (v == "zero" || v == "table") {
      t.source = v == "zero" ? TripleInput::Source::Zero : TripleInput::Source::Table;
      const Entry* d = s.find("dim");
      if (!d) throw ValueError("source " + v + " needs 'dim'");
      cur_line_ = d->line;
      t.dim = static_cast<int>(to_long(d->value));
      if (t.dim < 1) throw ValueError("dim must be positive");
    } else if (v == "direct-sum") {
      t.source = TripleInput::Source::DirectSum;
      const Entry* p = s.find("parts");
      if (!p) throw ValueError("source direct-sum needs 'parts'");
      cur_line_ = p->line;
      for (const auto& w : words(p->value)) {
        t.parts.push_back(parse_part(w));
        t.dim += t.parts.back().dim;
      }
      if (t.parts.size() < 2) throw ValueError("direct-sum needs at least two parts");
    } else if (v == "matrix") {
      t.source = TripleInput::Source::Matrix;
    } else {
      throw ValueError("source must be scalar, zero, direct-sum, table or matrix");
    }
    for (const auto& e : s.entries) {
      if (e.key != "entry") continue;
      cur_line_ = e.line;
      if (t.source != TripleInput::Source::Table) throw ValueError("'entry' needs source = table");
      auto x = parse_entry(e.value);
      if (std::max({x.i, x.j, x.k, x.m}) >= t.dim) throw ValueError("entry index exceeds dim");
      t.entries.push_back(x);
    }
    cur_line_ = 0;
    return t;
  }

  void census(const Section& s, JobConfig& c) {
    CensusOptions o;
    for (const auto& e : s.entries)
      guard(e.line, [&] {
        long v = to_long(e.value);
        if (v < 1) throw ValueError(e.key + " must be positive");
        if (e.key == "max_T") o.max_T = static_cast<int>(v);
        else if (e.key == "max_dim") o.max_dim = static_cast<int>(v);
        else if (e.key == "max_rows") o.max_rows = static_cast<int>(v);
      });
    if (!c.G.is_finite()) issue(s.line, "census needs a finite group G");
    c.census = o;
  }

  void exchange_iso(const Section& s, JobConfig& c) {
    auto T1 = subgroup(c, need(s, "T1"));
    auto T2 = subgroup(c, need(s, "T2"));
    if (!T1 || !T2) return;
    auto b = beta(*T1, need(s, "beta"));
    const Entry* tau = need(s, "tau1");
    const Entry* t = need(s, "t");
    if (!b || !tau || !t) return;
    ExchangeIsoInput x;
    x.T1 = *T1;
    x.T2 = *T2;
    if (!guard(tau->line, [&] { x.tau1 = parse_tau(*b, tau->value); })) return;
    if (!guard(t->line, [&] { x.t = element(c.G, t->value); })) return;
    c.exchange_iso.push_back(x);
  }

  void remove_tau(const Section& s, JobConfig& c) {
    auto T1 = subgroup(c, need(s, "T1"));
    if (!T1) return;
    auto b = beta(*T1, need(s, "beta"));
    const Entry* tau = need(s, "tau1");
    const Entry* tp = need(s, "tau_prime");
    const Entry* t = need(s, "t");
    if (!b || !tau || !tp || !t) return;
    RemoveTauInput x;
    x.T1 = *T1;
    if (!guard(tau->line, [&] { x.tau1 = parse_tau(*b, tau->value); })) return;
    if (!guard(tp->line, [&] { x.tau_prime = parse_tau(*b, tp->value); })) return;
    if (!guard(t->line, [&] { x.t = element(c.G, t->value); })) return;
    c.remove_tau.push_back(x);
  }
};

}  // namespace

JobConfig parse_config(const std::string& text) { return Parser(text).run(); }

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({ConfigIssue{0, "cannot read file", path}});
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (ConfigError& e) {
    std::vector<ConfigIssue> v = e.issues();
    for (auto& i : v) i.file = path;
    throw ConfigError(v);
  }
}

}  // namespace ats
