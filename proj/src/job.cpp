#include "ats/job.hpp"

#include <map>
#include <set>

namespace ats {

Json scalar_json(const Scalar& s) { return s.str(); }

Json algebra_json(const OmegaAlgebra& A, const Grading* G) {
  Json j;
  j["dim"] = A.dim();
  j["labels"] = A.labels();
  Json ops = Json::array();
  for (const auto& o : A.ops()) {
    Json rows = Json::array();
    for (size_t k = 0; k < o.table.size(); ++k) {
      if (o.table[k].empty()) continue;
      auto idx = A.unflat(k, o.arity);
      for (const auto& [m, c] : o.table[k]) {
        Json r = Json::array();
        for (int i : idx) r.push_back(i);
        r.push_back(m);
        r.push_back(scalar_json(c));
        rows.push_back(std::move(r));
      }
    }
    ops.push_back(Json{{"name", o.name}, {"arity", o.arity}, {"entries", std::move(rows)}});
  }
  j["operators"] = std::move(ops);
  if (G) {
    Json d = Json::array();
    for (const auto& g : G->deg) d.push_back(G->group.format(g, G->z_flip));
    j["grading"] = Json{{"group", G->z_flip ? "Z x " + G->group.drop_z().str() : G->group.str()},
                        {"z_slot", G->z_flip},
                        {"degrees", std::move(d)}};
  }
  return j;
}

Json report_json(const std::string& name, const Report& r) {
  return Json{{"name", name}, {"ok", r.ok}, {"checked", r.checked}, {"failures", r.failures},
              {"violations", r.violations}};
}

TripleSystem triple_of(const JobConfig& c) {
  bool from_matrix = (!c.triple && c.matrix) || (c.triple && c.triple->source == TripleInput::Source::Matrix);
  if (from_matrix) {
    if (!c.matrix) throw JobError("[triple] source = matrix needs a [matrix] section");
    BuiltAlgebra B = build_M_inv(*c.matrix);
    return triple_from(B.alg, B.grading);
  }
  if (!c.triple) throw JobError("this command needs a [triple] or [matrix] section");
  std::function<TripleSystem(const TripleInput&)> make = [&](const TripleInput& s) -> TripleSystem {
    switch (s.source) {
      case TripleInput::Source::Scalar: return scalar_triple();
      case TripleInput::Source::Zero: return zero_triple(s.dim);
      case TripleInput::Source::DirectSum: {
        TripleSystem w = make(s.parts[0]);
        for (size_t i = 1; i < s.parts.size(); ++i) w = direct_sum(w, make(s.parts[i]));
        return w;
      }
      case TripleInput::Source::Table: {
        TripleSystem w = make_triple(s.dim);
        Operator& op = w.alg.op("tri");
        for (const auto& e : s.entries) axpy(op.table[w.alg.flat({e.i, e.j, e.k})], e.c, SparseVec{{e.m, Scalar(1)}});
        return w;
      }
      case TripleInput::Source::Matrix: break;
    }
    throw JobError("unreachable triple source");
  };
  return make(*c.triple);
}

namespace {

struct Ctx {
  JobResult res;
  uint64_t seed = 0;
  int max_dim = 16;
  std::optional<int> max_dim_override;
  Exec exec = Exec::Parallel;

  void add(const std::string& name, const Report& r) {
    res.report["checks"].push_back(report_json(name, r));
    res.ok = res.ok && r.ok;
    std::string line = (r.ok ? "PASS " : "FAIL ") + name;
    if (!r.ok && !r.violations.empty()) line += ": " + r.violations.front();
    res.lines.push_back(line);
  }
  void expect(const std::string& name, bool ok, const std::string& why = {}) {
    Report r;
    r.checked = 1;
    if (!ok) r.fail(why.empty() ? name : why);
    add(name, r);
  }
  void limit(int dim, const std::string& what) const {
    if (dim > max_dim)
      throw JobError(what + " has dimension " + std::to_string(dim) + ", above the limit " +
                     std::to_string(max_dim) + " (raise --max-dim)");
  }
};

OmegaAlgebra without(const OmegaAlgebra& A, const std::string& op) {
  OmegaAlgebra B = A;
  if (B.has(op)) B.remove_operator(op);
  return B;
}

Json group_json(const AbelianGroup& G, const std::vector<GroupElement>& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(G.format(x));
  return j;
}

Json params_json(const MatrixParams& p) {
  auto side = [&](const BlockShape& b) {
    return Json{{"kappa", b.kappa}, {"gamma", group_json(p.G, b.gamma)}, {"l", b.l}, {"m", b.m},
                {"S_signs", b.s_signs}, {"t_values", group_json(p.G, b.t_values)}};
  };
  Json j{{"family", family_name(p.family)}, {"G", p.G.str()}, {"T", group_json(p.G, p.T.gens())}};
  if (p.family == Family::ExchangeDivision) j["t"] = p.G.format(p.t);
  j["side0"] = side(p.b0);
  j["side1"] = side(p.b1);
  if (p.family != Family::ExchangePair) {
    j["delta"] = p.delta;
    j["g"] = p.G.format(p.g);
  }
  return j;
}

SimplicityOptions simplicity(const Ctx& c) {
  SimplicityOptions o;
  o.seed = c.seed;
  return o;
}

// Every homogeneous basis element has an invertible left multiplication.
Report graded_division(const OmegaAlgebra& A) {
  Report r;
  int n = A.dim();
  for (int i = 0; i < n; ++i) {
    Matrix m(n, n);
    for (int j = 0; j < n; ++j) m.set_column(j, A.mul(unit_vec(n, i), unit_vec(n, j)));
    ++r.checked;
    if (rank(m) != n) r.fail(A.labels()[i] + " is not invertible");
  }
  return r;
}

void verify_division(Ctx& c, const DivisionInput& d) {
  DivisionAlgebra D = standard_realization(d.T, d.beta);
  c.limit(D.size(), "D(T,beta)");
  OmegaAlgebra A = D.algebra();
  Grading G = D.grading();
  c.expect("division.dim", D.size() == d.T.size(),
           "dim " + std::to_string(D.size()) + " != |T| = " + std::to_string(d.T.size()));
  Report comm;
  for (int s = 0; s < D.size(); ++s)
    for (int u = 0; u < D.size(); ++u) {
      ++comm.checked;
      const auto& E = D.support.elements();
      if (!(D.coef(s, u) == d.beta.eval(E[s], E[u]) * D.coef(u, s)))
        comm.fail("X_s X_u != beta(s,u) X_u X_s at s=" + D.G.format(E[s]) + ", u=" + D.G.format(E[u]));
    }
  c.add("division.commutation", comm);
  SymplecticBasis sb = symplectic_basis(d.beta);
  Report pw;
  for (size_t i = 0; i < sb.l.size(); ++i)
    for (const auto& x : {sb.a[i], sb.b[i]}) {
      Matrix X = D.X[D.support.index_of(x)], P = Matrix::identity(X.rows);
      for (long k = 0; k < sb.l[i]; ++k) P = P * X;
      ++pw.checked;
      if (!P.is_identity()) pw.fail("X^l != 1 for " + D.G.format(x));
    }
  c.add("division.generator_orders", pw);
  c.add("division.associative", check_associative(A, c.exec));
  c.add("division.grading", check_grading(A, G, c.exec));
  c.expect("division.simple", is_simple(A, simplicity(c)), "D(T,beta) is not simple");
  c.res.report["division"] = algebra_json(A, &G);
  if (!d.T.is_elementary_2()) return;
  DivisionAlgebra Di = d.tau ? d_inv(d.T, d.beta, *d.tau) : d_inv(d.T, d.beta);
  OmegaAlgebra Ai = Di.algebra();
  Grading Gi = Di.grading();
  c.add("division.involution", check_involution(Ai, &Gi, c.exec));
  if (!d.t) return;
  DivisionAlgebra X = exchange_double(Di, *d.t);
  c.limit(X.size(), "exchange double");
  OmegaAlgebra Ax = X.algebra();
  Grading Gx = X.grading();
  c.add("exchange.associative", check_associative(Ax, c.exec));
  c.add("exchange.grading", check_grading(Ax, Gx, c.exec));
  c.add("exchange.involution", check_involution(Ax, &Gx, c.exec));
  c.add("exchange.graded_division", graded_division(Ax));
  c.expect("exchange.graded_simple", is_graded_simple(Ax, Gx, simplicity(c)),
           "exchange double is not graded-simple with its involution");
  c.res.report["exchange_double"] = algebra_json(Ax, &Gx);
}

void verify_matrix(Ctx& c, const MatrixParams& p) {
  BuiltAlgebra B = build_M_inv(p);
  c.limit(B.alg.dim(), "the matrix algebra");
  c.add("matrix.grading", check_grading(B.alg, B.grading, c.exec));
  c.add("matrix.associative", check_associative(B.alg, c.exec));
  c.add("matrix.involution", check_involution(B.alg, &B.grading, c.exec));
  auto so = simplicity(c);
  c.expect("matrix.graded_simple_with_involution", is_graded_simple(B.alg, B.grading, so));
  OmegaAlgebra plain = without(B.alg, "inv");
  bool gs = is_graded_simple(plain, B.grading, so), s = is_simple(plain, so);
  bool want_gs = p.family != Family::ExchangePair, want_s = p.family == Family::SimpleAlgebra;
  c.expect("matrix.graded_simple_without_involution", gs == want_gs,
           std::string("graded-simple without involution is ") + (gs ? "true" : "false"));
  c.expect("matrix.simple_without_involution", s == want_s,
           std::string("simple without involution is ") + (s ? "true" : "false"));
  c.add("matrix.peirce", check_peirce(B.alg, B.grading));
  if (p.family == Family::ExchangeDivision) c.add("matrix.division_part", graded_division(division_part(p).algebra()));
  c.res.report["params"] = params_json(p);
}

void do_construct(Ctx& c, const JobConfig& cfg) {
  if (cfg.matrix) {
    BuiltAlgebra B = build_M_inv(*cfg.matrix);
    c.limit(B.alg.dim(), "the matrix algebra");
    c.res.report["params"] = params_json(*cfg.matrix);
    c.res.report["algebra"] = algebra_json(B.alg, &B.grading);
    c.res.lines.push_back("built " + family_name(cfg.matrix->family) + " of dimension " +
                          std::to_string(B.alg.dim()));
  } else if (cfg.division) {
    const DivisionInput& d = *cfg.division;
    DivisionAlgebra D = standard_realization(d.T, d.beta);
    if (d.T.is_elementary_2()) D = d.tau ? d_inv(d.T, d.beta, *d.tau) : d_inv(d.T, d.beta);
    if (d.t) D = exchange_double(D, *d.t);
    c.limit(D.size(), "the division algebra");
    OmegaAlgebra A = D.algebra();
    Grading G = D.grading();
    c.res.report["algebra"] = algebra_json(A, &G);
    c.res.lines.push_back("built graded division algebra of dimension " + std::to_string(D.size()));
  } else {
    throw JobError("construct needs a [matrix] or [division] section");
  }
}

void do_verify(Ctx& c, const JobConfig& cfg) {
  if (!cfg.matrix && !cfg.division && cfg.exchange_iso.empty() && cfg.remove_tau.empty())
    throw JobError("verify needs [matrix], [division], [exchange-iso] or [remove-tau]");
  if (cfg.division) verify_division(c, *cfg.division);
  if (cfg.matrix) verify_matrix(c, *cfg.matrix);
  for (size_t i = 0; i < cfg.exchange_iso.size(); ++i) {
    const auto& x = cfg.exchange_iso[i];
    c.add("exchange_iso." + std::to_string(i), check_exchange_iso(x.T1, x.tau1, x.t, x.T2));
  }
  for (size_t i = 0; i < cfg.remove_tau.size(); ++i) {
    const auto& x = cfg.remove_tau[i];
    c.add("remove_tau." + std::to_string(i), check_remove_tau(x.T1, x.tau1, x.tau_prime, x.t));
  }
}

At2Options at2_options(const Ctx& c, const JobConfig& cfg) {
  At2Options o = cfg.at2;
  o.seed = c.seed;
  return o;
}

void do_triple(Ctx& c, const JobConfig& cfg, bool dump) {
  TripleSystem W = triple_of(cfg);
  c.limit(W.dim(), "the triple");
  At2Options o = at2_options(c, cfg);
  c.add("triple.at2", check_at2(W, o, c.exec));
  c.res.report["at2"] = Json{{"exhaustive", W.dim() <= o.exhaustive_max_dim},
                             {"samples", W.dim() <= o.exhaustive_max_dim ? 0 : o.samples}};
  if (W.grading) c.add("triple.grading", check_grading(W.alg, *W.grading, c.exec));
  if (dump) c.res.report["triple"] = algebra_json(W.alg, W.grading ? &*W.grading : nullptr);
}

Report envelope_automorphisms(const Ctx& c, const TripleSystem& W, const EnvelopeResult& E) {
  Report r;
  try {
    LinearMap p1 = random_triple_automorphism(W, E, c.seed), p2 = random_triple_automorphism(W, E, c.seed + 1);
    LinearMap A1 = extend_automorphism(W, E, p1), A2 = extend_automorphism(W, E, p2);
    r.merge(check_morphism(E.alg, E.alg, A1, &E.grading, &E.grading, c.exec));
    ++r.checked;
    if (rank(A1) != E.alg.dim()) r.fail("A(psi) is not bijective");
    for (int i = 0; i < W.dim(); ++i)
      for (int j = 0; j < W.dim(); ++j) {
        ++r.checked;
        if (!(A1.at(E.w_begin() + i, E.w_begin() + j) == p1.at(i, j))) r.fail("A(psi) does not restrict to psi on W");
      }
    ++r.checked;
    if (!(extend_automorphism(W, E, p1 * p2) == A1 * A2)) r.fail("A(psi1 psi2) != A(psi1) A(psi2)");
  } catch (const TripleError& e) {
    r.fail(e.what());
  }
  return r;
}

void do_envelope(Ctx& c, const JobConfig& cfg) {
  TripleSystem W = triple_of(cfg);
  c.limit(W.dim(), "the triple");
  EnvelopeResult E = loos_envelope(W);
  c.add("envelope.structure", check_envelope(W, E, c.exec));
  c.expect("envelope.round_trip", round_trip_exact(W, E), "W(A(W)) differs from W");
  bool simple = false;
  try {
    simple = triple_is_simple(W, simplicity(c));
    c.expect("envelope.simplicity_transfer", true);
  } catch (const std::logic_error& e) {
    c.expect("envelope.simplicity_transfer", false, e.what());
  }
  c.add("envelope.automorphism_extension", envelope_automorphisms(c, W, E));
  if (cfg.matrix && (!cfg.triple || cfg.triple->source == TripleInput::Source::Matrix)) {
    BuiltAlgebra B = build_M_inv(*cfg.matrix);
    c.add("envelope.reconstruction", reconstruct_iso(B.alg, B.grading, c.exec).report);
  }
  c.res.report["envelope"] = Json{{"dim", E.alg.dim()}, {"dim_L", E.dim_l}, {"dim_W", E.dim_w},
                                  {"dim_R", E.dim_r}, {"triple_simple", simple},
                                  {"algebra", algebra_json(E.alg, &E.grading)}};
}

Json label_json(const ClassLabel& L) {
  return Json{{"label", L.str()}, {"xi0", L.xi0.str()}, {"xi1", L.xi1.str()}};
}

void do_decide(Ctx& c, const std::vector<JobConfig>& cfgs, bool verify) {
  if (cfgs.size() != 2) throw JobError("decide-iso needs two configs");
  for (const auto& x : cfgs)
    if (!x.matrix) throw JobError("decide-iso needs a [matrix] section in both configs");
  ClassLabel a = make_label(*cfgs[0].matrix, "first"), b = make_label(*cfgs[1].matrix, "second");
  Decision d = decide_iso(a, b);
  Json cert{{"iso", d.iso}, {"reason", d.cert.reason}};
  if (d.iso) {
    cert["opposite"] = d.cert.opposite;
    cert["shift"] = a.p.G.format(d.cert.shift);
  }
  c.res.report["labels"] = Json::array({label_json(a), label_json(b)});
  c.res.report["decision"] = cert;
  c.res.lines.push_back(std::string(d.iso ? "ISOMORPHIC: " : "NOT ISOMORPHIC: ") + d.cert.reason);
  if (!verify) return;
  BuiltAlgebra A = build_M_inv(a.p), B = build_M_inv(b.p);
  c.limit(std::max(A.alg.dim(), B.alg.dim()), "the matrix algebra");
  if (d.iso) {
    try {
      LinearMap f = witness_isomorphism(a, b, d.cert);
      Report r = check_morphism(A.alg, B.alg, f, &A.grading, &B.grading, c.exec);
      ++r.checked;
      if (rank(f) != A.alg.dim()) r.fail("witness is not bijective");
      c.add("decide.witness", r);
      // Column j lists the nonzero (row, coefficient) pairs of f(e_j).
      Json m = Json::array();
      for (int j = 0; j < f.cols; ++j) {
        Json col = Json::array();
        for (const auto& [i, x] : to_sparse(f.column(j))) col.push_back(Json::array({i, scalar_json(x)}));
        m.push_back(std::move(col));
      }
      c.res.report["witness"] = std::move(m);
    } catch (const std::logic_error& e) {
      c.expect("decide.witness", false, e.what());
    }
  } else {
    SearchOptions so;
    so.cap = cfgs[0].search_cap;
    so.exec = c.exec;
    auto ia = intrinsic_invariants(A.alg, A.grading), ib = intrinsic_invariants(B.alg, B.grading);
    RefutationReport r = refute_isomorphism(a, A, ia, b, B, ib, so);
    c.res.report["refutation"] =
        Json{{"kind", refutation_name(r.kind)}, {"detail", r.detail}, {"candidates", r.candidates}};
    c.expect("decide.refutation", r.kind == Refutation::Invariant || r.kind == Refutation::Search,
             refutation_name(r.kind) + ": " + r.detail);
  }
}

void do_census(Ctx& c, const JobConfig& cfg) {
  CensusOptions o = cfg.census.value_or(CensusOptions{});
  if (c.max_dim_override) o.max_dim = *c.max_dim_override;
  o.cap = cfg.search_cap;
  o.exec = c.exec;
  Census s = run_census(cfg.G, o);
  Json labels = Json::array();
  for (size_t i = 0; i < s.labels.size(); ++i)
    labels.push_back(Json{{"name", s.labels[i].name}, {"label", s.labels[i].str()}, {"class", s.class_of[i]}});
  std::map<int, std::vector<std::string>> classes;
  for (size_t i = 0; i < s.labels.size(); ++i) classes[s.class_of[i]].push_back(s.labels[i].name);
  Json cls = Json::array();
  for (const auto& [k, v] : classes) cls.push_back(v);
  Json pairs = Json::array();
  for (const auto& p : s.pairs) {
    Json j{{"i", p.i}, {"j", p.j}, {"iso", p.decision.iso}};
    if (p.decision.iso) j["witness"] = p.witness_ok;
    else j["refutation"] = refutation_name(p.refutation.kind);
    pairs.push_back(j);
  }
  c.res.report["census"] = Json{{"G", cfg.G.str()},
                                {"max_T", o.max_T},
                                {"max_dim", o.max_dim},
                                {"max_rows", o.max_rows},
                                {"labels", labels},
                                {"classes", cls},
                                {"yes", s.yes},
                                {"no", s.no},
                                {"witnessed", s.witnessed},
                                {"refuted_invariant", s.refuted_invariant},
                                {"refuted_search", s.refuted_search},
                                {"inconclusive", s.inconclusive},
                                {"contradictions", s.contradictions},
                                {"asymmetric", s.asymmetric},
                                {"reflexive_failures", s.reflexive_failures},
                                {"pairs", pairs}};
  c.expect("census.witnessed", s.witnessed == s.yes,
           std::to_string(s.yes - s.witnessed) + " YES decisions lack a verified witness");
  c.expect("census.refuted", s.refuted_invariant + s.refuted_search == s.no,
           std::to_string(s.inconclusive) + " inconclusive, " + std::to_string(s.contradictions) +
               " contradicted NO decisions");
  c.expect("census.symmetric", s.asymmetric == 0 && s.reflexive_failures == 0,
           "decide_iso is not reflexive and symmetric on the census");
  c.res.lines.push_back(std::to_string(s.labels.size()) + " labels, " + std::to_string(classes.size()) +
                        " classes");
}

}  // namespace

JobResult run_job(Command cmd, const std::vector<JobConfig>& configs, const RunOptions& opt) {
  if (configs.empty()) throw JobError("no config given");
  const JobConfig& cfg = configs.front();
  for (const auto& x : configs)
    if (x.command && *x.command != cmd)
      throw JobError("config is for '" + command_name(*x.command) + "', not '" + command_name(cmd) + "'");
  Ctx c;
  c.seed = opt.seed.value_or(cfg.seed);
  c.max_dim = opt.max_dim.value_or(cfg.max_dim);
  c.max_dim_override = opt.max_dim;
  c.exec = opt.exec;
  c.res.report["schema"] = kReportSchema;
  c.res.report["command"] = command_name(cmd);
  c.res.report["seed"] = c.seed;
  c.res.report["max_dim"] = c.max_dim;
  c.res.report["checks"] = Json::array();
  switch (cmd) {
    case Command::Construct: do_construct(c, cfg); break;
    case Command::Verify: do_verify(c, cfg); break;
    case Command::Triple: do_triple(c, cfg, true); break;
    case Command::CheckAt2: do_triple(c, cfg, false); break;
    case Command::Envelope: do_envelope(c, cfg); break;
    case Command::DecideIso: do_decide(c, configs, opt.verify); break;
    case Command::Census: do_census(c, cfg); break;
  }
  c.res.report["status"] = c.res.ok ? "pass" : "fail";
  return std::move(c.res);
}

}  // namespace ats
