#include "syllo/deciders.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>

#include "syllo/surface.hpp"

namespace syllo {

namespace {

void require_fragment(const std::vector<Formula> &phis, Fragment f) {
  for (const auto &phi : phis)
    if (!in_fragment(phi, f))
      throw FragmentError(print_formula(phi) + " is not in fragment " + fragment_name(f));
}

std::vector<Formula> with(std::vector<Formula> v, const Formula &f) {
  v.push_back(f);
  return v;
}

UnaryLiteral neg(const UnaryLiteral &l) { return complement(l); }

}  // namespace

// ---- S-dagger closure

bool LiteralClosure::consistent() const {
  for (const auto &l : closure)
    if (l.positive && closure.count(neg(l))) return false;
  return true;
}

namespace {

struct ImplicationGraph {
  std::map<UnaryLiteral, std::vector<std::pair<UnaryLiteral, Formula>>> adj;

  explicit ImplicationGraph(const std::vector<Formula> &phi) {
    for (const auto &f : phi) {
      if (f.quantifier != Quantifier::All || !f.left.is_literal() || !f.right.is_literal()) continue;
      const UnaryLiteral &l = f.left.subject, &m = f.right.subject;
      adj[l].push_back({m, f});
      adj[neg(m)].push_back({neg(l), f});
    }
    for (auto &[k, v] : adj)
      std::stable_sort(v.begin(), v.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
  }

  // BFS parents from one literal
  std::map<UnaryLiteral, std::pair<UnaryLiteral, Formula>> reach(const UnaryLiteral &s,
                                                                 std::set<UnaryLiteral> &seen) const {
    std::map<UnaryLiteral, std::pair<UnaryLiteral, Formula>> parent;
    std::deque<UnaryLiteral> q{s};
    seen.insert(s);
    while (!q.empty()) {
      UnaryLiteral x = q.front();
      q.pop_front();
      auto it = adj.find(x);
      if (it == adj.end()) continue;
      for (const auto &[y, f] : it->second)
        if (seen.insert(y).second) {
          parent.emplace(y, std::make_pair(x, f));
          q.push_back(y);
        }
    }
    return parent;
  }
};

}  // namespace

LiteralClosure closure(const std::vector<Formula> &phi, const std::set<UnaryLiteral> &V, const Signature &sig) {
  ImplicationGraph g(phi);
  LiteralClosure out;
  out.base = V;
  for (const auto &b : V) {
    std::set<UnaryLiteral> seen;
    auto parent = g.reach(b, seen);
    for (const auto &l : seen) out.closure.insert(l);
    for (const auto &[l, pf] : parent)
      if (!V.count(l)) out.edges.try_emplace(l, ClosureEdge{pf.first, pf.second, false});
  }
  if (!out.consistent()) {
    // rule A from a base literal reaching both k and ~k
    UnaryLiteral b = *V.begin();
    for (const auto &v : V) {
      std::set<UnaryLiteral> seen;
      g.reach(v, seen);
      bool bad = false;
      for (const auto &l : seen)
        if (seen.count(neg(l))) bad = true;
      if (bad) {
        b = v;
        break;
      }
    }
    Signature s = sig;
    for (const auto &l : V) s.unaries.insert(l.atom);
    for (const auto &l : all_uliterals(s))
      if (out.closure.insert(l).second) out.edges.try_emplace(l, ClosureEdge{b, All(lit(b), lit(neg(b))), true});
  }
  return out;
}

// ---- S-dagger decision

namespace {

struct SdProver {
  const RuleSet &rs = rule_set(RuleSetId::Sd);
  ImplicationGraph g;
  explicit SdProver(const std::vector<Formula> &phi) : g(phi) {}

  DerivationPtr chain(const UnaryLiteral &a, const UnaryLiteral &k) const {
    if (a == k) return apply_rule(rs, "T", {{"l", lit(a)}}, {});
    std::set<UnaryLiteral> seen;
    auto parent = g.reach(a, seen);
    std::vector<std::pair<UnaryLiteral, Formula>> path;  // (target, premise)
    for (UnaryLiteral x = k; x != a;) {
      const auto &pf = parent.at(x);
      path.push_back({x, pf.second});
      x = pf.first;
    }
    std::reverse(path.begin(), path.end());
    DerivationPtr d = make_premise(path[0].second);
    for (size_t i = 1; i < path.size(); ++i)
      d = apply_rule(rs, "B", {{"l", lit(a)}, {"m", lit(path[i - 1].first)}, {"n", lit(path[i].first)}},
                     {d, make_premise(path[i].second)});
    return d;
  }

  std::set<UnaryLiteral> reach(const UnaryLiteral &a) const {
    std::set<UnaryLiteral> seen;
    g.reach(a, seen);
    return seen;
  }

  // all(a,~a) when a reaches a complementary pair
  DerivationPtr incons(const UnaryLiteral &a) const {
    auto R = reach(a);
    if (R.count(neg(a))) return chain(a, neg(a));
    for (const auto &k : R)
      if (R.count(neg(k)))
        return apply_rule(rs, "B", {{"l", lit(a)}, {"m", lit(neg(k))}, {"n", lit(neg(a))}},
                          {chain(a, neg(k)), chain(a, k)});
    return nullptr;
  }

  // refutation from some(l,m) whose closure is inconsistent
  DerivationPtr refute_existential(const Formula &e) const {
    const UnaryLiteral &l = e.left.subject, &m = e.right.subject;
    auto Rl = reach(l), Rm = reach(m);
    auto via_self = [&](const UnaryLiteral &a, const UnaryLiteral &other) -> DerivationPtr {
      DerivationPtr aa = apply_rule(rs, "I", {{"l", lit(a)}, {"m", lit(other)}}, {make_premise(e)});
      return apply_rule(rs, "D", {{"l", lit(a)}, {"n", lit(a)}, {"m", lit(neg(a))}}, {aa, incons(a)});
    };
    for (const auto &k : Rl)
      if (Rl.count(neg(k))) return via_self(l, m);
    for (const auto &k : Rm)
      if (Rm.count(neg(k))) return via_self(m, l);
    for (const auto &k : Rl)
      if (Rm.count(neg(k))) {
        DerivationPtr km = apply_rule(rs, "D", {{"l", lit(l)}, {"n", lit(m)}, {"m", lit(k)}}, {make_premise(e), chain(l, k)});
        return apply_rule(rs, "D", {{"l", lit(m)}, {"n", lit(k)}, {"m", lit(neg(k))}}, {km, chain(m, neg(k))});
      }
    return nullptr;
  }
};

}  // namespace

Verdict decide_sdagger_sat(const std::vector<Formula> &theta) {
  require_fragment(theta, Fragment::Sd);
  std::vector<Formula> phi, psi;
  for (const auto &f : theta) (f.quantifier == Quantifier::All ? phi : psi).push_back(canonicalize(f));
  std::sort(psi.begin(), psi.end());
  psi.erase(std::unique(psi.begin(), psi.end()), psi.end());
  Signature sig = atoms(theta);
  SdProver prover(phi);

  auto extend = [&](std::set<UnaryLiteral> U) -> std::optional<std::set<UnaryLiteral>> {
    U = closure(phi, U, sig).closure;
    for (const auto &p : sig.unaries) {
      if (U.count(ulit(p)) || U.count(ulit(p, false))) continue;
      auto with_p = U;
      with_p.insert(ulit(p));
      auto c = closure(phi, with_p, sig);
      if (!c.consistent()) {
        auto with_np = U;
        with_np.insert(ulit(p, false));
        c = closure(phi, with_np, sig);
        if (!c.consistent()) return std::nullopt;
      }
      U = c.closure;
    }
    return U;
  };

  Verdict v;
  std::vector<std::set<UnaryLiteral>> points;
  DerivationPtr refutation;
  // rule N: some(l,l) whenever ~l is inconsistent
  for (const auto &l : all_uliterals(sig)) {
    if (refutation || !prover.incons(neg(l))) continue;
    if (DerivationPtr bad = prover.incons(l)) {
      DerivationPtr ll = apply_rule(prover.rs, "N", {{"l", lit(l)}}, {prover.incons(neg(l))});
      refutation = apply_rule(prover.rs, "D", {{"l", lit(l)}, {"n", lit(l)}, {"m", lit(neg(l))}}, {ll, bad});
    }
  }
  if (!refutation && psi.empty()) {
    for (const auto &l : all_uliterals(sig))
      if (closure(phi, {l}, sig).consistent()) {
        auto U = extend({l});
        if (!U) throw std::logic_error("decide_sdagger_sat: consistent closure failed to extend");
        points.push_back(*U);
        break;
      }
    if (sig.unaries.empty()) points.push_back({});
    if (points.empty()) throw std::logic_error("decide_sdagger_sat: no consistent literal");
  } else if (!refutation) {
    for (const auto &e : psi) {
      std::set<UnaryLiteral> base{e.left.subject, e.right.subject};
      if (!closure(phi, base, sig).consistent()) {
        refutation = prover.refute_existential(e);
        break;
      }
      auto U = extend(base);
      if (!U) throw std::logic_error("decide_sdagger_sat: consistent closure failed to extend");
      points.push_back(*U);
    }
  }

  if (refutation) {
    Formula c = check_derivation(*refutation, prover.rs, theta);
    if (!is_absurdity(canonicalize(c))) throw std::logic_error("decide_sdagger_sat: refutation is not absurd");
    v.kind = Verdict::Unsat;
    v.refutation = refutation;
    v.system = "Sd";
    return v;
  }
  std::vector<std::string> dom;
  for (size_t i = 0; i < points.size(); ++i) dom.push_back("w" + std::to_string(i + 1));
  Structure A(dom);
  for (const auto &p : sig.unaries) A.declare_unary(p);
  for (const auto &r : sig.binaries) A.declare_binary(r);
  for (size_t i = 0; i < points.size(); ++i)
    for (const auto &l : points[i])
      if (l.positive) A.add_unary(l.atom, static_cast<int>(i));
  if (!models(A, theta)) throw std::logic_error("decide_sdagger_sat: constructed model fails");
  v.kind = Verdict::Sat;
  v.model = A;
  return v;
}

ValidVerdict decide_sdagger_valid(const std::vector<Formula> &theta, const Formula &goal) {
  require_fragment(with(theta, goal), Fragment::Sd);
  Verdict s = decide_sdagger_sat(with(theta, bar(goal)));
  ValidVerdict v;
  if (s.kind == Verdict::Sat) {
    if (satisfies(*s.model, goal).holds) throw std::logic_error("decide_sdagger_valid: countermodel satisfies goal");
    v.kind = ValidVerdict::Invalid;
    v.countermodel = s.model;
    return v;
  }
  bool all_s = true;
  for (const auto &f : with(theta, goal)) all_s = all_s && in_fragment(f, Fragment::S);
  const RuleSet &rs = rule_set(all_s ? RuleSetId::S : RuleSetId::Sd);
  DerivationPtr d = derive(theta, goal, rs);
  if (!d) throw std::logic_error("decide_sdagger_valid: valid sequent without direct derivation");
  v.kind = ValidVerdict::Valid;
  v.derivation = d;
  v.system = ruleset_name(rs.id);
  return v;
}

// ---- R witness set

std::string witness_name(const WitnessId &w) {
  std::string s = "b_{";
  bool first = true;
  for (const auto &c : w.V) {
    if (!first) s += ", ";
    first = false;
    s += print_term(c);
  }
  return s + "}," + std::to_string(w.i);
}

namespace {

bool r_shaped(const Formula &f) {
  return f.left.is_literal() && f.left.subject.positive && is_cterm(f.right);
}

}  // namespace

WitnessSet::WitnessSet(const std::vector<Formula> &gamma) {
  require_fragment(gamma, Fragment::R);
  sig_ = atoms(gamma);
  std::set<Formula> seen;
  for (const auto &f : gamma) {
    canon_.insert(canonicalize(f));
    for (const auto &r : representatives(canonicalize(f)))
      if (r_shaped(r) && seen.insert(r).second) gamma_.push_back(r);
  }
  std::sort(gamma_.begin(), gamma_.end());
  for (const auto &f : gamma_)
    if (f.quantifier == Quantifier::All) univ_[f.left.subject.atom].push_back(f.right);

  std::vector<WitnessId> frontier;
  for (const auto &f : gamma_)
    if (f.quantifier == Quantifier::Some) {
      WitnessId w{{f.left, f.right}, 0};
      if (level_.emplace(w, 0).second) frontier.push_back(w);
    }
  std::sort(frontier.begin(), frontier.end());
  for (int k = 0; !frontier.empty(); ++k) {
    std::vector<WitnessId> next;
    for (const auto &b : frontier)
      for (const auto &p : sig_.unaries)
        for (const auto &r : sig_.binaries)
          for (bool pos : {true, false}) {
            ETerm e = ex(ulit(p), blit(r, pos));
            if (!arrow(b.V, e)) continue;
            for (int i : {1, 2}) {
              WitnessId w{{lit(p)}, i};
              if (level_.emplace(w, k + 1).second) {
                parent_.emplace(w, Parent{b, e});
                next.push_back(w);
              }
            }
          }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  for (const auto &[w, l] : level_) elements_.push_back(w);
  for (size_t i = 0; i < elements_.size(); ++i) index_[elements_[i]] = static_cast<int>(i);
}

bool WitnessSet::in_gamma(const Formula &phi) const { return canon_.count(canonicalize(phi)) > 0; }

std::vector<Formula> WitnessSet::arrow_chain(const std::string &p, const ETerm &d) const {
  std::map<std::string, std::string> parent;
  std::deque<std::string> q{p};
  std::set<std::string> seen{p};
  while (!q.empty()) {
    std::string x = q.front();
    q.pop_front();
    auto it = univ_.find(x);
    if (it == univ_.end()) continue;
    for (const auto &c : it->second) {
      if (c == d) {
        std::vector<Formula> out{All(lit(x), d)};
        for (std::string y = x; y != p; y = parent.at(y)) out.push_back(All(lit(parent.at(y)), lit(y)));
        std::reverse(out.begin(), out.end());
        return out;
      }
    }
    for (const auto &c : it->second)
      if (c.is_literal() && c.subject.positive && seen.insert(c.subject.atom).second) {
        parent[c.subject.atom] = x;
        q.push_back(c.subject.atom);
      }
  }
  return {};
}

bool WitnessSet::arrow(const ETerm &c, const ETerm &d) const {
  if (c == d) return true;
  if (!c.is_literal() || !c.subject.positive) return false;
  return !arrow_chain(c.subject.atom, d).empty();
}

bool WitnessSet::arrow(const std::set<ETerm> &V, const ETerm &d) const {
  for (const auto &c : V)
    if (arrow(c, d)) return true;
  return false;
}

std::string WitnessSet::element_label(const WitnessId &w) const {
  return "b" + std::to_string(index_.at(w) + 1);
}

Structure WitnessSet::structure() const {
  std::vector<std::string> dom;
  for (const auto &w : elements_) dom.push_back(element_label(w));
  if (dom.empty()) dom.push_back("b0");
  Structure A(dom);
  for (const auto &p : sig_.unaries) A.declare_unary(p);
  for (const auto &r : sig_.binaries) A.declare_binary(r);
  for (const auto &b : elements_) {
    const int i = index_.at(b);
    for (const auto &p : sig_.unaries)
      if (arrow(b.V, lit(p))) A.add_unary(p, i);
    for (const auto &r : sig_.binaries)
      for (const auto &p : sig_.unaries) {
        if (arrow(b.V, ex(ulit(p), blit(r)))) A.add_binary(r, i, index_.at(WitnessId{{lit(p)}, 1}));
        if (arrow(b.V, all(ulit(p), blit(r))))
          for (const auto &w : elements_)
            if (arrow(w.V, lit(p))) A.add_binary(r, i, index_.at(w));
      }
  }
  return A;
}

WitnessSet build_witness_set(const std::vector<Formula> &gamma) { return WitnessSet(gamma); }

std::optional<ConditionCWitness> check_condition_C(const WitnessSet &B) {
  const auto &sig = B.signature();
  for (const auto &b : B.elements())
    for (const auto &q : sig.unaries)
      if (B.arrow(b.V, lit(q)) && B.arrow(b.V, lit(q, false))) return ConditionCWitness{1, {b}, q, "", ""};
  for (const auto &b : B.elements())
    for (const auto &r : sig.binaries)
      for (const auto &q : sig.unaries)
        for (const auto &o : sig.unaries)
          if (B.arrow(b.V, ex(ulit(q), blit(r, false))) && B.arrow(b.V, all(ulit(o), blit(r))) &&
              B.arrow(lit(q), lit(o)))
            return ConditionCWitness{2, {b}, q, o, r};
  for (const auto &b : B.elements())
    for (const auto &r : sig.binaries)
      for (const auto &q : sig.unaries)
        for (const auto &o : sig.unaries)
          if (B.arrow(b.V, all(ulit(q), blit(r, false))) && B.arrow(b.V, ex(ulit(o), blit(r))) &&
              B.arrow(lit(o), lit(q)))
            return ConditionCWitness{3, {b}, q, o, r};
  for (const auto &b : B.elements())
    for (const auto &r : sig.binaries)
      for (const auto &q : sig.unaries)
        for (const auto &o : sig.unaries) {
          if (!B.arrow(b.V, all(ulit(q), blit(r, false))) || !B.arrow(b.V, all(ulit(o), blit(r)))) continue;
          for (const auto &w : B.elements())
            if (B.arrow(w.V, lit(q)) && B.arrow(w.V, lit(o))) return ConditionCWitness{4, {b, w}, q, o, r};
        }
  return std::nullopt;
}

// ---- refutation assembly

namespace {

struct RProver {
  const WitnessSet &B;
  const RuleSet &rs = rule_set(RuleSetId::R);

  DerivationPtr rule(const std::string &id, Substitution g, std::vector<DerivationPtr> kids) const {
    return apply_rule(rs, id, std::move(g), std::move(kids));
  }

  DerivationPtr premise(const Formula &f) const {
    if (!B.in_gamma(f)) throw std::logic_error("refutation premise " + print_formula(f) + " not in the set");
    return make_premise(f);
  }

  static std::string first_atom_to(const WitnessSet &B, const std::set<ETerm> &V, const ETerm &d) {
    for (const auto &c : V)
      if (c.is_literal() && c.subject.positive && B.arrow(c, d)) return c.subject.atom;
    throw std::logic_error("no atom of V reaches " + print_term(d));
  }

  // p => d, p an atom
  DerivationPtr forall(const std::string &p, const ETerm &d) const {
    if (d == lit(p)) return rule("T", {{"p", lit(p)}}, {});
    auto chain = B.arrow_chain(p, d);
    if (chain.empty()) throw std::logic_error(p + " does not reach " + print_term(d));
    DerivationPtr acc = premise(chain.back());
    for (size_t i = chain.size() - 1; i-- > 0;)
      acc = rule("B", {{"p", chain[i].left}, {"q", chain[i].right}, {"c", d}}, {premise(chain[i]), acc});
    return acc;
  }

  // some(q1,c) for q1, c in V of a level-0 element
  DerivationPtr base_exists(const WitnessId &b, const std::string &q1, const ETerm &c) const {
    Formula f = Some(lit(q1), c);
    if (B.in_gamma(f)) return premise(f);
    for (const auto &d : b.V)
      if (d != lit(q1)) return rule("I", {{"p", lit(q1)}, {"c", d}}, {premise(Some(lit(q1), d))});
    throw std::logic_error("base_exists: no existential for " + witness_name(b));
  }

  // some(p,c) from V => p and V => c
  DerivationPtr exists_from(const WitnessId &b, const std::string &p, const ETerm &c) const {
    if (B.level(b) == 0) {
      std::string q1 = first_atom_to(B, b.V, lit(p));
      DerivationPtr e;
      if (b.V.count(c)) {
        e = base_exists(b, q1, c);
      } else {
        std::string q2 = first_atom_to(B, b.V, c);
        e = rule("D1", {{"p", lit(q1)}, {"q", lit(q2)}, {"c", c}}, {base_exists(b, q1, lit(q2)), forall(q2, c)});
      }
      return rule("D2", {{"p", lit(q1)}, {"q", lit(p)}, {"c", c}}, {forall(q1, lit(p)), e});
    }
    const std::string pk = b.V.begin()->subject.atom;
    const auto &par = B.parent(b);
    std::string pw;
    for (const auto &x : par.w.V)
      if (x.is_literal() && x.subject.positive) {
        pw = x.subject.atom;
        break;
      }
    DerivationPtr sub = exists_from(par.w, pw, par.eterm);
    DerivationPtr kk = rule("II", {{"p", lit(pw)}, {"q", lit(pk)}, {"t", par.eterm.verb}}, {sub});
    DerivationPtr kp = rule("D1", {{"p", lit(pk)}, {"q", lit(pk)}, {"c", lit(p)}}, {kk, forall(pk, lit(p))});
    return rule("D1", {{"p", lit(p)}, {"q", lit(pk)}, {"c", c}}, {kp, forall(pk, c)});
  }

  struct PairSplit {
    std::string p;
    DerivationPtr exists, forall;  // (i): some(p,c), all(p,d); (ii): some(p,d), all(p,c)
    bool case_i;
  };

  PairSplit split_pair(const WitnessId &b, const ETerm &c, const ETerm &d) const {
    if (c.is_literal() && c.subject.positive) {
      const std::string &q = c.subject.atom;
      return {q, exists_from(b, q, d), rule("T", {{"p", lit(q)}}, {}), false};
    }
    if (d.is_literal() && d.subject.positive) {
      const std::string &q = d.subject.atom;
      return {q, exists_from(b, q, c), rule("T", {{"p", lit(q)}}, {}), true};
    }
    if (!b.V.count(d)) {
      std::string p = first_atom_to(B, b.V, d);
      return {p, exists_from(b, p, c), forall(p, d), true};
    }
    std::string p = first_atom_to(B, b.V, c);
    return {p, exists_from(b, p, d), forall(p, c), false};
  }

  // V => e = some(x,t), V => a = all(y,~t), x => y
  DerivationPtr monotone_clash(const WitnessId &b, const ETerm &e, const ETerm &a) const {
    const std::string x = e.subject.atom, y = a.subject.atom;
    const BinaryLiteral t = e.verb;
    DerivationPtr xy = forall(x, lit(y));
    PairSplit l = split_pair(b, e, a);
    ETerm moved = ex(ulit(y), t);
    if (l.case_i) {
      DerivationPtr ee = rule("EE", {{"p", lit(l.p)}, {"q", lit(x)}, {"q2", lit(y)}, {"t", t}}, {l.exists, xy});
      return rule("D3", {{"q", lit(l.p)}, {"c", moved}, {"p", lit(l.p)}}, {l.forall, ee});
    }
    DerivationPtr ae = rule("AE", {{"p", lit(l.p)}, {"q", lit(x)}, {"q2", lit(y)}, {"t", t}}, {l.forall, xy});
    return rule("D3", {{"q", lit(l.p)}, {"c", a}, {"p", lit(l.p)}}, {ae, l.exists});
  }

  DerivationPtr refute(const ConditionCWitness &w) const {
    const WitnessId &b = w.elements[0];
    switch (w.case_no) {
      case 1: return exists_from(b, w.q, lit(w.q, false));
      case 2: return monotone_clash(b, ex(ulit(w.q), blit(w.r, false)), all(ulit(w.o), blit(w.r)));
      case 3: return monotone_clash(b, ex(ulit(w.o), blit(w.r)), all(ulit(w.q), blit(w.r, false)));
      case 4: {
        ETerm c1 = all(ulit(w.q), blit(w.r, false)), c2 = all(ulit(w.o), blit(w.r));
        PairSplit l = split_pair(b, c1, c2);
        // exists: some(p, all(p1,u)); forall: all(p, all(p2,~u))
        const ETerm &ex_term = l.case_i ? c1 : c2;
        const ETerm &all_term = l.case_i ? c2 : c1;
        const std::string p1 = ex_term.subject.atom, p2 = all_term.subject.atom;
        const BinaryLiteral nu = all_term.verb;
        DerivationPtr p12 = exists_from(w.elements[1], p1, lit(p2));
        DerivationPtr aa = rule("AA", {{"p", lit(l.p)}, {"q2", lit(p2)}, {"t", nu}, {"q", lit(p1)}}, {l.forall, p12});
        return rule("D3", {{"q", lit(l.p)}, {"c", ex_term}, {"p", lit(l.p)}}, {aa, l.exists});
      }
    }
    throw std::logic_error("bad condition-c case");
  }
};

}  // namespace

DerivationPtr condition_c_refutation(const WitnessSet &B, const ConditionCWitness &w) {
  RProver pr{B};
  return pr.refute(w);
}

namespace {

std::vector<std::string> legend(const WitnessSet &B) {
  std::vector<std::string> out;
  for (const auto &w : B.elements()) out.push_back(B.element_label(w) + " = " + witness_name(w));
  return out;
}

}  // namespace

Verdict decide_r_sat(const std::vector<Formula> &gamma) {
  WitnessSet B(gamma);
  Verdict v;
  v.element_legend = legend(B);
  if (auto c = check_condition_C(B)) {
    DerivationPtr d = condition_c_refutation(B, *c);
    Formula concl = check_derivation(*d, rule_set(RuleSetId::R), gamma);
    if (!is_absurdity(canonicalize(concl))) throw std::logic_error("decide_r_sat: refutation is not absurd");
    v.kind = Verdict::Unsat;
    v.refutation = d;
    v.system = "R";
    v.condition_c = c;
    return v;
  }
  Structure A = B.structure();
  for (const auto &f : gamma)
    if (!satisfies(A, f).holds) throw std::logic_error("decide_r_sat: witness structure fails " + print_formula(f));
  v.kind = Verdict::Sat;
  v.model = A;
  return v;
}

ValidVerdict decide_r_valid(const std::vector<Formula> &theta, const Formula &goal) {
  require_fragment(with(theta, goal), Fragment::R);
  Verdict s = decide_r_sat(with(theta, bar(goal)));
  ValidVerdict v;
  v.element_legend = s.element_legend;
  if (s.kind == Verdict::Sat) {
    if (satisfies(*s.model, goal).holds) throw std::logic_error("decide_r_valid: countermodel satisfies goal");
    v.kind = ValidVerdict::Invalid;
    v.countermodel = s.model;
    return v;
  }
  DerivationPtr d = close_by_raa(s.refutation, goal, theta);
  Formula c = check_derivation(*d, rule_set(RuleSetId::R), theta);
  if (canonicalize(c) != canonicalize(goal)) throw std::logic_error("decide_r_valid: certificate concludes wrong formula");
  v.kind = ValidVerdict::Valid;
  v.derivation = d;
  v.system = "R";
  v.condition_c = s.condition_c;
  return v;
}

// ---- bounded

Verdict decide_star_sat(const std::vector<Formula> &gamma, int bound) {
  if (bound < 1) throw std::invalid_argument("bound must be positive");
  ModelSearch m = find_model(gamma, bound);
  Verdict v;
  v.bound = bound;
  v.bounded = true;
  if (m.found()) {
    if (!models(*m.model, gamma)) throw std::logic_error("decide_star_sat: model fails");
    v.kind = Verdict::Sat;
    v.model = m.model;
  } else {
    v.kind = Verdict::Unknown;
  }
  return v;
}

ValidVerdict decide_star_valid(const std::vector<Formula> &theta, const Formula &goal, int bound) {
  Verdict s = decide_star_sat(with(theta, bar(goal)), bound);
  ValidVerdict v;
  v.bound = bound;
  v.bounded = true;
  if (s.kind == Verdict::Sat) {
    if (satisfies(*s.model, goal).holds) throw std::logic_error("decide_star_valid: countermodel satisfies goal");
    v.kind = ValidVerdict::Invalid;
    v.countermodel = s.model;
  } else {
    v.kind = ValidVerdict::Unknown;
  }
  return v;
}

int star_bound_cap() {
  if (const char *e = std::getenv("SYLLO_BOUND_CAP")) {
    try {
      int n = std::stoi(e);
      if (n >= 1) return n;
    } catch (const std::exception &) {
    }
    throw std::invalid_argument(std::string("SYLLO_BOUND_CAP must be a positive integer, got '") + e + "'");
  }
  return 12;
}

int default_star_bound(const std::vector<Formula> &gamma, int cap) {
  Signature s = atoms(gamma);
  const long k = static_cast<long>(s.unaries.size()), m = static_cast<long>(s.binaries.size());
  const long c = k + 2 * k * m;
  const long b = std::max(1L, 2 * c * c);
  return static_cast<int>(std::min<long>(cap, b));
}

int default_star_bound(const std::vector<Formula> &gamma) { return default_star_bound(gamma, star_bound_cap()); }

std::optional<Fragment> tightest_fragment(const std::vector<Formula> &phis) {
  auto all_in = [&](Fragment f) {
    for (const auto &p : phis)
      if (!in_fragment(p, f)) return false;
    return true;
  };
  for (Fragment f : {Fragment::S, Fragment::Sd, Fragment::R, Fragment::Rs, Fragment::Rd, Fragment::Rsd})
    if (all_in(f)) return f;
  return std::nullopt;
}

namespace {

Fragment route(const std::vector<Formula> &phis, std::optional<Fragment> force) {
  if (force) {
    require_fragment(phis, *force);
    return *force;
  }
  auto f = tightest_fragment(phis);
  if (!f) throw FragmentError("formulas lie in no syllogistic fragment");
  return *f;
}

}  // namespace

Verdict decide(const std::vector<Formula> &gamma, int bound, std::optional<Fragment> force) {
  switch (route(gamma, force)) {
    case Fragment::S:
    case Fragment::Sd: return decide_sdagger_sat(gamma);
    case Fragment::R: return decide_r_sat(gamma);
    default: return decide_star_sat(gamma, bound > 0 ? bound : default_star_bound(gamma));
  }
}

ValidVerdict decide_valid(const std::vector<Formula> &theta, const Formula &goal, int bound,
                          std::optional<Fragment> force) {
  std::vector<Formula> all_f = with(theta, goal);
  switch (route(all_f, force)) {
    case Fragment::S:
    case Fragment::Sd: return decide_sdagger_valid(theta, goal);
    case Fragment::R: return decide_r_valid(theta, goal);
    default: return decide_star_valid(theta, goal, bound > 0 ? bound : default_star_bound(all_f));
  }
}

// ---- printing

namespace {

std::string print_condition_c(const ConditionCWitness &c, const std::vector<std::string> &legend_lines,
                              const std::vector<WitnessId> &) {
  std::string out = "condition-c: case " + std::to_string(c.case_no) + "\n";
  const char *roles[] = {"V", "W"};
  for (size_t i = 0; i < c.elements.size(); ++i) out += std::string("  ") + roles[i] + ": " + witness_name(c.elements[i]) + "\n";
  out += "  q: " + c.q + "\n";
  if (!c.o.empty()) out += "  o: " + c.o + "\n";
  if (!c.r.empty()) out += "  r: " + c.r + "\n";
  if (!legend_lines.empty()) {
    out += "witnesses:\n";
    for (const auto &l : legend_lines) out += "  " + l + "\n";
  }
  return out;
}

}  // namespace

std::string print_verdict(const Verdict &v) {
  std::string out;
  switch (v.kind) {
    case Verdict::Sat: out += "verdict: sat\n"; break;
    case Verdict::Unsat: out += "verdict: unsat\n"; break;
    case Verdict::Unknown: out += "verdict: unknown-bound\n"; break;
  }
  if (v.bounded) out += "bound: " + std::to_string(v.bound) + "\n";
  if (v.model) out += "model:\n" + print_structure(*v.model);
  if (v.condition_c) out += print_condition_c(*v.condition_c, v.element_legend, {});
  if (v.refutation) out += "system: " + v.system + "\nderivation:\n" + print_derivation(*v.refutation);
  return out;
}

std::string print_valid_verdict(const ValidVerdict &v) {
  std::string out;
  switch (v.kind) {
    case ValidVerdict::Valid: out += "verdict: valid\n"; break;
    case ValidVerdict::Invalid: out += "verdict: invalid\n"; break;
    case ValidVerdict::Unknown: out += "verdict: unknown-bound\n"; break;
  }
  if (v.bounded) out += "bound: " + std::to_string(v.bound) + "\n";
  if (v.countermodel) out += "countermodel:\n" + print_structure(*v.countermodel);
  if (v.condition_c) out += print_condition_c(*v.condition_c, v.element_legend, {});
  if (v.derivation) out += "system: " + v.system + "\nderivation:\n" + print_derivation(*v.derivation);
  return out;
}

}  // namespace syllo
