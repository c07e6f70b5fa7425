#include "syllo/calculus.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "syllo/surface.hpp"

namespace syllo {

std::string sort_name(Sort s) {
  switch (s) {
    case Sort::UnaryAtom: return "UnaryAtom";
    case Sort::BinaryAtom: return "BinaryAtom";
    case Sort::UnaryLiteral: return "UnaryLiteral";
    case Sort::BinaryLiteral: return "BinaryLiteral";
    case Sort::CTerm: return "CTerm";
    case Sort::PositiveCTerm: return "PositiveCTerm";
    case Sort::Formula: return "Formula";
  }
  return "?";
}

bool value_has_sort(const Value &v, Sort s) {
  switch (s) {
    case Sort::UnaryAtom: {
      auto *e = std::get_if<ETerm>(&v);
      return e && e->is_literal() && e->subject.positive;
    }
    case Sort::UnaryLiteral: {
      auto *e = std::get_if<ETerm>(&v);
      return e && e->is_literal();
    }
    case Sort::CTerm: {
      auto *e = std::get_if<ETerm>(&v);
      return e && is_cterm(*e);
    }
    case Sort::PositiveCTerm: {
      auto *e = std::get_if<ETerm>(&v);
      return e && is_positive_cterm(*e);
    }
    case Sort::BinaryLiteral: return std::holds_alternative<BinaryLiteral>(v);
    case Sort::BinaryAtom: {
      auto *t = std::get_if<BinaryLiteral>(&v);
      return t && t->positive;
    }
    case Sort::Formula: return std::holds_alternative<Formula>(v);
  }
  return false;
}

std::string print_value(const Value &v) {
  if (auto *e = std::get_if<ETerm>(&v)) return print_term(*e);
  if (auto *t = std::get_if<BinaryLiteral>(&v)) return print_literal(*t);
  return print_formula(std::get<Formula>(v));
}

const MetaVar *RuleSchema::var(const std::string &name) const {
  for (const auto &m : vars)
    if (m.name == name) return &m;
  return nullptr;
}

std::string ruleset_name(RuleSetId id) {
  switch (id) {
    case RuleSetId::S: return "S";
    case RuleSetId::Sd: return "Sd";
    case RuleSetId::R: return "R";
    case RuleSetId::Rs: return "Rs";
  }
  return "?";
}

std::optional<RuleSetId> parse_ruleset(const std::string &s) {
  if (s == "S") return RuleSetId::S;
  if (s == "Sd" || s == "S+" || s == "S†") return RuleSetId::Sd;
  if (s == "R") return RuleSetId::R;
  if (s == "Rs" || s == "R*") return RuleSetId::Rs;
  return std::nullopt;
}

const RuleSchema *RuleSet::find(const std::string &rule_id) const {
  for (const auto &r : rules)
    if (r.id == rule_id) return &r;
  return nullptr;
}

// ---- rule tables

namespace {

Sort sort_code(char c) {
  switch (c) {
    case 'A': return Sort::UnaryAtom;
    case 'L': return Sort::UnaryLiteral;
    case 'T': return Sort::BinaryLiteral;
    case 'R': return Sort::BinaryAtom;
    case 'C': return Sort::CTerm;
    case 'P': return Sort::PositiveCTerm;
    default: return Sort::Formula;
  }
}

TermPattern term_pattern(const ETerm &e) {
  TermPattern t;
  if (e.is_literal()) {
    t.kind = TermPattern::Var;
    t.var = e.subject.atom;
    t.flip = !e.subject.positive;
    return t;
  }
  t.kind = e.kind == TermKind::Exists ? TermPattern::Exists : TermPattern::Forall;
  t.subject = e.subject.atom;
  t.subject_flip = !e.subject.positive;
  t.verb = e.verb.atom;
  t.verb_flip = !e.verb.positive;
  return t;
}

FormulaPattern formula_pattern(const std::string &text) {
  Formula f = parse_formula(text);
  FormulaPattern p;
  p.kind = f.quantifier == Quantifier::All ? FormulaPattern::All : FormulaPattern::Some;
  p.left = term_pattern(f.left);
  p.right = term_pattern(f.right);
  return p;
}

// vars: "p:A q:A l:L"
RuleSchema schema(const std::string &id, const std::string &vars, std::vector<std::string> ante,
                  const std::string &cons) {
  RuleSchema r;
  r.id = id;
  std::istringstream in(vars);
  std::string w;
  while (in >> w) r.vars.push_back({w.substr(0, w.find(':')), sort_code(w.back())});
  for (const auto &a : ante) r.antecedents.push_back(formula_pattern(a));
  r.consequent = formula_pattern(cons);
  return r;
}

RuleSchema rule_x() {
  RuleSchema r;
  r.id = "X";
  r.vars = {{"psi", Sort::Formula}, {"phi", Sort::Formula}};
  FormulaPattern a, b, c;
  a.kind = b.kind = c.kind = FormulaPattern::Var;
  a.var = b.var = "psi";
  b.flip = true;
  c.var = "phi";
  r.antecedents = {a, b};
  r.consequent = c;
  return r;
}

RuleSet make_s() {
  RuleSet s{RuleSetId::S, Fragment::S, {}};
  s.rules = {
      schema("D1", "p:A q:A l:L", {"all(q,l)", "some(p,q)"}, "some(p,l)"),
      schema("D2", "p:A q:A l:L", {"some(p,l)", "all(p,q)"}, "some(q,l)"),
      schema("D3", "p:A q:A l:L", {"all(q,~l)", "some(p,l)"}, "some(p,~q)"),
      schema("B", "p:A q:A l:L", {"all(p,q)", "all(q,l)"}, "all(p,l)"),
      schema("A", "p:A l:L", {"all(p,~p)"}, "all(p,l)"),
      schema("T", "p:A", {}, "all(p,p)"),
      schema("I", "p:A l:L", {"some(p,l)"}, "some(p,p)"),
      rule_x(),
  };
  return s;
}

RuleSet make_sd() {
  RuleSet s{RuleSetId::Sd, Fragment::Sd, {}};
  s.rules = {
      schema("D", "l:L m:L n:L", {"some(l,n)", "all(l,m)"}, "some(m,n)"),
      schema("B", "l:L m:L n:L", {"all(l,m)", "all(m,n)"}, "all(l,n)"),
      schema("A", "l:L m:L", {"all(l,~l)"}, "all(l,m)"),
      schema("T", "l:L", {}, "all(l,l)"),
      schema("I", "l:L m:L", {"some(l,m)"}, "some(l,l)"),
      rule_x(),
      schema("N", "l:L", {"all(~l,l)"}, "some(l,l)"),
  };
  return s;
}

RuleSet make_r() {
  RuleSet s{RuleSetId::R, Fragment::R, {}};
  s.rules = {
      schema("D1", "p:A q:A c:C", {"some(p,q)", "all(q,c)"}, "some(p,c)"),
      schema("B", "p:A q:A c:C", {"all(p,q)", "all(q,c)"}, "all(p,c)"),
      schema("D2", "p:A q:A c:C", {"all(p,q)", "some(p,c)"}, "some(q,c)"),
      schema("T", "p:A", {}, "all(p,p)"),
      schema("I", "p:A c:C", {"some(p,c)"}, "some(p,p)"),
      schema("D3", "p:A q:A c:C", {"all(q,~c)", "some(p,c)"}, "some(p,~q)"),
      schema("A", "p:A c:C", {"all(p,~p)"}, "all(p,c)"),
      schema("II", "p:A q:A t:T", {"some(p,some(q,t))"}, "some(q,q)"),
      schema("AA", "p:A q:A q2:A t:T", {"all(p,all(q2,t))", "some(q,q2)"}, "all(p,some(q,t))"),
      schema("EE", "p:A q:A q2:A t:T", {"some(p,some(q,t))", "all(q,q2)"}, "some(p,some(q2,t))"),
      schema("AE", "p:A q:A q2:A t:T", {"all(p,some(q,t))", "all(q,q2)"}, "all(p,some(q2,t))"),
  };
  return s;
}

RuleSet make_rs() {
  RuleSet s{RuleSetId::Rs, Fragment::Rs, {}};
  s.rules = {
      schema("T", "c:P", {}, "all(c,c)"),
      schema("I", "c:P d:C", {"some(c,d)"}, "some(c,c)"),
      schema("B", "b:P c:P d:C", {"all(b,c)", "all(c,d)"}, "all(b,d)"),
      schema("D1", "b:P c:P d:C", {"some(b,c)", "all(c,d)"}, "some(b,d)"),
      schema("D2", "b:P c:P d:C", {"all(b,c)", "some(b,d)"}, "some(c,d)"),
      schema("J", "p:A q:A r:R", {"all(p,q)"}, "all(all(q,r),all(p,r))"),
      schema("K", "p:A q:A r:R", {"all(p,q)"}, "all(some(p,r),some(q,r))"),
      schema("L", "p:A q:A r:R", {"some(p,q)"}, "all(all(p,r),some(q,r))"),
      schema("II", "p:A q:A r:R", {"some(q,some(p,r))"}, "some(p,p)"),
      schema("Z", "p:A c:P r:R", {"all(p,~p)"}, "all(c,all(p,r))"),
      schema("W", "p:A r:R", {"all(p,~p)"}, "some(all(p,r),all(p,r))"),
  };
  return s;
}

}  // namespace

const RuleSet &rule_set(RuleSetId id) {
  static const RuleSet s = make_s(), sd = make_sd(), r = make_r(), rs = make_rs();
  switch (id) {
    case RuleSetId::S: return s;
    case RuleSetId::Sd: return sd;
    case RuleSetId::R: return r;
    case RuleSetId::Rs: return rs;
  }
  return s;
}

RuleSet restrict_rules(const RuleSet &rs, const std::vector<std::string> &ids) {
  RuleSet out{rs.id, rs.fragment, {}};
  for (const auto &r : rs.rules)
    if (std::find(ids.begin(), ids.end(), r.id) != ids.end()) out.rules.push_back(r);
  return out;
}

// ---- instantiation

namespace {

ETerm build_term(const TermPattern &p, const Substitution &g) {
  if (p.kind == TermPattern::Var) {
    const ETerm &e = std::get<ETerm>(g.at(p.var));
    return p.flip ? complement(e) : e;
  }
  const ETerm &s = std::get<ETerm>(g.at(p.subject));
  UnaryLiteral subj = p.subject_flip ? complement(s.subject) : s.subject;
  BinaryLiteral verb = std::get<BinaryLiteral>(g.at(p.verb));
  if (p.verb_flip) verb = complement(verb);
  return p.kind == TermPattern::Exists ? ex(subj, verb) : all(subj, verb);
}

Formula build_formula(const FormulaPattern &p, const Substitution &g) {
  if (p.kind == FormulaPattern::Var) {
    const Formula &f = std::get<Formula>(g.at(p.var));
    return p.flip ? bar(f) : f;
  }
  ETerm a = build_term(p.left, g), b = build_term(p.right, g);
  return p.kind == FormulaPattern::All ? All(a, b) : Some(a, b);
}

void check_subst(const RuleSchema &rule, const Substitution &g) {
  for (const auto &m : rule.vars) {
    auto it = g.find(m.name);
    if (it == g.end()) throw SortError("rule " + rule.id + ": variable " + m.name + " unbound");
    if (!value_has_sort(it->second, m.sort))
      throw SortError("rule " + rule.id + ": " + m.name + "=" + print_value(it->second) + " is not a " +
                      sort_name(m.sort));
  }
  for (const auto &[k, v] : g)
    if (!rule.var(k)) throw SortError("rule " + rule.id + " has no variable " + k);
}

}  // namespace

Instance instantiate(const RuleSchema &rule, const Substitution &g) {
  check_subst(rule, g);
  Instance out;
  for (const auto &a : rule.antecedents) out.antecedents.push_back(canonicalize(build_formula(a, g)));
  out.consequent = canonicalize(build_formula(rule.consequent, g));
  return out;
}

// ---- matching

namespace {

struct Universe {
  std::map<Sort, std::vector<Value>> by_sort;
  Universe(const Signature &sig, Fragment frag, const RuleSchema &rule) {
    std::set<Sort> need;
    for (const auto &m : rule.vars) need.insert(m.sort);
    for (Sort s : need) {
      auto &v = by_sort[s];
      switch (s) {
        case Sort::UnaryAtom:
          for (const auto &p : sig.unaries) v.push_back(lit(p));
          break;
        case Sort::UnaryLiteral:
          for (const auto &l : all_uliterals(sig)) v.push_back(lit(l));
          break;
        case Sort::BinaryAtom:
          for (const auto &r : sig.binaries) v.push_back(blit(r));
          break;
        case Sort::BinaryLiteral:
          for (const auto &r : sig.binaries) {
            v.push_back(blit(r));
            v.push_back(blit(r, false));
          }
          break;
        case Sort::CTerm:
          for (const auto &e : all_cterms(sig)) v.push_back(e);
          break;
        case Sort::PositiveCTerm:
          for (const auto &e : all_positive_cterms(sig)) v.push_back(e);
          break;
        case Sort::Formula:
          for (const auto &f : all_formulas(sig, frag)) v.push_back(f);
          break;
      }
    }
  }
};

bool bind_var(const RuleSchema &rule, Substitution &g, const std::string &var, const Value &val) {
  const MetaVar *m = rule.var(var);
  if (!m || !value_has_sort(val, m->sort)) return false;
  auto [it, fresh] = g.emplace(var, val);
  return fresh || it->second == val;
}

bool match_term(const RuleSchema &rule, const TermPattern &p, const ETerm &e, Substitution &g) {
  if (p.kind == TermPattern::Var) return bind_var(rule, g, p.var, p.flip ? complement(e) : e);
  TermKind k = p.kind == TermPattern::Exists ? TermKind::Exists : TermKind::Forall;
  if (e.kind != k) return false;
  UnaryLiteral s = p.subject_flip ? complement(e.subject) : e.subject;
  BinaryLiteral v = p.verb_flip ? complement(e.verb) : e.verb;
  return bind_var(rule, g, p.subject, lit(s)) && bind_var(rule, g, p.verb, v);
}

// rep is one representative of a fact
bool match_formula(const RuleSchema &rule, const FormulaPattern &p, const Formula &rep, Substitution &g) {
  if (p.kind == FormulaPattern::Var) return bind_var(rule, g, p.var, canonicalize(p.flip ? bar(rep) : rep));
  Quantifier q = p.kind == FormulaPattern::All ? Quantifier::All : Quantifier::Some;
  if (rep.quantifier != q) return false;
  Substitution h = g;
  if (!match_term(rule, p.left, rep.left, h) || !match_term(rule, p.right, rep.right, h)) return false;
  g = std::move(h);
  return true;
}

// the term a pattern position denotes under g, if fully bound
std::optional<ETerm> bound_term(const TermPattern &p, const Substitution &g) {
  if (p.kind == TermPattern::Var) {
    if (!g.count(p.var)) return std::nullopt;
  } else if (!g.count(p.subject) || !g.count(p.verb)) {
    return std::nullopt;
  }
  return build_term(p, g);
}

std::vector<std::string> free_consequent_vars(const RuleSchema &rule, const Substitution &g) {
  std::vector<std::string> out;
  for (const auto &m : rule.vars)
    if (!g.count(m.name)) out.push_back(m.name);
  return out;
}

void enumerate_free(const RuleSchema &rule, const Universe &U, Substitution g, const std::vector<std::string> &vars,
                    size_t i, const std::function<void(const Substitution &)> &emit) {
  if (i == vars.size()) {
    emit(g);
    return;
  }
  const MetaVar *m = rule.var(vars[i]);
  auto it = U.by_sort.find(m->sort);
  if (it == U.by_sort.end()) return;
  for (const auto &v : it->second) {
    g[vars[i]] = v;
    enumerate_free(rule, U, g, vars, i + 1, emit);
  }
}

}  // namespace

std::vector<Match> match_rule(const RuleSchema &rule, const std::vector<Formula> &facts, const Signature &sig,
                              Fragment frag) {
  Universe U(sig, frag, rule);
  std::vector<Formula> reps;
  for (const auto &f : facts)
    for (const auto &r : representatives(canonicalize(f))) reps.push_back(r);
  std::vector<Match> out;
  std::set<std::pair<Formula, std::vector<Formula>>> seen;
  std::vector<Formula> used;
  std::function<void(size_t, Substitution)> go = [&](size_t i, Substitution g) {
    if (i == rule.antecedents.size()) {
      enumerate_free(rule, U, g, free_consequent_vars(rule, g), 0, [&](const Substitution &h) {
        Instance inst = instantiate(rule, h);
        if (seen.insert({inst.consequent, inst.antecedents}).second)
          out.push_back({h, inst.consequent, used});
      });
      return;
    }
    for (const auto &r : reps) {
      Substitution h = g;
      if (!match_formula(rule, rule.antecedents[i], r, h)) continue;
      used.push_back(r);
      go(i + 1, std::move(h));
      used.pop_back();
    }
  };
  go(0, {});
  return out;
}

// ---- derivations

bool Derivation::is_direct() const {
  if (kind == Raa) return false;
  for (const auto &c : children)
    if (!c->is_direct()) return false;
  return true;
}

size_t Derivation::node_count() const {
  size_t n = 1;
  for (const auto &c : children) n += c->node_count();
  return n;
}

DerivationPtr make_premise(const Formula &phi, std::optional<int> label) {
  auto d = std::make_shared<Derivation>();
  d->kind = Derivation::Premise;
  d->conclusion = phi;
  d->label = label;
  return d;
}

DerivationPtr make_rule(const std::string &rule, Substitution g, std::vector<DerivationPtr> children,
                        const Formula &conclusion) {
  auto d = std::make_shared<Derivation>();
  d->kind = Derivation::RuleApp;
  d->rule = rule;
  d->subst = std::move(g);
  d->children = std::move(children);
  d->conclusion = conclusion;
  return d;
}

DerivationPtr make_raa(int label, DerivationPtr body, const Formula &conclusion) {
  auto d = std::make_shared<Derivation>();
  d->kind = Derivation::Raa;
  d->label = label;
  d->children = {std::move(body)};
  d->conclusion = conclusion;
  return d;
}

DerivationPtr apply_rule(const RuleSet &rs, const std::string &rule, Substitution g,
                         std::vector<DerivationPtr> children) {
  const RuleSchema *r = rs.find(rule);
  if (!r) throw std::invalid_argument("no rule " + rule + " in " + ruleset_name(rs.id));
  Instance inst = instantiate(*r, g);
  return make_rule(rule, std::move(g), std::move(children), inst.consequent);
}

CheckError::CheckError(Kind k, const std::string &msg) : std::runtime_error(msg), kind(k) {}

std::string check_error_name(CheckError::Kind k) {
  switch (k) {
    case CheckError::UnknownRule: return "UnknownRule";
    case CheckError::BadInstance: return "BadInstance";
    case CheckError::UndischargedPremise: return "UndischargedPremise";
    case CheckError::BadDischarge: return "BadDischarge";
    case CheckError::NotAbsurdity: return "NotAbsurdity";
  }
  return "?";
}

namespace {

struct Checker {
  const RuleSet &rs;
  std::set<Formula> theta;
  std::map<int, Formula> open;  // label -> discharged formula (canonical)

  [[noreturn]] void fail(CheckError::Kind k, const Derivation &d, const std::string &why) {
    std::string node = d.kind == Derivation::Premise ? "premise" : d.kind == Derivation::Raa ? "raa" : "rule " + d.rule;
    throw CheckError(k, check_error_name(k) + " at " + node + " -> " + print_formula(d.conclusion) + ": " + why);
  }

  Formula check(const Derivation &d) {
    switch (d.kind) {
      case Derivation::Premise: {
        Formula c = canonicalize(d.conclusion);
        if (d.label) {
          auto it = open.find(*d.label);
          if (it == open.end()) fail(CheckError::BadDischarge, d, "label #" + std::to_string(*d.label) + " not open");
          if (it->second != c)
            fail(CheckError::BadDischarge, d,
                 "label #" + std::to_string(*d.label) + " discharges " + print_formula(it->second));
        } else if (!theta.count(c)) {
          fail(CheckError::UndischargedPremise, d, "not among the premises");
        }
        return d.conclusion;
      }
      case Derivation::RuleApp: {
        const RuleSchema *r = rs.find(d.rule);
        if (!r) fail(CheckError::UnknownRule, d, "no rule " + d.rule + " in " + ruleset_name(rs.id));
        Instance inst;
        try {
          inst = instantiate(*r, d.subst);
        } catch (const SortError &e) {
          fail(CheckError::BadInstance, d, e.what());
        }
        if (r->id == "X") {
          for (const char *v : {"psi", "phi"})
            if (!in_fragment(std::get<Formula>(d.subst.at(v)), rs.fragment))
              fail(CheckError::BadInstance, d, std::string(v) + " outside fragment " + fragment_name(rs.fragment));
        }
        std::vector<Formula> got;
        for (const auto &c : d.children) got.push_back(canonicalize(check(*c)));
        std::vector<Formula> want = inst.antecedents;
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        bool ok = got == want;
        if (!ok) {
          // an instance whose antecedents coincide may cite the shared formula once
          std::vector<Formula> wset = want;
          wset.erase(std::unique(wset.begin(), wset.end()), wset.end());
          ok = got == wset;
        }
        if (!ok) fail(CheckError::BadInstance, d, "children do not match the instantiated antecedents");
        if (canonicalize(d.conclusion) != inst.consequent)
          fail(CheckError::BadInstance, d, "instance concludes " + print_formula(inst.consequent));
        return d.conclusion;
      }
      case Derivation::Raa: {
        if (!d.label || d.children.size() != 1) fail(CheckError::BadDischarge, d, "malformed raa node");
        int lab = *d.label;
        auto saved = open.find(lab) == open.end() ? std::nullopt : std::optional<Formula>(open[lab]);
        open[lab] = canonicalize(bar(d.conclusion));
        Formula body = check(*d.children[0]);
        if (saved)
          open[lab] = *saved;
        else
          open.erase(lab);
        if (!is_absurdity(canonicalize(body)) && !is_absurdity(body))
          fail(CheckError::NotAbsurdity, d, print_formula(body) + " is not an absurdity");
        return d.conclusion;
      }
    }
    return d.conclusion;
  }
};

}  // namespace

Formula check_derivation(const Derivation &d, const RuleSet &rs, const std::vector<Formula> &theta) {
  Checker c{rs, {}, {}};
  for (const auto &f : theta) c.theta.insert(canonicalize(f));
  return c.check(d);
}

// ---- derivation files

namespace {

std::string print_subst(const Substitution &g) {
  std::string out = "{";
  bool first = true;
  for (const auto &[k, v] : g) {
    if (!first) out += ", ";
    first = false;
    out += k + "=" + print_value(v);
  }
  return out + "}";
}

void print_node(const Derivation &d, int depth, std::string &out) {
  out += std::string(2 * depth, ' ');
  switch (d.kind) {
    case Derivation::Premise:
      out += "premise " + print_formula(d.conclusion);
      if (d.label) out += " #" + std::to_string(*d.label);
      break;
    case Derivation::RuleApp:
      out += "rule " + d.rule + " " + print_subst(d.subst) + " -> " + print_formula(d.conclusion);
      break;
    case Derivation::Raa:
      out += "raa #" + std::to_string(d.label.value_or(0)) + " -> " + print_formula(d.conclusion);
      break;
  }
  out += "\n";
  for (const auto &c : d.children) print_node(*c, depth + 1, out);
}

std::string canonical_rule_id(const std::string &s) {
  if (s == "∀∀") return "AA";
  if (s == "∃∃") return "EE";
  if (s == "∀∃") return "AE";
  return s;
}

struct PNode {
  Derivation::Kind kind;
  Formula conclusion;
  std::optional<int> label;
  std::string rule;
  Substitution subst;
  std::vector<int> children;
  int line;
};

std::string trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// splits at top-level commas
std::vector<std::pair<std::string, int>> split_top(const std::string &s, int col0) {
  std::vector<std::pair<std::string, int>> out;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (s[i] == ',' && depth == 0)) {
      out.push_back({s.substr(start, i - start), col0 + static_cast<int>(start)});
      start = i + 1;
    } else if (s[i] == '(') {
      ++depth;
    } else if (s[i] == ')') {
      --depth;
    }
  }
  return out;
}

std::optional<int> parse_label(const std::string &s) {
  if (s.size() < 2 || s[0] != '#') return std::nullopt;
  for (size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
  return std::stoi(s.substr(1));
}

}  // namespace

std::string print_derivation(const Derivation &d) {
  std::string out;
  print_node(d, 0, out);
  return out;
}

DerivationPtr parse_derivation(const std::string &text, const RuleSet &rs) {
  AtomTable table;
  std::vector<PNode> nodes;
  std::vector<std::pair<int, int>> stack;  // depth, node
  std::vector<int> roots;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (trim(raw).empty() || trim(raw)[0] == '%') continue;
    size_t ind = raw.find_first_not_of(' ');
    if (ind % 2) throw ParseError(lineno, static_cast<int>(ind) + 1, "indentation by two spaces", "odd indentation");
    int depth = static_cast<int>(ind / 2);
    std::string body = raw.substr(ind);
    const int col0 = static_cast<int>(ind) + 1;
    PNode n{};
    n.line = lineno;
    auto formula_at = [&](const std::string &s, size_t off) {
      return parse_formula(std::string(col0 - 1 + off, ' ') + s, table, lineno);
    };
    if (body.rfind("premise ", 0) == 0) {
      n.kind = Derivation::Premise;
      std::string rest = body.substr(8);
      size_t hash = rest.rfind('#');
      if (hash != std::string::npos) {
        auto lab = parse_label(trim(rest.substr(hash)));
        if (!lab) throw ParseError(lineno, col0 + 8 + static_cast<int>(hash), "label #<n>", "'" + rest.substr(hash) + "'");
        n.label = lab;
        rest = rest.substr(0, hash);
      }
      n.conclusion = formula_at(rest, 8);
    } else if (body.rfind("raa ", 0) == 0) {
      n.kind = Derivation::Raa;
      size_t arrow = body.find("->");
      if (arrow == std::string::npos) throw ParseError(lineno, col0, "\"->\"", "end of line");
      auto lab = parse_label(trim(body.substr(4, arrow - 4)));
      if (!lab) throw ParseError(lineno, col0 + 4, "label #<n>", "'" + trim(body.substr(4, arrow - 4)) + "'");
      n.label = lab;
      n.conclusion = formula_at(body.substr(arrow + 2), arrow + 2);
    } else if (body.rfind("rule ", 0) == 0) {
      n.kind = Derivation::RuleApp;
      size_t open = body.find('{'), close = body.find('}');
      if (open == std::string::npos || close == std::string::npos || close < open)
        throw ParseError(lineno, col0, "\"{...}\" substitution", "'" + body + "'");
      n.rule = canonical_rule_id(trim(body.substr(5, open - 5)));
      const RuleSchema *schema = rs.find(n.rule);
      std::string inner = body.substr(open + 1, close - open - 1);
      if (!trim(inner).empty()) {
        for (const auto &[part, pcol] : split_top(inner, col0 + static_cast<int>(open) + 1)) {
          size_t eq = part.find('=');
          if (eq == std::string::npos) throw ParseError(lineno, pcol, "<var>=<value>", "'" + trim(part) + "'");
          std::string var = trim(part.substr(0, eq)), val = part.substr(eq + 1);
          Sort sort = Sort::UnaryLiteral;
          if (schema) {
            const MetaVar *m = schema->var(var);
            if (!m) throw ParseError(lineno, pcol, "variable of rule " + n.rule, "'" + var + "'");
            sort = m->sort;
          }
          std::string padded = std::string(pcol + eq, ' ') + val;
          Value v;
          if (sort == Sort::Formula)
            v = parse_formula(padded, table, lineno);
          else if (sort == Sort::BinaryLiteral || sort == Sort::BinaryAtom)
            v = parse_binary_literal(padded, table, lineno);
          else
            v = parse_term(padded, table, lineno);
          n.subst[var] = v;
        }
      }
      size_t arrow = body.find("->", close);
      if (arrow == std::string::npos) throw ParseError(lineno, col0 + static_cast<int>(close) + 1, "\"->\"", "end of line");
      n.conclusion = formula_at(body.substr(arrow + 2), arrow + 2);
    } else {
      throw ParseError(lineno, col0, "\"premise\", \"rule\" or \"raa\"", "'" + body.substr(0, body.find(' ')) + "'");
    }
    while (!stack.empty() && stack.back().first >= depth) stack.pop_back();
    int id = static_cast<int>(nodes.size());
    nodes.push_back(std::move(n));
    if (stack.empty()) {
      if (depth != 0) throw ParseError(lineno, 1, "root at indentation 0", "indented root");
      roots.push_back(id);
    } else {
      if (depth != stack.back().first + 1) throw ParseError(lineno, 1, "child one level deeper", "indentation jump");
      nodes[stack.back().second].children.push_back(id);
    }
    stack.push_back({depth, id});
  }
  if (roots.size() != 1)
    throw ParseError(lineno + 1, 1, "exactly one root node", std::to_string(roots.size()) + " roots");
  std::function<DerivationPtr(int)> build = [&](int i) -> DerivationPtr {
    const PNode &p = nodes[i];
    std::vector<DerivationPtr> kids;
    for (int c : p.children) kids.push_back(build(c));
    switch (p.kind) {
      case Derivation::Premise:
        if (!kids.empty()) throw ParseError(p.line, 1, "leaf premise", "children under premise");
        return make_premise(p.conclusion, p.label);
      case Derivation::Raa:
        if (kids.size() != 1) throw ParseError(p.line, 1, "one child under raa", std::to_string(kids.size()));
        return make_raa(*p.label, kids[0], p.conclusion);
      case Derivation::RuleApp: return make_rule(p.rule, p.subst, std::move(kids), p.conclusion);
    }
    return nullptr;
  };
  return build(roots[0]);
}

// ---- saturation

std::string fresh_binary_name(const Signature &sig) {
  std::string name = "_r";
  for (int i = 1; sig.unaries.count(name); ++i) name = "_r" + std::to_string(i);
  return name;
}

bool Saturation::contains(const Formula &phi) const { return facts.count(canonicalize(phi)) > 0; }

std::vector<Formula> Saturation::formulas() const {
  std::vector<Formula> out;
  for (const auto &[f, j] : facts) out.push_back(f);
  return out;
}

namespace {

struct FactIndex {
  struct Rep {
    Formula rep;
    int round;
  };
  std::vector<Rep> reps;
  std::map<std::pair<Quantifier, ETerm>, std::vector<int>> by_left, by_right;
  std::map<Quantifier, std::vector<int>> by_q;

  void add(const Formula &canon, int round) {
    for (const auto &r : representatives(canon)) {
      int id = static_cast<int>(reps.size());
      reps.push_back({r, round});
      by_left[{r.quantifier, r.left}].push_back(id);
      by_right[{r.quantifier, r.right}].push_back(id);
      by_q[r.quantifier].push_back(id);
    }
  }

  const std::vector<int> &candidates(const FormulaPattern &p, const Substitution &g) const {
    static const std::vector<int> none;
    Quantifier q = p.kind == FormulaPattern::All ? Quantifier::All : Quantifier::Some;
    if (auto l = bound_term(p.left, g)) {
      auto it = by_left.find({q, *l});
      return it == by_left.end() ? none : it->second;
    }
    if (auto r = bound_term(p.right, g)) {
      auto it = by_right.find({q, *r});
      return it == by_right.end() ? none : it->second;
    }
    auto it = by_q.find(q);
    return it == by_q.end() ? none : it->second;
  }
};

}  // namespace

Saturation saturate(const std::vector<Formula> &theta, const RuleSet &rs, const Signature &extra) {
  Saturation sat;
  sat.sig = atoms(theta);
  sat.sig.merge(extra);
  sat.fresh_binary = fresh_binary_name(sat.sig);
  sat.sig.binaries.insert(sat.fresh_binary);
  check_namespaces(sat.sig);

  FactIndex idx;
  for (const auto &f : theta) {
    Formula c = canonicalize(f);
    if (sat.facts.emplace(c, Justification{}).second) {
      sat.premise_text.emplace(c, f);
      idx.add(c, 0);
    }
  }

  std::vector<std::pair<const RuleSchema *, Universe>> rules;
  for (const auto &r : rs.rules)
    if (r.id != "X") rules.push_back({&r, Universe(sat.sig, rs.fragment, r)});

  for (int round = 1;; ++round) {
    const int delta = round - 1;
    std::vector<std::pair<Formula, Justification>> fresh;
    std::set<Formula> fresh_set;
    auto emit = [&](const RuleSchema &rule, const Substitution &g, const std::vector<Formula> &used) {
      Instance inst = instantiate(rule, g);
      if (sat.facts.count(inst.consequent) || fresh_set.count(inst.consequent)) return;
      fresh_set.insert(inst.consequent);
      fresh.push_back({inst.consequent, Justification{rule.id, g, used, round}});
    };
    for (auto &[rule, U] : rules) {
      const size_t n = rule->antecedents.size();
      if (n == 0) {
        if (round == 1) enumerate_free(*rule, U, {}, free_consequent_vars(*rule, {}), 0, [&](const Substitution &h) {
            emit(*rule, h, {});
          });
        continue;
      }
      // antecedent k comes from the newest round, earlier positions from older rounds
      for (size_t k = 0; k < n; ++k) {
        std::vector<size_t> order = {k};
        for (size_t j = 0; j < n; ++j)
          if (j != k) order.push_back(j);
        std::vector<Formula> used(n);
        std::function<void(size_t, const Substitution &)> go = [&](size_t i, const Substitution &g) {
          if (i == n) {
            enumerate_free(*rule, U, g, free_consequent_vars(*rule, g), 0,
                           [&](const Substitution &h) { emit(*rule, h, used); });
            return;
          }
          size_t pos = order[i];
          for (int id : idx.candidates(rule->antecedents[pos], g)) {
            const auto &rep = idx.reps[id];
            if (pos == k ? rep.round != delta : (pos < k ? rep.round >= delta : rep.round > delta)) continue;
            Substitution h = g;
            if (!match_formula(*rule, rule->antecedents[pos], rep.rep, h)) continue;
            used[pos] = rep.rep;
            go(i + 1, h);
          }
        };
        go(0, {});
      }
    }
    if (fresh.empty()) {
      sat.rounds = round - 1;
      break;
    }
    std::sort(fresh.begin(), fresh.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    for (auto &[f, j] : fresh) {
      sat.facts.emplace(f, std::move(j));
      idx.add(f, round);
    }
  }

  if (rs.has("X")) {
    for (const auto &[f, j] : sat.facts) {
      if (!in_fragment(f, rs.fragment)) continue;
      Formula b = canonicalize(bar(f));
      if (sat.facts.count(b)) {
        sat.contradiction = std::make_pair(f, b);
        break;
      }
    }
  }
  return sat;
}

std::vector<Formula> saturate_set(const std::vector<Formula> &theta, const RuleSet &rs) {
  Saturation sat = saturate(theta, rs);
  if (sat.contradiction) return all_formulas(sat.sig, rs.fragment);
  return sat.formulas();
}

DerivationPtr extract_derivation(const Saturation &sat, const Formula &phi) {
  std::map<Formula, DerivationPtr> memo;
  std::function<DerivationPtr(const Formula &)> go = [&](const Formula &f) -> DerivationPtr {
    Formula c = canonicalize(f);
    if (auto it = memo.find(c); it != memo.end()) return it->second;
    auto jt = sat.facts.find(c);
    if (jt == sat.facts.end()) return nullptr;
    const Justification &j = jt->second;
    DerivationPtr d;
    if (j.rule.empty()) {
      d = make_premise(sat.premise_text.at(c));
    } else {
      std::vector<DerivationPtr> kids;
      for (const auto &a : j.antecedents) kids.push_back(go(a));
      d = make_rule(j.rule, j.subst, std::move(kids), c);
    }
    memo[c] = d;
    return d;
  };
  return go(phi);
}

DerivationPtr derive(const std::vector<Formula> &theta, const Formula &goal, const RuleSet &rs) {
  Saturation sat = saturate(theta, rs, atoms(goal));
  DerivationPtr d = extract_derivation(sat, goal);
  if (!d && sat.contradiction && rs.has("X") && in_fragment(goal, rs.fragment)) {
    const auto &[psi, npsi] = *sat.contradiction;
    Substitution g{{"psi", psi}, {"phi", canonicalize(goal)}};
    d = make_rule("X", g, {extract_derivation(sat, psi), extract_derivation(sat, npsi)}, canonicalize(goal));
  }
  if (d) check_derivation(*d, rs, theta);
  return d;
}

DerivationPtr refute(const std::vector<Formula> &theta, const RuleSet &rs) {
  Saturation sat = saturate(theta, rs);
  const Formula *best = nullptr;
  int best_round = 0;
  for (const auto &[f, j] : sat.facts) {
    if (!is_absurdity(f)) continue;
    if (!best || j.round < best_round) {
      best = &f;
      best_round = j.round;
    }
  }
  if (best) {
    DerivationPtr d = extract_derivation(sat, *best);
    check_derivation(*d, rs, theta);
    return d;
  }
  if (sat.contradiction && rs.has("X") && !sat.sig.unaries.empty()) {
    const std::string &p = *sat.sig.unaries.begin();
    return derive(theta, Some(lit(p), lit(p, false)), rs);
  }
  return nullptr;
}

DerivationPtr close_by_raa(const DerivationPtr &refutation, const Formula &goal, const std::vector<Formula> &theta,
                           int label) {
  std::set<Formula> th;
  for (const auto &f : theta) th.insert(canonicalize(f));
  const Formula nb = canonicalize(bar(goal));
  const bool in_theta = th.count(nb) > 0;
  std::function<DerivationPtr(const DerivationPtr &)> go = [&](const DerivationPtr &d) -> DerivationPtr {
    if (d->kind == Derivation::Premise) {
      if (!d->label && !in_theta && canonicalize(d->conclusion) == nb) return make_premise(d->conclusion, label);
      return d;
    }
    std::vector<DerivationPtr> kids;
    for (const auto &c : d->children) kids.push_back(go(c));
    if (d->kind == Derivation::Raa) return make_raa(*d->label, kids[0], d->conclusion);
    return make_rule(d->rule, d->subst, std::move(kids), d->conclusion);
  };
  return make_raa(label, go(refutation), goal);
}

}  // namespace syllo
