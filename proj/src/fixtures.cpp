#include "syllo/fixtures.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "syllo/surface.hpp"

namespace syllo {

const Structure &FixtureBundle::structure(const std::string &s) const {
  auto it = structures.find(s);
  if (it == structures.end()) throw FixtureError(name + ": no structure " + s);
  return it->second;
}

const std::vector<Formula> &FixtureBundle::formulas(const std::string &s) const {
  auto it = formula_sets.find(s);
  if (it == formula_sets.end()) throw FixtureError(name + ": no formula set " + s);
  return it->second;
}

void FixtureBundle::verify() const {
  for (const auto &f : expected_facts) {
    bool got = satisfies(structure(f.structure), f.formula).holds;
    if (got != f.truth)
      throw FixtureError(name + ": expected " + f.structure + (f.truth ? " |= " : " |/= ") +
                         print_formula(f.formula));
  }
}

namespace {

void expect(FixtureBundle &b, const std::string &s, const Formula &phi, bool truth) {
  b.expected_facts.push_back({s, phi, truth});
}

void expect_all(FixtureBundle &b, const std::string &s, const std::vector<Formula> &phis) {
  for (const auto &phi : phis) expect(b, s, phi, true);
}

std::string num(int k) { return std::to_string(k); }

}  // namespace

// ---- chain family

std::string chain_atom(int k) { return "p" + num(k); }

namespace {

const std::string kR = "r";

Formula succ_formula(int i) { return All(lit(chain_atom(i)), ex(ulit(chain_atom(i + 1)), blit(kR))); }

Formula chain_goal(int n) { return All(lit(chain_atom(1)), ex(ulit(chain_atom(n)), blit(kR))); }

Formula chain_closing(int n) { return All(lit(chain_atom(1)), all(ulit(chain_atom(n)), blit(kR))); }

std::vector<Formula> gap_gamma(int n) {
  std::vector<Formula> g;
  for (int i = 1; i < n; ++i) g.push_back(succ_formula(i));
  g.push_back(chain_closing(n));
  for (int j = 1; j <= n; ++j) g.push_back(All(lit(chain_atom(j)), lit(chain_atom(j))));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) g.push_back(All(lit(chain_atom(i)), lit(chain_atom(j), false)));
  return g;
}

std::vector<Formula> gap_delta(int n, int i) {
  std::vector<Formula> d;
  Formula drop = canonicalize(succ_formula(i));
  for (const auto &phi : gap_gamma(n))
    if (canonicalize(phi) != drop) d.push_back(phi);
  return d;
}

Structure chain_structure(int n, int len) {
  std::vector<std::string> dom;
  for (int j = 1; j <= len; ++j) dom.push_back(chain_atom(j));
  if (dom.empty()) dom.push_back("x");
  Structure A(dom);
  for (int j = 1; j <= n; ++j) A.declare_unary(chain_atom(j));
  A.declare_binary(kR);
  for (int j = 1; j <= len; ++j) A.add_unary(chain_atom(j), chain_atom(j));
  return A;
}

void require_n(int n) {
  if (n < 2) throw std::invalid_argument("fixture needs n >= 2");
}

void require_i(int n, int i) {
  require_n(n);
  if (i < 1 || i >= n) throw std::invalid_argument("fixture needs 1 <= i < n");
}

}  // namespace

GammaStar gamma_star_fixture(int n) {
  require_n(n);
  GammaStar g{{}, chain_goal(n)};
  for (int i = 1; i < n; ++i) g.gamma.push_back(succ_formula(i));
  g.gamma.push_back(chain_closing(n));
  return g;
}

Structure gap_A(int n, int i) {
  require_i(n, i);
  Structure A = chain_structure(n, n);
  for (int j = 1; j < n; ++j)
    if (j != i) A.add_binary(kR, chain_atom(j), chain_atom(j + 1));
  A.add_binary(kR, chain_atom(1), chain_atom(n));
  return A;
}

Structure gap_B(int n, int i, int j) {
  require_i(n, i);
  if (j < 1 || j >= n) throw std::invalid_argument("gap_B needs 1 <= j < n");
  Structure A0 = gap_A(n, i);
  std::vector<std::string> dom = A0.domain();
  dom.push_back("b");
  Structure B(dom);
  for (const auto &[p, ext] : A0.unary_map()) {
    B.declare_unary(p);
    for (size_t x = 0; x < ext.size(); ++x)
      if (ext[x]) B.add_unary(p, static_cast<int>(x));
  }
  B.declare_binary(kR);
  for (size_t x = 0; x < A0.size(); ++x)
    for (size_t y = 0; y < A0.size(); ++y)
      if (A0.related(kR, static_cast<int>(x), static_cast<int>(y)))
        B.add_binary(kR, static_cast<int>(x), static_cast<int>(y));
  B.add_unary(chain_atom(j + 1), "b");
  if (j + 1 < n && j + 1 != i) B.add_binary(kR, "b", chain_atom(j + 2));
  if (j + 1 == n) B.add_binary(kR, chain_atom(1), "b");
  return B;
}

Structure gap_C(int n, int i) {
  require_i(n, i);
  Structure C = chain_structure(n, i);
  for (int j = 1; j < i; ++j) C.add_binary(kR, chain_atom(j), chain_atom(j + 1));
  return C;
}

Structure gap_A2(int n, int i, int j, int k) {
  Structure A = gap_A(n, i);
  A.add_binary(kR, chain_atom(j), chain_atom(k));
  return A;
}

Structure gap_A0(int n) {
  require_n(n);
  return chain_structure(n, 0);
}

namespace {

int chain_index(const std::string &atom) {
  if (atom.size() < 2 || atom[0] != 'p') return -1;
  for (size_t c = 1; c < atom.size(); ++c)
    if (!std::isdigit(static_cast<unsigned char>(atom[c]))) return -1;
  return std::stoi(atom.substr(1));
}

}  // namespace

std::optional<CaseModel> gap_countermodel(int n, int i, const Formula &phi) {
  require_i(n, i);
  Formula c = canonicalize(phi);
  for (const auto &g : gap_gamma(n))
    if (canonicalize(g) == c) return std::nullopt;
  if (c.quantifier == Quantifier::Some) return CaseModel{8, gap_A0(n)};
  // an R-shaped representative: positive atom left, c-term right
  std::optional<Formula> shape;
  for (const auto &rep : representatives(c))
    if (rep.left.is_literal() && rep.left.subject.positive && is_cterm(rep.right)) {
      shape = rep;
      break;
    }
  if (!shape) throw std::invalid_argument("not an R formula: " + print_formula(phi));
  int j = chain_index(shape->left.subject.atom);
  const ETerm &t = shape->right;
  int k = chain_index(t.subject.atom);
  if (j < 1 || j > n || k < 1 || k > n || (!t.is_literal() && t.verb.atom != kR))
    throw std::invalid_argument("formula outside p1..pn, r: " + print_formula(phi));
  if (t.is_literal()) return CaseModel{t.subject.positive ? 3 : 4, gap_A(n, i)};
  if (!t.verb.positive) return CaseModel{7, gap_A2(n, i, j, k)};
  if (t.kind == TermKind::Forall) {
    if (k == j + 1) return CaseModel{5, gap_B(n, i, j)};
    return CaseModel{5, gap_A(n, i)};
  }
  if (j == 1 && k == n) return CaseModel{6, gap_C(n, i)};
  return CaseModel{6, gap_A(n, i)};
}

FixtureBundle gamma_fixture(int n) {
  require_n(n);
  FixtureBundle b;
  b.name = "gamma-" + num(n);
  auto gamma = gap_gamma(n);
  Formula goal = chain_goal(n);
  b.formula_sets["Gamma"] = gamma;
  b.formula_sets["gamma"] = {goal};
  b.structures.emplace("A0", gap_A0(n));
  for (int i = 1; i < n; ++i) {
    std::string si = num(i);
    auto delta = gap_delta(n, i);
    b.formula_sets["Delta" + si] = delta;
    std::string a = "A" + si, c = "C" + si;
    b.structures.emplace(a, gap_A(n, i));
    b.structures.emplace(c, gap_C(n, i));
    expect_all(b, a, delta);
    // with n = 2 the closing edge p1 -> p2 doubles as the successor edge
    if (n > 2 || i > 1) expect(b, a, succ_formula(i), false);
    expect_all(b, c, delta);
    expect(b, c, goal, false);
    for (int j = 1; j < n; ++j) {
      if (j == 1 && j + 1 == n) continue;
      std::string bij = "B" + si + "_" + num(j);
      b.structures.emplace(bij, gap_B(n, i, j));
      expect_all(b, bij, delta);
      expect(b, bij, All(lit(chain_atom(j)), all(ulit(chain_atom(j + 1)), blit(kR))), false);
    }
  }
  expect_all(b, "A0", gap_delta(n, 1));
  b.verify();
  return b;
}

// ---- A(n), B_i(n)

namespace {

const std::string kS = "s";

std::string a_elem(int k) { return "a" + num(k); }
std::string ap_elem(int k) { return "a'" + num(k); }
std::string b_elem(int k) { return "b" + num(k); }

}  // namespace

Signature twin_signature(int n) {
  require_n(n);
  Signature sig;
  for (const char *o : {"o1", "o2", "o3", "q1", "q2"}) sig.unaries.insert(o);
  for (int k = 1; k <= n; ++k) sig.unaries.insert(chain_atom(k));
  sig.binaries = {kR, kS};
  return sig;
}

namespace {

Structure twin_build(int n, int i) {
  Signature sig = twin_signature(n);
  std::vector<std::string> dom;
  for (int k = 1; k <= n; ++k) dom.push_back(a_elem(k));
  for (int k = 1; k <= n; ++k) dom.push_back(ap_elem(k));
  for (const char *u : {"u0", "u1", "u2", "u3", "u4", "v1", "v2"}) dom.push_back(u);
  for (int k = 1; k <= i; ++k) dom.push_back(b_elem(k));
  if (i > 0) dom.push_back("u5");
  Structure A(dom);
  for (const auto &p : sig.unaries) A.declare_unary(p);
  for (const auto &r : sig.binaries) A.declare_binary(r);

  for (int k = 1; k <= n; ++k) {
    A.add_unary(chain_atom(k), a_elem(k));
    A.add_unary(chain_atom(k), ap_elem(k));
    A.add_unary("q1", a_elem(k));
    A.add_unary("q2", ap_elem(k));
    A.add_binary(kR, a_elem(k), "u2");
    A.add_binary(kR, ap_elem(k), "u2");
    if (k < n) {
      A.add_binary(kR, a_elem(k), a_elem(k + 1));
      A.add_binary(kR, ap_elem(k), ap_elem(k + 1));
    }
  }
  A.add_unary("q1", "u2");
  A.add_unary("q2", "u2");
  A.add_binary(kR, "u2", "u2");
  A.add_unary("p1", "u1");
  A.add_binary(kR, "u1", a_elem(2));
  A.add_unary("o1", "u0");
  A.add_binary(kR, "u0", a_elem(1));
  A.add_binary(kR, "u0", ap_elem(1));
  A.add_binary(kR, "u3", ap_elem(1));
  A.add_unary("o2", "v1");
  A.add_unary("o2", "v2");
  A.add_unary("o3", "v2");
  A.add_unary("o3", "u4");
  A.add_binary(kS, a_elem(n), "v1");
  A.add_binary(kS, ap_elem(n), "v2");

  for (int k = 1; k <= i; ++k) {
    A.add_unary(chain_atom(k), b_elem(k));
    A.add_unary("q1", b_elem(k));
    A.add_unary("q2", b_elem(k));
    A.add_binary(kR, b_elem(k), "u2");
    if (k < i) A.add_binary(kR, b_elem(k), b_elem(k + 1));
  }
  if (i > 0) {
    A.add_unary("o1", "u5");
    A.add_binary(kR, "u5", b_elem(1));
    A.add_binary(kR, "u5", ap_elem(1));
  }
  return A;
}

}  // namespace

Structure twin_A(int n) { return twin_build(n, 0); }

Structure twin_B(int n, int i) {
  require_i(n, i);
  return twin_build(n, i);
}

Formula twin_gamma() { return All(lit("o1"), ex(ulit("q2", false), blit(kR))); }

Formula twin_delta(int i) { return succ_formula(i); }

std::vector<Formula> twin_axioms(int n) {
  require_n(n);
  std::vector<Formula> ax;
  ax.push_back(All(lit("o1"), ex(ulit("q1"), blit(kR))));
  ax.push_back(All(lit("o1"), all(ulit("p1", false), blit(kR, false))));
  ax.push_back(All(lit("q1"), all(ulit("q1", false), blit(kR, false))));
  ax.push_back(All(lit("q2"), all(ulit("q2", false), blit(kR, false))));
  for (int i = 1; i < n; ++i) ax.push_back(succ_formula(i));
  ax.push_back(All(lit("q1"), all(ulit("o3"), blit(kS, false))));
  ax.push_back(All(lit("q2"), all(ulit("o3", false), blit(kS, false))));
  ax.push_back(All(lit(chain_atom(n)), ex(ulit("o2"), blit(kS))));
  return ax;
}

FixtureBundle twin_fixture(int n, std::optional<int> i) {
  require_n(n);
  int bi = i.value_or(1);
  require_i(n, bi);
  FixtureBundle b;
  b.name = "twin-" + num(n) + "-" + num(bi);
  b.structures.emplace("A", twin_A(n));
  b.structures.emplace("B" + num(bi), twin_B(n, bi));
  Formula gamma = twin_gamma(), delta = twin_delta(bi);
  auto axioms = twin_axioms(n);
  b.formula_sets["axioms"] = axioms;
  b.formula_sets["gamma"] = {gamma};
  b.formula_sets["delta" + num(bi)] = {delta};

  Formula gc = canonicalize(gamma);
  std::vector<Formula> G;
  for (const auto &phi : theory(b.structure("A"), Fragment::Rd, twin_signature(n)))
    if (phi != gc) G.push_back(phi);
  G.push_back(canonicalize(bar(gamma)));
  std::sort(G.begin(), G.end());
  b.formula_sets["Gamma"] = G;

  expect_all(b, "A", axioms);
  expect(b, "A", gamma, true);
  expect(b, "A", delta, true);
  std::string B = "B" + num(bi);
  expect(b, B, bar(gamma), true);
  expect(b, B, bar(delta), true);
  b.verify();
  return b;
}

// ---- K^U

KuPtr KuFormula::prop(const std::string &p) {
  auto f = std::make_shared<KuFormula>();
  f->kind = Prop;
  f->name = p;
  return f;
}

namespace {

KuPtr make_ku(KuFormula::Kind k, KuPtr x, KuPtr y = nullptr) {
  auto f = std::make_shared<KuFormula>();
  f->kind = k;
  f->a = std::move(x);
  f->b = std::move(y);
  return f;
}

const char *ku_op(KuFormula::Kind k) {
  switch (k) {
    case KuFormula::And: return "and";
    case KuFormula::Not: return "not";
    case KuFormula::Box: return "box";
    case KuFormula::Univ: return "univ";
    default: return "";
  }
}

}  // namespace

KuPtr KuFormula::conj(KuPtr x, KuPtr y) { return make_ku(And, std::move(x), std::move(y)); }
KuPtr KuFormula::neg(KuPtr x) { return make_ku(Not, std::move(x)); }
KuPtr KuFormula::box(KuPtr x) { return make_ku(Box, std::move(x)); }
KuPtr KuFormula::univ(KuPtr x) { return make_ku(Univ, std::move(x)); }

std::string print_ku(const KuFormula &phi) {
  if (phi.kind == KuFormula::Prop) return phi.name;
  std::string out = std::string(ku_op(phi.kind)) + "(" + print_ku(*phi.a);
  if (phi.kind == KuFormula::And) out += "," + print_ku(*phi.b);
  return out + ")";
}

namespace {

struct KuParser {
  const std::string &s;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string &what) {
    std::string found = pos < s.size() ? "'" + std::string(1, s[pos]) + "'" : "end of input";
    throw ParseError(1, static_cast<int>(pos) + 1, what, found);
  }
  void eat(char c) {
    skip();
    if (pos >= s.size() || s[pos] != c) fail(std::string("'") + c + "'");
    ++pos;
  }
  KuPtr formula() {
    skip();
    size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    if (start == pos) fail("formula");
    std::string w = s.substr(start, pos - start);
    if (!std::isalpha(static_cast<unsigned char>(w[0]))) {
      pos = start;
      fail("letter");
    }
    KuFormula::Kind k;
    if (w == "and") k = KuFormula::And;
    else if (w == "not") k = KuFormula::Not;
    else if (w == "box") k = KuFormula::Box;
    else if (w == "univ") k = KuFormula::Univ;
    else return KuFormula::prop(w);
    eat('(');
    KuPtr x = formula(), y;
    if (k == KuFormula::And) {
      eat(',');
      y = formula();
    }
    eat(')');
    return make_ku(k, x, y);
  }
};

}  // namespace

KuPtr parse_ku(const std::string &text) {
  KuParser p{text};
  KuPtr f = p.formula();
  p.skip();
  if (p.pos != text.size()) p.fail("end of input");
  return f;
}

int ku_depth(const KuFormula &phi) {
  switch (phi.kind) {
    case KuFormula::Prop: return 0;
    case KuFormula::And: return 1 + std::max(ku_depth(*phi.a), ku_depth(*phi.b));
    default: return 1 + ku_depth(*phi.a);
  }
}

namespace {

std::string ku_atom_name(const KuFormula &phi) {
  if (phi.kind == KuFormula::Prop) return phi.name;
  std::string out = ku_op(phi.kind);
  out += "_" + ku_atom_name(*phi.a);
  if (phi.kind == KuFormula::And) out += "_" + ku_atom_name(*phi.b);
  return out;
}

struct KuTranslator {
  KuTranslation t;
  std::set<Formula> seen;
  std::set<std::string> done;

  void add(const Formula &phi) {
    if (seen.insert(canonicalize(phi)).second) t.formulas.push_back(phi);
  }

  std::string atom(const KuFormula &phi) {
    std::string key = print_ku(phi);
    auto it = t.atom_of.find(key);
    if (it != t.atom_of.end()) return it->second;
    std::string a = "p_" + ku_atom_name(phi);
    t.atom_of[key] = a;
    return a;
  }

  // T_psi, children first
  void walk(const KuFormula &phi) {
    std::string key = print_ku(phi);
    if (done.count(key)) return;
    done.insert(key);
    std::string o = atom(phi);
    switch (phi.kind) {
      case KuFormula::Prop: break;
      case KuFormula::And: {
        walk(*phi.a);
        walk(*phi.b);
        std::string p = atom(*phi.a), q = atom(*phi.b);
        std::string rt = "rt" + num(static_cast<int>(t.fresh_binaries.size()) + 1);
        t.fresh_binaries.push_back(rt);
        add(All(lit(o, false), ex(ulit(kKuStar), blit(rt))));
        add(All(lit(p), all(ulit(p, false), blit(rt, false))));
        add(All(lit(q), all(ulit(p), blit(rt, false))));
        add(All(lit(o), lit(p)));
        add(All(lit(o), lit(q)));
        break;
      }
      case KuFormula::Not: {
        walk(*phi.a);
        std::string p = atom(*phi.a);
        add(All(lit(o), lit(p, false)));
        add(All(lit(o, false), lit(p)));
        break;
      }
      case KuFormula::Box:
      case KuFormula::Univ: {
        walk(*phi.a);
        std::string p = atom(*phi.a);
        const std::string &r = phi.kind == KuFormula::Box ? kKuAccess : kKuUniversal;
        add(All(lit(o), all(ulit(p, false), blit(r, false))));
        add(All(lit(o, false), ex(ulit(p, false), blit(r))));
        break;
      }
    }
  }
};

}  // namespace

KuTranslation ku_translate_full(const KuFormula &phi) {
  KuTranslator tr;
  tr.walk(phi);
  std::string top = tr.atom(phi);
  tr.t.top = top;
  tr.add(Some(lit(top), lit(top)));
  for (bool x : {true, false})
    for (bool y : {true, false}) tr.add(All(lit(top, x), all(ulit(top, y), blit(kKuUniversal))));
  return tr.t;
}

std::vector<Formula> ku_translate(const KuFormula &phi) { return ku_translate_full(phi).formulas; }

bool kripke_holds(const KripkeModel &M, const KuFormula &phi, int w) {
  switch (phi.kind) {
    case KuFormula::Prop: {
      auto it = M.val.find(phi.name);
      return it != M.val.end() && it->second[w];
    }
    case KuFormula::And: return kripke_holds(M, *phi.a, w) && kripke_holds(M, *phi.b, w);
    case KuFormula::Not: return !kripke_holds(M, *phi.a, w);
    case KuFormula::Box:
      for (int v = 0; v < M.worlds; ++v)
        if (M.access[w][v] && !kripke_holds(M, *phi.a, v)) return false;
      return true;
    case KuFormula::Univ:
      for (int v = 0; v < M.worlds; ++v)
        if (!kripke_holds(M, *phi.a, v)) return false;
      return true;
  }
  return false;
}

namespace {

void ku_letters(const KuFormula &phi, std::set<std::string> &out) {
  if (phi.kind == KuFormula::Prop) out.insert(phi.name);
  if (phi.a) ku_letters(*phi.a, out);
  if (phi.b) ku_letters(*phi.b, out);
}

}  // namespace

std::optional<KripkeModel> kripke_model(const KuFormula &phi, int max_worlds) {
  std::set<std::string> ls;
  ku_letters(phi, ls);
  std::vector<std::string> letters(ls.begin(), ls.end());
  for (int n = 1; n <= max_worlds; ++n) {
    const int edges = n * n, vbits = n * static_cast<int>(letters.size());
    if (edges + vbits > 30) throw std::invalid_argument("kripke_model: search space too large");
    for (unsigned long acc = 0; acc < (1ul << edges); ++acc)
      for (unsigned long val = 0; val < (1ul << vbits); ++val) {
        KripkeModel M;
        M.worlds = n;
        M.access.assign(n, std::vector<bool>(n));
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y) M.access[x][y] = (acc >> (x * n + y)) & 1;
        for (size_t l = 0; l < letters.size(); ++l) {
          auto &v = M.val[letters[l]];
          v.assign(n, false);
          for (int x = 0; x < n; ++x) v[x] = (val >> (l * n + x)) & 1;
        }
        for (int w = 0; w < n; ++w)
          if (kripke_holds(M, phi, w)) return M;
      }
  }
  return std::nullopt;
}

KripkeModel kripke_from_structure(const Structure &A, const KuTranslation &t, const KuFormula &phi) {
  KripkeModel M;
  M.worlds = static_cast<int>(A.size());
  M.access.assign(A.size(), std::vector<bool>(A.size()));
  const auto &bins = A.binary_map();
  if (bins.count(kKuAccess))
    for (int x = 0; x < M.worlds; ++x)
      for (int y = 0; y < M.worlds; ++y) M.access[x][y] = A.related(kKuAccess, x, y);
  std::set<std::string> ls;
  ku_letters(phi, ls);
  for (const auto &l : ls) {
    auto &v = M.val[l];
    v.assign(A.size(), false);
    auto it = t.atom_of.find(l);
    if (it == t.atom_of.end() || !A.unary_map().count(it->second)) continue;
    for (int x = 0; x < M.worlds; ++x) v[x] = A.in_unary(it->second, x);
  }
  return M;
}

std::vector<KuPtr> ku_enumerate(const std::string &p, int d) {
  std::vector<KuPtr> level = {KuFormula::prop(p)};
  for (int k = 1; k <= d; ++k) {
    std::vector<KuPtr> next = {KuFormula::prop(p)};
    for (const auto &x : level) {
      next.push_back(KuFormula::neg(x));
      next.push_back(KuFormula::box(x));
      next.push_back(KuFormula::univ(x));
    }
    for (const auto &x : level)
      for (const auto &y : level) next.push_back(KuFormula::conj(x, y));
    level = std::move(next);
  }
  return level;
}

}  // namespace syllo
