#include "syllo/syntax.hpp"

#include <algorithm>

namespace syllo {

std::strong_ordering operator<=>(const UnaryLiteral &a, const UnaryLiteral &b) {
  if (auto c = a.atom <=> b.atom; c != 0) return c;
  return (!a.positive) <=> (!b.positive);
}
bool operator==(const UnaryLiteral &a, const UnaryLiteral &b) {
  return a.atom == b.atom && a.positive == b.positive;
}
std::strong_ordering operator<=>(const BinaryLiteral &a, const BinaryLiteral &b) {
  if (auto c = a.atom <=> b.atom; c != 0) return c;
  return (!a.positive) <=> (!b.positive);
}
bool operator==(const BinaryLiteral &a, const BinaryLiteral &b) {
  return a.atom == b.atom && a.positive == b.positive;
}

std::strong_ordering operator<=>(const ETerm &a, const ETerm &b) {
  if (auto c = static_cast<int>(a.kind) <=> static_cast<int>(b.kind); c != 0) return c;
  if (auto c = a.subject <=> b.subject; c != 0) return c;
  if (a.kind == TermKind::Literal) return std::strong_ordering::equal;
  return a.verb <=> b.verb;
}
bool operator==(const ETerm &a, const ETerm &b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const Formula &a, const Formula &b) {
  if (auto c = static_cast<int>(a.quantifier) <=> static_cast<int>(b.quantifier); c != 0) return c;
  if (auto c = a.left <=> b.left; c != 0) return c;
  return a.right <=> b.right;
}
bool operator==(const Formula &a, const Formula &b) { return (a <=> b) == 0; }

namespace {
const char *kFragNames[kFragmentCount] = {"S", "Sd", "R", "Rd", "Rs", "Rsd"};
}

std::string fragment_name(Fragment f) { return kFragNames[static_cast<int>(f)]; }

std::optional<Fragment> parse_fragment(const std::string &s) {
  for (int i = 0; i < kFragmentCount; ++i)
    if (s == kFragNames[i]) return static_cast<Fragment>(i);
  // a few long-hand spellings
  if (s == "S+" || s == "Sdagger") return Fragment::Sd;
  if (s == "R+" || s == "Rdagger") return Fragment::Rd;
  if (s == "R*") return Fragment::Rs;
  if (s == "R*+" || s == "Rsdagger") return Fragment::Rsd;
  return std::nullopt;
}

std::string to_string(FragmentSet fs) {
  std::string out;
  for (int i = 0; i < kFragmentCount; ++i) {
    if (!fs.has(static_cast<Fragment>(i))) continue;
    if (!out.empty()) out += ' ';
    out += kFragNames[i];
  }
  return out;
}

void Signature::merge(const Signature &o) {
  unaries.insert(o.unaries.begin(), o.unaries.end());
  binaries.insert(o.binaries.begin(), o.binaries.end());
}

UnaryLiteral ulit(const std::string &atom, bool positive) { return {atom, positive}; }
BinaryLiteral blit(const std::string &atom, bool positive) { return {atom, positive}; }

ETerm lit(const std::string &atom, bool positive) { return ETerm{TermKind::Literal, {atom, positive}, {}}; }
ETerm lit(const UnaryLiteral &l) { return ETerm{TermKind::Literal, l, {}}; }
ETerm ex(const UnaryLiteral &l, const BinaryLiteral &t) { return ETerm{TermKind::Exists, l, t}; }
ETerm all(const UnaryLiteral &l, const BinaryLiteral &t) { return ETerm{TermKind::Forall, l, t}; }
Formula Some(const ETerm &e, const ETerm &f) { return Formula{Quantifier::Some, e, f}; }
Formula All(const ETerm &e, const ETerm &f) { return Formula{Quantifier::All, e, f}; }

ETerm complement(const ETerm &e) {
  switch (e.kind) {
    case TermKind::Literal: return lit(complement(e.subject));
    case TermKind::Exists: return all(e.subject, complement(e.verb));
    case TermKind::Forall: return ex(e.subject, complement(e.verb));
  }
  return e;
}

Formula bar(const Formula &phi) {
  if (phi.quantifier == Quantifier::All) return Some(phi.left, complement(phi.right));
  return All(phi.left, complement(phi.right));
}

std::vector<Formula> representatives(const Formula &phi) {
  std::vector<Formula> out{phi};
  Formula alt = phi.quantifier == Quantifier::Some
                    ? Some(phi.right, phi.left)
                    : All(complement(phi.right), complement(phi.left));
  if (!(alt == phi)) out.push_back(alt);
  return out;
}

Formula canonicalize(const Formula &phi) {
  auto reps = representatives(phi);
  return *std::min_element(reps.begin(), reps.end());
}

bool is_canonical(const Formula &phi) { return canonicalize(phi) == phi; }

bool is_cterm(const ETerm &e) { return e.is_literal() || e.subject.positive; }

bool is_positive_cterm(const ETerm &e) {
  if (e.is_literal()) return e.subject.positive;
  return e.subject.positive && e.verb.positive;
}

namespace {

bool pos_atom(const ETerm &e) { return e.is_literal() && e.subject.positive; }

FragmentSet classify_rep(const Formula &f) {
  FragmentSet fs;
  fs.add(Fragment::Rsd);
  const ETerm &l = f.left, &r = f.right;
  if (l.is_literal() && r.is_literal()) {
    fs.add(Fragment::Sd);
    if (l.subject.positive) fs.add(Fragment::S);
  }
  if (pos_atom(l) && is_cterm(r)) fs.add(Fragment::R);
  if (l.is_literal()) fs.add(Fragment::Rd);
  if (is_positive_cterm(l) && is_cterm(r)) fs.add(Fragment::Rs);
  return fs;
}

}  // namespace

FragmentSet classify(const Formula &phi) {
  FragmentSet fs;
  for (const auto &rep : representatives(phi)) fs.bits |= classify_rep(rep).bits;
  return fs;
}

bool in_fragment(const Formula &phi, Fragment f) { return classify(phi).has(f); }

bool is_absurdity(const Formula &phi) {
  return phi.quantifier == Quantifier::Some && phi.right == complement(phi.left);
}

bool is_universal(const Formula &phi) { return phi.quantifier == Quantifier::All; }

Signature atoms(const ETerm &e) {
  Signature s;
  s.unaries.insert(e.subject.atom);
  if (!e.is_literal()) s.binaries.insert(e.verb.atom);
  return s;
}

Signature atoms(const Formula &phi) {
  Signature s = atoms(phi.left);
  s.merge(atoms(phi.right));
  return s;
}

Signature atoms(const std::vector<Formula> &phis) {
  Signature s;
  for (const auto &f : phis) s.merge(atoms(f));
  return s;
}

void check_namespaces(const Signature &sig) {
  for (const auto &u : sig.unaries)
    if (sig.binaries.count(u)) throw NamespaceError("atom '" + u + "' used as both unary and binary");
}

std::vector<UnaryLiteral> all_uliterals(const Signature &sig) {
  std::vector<UnaryLiteral> out;
  for (const auto &p : sig.unaries) {
    out.push_back({p, true});
    out.push_back({p, false});
  }
  return out;
}

std::vector<ETerm> all_eterms(const Signature &sig) {
  std::vector<ETerm> out;
  auto lits = all_uliterals(sig);
  for (const auto &l : lits) out.push_back(lit(l));
  for (TermKind k : {TermKind::Exists, TermKind::Forall})
    for (const auto &l : lits)
      for (const auto &r : sig.binaries)
        for (bool pos : {true, false}) out.push_back(ETerm{k, l, {r, pos}});
  return out;
}

std::vector<ETerm> all_cterms(const Signature &sig) {
  std::vector<ETerm> out;
  for (const auto &e : all_eterms(sig))
    if (is_cterm(e)) out.push_back(e);
  return out;
}

std::vector<ETerm> all_positive_cterms(const Signature &sig) {
  std::vector<ETerm> out;
  for (const auto &e : all_eterms(sig))
    if (is_positive_cterm(e)) out.push_back(e);
  return out;
}

std::vector<Formula> all_formulas(const Signature &sig, Fragment f) {
  std::vector<ETerm> lefts, rights;
  auto every = all_eterms(sig);
  switch (f) {
    case Fragment::S:
    case Fragment::Sd:
      for (const auto &l : all_uliterals(sig)) lefts.push_back(lit(l));
      rights = lefts;
      break;
    case Fragment::R:
    case Fragment::Rd:
      for (const auto &l : all_uliterals(sig)) lefts.push_back(lit(l));
      rights = every;
      break;
    case Fragment::Rs:
      lefts = all_positive_cterms(sig);
      rights = all_cterms(sig);
      break;
    case Fragment::Rsd:
      lefts = every;
      rights = every;
      break;
  }
  std::set<Formula> seen;
  for (const auto &a : lefts)
    for (const auto &b : rights)
      for (auto q : {Quantifier::Some, Quantifier::All}) {
        Formula phi = canonicalize(Formula{q, a, b});
        if (in_fragment(phi, f)) seen.insert(phi);
      }
  return {seen.begin(), seen.end()};
}

}  // namespace syllo
