#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "syllo/calculus.hpp"
#include "syllo/semantics.hpp"
#include "syllo/surface.hpp"
#include "syllo/syntax.hpp"

namespace syllo::testing {

using Rng = std::mt19937_64;

inline Formula F(const std::string &s) { return parse_formula(s); }

inline std::vector<Formula> Fs(std::initializer_list<const char *> xs) {
  std::vector<Formula> out;
  for (const char *x : xs) out.push_back(parse_formula(x));
  return out;
}

inline int pick(Rng &rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
inline bool coin(Rng &rng) { return pick(rng, 2) == 1; }

inline Signature make_sig(std::vector<std::string> un, std::vector<std::string> bi = {}) {
  Signature s;
  s.unaries.insert(un.begin(), un.end());
  s.binaries.insert(bi.begin(), bi.end());
  return s;
}

inline UnaryLiteral random_ulit(Rng &rng, const std::vector<std::string> &un) {
  return ulit(un[pick(rng, static_cast<int>(un.size()))], coin(rng));
}

inline ETerm random_eterm(Rng &rng, const std::vector<std::string> &un, const std::vector<std::string> &bi) {
  int k = bi.empty() ? 0 : pick(rng, 3);
  UnaryLiteral l = random_ulit(rng, un);
  if (k == 0) return lit(l);
  BinaryLiteral t = blit(bi[pick(rng, static_cast<int>(bi.size()))], coin(rng));
  return k == 1 ? ex(l, t) : all(l, t);
}

inline Formula random_formula(Rng &rng, const std::vector<std::string> &un, const std::vector<std::string> &bi) {
  ETerm a = random_eterm(rng, un, bi), b = random_eterm(rng, un, bi);
  return coin(rng) ? Some(a, b) : All(a, b);
}

inline std::vector<Formula> random_subset(Rng &rng, const std::vector<Formula> &pool, int lo, int hi) {
  int n = lo + pick(rng, hi - lo + 1);
  std::vector<Formula> out;
  for (int i = 0; i < n; ++i) out.push_back(pool[pick(rng, static_cast<int>(pool.size()))]);
  return out;
}

inline Structure random_structure(Rng &rng, int size, const Signature &sig) {
  std::vector<std::string> dom;
  for (int i = 0; i < size; ++i) dom.push_back("e" + std::to_string(i));
  Structure A(dom);
  for (const auto &p : sig.unaries) {
    A.declare_unary(p);
    for (int i = 0; i < size; ++i)
      if (coin(rng)) A.add_unary(p, i);
  }
  for (const auto &r : sig.binaries) {
    A.declare_binary(r);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        if (coin(rng)) A.add_binary(r, i, j);
  }
  return A;
}

inline int count_rule(const Derivation &d, const std::string &id) {
  int n = d.kind == Derivation::RuleApp && d.rule == id;
  for (const auto &c : d.children) n += count_rule(*c, id);
  return n;
}

inline int count_existentials(const std::vector<Formula> &phis) {
  int n = 0;
  for (const auto &f : phis) n += f.quantifier == Quantifier::Some;
  return n;
}

}  // namespace syllo::testing
