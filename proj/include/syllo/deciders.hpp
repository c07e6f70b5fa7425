#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "syllo/calculus.hpp"
#include "syllo/semantics.hpp"
#include "syllo/syntax.hpp"

namespace syllo {

class FragmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- S-dagger

struct ClosureEdge {
  UnaryLiteral from;
  Formula via;  // universal premise, or all(l,~l) when added by rule A
  bool by_a = false;
};

struct LiteralClosure {
  std::set<UnaryLiteral> base;
  std::set<UnaryLiteral> closure;
  std::map<UnaryLiteral, ClosureEdge> edges;  // base literals have no entry

  bool consistent() const;
};

// phi: universal S-dagger formulas; sig bounds rule A
LiteralClosure closure(const std::vector<Formula> &phi, const std::set<UnaryLiteral> &V, const Signature &sig);

// ---- R witness set

struct WitnessId {
  std::set<ETerm> V;
  int i = 0;
  auto operator<=>(const WitnessId &) const = default;
  bool operator==(const WitnessId &) const = default;
};

std::string witness_name(const WitnessId &w);

class WitnessSet {
 public:
  explicit WitnessSet(const std::vector<Formula> &gamma);

  const std::vector<WitnessId> &elements() const { return elements_; }
  int level(const WitnessId &w) const { return level_.at(w); }
  // b_{W,j} one level down with W => some(p,t), for elements above level 0
  struct Parent {
    WitnessId w;
    ETerm eterm;
  };
  const Parent &parent(const WitnessId &w) const { return parent_.at(w); }

  bool arrow(const ETerm &c, const ETerm &d) const;
  bool arrow(const std::set<ETerm> &V, const ETerm &d) const;
  // premise chain for p => d with p an atom and p != d: all(p,p1), ..., all(pk,d)
  std::vector<Formula> arrow_chain(const std::string &p, const ETerm &d) const;

  const std::vector<Formula> &gamma() const { return gamma_; }  // R-shaped representatives
  const Signature &signature() const { return sig_; }
  bool in_gamma(const Formula &phi) const;

  Structure structure() const;  // B with a dummy element when B is empty
  std::string element_label(const WitnessId &w) const;  // domain name in structure()

 private:
  std::vector<Formula> gamma_;
  std::set<Formula> canon_;
  Signature sig_;
  std::vector<WitnessId> elements_;
  std::map<WitnessId, int> level_;
  std::map<WitnessId, Parent> parent_;
  std::map<WitnessId, int> index_;
  // universal premises all(p, d) by left atom
  std::map<std::string, std::vector<ETerm>> univ_;
};

WitnessSet build_witness_set(const std::vector<Formula> &gamma);

struct ConditionCWitness {
  int case_no = 0;
  std::vector<WitnessId> elements;  // V, and W for case 4
  std::string q, o, r;
};

std::optional<ConditionCWitness> check_condition_C(const WitnessSet &B);

// refutation concluding some(p,~p), assembled from the case derivations
DerivationPtr condition_c_refutation(const WitnessSet &B, const ConditionCWitness &w);

// ---- verdicts

struct Verdict {
  enum Kind { Sat, Unsat, Unknown } kind = Unknown;
  std::optional<Structure> model;
  DerivationPtr refutation;
  std::string system;  // rule set name of the refutation
  std::optional<ConditionCWitness> condition_c;
  std::vector<std::string> element_legend;  // for condition-c output
  int bound = 0;  // Unknown and bounded Sat verdicts
  bool bounded = false;
};

struct ValidVerdict {
  enum Kind { Valid, Invalid, Unknown } kind = Unknown;
  DerivationPtr derivation;  // direct for S, S-dagger; indirect for R
  std::string system;        // rule set name of the derivation
  std::optional<Structure> countermodel;
  std::optional<ConditionCWitness> condition_c;
  std::vector<std::string> element_legend;
  int bound = 0;
  bool bounded = false;
};

Verdict decide_sdagger_sat(const std::vector<Formula> &theta);
ValidVerdict decide_sdagger_valid(const std::vector<Formula> &theta, const Formula &goal);

Verdict decide_r_sat(const std::vector<Formula> &gamma);
ValidVerdict decide_r_valid(const std::vector<Formula> &theta, const Formula &goal);

Verdict decide_star_sat(const std::vector<Formula> &gamma, int bound);
ValidVerdict decide_star_valid(const std::vector<Formula> &theta, const Formula &goal, int bound);

// 12 unless SYLLO_BOUND_CAP is set
int star_bound_cap();
int default_star_bound(const std::vector<Formula> &gamma, int cap);
int default_star_bound(const std::vector<Formula> &gamma);

// tightest fragment containing every formula, in the order Sd, R, then the bounded ones
std::optional<Fragment> tightest_fragment(const std::vector<Formula> &phis);

// bound <= 0 selects default_star_bound
Verdict decide(const std::vector<Formula> &gamma, int bound = 0, std::optional<Fragment> force = std::nullopt);
ValidVerdict decide_valid(const std::vector<Formula> &theta, const Formula &goal, int bound = 0,
                          std::optional<Fragment> force = std::nullopt);

std::string print_verdict(const Verdict &v);
std::string print_valid_verdict(const ValidVerdict &v);

}  // namespace syllo
