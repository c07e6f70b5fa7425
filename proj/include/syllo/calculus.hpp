#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "syllo/syntax.hpp"

namespace syllo {

enum class Sort { UnaryAtom, BinaryAtom, UnaryLiteral, BinaryLiteral, CTerm, PositiveCTerm, Formula };

std::string sort_name(Sort s);

struct MetaVar {
  std::string name;
  Sort sort;
};

using Value = std::variant<ETerm, BinaryLiteral, Formula>;
using Substitution = std::map<std::string, Value>;

bool value_has_sort(const Value &v, Sort s);
std::string print_value(const Value &v);

struct TermPattern {
  enum Kind { Var, Exists, Forall } kind = Var;
  std::string var;  // Var
  bool flip = false;
  std::string subject;  // quantified
  bool subject_flip = false;
  std::string verb;
  bool verb_flip = false;
};

struct FormulaPattern {
  enum Kind { Some, All, Var } kind = All;
  TermPattern left, right;
  std::string var;  // Var (rule X only)
  bool flip = false;
};

struct RuleSchema {
  std::string id;
  std::vector<MetaVar> vars;
  std::vector<FormulaPattern> antecedents;
  FormulaPattern consequent;

  const MetaVar *var(const std::string &name) const;
};

enum class RuleSetId { S, Sd, R, Rs };

std::string ruleset_name(RuleSetId id);
std::optional<RuleSetId> parse_ruleset(const std::string &s);

struct RuleSet {
  RuleSetId id;
  Fragment fragment;
  std::vector<RuleSchema> rules;

  const RuleSchema *find(const std::string &rule_id) const;
  bool has(const std::string &rule_id) const { return find(rule_id) != nullptr; }
};

const RuleSet &rule_set(RuleSetId id);
// same rule set restricted to the named rules
RuleSet restrict_rules(const RuleSet &rs, const std::vector<std::string> &ids);

class SortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  std::vector<Formula> antecedents;
  Formula consequent;
};

// canonicalised instance; throws SortError
Instance instantiate(const RuleSchema &rule, const Substitution &g);

struct Match {
  Substitution subst;
  Formula consequent;
  std::vector<Formula> antecedents;
};

// free consequent variables range over sig
std::vector<Match> match_rule(const RuleSchema &rule, const std::vector<Formula> &facts, const Signature &sig,
                              Fragment frag);

// ---- derivations

struct Derivation;
using DerivationPtr = std::shared_ptr<const Derivation>;

struct Derivation {
  enum Kind { Premise, RuleApp, Raa } kind = Premise;
  Formula conclusion;
  std::optional<int> label;  // Premise: discharge label; Raa: label
  std::string rule;
  Substitution subst;
  std::vector<DerivationPtr> children;

  bool is_direct() const;
  size_t node_count() const;
};

DerivationPtr make_premise(const Formula &phi, std::optional<int> label = std::nullopt);
DerivationPtr make_rule(const std::string &rule, Substitution g, std::vector<DerivationPtr> children,
                        const Formula &conclusion);
DerivationPtr make_raa(int label, DerivationPtr body, const Formula &conclusion);

// rule application whose conclusion is computed by instantiate
DerivationPtr apply_rule(const RuleSet &rs, const std::string &rule, Substitution g,
                         std::vector<DerivationPtr> children);

class CheckError : public std::runtime_error {
 public:
  enum Kind { UnknownRule, BadInstance, UndischargedPremise, BadDischarge, NotAbsurdity };
  CheckError(Kind k, const std::string &msg);
  Kind kind;
};

std::string check_error_name(CheckError::Kind k);

// returns the conclusion; throws CheckError
Formula check_derivation(const Derivation &d, const RuleSet &rs, const std::vector<Formula> &theta);

std::string print_derivation(const Derivation &d);
DerivationPtr parse_derivation(const std::string &text, const RuleSet &rs);

// ---- saturation

struct Justification {
  std::string rule;  // empty for premises
  Substitution subst;
  std::vector<Formula> antecedents;
  int round = 0;
};

struct Saturation {
  Signature sig;  // includes the reserved binary atom
  std::string fresh_binary;
  std::map<Formula, Justification> facts;  // canonical keys
  std::map<Formula, Formula> premise_text;  // canonical -> as given
  std::optional<std::pair<Formula, Formula>> contradiction;  // psi, bar(psi), when rule X applies
  int rounds = 0;

  bool contains(const Formula &phi) const;
  std::vector<Formula> formulas() const;
};

Saturation saturate(const std::vector<Formula> &theta, const RuleSet &rs, const Signature &extra = {});
std::vector<Formula> saturate_set(const std::vector<Formula> &theta, const RuleSet &rs);

DerivationPtr extract_derivation(const Saturation &sat, const Formula &phi);

// nullptr means not derivable
DerivationPtr derive(const std::vector<Formula> &theta, const Formula &goal, const RuleSet &rs);
DerivationPtr refute(const std::vector<Formula> &theta, const RuleSet &rs);

// wraps a refutation of theta + bar(goal) in one final raa; bar(goal) premises outside theta get the label
DerivationPtr close_by_raa(const DerivationPtr &refutation, const Formula &goal, const std::vector<Formula> &theta,
                           int label = 1);

std::string fresh_binary_name(const Signature &sig);

}  // namespace syllo
