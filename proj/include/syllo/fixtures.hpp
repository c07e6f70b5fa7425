#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "syllo/semantics.hpp"
#include "syllo/syntax.hpp"

namespace syllo {

class FixtureError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct ExpectedFact {
  std::string structure;
  Formula formula;
  bool truth = true;
};

struct FixtureBundle {
  std::string name;
  std::map<std::string, Structure> structures;
  std::map<std::string, std::vector<Formula>> formula_sets;
  std::vector<ExpectedFact> expected_facts;

  const Structure &structure(const std::string &s) const;
  const std::vector<Formula> &formulas(const std::string &s) const;
  // throws FixtureError naming the first failing fact
  void verify() const;
};

// ---- chain family over p1..pn, r

std::string chain_atom(int k);  // "p<k>"

struct GammaStar {
  std::vector<Formula> gamma;
  Formula goal;
};

GammaStar gamma_star_fixture(int n);

// Gamma, gamma, Delta_i and the countermodels A_i, B_ij, C_i, A''_i(j,k), A_0
FixtureBundle gamma_fixture(int n);

Structure gap_A(int n, int i);
Structure gap_B(int n, int i, int j);
Structure gap_C(int n, int i);
Structure gap_A2(int n, int i, int j, int k);  // A_i plus (p_j, p_k)
Structure gap_A0(int n);

struct CaseModel {
  int case_no = 0;  // 3..8
  Structure model;
};

// countermodel to phi among the Delta_i models; nullopt when phi lies in Gamma
std::optional<CaseModel> gap_countermodel(int n, int i, const Formula &phi);

// ---- twin chains: A(n) and B_i(n)

Signature twin_signature(int n);
Structure twin_A(int n);
Structure twin_B(int n, int i);
Formula twin_gamma();
Formula twin_delta(int i);
std::vector<Formula> twin_axioms(int n);  // axiom schemas instantiated for 1..n

// structures A and B_i (i defaults to 1), axioms, gamma, delta_i and Gamma(n) over the signature
FixtureBundle twin_fixture(int n, std::optional<int> i = std::nullopt);

// ---- modal logic K with the universal modality

struct KuFormula;
using KuPtr = std::shared_ptr<const KuFormula>;

struct KuFormula {
  enum Kind { Prop, And, Not, Box, Univ } kind = Prop;
  std::string name;  // Prop
  KuPtr a, b;

  static KuPtr prop(const std::string &p);
  static KuPtr conj(KuPtr x, KuPtr y);
  static KuPtr neg(KuPtr x);
  static KuPtr box(KuPtr x);
  static KuPtr univ(KuPtr x);
};

// prefix form: p, not(x), and(x,y), box(x), univ(x)
std::string print_ku(const KuFormula &phi);
KuPtr parse_ku(const std::string &text);
int ku_depth(const KuFormula &phi);

struct KuTranslation {
  std::vector<Formula> formulas;
  std::map<std::string, std::string> atom_of;  // printed subformula -> unary atom
  std::string top;                             // atom of the whole formula
  std::vector<std::string> fresh_binaries;     // r_theta atoms in traversal order
};

inline const std::string kKuAccess = "r";
inline const std::string kKuUniversal = "e";
inline const std::string kKuStar = "ostar";

KuTranslation ku_translate_full(const KuFormula &phi);
std::vector<Formula> ku_translate(const KuFormula &phi);

struct KripkeModel {
  int worlds = 0;
  std::vector<std::vector<bool>> access;
  std::map<std::string, std::vector<bool>> val;
};

bool kripke_holds(const KripkeModel &M, const KuFormula &phi, int w);
// brute force over all models with at most max_worlds worlds
std::optional<KripkeModel> kripke_model(const KuFormula &phi, int max_worlds);
// frame (A, r) with p true where p_p holds
KripkeModel kripke_from_structure(const Structure &A, const KuTranslation &t, const KuFormula &phi);

// every formula over one letter with tree depth <= d
std::vector<KuPtr> ku_enumerate(const std::string &p, int d);

}  // namespace syllo
