#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "syllo/syntax.hpp"

namespace syllo {

// membership vector indexed by domain position
using ElemSet = std::vector<bool>;

class Structure {
 public:
  explicit Structure(std::vector<std::string> domain);

  size_t size() const { return domain_.size(); }
  const std::vector<std::string> &domain() const { return domain_; }
  int index(const std::string &name) const;  // -1 if absent

  // declares an atom with empty extension
  void declare_unary(const std::string &p);
  void declare_binary(const std::string &r);
  void add_unary(const std::string &p, const std::string &elem);
  void add_unary(const std::string &p, int i);
  void add_binary(const std::string &r, const std::string &a, const std::string &b);
  void add_binary(const std::string &r, int i, int j);

  bool in_unary(const std::string &p, int i) const;
  bool related(const std::string &r, int i, int j) const;

  const std::map<std::string, ElemSet> &unary_map() const { return unary_; }
  const std::map<std::string, std::vector<ElemSet>> &binary_map() const { return binary_; }
  Signature signature() const;

  bool operator==(const Structure &o) const;

 private:
  std::vector<std::string> domain_;
  std::map<std::string, int> index_;
  std::map<std::string, ElemSet> unary_;
  std::map<std::string, std::vector<ElemSet>> binary_;
};

ElemSet extension(const Structure &A, const ETerm &e);
bool in_extension(const Structure &A, const ETerm &e, int i);

struct TruthVerdict {
  bool holds = false;
  // witness for a true existential, counter-element for a false universal
  std::optional<int> element;
};

TruthVerdict satisfies(const Structure &A, const Formula &phi);
bool models(const Structure &A, const std::vector<Formula> &phis);

// canonical formulas of fragment f over sig true in A, sorted
std::vector<Formula> theory(const Structure &A, Fragment f, const Signature &sig);

// domains are kept apart by prefixing element names
Structure disjoint_union(const Structure &A, const Structure &B, const std::string &prefix_a = "a.",
                         const std::string &prefix_b = "b.");

struct ModelSearch {
  std::optional<Structure> model;  // smallest model within bound, if any
  int bound = 0;
  bool found() const { return model.has_value(); }
};

ModelSearch find_model(const std::vector<Formula> &theta, int max_size);

struct OracleVerdict {
  bool valid_within_bound = false;
  std::optional<Structure> countermodel;
  int bound = 0;
};

OracleVerdict oracle_valid(const std::vector<Formula> &theta, const Formula &goal, int max_size);

// naive enumeration of every structure up to max_size; test oracle for tiny signatures
ModelSearch brute_force_model(const std::vector<Formula> &theta, int max_size);

std::string print_structure(const Structure &A);
Structure parse_structure(const std::string &text);

}  // namespace syllo
